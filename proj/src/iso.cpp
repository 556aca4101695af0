#include "forge/iso.hpp"

#include <algorithm>
#include <set>

#include "forge/errors.hpp"

namespace forge {

namespace {

// Per-element index of the tuples that mention it.
struct TupleIndex {
  // element id -> list of (relation name, tuple)
  std::map<int, std::vector<std::pair<const std::string*, const std::vector<int>*>>>
      touching;

  explicit TupleIndex(const Structure& s) {
    for (const auto& rel : s.signature().relations) {
      for (const auto& t : s.tuples(rel.name)) {
        std::set<int> seen;
        for (int e : t)
          if (seen.insert(e).second)
            touching[e].push_back({&rel.name, &t});
      }
    }
  }
};

class Backtracker {
 public:
  Backtracker(const Structure& src, const Structure& tgt,
              const EmbeddingSearch& search)
      : src_(src), tgt_(tgt), search_(search), srcIndex_(src), tgtIndex_(tgt) {
    // Fixed assignments first (no branching, so their tuples prune every
    // later choice), then ordered-sort elements: they constrain each other
    // the most. Stable, so id order breaks ties.
    order_ = src_.allElements();
    auto rank = [&](int e) {
      if (search_.fixed.count(e)) return 0;
      return src_.signature().isOrdered(src_.sortOf(e)) ? 1 : 2;
    };
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return rank(a) < rank(b); });
  }

  std::vector<Embedding> run() {
    for (const auto& [e, t] : search_.fixed) {
      if (!src_.hasElement(e))
        throw PreconditionError("fixed assignment names unknown source element " +
                                std::to_string(e));
      if (!tgt_.hasElement(t))
        throw PreconditionError("fixed assignment names unknown target element " +
                                std::to_string(t));
    }
    extend(0);
    std::sort(results_.begin(), results_.end(),
              [](const Embedding& a, const Embedding& b) {
                auto va = mapVector(a), vb = mapVector(b);
                return va < vb;
              });
    return std::move(results_);
  }

 private:
  static std::vector<int> mapVector(const Embedding& e) {
    std::vector<int> v;
    v.reserve(e.map.size());
    for (const auto& [s, t] : e.map) v.push_back(t);
    return v;
  }

  bool admissible(int e, int t) {
    if (src_.sortOf(e) != tgt_.sortOf(t)) return false;
    if (used_.count(t)) return false;
    const std::string& sort = src_.sortOf(e);
    if (src_.signature().isOrdered(sort)) {
      for (const auto& [e2, t2] : cur_) {
        if (src_.sortOf(e2) != sort) continue;
        if (src_.orderLess(sort, e, e2) != tgt_.orderLess(sort, t, t2))
          return false;
      }
    }
    // Every source tuple through e that is now fully assigned must land on
    // a target tuple.
    auto it = srcIndex_.touching.find(e);
    if (it != srcIndex_.touching.end()) {
      for (const auto& [relName, tuple] : it->second) {
        std::vector<int> image;
        image.reserve(tuple->size());
        bool complete = true;
        for (int x : *tuple) {
          if (x == e) {
            image.push_back(t);
            continue;
          }
          auto jt = cur_.find(x);
          if (jt == cur_.end()) {
            complete = false;
            break;
          }
          image.push_back(jt->second);
        }
        if (complete && !tgt_.hasTuple(*relName, image)) return false;
      }
    }
    return true;
  }

  // No target tuple over the image may lack a source preimage.
  bool reverseClean() {
    std::map<int, int> inverse;
    for (const auto& [e, t] : cur_) inverse[t] = e;
    for (const auto& [t, e] : inverse) {
      auto it = tgtIndex_.touching.find(t);
      if (it == tgtIndex_.touching.end()) continue;
      for (const auto& [relName, tuple] : it->second) {
        std::vector<int> pre;
        pre.reserve(tuple->size());
        bool inside = true;
        for (int x : *tuple) {
          auto jt = inverse.find(x);
          if (jt == inverse.end()) {
            inside = false;
            break;
          }
          pre.push_back(jt->second);
        }
        if (inside && !src_.hasTuple(*relName, pre)) return false;
      }
    }
    return true;
  }

  void extend(std::size_t pos) {
    if (results_.size() >= search_.maxResults) return;
    if (pos == order_.size()) {
      if (reverseClean()) results_.push_back(Embedding{src_, tgt_, cur_});
      return;
    }
    int e = order_[pos];
    auto fixedIt = search_.fixed.find(e);
    const auto& candidates = tgt_.sortElements(src_.sortOf(e));
    for (int t : candidates) {
      if (fixedIt != search_.fixed.end() && fixedIt->second != t) continue;
      if (++nodes_ > search_.nodeGuard)
        throw GuardExceeded("embedding-search",
                            "embedding search exceeded " +
                                std::to_string(search_.nodeGuard) + " nodes");
      if (!admissible(e, t)) continue;
      cur_[e] = t;
      used_.insert(t);
      extend(pos + 1);
      cur_.erase(e);
      used_.erase(t);
      if (results_.size() >= search_.maxResults) return;
    }
  }

  const Structure& src_;
  const Structure& tgt_;
  const EmbeddingSearch& search_;
  TupleIndex srcIndex_;
  TupleIndex tgtIndex_;
  std::vector<int> order_;
  std::map<int, int> cur_;
  std::set<int> used_;
  std::vector<Embedding> results_;
  std::int64_t nodes_ = 0;
};

}  // namespace

std::vector<Embedding> findEmbeddings(const Structure& source,
                                      const Structure& target,
                                      const EmbeddingSearch& search) {
  if (!(source.signature() == target.signature()))
    throw PreconditionError("embedding search requires equal signatures");
  Backtracker bt(source, target, search);
  return bt.run();
}

std::optional<Embedding> findEmbedding(const Structure& source,
                                       const Structure& target,
                                       const EmbeddingSearch& search) {
  EmbeddingSearch one = search;
  one.maxResults = 1;
  auto all = findEmbeddings(source, target, one);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::optional<Embedding> isomorphic(const Structure& a, const Structure& b) {
  if (!(a.signature() == b.signature()))
    throw PreconditionError("isomorphism check requires equal signatures");
  for (const auto& s : a.signature().sorts)
    if (a.sortCount(s) != b.sortCount(s)) return std::nullopt;
  // An embedding between equinumerous structures is onto, hence an
  // isomorphism.
  return findEmbedding(a, b);
}

std::vector<Embedding> automorphisms(const Structure& a, const Limits& limits) {
  if (a.elementCount() > limits.elementGuard)
    throw GuardExceeded("element-guard",
                        "automorphism search refused: " +
                            std::to_string(a.elementCount()) +
                            " elements exceed the guard of " +
                            std::to_string(limits.elementGuard));
  EmbeddingSearch search;
  search.nodeGuard = limits.nodeGuard;
  auto all = findEmbeddings(a, a, search);
  // Lexicographically least is the identity, so it already comes first.
  return all;
}

Structure substructureGeneratedBy(const Structure& a,
                                  const std::vector<int>& seed,
                                  const std::vector<std::string>& closureOps,
                                  const Limits& limits) {
  (void)limits;  // closure can never exceed |a|
  for (int e : seed)
    if (!a.hasElement(e))
      throw PreconditionError("seed element " + std::to_string(e) +
                              " is not in the structure");
  std::vector<const RelationSymbol*> ops;
  for (const auto& name : closureOps) {
    const RelationSymbol* rel = a.signature().relation(name);
    if (!rel) throw PreconditionError("unknown closure relation: " + name);
    if (rel->graded)
      throw PreconditionError("graded relation " + name +
                              " cannot be read as a function");
    if (rel->profile.size() < 2)
      throw PreconditionError("relation " + name +
                              " has no argument positions to close under");
    ops.push_back(rel);
  }

  std::set<int> closed(seed.begin(), seed.end());
  bool grew = true;
  while (grew) {
    grew = false;
    for (const RelationSymbol* rel : ops) {
      for (const auto& t : a.tuples(rel->name)) {
        bool argsIn = true;
        for (std::size_t i = 0; i + 1 < t.size(); ++i)
          if (!closed.count(t[i])) {
            argsIn = false;
            break;
          }
        if (argsIn && closed.insert(t.back()).second) grew = true;
      }
    }
  }
  return a.restrictToElements(std::vector<int>(closed.begin(), closed.end()));
}

namespace {

std::string relabeledKey(const Structure& a, const std::vector<int>& elems,
                         const std::vector<int>& labels) {
  std::map<int, int> label;
  for (std::size_t i = 0; i < elems.size(); ++i) label[elems[i]] = labels[i];

  std::string key;
  key.reserve(256);
  for (const auto& s : a.signature().sorts) key += s + " ";
  for (const auto& r : a.signature().relations) key += r.name + " ";
  for (const auto& s : a.signature().orderedSorts) key += s + " ";
  key += "#";
  for (const auto& s : a.signature().sorts) {
    key += "s ";
    std::vector<int> ids;
    for (int e : a.sortElements(s)) ids.push_back(label[e]);
    std::sort(ids.begin(), ids.end());
    for (int v : ids) key += std::to_string(v) + ",";
    key += ";";
  }
  for (const auto& r : a.signature().relations) {
    key += "r ";
    std::set<std::vector<int>> relabeled;
    for (const auto& t : a.tuples(r.name)) {
      std::vector<int> nt;
      nt.reserve(t.size());
      for (int e : t) nt.push_back(label[e]);
      relabeled.insert(std::move(nt));
    }
    for (const auto& t : relabeled) {
      for (int v : t) key += std::to_string(v) + ",";
      key += "|";
    }
    key += ";";
  }
  for (const auto& s : a.signature().orderedSorts) {
    key += "o ";
    for (int e : a.order(s)) key += std::to_string(label[e]) + ",";
    key += ";";
  }
  return key;
}

std::string minimalKey(const Structure& a, const std::vector<int>& subIds,
                       bool withSub, const Limits& limits) {
  int cap = std::min(limits.elementGuard, 8);
  if (a.elementCount() > cap)
    throw GuardExceeded("canonical-key",
                        "canonical key refused: " +
                            std::to_string(a.elementCount()) +
                            " elements exceed the cap of " +
                            std::to_string(cap));
  std::vector<int> elems = a.allElements();
  std::vector<int> labels(elems.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i);

  std::map<int, int> pos;
  for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);

  std::string best;
  bool first = true;
  do {
    std::string key = relabeledKey(a, elems, labels);
    if (withSub) {
      key += "p ";
      std::vector<int> subLabels;
      for (int e : subIds) subLabels.push_back(labels[pos.at(e)]);
      std::sort(subLabels.begin(), subLabels.end());
      for (int v : subLabels) key += std::to_string(v) + ",";
    }
    if (first || key < best) {
      best = std::move(key);
      first = false;
    }
  } while (std::next_permutation(labels.begin(), labels.end()));
  return best;
}

}  // namespace

std::string canonicalKey(const Structure& a, const Limits& limits) {
  return minimalKey(a, {}, false, limits);
}

std::string canonicalPairKey(const Structure& whole,
                             const std::vector<int>& subIds,
                             const Limits& limits) {
  for (int e : subIds)
    if (!whole.hasElement(e))
      throw PreconditionError("pair key: element " + std::to_string(e) +
                              " is not in the structure");
  return minimalKey(whole, subIds, true, limits);
}

}  // namespace forge
