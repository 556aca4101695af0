#include "forge/generic.hpp"

#include <algorithm>
#include <deque>

#include "forge/errors.hpp"
#include "forge/iso.hpp"
#include "forge/signature.hpp"

namespace forge {

namespace {

std::string knightTagOf(const Structure& s) {
  const std::string tag = presetName(s.signature()).value_or("");
  if (tag != "knight" && tag != "knight-q" && tag != "knight-u")
    throw SignatureError("expected a core-class structure");
  return tag;
}

}  // namespace

Chain buildGenericChain(const Structure& seedStructure,
                        const ScheduleBudget& budget, std::uint64_t seed,
                        const Limits& limits) {
  if (budget.maxGuestSize <= 0 || budget.steps < 0 || budget.repetitions <= 0)
    throw PreconditionError("budget values must be positive");
  const std::string tag = knightTagOf(seedStructure);
  Verdict sv = checkMembership(seedStructure);
  if (!sv.ok)
    throw PreconditionError("seed structure fails its class checker: " +
                            sv.violations.front().kind);

  // The amalgamation step is order sensitive, so the service schedule is
  // canonical: pairs in enumeration order, embeddings in lexicographic order,
  // first discovered first served.  Runs with different seeds therefore build
  // the same chain, which is what makes independent runs comparable; the seed
  // is kept in the signature and recorded by callers for provenance only.
  (void)seed;
  const std::vector<GoodPair> pairs =
      enumerateGoodPairs(tag, budget.maxGuestSize);

  struct Item {
    int pairIdx;
    std::map<int, int> copy;
    int served = 0;
  };
  std::deque<Item> queue;
  std::set<std::vector<int>> known;
  auto keyOf = [](int pairIdx, const std::map<int, int>& copy) {
    std::vector<int> key{pairIdx};
    for (const auto& [a, b] : copy) {
      key.push_back(a);
      key.push_back(b);
    }
    return key;
  };

  Chain chain;
  chain.classTag = tag;
  chain.stages.push_back(seedStructure);

  auto discover = [&](const Structure& stage) {
    for (int pairIdx = 0; pairIdx < int(pairs.size()); ++pairIdx) {
      EmbeddingSearch search;
      search.nodeGuard = limits.nodeGuard;
      for (const Embedding& e :
           findEmbeddings(pairs[pairIdx].small, stage, search))
        if (known.insert(keyOf(pairIdx, e.map)).second)
          queue.push_back({pairIdx, e.map, 0});
    }
  };
  discover(seedStructure);

  while (int(chain.stages.size()) - 1 < budget.steps && !queue.empty()) {
    Item item = queue.front();
    queue.pop_front();
    chain = appendAmalgamStage(std::move(chain), pairs[item.pairIdx].small,
                               pairs[item.pairIdx].big, item.copy);
    if (++item.served < budget.repetitions) queue.push_back(item);
    discover(chain.finalStage());
  }
  return chain;
}

RichnessReport richnessCertificate(const Chain& c, int pairBound,
                                   const Limits& limits) {
  RichnessReport report;
  if (c.stages.empty()) throw PreconditionError("chain has no stages");
  if (pairBound <= 0) return report;
  const std::string tag = knightTagOf(c.stages.front());
  report.pairs = enumerateGoodPairs(tag, pairBound);

  std::map<int, int> firstSeen;
  for (size_t i = 0; i < c.stages.size(); ++i)
    for (int e : c.stages[i].allElements()) firstSeen.emplace(e, int(i));

  const Structure& fin = c.finalStage();
  const int last = int(c.stages.size()) - 1;
  std::vector<char> pairHasCopy(report.pairs.size(), 0);
  std::vector<char> pairServed(report.pairs.size(), 0);

  for (size_t pi = 0; pi < report.pairs.size(); ++pi) {
    const GoodPair& pair = report.pairs[pi];
    EmbeddingSearch all;
    all.nodeGuard = limits.nodeGuard;
    for (const Embedding& e : findEmbeddings(pair.small, fin, all)) {
      pairHasCopy[pi] = 1;
      int first = 0;
      for (const auto& [k, v] : e.map)
        first = std::max(first, firstSeen.at(v));

      auto servedAt = [&](int j) {
        EmbeddingSearch search;
        search.fixed = e.map;
        search.maxResults = 1;
        search.nodeGuard = limits.nodeGuard;
        return findEmbedding(pair.big, c.stages[j], search).has_value();
      };
      int served = -1;
      if (servedAt(first)) {
        served = first;
      } else if (last > first && servedAt(last)) {
        int lo = first + 1, hi = last;
        while (lo < hi) {
          int mid = lo + (hi - lo) / 2;
          if (servedAt(mid))
            hi = mid;
          else
            lo = mid + 1;
        }
        served = lo;
      }
      if (served >= 0)
        pairServed[pi] = 1;
      else
        report.allCopiesServed = false;
      report.copies.push_back({int(pi), e.map, first, served});
    }
  }
  for (size_t pi = 0; pi < report.pairs.size(); ++pi)
    if (!pairServed[pi]) report.allPairsServed = false;
  (void)pairHasCopy;
  return report;
}

HomogeneityReport homogeneityCheck(const Chain& c, int partBound,
                                   bool strictStage, const Limits& limits) {
  HomogeneityReport report;
  if (c.stages.empty()) throw PreconditionError("chain has no stages");
  const std::string tag = knightTagOf(c.stages.front());
  std::vector<std::string> closureOps = {"g"};
  if (tag == "knight-u") closureOps.push_back("P");

  std::int64_t seedBudget = limits.copyGuard;
  for (size_t i = 0; i < c.stages.size(); ++i) {
    const Structure& stage = c.stages[i];
    const auto elems = stage.allElements();
    const size_t n = elems.size();

    // Substructures generated by up to partBound elements, kept when the
    // closure stays within the bound; deduplicated by element set.
    std::set<std::vector<int>> parts;
    std::vector<int> pick;
    auto expand = [&](auto&& self, size_t from) -> void {
      if (!pick.empty()) {
        if (--seedBudget < 0)
          throw GuardExceeded("homogeneity-parts",
                              "part enumeration exceeded " +
                                  std::to_string(limits.copyGuard) +
                                  " seed subsets");
        Structure sub = substructureGeneratedBy(stage, pick, closureOps,
                                                limits);
        if (sub.elementCount() <= partBound) parts.insert(sub.allElements());
      }
      if (int(pick.size()) >= partBound) return;
      for (size_t k = from; k < n; ++k) {
        pick.push_back(elems[k]);
        self(self, k + 1);
        pick.pop_back();
      }
    };
    expand(expand, 0);

    std::vector<Structure> subs;
    for (const auto& ids : parts) subs.push_back(stage.restrictToElements(ids));

    for (const Structure& from : subs) {
      for (const Structure& to : subs) {
        if (from.elementCount() != to.elementCount()) continue;
        EmbeddingSearch isoSearch;
        isoSearch.nodeGuard = limits.nodeGuard;
        for (const Embedding& iso : findEmbeddings(from, to, isoSearch)) {
          EmbeddingSearch extend;
          extend.fixed = iso.map;
          extend.maxResults = 1;
          extend.nodeGuard = limits.nodeGuard;
          int extendedAt = -1;
          const size_t lastStage = strictStage ? i : c.stages.size() - 1;
          for (size_t j = i; j <= lastStage; ++j) {
            if (findEmbedding(stage, c.stages[j], extend)) {
              extendedAt = int(j);
              break;
            }
          }
          HomogeneityItem item;
          item.stage = int(i);
          item.domain = from.allElements();
          for (int e : item.domain) item.image.push_back(iso.map.at(e));
          item.extendedAtStage = extendedAt;
          if (extendedAt == -1) report.allExtend = false;
          report.items.push_back(std::move(item));
        }
      }
    }
  }
  return report;
}

}  // namespace forge
