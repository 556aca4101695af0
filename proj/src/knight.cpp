#include "forge/knight.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/iso.hpp"
#include "forge/signature.hpp"

namespace forge {

namespace {

std::string idList(const std::vector<int>& v) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "}";
  return os.str();
}

std::string idList(const std::set<int>& v) {
  return idList(std::vector<int>(v.begin(), v.end()));
}

void requirePreset(const Structure& s, const std::string& name) {
  if (!(s.signature() == presetSignature(name)))
    throw SignatureError("expected signature preset '" + name + "'");
}

// Shared g/G axiom audit over the (X,Y,g,G) part of s. Callers guarantee
// the relations exist with the knight profiles.
void auditCore(const Structure& s, Verdict& v) {
  const auto& xs = s.sortElements("X");
  const auto& ys = s.order("Y");

  // g as a partial map, with functionality and bound violations collected.
  std::map<std::pair<int, int>, std::set<int>> gVals;
  for (const auto& t : s.tuples("g")) gVals[{t[0], t[1]}].insert(t[2]);
  std::map<std::pair<int, int>, int> g;
  for (const auto& [key, vals] : gVals) {
    if (vals.size() > 1) {
      v.fail("g-not-single-valued",
             "g(" + std::to_string(key.first) + "," +
                 std::to_string(key.second) + ") has " +
                 std::to_string(vals.size()) + " values " + idList(vals));
      continue;
    }
    int z = *vals.begin();
    g[key] = z;
    if (!s.orderLeq("Y", z, key.second))
      v.fail("g-above-argument",
             "g(" + std::to_string(key.first) + "," +
                 std::to_string(key.second) + ") = " + std::to_string(z) +
                 " lies above " + std::to_string(key.second));
  }
  for (int x : xs)
    for (int y : ys)
      if (!gVals.count({x, y}))
        v.fail("g-not-total", "g(" + std::to_string(x) + "," +
                                  std::to_string(y) + ") undefined");

  // Surjectivity of g(.,y) onto {z : z <= y}. A missing preimage of y
  // itself is reported even when X is empty, which rejects structures with
  // Y nonempty but X empty.
  std::map<std::pair<int, int>, std::set<int>> fibers;
  for (const auto& [key, z] : g) fibers[{key.second, z}].insert(key.first);
  for (size_t j = 0; j < ys.size(); ++j)
    for (size_t i = 0; i <= j; ++i)
      if (!fibers.count({ys[j], ys[i]}))
        v.fail("g-not-onto", "no x with g(x," + std::to_string(ys[j]) +
                                 ") = " + std::to_string(ys[i]));

  // Graded naming. Group stored G tuples by (y,z) tail.
  std::map<std::pair<int, int>, std::set<std::vector<int>>> named;
  for (const auto& t : s.tuples("G")) {
    std::vector<int> head(t.begin(), t.end() - 2);
    int y = t[t.size() - 2], z = t[t.size() - 1];
    std::set<int> headSet(head.begin(), head.end());
    if (headSet.size() != head.size())
      v.fail("graded-args-repeat", "G tuple " + idList(t) + " repeats an x");
    if (z == y)
      v.fail("graded-diagonal",
             "G tuple " + idList(t) + " names the fiber of z = y");
    else if (!s.orderLess("Y", z, y))
      v.fail("graded-above", "G tuple " + idList(t) + " has z above y");
    for (int x : head) {
      auto it = g.find({x, y});
      if (it == g.end() || it->second != z)
        v.fail("graded-member-wrong",
               "G tuple " + idList(t) + " lists x = " + std::to_string(x) +
                   " but g(x,y) != z");
    }
    if (headSet.size() == head.size()) {
      auto fit = fibers.find({y, z});
      if (fit != fibers.end())
        for (int w : fit->second)
          if (!headSet.count(w))
            v.fail("graded-member-missing",
                   "G tuple " + idList(t) + " omits x = " + std::to_string(w) +
                       " with g(x,y) = z");
      std::vector<int> perm = head;
      std::sort(perm.begin(), perm.end());
      do {
        std::vector<int> other = perm;
        other.push_back(y);
        other.push_back(z);
        if (!s.hasTuple("G", other))
          v.fail("graded-not-permutation-closed",
                 "G tuple " + idList(t) + " present but " + idList(other) +
                     " missing");
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    named[{y, z}].insert(head);
  }

  // Every fiber below the diagonal must be named by some tuple.
  for (const auto& [key, fib] : fibers) {
    auto [y, z] = key;
    if (z == y) continue;
    if (!s.orderLess("Y", z, y)) continue;  // already reported above
    if (!named.count({y, z}))
      v.fail("fiber-unnamed", "fiber " + idList(fib) + " of (y,z) = (" +
                                  std::to_string(y) + "," +
                                  std::to_string(z) + ") has no G tuple");
  }
}

}  // namespace

Verdict checkK0(const Structure& s) {
  requirePreset(s, "knight");
  Verdict v;
  auditCore(s, v);
  return v;
}

Verdict checkK1(const Structure& s) {
  requirePreset(s, "knight-u");
  Verdict v;
  auditCore(s, v);

  std::map<int, std::set<int>> pVals;
  for (const auto& t : s.tuples("P")) pVals[t[0]].insert(t[1]);
  for (const auto& [x, vals] : pVals)
    if (vals.size() > 1)
      v.fail("p-not-single-valued", "P(" + std::to_string(x) + ") has " +
                                        std::to_string(vals.size()) +
                                        " values " + idList(vals));
  for (int x : s.sortElements("X"))
    if (!pVals.count(x))
      v.fail("p-not-total", "P(" + std::to_string(x) + ") undefined");
  return v;
}

Verdict checkRelativized(const Structure& s) {
  requirePreset(s, "knight-q");
  Verdict v;
  auditCore(s, v);

  // Q must be downward closed in the Y order.
  std::set<int> q;
  for (const auto& t : s.tuples("Q")) q.insert(t[0]);
  bool seenNonQ = false;
  for (int y : s.order("Y")) {
    if (!q.count(y))
      seenNonQ = true;
    else if (seenNonQ) {
      v.fail("q-not-initial", "Q holds at " + std::to_string(y) +
                                  " but fails at an element below it");
      break;
    }
  }
  return v;
}

Verdict checkMembership(const Structure& s) {
  const std::string name = presetName(s.signature()).value_or("");
  if (name == "knight") return checkK0(s);
  if (name == "knight-u") return checkK1(s);
  if (name == "knight-q") return checkRelativized(s);
  throw SignatureError("no membership checker for this signature");
}

Structure padX(const Structure& a, int m) {
  const std::string name = presetName(a.signature()).value_or("");
  if (name != "knight" && name != "knight-q")
    throw SignatureError("padX supports 'knight' and 'knight-q' structures");
  if (m < 0) throw PreconditionError("padX: negative count");

  Structure::Builder b(a);
  int next = a.maxId() + 1;
  for (int i = 0; i < m; ++i, ++next) {
    b.addElement(next, "X");
    for (int y : a.order("Y")) b.addTuple("g", {next, y, y});
  }
  return b.build();
}

KnightView::KnightView(const Structure& s) : s_(&s) {
  xs_ = s.sortElements("X");
  ys_ = s.order("Y");
  for (const auto& t : s.tuples("g")) {
    gMap_[{t[0], t[1]}] = t[2];
    fibers_[{t[1], t[2]}].insert(t[0]);
  }
}

std::optional<int> KnightView::g(int x, int y) const {
  auto it = gMap_.find({x, y});
  if (it == gMap_.end()) return std::nullopt;
  return it->second;
}

int KnightView::gAt(int x, int y) const {
  auto it = gMap_.find({x, y});
  if (it == gMap_.end())
    throw PreconditionError("g(" + std::to_string(x) + "," +
                            std::to_string(y) + ") undefined");
  return it->second;
}

const std::set<int>& KnightView::fiber(int y, int z) const {
  auto it = fibers_.find({y, z});
  if (it == fibers_.end()) return empty_;
  return it->second;
}

namespace {

// Appends every G tuple naming the fibers of the given g table.
void addDerivedGrades(Structure::Builder& b,
                      const std::map<std::pair<int, int>, int>& g,
                      const std::vector<int>& ysInOrder) {
  std::map<std::pair<int, int>, std::vector<int>> fibers;
  for (const auto& [key, z] : g) fibers[{key.second, z}].push_back(key.first);
  std::map<int, int> rank;
  for (size_t i = 0; i < ysInOrder.size(); ++i) rank[ysInOrder[i]] = int(i);
  for (auto& [key, fib] : fibers) {
    auto [y, z] = key;
    if (rank[z] >= rank[y]) continue;
    std::sort(fib.begin(), fib.end());
    do {
      std::vector<int> t = fib;
      t.push_back(y);
      t.push_back(z);
      b.addTuple("G", t);
    } while (std::next_permutation(fib.begin(), fib.end()));
  }
}

}  // namespace

std::vector<Structure> enumerateKnightStructures(int maxX, int maxY) {
  const Signature sig = *presetSignature("knight");
  std::vector<Structure> out;
  std::set<std::string> seen;

  for (int nx = 0; nx <= maxX; ++nx) {
    for (int ny = 0; ny <= maxY; ++ny) {
      std::vector<int> xs(nx), ys(ny);
      std::iota(xs.begin(), xs.end(), 0);
      std::iota(ys.begin(), ys.end(), nx);

      // Odometer over g tables: g(x, ys[j]) ranges over ys[0..j].
      std::vector<int> digit(size_t(nx) * ny, 0);
      bool more = true;
      while (more) {
        std::map<std::pair<int, int>, int> g;
        for (int i = 0; i < nx; ++i)
          for (int j = 0; j < ny; ++j)
            g[{xs[i], ys[j]}] = ys[digit[size_t(i) * ny + j]];

        bool onto = true;
        for (int j = 0; j < ny && onto; ++j)
          for (int i = 0; i <= j && onto; ++i) {
            bool hit = false;
            for (int x = 0; x < nx && !hit; ++x)
              if (g[{xs[x], ys[j]}] == ys[i]) hit = true;
            if (!hit) onto = false;
          }

        if (onto) {
          Structure::Builder b(sig);
          for (int x : xs) b.addElement(x, "X");
          for (int y : ys) b.addElement(y, "Y");
          for (const auto& [key, z] : g)
            b.addTuple("g", {key.first, key.second, z});
          addDerivedGrades(b, g, ys);
          b.setOrder("Y", ys);
          Structure s = b.build();
          if (seen.insert(canonicalKey(s)).second) out.push_back(s);
        }

        // Advance the odometer; digit (i,j) counts up to j.
        more = false;
        for (size_t k = digit.size(); k-- > 0;) {
          int j = int(k % ny);
          if (digit[k] < j) {
            ++digit[k];
            std::fill(digit.begin() + k + 1, digit.end(), 0);
            more = true;
            break;
          }
        }
        if (digit.empty()) break;
      }
    }
  }
  return out;
}

std::vector<Structure> enumerateClassStructures(const std::string& preset,
                                                int maxPerSort) {
  if (preset == "knight")
    return enumerateKnightStructures(maxPerSort, maxPerSort);
  std::vector<Structure> out;
  std::set<std::string> seen;
  for (const Structure& base :
       enumerateKnightStructures(maxPerSort, maxPerSort)) {
    const auto& xs = base.sortElements("X");
    const auto& ys = base.order("Y");
    if (preset == "knight-q") {
      const Signature sig = *presetSignature("knight-q");
      for (size_t qCount = 0; qCount <= ys.size(); ++qCount) {
        Structure::Builder b(sig);
        for (int e : base.allElements()) b.addElement(e, base.sortOf(e));
        for (const auto& t : base.tuples("g")) b.addTuple("g", t);
        for (const auto& t : base.tuples("G")) b.addTuple("G", t);
        b.setOrder("Y", ys);
        for (size_t i = 0; i < qCount; ++i) b.addTuple("Q", {ys[i]});
        Structure s = b.build();
        if (seen.insert(canonicalKey(s)).second) out.push_back(s);
      }
    } else if (preset == "knight-u") {
      const Signature sig = *presetSignature("knight-u");
      const int firstU = base.maxId() + 1;
      for (int nu = 0; nu <= maxPerSort; ++nu) {
        if (!xs.empty() && nu == 0) continue;  // P needs a target
        // Odometer over projections X -> U.
        std::vector<int> digit(xs.size(), 0);
        bool more = true;
        while (more) {
          Structure::Builder b(sig);
          for (int e : base.allElements()) b.addElement(e, base.sortOf(e));
          for (const auto& t : base.tuples("g")) b.addTuple("g", t);
          for (const auto& t : base.tuples("G")) b.addTuple("G", t);
          b.setOrder("Y", ys);
          for (int u = 0; u < nu; ++u) b.addElement(firstU + u, "U");
          for (size_t i = 0; i < xs.size(); ++i)
            b.addTuple("P", {xs[i], firstU + digit[i]});
          Structure s = b.build();
          if (seen.insert(canonicalKey(s)).second) out.push_back(s);

          more = false;
          for (size_t k = digit.size(); k-- > 0;) {
            if (digit[k] + 1 < nu) {
              ++digit[k];
              std::fill(digit.begin() + k + 1, digit.end(), 0);
              more = true;
              break;
            }
          }
        }
      }
    } else {
      throw SignatureError("no structure enumeration for preset '" + preset +
                           "'");
    }
  }
  return out;
}

std::vector<GoodPair> enumerateGoodPairs(const std::string& preset,
                                         int maxPerSort) {
  std::vector<GoodPair> out;
  std::set<std::string> seen;
  for (const Structure& big : enumerateClassStructures(preset, maxPerSort)) {
    const auto elems = big.allElements();
    const size_t n = elems.size();
    if (n > 20)
      throw GuardExceeded("good-pair-subsets",
                          "refusing to enumerate subsets of a " +
                              std::to_string(n) + "-element structure");
    for (unsigned mask = 0; mask + 1 < (1u << n); ++mask) {
      std::vector<int> keep;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) keep.push_back(elems[i]);
      Structure small = big.restrictToElements(keep);
      if (!checkMembership(small).ok) continue;

      int dx = int(big.sortElements("X").size()) -
               int(small.sortElements("X").size());
      int dy = int(big.sortElements("Y").size()) -
               int(small.sortElements("Y").size());
      if (dx < dy) continue;
      if (!Embedding::inclusion(small, big).validate().ok) continue;
      if (seen.insert(canonicalPairKey(big, keep)).second)
        out.push_back({small, big});
    }
  }
  // Guests rich in the ordered sort come first (leaner X breaking ties), so
  // a scheduler serving pairs in this order grows the Y skeleton before
  // piling on X filler; tiny budgets then still exercise both sorts.
  std::stable_sort(out.begin(), out.end(),
                   [](const GoodPair& a, const GoodPair& b) {
                     const int ay = a.big.sortCount("Y");
                     const int by = b.big.sortCount("Y");
                     if (ay != by) return ay > by;
                     return a.big.sortCount("X") < b.big.sortCount("X");
                   });
  return out;
}

}  // namespace forge
