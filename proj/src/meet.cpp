#include "forge/meet.hpp"

#include <algorithm>

#include "forge/errors.hpp"
#include "forge/signature.hpp"

namespace forge {

namespace {

void requireMeetSignature(const Structure& m) {
  if (!(m.signature() == *presetSignature("meet")))
    throw SignatureError("expected signature preset 'meet'");
}

std::string triple(int a, int b, int c) {
  return "points (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
         std::to_string(c) + ")";
}

}  // namespace

Verdict checkMeetLaw(const Structure& m) {
  requireMeetSignature(m);
  Verdict v;

  std::map<std::pair<int, int>, int> f;
  for (const auto& t : m.tuples("f")) {
    if (t[0] == t[1]) {
      v.fail("f-diagonal",
             "f is set on the diagonal at point " + std::to_string(t[0]));
      continue;
    }
    if (t[0] > t[1]) {
      v.fail("f-misoriented", "pair (" + std::to_string(t[0]) + ", " +
                                  std::to_string(t[1]) +
                                  ") is stored larger id first");
      continue;
    }
    auto [it, inserted] = f.emplace(std::make_pair(t[0], t[1]), t[2]);
    if (!inserted && it->second != t[2])
      v.fail("f-not-single-valued", "pair (" + std::to_string(t[0]) + ", " +
                                        std::to_string(t[1]) +
                                        ") has two levels");
  }
  const std::vector<int>& ys = m.sortElements("Y");
  for (size_t i = 0; i < ys.size(); ++i)
    for (size_t j = i + 1; j < ys.size(); ++j)
      if (!f.count({ys[i], ys[j]}))
        v.fail("f-not-total", "pair (" + std::to_string(ys[i]) + ", " +
                                  std::to_string(ys[j]) + ") has no level");
  if (!v.ok) return v;

  auto fAt = [&](int a, int b) { return f.at(std::minmax(a, b)); };
  auto less = [&](int x, int y) { return m.orderLess("X", x, y); };
  // Both law clauses at every pivot choice; stop at the first failure.
  auto pivotCheck = [&](int a0, int a1, int a2) {
    const int v1 = fAt(a0, a1), v2 = fAt(a0, a2), w = fAt(a1, a2);
    if (v1 != v2) {
      const int least = less(v1, v2) ? v1 : v2;
      if (w != least) {
        v.fail("law-min", triple(a0, a1, a2) + ": levels differ at the pivot, "
                              "so f(" + std::to_string(a1) + ", " +
                              std::to_string(a2) + ") must be level " +
                              std::to_string(least) + ", found " +
                              std::to_string(w));
        return false;
      }
    } else if (!less(v1, w)) {
      v.fail("law-greater", triple(a0, a1, a2) + ": levels agree at the "
                                "pivot, so f(" + std::to_string(a1) + ", " +
                                std::to_string(a2) +
                                ") must lie above level " +
                                std::to_string(v1) + ", found " +
                                std::to_string(w));
      return false;
    }
    return true;
  };
  for (size_t i = 0; i < ys.size(); ++i)
    for (size_t j = i + 1; j < ys.size(); ++j)
      for (size_t k = j + 1; k < ys.size(); ++k) {
        if (!pivotCheck(ys[i], ys[j], ys[k]) ||
            !pivotCheck(ys[j], ys[i], ys[k]) ||
            !pivotCheck(ys[k], ys[i], ys[j]))
          return v;
      }
  return v;
}

Structure meetFromBitVectors(int xCount,
                             const std::vector<std::vector<int>>& vectors) {
  if (xCount < 0) throw PreconditionError("xCount must be non-negative");
  for (const auto& vec : vectors) {
    if (int(vec.size()) != xCount)
      throw PreconditionError("every vector must have exactly " +
                              std::to_string(xCount) + " coordinates");
    for (int bit : vec)
      if (bit != 0 && bit != 1)
        throw PreconditionError("vector coordinates must be 0 or 1");
  }
  for (size_t i = 0; i < vectors.size(); ++i)
    for (size_t j = i + 1; j < vectors.size(); ++j)
      if (vectors[i] == vectors[j])
        throw PreconditionError("duplicate vectors at positions " +
                                std::to_string(i) + " and " +
                                std::to_string(j));

  Structure::Builder b(*presetSignature("meet"));
  for (int x = 0; x < xCount; ++x) b.addElement(x, "X");
  for (size_t i = 0; i < vectors.size(); ++i)
    b.addElement(xCount + int(i), "Y");
  for (size_t i = 0; i < vectors.size(); ++i)
    for (size_t j = i + 1; j < vectors.size(); ++j) {
      int diff = -1;
      for (int x = 0; x < xCount && diff < 0; ++x)
        if (vectors[i][x] != vectors[j][x]) diff = x;
      b.addTuple("f", {xCount + int(i), xCount + int(j), diff});
    }
  return b.build();
}

std::map<int, std::vector<int>> realizeAsBitVectors(const Structure& m) {
  Verdict law = checkMeetLaw(m);
  if (!law.ok)
    throw PreconditionError("meet law fails: " + law.violations.front().kind +
                            " (" + law.violations.front().detail + ")");

  std::map<std::pair<int, int>, int> f;
  for (const auto& t : m.tuples("f")) f[{t[0], t[1]}] = t[2];
  auto fAt = [&](int a, int b) { return f.at(std::minmax(a, b)); };

  const std::vector<int>& ys = m.sortElements("Y");
  std::map<int, std::vector<int>> bits;
  for (int y : ys) bits[y] = std::vector<int>(m.order("X").size(), 0);

  // The least level used inside a group splits it in two: the law forbids
  // three points meeting pairwise at one level, so the split is binary.
  // Points on the pivot's side keep bit 0 at that level, the rest get 1;
  // all deeper differences happen above the level, first differences land
  // exactly on it.
  auto split = [&](auto&& self, const std::vector<int>& group) -> void {
    if (group.size() <= 1) return;
    int level = fAt(group[0], group[1]);
    for (size_t i = 0; i < group.size(); ++i)
      for (size_t j = i + 1; j < group.size(); ++j) {
        int w = fAt(group[i], group[j]);
        if (m.orderLess("X", w, level)) level = w;
      }
    const int pivot = group.front();
    std::vector<int> near, far;
    for (int y : group) {
      if (y == pivot || fAt(pivot, y) != level)
        near.push_back(y);
      else
        far.push_back(y);
    }
    const int coordinate = m.rank("X", level);
    for (int y : far) bits.at(y)[coordinate] = 1;
    self(self, near);
    self(self, far);
  };
  split(split, ys);
  return bits;
}

}  // namespace forge
