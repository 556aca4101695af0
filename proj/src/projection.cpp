#include "forge/projection.hpp"

#include "forge/errors.hpp"
#include "forge/signature.hpp"

namespace forge {

Verdict checkProjection(const Structure& s) {
  if (!(s.signature() == *presetSignature("projection")))
    throw SignatureError("expected signature preset 'projection'");
  Verdict v;
  std::map<int, std::set<int>> vals;
  for (const auto& t : s.tuples("p")) vals[t[0]].insert(t[1]);
  for (const auto& [a, bs] : vals)
    if (bs.size() > 1)
      v.fail("p-not-single-valued",
             "p(" + std::to_string(a) + ") has " + std::to_string(bs.size()) +
                 " values");
  std::set<int> hit;
  for (int a : s.sortElements("A")) {
    auto it = vals.find(a);
    if (it == vals.end())
      v.fail("p-not-total", "p(" + std::to_string(a) + ") undefined");
    else
      hit.insert(*it->second.begin());
  }
  for (int b : s.sortElements("B"))
    if (!hit.count(b))
      v.fail("p-not-onto", "no a with p(a) = " + std::to_string(b));
  return v;
}

std::map<int, int> projectionFiberSizes(const Structure& s) {
  std::map<int, int> sizes;
  for (int b : s.sortElements("B")) sizes[b] = 0;
  for (const auto& t : s.tuples("p")) ++sizes[t[1]];
  return sizes;
}

Structure buildProjectionGeneric(int fiberFloor, int bCount) {
  if (fiberFloor < 1 || bCount < 0)
    throw PreconditionError("fiberFloor must be >= 1 and bCount >= 0");
  Structure::Builder b(*presetSignature("projection"));
  for (int k = 0; k < fiberFloor * bCount; ++k) b.addElement(k, "A");
  for (int i = 0; i < bCount; ++i) b.addElement(fiberFloor * bCount + i, "B");
  for (int k = 0; k < fiberFloor * bCount; ++k)
    b.addTuple("p", {k, fiberFloor * bCount + k / fiberFloor});
  return b.build();
}

Structure projectionFiberPad(const Structure& s, int bId, int count) {
  Verdict v = checkProjection(s);
  if (!v.ok)
    throw PreconditionError("structure fails the projection checker: " +
                            v.violations.front().kind);
  if (!s.hasElement(bId) || s.sortOf(bId) != "B")
    throw PreconditionError("not a B element: " + std::to_string(bId));
  if (count < 0) throw PreconditionError("negative count");
  Structure::Builder b(s);
  int next = s.maxId() + 1;
  for (int i = 0; i < count; ++i, ++next) {
    b.addElement(next, "A");
    b.addTuple("p", {next, bId});
  }
  return b.build();
}

Chain buildFiberEqualizationChain(const Structure& s) {
  Verdict v = checkProjection(s);
  if (!v.ok)
    throw PreconditionError("structure fails the projection checker: " +
                            v.violations.front().kind);
  Chain c;
  c.classTag = "projection";
  c.stages.push_back(s);
  int deepest = 0;
  for (const auto& [b, n] : projectionFiberSizes(s))
    deepest = std::max(deepest, n);
  for (const auto& [b, n] : projectionFiberSizes(s)) {
    if (n == deepest) continue;
    LedgerEntry entry;
    entry.stage = int(c.stages.size());
    entry.operation = "fiber-pad";
    entry.parameters["b"] = b;
    entry.parameters["count"] = deepest - n;
    c.stages.push_back(projectionFiberPad(c.finalStage(), b, deepest - n));
    c.ledger.push_back(std::move(entry));
  }
  return c;
}

}  // namespace forge
