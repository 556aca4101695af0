#include "forge/chain_amalgam.hpp"

#include <algorithm>
#include <climits>

#include "forge/errors.hpp"
#include "forge/iso.hpp"
#include "forge/knight.hpp"
#include "forge/signature.hpp"

namespace forge {

namespace {

void requireCore(const Structure& s, const char* who) {
  if (!(s.signature() == *presetSignature("knight")))
    throw SignatureError(std::string(who) + " must be a core-class structure");
  Verdict v = checkK0(s);
  if (!v.ok)
    throw PreconditionError(std::string(who) + " fails the class checker: " +
                            v.violations.front().kind);
}

}  // namespace

Structure growTop(const Structure& c) {
  requireCore(c, "structure");
  const int ny = c.sortCount("Y");
  const Structure padded = padX(c, std::max(0, ny + 1 - c.sortCount("X")));

  const int yTop = padded.maxId() + 1;
  Structure::Builder b(padded);
  b.addElement(yTop, "Y");
  std::vector<int> order = padded.order("Y");
  order.push_back(yTop);
  b.setOrder("Y", order);

  const auto& xs = padded.sortElements("X");
  const auto& oldYs = padded.order("Y");
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i < oldYs.size()) {
      b.addTuple("g", {xs[i], yTop, oldYs[i]});
      b.addTuple("G", {xs[i], yTop, oldYs[i]});
    } else {
      b.addTuple("g", {xs[i], yTop, yTop});
    }
  }
  return b.build();
}

Structure chainAmalgamStep(const Structure& cFinal, const Structure& a,
                           const Structure& b,
                           const std::map<int, int>& copy) {
  requireCore(cFinal, "final stage");
  requireCore(a, "small half");
  requireCore(b, "big half");
  if (!Embedding::inclusion(a, b).isValid())
    throw PreconditionError("small half is not included in the big half");
  if (b.sortCount("X") - a.sortCount("X") <
      b.sortCount("Y") - a.sortCount("Y"))
    throw PreconditionError("(a,b) is not a good pair");
  Embedding eAC{a, cFinal, copy};
  if (!eAC.isValid())
    throw PreconditionError("copy is not an embedding into the final stage");

  // Fresh ids for b's new elements, ascending.
  int fresh = cFinal.maxId() + 1;
  std::map<int, int> relabel;
  std::vector<int> srcB;  // new X, amalgam ids
  for (int e : b.allElements()) {
    if (a.hasElement(e))
      relabel[e] = copy.at(e);
    else {
      relabel[e] = fresh++;
      if (b.sortOf(e) == "X") srcB.push_back(relabel[e]);
    }
  }

  // Order merge: b's new positions sit at their a-relative interval, ahead
  // of the host's positions in that interval.
  const auto& aYs = a.order("Y");
  std::vector<std::vector<int>> bIv(aYs.size() + 1), cIv(aYs.size() + 1);
  for (int y : b.order("Y")) {
    if (a.hasElement(y)) continue;
    int k = 0;
    for (int ay : aYs)
      if (b.orderLess("Y", ay, y)) ++k;
    bIv[k].push_back(y);
  }
  std::vector<int> imageYs;
  std::set<int> imageYSet;
  for (int ay : aYs) {
    imageYs.push_back(copy.at(ay));
    imageYSet.insert(copy.at(ay));
  }
  {
    size_t k = 0;
    for (int y : cFinal.order("Y")) {
      if (imageYSet.count(y))
        ++k;
      else
        cIv[k].push_back(y);
    }
  }
  std::vector<int> mergedY;
  std::set<int> bNewYD;
  for (size_t k = 0; k < bIv.size(); ++k) {
    for (int y : bIv[k]) {
      mergedY.push_back(relabel.at(y));
      bNewYD.insert(relabel.at(y));
    }
    for (int y : cIv[k]) mergedY.push_back(y);
    if (k < aYs.size()) mergedY.push_back(imageYs[k]);
  }
  std::map<int, int> rankD;
  for (size_t i = 0; i < mergedY.size(); ++i) rankD[mergedY[i]] = int(i);

  // Surrogate: least-id host position outside the copy, above every one of
  // b's positions. Only needed when b adds positions.
  int y0 = -1;
  if (!bNewYD.empty()) {
    int maxBRank = -1;
    for (int y : b.order("Y")) maxBRank = std::max(maxBRank, rankD.at(relabel.at(y)));
    int best = INT_MAX;
    for (int y : cFinal.order("Y"))
      if (!imageYSet.count(y) && rankD.at(y) > maxBRank) best = std::min(best, y);
    if (best == INT_MAX)
      throw PreconditionError("no surrogate position available");
    y0 = best;
  }

  KnightView viewC(cFinal);
  std::set<int> imageX;
  for (const auto& [ae, ce] : copy)
    if (a.sortOf(ae) == "X") imageX.insert(ce);

  Structure::Builder bd(cFinal.signature());
  for (int e : cFinal.allElements()) bd.addElement(e, cFinal.sortOf(e));
  for (int e : b.allElements())
    if (!a.hasElement(e)) bd.addElement(relabel.at(e), b.sortOf(e));
  for (const auto& rel : cFinal.signature().relations) {
    for (const auto& t : cFinal.tuples(rel.name)) bd.addTuple(rel.name, t);
    for (const auto& t : b.tuples(rel.name)) {
      std::vector<int> u;
      u.reserve(t.size());
      for (int e : t) u.push_back(relabel.at(e));
      bd.addTuple(rel.name, u);
    }
  }

  // b's new X elements cover, at each host position outside the copy, the
  // new positions below it (ascending, singleton fibers); the rest map to
  // the position itself.
  std::sort(srcB.begin(), srcB.end());
  for (int y : cFinal.order("Y")) {
    if (imageYSet.count(y)) continue;
    std::vector<int> targets;
    for (int z : mergedY) {
      if (rankD.at(z) >= rankD.at(y)) break;
      if (bNewYD.count(z)) targets.push_back(z);
    }
    if (srcB.size() < targets.size())
      throw Error("good-pair balance lost (internal)");
    size_t i = 0;
    for (; i < targets.size(); ++i) {
      bd.addTuple("g", {srcB[i], y, targets[i]});
      bd.addTuple("G", {srcB[i], y, targets[i]});
    }
    for (; i < srcB.size(); ++i) bd.addTuple("g", {srcB[i], y, y});
  }

  // Host X elements at b's new positions: decided by their value at the
  // surrogate. A value at or above the position, or inside the copy, sends
  // the element to the position itself; otherwise the value is kept, so
  // the new position's lower fibers repeat the surrogate's.
  std::vector<int> hostX;
  for (int x : cFinal.sortElements("X"))
    if (!imageX.count(x)) hostX.push_back(x);
  for (int y : mergedY) {
    if (!bNewYD.count(y)) continue;
    for (int x : hostX) {
      const int v = viewC.gAt(x, y0);
      if (rankD.at(v) >= rankD.at(y) || imageYSet.count(v))
        bd.addTuple("g", {x, y, y});
      else
        bd.addTuple("g", {x, y, v});
    }
  }

  // Fibers those assignments created, and the repairs: a host position z
  // below a new position y whose surrogate fiber lies wholly inside the
  // copy gets a fresh X element as its one preimage at y.
  std::vector<std::pair<int, int>> repairs;
  for (int y : mergedY) {
    if (!bNewYD.count(y)) continue;
    for (int z : cFinal.order("Y")) {
      if (imageYSet.count(z) || rankD.at(z) >= rankD.at(y)) continue;
      std::vector<int> named;
      for (int x : viewC.fiber(y0, z))
        if (!imageX.count(x)) named.push_back(x);
      if (named.empty()) {
        repairs.push_back({y, z});
        continue;
      }
      if (named.size() > 8)
        throw GuardExceeded("fiber-naming",
                            "inherited fiber of size " +
                                std::to_string(named.size()) +
                                " would need too many naming tuples");
      std::sort(named.begin(), named.end());
      do {
        std::vector<int> t = named;
        t.push_back(y);
        t.push_back(z);
        bd.addTuple("G", t);
      } while (std::next_permutation(named.begin(), named.end()));
    }
  }
  for (const auto& [y, z] : repairs) {
    const int xNew = fresh++;
    bd.addElement(xNew, "X");
    bd.addTuple("g", {xNew, y, z});
    bd.addTuple("G", {xNew, y, z});
    for (int yy : mergedY)
      if (yy != y) bd.addTuple("g", {xNew, yy, yy});
  }

  bd.setOrder("Y", mergedY);
  Structure d = bd.build();
  Verdict dv = checkK0(d);
  if (!dv.ok)
    throw Error("chain amalgamation produced an invalid stage (internal): " +
                dv.violations.front().kind);
  return d;
}

Chain chainAmalgamate(Chain c, const Structure& a, const Structure& b,
                      std::optional<std::map<int, int>> copy) {
  if (c.classTag != "knight")
    throw PreconditionError("chain amalgamation works on core-class chains");
  std::map<int, int> theCopy;
  if (copy)
    theCopy = *copy;
  else {
    auto found = findEmbedding(a, c.finalStage());
    if (!found)
      throw PreconditionError(
          "the small half does not embed in the final stage");
    theCopy = found->map;
  }

  if (b.sortCount("Y") > a.sortCount("Y")) {
    std::set<int> imgY;
    for (const auto& [ae, ce] : theCopy)
      if (a.sortOf(ae) == "Y") imgY.insert(ce);
    const auto& ys = c.finalStage().order("Y");
    const bool haveSurrogate = !ys.empty() && !imgY.count(ys.back());
    if (!haveSurrogate) {
      LedgerEntry grow;
      grow.stage = int(c.stages.size());
      grow.operation = "grow-top";
      c.stages.push_back(growTop(c.finalStage()));
      c.ledger.push_back(std::move(grow));
    }
  }

  Structure next = chainAmalgamStep(c.finalStage(), a, b, theCopy);
  LedgerEntry entry;
  entry.stage = int(c.stages.size());
  entry.pairA = a;
  entry.pairB = b;
  entry.operation = "chain-amalgam";
  entry.parameters["copy"] = embeddingMapToJson(theCopy);
  c.stages.push_back(std::move(next));
  c.ledger.push_back(std::move(entry));
  return c;
}

}  // namespace forge
