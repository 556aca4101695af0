#include "forge/amalgam.hpp"

#include <algorithm>

#include "forge/errors.hpp"
#include "forge/knight.hpp"
#include "forge/signature.hpp"

namespace forge {

namespace {

// Result of the core construction over the (X,Y,g,G[,Q]) part.
struct CoreOutcome {
  Structure d;
  std::map<int, int> relabel;  // left ids -> amalgam ids
  std::vector<int> padIds;     // amalgam ids of balance padding, left first
  int nextFresh = 0;
};

// Disjoint amalgam of b and c over a. The result keeps c's ids; b's new
// elements and padding receive consecutive fresh ids from freshStart up.
// qAware additionally groups new order positions so that the factor Q
// parts merge into an initial segment.
CoreOutcome coreAmalgam(const Structure& a, const Structure& b,
                        const Structure& c, const Embedding& eAB,
                        const Embedding& eAC, bool qAware, int freshStart) {
  std::map<int, int> relabel;
  std::set<int> bImage, cImage;
  for (const auto& [ae, be] : eAB.map) {
    relabel[be] = eAC.map.at(ae);
    bImage.insert(be);
  }
  for (const auto& [ae, ce] : eAC.map) cImage.insert(ce);

  int fresh = freshStart;
  std::vector<int> bNewElems;
  for (int e : b.allElements())
    if (!bImage.count(e)) {
      relabel[e] = fresh++;
      bNewElems.push_back(e);
    }

  std::vector<int> bNewX, cNewX;
  int bNewYCount = 0, cNewYCount = 0;
  for (int e : bNewElems)
    if (b.sortOf(e) == "X")
      bNewX.push_back(relabel.at(e));
    else
      ++bNewYCount;
  for (int e : c.allElements())
    if (!cImage.count(e)) {
      if (c.sortOf(e) == "X")
        cNewX.push_back(e);
      else
        ++cNewYCount;
    }

  // Balance padding so each side brings at least as many new X as new Y.
  std::vector<int> padB, padC;
  for (int i = int(bNewX.size()); i < bNewYCount; ++i) padB.push_back(fresh++);
  for (int i = int(cNewX.size()); i < cNewYCount; ++i) padC.push_back(fresh++);

  // New order positions, grouped by the interval between consecutive base
  // elements they fall into; factor-internal order is preserved.
  const auto& aYs = a.order("Y");
  const int intervals = int(aYs.size()) + 1;
  auto intervalOf = [&](const Structure& s, const Embedding& e, int y) {
    int k = 0;
    for (int ay : aYs)
      if (s.orderLess("Y", e.map.at(ay), y)) ++k;
    return k;
  };
  std::vector<std::vector<int>> bIv(intervals), cIv(intervals);
  for (int y : b.order("Y"))
    if (!bImage.count(y)) bIv[intervalOf(b, eAB, y)].push_back(y);
  for (int y : c.order("Y"))
    if (!cImage.count(y)) cIv[intervalOf(c, eAC, y)].push_back(y);

  std::set<int> bQ, cQ;
  if (qAware) {
    for (const auto& t : b.tuples("Q")) bQ.insert(t[0]);
    for (const auto& t : c.tuples("Q")) cQ.insert(t[0]);
  }

  std::vector<int> mergedY;
  std::set<int> bNewYD, cNewYD;  // amalgam ids
  for (int k = 0; k < intervals; ++k) {
    auto push = [&](bool fromB, bool inQ) {
      const auto& group = fromB ? bIv[k] : cIv[k];
      const auto& q = fromB ? bQ : cQ;
      for (int y : group) {
        if (qAware && (q.count(y) > 0) != inQ) continue;
        int id = fromB ? relabel.at(y) : y;
        mergedY.push_back(id);
        (fromB ? bNewYD : cNewYD).insert(id);
      }
    };
    if (qAware) {
      push(true, true);
      push(false, true);
      push(true, false);
      push(false, false);
    } else {
      push(true, false);
      push(false, false);
    }
    if (k < int(aYs.size())) mergedY.push_back(eAC.map.at(aYs[k]));
  }
  std::map<int, int> rankD;
  for (size_t i = 0; i < mergedY.size(); ++i) rankD[mergedY[i]] = int(i);

  Structure::Builder bd(b.signature());
  for (int e : c.allElements()) bd.addElement(e, c.sortOf(e));
  for (int e : bNewElems) bd.addElement(relabel.at(e), b.sortOf(e));
  for (int x : padB) bd.addElement(x, "X");
  for (int x : padC) bd.addElement(x, "X");

  for (const auto& rel : b.signature().relations) {
    for (const auto& t : c.tuples(rel.name)) bd.addTuple(rel.name, t);
    for (const auto& t : b.tuples(rel.name)) {
      std::vector<int> u;
      u.reserve(t.size());
      for (int e : t) u.push_back(relabel.at(e));
      bd.addTuple(rel.name, u);
    }
  }

  // Padding maps every order position to itself.
  for (int x : padB)
    for (int y : b.order("Y")) bd.addTuple("g", {x, relabel.at(y), relabel.at(y)});
  for (int x : padC)
    for (int y : c.order("Y")) bd.addTuple("g", {x, y, y});

  // Cross assignments: the new X of one side covers, at each new order
  // position of the other side, that side's own new positions below it.
  // Targets ascend; leftover sources map to the position itself. Each
  // covering produces a singleton fiber, recorded with a G tuple.
  auto cross = [&](const std::set<int>& positions, const std::set<int>& pool,
                   std::vector<int> sources) {
    std::sort(sources.begin(), sources.end());
    for (int y : mergedY) {
      if (!positions.count(y)) continue;
      std::vector<int> targets;
      for (int z : mergedY) {
        if (rankD.at(z) >= rankD.at(y)) break;
        if (pool.count(z)) targets.push_back(z);
      }
      if (sources.size() < targets.size())
        throw Error("amalgam balance lost (internal)");
      size_t i = 0;
      for (; i < targets.size(); ++i) {
        bd.addTuple("g", {sources[i], y, targets[i]});
        bd.addTuple("G", {sources[i], y, targets[i]});
      }
      for (; i < sources.size(); ++i) bd.addTuple("g", {sources[i], y, y});
    }
  };
  std::vector<int> srcB = bNewX, srcC = cNewX;
  srcB.insert(srcB.end(), padB.begin(), padB.end());
  srcC.insert(srcC.end(), padC.begin(), padC.end());
  cross(cNewYD, bNewYD, srcB);
  cross(bNewYD, cNewYD, srcC);

  bd.setOrder("Y", mergedY);

  CoreOutcome out;
  out.d = bd.build();
  out.relabel = std::move(relabel);
  out.padIds = padB;
  out.padIds.insert(out.padIds.end(), padC.begin(), padC.end());
  out.nextFresh = fresh;
  return out;
}

void requireProblem(const AmalgamationProblem& p, const std::string& preset,
                    Verdict (*checker)(const Structure&)) {
  const Signature sig = *presetSignature(preset);
  if (!(p.base.signature() == sig) || !(p.left.signature() == sig) ||
      !(p.right.signature() == sig))
    throw SignatureError("amalgamation expects three '" + preset +
                         "' structures");
  auto member = [&](const Structure& s, const char* who) {
    Verdict v = checker(s);
    if (!v.ok)
      throw PreconditionError(std::string(who) + " factor is not in the class: " +
                              v.violations.front().kind);
  };
  member(p.base, "base");
  member(p.left, "left");
  member(p.right, "right");
  if (p.intoLeft.source != p.base || p.intoLeft.target != p.left ||
      p.intoRight.source != p.base || p.intoRight.target != p.right)
    throw PreconditionError("embeddings do not connect base to the factors");
  if (!p.intoLeft.isValid() || !p.intoRight.isValid())
    throw PreconditionError("base embeddings are not valid embeddings");
}

Embedding identityEmbedding(const Structure& s, const Structure& target) {
  Embedding e{s, target, {}};
  for (int id : s.allElements()) e.map[id] = id;
  return e;
}

void requireSoundResult(const AmalgamResult& r,
                        Verdict (*checker)(const Structure&)) {
  if (!checker(r.amalgam).ok || !r.leftEmbedding.isValid() ||
      !r.rightEmbedding.isValid())
    throw Error("amalgam construction produced an invalid result (internal)");
}

}  // namespace

AmalgamResult disjointAmalgamK0(const AmalgamationProblem& p) {
  requireProblem(p, "knight", &checkK0);
  const int freshStart = std::max(p.left.maxId(), p.right.maxId()) + 1;
  CoreOutcome co = coreAmalgam(p.base, p.left, p.right, p.intoLeft,
                               p.intoRight, false, freshStart);
  AmalgamResult r{co.d,
                  Embedding{p.left, co.d, co.relabel},
                  identityEmbedding(p.right, co.d),
                  co.padIds,
                  {}};
  requireSoundResult(r, &checkK0);
  return r;
}

AmalgamResult disjointAmalgamK0Q(const AmalgamationProblem& p) {
  requireProblem(p, "knight-q", &checkRelativized);
  const int freshStart = std::max(p.left.maxId(), p.right.maxId()) + 1;
  CoreOutcome co = coreAmalgam(p.base, p.left, p.right, p.intoLeft,
                               p.intoRight, true, freshStart);
  AmalgamResult r{co.d,
                  Embedding{p.left, co.d, co.relabel},
                  identityEmbedding(p.right, co.d),
                  co.padIds,
                  {}};
  requireSoundResult(r, &checkRelativized);
  return r;
}

AmalgamResult disjointAmalgamK1(const AmalgamationProblem& p) {
  requireProblem(p, "knight-u", &checkK1);
  const Signature tau = *presetSignature("knight");
  const Structure a0 = p.base.restrictToSignature(tau);
  const Structure b0 = p.left.restrictToSignature(tau);
  const Structure c0 = p.right.restrictToSignature(tau);
  auto restrictEmb = [](const Embedding& e, const Structure& s,
                        const Structure& t) {
    Embedding r{s, t, {}};
    for (const auto& [k, v] : e.map)
      if (s.hasElement(k)) r.map[k] = v;
    return r;
  };
  const int freshStart = std::max(p.left.maxId(), p.right.maxId()) + 1;
  CoreOutcome co =
      coreAmalgam(a0, b0, c0, restrictEmb(p.intoLeft, a0, b0),
                  restrictEmb(p.intoRight, a0, c0), false, freshStart);
  int fresh = co.nextFresh;

  // The projection sort: right's part survives unchanged, left's new part
  // gets fresh ids, and every X the core introduced gets its own element.
  std::map<int, int> revLeft;  // left id -> base id, over the base image
  for (const auto& [ae, be] : p.intoLeft.map) revLeft[be] = ae;
  std::map<int, int> relabelU;
  std::vector<int> leftNewU;
  for (int u : p.left.sortElements("U")) {
    auto it = revLeft.find(u);
    if (it != revLeft.end())
      relabelU[u] = p.intoRight.map.at(it->second);
    else {
      relabelU[u] = fresh++;
      leftNewU.push_back(u);
    }
  }

  Structure::Builder bd(*presetSignature("knight-u"));
  for (int e : co.d.allElements()) bd.addElement(e, co.d.sortOf(e));
  for (const auto& t : co.d.tuples("g")) bd.addTuple("g", t);
  for (const auto& t : co.d.tuples("G")) bd.addTuple("G", t);
  bd.setOrder("Y", co.d.order("Y"));

  for (int u : p.right.sortElements("U")) bd.addElement(u, "U");
  for (int u : leftNewU) bd.addElement(relabelU.at(u), "U");
  for (const auto& t : p.right.tuples("P")) bd.addTuple("P", t);
  for (const auto& t : p.left.tuples("P"))
    bd.addTuple("P", {co.relabel.at(t[0]), relabelU.at(t[1])});

  std::vector<int> uNew;
  for (int x : co.padIds) {
    int u = fresh++;
    uNew.push_back(u);
    bd.addElement(u, "U");
    bd.addTuple("P", {x, u});
  }

  std::map<int, int> leftMap = co.relabel;
  leftMap.insert(relabelU.begin(), relabelU.end());
  Structure d = bd.build();
  AmalgamResult r{d,
                  Embedding{p.left, d, leftMap},
                  identityEmbedding(p.right, d),
                  co.padIds,
                  uNew};
  requireSoundResult(r, &checkK1);
  return r;
}

AmalgamResult disjointAmalgam(const AmalgamationProblem& p) {
  const std::string name = presetName(p.left.signature()).value_or("");
  if (name == "knight") return disjointAmalgamK0(p);
  if (name == "knight-q") return disjointAmalgamK0Q(p);
  if (name == "knight-u") return disjointAmalgamK1(p);
  throw SignatureError("no amalgamation for this signature");
}

}  // namespace forge
