#include <algorithm>
#include <set>

#include "doctest.h"
#include "forge/amalgam.hpp"
#include "forge/errors.hpp"
#include "forge/iso.hpp"
#include "forge/knight.hpp"
#include "forge/signature.hpp"
#include "support/oracle.hpp"

using namespace forge;

namespace {

// Two disjoint single-point structures over fresh ids, the standard
// joint-embedding probe.
Structure singleton(int xId, int yId) {
  Structure::Builder b(*presetSignature("knight"));
  b.addElement(xId, "X").addElement(yId, "Y");
  b.addTuple("g", {xId, yId, yId});
  return b.build();
}

Structure withQ(const Structure& base, const std::vector<int>& qYs) {
  Structure::Builder b(*presetSignature("knight-q"));
  for (int e : base.allElements()) b.addElement(e, base.sortOf(e));
  b.setOrder("Y", base.order("Y"));
  for (const auto& t : base.tuples("g")) b.addTuple("g", t);
  for (const auto& t : base.tuples("G")) b.addTuple("G", t);
  for (int y : qYs) b.addTuple("Q", {y});
  return b.build();
}

}  // namespace

TEST_CASE("checkK0: documented examples") {
  SUBCASE("minimal structure passes") {
    CHECK(checkK0(oracle::makeMinimalK0()).ok);
    CHECK(oracle::satisfiesCore(oracle::makeMinimalK0()));
  }

  SUBCASE("two-level example passes") {
    CHECK(checkK0(oracle::makeB0()).ok);
    CHECK(oracle::satisfiesCore(oracle::makeB0()));
  }

  SUBCASE("deleting the naming tuple is reported as an unnamed fiber") {
    Structure b0 = oracle::makeB0();
    Structure::Builder b(*presetSignature("knight"));
    for (int e : b0.allElements()) b.addElement(e, b0.sortOf(e));
    b.setOrder("Y", b0.order("Y"));
    for (const auto& t : b0.tuples("g")) b.addTuple("g", t);
    Structure broken = b.build();
    Verdict v = checkK0(broken);
    CHECK(!v.ok);
    REQUIRE(!v.violations.empty());
    CHECK(v.violations.front().kind == "fiber-unnamed");
    CHECK(!oracle::satisfiesCore(broken));
  }

  SUBCASE("empty structure is admitted") {
    Structure empty = Structure::Builder(*presetSignature("knight")).build();
    CHECK(checkK0(empty).ok);
    CHECK(oracle::satisfiesCore(empty));
  }

  SUBCASE("Y without X fails surjectivity") {
    Structure::Builder b(*presetSignature("knight"));
    b.addElement(0, "Y");
    Verdict v = checkK0(b.build());
    CHECK(!v.ok);
    CHECK(v.violations.front().kind == "g-not-onto");
  }

  SUBCASE("wrong signature is refused") {
    Structure p = Structure::Builder(*presetSignature("projection")).build();
    CHECK_THROWS_AS(checkK0(p), SignatureError);
  }
}

TEST_CASE("checkK0 agrees with the oracle on every small structure") {
  // Census over |X| <= 2, |Y| <= 2, cumulative and including the empty
  // structure: these counts are frozen.
  CHECK(enumerateKnightStructures(1, 1).size() == 3);
  CHECK(enumerateKnightStructures(2, 1).size() == 5);
  CHECK(enumerateKnightStructures(1, 2).size() == 3);

  auto lib = enumerateKnightStructures(2, 2);
  CHECK(lib.size() == 6);
  auto raw = oracle::enumerateCoreRaw(2, 2);
  REQUIRE(raw.size() == lib.size());

  // The two enumerations match up to isomorphism, pairwise.
  std::vector<bool> used(raw.size(), false);
  for (const Structure& s : lib) {
    CHECK(checkK0(s).ok);
    CHECK(oracle::satisfiesCore(s));
    bool found = false;
    for (size_t i = 0; i < raw.size() && !found; ++i)
      if (!used[i] && oracle::bruteIsomorphic(s, raw[i])) {
        used[i] = true;
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("padX: examples and fiber preservation") {
  Structure minimal = oracle::makeMinimalK0();
  Structure b0 = oracle::makeB0();

  SUBCASE("padding the empty structure by zero is a no-op") {
    Structure empty = Structure::Builder(*presetSignature("knight")).build();
    CHECK(padX(empty, 0) == empty);
    CHECK(padX(b0, 0) == b0);
  }

  SUBCASE("padX(minimal, 2) has three X elements, all mapping to y") {
    Structure p = padX(minimal, 2);
    CHECK(p.sortCount("X") == 3);
    CHECK(p.sortCount("Y") == 1);
    CHECK(checkK0(p).ok);
    KnightView v(p);
    for (int x : v.xs()) CHECK(v.gAt(x, 1) == 1);
  }

  SUBCASE("padX(B0, 1) keeps the naming tuples untouched") {
    Structure p = padX(b0, 1);
    CHECK(p.sortCount("X") == 3);
    CHECK(checkK0(p).ok);
    CHECK(p.tuples("G") == b0.tuples("G"));
    int fresh = p.maxId();
    KnightView v(p);
    CHECK(v.gAt(fresh, 2) == 2);
    CHECK(v.gAt(fresh, 3) == 3);
    // The original is a literal substructure.
    CHECK(Embedding::inclusion(b0, p).isValid());
  }
}

TEST_CASE("y-minimum law holds in every enumerated structure") {
  for (const Structure& s : enumerateKnightStructures(2, 2)) {
    if (s.sortCount("Y") == 0) continue;
    KnightView v(s);
    int yMin = v.ysInOrder().front();
    for (int x : v.xs()) CHECK(v.gAt(x, yMin) == yMin);
  }
}

TEST_CASE("disjointAmalgamK0: documented examples") {
  Structure minimal = oracle::makeMinimalK0();

  SUBCASE("identity triple returns an isomorphic copy") {
    AmalgamationProblem p{minimal, minimal, minimal,
                          Embedding::inclusion(minimal, minimal),
                          Embedding::inclusion(minimal, minimal)};
    AmalgamResult r = disjointAmalgamK0(p);
    CHECK(isomorphic(r.amalgam, minimal).has_value());
    CHECK(r.introducedX.empty());
  }

  SUBCASE("two singletons over the empty base") {
    Structure empty = Structure::Builder(*presetSignature("knight")).build();
    Structure b = singleton(0, 1);
    Structure c = singleton(10, 11);
    AmalgamationProblem p{empty, b, c, Embedding::inclusion(empty, b),
                          Embedding::inclusion(empty, c)};
    AmalgamResult r = disjointAmalgamK0(p);
    const Structure& d = r.amalgam;
    CHECK(checkK0(d).ok);
    CHECK(r.leftEmbedding.isValid());
    CHECK(r.rightEmbedding.isValid());
    CHECK(d.sortCount("X") == 2);
    CHECK(d.sortCount("Y") == 2);

    // Left factor's position sits below the right factor's (left-first
    // interleaving), its x covers the lower cone of the upper position, and
    // that singleton fiber is named.
    int yB = r.leftEmbedding.map.at(1), xB = r.leftEmbedding.map.at(0);
    int yC = r.rightEmbedding.map.at(11), xC = r.rightEmbedding.map.at(10);
    CHECK(d.orderLess("Y", yB, yC));
    KnightView v(d);
    CHECK(v.gAt(xB, yC) == yB);
    CHECK(v.gAt(xC, yB) == yB);
    CHECK(d.hasTuple("G", {xB, yC, yB}));
  }

  SUBCASE("amalgamating a padding against itself reproduces it") {
    Structure c = padX(minimal, 1);
    AmalgamationProblem p{minimal, minimal, c,
                          Embedding::inclusion(minimal, minimal),
                          Embedding::inclusion(minimal, c)};
    AmalgamResult r = disjointAmalgamK0(p);
    CHECK(isomorphic(r.amalgam, c).has_value());
  }

  SUBCASE("invalid factors are rejected") {
    Structure::Builder bad(*presetSignature("knight"));
    bad.addElement(0, "Y");
    AmalgamationProblem p{Structure::Builder(*presetSignature("knight")).build(),
                          bad.build(), minimal, Embedding{}, Embedding{}};
    p.intoLeft = Embedding::inclusion(p.base, p.left);
    p.intoRight = Embedding::inclusion(p.base, p.right);
    CHECK_THROWS_AS(disjointAmalgamK0(p), PreconditionError);
  }
}

TEST_CASE("disjointAmalgamK0 properties on enumerated triples") {
  // Factor images must meet exactly in the base image, result in class,
  // factor fibers preserved. A modest slice of the exhaustive acceptance
  // sweep, over every pair of factors extending the minimal structure.
  Structure a = oracle::makeMinimalK0();
  auto corpus = enumerateKnightStructures(2, 2);
  for (const Structure& bS : corpus)
    for (const Structure& cS : corpus) {
      auto intoB = findEmbedding(a, bS);
      auto intoC = findEmbedding(a, cS);
      if (!intoB || !intoC) continue;
      AmalgamResult r = disjointAmalgamK0({a, bS, cS, *intoB, *intoC});
      CHECK(checkK0(r.amalgam).ok);
      CHECK(r.leftEmbedding.isValid());
      CHECK(r.rightEmbedding.isValid());

      std::set<int> bi, ci, baseI;
      for (auto& [k, w] : r.leftEmbedding.map) bi.insert(w);
      for (auto& [k, w] : r.rightEmbedding.map) ci.insert(w);
      for (auto& [k, w] : intoB->map) baseI.insert(r.leftEmbedding.map.at(w));
      std::set<int> meet;
      std::set_intersection(bi.begin(), bi.end(), ci.begin(), ci.end(),
                            std::inserter(meet, meet.begin()));
      CHECK(meet == baseI);

      // Fibers within one factor survive into the amalgam.
      KnightView vc(cS), vd(r.amalgam);
      for (int y : cS.order("Y"))
        for (int z : cS.order("Y")) {
          if (!cS.orderLess("Y", z, y)) continue;
          std::set<int> mapped;
          for (int x : vc.fiber(y, z))
            mapped.insert(r.rightEmbedding.map.at(x));
          CHECK(mapped == vd.fiber(r.rightEmbedding.map.at(y),
                                   r.rightEmbedding.map.at(z)));
        }
    }
}

TEST_CASE("checkK1: examples") {
  Structure minimal = oracle::makeMinimalK0();

  auto lift = [](const Structure& base, const std::vector<int>& us,
                 const std::vector<std::pair<int, int>>& pMap) {
    Structure::Builder b(*presetSignature("knight-u"));
    for (int e : base.allElements()) b.addElement(e, base.sortOf(e));
    b.setOrder("Y", base.order("Y"));
    for (const auto& t : base.tuples("g")) b.addTuple("g", t);
    for (const auto& t : base.tuples("G")) b.addTuple("G", t);
    for (int u : us) b.addElement(u, "U");
    for (auto& [x, u] : pMap) b.addTuple("P", {x, u});
    return b.build();
  };

  CHECK(checkK1(lift(minimal, {5}, {{0, 5}})).ok);

  Verdict missing = checkK1(lift(minimal, {5}, {}));
  CHECK(!missing.ok);
  CHECK(missing.violations.front().kind == "p-not-total");

  CHECK(checkK1(lift(oracle::makeB0(), {5, 6}, {{0, 5}, {1, 6}})).ok);
}

TEST_CASE("disjointAmalgamK1 covers introduced X with fresh U") {
  auto liftSingleton = [](int xId, int yId, int uId) {
    Structure::Builder b(*presetSignature("knight-u"));
    b.addElement(xId, "X").addElement(yId, "Y").addElement(uId, "U");
    b.addTuple("g", {xId, yId, yId});
    b.addTuple("P", {xId, uId});
    return b.build();
  };
  Structure empty = Structure::Builder(*presetSignature("knight-u")).build();

  SUBCASE("no padding needed: U is just the union") {
    Structure b = liftSingleton(0, 1, 2);
    Structure c = liftSingleton(10, 11, 12);
    AmalgamResult r = disjointAmalgamK1({empty, b, c,
                                         Embedding::inclusion(empty, b),
                                         Embedding::inclusion(empty, c)});
    CHECK(checkK1(r.amalgam).ok);
    CHECK(r.amalgam.sortCount("U") == 2);
    CHECK(r.introducedX.empty());
    CHECK(r.introducedU.empty());
  }

  SUBCASE("side padding produces a nonempty fresh U set") {
    // B adds two Y over the base, C adds nothing: the good-pair inequality
    // forces X padding on C's side, and each new X needs a P value.
    Structure::Builder bb(*presetSignature("knight-u"));
    bb.addElement(0, "X").addElement(1, "X").addElement(2, "X");
    bb.addElement(3, "Y").addElement(4, "Y");
    bb.setOrder("Y", {3, 4});
    bb.addTuple("g", {0, 3, 3}).addTuple("g", {1, 3, 3}).addTuple("g", {2, 3, 3});
    bb.addTuple("g", {0, 4, 3}).addTuple("g", {1, 4, 4}).addTuple("g", {2, 4, 4});
    bb.addTuple("G", {0, 4, 3});
    bb.addElement(5, "U").addElement(6, "U").addElement(7, "U");
    bb.addTuple("P", {0, 5}).addTuple("P", {1, 6}).addTuple("P", {2, 7});
    Structure b = bb.build();
    REQUIRE(checkK1(b).ok);
    Structure c = liftSingleton(10, 11, 12);
    AmalgamResult r = disjointAmalgamK1({empty, b, c,
                                         Embedding::inclusion(empty, b),
                                         Embedding::inclusion(empty, c)});
    CHECK(checkK1(r.amalgam).ok);
    CHECK(!r.introducedX.empty());
    CHECK(r.introducedU.size() == r.introducedX.size());
    KnightView v(r.amalgam);
    for (int y : r.amalgam.order("Y")) {
      std::set<int> seen;
      for (int x : v.xs()) seen.insert(v.gAt(x, y));
      for (int z : r.amalgam.order("Y"))
        if (r.amalgam.orderLeq("Y", z, y)) CHECK(seen.count(z) == 1);
    }
  }
}

TEST_CASE("checkRelativized: examples") {
  Structure b0 = oracle::makeB0();
  CHECK(checkRelativized(withQ(b0, {2, 3})).ok);
  CHECK(checkRelativized(withQ(b0, {2})).ok);

  Verdict v = checkRelativized(withQ(b0, {3}));
  CHECK(!v.ok);
  CHECK(v.violations.front().kind == "q-not-initial");
}

TEST_CASE("checkMembership dispatches on the preset") {
  CHECK(checkMembership(oracle::makeB0()).ok);
  CHECK(checkMembership(withQ(oracle::makeB0(), {2})).ok);
  Structure p = Structure::Builder(*presetSignature("projection")).build();
  CHECK_THROWS_AS(checkMembership(p), SignatureError);
}

TEST_CASE("enumerateGoodPairs at bound 2") {
  auto pairs = enumerateGoodPairs("knight", 2);
  CHECK(pairs.size() == 11);
  for (const GoodPair& gp : pairs) {
    CHECK(checkK0(gp.small).ok);
    CHECK(checkK0(gp.big).ok);
    CHECK(gp.small.elementCount() < gp.big.elementCount());
    CHECK(Embedding::inclusion(gp.small, gp.big).isValid());
    int dx = gp.big.sortCount("X") - gp.small.sortCount("X");
    int dy = gp.big.sortCount("Y") - gp.small.sortCount("Y");
    CHECK(dx >= dy);
  }
  // Guests rich in Y come first so small budgets grow the order early.
  CHECK(pairs.front().big.sortCount("Y") == 2);
  int emptySmall = 0;
  for (const GoodPair& gp : pairs)
    if (gp.small.elementCount() == 0) ++emptySmall;
  CHECK(emptySmall == 5);
}
