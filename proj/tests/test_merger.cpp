#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "forge/errors.hpp"
#include "forge/indiscernibles.hpp"
#include "forge/iso.hpp"
#include "forge/json_io.hpp"
#include "forge/knight.hpp"
#include "forge/merger.hpp"
#include "forge/projection.hpp"
#include "forge/signature.hpp"
#include "support/oracle.hpp"

using namespace forge;

namespace {

// Knight host receiving a projection guest on its X sort.
MergerSpec knightHostSpec() {
  MergerSpec spec;
  spec.hostSignature = *presetSignature("knight");
  spec.guestSignature = *presetSignature("projection");
  spec.u = "X";
  spec.q = "B";
  return spec;
}

// Projection host receiving a knight guest on its B sort.
MergerSpec projectionHostSpec() {
  MergerSpec spec;
  spec.hostSignature = *presetSignature("projection");
  spec.guestSignature = *presetSignature("knight");
  spec.u = "B";
  spec.q = "X";
  return spec;
}

std::map<int, int> ascendingGlue(const Structure& host, const std::string& u,
                                 const Structure& guest, const std::string& q) {
  const auto& rec = host.sortElements(u);
  const auto& gl = guest.sortElements(q);
  std::map<int, int> glue;
  for (size_t i = 0; i < rec.size(); ++i) glue[rec[i]] = gl[i];
  return glue;
}

Structure shiftIds(const Structure& s, int delta) {
  Structure::Builder b(s.signature());
  for (int e : s.allElements()) b.addElement(e + delta, s.sortOf(e));
  for (const std::string& sort : s.signature().orderedSorts) {
    std::vector<int> ord = s.order(sort);
    for (int& e : ord) e += delta;
    b.setOrder(sort, ord);
  }
  for (const RelationSymbol& r : s.signature().relations)
    for (auto t : s.tuples(r.name)) {
      for (int& e : t) e += delta;
      b.addTuple(r.name, t);
    }
  return b.build();
}

Chain singleStage(Structure s, std::string tag) {
  Chain c;
  c.classTag = std::move(tag);
  c.stages.push_back(std::move(s));
  return c;
}

}  // namespace

TEST_CASE("checkMergerSpec reports each violation kind") {
  CHECK(checkMergerSpec(knightHostSpec()).ok);
  CHECK(checkMergerSpec(projectionHostSpec()).ok);

  auto kindOf = [](const MergerSpec& s) {
    Verdict v = checkMergerSpec(s);
    REQUIRE(!v.ok);
    return v.violations.front().kind;
  };

  MergerSpec s = knightHostSpec();
  s.u = "nowhere";
  CHECK(kindOf(s) == "u-missing");

  s = knightHostSpec();
  s.u = "g";
  CHECK(kindOf(s) == "u-not-unary");

  s = knightHostSpec();
  s.u = "Y";
  CHECK(kindOf(s) == "u-sort-ordered");

  s = knightHostSpec();
  s.q = "nowhere";
  CHECK(kindOf(s) == "q-missing");

  s = projectionHostSpec();
  s.q = "Y";
  CHECK(kindOf(s) == "q-ordered");

  s = knightHostSpec();
  s.guestSignature = *presetSignature("knight");
  s.q = "X";
  CHECK(kindOf(s) == "sort-clash");

  s = knightHostSpec();
  s.guestSignature = Signature{{"S"}, {{"g", {"S", "S"}, false}}, {}};
  s.q = "S";
  CHECK(kindOf(s) == "relation-clash");
}

TEST_CASE("mergedSignature rewrites the glued sort to the receptor sort") {
  MergerSpec spec = knightHostSpec();
  Signature m = mergedSignature(spec);
  CHECK(m.hasSort("X"));
  CHECK(m.hasSort("Y"));
  CHECK(m.hasSort("A"));
  CHECK(!m.hasSort("B"));
  const RelationSymbol* p = m.relation("p");
  REQUIRE(p != nullptr);
  CHECK(p->profile == std::vector<std::string>{"A", "X"});

  Signature g = mergedGuestSignature(spec);
  CHECK(g.hasSort("A"));
  CHECK(g.hasSort("X"));
  CHECK(!g.hasSort("Y"));
}

TEST_CASE("mergeStructures: examples") {
  SUBCASE("a bare-set guest adds nothing") {
    MergerSpec spec;
    spec.hostSignature = *presetSignature("knight");
    spec.guestSignature = Signature{{"S"}, {}, {}};
    spec.u = "X";
    spec.q = "S";
    Structure host = oracle::makeB0();
    Structure::Builder gb(spec.guestSignature);
    gb.addElement(0, "S").addElement(1, "S");
    Structure guest = gb.build();
    MergerResult r =
        mergeStructures(host, guest, spec, ascendingGlue(host, "X", guest, "S"));
    CHECK(isomorphic(r.merged.restrictToSignature(spec.hostSignature), host)
              .has_value());
    CHECK(r.merged.elementCount() == host.elementCount());
  }

  SUBCASE("projection host, minimal guest glued on X") {
    Structure host = buildProjectionGeneric(2, 2);  // B = {4, 5}
    Structure guest = padX(oracle::makeMinimalK0(), 1);  // X = {0, 2}, Y = {1}
    MergerSpec spec = projectionHostSpec();
    MergerResult r =
        mergeStructures(host, guest, spec, ascendingGlue(host, "B", guest, "X"));

    // Both restriction identities hold.
    CHECK(mergerHostPart(r.merged, spec) == host);
    CHECK(isomorphic(mergerGuestPart(r.merged, spec, r.guestMap),
                     r.rewrittenGuest)
              .has_value());
    // The guest's unglued Y element got a fresh id beyond the host.
    CHECK(r.merged.elementCount() == host.elementCount() + 1);
    CHECK(r.guestMap.at(1) > host.maxId());
  }

  SUBCASE("mismatched sizes are an error") {
    Structure host = buildProjectionGeneric(1, 3);
    Structure guest = oracle::makeMinimalK0();  // one X against three B
    CHECK_THROWS_AS(mergeStructures(host, guest, projectionHostSpec(),
                                    {{3, 0}}),
                    PreconditionError);
  }

  SUBCASE("glue must be a bijection onto the receptor set") {
    Structure host = buildProjectionGeneric(1, 2);
    Structure guest = padX(oracle::makeMinimalK0(), 1);
    auto glue = ascendingGlue(host, "B", guest, "X");
    glue.erase(glue.begin()->first);
    CHECK_THROWS_AS(mergeStructures(host, guest, projectionHostSpec(), glue),
                    PreconditionError);
  }
}

TEST_CASE("merger restriction identities across a small corpus") {
  MergerSpec spec = projectionHostSpec();
  for (int floor = 1; floor <= 2; ++floor)
    for (int bc = 1; bc <= 2; ++bc) {
      Structure host = buildProjectionGeneric(floor, bc);
      for (const Structure& base : enumerateKnightStructures(2, 2)) {
        if (base.sortCount("X") != bc) continue;
        MergerResult r = mergeStructures(host, base, spec,
                                         ascendingGlue(host, "B", base, "X"));
        CHECK(mergerHostPart(r.merged, spec) == host);
        CHECK(isomorphic(mergerGuestPart(r.merged, spec, r.guestMap),
                         r.rewrittenGuest)
                  .has_value());
      }
    }
}

TEST_CASE("mergeStructures is functorial on isomorphisms") {
  Structure host = buildProjectionGeneric(2, 2);
  Structure guest = padX(oracle::makeMinimalK0(), 1);
  MergerSpec spec = projectionHostSpec();
  MergerResult plain =
      mergeStructures(host, guest, spec, ascendingGlue(host, "B", guest, "X"));

  Structure hostR = shiftIds(host, 100);
  Structure guestR = shiftIds(guest, 40);
  MergerResult moved = mergeStructures(hostR, guestR, spec,
                                       ascendingGlue(hostR, "B", guestR, "X"));
  CHECK(isomorphic(plain.merged, moved.merged).has_value());
}

TEST_CASE("checkAbsoluteIndiscernibles: examples") {
  SUBCASE("equal fibers: every permutation is a stage automorphism") {
    Chain c = singleStage(buildProjectionGeneric(2, 2), "projection");
    IndiscernibilityReport r = checkAbsoluteIndiscernibles(c, "B");
    CHECK(r.allExtend);
    CHECK(!r.sampled);
    CHECK(r.set == std::vector<int>{4, 5});
    CHECK(r.items.size() == 2);  // identity and the swap
    for (const IndiscernibilityItem& item : r.items)
      CHECK(item.extendedAtStage == item.stage);
  }

  SUBCASE("unequal fibers fail at the stage, succeed after equalization") {
    Structure s = projectionFiberPad(buildProjectionGeneric(1, 2), 2, 2);
    REQUIRE(projectionFiberSizes(s) == std::map<int, int>{{2, 3}, {3, 1}});

    IndiscernibilityReport strict =
        checkAbsoluteIndiscernibles(singleStage(s, "projection"), "B");
    CHECK(!strict.allExtend);
    bool swapFails = false;
    for (const IndiscernibilityItem& item : strict.items)
      if (item.permutation != strict.set && item.extendedAtStage == -1)
        swapFails = true;
    CHECK(swapFails);

    Chain eq = buildFiberEqualizationChain(s);
    REQUIRE(eq.stages.size() > 1);
    CHECK(validateChain(eq).ok);
    for (const LedgerEntry& e : eq.ledger) CHECK(e.operation == "fiber-pad");
    IndiscernibilityReport chained = checkAbsoluteIndiscernibles(eq, "B");
    CHECK(chained.allExtend);
  }

  SUBCASE("identity permutation always extends immediately") {
    Chain c = singleStage(projectionFiberPad(buildProjectionGeneric(1, 3), 5, 3),
                          "projection");
    IndiscernibilityReport r = checkAbsoluteIndiscernibles(c, "B");
    for (const IndiscernibilityItem& item : r.items)
      if (item.permutation == r.set) CHECK(item.extendedAtStage == item.stage);
  }

  SUBCASE("beyond six designated elements the report samples") {
    Chain c = singleStage(buildProjectionGeneric(1, 7), "projection");
    IndiscernibilityReport r = checkAbsoluteIndiscernibles(c, "B", 42);
    CHECK(r.sampled);
    CHECK(r.allExtend);
    CHECK(int(r.items.size()) <= Limits{}.permutationSample);
  }
}

TEST_CASE("equal fibers characterize full permutation extension") {
  // Every fiber profile with total size <= 6 over at least two B elements:
  // all permutations extend at the stage itself iff the profile is constant.
  std::vector<std::vector<int>> profiles;
  std::vector<int> cur;
  auto gen = [&](auto&& self, int remaining, int maxPart) -> void {
    if (remaining == 0) {
      if (cur.size() >= 2) profiles.push_back(cur);
      return;
    }
    for (int part = std::min(remaining, maxPart); part >= 1; --part) {
      cur.push_back(part);
      self(self, remaining - part, part);
      cur.pop_back();
    }
  };
  for (int total = 2; total <= 6; ++total) gen(gen, total, total);

  for (const auto& prof : profiles) {
    Structure s = buildProjectionGeneric(1, int(prof.size()));
    const std::vector<int> bs = s.sortElements("B");
    for (size_t i = 0; i < prof.size(); ++i)
      if (prof[i] > 1) s = projectionFiberPad(s, bs[i], prof[i] - 1);
    bool equal =
        std::all_of(prof.begin(), prof.end(), [&](int v) { return v == prof[0]; });
    IndiscernibilityReport r =
        checkAbsoluteIndiscernibles(singleStage(s, "projection"), "B");
    CHECK(r.allExtend == equal);
  }
}

TEST_CASE("buildProjectionGeneric: examples") {
  CHECK(buildProjectionGeneric(1, 0).elementCount() == 0);

  Structure p22 = buildProjectionGeneric(2, 2);
  CHECK(p22.elementCount() == 6);
  CHECK(checkProjection(p22).ok);
  CHECK(projectionFiberSizes(p22) == std::map<int, int>{{4, 2}, {5, 2}});

  Structure p13 = buildProjectionGeneric(1, 3);
  IndiscernibilityReport r =
      checkAbsoluteIndiscernibles(singleStage(p13, "projection"), "B");
  CHECK(r.items.size() == 6);
  CHECK(r.allExtend);
}

TEST_CASE("mergerEquivalence: examples") {
  MergerSpec spec = knightHostSpec();

  SUBCASE("identical inputs are equivalent") {
    Chain host = singleStage(oracle::makeB0(), "knight");
    Structure guest = buildProjectionGeneric(1, 2);
    MergerEquivalenceReport r =
        mergerEquivalence(host, guest, host, guest, spec, 3);
    CHECK(r.hostsEquivalent);
    CHECK(r.mergersEquivalent);
    CHECK(r.depth == 3);
  }

  SUBCASE("depth-2 difference is reported transparently") {
    // The hosts agree on single-element types but differ at depth 2 (only
    // one has two comparable Y positions).
    Chain hostA = singleStage(oracle::makeB0(), "knight");
    Chain hostB = singleStage(padX(oracle::makeMinimalK0(), 1), "knight");
    Structure guest = buildProjectionGeneric(1, 2);

    MergerEquivalenceReport shallow =
        mergerEquivalence(hostA, guest, hostB, guest, spec, 1);
    CHECK(shallow.hostsEquivalent);
    CHECK(shallow.mergersEquivalent);

    MergerEquivalenceReport deep =
        mergerEquivalence(hostA, guest, hostB, guest, spec, 2);
    CHECK(!deep.hostsEquivalent);
    CHECK(!deep.mergersEquivalent);
    CHECK(deep.hosts.winner == EfResult::Winner::Spoiler);
    CHECK(!deep.hosts.spoilerLine.empty());
  }
}

TEST_CASE("merger job files") {
  MergerJob job;
  job.hostPath = "host.json";
  job.guestPath = "guest.json";
  job.u = "B";
  job.q = "X";
  job.glue = {{4, 0}, {5, 2}};

  Json j = mergerJobToJson(job);
  MergerJob back = mergerJobFromJson(j);
  CHECK(back.hostPath == job.hostPath);
  CHECK(back.guestPath == job.guestPath);
  CHECK(back.u == job.u);
  CHECK(back.q == job.q);
  CHECK(back.glue == job.glue);

  SUBCASE("whole-domain gluing serializes q as null") {
    job.q.clear();
    Json whole = mergerJobToJson(job);
    CHECK(whole.at("q").is_null());
    CHECK(mergerJobFromJson(whole).q.empty());
  }

  SUBCASE("unknown fields are rejected") {
    j["comment"] = "nope";
    CHECK_THROWS_AS(mergerJobFromJson(j), FormatError);
  }
}
