#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "forge/ef.hpp"
#include "forge/errors.hpp"
#include "forge/iso.hpp"
#include "forge/json_io.hpp"
#include "forge/knight.hpp"
#include "forge/projection.hpp"
#include "forge/signature.hpp"
#include "forge/structure.hpp"
#include "support/oracle.hpp"

using namespace forge;

namespace {

// Single X element of a different id than the usual fixtures, for
// isomorphic-but-not-equal tests.
Structure makeMinimalShifted() {
  Structure::Builder b(*presetSignature("knight"));
  b.addElement(7, "X").addElement(9, "Y");
  b.addTuple("g", {7, 9, 9});
  return b.build();
}

bool isIdentity(const Embedding& e) {
  return std::all_of(e.map.begin(), e.map.end(),
                     [](const auto& kv) { return kv.first == kv.second; });
}

// Small mixed corpus used by the property tests below.
std::vector<Structure> smallCorpus() {
  std::vector<Structure> out = enumerateKnightStructures(2, 2);
  out.push_back(buildProjectionGeneric(1, 2));
  out.push_back(buildProjectionGeneric(2, 1));
  out.push_back(buildProjectionGeneric(1, 3));
  return out;
}

}  // namespace

TEST_CASE("builder and accessors") {
  Structure b0 = oracle::makeB0();
  CHECK(b0.elementCount() == 4);
  CHECK(b0.sortCount("X") == 2);
  CHECK(b0.sortCount("Y") == 2);
  CHECK(b0.maxId() == 3);
  CHECK(b0.hasElement(0));
  CHECK(!b0.hasElement(4));
  CHECK(b0.sortOf(2) == "Y");
  CHECK(b0.hasTuple("g", {0, 3, 2}));
  CHECK(!b0.hasTuple("g", {0, 3, 3}));
  CHECK(b0.order("Y") == std::vector<int>{2, 3});
  CHECK(b0.rank("Y", 2) == 0);
  CHECK(b0.orderLess("Y", 2, 3));
  CHECK(!b0.orderLess("Y", 3, 3));
  CHECK(b0.orderLeq("Y", 3, 3));

  SUBCASE("ill-sorted tuples are rejected") {
    Structure::Builder bad(*presetSignature("knight"));
    bad.addElement(0, "X").addElement(1, "Y");
    bad.addTuple("g", {1, 1, 1});  // first slot must be X
    CHECK_THROWS_AS(bad.build(), SignatureError);
  }

  SUBCASE("order must cover the sort") {
    Structure::Builder bad(*presetSignature("knight"));
    bad.addElement(0, "Y").addElement(1, "Y");
    bad.setOrder("Y", {0});
    CHECK_THROWS_AS(bad.build(), SignatureError);
  }
}

TEST_CASE("restrictToElements keeps induced tuples and order") {
  Structure b0 = oracle::makeB0();
  Structure part = b0.restrictToElements({0, 2, 3});
  CHECK(part.elementCount() == 3);
  CHECK(part.hasTuple("g", {0, 2, 2}));
  CHECK(part.hasTuple("g", {0, 3, 2}));
  CHECK(part.hasTuple("G", {0, 3, 2}));
  CHECK(!part.hasTuple("g", {1, 2, 2}));
  CHECK(part.order("Y") == std::vector<int>{2, 3});

  // Dropping y1 also drops every tuple through it.
  Structure top = b0.restrictToElements({0, 1, 3});
  CHECK(top.tuples("g").size() == 1);
  CHECK(top.hasTuple("g", {1, 3, 3}));
}

TEST_CASE("isomorphic: examples") {
  Structure minimal = oracle::makeMinimalK0();

  SUBCASE("same object gives the identity") {
    auto w = isomorphic(minimal, minimal);
    REQUIRE(w.has_value());
    CHECK(isIdentity(*w));
    CHECK(w->isValid());
  }

  SUBCASE("one-element structures of different sorts never match") {
    Structure::Builder bx(*presetSignature("knight"));
    bx.addElement(0, "X");
    Structure::Builder by(*presetSignature("knight"));
    by.addElement(0, "Y");
    CHECK(!isomorphic(bx.build(), by.build()).has_value());
  }

  SUBCASE("relabeled minimal structures match by the witnessing bijection") {
    Structure other = makeMinimalShifted();
    auto w = isomorphic(minimal, other);
    REQUIRE(w.has_value());
    CHECK(w->map.at(0) == 7);
    CHECK(w->map.at(1) == 9);
    CHECK(w->isValid());
    CHECK(oracle::bruteIsomorphic(minimal, other));
  }
}

TEST_CASE("isomorphic is symmetric over the corpus") {
  auto corpus = smallCorpus();
  for (size_t i = 0; i < corpus.size(); ++i)
    for (size_t j = 0; j < corpus.size(); ++j) {
      if (corpus[i].signature() == corpus[j].signature()) {
        bool ij = isomorphic(corpus[i], corpus[j]).has_value();
        bool ji = isomorphic(corpus[j], corpus[i]).has_value();
        CHECK(ij == ji);
        CHECK(ij == oracle::bruteIsomorphic(corpus[i], corpus[j]));
      }
    }
}

TEST_CASE("automorphisms: examples and group laws") {
  SUBCASE("empty structure has only the identity") {
    Structure empty = Structure::Builder(*presetSignature("knight")).build();
    auto autos = automorphisms(empty);
    REQUIRE(autos.size() == 1);
    CHECK(autos[0].map.empty());
  }

  SUBCASE("projection with fibers (2,2) has the wreath group of order 8") {
    Structure p = buildProjectionGeneric(2, 2);
    auto autos = automorphisms(p);
    CHECK(autos.size() == 8);
    CHECK(isIdentity(autos.front()));
    CHECK(oracle::bruteAutomorphismCount(p) == 8);
  }

  SUBCASE("minimal core structure is rigid") {
    auto autos = automorphisms(oracle::makeMinimalK0());
    CHECK(autos.size() == 1);
    CHECK(oracle::bruteAutomorphismCount(oracle::makeMinimalK0()) == 1);
  }

  SUBCASE("closure under composition and inverse") {
    for (const Structure& s :
         {buildProjectionGeneric(2, 2), oracle::makeB0()}) {
      auto autos = automorphisms(s);
      std::set<std::map<int, int>> group;
      for (const Embedding& a : autos) group.insert(a.map);
      for (const Embedding& a : autos) {
        std::map<int, int> inv;
        for (auto& [k, v] : a.map) inv[v] = k;
        CHECK(group.count(inv) == 1);
        for (const Embedding& b : autos)
          CHECK(group.count(compose(a, b).map) == 1);
      }
    }
  }

  SUBCASE("size guard refuses, not truncates") {
    Structure big = buildProjectionGeneric(4, 4);  // 20 elements
    CHECK_THROWS_AS(automorphisms(big), GuardExceeded);
  }
}

TEST_CASE("substructureGeneratedBy follows the g closure") {
  Structure b0 = oracle::makeB0();

  SUBCASE("empty seed gives the empty structure") {
    Structure c = substructureGeneratedBy(b0, {}, {"g"});
    CHECK(c.elementCount() == 0);
  }

  SUBCASE("an X element alone stays alone") {
    Structure c = substructureGeneratedBy(b0, {0}, {"g"});
    CHECK(c.allElements() == std::vector<int>{0});
    CHECK(oracle::closureFixpoint(b0, {0}, {"g"}) == std::set<int>{0});
  }

  SUBCASE("x1 with the top position pulls in its g-value") {
    Structure c = substructureGeneratedBy(b0, {0, 3}, {"g"});
    CHECK(c.hasElement(2));  // y1 = g(x1, y2)
    auto fix = oracle::closureFixpoint(b0, {0, 3}, {"g"});
    CHECK(fix == std::set<int>{0, 2, 3});
    CHECK(c.allElements() == std::vector<int>(fix.begin(), fix.end()));
  }
}

TEST_CASE("efGame: examples") {
  Structure minimal = oracle::makeMinimalK0();
  Structure padded = padX(minimal, 1);

  SUBCASE("identical structures favor Duplicator at any depth") {
    for (int r = 0; r <= 3; ++r) CHECK(efGame(minimal, minimal, r).duplicatorWins());
  }

  SUBCASE("rounds=0 is a Duplicator win regardless of inputs") {
    CHECK(efGame(minimal, padded, 0).duplicatorWins());
  }

  SUBCASE("an extra X element is invisible at depth 1, fatal at depth 2") {
    EfResult r1 = efGame(minimal, padded, 1);
    CHECK(r1.duplicatorWins());
    CHECK(oracle::efDuplicatorWins(minimal, padded, 1));

    EfResult r2 = efGame(minimal, padded, 2);
    CHECK(!r2.duplicatorWins());
    CHECK(!r2.spoilerLine.empty());
    CHECK(!oracle::efDuplicatorWins(minimal, padded, 2));
  }
}

TEST_CASE("Duplicator at every depth up to |a|+|b| means isomorphic") {
  auto corpus = smallCorpus();
  for (const Structure& a : corpus) {
    if (a.elementCount() > 5) continue;
    for (const Structure& b : corpus) {
      if (b.elementCount() > 5) continue;
      if (!(a.signature() == b.signature())) continue;
      bool allDup = true;
      for (int k = 0; allDup && k <= a.elementCount() + b.elementCount(); ++k)
        allDup = efGame(a, b, k).duplicatorWins();
      CHECK(allDup == isomorphic(a, b).has_value());
    }
  }
}

TEST_CASE("embedding search returns valid embeddings, lexicographically") {
  Structure minimal = oracle::makeMinimalK0();
  Structure b0 = oracle::makeB0();
  auto embs = findEmbeddings(minimal, b0);
  // {x,y} lands on (x,y) pairs with g(x,y)=y: (0,2), (1,2), (1,3).
  REQUIRE(embs.size() == 3);
  for (const Embedding& e : embs) CHECK(e.isValid());
  std::vector<std::pair<int, int>> images;
  for (const Embedding& e : embs) images.push_back({e.map.at(0), e.map.at(1)});
  CHECK(images == std::vector<std::pair<int, int>>{{0, 2}, {1, 2}, {1, 3}});

  SUBCASE("fixed assignments are honored") {
    EmbeddingSearch search;
    search.fixed = {{0, 1}};
    auto fixed = findEmbeddings(minimal, b0, search);
    REQUIRE(fixed.size() == 2);
    for (const Embedding& e : fixed) CHECK(e.map.at(0) == 1);
  }

  SUBCASE("an order-breaking fixed map finds nothing") {
    // Sending the Y-minimum to the top forces the other position above it.
    EmbeddingSearch search;
    search.fixed = {{2, 3}};
    CHECK(findEmbeddings(b0, b0, search).empty());
  }
}

TEST_CASE("embedding validation rejects order and tuple violations") {
  Structure b0 = oracle::makeB0();
  Embedding swapY{b0, b0, {{0, 0}, {1, 1}, {2, 3}, {3, 2}}};
  CHECK(!swapY.isValid());

  Embedding notInjective{b0, b0, {{0, 0}, {1, 0}, {2, 2}, {3, 3}}};
  CHECK(!notInjective.isValid());

  Embedding identity = Embedding::inclusion(b0, b0);
  CHECK(identity.isValid());
}

TEST_CASE("interchange round-trip preserves ids and content") {
  auto corpus = smallCorpus();
  corpus.push_back(Structure::Builder(*presetSignature("knight")).build());
  for (const Structure& s : corpus) {
    Json j = structureToJson(s);
    Structure back = structureFromJson(j);
    CHECK(back == s);
    // Canonical writing: a second pass is byte-identical.
    CHECK(writeJsonText(structureToJson(back)) == writeJsonText(j));
  }
}

TEST_CASE("interchange rejects malformed input") {
  Json good = structureToJson(oracle::makeB0());

  SUBCASE("unknown top-level field") {
    Json j = good;
    j["extra"] = 1;
    CHECK_THROWS_AS(structureFromJson(j), FormatError);
  }

  SUBCASE("unknown element field") {
    Json j = good;
    j["elements"][0]["color"] = "red";
    CHECK_THROWS_AS(structureFromJson(j), FormatError);
  }

  SUBCASE("tuple over a missing element") {
    Json j = good;
    j["tuples"]["g"].push_back({99, 2, 2});
    CHECK_THROWS_AS(structureFromJson(j), FormatError);
  }

  SUBCASE("bad JSON text") {
    CHECK_THROWS_AS(parseJsonText("{ not json"), FormatError);
  }
}

TEST_CASE("signature presets round-trip through presetName") {
  for (const char* name :
       {"knight", "knight-u", "knight-q", "projection", "meet"}) {
    auto sig = presetSignature(name);
    REQUIRE(sig.has_value());
    auto back = presetName(*sig);
    REQUIRE(back.has_value());
    CHECK(*back == name);
  }
  CHECK(!presetSignature("no-such-preset").has_value());
}
