#pragma once

#include <optional>

#include "forge/json_io.hpp"
#include "forge/limits.hpp"
#include "forge/structure.hpp"
#include "forge/verdict.hpp"

namespace forge {

// One recorded construction step; `stage` is the index of the stage the
// operation produced (entries come in order, one per successor stage).
// Operations: "amalgam" and "chain-amalgam" (pairA/pairB set, parameters
// carry the copy map), "grow-top", "end-extend", "pad-x" {"count"},
// "fiber-pad" {"b","count"}.
struct LedgerEntry {
  int stage = 0;
  std::optional<Structure> pairA;
  std::optional<Structure> pairB;
  std::string operation;
  Json parameters = Json::object();
};

// An increasing list of structures, each a literal substructure of the
// next (ids persist), together with the operations that built it.
struct Chain {
  std::string classTag;  // signature preset every stage lives in
  std::vector<Structure> stages;
  std::vector<LedgerEntry> ledger;

  const Structure& finalStage() const;
};

// Builds the successor stage by amalgamating pairB over the given copy of
// pairA inside the final stage, and records the ledger entry.
Chain appendAmalgamStage(Chain c, const Structure& pairA,
                         const Structure& pairB,
                         const std::map<int, int>& copy);

// Checks: known classTag, every stage in its class, literal inclusions
// between consecutive stages, one ledger entry per successor stage, and
// the good-pair condition on every "amalgam" entry ("end-extend" steps are
// exempt by design).
Verdict validateChain(const Chain& c, const Limits& limits = {});

// Re-executes the ledger from stages[0]. Deterministic; the result should
// equal the input chain stage for stage (callers compare).
Chain replayChain(const Chain& c);

Json chainToJson(const Chain& c);
Chain chainFromJson(const Json& j);
Chain loadChainFile(const std::string& path);
void saveChainFile(const Chain& c, const std::string& path);

// Ledger encoding of an embedding's map: array of [source, target] pairs,
// ascending by source.
Json embeddingMapToJson(const std::map<int, int>& m);
std::map<int, int> embeddingMapFromJson(const Json& j);

}  // namespace forge
