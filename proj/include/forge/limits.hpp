#pragma once

#include <cstdint>

namespace forge {

// Central caps for the exhaustive searches. Every cap refusal is reported as
// GuardExceeded, never as a silent truncation of a verdict.
struct Limits {
  // Element-count cap for whole-structure searches (automorphism enumeration,
  // canonical forms). Overridable via FORGE_SIZE_GUARD in the CLI.
  int elementGuard = 12;
  // Backtracking node budget for embedding searches.
  std::int64_t nodeGuard = 20'000'000;
  // Distinct memoized positions in a game search.
  std::int64_t positionGuard = 200'000'000;
  // Embedded copies tracked by richness/homogeneity style reports.
  std::int64_t copyGuard = 2'000'000;
  // Nodes in a tree build.
  std::int64_t treeNodeGuard = 200'000;
  // Exhaustive permutation checks switch to seeded sampling above this many
  // designated elements; the sample size is permutationSample.
  int exhaustivePermutationLimit = 6;
  int permutationSample = 720;
  // Entries kept in a reported strategy table before truncation is flagged.
  int strategyTableCap = 10'000;
};

}  // namespace forge
