#pragma once

#include <cstdint>

#include "forge/chain.hpp"
#include "forge/limits.hpp"

namespace forge {

struct IndiscernibilityItem {
  int stage;
  std::vector<int> permutation;  // images of the designated set, which is
                                 // listed ascending in `set`
  int extendedAtStage;           // stage of the first extension (an
                                 // automorphism when == stage, otherwise an
                                 // embedding into that later stage); -1 none
};

struct IndiscernibilityReport {
  std::vector<int> set;  // the designated set in the final stage, ascending
  bool sampled = false;  // true when permutations were sampled, not listed
  bool allExtend = true;
  std::vector<IndiscernibilityItem> items;
};

// Absolute-indiscernibility certificate: `pred` names either a sort or a
// unary relation; its elements form the designated set. For every stage
// and every permutation of the set (exhaustive up to
// limits.exhaustivePermutationLimit elements, then a seeded sample of
// limits.permutationSample), find the least stage extending it: first as
// an automorphism of the stage itself, then as an embedding of the stage
// into a later one.
IndiscernibilityReport checkAbsoluteIndiscernibles(const Chain& c,
                                                   const std::string& pred,
                                                   std::uint64_t seed = 0,
                                                   const Limits& limits = {});

}  // namespace forge
