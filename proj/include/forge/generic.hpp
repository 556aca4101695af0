#pragma once

#include <cstdint>

#include "forge/chain.hpp"
#include "forge/knight.hpp"
#include "forge/limits.hpp"

namespace forge {

struct ScheduleBudget {
  int maxGuestSize = 2;  // per-sort cap on the big half of scheduled pairs
  int steps = 10;        // successor stages to build at most
  int repetitions = 1;   // services owed to each (copy, pair)
};

// Fair chain construction: enumerate good pairs up to isomorphism with
// |B| bounded per sort by maxGuestSize, then repeatedly serve a queue of
// (pair, embedded copy of its small half) items, each service amalgamating
// the big half over the copy as a new stage. Copies discovered in new
// stages join the queue; an item is requeued until served `repetitions`
// times. The service schedule is canonical (pair enumeration order,
// lexicographic embeddings, FIFO), so the result depends only on
// (seedStructure, budget); independent runs build the same chain and stay
// comparable. The seed is recorded for provenance and does not steer the
// schedule. Stops after `steps` stages or when the queue drains (every
// copy fully served).
Chain buildGenericChain(const Structure& seedStructure,
                        const ScheduleBudget& budget, std::uint64_t seed,
                        const Limits& limits = {});

struct RichnessCopy {
  int pairIndex;            // into RichnessReport::pairs
  std::map<int, int> copy;  // small-half ids -> stage ids
  int firstStage;           // least stage containing the copy
  int servedStage;          // least stage >= firstStage where the big half
                            // embeds over the copy; -1 when none does
};

struct RichnessReport {
  std::vector<GoodPair> pairs;       // every good pair with |B| <= pairBound
  std::vector<RichnessCopy> copies;  // every copy in the final stage
  bool allPairsServed = true;   // per pair: some copy served
  bool allCopiesServed = true;  // per copy: served
};

// Exhaustive certificate over the chain: for every good pair bounded by
// pairBound and every embedding of its small half into any stage, the
// least stage serving it.
RichnessReport richnessCertificate(const Chain& c, int pairBound,
                                   const Limits& limits = {});

struct HomogeneityItem {
  int stage;                  // where the isomorphism lives
  std::vector<int> domain;    // substructure elements, ascending
  std::vector<int> image;     // their images under the isomorphism
  int extendedAtStage;        // least stage whose self-embedding extends
                              // the map; -1 when none found
};

struct HomogeneityReport {
  std::vector<HomogeneityItem> items;
  bool allExtend = true;
};

// For every pair of isomorphic g-closed substructures of each stage with
// at most partBound elements and every isomorphism between them: the least
// later stage into which the whole stage embeds extending that map. Stage
// structures are not themselves homogeneous, so the default searches later
// stages; strictStage restricts the search to an automorphism of the stage
// the parts live in. Intended for small chains; guards apply.
HomogeneityReport homogeneityCheck(const Chain& c, int partBound,
                                   bool strictStage = false,
                                   const Limits& limits = {});

}  // namespace forge
