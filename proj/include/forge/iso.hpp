#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "forge/embedding.hpp"
#include "forge/limits.hpp"

namespace forge {

struct EmbeddingSearch {
  // Required partial assignment; every returned embedding extends it.
  std::map<int, int> fixed;
  std::size_t maxResults = static_cast<std::size_t>(-1);
  std::int64_t nodeGuard = Limits{}.nodeGuard;
};

// All embeddings of source into target extending the search's fixed part,
// sorted lexicographically by their map read along ascending source ids.
// Backtracking over candidates in element-id order; throws GuardExceeded
// when the node guard trips.
std::vector<Embedding> findEmbeddings(const Structure& source,
                                      const Structure& target,
                                      const EmbeddingSearch& search = {});

// First embedding found (deterministic), or nullopt.
std::optional<Embedding> findEmbedding(const Structure& source,
                                       const Structure& target,
                                       const EmbeddingSearch& search = {});

// Witnessing bijection when one exists. Same signature required.
std::optional<Embedding> isomorphic(const Structure& a, const Structure& b);

// Complete automorphism list, identity first, deterministic order.
// Refuses (GuardExceeded) beyond limits.elementGuard elements.
std::vector<Embedding> automorphisms(const Structure& a,
                                     const Limits& limits = {});

// Smallest substructure of a containing seed and closed under the named
// relations read as functions (last entry = value of the preceding ones).
Structure substructureGeneratedBy(const Structure& a,
                                  const std::vector<int>& seed,
                                  const std::vector<std::string>& closureOps,
                                  const Limits& limits = {});

// Label-independent key: equal keys iff isomorphic. Exhaustive relabeling,
// only for small structures (guarded by limits.elementGuard, capped at 8).
std::string canonicalKey(const Structure& a, const Limits& limits = {});

// Key for the pair (sub ⊆ whole) up to isomorphisms of whole mapping the
// designated subset onto the corresponding subset.
std::string canonicalPairKey(const Structure& whole,
                             const std::vector<int>& subIds,
                             const Limits& limits = {});

}  // namespace forge
