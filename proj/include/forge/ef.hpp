#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/limits.hpp"
#include "forge/structure.hpp"

namespace forge {

// One ply of a recorded game line: Spoiler picks `element` in structure
// `side` (0 = first, 1 = second); `response` is the matching element chosen
// in the other structure, or -1 when no legal response existed.
struct EfMove {
  int side;
  int element;
  int response;
};

// An entry of the Duplicator strategy table: in the position given by
// `position` (pairs matched so far, first-structure element first), when the
// opponent picks `element` in structure `side`, respond with `response`.
struct EfStrategyEntry {
  std::vector<std::pair<int, int>> position;
  int side;
  int element;
  int response;
};

struct EfResult {
  enum class Winner { Duplicator, Spoiler };
  Winner winner = Winner::Duplicator;
  int rounds = 0;
  std::vector<EfMove> spoilerLine;           // nonempty on Spoiler wins
  std::vector<EfStrategyEntry> strategy;     // filled on Duplicator wins
  bool strategyTruncated = false;
  std::int64_t workEstimate = 0;

  bool duplicatorWins() const { return winner == Winner::Duplicator; }
};

// Decides the rounds-length game by rank stratification: the depth-r type of
// a tuple is its atomic diagram together with the set of depth-(r-1) types
// of its one-point extensions. Duplicator wins iff the two structures have
// equal depth-`rounds` types. Exact, deterministic; refuses (GuardExceeded)
// when the table-size estimate exceeds limits.positionGuard.
EfResult efGame(const Structure& a, const Structure& b, int rounds,
                const Limits& limits = {});

}  // namespace forge
