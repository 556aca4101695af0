#pragma once

#include <map>
#include <vector>

#include "forge/limits.hpp"
#include "forge/structure.hpp"
#include "forge/verdict.hpp"

namespace forge {

// Structures over the "meet" preset: an ordered sort X of levels and a sort
// Y of points, with f assigning a level to every unordered pair of distinct
// points. Tuples are stored once per pair, smaller point id first.
//
// The meet law, for distinct points a0, a1, a2:
//   f(a0,a1) != f(a0,a2)  =>  f(a1,a2) = min of the two (in the X order)
//   f(a0,a1)  = f(a0,a2)  =>  f(a1,a2) > that common level
// checkMeetLaw also audits the storage format; violation kinds:
// f-misoriented, f-diagonal, f-not-single-valued, f-not-total, law-min,
// law-greater. The first law violation names its triple.
Verdict checkMeetLaw(const Structure& m);

// The meet structure of a set of distinct 0/1 vectors over levels
// 0..xCount-1: f(a,b) = the least coordinate where a and b differ. X ids
// are 0..xCount-1 in order, Y ids follow in vector-list order. The result
// always satisfies the meet law.
Structure meetFromBitVectors(int xCount,
                             const std::vector<std::vector<int>>& vectors);

// Constructive converse: bit vectors over the structure's own levels whose
// meet structure reproduces f exactly (Y element -> vector, coordinates in
// X-order positions). Splits Y along the least level used between its
// members; the law makes every such split binary. Precondition: checkMeetLaw
// passes.
std::map<int, std::vector<int>> realizeAsBitVectors(const Structure& m);

}  // namespace forge
