#pragma once

#include <map>

#include "forge/chain.hpp"
#include "forge/structure.hpp"
#include "forge/verdict.hpp"

namespace forge {

// Two-sorted projection structures ("projection" preset): p a total
// function A -> B, surjective onto B.
Verdict checkProjection(const Structure& s);

// fiber sizes by B element, ascending ids.
std::map<int, int> projectionFiberSizes(const Structure& s);

// The homogeneous instance: bCount B elements, each with exactly
// fiberFloor preimages. A elements come first (0..fiberFloor*bCount-1),
// a_k over b_(k / fiberFloor).
Structure buildProjectionGeneric(int fiberFloor, int bCount);

// Adds `count` fresh A elements over the given B element.
Structure projectionFiberPad(const Structure& s, int bId, int count);

// Equalizes all fibers by padding shallow ones up to the deepest, one B
// element per stage (ascending id), recorded as "fiber-pad" entries.
Chain buildFiberEqualizationChain(const Structure& s);

}  // namespace forge
