#pragma once

#include <optional>

#include "forge/chain.hpp"
#include "forge/structure.hpp"

namespace forge {

// Adds a fresh Y-maximum to a core-class structure. X is first padded so
// that at least |Y|+1 elements are available; then, in ascending id order,
// the X elements cover the old positions one-to-one (singleton fibers,
// each named) and the remainder map to the new top.
Structure growTop(const Structure& c);

// One amalgamation step of the good pair (a,b) over an embedded copy of a
// inside cFinal, in the style used against a chain rather than a finite
// factor: no balance padding; instead the surrogate position y0 (a
// non-copy position of cFinal above everything in b's image and its new
// positions) decides where the existing X elements send b's new positions,
// and fresh X elements repair the fibers that would otherwise empty out
// (those whose y0-preimages all lie in the copy).
//
// Preconditions: (a,b) a good pair, copy a valid embedding of a into
// cFinal, and a surrogate available whenever b adds Y elements (callers
// grow the top first when it is not; replay relies on this split).
Structure chainAmalgamStep(const Structure& cFinal, const Structure& a,
                           const Structure& b, const std::map<int, int>& copy);

// Appends chainAmalgamStep's result as a new stage, growing the top first
// (as its own recorded stage) when no surrogate is available. With no copy
// given, the least embedding of a into the final stage is used.
Chain chainAmalgamate(Chain c, const Structure& a, const Structure& b,
                      std::optional<std::map<int, int>> copy = {});

}  // namespace forge
