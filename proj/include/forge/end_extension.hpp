#pragma once

#include "forge/chain.hpp"
#include "forge/embedding.hpp"
#include "forge/structure.hpp"

namespace forge {

// One end-extension step on a relativized ("knight-q") structure: appends
// a single fresh Y position outside Q, strictly above the whole order,
// without touching X. The existing X elements cover the old positions
// one-to-one in ascending id order and the rest map to the new top, so
// |X| >= |Y|+1 is required ("insufficient X" otherwise).
Structure endExtendStep(const Structure& prev);

// k such steps appended to a knight-q chain, each recorded in the ledger.
// The Q part never changes: restricted to it, every stage equals the
// chain's original final stage.
Chain endExtend(Chain c, int k);

struct EndExtensionVerdict {
  std::string verdict;  // "end-extension" | "not a valid extension"
  std::string witness;  // empty when verdict is "end-extension"
  bool isEndExtension() const { return verdict == "end-extension"; }
};

// Checks the necessity argument for end extensions: when d keeps the X
// sort equal to the image of c's and inserts a Y element below an image
// point, surjectivity onto the segment demands a preimage no old X can
// consistently supply; the verdict carries the offending position or
// element. Extensions with new X, or with new Y only above the image, are
// reported as end extensions.
EndExtensionVerdict verifyEndExtensionNecessity(const Structure& c,
                                                const Structure& d,
                                                const Embedding& e);

}  // namespace forge
