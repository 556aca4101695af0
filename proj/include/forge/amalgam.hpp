#pragma once

#include "forge/embedding.hpp"
#include "forge/structure.hpp"

namespace forge {

// Instance of the disjoint amalgamation problem: embeddings of a common
// base into two factors.
struct AmalgamationProblem {
  Structure base;
  Structure left;
  Structure right;
  Embedding intoLeft;    // base -> left
  Embedding intoRight;   // base -> right
};

struct AmalgamResult {
  Structure amalgam;
  Embedding leftEmbedding;    // left  -> amalgam
  Embedding rightEmbedding;   // right -> amalgam
  // X elements the construction itself introduced, beyond the two factors:
  // balance padding first, then the fresh singleton-fiber witnesses added
  // by the chain variant.
  std::vector<int> introducedX;
  // Fresh U elements covering the introduced X (projection variant only).
  std::vector<int> introducedU;
};

// Disjoint amalgam inside the core class. The result contains the right
// factor with its original ids; left-only elements and any padding get
// fresh ids above everything in either factor. The two images intersect
// exactly in the image of the base.
AmalgamResult disjointAmalgamK0(const AmalgamationProblem& p);

// Variant for the relativized class ("knight-q" signature): Q is the union
// of the factor Q parts, and new order positions keep Q an initial segment.
AmalgamResult disjointAmalgamK0Q(const AmalgamationProblem& p);

// Variant for the projection extension ("knight-u" signature): U parts are
// amalgamated disjointly over the base, and every X element the core
// construction introduces receives its own fresh U element under P.
AmalgamResult disjointAmalgamK1(const AmalgamationProblem& p);

// Dispatch on the factors' signature preset.
AmalgamResult disjointAmalgam(const AmalgamationProblem& p);

}  // namespace forge
