#pragma once

#include <map>

#include "forge/structure.hpp"
#include "forge/verdict.hpp"

namespace forge {

// An embedding of finite relational structures: an injective, sort- and
// order-preserving map under which a tuple holds in the source iff its image
// holds in the target (isomorphism onto an induced substructure).
struct Embedding {
  Structure source;
  Structure target;
  std::map<int, int> map;

  int apply(int id) const;
  std::vector<int> applyTuple(const std::vector<int>& t) const;

  // Checks every embedding condition and reports all failures.
  Verdict validate() const;
  bool isValid() const { return validate().ok; }

  // Inclusion of `sub` into `super` by identical ids. Throws
  // PreconditionError if some element of sub is missing from super.
  static Embedding inclusion(const Structure& sub, const Structure& super);
};

// first: A -> B, second: B -> C; result A -> C.
Embedding compose(const Embedding& first, const Embedding& second);

}  // namespace forge
