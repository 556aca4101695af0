#pragma once

#include <map>
#include <optional>
#include <set>

#include "forge/limits.hpp"
#include "forge/structure.hpp"
#include "forge/verdict.hpp"

namespace forge {

// Class membership checkers. Each accepts exactly its preset signature
// ("knight", "knight-u", "knight-q") and reports every violated axiom.

// Core class: g a total function X x Y -> Y with g(x,y) <= y, g(.,y) onto
// {z : z <= y}, and every fiber {x : g(x,y)=z} for z < y named by a graded
// G tuple (pairwise-distinct arguments, closed under permutation, never for
// z = y).
Verdict checkK0(const Structure& s);

// Extension by a sort U and a total projection P : X -> U; the (X,Y,g,G)
// part must pass checkK0.
Verdict checkK1(const Structure& s);

// Relativized class: unary Q over Y marking an initial segment of the
// order. X lies inside the relativized part by convention, so Q is stored
// on Y only.
Verdict checkRelativized(const Structure& s);

// Dispatch by the structure's signature preset. Unknown signatures throw.
Verdict checkMembership(const Structure& s);

// Adjoins m fresh X elements with g(x,y) = y for every y; G is untouched.
// Works on "knight" and "knight-q" structures.
Structure padX(const Structure& a, int m);

// Fast read access to a knight-shaped structure (any signature containing
// X, Y and g). Intended for structures that already passed their checker.
class KnightView {
 public:
  explicit KnightView(const Structure& s);

  const Structure& structure() const { return *s_; }
  const std::vector<int>& xs() const { return xs_; }
  const std::vector<int>& ysInOrder() const { return ys_; }

  std::optional<int> g(int x, int y) const;
  int gAt(int x, int y) const;  // throws if missing
  // {x : g(x,y) = z}; empty set when none.
  const std::set<int>& fiber(int y, int z) const;

 private:
  const Structure* s_;
  std::vector<int> xs_;
  std::vector<int> ys_;
  std::map<std::pair<int, int>, int> gMap_;
  std::map<std::pair<int, int>, std::set<int>> fibers_;
  std::set<int> empty_;
};

// All K0 structures with |X| <= maxX and |Y| <= maxY, one per isomorphism
// class, in a deterministic order. Elements are numbered 0..n-1 with X
// first; G relations are derived from the g table.
std::vector<Structure> enumerateKnightStructures(int maxX, int maxY);

// The same for any core-class preset, every sort bounded by maxPerSort:
// "knight" defers to the above; "knight-q" adds every initial-segment Q;
// "knight-u" adds every projection P onto up to maxPerSort U elements.
std::vector<Structure> enumerateClassStructures(const std::string& preset,
                                                int maxPerSort);

// A pair A ⊊ B of K0 structures, B over elements of A plus more, with the
// inclusion a valid embedding and |X^B \ X^A| >= |Y^B \ Y^A|.
struct GoodPair {
  Structure small;
  Structure big;
};

// All good pairs with per-sort size of B bounded by maxPerSort, up to
// isomorphism of pairs, deterministic order. Only proper extensions are
// returned (A = B amalgamates to a no-op). For the extended presets the
// good-pair inequality still reads off the X and Y sorts alone.
std::vector<GoodPair> enumerateGoodPairs(const std::string& preset,
                                         int maxPerSort);

}  // namespace forge
