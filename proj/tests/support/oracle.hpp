#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written directly against the definitions, with none of
// the library's helper machinery, so that a bug would have to appear twice
// to go unnoticed. All of it is exponential and meant for small structures.

#include <set>
#include <string>
#include <vector>

#include "forge/structure.hpp"

namespace oracle {

// Core-class axioms evaluated clause by clause on a raw tuple scan. On
// failure, *whyNot (when given) receives a short description of the first
// clause that failed.
bool satisfiesCore(const forge::Structure& s, std::string* whyNot = nullptr);

// Every core structure with |X| <= maxX, |Y| <= maxY, one per isomorphism
// class: enumerates all g tables over canonical element sets, derives the
// naming tuples, filters by satisfiesCore and thins with bruteIsomorphic.
std::vector<forge::Structure> enumerateCoreRaw(int maxX, int maxY);

// Tries every sort-preserving bijection (rank-preserving on ordered sorts)
// and verifies every relation in both directions.
bool bruteIsomorphic(const forge::Structure& a, const forge::Structure& b);

int bruteAutomorphismCount(const forge::Structure& a);

// Game-tree evaluation of the back-and-forth game, no memoization.
bool efDuplicatorWins(const forge::Structure& a, const forge::Structure& b,
                      int rounds);

// Function-style closure by fixpoint: grows the seed with a tuple's last
// entry whenever the earlier entries already lie in the set.
std::set<int> closureFixpoint(const forge::Structure& s,
                              const std::vector<int>& seed,
                              const std::vector<std::string>& ops);

long long treeNodeCountClosedForm(int alphabetSize, int depth);
long long treeBranchCountClosedForm(int alphabetSize, int depth);

// The meet law read over every unordered triple of Y with all three pivots.
// Assumes the f table is total and single-valued (checked separately).
bool meetLawHolds(const forge::Structure& m);

// Least coordinate where two distinct 0/1 vectors differ.
int firstDifference(const std::vector<int>& u, const std::vector<int>& v);

// Shared fixtures. Ids follow the documentation examples: X elements first.
// B0: X={0,1}, Y={2<3}, g(.,2)=2, g(0,3)=2, g(1,3)=3, naming tuple (0,3,2).
forge::Structure makeB0();
// Minimal nonempty core structure: X={0}, Y={1}, g(0,1)=1.
forge::Structure makeMinimalK0();

}  // namespace oracle
