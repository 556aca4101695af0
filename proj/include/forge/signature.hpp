#pragma once

#include <optional>
#include <string>
#include <vector>

namespace forge {

// A relation symbol. Profile entries are sort names.
// Graded relations are families R_1, R_2, ...: a stored tuple of length
// L >= profile.size() represents an R_n fact with n = L - (profile.size()-1).
// Its first n entries all have sort profile[0]; the remaining entries have
// sorts profile[1], profile[2], ... in order.  E.g. with profile [X, Y, Y]
// the tuple (x_1..x_n, y, z) says R_n(x_1..x_n; y, z).
struct RelationSymbol {
  std::string name;
  std::vector<std::string> profile;
  bool graded = false;
};

struct Signature {
  std::vector<std::string> sorts;
  std::vector<RelationSymbol> relations;
  std::vector<std::string> orderedSorts;  // subset of sorts, each linearly ordered

  bool hasSort(const std::string& s) const;
  bool isOrdered(const std::string& s) const;
  const RelationSymbol* relation(const std::string& name) const;
  int sortIndex(const std::string& s) const;  // -1 if absent

  bool operator==(const Signature& other) const;
};

// Named signature presets used throughout the interchange format.
// Returns nullopt for an unknown preset name.
std::optional<Signature> presetSignature(const std::string& name);

// Reverse lookup: the preset name if this signature equals one, else nullopt.
std::optional<std::string> presetName(const Signature& sig);

}  // namespace forge
