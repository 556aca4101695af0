#include "forge/signature.hpp"

#include <algorithm>

namespace forge {

bool Signature::hasSort(const std::string& s) const {
  return std::find(sorts.begin(), sorts.end(), s) != sorts.end();
}

bool Signature::isOrdered(const std::string& s) const {
  return std::find(orderedSorts.begin(), orderedSorts.end(), s) !=
         orderedSorts.end();
}

const RelationSymbol* Signature::relation(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

int Signature::sortIndex(const std::string& s) const {
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i] == s) return static_cast<int>(i);
  return -1;
}

bool Signature::operator==(const Signature& other) const {
  if (sorts != other.sorts || orderedSorts != other.orderedSorts) return false;
  if (relations.size() != other.relations.size()) return false;
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const auto& a = relations[i];
    const auto& b = other.relations[i];
    if (a.name != b.name || a.profile != b.profile || a.graded != b.graded)
      return false;
  }
  return true;
}

std::optional<Signature> presetSignature(const std::string& name) {
  if (name == "knight") {
    Signature s;
    s.sorts = {"X", "Y"};
    s.orderedSorts = {"Y"};
    s.relations = {{"g", {"X", "Y", "Y"}, false}, {"G", {"X", "Y", "Y"}, true}};
    return s;
  }
  if (name == "knight-u") {
    Signature s;
    s.sorts = {"X", "Y", "U"};
    s.orderedSorts = {"Y"};
    s.relations = {{"g", {"X", "Y", "Y"}, false},
                   {"G", {"X", "Y", "Y"}, true},
                   {"P", {"X", "U"}, false}};
    return s;
  }
  if (name == "knight-q") {
    Signature s;
    s.sorts = {"X", "Y"};
    s.orderedSorts = {"Y"};
    s.relations = {{"g", {"X", "Y", "Y"}, false},
                   {"G", {"X", "Y", "Y"}, true},
                   {"Q", {"Y"}, false}};
    return s;
  }
  if (name == "projection") {
    Signature s;
    s.sorts = {"A", "B"};
    s.orderedSorts = {};
    s.relations = {{"p", {"A", "B"}, false}};
    return s;
  }
  if (name == "meet") {
    Signature s;
    s.sorts = {"X", "Y"};
    s.orderedSorts = {"X"};
    s.relations = {{"f", {"Y", "Y", "X"}, false}};
    return s;
  }
  return std::nullopt;
}

std::optional<std::string> presetName(const Signature& sig) {
  static const char* names[] = {"knight", "knight-u", "knight-q", "projection",
                                "meet"};
  for (const char* n : names) {
    auto s = presetSignature(n);
    if (s && *s == sig) return std::string(n);
  }
  return std::nullopt;
}

}  // namespace forge
