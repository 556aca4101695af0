#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "forge/signature.hpp"

namespace forge {

// A finite many-sorted relational structure. Immutable: all mutation goes
// through Builder, copies are cheap (shared state).
//
// Elements are identified by arbitrary distinct non-negative ints. Ordered
// sorts carry an explicit linear order given as the list of element ids from
// least to greatest; if a Builder never sets one, ascending id order is used.
class Structure {
 public:
  class Builder;

  Structure();  // empty structure over the empty signature

  const Signature& signature() const;

  std::vector<int> allElements() const;  // ascending ids
  const std::vector<int>& sortElements(const std::string& sort) const;
  bool hasElement(int id) const;
  const std::string& sortOf(int id) const;  // throws if absent
  int elementCount() const;
  int sortCount(const std::string& sort) const;
  int maxId() const;  // -1 when empty

  const std::set<std::vector<int>>& tuples(const std::string& relation) const;
  bool hasTuple(const std::string& relation, const std::vector<int>& t) const;
  int tupleCount() const;

  // Linear order of an ordered sort, least first.
  const std::vector<int>& order(const std::string& sort) const;
  int rank(const std::string& sort, int id) const;
  bool orderLess(const std::string& sort, int a, int b) const;
  bool orderLeq(const std::string& sort, int a, int b) const;

  // Induced substructure on the given element set: keeps exactly the tuples
  // all of whose entries survive, and restricts orders.
  Structure restrictToElements(const std::vector<int>& keep) const;

  // Forgets sorts and relations absent from `target` (which must be a
  // sub-signature): drops elements of forgotten sorts and all tuples of
  // forgotten relations.
  Structure restrictToSignature(const Signature& target) const;

  bool operator==(const Structure& other) const;
  bool operator!=(const Structure& other) const { return !(*this == other); }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
  explicit Structure(std::shared_ptr<const Data> data);
  friend class Builder;
};

class Structure::Builder {
 public:
  explicit Builder(Signature sig);
  explicit Builder(const Structure& base);

  Builder& addElement(int id, const std::string& sort);
  Builder& addTuple(const std::string& relation, std::vector<int> tuple);
  // Full order for an ordered sort, least first. Must be a permutation of
  // that sort's elements at build() time.
  Builder& setOrder(const std::string& sort, std::vector<int> order);

  // Validates and freezes. Throws SignatureError on ill-sorted content.
  Structure build();

 private:
  std::shared_ptr<Structure::Data> data_;
};

}  // namespace forge
