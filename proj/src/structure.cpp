#include "forge/structure.hpp"

#include <algorithm>
#include <map>

#include "forge/errors.hpp"

namespace forge {

struct Structure::Data {
  Signature sig;
  std::map<int, std::string> sortOfElem;
  std::map<std::string, std::vector<int>> bySort;
  std::map<std::string, std::set<std::vector<int>>> rels;
  std::map<std::string, std::vector<int>> orders;
  std::map<std::string, std::map<int, int>> ranks;
  int tupleTotal = 0;
};

namespace {

void validateTuple(const Signature& sig, const RelationSymbol& rel,
                   const std::vector<int>& tuple,
                   const std::map<int, std::string>& sortOfElem) {
  const auto& prof = rel.profile;
  std::size_t headLen;
  if (rel.graded) {
    if (tuple.size() < prof.size())
      throw SignatureError("tuple for graded relation " + rel.name +
                           " shorter than its profile");
    headLen = tuple.size() - (prof.size() - 1);
  } else {
    if (tuple.size() != prof.size())
      throw SignatureError("tuple for relation " + rel.name +
                           " has arity " + std::to_string(tuple.size()) +
                           ", expected " + std::to_string(prof.size()));
    headLen = 1;
  }
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    auto it = sortOfElem.find(tuple[i]);
    if (it == sortOfElem.end())
      throw SignatureError("tuple for " + rel.name +
                           " mentions unknown element " +
                           std::to_string(tuple[i]));
    const std::string& want =
        (i < headLen) ? prof[0] : prof[1 + (i - headLen)];
    if (it->second != want)
      throw SignatureError("tuple for " + rel.name + ": element " +
                           std::to_string(tuple[i]) + " has sort " +
                           it->second + ", expected " + want);
  }
  (void)sig;
}

}  // namespace

Structure::Structure() {
  static const auto empty = std::make_shared<const Data>();
  data_ = empty;
}
Structure::Structure(std::shared_ptr<const Data> data)
    : data_(std::move(data)) {}

const Signature& Structure::signature() const { return data_->sig; }

std::vector<int> Structure::allElements() const {
  std::vector<int> out;
  out.reserve(data_->sortOfElem.size());
  for (const auto& [id, s] : data_->sortOfElem) out.push_back(id);
  return out;
}

const std::vector<int>& Structure::sortElements(const std::string& sort) const {
  auto it = data_->bySort.find(sort);
  if (it == data_->bySort.end())
    throw SignatureError("unknown sort: " + sort);
  return it->second;
}

bool Structure::hasElement(int id) const {
  return data_->sortOfElem.count(id) > 0;
}

const std::string& Structure::sortOf(int id) const {
  auto it = data_->sortOfElem.find(id);
  if (it == data_->sortOfElem.end())
    throw SignatureError("unknown element id: " + std::to_string(id));
  return it->second;
}

int Structure::elementCount() const {
  return static_cast<int>(data_->sortOfElem.size());
}

int Structure::sortCount(const std::string& sort) const {
  return static_cast<int>(sortElements(sort).size());
}

int Structure::maxId() const {
  if (data_->sortOfElem.empty()) return -1;
  return data_->sortOfElem.rbegin()->first;
}

const std::set<std::vector<int>>& Structure::tuples(
    const std::string& relation) const {
  auto it = data_->rels.find(relation);
  if (it == data_->rels.end())
    throw SignatureError("unknown relation: " + relation);
  return it->second;
}

bool Structure::hasTuple(const std::string& relation,
                         const std::vector<int>& t) const {
  return tuples(relation).count(t) > 0;
}

int Structure::tupleCount() const { return data_->tupleTotal; }

const std::vector<int>& Structure::order(const std::string& sort) const {
  auto it = data_->orders.find(sort);
  if (it == data_->orders.end())
    throw SignatureError("sort is not ordered: " + sort);
  return it->second;
}

int Structure::rank(const std::string& sort, int id) const {
  auto it = data_->ranks.find(sort);
  if (it == data_->ranks.end())
    throw SignatureError("sort is not ordered: " + sort);
  auto jt = it->second.find(id);
  if (jt == it->second.end())
    throw SignatureError("element " + std::to_string(id) + " not in sort " +
                         sort);
  return jt->second;
}

bool Structure::orderLess(const std::string& sort, int a, int b) const {
  return rank(sort, a) < rank(sort, b);
}

bool Structure::orderLeq(const std::string& sort, int a, int b) const {
  return rank(sort, a) <= rank(sort, b);
}

Structure Structure::restrictToElements(const std::vector<int>& keep) const {
  std::set<int> keepSet(keep.begin(), keep.end());
  Builder b(data_->sig);
  for (const auto& [id, sort] : data_->sortOfElem)
    if (keepSet.count(id)) b.addElement(id, sort);
  for (const auto& [rel, tuples] : data_->rels) {
    for (const auto& t : tuples) {
      bool all = true;
      for (int e : t)
        if (!keepSet.count(e)) {
          all = false;
          break;
        }
      if (all) b.addTuple(rel, t);
    }
  }
  for (const auto& [sort, ord] : data_->orders) {
    std::vector<int> sub;
    for (int e : ord)
      if (keepSet.count(e)) sub.push_back(e);
    b.setOrder(sort, sub);
  }
  return b.build();
}

Structure Structure::restrictToSignature(const Signature& target) const {
  for (const auto& s : target.sorts)
    if (!data_->sig.hasSort(s))
      throw SignatureError("restrictToSignature: sort " + s +
                           " absent from source signature");
  for (const auto& r : target.relations) {
    const RelationSymbol* src = data_->sig.relation(r.name);
    if (!src || src->profile != r.profile || src->graded != r.graded)
      throw SignatureError("restrictToSignature: relation " + r.name +
                           " absent or mismatched in source signature");
  }
  for (const auto& s : target.orderedSorts)
    if (!data_->sig.isOrdered(s))
      throw SignatureError("restrictToSignature: sort " + s +
                           " is not ordered in the source signature");

  Builder b(target);
  for (const auto& [id, sort] : data_->sortOfElem)
    if (target.hasSort(sort)) b.addElement(id, sort);
  for (const auto& r : target.relations)
    for (const auto& t : data_->rels.at(r.name)) b.addTuple(r.name, t);
  for (const auto& s : target.orderedSorts) b.setOrder(s, data_->orders.at(s));
  return b.build();
}

bool Structure::operator==(const Structure& other) const {
  if (data_ == other.data_) return true;
  return data_->sig == other.data_->sig &&
         data_->sortOfElem == other.data_->sortOfElem &&
         data_->rels == other.data_->rels &&
         data_->orders == other.data_->orders;
}

Structure::Builder::Builder(Signature sig)
    : data_(std::make_shared<Structure::Data>()) {
  data_->sig = std::move(sig);
}

Structure::Builder::Builder(const Structure& base)
    : data_(std::make_shared<Structure::Data>(*base.data_)) {}

Structure::Builder& Structure::Builder::addElement(int id,
                                                   const std::string& sort) {
  if (id < 0)
    throw SignatureError("element ids must be non-negative, got " +
                         std::to_string(id));
  if (!data_->sig.hasSort(sort))
    throw SignatureError("addElement: unknown sort " + sort);
  auto [it, inserted] = data_->sortOfElem.emplace(id, sort);
  if (!inserted && it->second != sort)
    throw SignatureError("element " + std::to_string(id) +
                         " added with two different sorts");
  return *this;
}

Structure::Builder& Structure::Builder::addTuple(const std::string& relation,
                                                 std::vector<int> tuple) {
  if (!data_->sig.relation(relation))
    throw SignatureError("addTuple: unknown relation " + relation);
  data_->rels[relation].insert(std::move(tuple));
  return *this;
}

Structure::Builder& Structure::Builder::setOrder(const std::string& sort,
                                                 std::vector<int> order) {
  if (!data_->sig.isOrdered(sort))
    throw SignatureError("setOrder: sort " + sort + " is not ordered");
  data_->orders[sort] = std::move(order);
  return *this;
}

Structure Structure::Builder::build() {
  auto& d = *data_;

  d.bySort.clear();
  for (const auto& s : d.sig.sorts) d.bySort[s];
  for (const auto& [id, sort] : d.sortOfElem) d.bySort[sort].push_back(id);

  for (const auto& [rel, tuples] : d.rels) {
    const RelationSymbol* sym = d.sig.relation(rel);
    if (!sym) throw SignatureError("tuples given for unknown relation " + rel);
    for (const auto& t : tuples) validateTuple(d.sig, *sym, t, d.sortOfElem);
  }
  for (const auto& r : d.sig.relations) d.rels[r.name];

  d.ranks.clear();
  for (const auto& s : d.sig.orderedSorts) {
    auto it = d.orders.find(s);
    if (it == d.orders.end()) {
      d.orders[s] = d.bySort[s];  // ascending id default
      it = d.orders.find(s);
    } else {
      std::vector<int> sorted = it->second;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != d.bySort[s] ||
          std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw SignatureError("order for sort " + s +
                             " is not a permutation of its elements");
    }
    auto& rank = d.ranks[s];
    for (std::size_t i = 0; i < it->second.size(); ++i)
      rank[it->second[i]] = static_cast<int>(i);
  }
  for (const auto& [sort, ord] : d.orders)
    if (!d.sig.isOrdered(sort))
      throw SignatureError("order given for unordered sort " + sort);

  d.tupleTotal = 0;
  for (const auto& [rel, tuples] : d.rels)
    d.tupleTotal += static_cast<int>(tuples.size());

  auto frozen = std::shared_ptr<const Structure::Data>(std::move(data_));
  data_ = nullptr;
  return Structure(frozen);
}

}  // namespace forge
