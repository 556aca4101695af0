#include "forge/embedding.hpp"

#include <set>

#include "forge/errors.hpp"

namespace forge {

int Embedding::apply(int id) const {
  auto it = map.find(id);
  if (it == map.end())
    throw PreconditionError("embedding undefined on element " +
                            std::to_string(id));
  return it->second;
}

std::vector<int> Embedding::applyTuple(const std::vector<int>& t) const {
  std::vector<int> out;
  out.reserve(t.size());
  for (int e : t) out.push_back(apply(e));
  return out;
}

Verdict Embedding::validate() const {
  Verdict v;
  if (!(source.signature() == target.signature())) {
    v.fail("signature-mismatch", "source and target signatures differ");
    return v;
  }

  std::map<int, int> inverse;
  for (int e : source.allElements()) {
    auto it = map.find(e);
    if (it == map.end()) {
      v.fail("not-total", "no image for element " + std::to_string(e));
      continue;
    }
    if (!target.hasElement(it->second)) {
      v.fail("image-missing", "image " + std::to_string(it->second) +
                                  " of " + std::to_string(e) +
                                  " is not in the target");
      continue;
    }
    if (source.sortOf(e) != target.sortOf(it->second))
      v.fail("sort-changed", "element " + std::to_string(e) + " has sort " +
                                 source.sortOf(e) + " but its image has sort " +
                                 target.sortOf(it->second));
    auto [jt, inserted] = inverse.emplace(it->second, e);
    if (!inserted)
      v.fail("not-injective", "elements " + std::to_string(jt->second) +
                                  " and " + std::to_string(e) +
                                  " share the image " +
                                  std::to_string(it->second));
  }
  if (!v.ok) return v;

  for (const auto& s : source.signature().orderedSorts) {
    const auto& ord = source.order(s);
    for (std::size_t i = 0; i + 1 < ord.size(); ++i)
      if (!target.orderLess(s, apply(ord[i]), apply(ord[i + 1]))) {
        v.fail("order-broken", "sort " + s + ": " + std::to_string(ord[i]) +
                                   " < " + std::to_string(ord[i + 1]) +
                                   " is not preserved");
      }
  }

  for (const auto& rel : source.signature().relations) {
    for (const auto& t : source.tuples(rel.name)) {
      if (!target.hasTuple(rel.name, applyTuple(t)))
        v.fail("tuple-lost",
               rel.name + " tuple is not preserved by the map");
    }
    // Converse direction: no target tuple over the image may be missing
    // from the source.
    for (const auto& t : target.tuples(rel.name)) {
      std::vector<int> pre;
      pre.reserve(t.size());
      bool inImage = true;
      for (int e : t) {
        auto it = inverse.find(e);
        if (it == inverse.end()) {
          inImage = false;
          break;
        }
        pre.push_back(it->second);
      }
      if (inImage && !source.hasTuple(rel.name, pre))
        v.fail("tuple-gained",
               rel.name + " holds of image elements but not of their sources");
    }
  }
  return v;
}

Embedding Embedding::inclusion(const Structure& sub, const Structure& super) {
  Embedding e{sub, super, {}};
  for (int id : sub.allElements()) {
    if (!super.hasElement(id))
      throw PreconditionError("inclusion: element " + std::to_string(id) +
                              " is absent from the superstructure");
    e.map[id] = id;
  }
  return e;
}

Embedding compose(const Embedding& first, const Embedding& second) {
  if (!(first.target == second.source))
    throw PreconditionError(
        "compose: target of the first map differs from source of the second");
  Embedding out{first.source, second.target, {}};
  for (const auto& [a, b] : first.map) out.map[a] = second.apply(b);
  return out;
}

}  // namespace forge
