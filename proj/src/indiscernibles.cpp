#include "forge/indiscernibles.hpp"

#include <algorithm>
#include <random>

#include "forge/errors.hpp"
#include "forge/iso.hpp"

namespace forge {

namespace {

std::vector<int> designatedSet(const Structure& s, const std::string& pred) {
  if (s.signature().hasSort(pred)) return s.sortElements(pred);
  const RelationSymbol* rel = s.signature().relation(pred);
  if (!rel || rel->profile.size() != 1)
    throw PreconditionError("\"" + pred +
                            "\" names neither a sort nor a unary relation");
  std::set<int> out;
  for (const auto& t : s.tuples(pred)) out.insert(t[0]);
  return {out.begin(), out.end()};
}

}  // namespace

IndiscernibilityReport checkAbsoluteIndiscernibles(const Chain& c,
                                                   const std::string& pred,
                                                   std::uint64_t seed,
                                                   const Limits& limits) {
  if (c.stages.empty()) throw PreconditionError("chain has no stages");
  IndiscernibilityReport report;
  report.set = designatedSet(c.finalStage(), pred);

  for (size_t i = 0; i < c.stages.size(); ++i) {
    const Structure& stage = c.stages[i];
    const std::vector<int> set = designatedSet(stage, pred);
    const size_t n = set.size();

    std::vector<std::vector<int>> perms;
    if (int(n) <= limits.exhaustivePermutationLimit) {
      std::vector<int> p = set;
      do {
        perms.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
    } else {
      report.sampled = true;
      std::mt19937_64 rng(seed);
      std::set<std::vector<int>> drawn;
      for (int k = 0; k < limits.permutationSample; ++k) {
        std::vector<int> p = set;
        std::shuffle(p.begin(), p.end(), rng);
        if (drawn.insert(p).second) perms.push_back(std::move(p));
      }
    }

    for (const auto& p : perms) {
      EmbeddingSearch search;
      search.maxResults = 1;
      search.nodeGuard = limits.nodeGuard;
      for (size_t k = 0; k < n; ++k) search.fixed[set[k]] = p[k];
      int extendedAt = -1;
      for (size_t j = i; j < c.stages.size(); ++j) {
        if (findEmbedding(stage, c.stages[j], search)) {
          extendedAt = int(j);
          break;
        }
      }
      report.items.push_back({int(i), p, extendedAt});
      if (extendedAt == -1) report.allExtend = false;
    }
  }
  return report;
}

}  // namespace forge
