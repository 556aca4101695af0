#include "forge/ef.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>
#include <unordered_set>

#include "forge/errors.hpp"

namespace forge {

namespace {

struct H128 {
  std::uint64_t lo = 0xcbf29ce484222325ull;
  std::uint64_t hi = 0x9e3779b97f4a7c15ull;

  void mix(std::uint64_t v) {
    lo = (lo ^ v) * 0x0000000100000001b3ull;
    lo ^= lo >> 29;
    hi = (hi ^ ((v << 31) | (v >> 33))) * 0xff51afd7ed558ccdull;
    hi ^= hi >> 33;
  }
  void mix(const H128& o) {
    mix(o.lo);
    mix(o.hi);
  }
  bool operator==(const H128& o) const { return lo == o.lo && hi == o.hi; }
  bool operator<(const H128& o) const {
    return lo != o.lo ? lo < o.lo : hi < o.hi;
  }
};

std::uint64_t tupleKey(int relIdx, const std::vector<int>& ids) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto step = [&h](std::uint64_t v) {
    h = (h ^ v) * 0x0000000100000001b3ull;
  };
  step(static_cast<std::uint64_t>(relIdx) + 1);
  for (int id : ids) step(static_cast<std::uint64_t>(id) + 2);
  return h;
}

// One structure prepared for fast type computation.
struct Side {
  const Structure* s = nullptr;
  std::vector<int> elems;    // ascending ids
  std::vector<int> sortIdx;  // per element position: index into signature.sorts
  std::vector<int> rank;     // rank in its ordered sort, -1 if unordered
  std::unordered_set<std::uint64_t> tupleKeys;
  // tables[r]: depth-r type of every (R-r)-index-tuple, flattened row-major.
  std::vector<std::vector<H128>> tables;

  void prepare(const Structure& st) {
    s = &st;
    elems = st.allElements();
    sortIdx.resize(elems.size());
    rank.resize(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const std::string& sort = st.sortOf(elems[i]);
      sortIdx[i] = st.signature().sortIndex(sort);
      rank[i] = st.signature().isOrdered(sort) ? st.rank(sort, elems[i]) : -1;
    }
    const auto& rels = st.signature().relations;
    std::size_t total = 0;
    for (const auto& r : rels) total += st.tuples(r.name).size();
    tupleKeys.reserve(total * 2);
    for (std::size_t ri = 0; ri < rels.size(); ++ri)
      for (const auto& t : st.tuples(rels[ri].name))
        tupleKeys.insert(tupleKey(static_cast<int>(ri), t));
  }

  int n() const { return static_cast<int>(elems.size()); }
};

// Arities present per relation, shared by both sides so the pattern space
// they hash over is identical.
using ArityTable = std::vector<std::vector<int>>;

ArityTable sharedArities(const Structure& a, const Structure& b) {
  const auto& rels = a.signature().relations;
  ArityTable out(rels.size());
  for (std::size_t ri = 0; ri < rels.size(); ++ri) {
    std::set<int> lens;
    for (const auto& t : a.tuples(rels[ri].name))
      lens.insert(static_cast<int>(t.size()));
    for (const auto& t : b.tuples(rels[ri].name))
      lens.insert(static_cast<int>(t.size()));
    out[ri].assign(lens.begin(), lens.end());
  }
  return out;
}

// Atomic diagram of the index tuple idx (positions into side.elems), hashed
// in a label-independent, side-independent order.
H128 atomicType(const Side& side, const ArityTable& arities,
                const std::vector<int>& idx) {
  H128 h;
  int j = static_cast<int>(idx.size());
  for (int i = 0; i < j; ++i) h.mix(static_cast<std::uint64_t>(side.sortIdx[idx[i]]));
  for (int i = 0; i < j; ++i)
    for (int k = i + 1; k < j; ++k) {
      int cmp;
      if (idx[i] == idx[k])
        cmp = 0;
      else if (side.sortIdx[idx[i]] != side.sortIdx[idx[k]] ||
               side.rank[idx[i]] < 0)
        cmp = 3;  // unrelated
      else
        cmp = side.rank[idx[i]] < side.rank[idx[k]] ? 1 : 2;
      h.mix(static_cast<std::uint64_t>(cmp));
    }
  std::vector<int> ids(8);
  for (std::size_t ri = 0; ri < arities.size(); ++ri) {
    for (int m : arities[ri]) {
      if (j == 0) continue;
      // Odometer over all m-position patterns drawn from the tuple.
      std::vector<int> pat(m, 0);
      std::uint64_t bits = 0;
      int patCount = 0;
      while (true) {
        ids.clear();
        for (int p = 0; p < m; ++p) ids.push_back(side.elems[idx[pat[p]]]);
        bool present =
            side.tupleKeys.count(tupleKey(static_cast<int>(ri), ids)) > 0;
        bits = (bits << 1) | (present ? 1u : 0u);
        if (++patCount == 64) {
          h.mix(bits);
          bits = 0;
          patCount = 0;
        }
        int p = m - 1;
        while (p >= 0 && pat[p] == j - 1) pat[p--] = 0;
        if (p < 0) break;
        ++pat[p];
      }
      h.mix(bits);
      h.mix(static_cast<std::uint64_t>(patCount) + 7);
    }
  }
  return h;
}

// Depth-r type of a tuple, assuming tables for depth r-1 are built (or r==1,
// in which case child types are atomic).
H128 typeOf(const Side& side, const ArityTable& arities,
            const std::vector<int>& idx, int r) {
  H128 h = atomicType(side, arities, idx);
  std::vector<H128> children;
  children.reserve(side.n());
  std::vector<int> ext = idx;
  ext.push_back(0);
  for (int e = 0; e < side.n(); ++e) {
    ext.back() = e;
    if (r == 1) {
      children.push_back(atomicType(side, arities, ext));
    } else {
      std::size_t flat = 0;
      for (int v : ext) flat = flat * side.n() + static_cast<std::size_t>(v);
      children.push_back(side.tables[r - 1][flat]);
    }
  }
  std::sort(children.begin(), children.end());
  children.erase(std::unique(children.begin(), children.end()),
                 children.end());
  for (const auto& c : children) h.mix(c);
  h.mix(static_cast<std::uint64_t>(children.size()) + 11);
  return h;
}

void buildTables(Side& side, const ArityTable& arities, int rounds) {
  side.tables.assign(rounds + 1, {});
  int n = side.n();
  for (int r = 1; r <= rounds; ++r) {
    int j = rounds - r;  // tuple length at this level
    std::size_t count = 1;
    for (int i = 0; i < j; ++i) count *= static_cast<std::size_t>(n);
    auto& table = side.tables[r];
    table.resize(count);
    if (n == 0) {
      if (j == 0) table[0] = typeOf(side, arities, {}, r);
      continue;
    }
    auto fill = [&](std::size_t from, std::size_t to) {
      std::vector<int> idx(j);
      for (std::size_t flat = from; flat < to; ++flat) {
        std::size_t rem = flat;
        for (int i = j - 1; i >= 0; --i) {
          idx[i] = static_cast<int>(rem % n);
          rem /= n;
        }
        table[flat] = typeOf(side, arities, idx, r);
      }
    };
    std::size_t work = count * static_cast<std::size_t>(n);
    unsigned threads = std::thread::hardware_concurrency();
    if (threads > 8) threads = 8;
    if (work >= 200000 && threads > 1 && count >= threads) {
      std::vector<std::thread> pool;
      std::size_t chunk = (count + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        std::size_t from = t * chunk;
        std::size_t to = std::min(count, from + chunk);
        if (from >= to) break;
        pool.emplace_back(fill, from, to);
      }
      for (auto& th : pool) th.join();
    } else {
      fill(0, count);
    }
  }
}

std::string positionKey(const std::vector<std::pair<int, int>>& pos, int r) {
  std::vector<std::pair<int, int>> sorted = pos;
  std::sort(sorted.begin(), sorted.end());
  std::string key = std::to_string(r) + ":";
  for (const auto& [x, y] : sorted)
    key += std::to_string(x) + "," + std::to_string(y) + ";";
  return key;
}

}  // namespace

EfResult efGame(const Structure& a, const Structure& b, int rounds,
                const Limits& limits) {
  if (!(a.signature() == b.signature()))
    throw PreconditionError("EF game requires equal signatures");
  if (rounds < 0) throw PreconditionError("EF game requires rounds >= 0");

  EfResult result;
  result.rounds = rounds;
  if (rounds == 0) return result;  // empty game: Duplicator

  int n = std::max(a.elementCount(), b.elementCount());
  double work = 0;
  double pw = 1;
  for (int r = 0; r < rounds; ++r) {
    pw *= std::max(1, n);
    work += pw;
  }
  if (work > static_cast<double>(limits.positionGuard))
    throw GuardExceeded(
        "ef-positions",
        "EF table size estimate " + std::to_string(static_cast<long long>(work)) +
            " exceeds the guard of " + std::to_string(limits.positionGuard));
  result.workEstimate = static_cast<std::int64_t>(work);

  ArityTable arities = sharedArities(a, b);
  Side sa, sb;
  sa.prepare(a);
  sb.prepare(b);
  buildTables(sa, arities, rounds);
  buildTables(sb, arities, rounds);

  auto typeAt = [&](const Side& side, const std::vector<int>& idx, int r) {
    if (r == 0) return atomicType(side, arities, idx);
    std::size_t flat = 0;
    for (int v : idx) flat = flat * side.n() + static_cast<std::size_t>(v);
    return side.tables[r][flat];
  };

  if (sa.tables[rounds][0] == sb.tables[rounds][0]) {
    result.winner = EfResult::Winner::Duplicator;
    // Strategy table: breadth-first over reachable positions, responding
    // with the least element whose remaining-depth type matches.
    struct Node {
      std::vector<int> ia, ib;  // index tuples, aligned
      int r;
    };
    std::vector<Node> queue{{{}, {}, rounds}};
    std::set<std::string> seen;
    std::size_t head = 0;
    while (head < queue.size()) {
      Node node = queue[head++];
      if (node.r == 0) continue;
      std::vector<std::pair<int, int>> position;
      for (std::size_t i = 0; i < node.ia.size(); ++i)
        position.push_back({sa.elems[node.ia[i]], sb.elems[node.ib[i]]});
      for (int side = 0; side < 2; ++side) {
        const Side& mine = side == 0 ? sa : sb;
        const Side& theirs = side == 0 ? sb : sa;
        for (int e = 0; e < mine.n(); ++e) {
          if (result.strategy.size() >=
              static_cast<std::size_t>(limits.strategyTableCap)) {
            result.strategyTruncated = true;
            break;
          }
          std::vector<int> extMine = side == 0 ? node.ia : node.ib;
          extMine.push_back(e);
          H128 want = typeAt(mine, extMine, node.r - 1);
          int response = -1;
          std::vector<int> extTheirs = side == 0 ? node.ib : node.ia;
          extTheirs.push_back(0);
          for (int f = 0; f < theirs.n(); ++f) {
            extTheirs.back() = f;
            if (typeAt(theirs, extTheirs, node.r - 1) == want) {
              response = theirs.elems[f];
              extTheirs.back() = f;
              break;
            }
          }
          result.strategy.push_back(
              {position, side, mine.elems[e], response});
          if (response >= 0 && node.r > 1) {
            int fIdx = 0;
            for (int f = 0; f < theirs.n(); ++f)
              if (theirs.elems[f] == response) fIdx = f;
            Node child;
            child.r = node.r - 1;
            if (side == 0) {
              child.ia = node.ia;
              child.ia.push_back(e);
              child.ib = node.ib;
              child.ib.push_back(fIdx);
            } else {
              child.ib = node.ib;
              child.ib.push_back(e);
              child.ia = node.ia;
              child.ia.push_back(fIdx);
            }
            std::vector<std::pair<int, int>> childPos = position;
            childPos.push_back(side == 0
                                   ? std::make_pair(sa.elems[child.ia.back()],
                                                    response)
                                   : std::make_pair(response,
                                                    sb.elems[child.ib.back()]));
            std::string key = positionKey(childPos, child.r);
            if (seen.insert(key).second) queue.push_back(child);
          }
        }
        if (result.strategyTruncated) break;
      }
      if (result.strategyTruncated) break;
    }
    return result;
  }

  result.winner = EfResult::Winner::Spoiler;
  // Principal variation: keep the invariant that the current aligned tuples
  // have different depth-r types; pick the unmatched extension.
  std::vector<int> ia, ib;
  for (int r = rounds; r > 0; --r) {
    if (!(atomicType(sa, arities, ia) == atomicType(sb, arities, ib))) break;
    int pickSide = -1, pickIdx = -1;
    for (int side = 0; side < 2 && pickSide < 0; ++side) {
      const Side& mine = side == 0 ? sa : sb;
      const Side& theirs = side == 0 ? sb : sa;
      std::vector<int> extMine = side == 0 ? ia : ib;
      extMine.push_back(0);
      std::vector<int> extTheirs = side == 0 ? ib : ia;
      extTheirs.push_back(0);
      for (int e = 0; e < mine.n() && pickSide < 0; ++e) {
        extMine.back() = e;
        H128 mineType = typeAt(mine, extMine, r - 1);
        bool matched = false;
        for (int f = 0; f < theirs.n(); ++f) {
          extTheirs.back() = f;
          if (typeAt(theirs, extTheirs, r - 1) == mineType) {
            matched = true;
            break;
          }
        }
        if (!matched) {
          pickSide = side;
          pickIdx = e;
        }
      }
    }
    if (pickSide < 0) break;  // should not happen when types differ
    const Side& mine = pickSide == 0 ? sa : sb;
    const Side& theirs = pickSide == 0 ? sb : sa;
    // Duplicator's best resistance: an atomically consistent response if one
    // exists, else the least element.
    int response = -1;
    std::vector<int>& mineTuple = pickSide == 0 ? ia : ib;
    std::vector<int>& theirsTuple = pickSide == 0 ? ib : ia;
    std::vector<int> extMine = mineTuple;
    extMine.push_back(pickIdx);
    std::vector<int> extTheirs = theirsTuple;
    extTheirs.push_back(0);
    H128 wantAtomic = atomicType(mine, arities, extMine);
    for (int f = 0; f < theirs.n(); ++f) {
      extTheirs.back() = f;
      if (atomicType(theirs, arities, extTheirs) == wantAtomic) {
        response = f;
        break;
      }
    }
    if (response < 0 && theirs.n() > 0) response = 0;
    result.spoilerLine.push_back(
        {pickSide, mine.elems[pickIdx],
         response < 0 ? -1 : theirs.elems[response]});
    if (response < 0) break;
    mineTuple.push_back(pickIdx);
    theirsTuple.push_back(response);
  }
  return result;
}

}  // namespace forge
