#pragma once

#include <map>
#include <string>

#include "forge/chain.hpp"
#include "forge/ef.hpp"
#include "forge/limits.hpp"
#include "forge/structure.hpp"
#include "forge/verdict.hpp"

namespace forge {

// Recipe for gluing a guest structure onto a designated subset of a host.
// `u` names the receptor set in the host: a sort, or a unary relation (its
// carrier sort is then the receptor sort). `q` names the guest sort whose
// elements get identified with the receptor set; empty means the whole
// guest domain. Receptor and glued sorts must be unordered: an ordered set
// admits no nontrivial permutations, so it can never serve as a set of
// absolute indiscernibles.
struct MergerSpec {
  Signature hostSignature;
  Signature guestSignature;
  std::string u;
  std::string q;  // empty = whole guest domain
};

// Violation kinds: u-missing, u-not-unary, u-sort-ordered, q-missing,
// q-ordered, sort-clash, relation-clash.
Verdict checkMergerSpec(const MergerSpec& spec);

// Signature of the merger: host symbols plus the guest symbols with every
// identified sort rewritten to the receptor sort.
Signature mergedSignature(const MergerSpec& spec);

// The guest reduct of the merged signature; rewritten guest structures and
// guest parts of mergers live over it.
Signature mergedGuestSignature(const MergerSpec& spec);

struct MergerResult {
  Structure merged;
  std::map<int, int> guestMap;  // guest ids -> merged ids
  Structure rewrittenGuest;     // the guest re-sorted into mergedGuestSignature
};

// Glues guest onto host along `glue` (receptor id -> guest q-element id, a
// bijection). Host elements keep their ids; unglued guest elements get fresh
// ones. Throws PreconditionError on cardinality/bijection failures and
// SignatureError on spec violations.
MergerResult mergeStructures(const Structure& host, const Structure& guest,
                             const MergerSpec& spec,
                             const std::map<int, int>& glue);

// Restriction identities. The host part is literally equal to the host; the
// guest part is isomorphic to rewrittenGuest via guestMap.
Structure mergerHostPart(const Structure& merged, const MergerSpec& spec);
Structure mergerGuestPart(const Structure& merged, const MergerSpec& spec,
                          const std::map<int, int>& guestMap);

// CLI job file: {"host": path, "guest": path, "u": name, "q": name|null,
// "glue": [[receptorId, guestId], ...]}.
struct MergerJob {
  std::string hostPath;
  std::string guestPath;
  std::string u;
  std::string q;  // empty = whole guest domain
  std::map<int, int> glue;
};

MergerJob mergerJobFromJson(const Json& j);
Json mergerJobToJson(const MergerJob& job);

struct MergerEquivalenceReport {
  int depth = 0;
  EfResult hosts;    // game on the two final host stages
  EfResult mergers;  // game on the two mergers
  bool hostsEquivalent = false;
  bool mergersEquivalent = false;
};

// Finite reflection of "equivalent hosts + one guest = equivalent mergers":
// merges each chain's final stage with its guest (glue matches receptor and
// q elements in ascending id order) and plays the depth-round game on the
// hosts and on the mergers. Precondition: the guests' q-parts are
// isomorphic.
MergerEquivalenceReport mergerEquivalence(const Chain& hostChainA,
                                          const Structure& guestA,
                                          const Chain& hostChainB,
                                          const Structure& guestB,
                                          const MergerSpec& spec, int depth,
                                          const Limits& limits = {});

}  // namespace forge
