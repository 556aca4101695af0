#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "forge/limits.hpp"
#include "forge/structure.hpp"
#include "forge/verdict.hpp"

namespace forge {

// One tree node: its path from the root (letters, each < alphabetSize), the
// guest structure attached to it, and the glue identifying each letter with
// one element of the guest's designated set. Tree relations use paths as
// names; guest elements carry ordinary ids, pairwise disjoint across nodes.
struct TreeNode {
  std::vector<int> path;
  Structure guest;
  std::map<int, int> glue;  // letter -> designated guest element
};

// A finite-depth splitting tree with a guest structure at every internal
// node. Nodes are the paths of length < depth, branches the paths of length
// exactly depth. The level, successor, and restriction relations are stored
// explicitly so a checker can audit them against the paths:
//   levelTuples        (n, v)    <=> |v| = n
//   successorTuples    (u, v)    <=> v extends u by one letter (both nodes)
//   restrictionTuples  (k, f, v) <=> the branch f cut at k equals v
// At every node the successors (branches, for nodes of length depth-1)
// correspond one-to-one with the guest's designated set via the glue.
struct TreeModel {
  int alphabetSize = 1;
  int depth = 1;
  std::string designated;  // sort or unary relation naming the guest set
  std::vector<TreeNode> nodes;             // level by level, lex within
  std::vector<std::vector<int>> branches;  // lex
  std::set<std::pair<int, std::vector<int>>> levelTuples;
  std::set<std::pair<std::vector<int>, std::vector<int>>> successorTuples;
  std::set<std::tuple<int, std::vector<int>, std::vector<int>>>
      restrictionTuples;
};

struct GuestTemplate {
  Structure guest;
  std::string designated;
};

// Full alphabetSize-splitting tree of the given depth with a fresh copy of
// the template guest at every node. The template's designated set must have
// exactly alphabetSize elements.
TreeModel buildTree(int alphabetSize, int depth, const GuestTemplate& tmpl,
                    const Limits& limits = {});

// Audits every TreeModel invariant; violation kinds include root-count,
// node-path, node-duplicate, node-orphan, branch-path, branch-duplicate,
// level-tuple-wrong, level-tuple-missing, successor-tuple-wrong,
// successor-tuple-missing, restriction-tuple-wrong,
// restriction-tuple-missing, guest-signature-mixed, guest-overlap,
// guest-invalid, designated-size, glue-invalid, successor-missing,
// successor-extra.
Verdict checkTree(const TreeModel& t, const Limits& limits = {});

// Guest-class callback bundle for joint embedding. `embed` receives the two
// guests to embed jointly (either pointer may be null: one null means plain
// extension of the other side, both null means a fresh guest) and must
// return a guest with exactly n designated elements plus the embedding maps
// for the sides present. `alphabet` picks that n from the two input trees'
// alphabet sizes.
struct GuestJointResult {
  Structure guest;
  std::map<int, int> mapA;
  std::map<int, int> mapB;
};

struct GuestJoint {
  std::string designated;
  std::function<int(int, int)> alphabet;
  std::function<GuestJointResult(const Structure*, const Structure*, int)>
      embed;
};

// Projection guests (designated set "B"): the common guest aligns the B
// elements in ascending-id order and pads each fiber to the larger size.
GuestJoint projectionGuestJoint();

// Core-class guests (designated set "X"): matched nodes amalgamate the two
// guests over the empty structure, single nodes pad X. The templates fix
// the common designated size; node guests of other isomorphism types may be
// refused.
GuestJoint knightGuestJoint(const Structure& templateA,
                            const Structure& templateB);

// Embedding of one tree into another: node paths to node paths, branch
// paths to branch paths, guest elements to guest elements (ids are globally
// disjoint, so one map covers all nodes).
struct TreeEmbedding {
  std::map<std::vector<int>, std::vector<int>> nodeMap;
  std::map<std::vector<int>, std::vector<int>> branchMap;
  std::map<int, int> guestMap;
};

struct TreeJointResult {
  TreeModel tree;
  TreeEmbedding first;
  TreeEmbedding second;
};

// Joint embedding of two equal-depth trees: identifies the roots, jointly
// embeds the root guests, matches successors through the glue, recurses on
// shared successors, extends one-sided subtrees, and attaches fresh full
// subtrees under successors matched by neither side. Guest failures are
// rethrown with the node path.
TreeJointResult treeJointEmbed(const TreeModel& t0, const TreeModel& t1,
                               const GuestJoint& ops,
                               const Limits& limits = {});

// Checks a claimed tree embedding: total and injective on nodes and
// branches, level/successor/restriction preservation, valid guest
// embeddings node by node, and glue compatibility.
Verdict validateTreeEmbedding(const TreeModel& from, const TreeModel& into,
                              const TreeEmbedding& emb);

// Directory layout: <dir>/tree.json plus <dir>/guests/node-<k>.json per
// node, referenced from the node list by relative path.
void saveTreeModel(const TreeModel& t, const std::string& dir);
TreeModel loadTreeModel(const std::string& dir);

}  // namespace forge
