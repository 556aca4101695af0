#include "forge/tree.hpp"

#include <algorithm>
#include <filesystem>

#include "forge/amalgam.hpp"
#include "forge/errors.hpp"
#include "forge/json_io.hpp"
#include "forge/knight.hpp"
#include "forge/projection.hpp"
#include "forge/signature.hpp"

namespace forge {

namespace {

std::string pathString(const std::vector<int>& p) {
  std::string out = "<";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p[i]);
  }
  return out + ">";
}

std::vector<int> designatedElements(const Structure& s,
                                    const std::string& name) {
  if (s.signature().hasSort(name)) return s.sortElements(name);
  const RelationSymbol* r = s.signature().relation(name);
  if (r && r->profile.size() == 1 && !r->graded) {
    std::set<int> out;
    for (const auto& t : s.tuples(name)) out.insert(t[0]);
    return {out.begin(), out.end()};
  }
  throw PreconditionError("no sort or unary relation named " + name);
}

// Copies a guest into the tree's global id space, continuing nextFresh.
std::pair<Structure, std::map<int, int>> relabelGuest(const Structure& g,
                                                      int& nextFresh) {
  std::map<int, int> rl;
  for (int e : g.allElements()) rl[e] = nextFresh++;
  Structure::Builder b(g.signature());
  for (int e : g.allElements()) b.addElement(rl.at(e), g.sortOf(e));
  for (const auto& r : g.signature().relations)
    for (const auto& t : g.tuples(r.name)) {
      std::vector<int> mapped;
      mapped.reserve(t.size());
      for (int e : t) mapped.push_back(rl.at(e));
      b.addTuple(r.name, mapped);
    }
  for (const auto& s : g.signature().orderedSorts) {
    std::vector<int> mapped;
    for (int e : g.order(s)) mapped.push_back(rl.at(e));
    b.setOrder(s, mapped);
  }
  return {b.build(), std::move(rl)};
}

// Node and branch counts of the full tree; throws when they exceed the
// guard.
void requireTreeSize(int alphabetSize, int depth, const Limits& limits) {
  long long total = 0, level = 1;
  for (int i = 0; i <= depth; ++i) {
    total += level;
    if (total > limits.treeNodeGuard)
      throw GuardExceeded("tree-nodes",
                          "a full " + std::to_string(alphabetSize) +
                              "-splitting tree of depth " +
                              std::to_string(depth) + " exceeds " +
                              std::to_string(limits.treeNodeGuard) +
                              " paths");
    level *= alphabetSize;
  }
}

void fillDerivedTuples(TreeModel& t) {
  t.levelTuples.clear();
  t.successorTuples.clear();
  t.restrictionTuples.clear();
  std::set<std::vector<int>> nodePaths;
  for (const auto& n : t.nodes) nodePaths.insert(n.path);
  for (const auto& n : t.nodes) {
    t.levelTuples.insert({int(n.path.size()), n.path});
    if (!n.path.empty()) {
      std::vector<int> parent(n.path.begin(), n.path.end() - 1);
      if (nodePaths.count(parent)) t.successorTuples.insert({parent, n.path});
    }
  }
  for (const auto& f : t.branches)
    for (int k = 0; k < t.depth; ++k) {
      std::vector<int> prefix(f.begin(), f.begin() + k);
      if (nodePaths.count(prefix)) t.restrictionTuples.insert({k, f, prefix});
    }
}

}  // namespace

TreeModel buildTree(int alphabetSize, int depth, const GuestTemplate& tmpl,
                    const Limits& limits) {
  if (alphabetSize < 1 || depth < 1)
    throw PreconditionError("alphabetSize and depth must be at least 1");
  const std::vector<int> designated =
      designatedElements(tmpl.guest, tmpl.designated);
  if (int(designated.size()) != alphabetSize)
    throw PreconditionError("template guest has " +
                            std::to_string(designated.size()) +
                            " designated elements, expected " +
                            std::to_string(alphabetSize));
  requireTreeSize(alphabetSize, depth, limits);

  TreeModel t;
  t.alphabetSize = alphabetSize;
  t.depth = depth;
  t.designated = tmpl.designated;

  int nextFresh = 0;
  std::vector<std::vector<int>> level = {{}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& path : level) {
      auto [guest, rl] = relabelGuest(tmpl.guest, nextFresh);
      TreeNode node;
      node.path = path;
      node.guest = std::move(guest);
      for (int l = 0; l < alphabetSize; ++l)
        node.glue[l] = rl.at(designated[l]);
      t.nodes.push_back(std::move(node));
      for (int l = 0; l < alphabetSize; ++l) {
        std::vector<int> child = path;
        child.push_back(l);
        next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  t.branches = std::move(level);
  fillDerivedTuples(t);
  return t;
}

Verdict checkTree(const TreeModel& t, const Limits&) {
  Verdict v;
  if (t.alphabetSize < 1 || t.depth < 1) {
    v.fail("node-path", "alphabetSize and depth must be at least 1");
    return v;
  }

  std::map<std::vector<int>, const TreeNode*> byPath;
  for (const auto& n : t.nodes) {
    bool ok = int(n.path.size()) < t.depth;
    for (int l : n.path) ok = ok && l >= 0 && l < t.alphabetSize;
    if (!ok) {
      v.fail("node-path", "node " + pathString(n.path) +
                              " is not a letter path shorter than the depth");
      continue;
    }
    if (!byPath.emplace(n.path, &n).second)
      v.fail("node-duplicate", "node " + pathString(n.path) + " repeats");
  }
  int roots = 0;
  for (const auto& n : t.nodes)
    if (n.path.empty()) ++roots;
  if (roots != 1)
    v.fail("root-count",
           "expected exactly one root node, found " + std::to_string(roots));
  for (const auto& [path, node] : byPath) {
    if (path.empty()) continue;
    std::vector<int> parent(path.begin(), path.end() - 1);
    if (!byPath.count(parent))
      v.fail("node-orphan", "node " + pathString(path) +
                                " has no parent node " + pathString(parent));
  }

  std::set<std::vector<int>> branchSet;
  for (const auto& f : t.branches) {
    bool ok = int(f.size()) == t.depth;
    for (int l : f) ok = ok && l >= 0 && l < t.alphabetSize;
    if (!ok) {
      v.fail("branch-path", "branch " + pathString(f) +
                                " is not a letter path of the full depth");
      continue;
    }
    if (!branchSet.insert(f).second)
      v.fail("branch-duplicate", "branch " + pathString(f) + " repeats");
  }

  // Stored tree relations against the paths that define them.
  {
    std::set<std::pair<int, std::vector<int>>> derived;
    for (const auto& [path, node] : byPath)
      derived.insert({int(path.size()), path});
    for (const auto& x : t.levelTuples)
      if (!derived.count(x))
        v.fail("level-tuple-wrong", "level tuple (" + std::to_string(x.first) +
                                        ", " + pathString(x.second) +
                                        ") contradicts the path");
    for (const auto& x : derived)
      if (!t.levelTuples.count(x))
        v.fail("level-tuple-missing",
               "node " + pathString(x.second) + " lacks its level tuple");
  }
  {
    std::set<std::pair<std::vector<int>, std::vector<int>>> derived;
    for (const auto& [path, node] : byPath) {
      if (path.empty()) continue;
      std::vector<int> parent(path.begin(), path.end() - 1);
      if (byPath.count(parent)) derived.insert({parent, path});
    }
    for (const auto& x : t.successorTuples)
      if (!derived.count(x))
        v.fail("successor-tuple-wrong",
               "successor tuple (" + pathString(x.first) + ", " +
                   pathString(x.second) + ") contradicts the paths");
    for (const auto& x : derived)
      if (!t.successorTuples.count(x))
        v.fail("successor-tuple-missing",
               "edge " + pathString(x.first) + " -> " + pathString(x.second) +
                   " lacks its successor tuple");
  }
  {
    std::set<std::tuple<int, std::vector<int>, std::vector<int>>> derived;
    for (const auto& f : branchSet)
      for (int k = 0; k < t.depth; ++k) {
        std::vector<int> prefix(f.begin(), f.begin() + k);
        if (byPath.count(prefix)) derived.insert({k, f, prefix});
      }
    for (const auto& x : t.restrictionTuples)
      if (!derived.count(x))
        v.fail("restriction-tuple-wrong",
               "restriction tuple at cut " + std::to_string(std::get<0>(x)) +
                   " of branch " + pathString(std::get<1>(x)) +
                   " contradicts the paths");
    for (const auto& x : derived)
      if (!t.restrictionTuples.count(x))
        v.fail("restriction-tuple-missing",
               "branch " + pathString(std::get<1>(x)) +
                   " lacks its restriction tuple at cut " +
                   std::to_string(std::get<0>(x)));
  }

  // Guests: one signature, disjoint domains, valid members of their class,
  // designated set glued bijectively to the letters.
  std::set<int> seenIds;
  for (const auto& n : t.nodes) {
    const std::string at = "node " + pathString(n.path);
    if (!(n.guest.signature() == t.nodes.front().guest.signature()))
      v.fail("guest-signature-mixed", at + " carries a different signature");
    for (int e : n.guest.allElements())
      if (!seenIds.insert(e).second)
        v.fail("guest-overlap", at + " reuses guest element id " +
                                    std::to_string(e));

    const std::string preset =
        presetName(n.guest.signature()).value_or("");
    Verdict gv;
    if (preset == "projection")
      gv = checkProjection(n.guest);
    else if (preset == "knight" || preset == "knight-q" ||
             preset == "knight-u")
      gv = checkMembership(n.guest);
    if (!gv.ok)
      v.fail("guest-invalid",
             at + ": " + gv.violations.front().kind + " (" +
                 gv.violations.front().detail + ")");

    std::vector<int> des;
    try {
      des = designatedElements(n.guest, t.designated);
    } catch (const Error& e) {
      v.fail("guest-invalid", at + ": " + e.what());
      continue;
    }
    if (int(des.size()) != t.alphabetSize)
      v.fail("designated-size",
             at + " has " + std::to_string(des.size()) +
                 " designated elements, expected " +
                 std::to_string(t.alphabetSize));
    std::set<int> desSet(des.begin(), des.end());
    std::set<int> hit;
    bool glueOk = int(n.glue.size()) == t.alphabetSize;
    for (const auto& [l, e] : n.glue) {
      if (l < 0 || l >= t.alphabetSize || !desSet.count(e) ||
          !hit.insert(e).second)
        glueOk = false;
    }
    if (glueOk && hit.size() != desSet.size()) glueOk = false;
    if (!glueOk)
      v.fail("glue-invalid",
             at + ": glue is not a bijection from the letters onto the "
                  "designated set");

    // The successors of this node are exactly the designated set: one child
    // per letter, branches at the last level.
    for (int l = 0; l < t.alphabetSize; ++l) {
      std::vector<int> child = n.path;
      child.push_back(l);
      const bool present = int(child.size()) < t.depth ? byPath.count(child) > 0
                                                       : branchSet.count(child) > 0;
      if (!present)
        v.fail("successor-missing",
               at + " has no successor for letter " + std::to_string(l));
    }
  }
  return v;
}

GuestJoint projectionGuestJoint() {
  GuestJoint ops;
  ops.designated = "B";
  ops.alphabet = [](int a, int b) { return std::max(a, b); };
  ops.embed = [](const Structure* a, const Structure* b,
                 int n) -> GuestJointResult {
    auto fibersOf = [](const Structure& s) {
      std::vector<std::pair<int, std::vector<int>>> out;
      for (int bElem : s.sortElements("B")) out.push_back({bElem, {}});
      std::map<int, size_t> slot;
      for (size_t i = 0; i < out.size(); ++i) slot[out[i].first] = i;
      for (const auto& t : s.tuples("p")) out[slot.at(t[1])].second.push_back(t[0]);
      for (auto& [bElem, fiber] : out) std::sort(fiber.begin(), fiber.end());
      return out;
    };
    std::vector<std::pair<int, std::vector<int>>> fa, fb;
    if (a) fa = fibersOf(*a);
    if (b) fb = fibersOf(*b);
    if (int(fa.size()) > n || int(fb.size()) > n)
      throw PreconditionError("joint guest needs more than " +
                              std::to_string(n) + " designated elements");

    Structure::Builder builder(*presetSignature("projection"));
    GuestJointResult out;
    for (int i = 0; i < n; ++i) builder.addElement(i, "B");
    int next = n;
    for (int i = 0; i < n; ++i) {
      const std::vector<int>* fibA = i < int(fa.size()) ? &fa[i].second : nullptr;
      const std::vector<int>* fibB = i < int(fb.size()) ? &fb[i].second : nullptr;
      size_t size = std::max<size_t>(
          {1, fibA ? fibA->size() : 0, fibB ? fibB->size() : 0});
      std::vector<int> elems;
      for (size_t j = 0; j < size; ++j) {
        builder.addElement(next, "A");
        builder.addTuple("p", {next, i});
        elems.push_back(next++);
      }
      if (fibA) {
        out.mapA[fa[i].first] = i;
        for (size_t j = 0; j < fibA->size(); ++j)
          out.mapA[(*fibA)[j]] = elems[j];
      }
      if (fibB) {
        out.mapB[fb[i].first] = i;
        for (size_t j = 0; j < fibB->size(); ++j)
          out.mapB[(*fibB)[j]] = elems[j];
      }
    }
    out.guest = builder.build();
    return out;
  };
  return ops;
}

GuestJoint knightGuestJoint(const Structure& templateA,
                            const Structure& templateB) {
  const Structure empty =
      Structure::Builder(*presetSignature("knight")).build();
  auto jointOver = [empty](const Structure& a, const Structure& b) {
    AmalgamationProblem p{empty, a, b, Embedding{empty, a, {}},
                          Embedding{empty, b, {}}};
    return disjointAmalgamK0(p);
  };
  const int common =
      int(jointOver(templateA, templateB).amalgam.sortCount("X"));

  GuestJoint ops;
  ops.designated = "X";
  ops.alphabet = [common](int, int) { return common; };
  ops.embed = [jointOver](const Structure* a, const Structure* b,
                          int n) -> GuestJointResult {
    GuestJointResult out;
    auto padTo = [n](const Structure& s) {
      const int have = int(s.sortCount("X"));
      if (have > n)
        throw PreconditionError("joint guest needs " + std::to_string(have) +
                                " designated elements but the tree allows " +
                                std::to_string(n));
      return padX(s, n - have);
    };
    if (a && b) {
      AmalgamResult r = jointOver(*a, *b);
      out.guest = padTo(r.amalgam);
      out.mapA = r.leftEmbedding.map;
      out.mapB = r.rightEmbedding.map;
    } else if (a || b) {
      const Structure& s = a ? *a : *b;
      out.guest = padTo(s);
      std::map<int, int>& m = a ? out.mapA : out.mapB;
      for (int e : s.allElements()) m[e] = e;
    } else {
      Structure::Builder builder(*presetSignature("knight"));
      for (int i = 0; i < n; ++i) builder.addElement(i, "X");
      out.guest = builder.build();
    }
    return out;
  };
  return ops;
}

TreeJointResult treeJointEmbed(const TreeModel& t0, const TreeModel& t1,
                               const GuestJoint& ops, const Limits& limits) {
  if (t0.depth != t1.depth)
    throw PreconditionError("joint embedding needs trees of equal depth");
  for (const TreeModel* t : {&t0, &t1}) {
    Verdict tv = checkTree(*t, limits);
    if (!tv.ok)
      throw PreconditionError(std::string(t == &t0 ? "first" : "second") +
                              " tree invalid: " + tv.violations.front().kind +
                              " (" + tv.violations.front().detail + ")");
  }
  const int alphabet = ops.alphabet(t0.alphabetSize, t1.alphabetSize);
  if (alphabet < t0.alphabetSize || alphabet < t1.alphabetSize)
    throw PreconditionError(
        "alphabet callback returned " + std::to_string(alphabet) +
        ", smaller than an input alphabet");
  const int depth = t0.depth;
  requireTreeSize(alphabet, depth, limits);

  std::map<std::vector<int>, const TreeNode*> byPath0, byPath1;
  for (const auto& n : t0.nodes) byPath0[n.path] = &n;
  for (const auto& n : t1.nodes) byPath1[n.path] = &n;

  TreeJointResult result;
  result.tree.alphabetSize = alphabet;
  result.tree.depth = depth;
  result.tree.designated = ops.designated;
  std::map<std::pair<int, std::vector<int>>, TreeNode> nodesOut;
  int nextFresh = 0;

  auto recurse = [&](auto&& self, const TreeNode* n0, const TreeNode* n1,
                     const std::vector<int>& pc) -> void {
    GuestJointResult jr;
    try {
      jr = ops.embed(n0 ? &n0->guest : nullptr, n1 ? &n1->guest : nullptr,
                     alphabet);
    } catch (const GuardExceeded&) {
      throw;
    } catch (const Error& e) {
      throw PreconditionError("guest joint embedding failed at node " +
                              pathString(pc) + ": " + e.what());
    }
    std::vector<int> des = designatedElements(jr.guest, ops.designated);
    if (int(des.size()) != alphabet)
      throw PreconditionError("guest callback produced " +
                              std::to_string(des.size()) +
                              " designated elements at node " +
                              pathString(pc) + ", expected " +
                              std::to_string(alphabet));
    auto [guest, rl] = relabelGuest(jr.guest, nextFresh);

    TreeNode node;
    node.path = pc;
    node.guest = std::move(guest);
    std::map<int, int> letterOf;  // relabeled designated element -> letter
    for (int l = 0; l < alphabet; ++l) {
      node.glue[l] = rl.at(des[l]);
      letterOf[rl.at(des[l])] = l;
    }

    // Successor letters of each input node, translated through its guest's
    // joint embedding into common letters.
    auto matchLetters = [&](const TreeNode* n, const std::map<int, int>& gm,
                            TreeEmbedding& emb) {
      std::map<int, int> commonToOwn;
      if (!n) return commonToOwn;
      emb.nodeMap[n->path] = pc;
      for (const auto& [e, img] : gm) emb.guestMap[e] = rl.at(img);
      for (const auto& [l, d] : n->glue) {
        auto it = gm.find(d);
        if (it == gm.end() || !letterOf.count(rl.at(it->second)))
          throw PreconditionError(
              "guest embedding does not respect the designated set at node " +
              pathString(pc));
        commonToOwn[letterOf.at(rl.at(it->second))] = l;
      }
      return commonToOwn;
    };
    std::map<int, int> own0 = matchLetters(n0, jr.mapA, result.first);
    std::map<int, int> own1 = matchLetters(n1, jr.mapB, result.second);
    nodesOut.emplace(std::make_pair(int(pc.size()), pc), std::move(node));

    for (int l = 0; l < alphabet; ++l) {
      std::vector<int> childC = pc;
      childC.push_back(l);
      auto childOf = [&](const TreeNode* n, const std::map<int, int>& own) {
        std::vector<int> child;
        auto it = own.find(l);
        if (n && it != own.end()) {
          child = n->path;
          child.push_back(it->second);
        }
        return child;
      };
      std::vector<int> child0 = childOf(n0, own0);
      std::vector<int> child1 = childOf(n1, own1);
      if (int(childC.size()) < depth) {
        self(self, child0.empty() ? nullptr : byPath0.at(child0),
             child1.empty() ? nullptr : byPath1.at(child1), childC);
      } else {
        if (!child0.empty()) result.first.branchMap[child0] = childC;
        if (!child1.empty()) result.second.branchMap[child1] = childC;
      }
    }
  };
  recurse(recurse, byPath0.at({}), byPath1.at({}), {});

  for (auto& [key, node] : nodesOut)
    result.tree.nodes.push_back(std::move(node));
  std::vector<std::vector<int>> level = {{}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& path : level)
      for (int l = 0; l < alphabet; ++l) {
        std::vector<int> child = path;
        child.push_back(l);
        next.push_back(std::move(child));
      }
    level = std::move(next);
  }
  result.tree.branches = std::move(level);
  fillDerivedTuples(result.tree);
  return result;
}

Verdict validateTreeEmbedding(const TreeModel& from, const TreeModel& into,
                              const TreeEmbedding& emb) {
  Verdict v;
  std::map<std::vector<int>, const TreeNode*> intoByPath;
  for (const auto& n : into.nodes) intoByPath[n.path] = &n;
  std::set<std::vector<int>> intoBranches(into.branches.begin(),
                                          into.branches.end());

  std::set<std::vector<int>> nodeImages, branchImages;
  for (const auto& n : from.nodes) {
    auto it = emb.nodeMap.find(n.path);
    if (it == emb.nodeMap.end()) {
      v.fail("node-unmapped", "node " + pathString(n.path) + " has no image");
      continue;
    }
    if (!intoByPath.count(it->second)) {
      v.fail("node-image-missing", "image " + pathString(it->second) +
                                       " of node " + pathString(n.path) +
                                       " is not a node");
      continue;
    }
    if (it->second.size() != n.path.size())
      v.fail("level-broken", "node " + pathString(n.path) +
                                 " maps across levels to " +
                                 pathString(it->second));
    if (!nodeImages.insert(it->second).second)
      v.fail("node-collision",
             "two nodes share the image " + pathString(it->second));
  }
  for (const auto& f : from.branches) {
    auto it = emb.branchMap.find(f);
    if (it == emb.branchMap.end()) {
      v.fail("branch-unmapped", "branch " + pathString(f) + " has no image");
      continue;
    }
    if (!intoBranches.count(it->second)) {
      v.fail("branch-image-missing", "image " + pathString(it->second) +
                                         " of branch " + pathString(f) +
                                         " is not a branch");
      continue;
    }
    if (!branchImages.insert(it->second).second)
      v.fail("branch-collision",
             "two branches share the image " + pathString(it->second));
  }
  if (!v.ok) return v;

  for (const auto& x : from.successorTuples)
    if (!into.successorTuples.count(
            {emb.nodeMap.at(x.first), emb.nodeMap.at(x.second)}))
      v.fail("successor-broken", "edge " + pathString(x.first) + " -> " +
                                     pathString(x.second) +
                                     " is not preserved");
  for (const auto& x : from.restrictionTuples)
    if (!into.restrictionTuples.count({std::get<0>(x),
                                       emb.branchMap.at(std::get<1>(x)),
                                       emb.nodeMap.at(std::get<2>(x))}))
      v.fail("restriction-broken",
             "restriction of branch " + pathString(std::get<1>(x)) +
                 " at cut " + std::to_string(std::get<0>(x)) +
                 " is not preserved");

  for (const auto& n : from.nodes) {
    const std::string at = "node " + pathString(n.path);
    const TreeNode& w = *intoByPath.at(emb.nodeMap.at(n.path));
    Embedding ge{n.guest, w.guest, {}};
    bool total = true;
    for (int e : n.guest.allElements()) {
      auto it = emb.guestMap.find(e);
      if (it == emb.guestMap.end()) {
        v.fail("guest-embedding",
               at + ": no image for guest element " + std::to_string(e));
        total = false;
        continue;
      }
      ge.map[e] = it->second;
    }
    if (!total) continue;
    Verdict gv = ge.validate();
    if (!gv.ok)
      v.fail("guest-embedding", at + ": " + gv.violations.front().kind + " (" +
                                    gv.violations.front().detail + ")");

    for (const auto& [l, d] : n.glue) {
      std::vector<int> child = n.path;
      child.push_back(l);
      const auto& childMap =
          int(child.size()) < from.depth ? emb.nodeMap : emb.branchMap;
      auto it = childMap.find(child);
      if (it == childMap.end() || it->second.empty()) {
        v.fail("glue-broken", at + ": successor for letter " +
                                  std::to_string(l) + " has no image");
        continue;
      }
      const int commonLetter = it->second.back();
      auto wl = w.glue.find(commonLetter);
      if (wl == w.glue.end() || emb.guestMap.at(d) != wl->second)
        v.fail("glue-broken",
               at + ": letter " + std::to_string(l) +
                   " and its designated element map incompatibly");
    }
  }
  return v;
}

namespace {

Json pathToJson(const std::vector<int>& p) { return Json(p); }

std::vector<int> pathFromJson(const Json& j, const std::string& context) {
  if (!j.is_array())
    throw FormatError(context + ": path must be an array of letters");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer())
      throw FormatError(context + ": path letters must be integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

void saveTreeModel(const TreeModel& t, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "guests");

  Json j = Json::object();
  j["alphabet"] = t.alphabetSize;
  j["depth"] = t.depth;
  j["designated"] = t.designated;
  Json nodes = Json::array();
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    const TreeNode& n = t.nodes[i];
    const std::string rel = "guests/node-" + std::to_string(i) + ".json";
    saveStructureFile(n.guest, (fs::path(dir) / rel).string());
    Json node = Json::object();
    node["path"] = pathToJson(n.path);
    node["guest"] = rel;
    Json glue = Json::array();
    for (const auto& [l, e] : n.glue) glue.push_back(Json::array({l, e}));
    node["glue"] = std::move(glue);
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  Json branches = Json::array();
  for (const auto& f : t.branches) branches.push_back(pathToJson(f));
  j["branches"] = std::move(branches);
  Json levels = Json::array();
  for (const auto& x : t.levelTuples)
    levels.push_back(Json::array({x.first, pathToJson(x.second)}));
  j["levels"] = std::move(levels);
  Json successors = Json::array();
  for (const auto& x : t.successorTuples)
    successors.push_back(
        Json::array({pathToJson(x.first), pathToJson(x.second)}));
  j["successors"] = std::move(successors);
  Json restrictions = Json::array();
  for (const auto& x : t.restrictionTuples)
    restrictions.push_back(Json::array({std::get<0>(x),
                                        pathToJson(std::get<1>(x)),
                                        pathToJson(std::get<2>(x))}));
  j["restrictions"] = std::move(restrictions);
  saveJsonFile(j, (fs::path(dir) / "tree.json").string());
}

TreeModel loadTreeModel(const std::string& dir) {
  namespace fs = std::filesystem;
  const Json j = loadJsonFile((fs::path(dir) / "tree.json").string());
  requireFields(j,
                {"alphabet", "depth", "designated", "nodes", "branches",
                 "levels", "successors", "restrictions"},
                "tree file");
  for (const auto& [key, value] : j.items())
    if (key != "alphabet" && key != "depth" && key != "designated" &&
        key != "nodes" && key != "branches" && key != "levels" &&
        key != "successors" && key != "restrictions")
      throw FormatError("tree file: unknown field " + key);

  TreeModel t;
  if (!j.at("alphabet").is_number_integer() ||
      !j.at("depth").is_number_integer() || !j.at("designated").is_string())
    throw FormatError("tree file: alphabet and depth are integers, "
                      "designated is a name");
  t.alphabetSize = j.at("alphabet").get<int>();
  t.depth = j.at("depth").get<int>();
  t.designated = j.at("designated").get<std::string>();

  if (!j.at("nodes").is_array())
    throw FormatError("tree file: nodes must be an array");
  for (const auto& nj : j.at("nodes")) {
    requireFields(nj, {"path", "guest", "glue"}, "tree node");
    for (const auto& [key, value] : nj.items())
      if (key != "path" && key != "guest" && key != "glue")
        throw FormatError("tree node: unknown field " + key);
    TreeNode n;
    n.path = pathFromJson(nj.at("path"), "tree node");
    if (!nj.at("guest").is_string())
      throw FormatError("tree node: guest must be a file path");
    n.guest = loadStructureFile(
        (fs::path(dir) / nj.at("guest").get<std::string>()).string());
    if (!nj.at("glue").is_array())
      throw FormatError("tree node: glue must be an array of pairs");
    for (const auto& pair : nj.at("glue")) {
      if (!pair.is_array() || pair.size() != 2 ||
          !pair[0].is_number_integer() || !pair[1].is_number_integer())
        throw FormatError("tree node: glue entries are [letter, element]");
      if (!n.glue.emplace(pair[0].get<int>(), pair[1].get<int>()).second)
        throw FormatError("tree node: glue repeats a letter");
    }
    t.nodes.push_back(std::move(n));
  }

  if (!j.at("branches").is_array())
    throw FormatError("tree file: branches must be an array");
  for (const auto& f : j.at("branches"))
    t.branches.push_back(pathFromJson(f, "tree branch"));

  for (const auto& x : j.at("levels")) {
    if (!x.is_array() || x.size() != 2 || !x[0].is_number_integer())
      throw FormatError("tree file: level tuples are [n, path]");
    t.levelTuples.insert({x[0].get<int>(), pathFromJson(x[1], "level tuple")});
  }
  for (const auto& x : j.at("successors")) {
    if (!x.is_array() || x.size() != 2)
      throw FormatError("tree file: successor tuples are [path, path]");
    t.successorTuples.insert({pathFromJson(x[0], "successor tuple"),
                              pathFromJson(x[1], "successor tuple")});
  }
  for (const auto& x : j.at("restrictions")) {
    if (!x.is_array() || x.size() != 3 || !x[0].is_number_integer())
      throw FormatError("tree file: restriction tuples are [k, branch, path]");
    t.restrictionTuples.insert({x[0].get<int>(),
                                pathFromJson(x[1], "restriction tuple"),
                                pathFromJson(x[2], "restriction tuple")});
  }
  return t;
}

}  // namespace forge
