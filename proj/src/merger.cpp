#include "forge/merger.hpp"

#include <algorithm>
#include <set>

#include "forge/errors.hpp"
#include "forge/iso.hpp"

namespace forge {

namespace {

// Receptor sort in the host: u itself when it names a sort, otherwise the
// carrier sort of the unary relation u.
std::string receptorSort(const MergerSpec& spec) {
  if (spec.hostSignature.hasSort(spec.u)) return spec.u;
  const RelationSymbol* r = spec.hostSignature.relation(spec.u);
  if (r && r->profile.size() == 1 && !r->graded) return r->profile[0];
  return "";
}

std::vector<int> receptorElements(const Structure& host,
                                  const MergerSpec& spec) {
  if (host.signature().hasSort(spec.u)) return host.sortElements(spec.u);
  std::set<int> out;
  for (const auto& t : host.tuples(spec.u)) out.insert(t[0]);
  return {out.begin(), out.end()};
}

std::vector<int> gluedGuestElements(const Structure& guest,
                                    const MergerSpec& spec) {
  if (spec.q.empty()) return guest.allElements();
  return guest.sortElements(spec.q);
}

bool sortIsGlued(const MergerSpec& spec, const std::string& sort) {
  return spec.q.empty() || sort == spec.q;
}

}  // namespace

Verdict checkMergerSpec(const MergerSpec& spec) {
  Verdict v;
  const std::string recSort = receptorSort(spec);
  if (recSort.empty()) {
    if (spec.hostSignature.relation(spec.u))
      v.fail("u-not-unary", "host relation " + spec.u +
                                " is not a plain unary relation");
    else
      v.fail("u-missing",
             "host signature has no sort or unary relation " + spec.u);
    return v;
  }
  if (spec.hostSignature.isOrdered(recSort))
    v.fail("u-sort-ordered", "receptor sort " + recSort + " is ordered");

  if (spec.q.empty()) {
    for (const auto& s : spec.guestSignature.sorts)
      if (spec.guestSignature.isOrdered(s))
        v.fail("q-ordered", "whole-domain gluing requires every guest sort "
                            "unordered, but " + s + " is ordered");
  } else {
    if (!spec.guestSignature.hasSort(spec.q)) {
      v.fail("q-missing", "guest signature has no sort " + spec.q);
      return v;
    }
    if (spec.guestSignature.isOrdered(spec.q))
      v.fail("q-ordered", "glued sort " + spec.q + " is ordered");
  }

  for (const auto& s : spec.guestSignature.sorts)
    if (!sortIsGlued(spec, s) && spec.hostSignature.hasSort(s))
      v.fail("sort-clash", "sort " + s + " appears on both sides");
  for (const auto& r : spec.guestSignature.relations)
    if (spec.hostSignature.relation(r.name))
      v.fail("relation-clash", "relation " + r.name + " appears on both sides");
  return v;
}

Signature mergedSignature(const MergerSpec& spec) {
  const std::string recSort = receptorSort(spec);
  Signature out = spec.hostSignature;
  for (const auto& s : spec.guestSignature.sorts)
    if (!sortIsGlued(spec, s)) out.sorts.push_back(s);
  for (const auto& s : spec.guestSignature.orderedSorts)
    if (!sortIsGlued(spec, s)) out.orderedSorts.push_back(s);
  for (RelationSymbol r : spec.guestSignature.relations) {
    for (auto& p : r.profile)
      if (sortIsGlued(spec, p)) p = recSort;
    out.relations.push_back(std::move(r));
  }
  return out;
}

Signature mergedGuestSignature(const MergerSpec& spec) {
  const std::string recSort = receptorSort(spec);
  Signature out;
  if (spec.q.empty()) {
    out.sorts = {recSort};
  } else {
    out.sorts = spec.guestSignature.sorts;
    for (auto& s : out.sorts)
      if (s == spec.q) s = recSort;
  }
  out.orderedSorts = spec.guestSignature.orderedSorts;
  for (RelationSymbol r : spec.guestSignature.relations) {
    for (auto& p : r.profile)
      if (sortIsGlued(spec, p)) p = recSort;
    out.relations.push_back(std::move(r));
  }
  return out;
}

MergerResult mergeStructures(const Structure& host, const Structure& guest,
                             const MergerSpec& spec,
                             const std::map<int, int>& glue) {
  if (!(host.signature() == spec.hostSignature))
    throw SignatureError("host does not match the spec's host signature");
  if (!(guest.signature() == spec.guestSignature))
    throw SignatureError("guest does not match the spec's guest signature");
  Verdict sv = checkMergerSpec(spec);
  if (!sv.ok)
    throw SignatureError("merger spec invalid: " + sv.violations.front().kind +
                         " (" + sv.violations.front().detail + ")");

  const std::vector<int> receptor = receptorElements(host, spec);
  const std::vector<int> glued = gluedGuestElements(guest, spec);
  if (receptor.size() != glued.size())
    throw PreconditionError(
        "cardinality mismatch: " + std::to_string(receptor.size()) +
        " receptor elements vs " + std::to_string(glued.size()) +
        " guest elements to identify");

  const std::set<int> receptorSet(receptor.begin(), receptor.end());
  const std::set<int> gluedSet(glued.begin(), glued.end());
  std::map<int, int> guestMap;  // guest id -> merged id
  std::set<int> hitGuest;
  for (const auto& [h, g] : glue) {
    if (!receptorSet.count(h))
      throw PreconditionError("glue key " + std::to_string(h) +
                              " is not a receptor element");
    if (!gluedSet.count(g))
      throw PreconditionError("glue value " + std::to_string(g) +
                              " is not an identified guest element");
    if (!hitGuest.insert(g).second)
      throw PreconditionError("glue repeats guest element " +
                              std::to_string(g));
    guestMap[g] = h;
  }
  if (glue.size() != receptor.size())
    throw PreconditionError("glue does not cover the receptor set");

  int fresh = host.maxId() + 1;
  for (int g : guest.allElements())
    if (!gluedSet.count(g)) guestMap[g] = fresh++;

  Structure::Builder b(mergedSignature(spec));
  for (int e : host.allElements()) b.addElement(e, host.sortOf(e));
  for (int g : guest.allElements())
    if (!gluedSet.count(g)) b.addElement(guestMap.at(g), guest.sortOf(g));
  for (const auto& r : host.signature().relations)
    for (const auto& t : host.tuples(r.name)) b.addTuple(r.name, t);
  for (const auto& r : guest.signature().relations)
    for (const auto& t : guest.tuples(r.name)) {
      std::vector<int> mapped;
      mapped.reserve(t.size());
      for (int e : t) mapped.push_back(guestMap.at(e));
      b.addTuple(r.name, mapped);
    }
  for (const auto& s : host.signature().orderedSorts)
    b.setOrder(s, host.order(s));
  for (const auto& s : guest.signature().orderedSorts) {
    std::vector<int> mapped;
    for (int e : guest.order(s)) mapped.push_back(guestMap.at(e));
    b.setOrder(s, mapped);
  }

  const std::string recSort = receptorSort(spec);
  Structure::Builder rg(mergedGuestSignature(spec));
  for (int g : guest.allElements())
    rg.addElement(g, gluedSet.count(g) ? recSort : guest.sortOf(g));
  for (const auto& r : guest.signature().relations)
    for (const auto& t : guest.tuples(r.name)) rg.addTuple(r.name, t);
  for (const auto& s : guest.signature().orderedSorts)
    rg.setOrder(s, guest.order(s));

  return {b.build(), std::move(guestMap), rg.build()};
}

Structure mergerHostPart(const Structure& merged, const MergerSpec& spec) {
  return merged.restrictToSignature(spec.hostSignature);
}

Structure mergerGuestPart(const Structure& merged, const MergerSpec& spec,
                          const std::map<int, int>& guestMap) {
  std::vector<int> image;
  image.reserve(guestMap.size());
  for (const auto& [g, m] : guestMap) image.push_back(m);
  return merged.restrictToElements(image).restrictToSignature(
      mergedGuestSignature(spec));
}

MergerJob mergerJobFromJson(const Json& j) {
  requireFields(j, {"host", "guest", "u", "q", "glue"}, "merger job");
  for (const auto& [key, value] : j.items())
    if (key != "host" && key != "guest" && key != "u" && key != "q" &&
        key != "glue")
      throw FormatError("merger job: unknown field " + key);
  MergerJob job;
  if (!j.at("host").is_string() || !j.at("guest").is_string() ||
      !j.at("u").is_string())
    throw FormatError("merger job: host, guest, and u must be strings");
  job.hostPath = j.at("host").get<std::string>();
  job.guestPath = j.at("guest").get<std::string>();
  job.u = j.at("u").get<std::string>();
  if (j.at("q").is_null())
    job.q.clear();
  else if (j.at("q").is_string())
    job.q = j.at("q").get<std::string>();
  else
    throw FormatError("merger job: q must be a name or null");
  if (!j.at("glue").is_array())
    throw FormatError("merger job: glue must be an array of pairs");
  for (const auto& pair : j.at("glue")) {
    if (!pair.is_array() || pair.size() != 2 ||
        !pair[0].is_number_integer() || !pair[1].is_number_integer())
      throw FormatError("merger job: glue entries are [receptorId, guestId]");
    int h = pair[0].get<int>();
    if (!job.glue.emplace(h, pair[1].get<int>()).second)
      throw FormatError("merger job: glue repeats receptor element " +
                        std::to_string(h));
  }
  return job;
}

Json mergerJobToJson(const MergerJob& job) {
  Json j = Json::object();
  j["host"] = job.hostPath;
  j["guest"] = job.guestPath;
  j["u"] = job.u;
  if (job.q.empty())
    j["q"] = nullptr;
  else
    j["q"] = job.q;
  Json glue = Json::array();
  for (const auto& [h, g] : job.glue) glue.push_back(Json::array({h, g}));
  j["glue"] = std::move(glue);
  return j;
}

MergerEquivalenceReport mergerEquivalence(const Chain& hostChainA,
                                          const Structure& guestA,
                                          const Chain& hostChainB,
                                          const Structure& guestB,
                                          const MergerSpec& spec, int depth,
                                          const Limits& limits) {
  if (hostChainA.stages.empty() || hostChainB.stages.empty())
    throw PreconditionError("host chains must have at least one stage");
  const Structure& hostA = hostChainA.finalStage();
  const Structure& hostB = hostChainB.finalStage();

  const std::vector<int> qA = gluedGuestElements(guestA, spec);
  const std::vector<int> qB = gluedGuestElements(guestB, spec);
  if (!isomorphic(guestA.restrictToElements(qA),
                  guestB.restrictToElements(qB)))
    throw PreconditionError("the guests' identified parts are not isomorphic");

  auto ascendingGlue = [&](const Structure& host, const Structure& guest,
                           const std::vector<int>& glued) {
    std::vector<int> rec = receptorElements(host, spec);
    if (rec.size() != glued.size())
      throw PreconditionError(
          "cardinality mismatch between receptor and guest parts");
    std::map<int, int> glue;
    for (size_t i = 0; i < rec.size(); ++i) glue[rec[i]] = glued[i];
    return glue;
  };
  MergerResult mA =
      mergeStructures(hostA, guestA, spec, ascendingGlue(hostA, guestA, qA));
  MergerResult mB =
      mergeStructures(hostB, guestB, spec, ascendingGlue(hostB, guestB, qB));

  MergerEquivalenceReport report;
  report.depth = depth;
  report.hosts = efGame(hostA, hostB, depth, limits);
  report.mergers = efGame(mA.merged, mB.merged, depth, limits);
  report.hostsEquivalent = report.hosts.duplicatorWins();
  report.mergersEquivalent = report.mergers.duplicatorWins();
  return report;
}

}  // namespace forge
