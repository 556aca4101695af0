#include "forge/chain.hpp"

#include "forge/amalgam.hpp"
#include "forge/chain_amalgam.hpp"
#include "forge/end_extension.hpp"
#include "forge/errors.hpp"
#include "forge/knight.hpp"
#include "forge/projection.hpp"
#include "forge/signature.hpp"

namespace forge {

namespace {

const std::set<std::string>& knownOperations() {
  static const std::set<std::string> ops = {
      "amalgam", "chain-amalgam", "grow-top", "end-extend", "pad-x",
      "fiber-pad"};
  return ops;
}

bool knightFamily(const std::string& tag) {
  return tag == "knight" || tag == "knight-q" || tag == "knight-u";
}

Verdict stageChecker(const std::string& tag, const Structure& s) {
  if (knightFamily(tag)) return checkMembership(s);
  if (tag == "projection") return checkProjection(s);
  throw FormatError("unknown chain classTag \"" + tag + "\"");
}

void rejectUnknown(const Json& obj, const std::set<std::string>& allowed,
                   const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw FormatError("unknown field \"" + it.key() + "\" in " + context);
}

int intField(const Json& obj, const std::string& field,
             const std::string& context) {
  if (!obj.contains(field) || !obj[field].is_number_integer())
    throw FormatError("field \"" + field + "\" must be an integer in " +
                      context);
  return obj[field].get<int>();
}

}  // namespace

const Structure& Chain::finalStage() const {
  if (stages.empty()) throw PreconditionError("chain has no stages");
  return stages.back();
}

Chain appendAmalgamStage(Chain c, const Structure& pairA,
                         const Structure& pairB,
                         const std::map<int, int>& copy) {
  const Structure& host = c.finalStage();
  AmalgamationProblem problem{pairA, pairB, host,
                              Embedding::inclusion(pairA, pairB),
                              Embedding{pairA, host, copy}};
  AmalgamResult res = disjointAmalgam(problem);

  LedgerEntry entry;
  entry.stage = int(c.stages.size());
  entry.pairA = pairA;
  entry.pairB = pairB;
  entry.operation = "amalgam";
  entry.parameters = Json::object();
  entry.parameters["copy"] = embeddingMapToJson(copy);
  c.stages.push_back(res.amalgam);
  c.ledger.push_back(std::move(entry));
  return c;
}

Verdict validateChain(const Chain& c, const Limits& limits) {
  (void)limits;
  Verdict v;
  if (c.stages.empty()) {
    v.fail("chain-empty", "a chain needs at least one stage");
    return v;
  }
  auto preset = presetSignature(c.classTag);
  if (!preset) {
    v.fail("chain-class-unknown", "classTag \"" + c.classTag + "\"");
    return v;
  }

  for (size_t i = 0; i < c.stages.size(); ++i) {
    const Structure& s = c.stages[i];
    if (!(s.signature() == *preset)) {
      v.fail("stage-signature",
             "stage " + std::to_string(i) + " is not a " + c.classTag +
                 " structure");
      continue;
    }
    Verdict sv = stageChecker(c.classTag, s);
    for (const auto& viol : sv.violations)
      v.fail(viol.kind, "stage " + std::to_string(i) + ": " + viol.detail);
  }

  for (size_t i = 0; i + 1 < c.stages.size(); ++i) {
    try {
      Verdict iv = Embedding::inclusion(c.stages[i], c.stages[i + 1]).validate();
      for (const auto& viol : iv.violations)
        v.fail("inclusion-broken", "stages " + std::to_string(i) + "->" +
                                       std::to_string(i + 1) + ": " +
                                       viol.detail);
    } catch (const PreconditionError& e) {
      v.fail("inclusion-broken", "stages " + std::to_string(i) + "->" +
                                     std::to_string(i + 1) + ": " + e.what());
    }
  }

  if (c.ledger.size() + 1 != c.stages.size()) {
    v.fail("ledger-shape", "expected " +
                               std::to_string(c.stages.size() - 1) +
                               " ledger entries, found " +
                               std::to_string(c.ledger.size()));
    return v;
  }
  for (size_t k = 0; k < c.ledger.size(); ++k) {
    const LedgerEntry& e = c.ledger[k];
    const std::string where = "ledger entry " + std::to_string(k);
    if (e.stage != int(k) + 1)
      v.fail("ledger-shape", where + " is out of order");
    if (!knownOperations().count(e.operation)) {
      v.fail("ledger-op-unknown", where + ": \"" + e.operation + "\"");
      continue;
    }
    const bool amalgamLike =
        e.operation == "amalgam" || e.operation == "chain-amalgam";
    if (amalgamLike) {
      if (!knightFamily(c.classTag)) {
        v.fail("ledger-op-unsupported",
               where + ": " + e.operation + " outside the core classes");
        continue;
      }
      if (!e.pairA || !e.pairB) {
        v.fail("ledger-pair-missing", where + " lacks its good pair");
        continue;
      }
      // The good-pair condition (checked on the X/Y part for every class).
      Verdict pa = stageChecker(c.classTag, *e.pairA);
      Verdict pb = stageChecker(c.classTag, *e.pairB);
      if (!pa.ok || !pb.ok) {
        v.fail("ledger-pair-invalid", where + ": pair fails its checker");
        continue;
      }
      try {
        if (!Embedding::inclusion(*e.pairA, *e.pairB).isValid()) {
          v.fail("ledger-pair-invalid",
                 where + ": small half not included in big half");
          continue;
        }
      } catch (const PreconditionError&) {
        v.fail("ledger-pair-invalid",
               where + ": small half not included in big half");
        continue;
      }
      int dx = e.pairB->sortCount("X") - e.pairA->sortCount("X");
      int dy = e.pairB->sortCount("Y") - e.pairA->sortCount("Y");
      if (dx < dy)
        v.fail("ledger-pair-not-good",
               where + ": " + std::to_string(dx) + " new X against " +
                   std::to_string(dy) + " new Y");
      if (!e.parameters.contains("copy"))
        v.fail("ledger-parameters", where + " lacks the copy map");
    } else if (e.operation == "fiber-pad") {
      if (c.classTag != "projection")
        v.fail("ledger-op-unsupported",
               where + ": fiber-pad outside the projection class");
    } else if (e.operation == "end-extend") {
      if (c.classTag != "knight-q")
        v.fail("ledger-op-unsupported",
               where + ": end-extend outside the relativized class");
    } else if (!knightFamily(c.classTag)) {
      v.fail("ledger-op-unsupported",
             where + ": " + e.operation + " outside the core classes");
    }
  }
  return v;
}

Chain replayChain(const Chain& c) {
  if (c.stages.empty()) throw PreconditionError("chain has no stages");
  Chain out;
  out.classTag = c.classTag;
  out.ledger = c.ledger;
  out.stages.push_back(c.stages.front());
  for (const LedgerEntry& e : c.ledger) {
    const Structure& cur = out.stages.back();
    const std::string where = "ledger entry for stage " +
                              std::to_string(e.stage);
    Structure next;
    if (e.operation == "amalgam") {
      if (!e.pairA || !e.pairB)
        throw FormatError(where + " lacks its good pair");
      std::map<int, int> copy =
          embeddingMapFromJson(e.parameters.at("copy"));
      AmalgamationProblem problem{*e.pairA, *e.pairB, cur,
                                  Embedding::inclusion(*e.pairA, *e.pairB),
                                  Embedding{*e.pairA, cur, copy}};
      next = disjointAmalgam(problem).amalgam;
    } else if (e.operation == "chain-amalgam") {
      if (!e.pairA || !e.pairB)
        throw FormatError(where + " lacks its good pair");
      std::map<int, int> copy =
          embeddingMapFromJson(e.parameters.at("copy"));
      next = chainAmalgamStep(cur, *e.pairA, *e.pairB, copy);
    } else if (e.operation == "grow-top") {
      next = growTop(cur);
    } else if (e.operation == "end-extend") {
      next = endExtendStep(cur);
    } else if (e.operation == "pad-x") {
      next = padX(cur, intField(e.parameters, "count", where));
    } else if (e.operation == "fiber-pad") {
      next = projectionFiberPad(cur, intField(e.parameters, "b", where),
                                intField(e.parameters, "count", where));
    } else {
      throw FormatError(where + ": unknown operation \"" + e.operation +
                        "\"");
    }
    out.stages.push_back(next);
  }
  return out;
}

Json embeddingMapToJson(const std::map<int, int>& m) {
  Json arr = Json::array();
  for (const auto& [k, v] : m) arr.push_back(Json::array({k, v}));
  return arr;
}

std::map<int, int> embeddingMapFromJson(const Json& j) {
  if (!j.is_array()) throw FormatError("embedding map must be an array");
  std::map<int, int> m;
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2 ||
        !pair[0].is_number_integer() || !pair[1].is_number_integer())
      throw FormatError("embedding map entries must be [source, target]");
    int k = pair[0].get<int>();
    if (m.count(k)) throw FormatError("embedding map repeats a source");
    m[k] = pair[1].get<int>();
  }
  return m;
}

Json chainToJson(const Chain& c) {
  Json j = Json::object();
  j["classTag"] = c.classTag;
  Json stages = Json::array();
  for (const Structure& s : c.stages) stages.push_back(structureToJson(s));
  j["stages"] = std::move(stages);
  Json ledger = Json::array();
  for (const LedgerEntry& e : c.ledger) {
    Json entry = Json::object();
    entry["stage"] = e.stage;
    entry["pairA"] = e.pairA ? structureToJson(*e.pairA) : Json(nullptr);
    entry["pairB"] = e.pairB ? structureToJson(*e.pairB) : Json(nullptr);
    entry["operation"] = e.operation;
    entry["parameters"] = e.parameters;
    ledger.push_back(std::move(entry));
  }
  j["ledger"] = std::move(ledger);
  return j;
}

Chain chainFromJson(const Json& j) {
  if (!j.is_object()) throw FormatError("chain file must be an object");
  requireFields(j, {"classTag", "stages", "ledger"}, "chain file");
  rejectUnknown(j, {"classTag", "stages", "ledger"}, "chain file");
  Chain c;
  if (!j["classTag"].is_string())
    throw FormatError("\"classTag\" must be a string");
  c.classTag = j["classTag"].get<std::string>();
  if (!j["stages"].is_array() || j["stages"].empty())
    throw FormatError("\"stages\" must be a nonempty array");
  for (const Json& s : j["stages"]) c.stages.push_back(structureFromJson(s));
  if (!j["ledger"].is_array())
    throw FormatError("\"ledger\" must be an array");
  for (const Json& e : j["ledger"]) {
    if (!e.is_object()) throw FormatError("ledger entries must be objects");
    requireFields(e, {"stage", "pairA", "pairB", "operation", "parameters"},
                  "ledger entry");
    rejectUnknown(e, {"stage", "pairA", "pairB", "operation", "parameters"},
                  "ledger entry");
    LedgerEntry entry;
    entry.stage = intField(e, "stage", "ledger entry");
    if (!e["pairA"].is_null()) entry.pairA = structureFromJson(e["pairA"]);
    if (!e["pairB"].is_null()) entry.pairB = structureFromJson(e["pairB"]);
    if (!e["operation"].is_string())
      throw FormatError("ledger \"operation\" must be a string");
    entry.operation = e["operation"].get<std::string>();
    if (!e["parameters"].is_object())
      throw FormatError("ledger \"parameters\" must be an object");
    entry.parameters = e["parameters"];
    c.ledger.push_back(std::move(entry));
  }
  return c;
}

Chain loadChainFile(const std::string& path) {
  return chainFromJson(loadJsonFile(path));
}

void saveChainFile(const Chain& c, const std::string& path) {
  saveJsonFile(chainToJson(c), path);
}

}  // namespace forge
