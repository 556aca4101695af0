#include "forge/json_io.hpp"

#include <fstream>
#include <set>

#include "forge/errors.hpp"

namespace forge {

namespace {

void rejectUnknownFields(const Json& obj,
                         const std::vector<std::string>& allowed,
                         const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FormatError("unknown field \"" + key + "\" in " + context);
  }
}

Signature signatureFromJson(const Json& j) {
  if (!j.is_object()) throw FormatError("\"signature\" must be an object");
  requireFields(j, {"sorts", "relations", "ordered"}, "signature");
  rejectUnknownFields(j, {"sorts", "relations", "ordered"}, "signature");

  Signature sig;
  if (!j["sorts"].is_array()) throw FormatError("signature.sorts must be an array");
  for (const auto& s : j["sorts"]) {
    if (!s.is_string()) throw FormatError("sort names must be strings");
    sig.sorts.push_back(s.get<std::string>());
  }
  if (!j["relations"].is_array())
    throw FormatError("signature.relations must be an array");
  for (const auto& r : j["relations"]) {
    if (!r.is_object()) throw FormatError("each relation must be an object");
    requireFields(r, {"name", "profile", "graded"}, "relation");
    rejectUnknownFields(r, {"name", "profile", "graded"}, "relation");
    RelationSymbol sym;
    if (!r["name"].is_string()) throw FormatError("relation name must be a string");
    sym.name = r["name"].get<std::string>();
    if (!r["profile"].is_array())
      throw FormatError("relation profile must be an array");
    for (const auto& p : r["profile"]) {
      if (!p.is_string()) throw FormatError("profile entries must be strings");
      sym.profile.push_back(p.get<std::string>());
    }
    if (!r["graded"].is_boolean())
      throw FormatError("relation graded flag must be a boolean");
    sym.graded = r["graded"].get<bool>();
    sig.relations.push_back(std::move(sym));
  }
  if (!j["ordered"].is_array())
    throw FormatError("signature.ordered must be an array");
  for (const auto& s : j["ordered"]) {
    if (!s.is_string()) throw FormatError("ordered entries must be strings");
    sig.orderedSorts.push_back(s.get<std::string>());
  }

  std::set<std::string> seen(sig.sorts.begin(), sig.sorts.end());
  if (seen.size() != sig.sorts.size())
    throw FormatError("duplicate sort name in signature");
  std::set<std::string> relNames;
  for (const auto& r : sig.relations) {
    if (!relNames.insert(r.name).second)
      throw FormatError("duplicate relation name: " + r.name);
    if (r.profile.empty())
      throw FormatError("relation " + r.name + " has an empty profile");
    for (const auto& p : r.profile)
      if (!seen.count(p))
        throw FormatError("relation " + r.name + " mentions unknown sort " + p);
  }
  for (const auto& s : sig.orderedSorts)
    if (!seen.count(s))
      throw FormatError("ordered list mentions unknown sort " + s);
  return sig;
}

Json signatureToJson(const Signature& sig) {
  Json j = Json::object();
  j["sorts"] = sig.sorts;
  Json rels = Json::array();
  for (const auto& r : sig.relations) {
    Json rj = Json::object();
    rj["name"] = r.name;
    rj["profile"] = r.profile;
    rj["graded"] = r.graded;
    rels.push_back(std::move(rj));
  }
  j["relations"] = std::move(rels);
  j["ordered"] = sig.orderedSorts;
  return j;
}

int intField(const Json& j, const std::string& context) {
  if (!j.is_number_integer())
    throw FormatError(context + " must be an integer");
  return j.get<int>();
}

}  // namespace

void requireFields(const Json& obj, const std::vector<std::string>& required,
                   const std::string& context) {
  for (const auto& f : required)
    if (!obj.contains(f))
      throw FormatError("missing field \"" + f + "\" in " + context);
}

Json structureToJson(const Structure& s) {
  Json j = Json::object();
  j["signature"] = signatureToJson(s.signature());

  Json elems = Json::array();
  for (int id : s.allElements()) {
    Json e = Json::object();
    e["id"] = id;
    e["sort"] = s.sortOf(id);
    elems.push_back(std::move(e));
  }
  j["elements"] = std::move(elems);

  Json tuples = Json::object();
  for (const auto& r : s.signature().relations) {
    Json arr = Json::array();
    for (const auto& t : s.tuples(r.name)) arr.push_back(t);
    tuples[r.name] = std::move(arr);
  }
  j["tuples"] = std::move(tuples);

  Json order = Json::object();
  for (const auto& sort : s.signature().orderedSorts)
    order[sort] = s.order(sort);
  j["order"] = std::move(order);
  return j;
}

Structure structureFromJson(const Json& j) {
  if (!j.is_object()) throw FormatError("structure file must hold an object");
  requireFields(j, {"signature", "elements", "tuples", "order"}, "structure");
  rejectUnknownFields(j, {"signature", "elements", "tuples", "order"},
                      "structure");

  Signature sig = signatureFromJson(j["signature"]);
  Structure::Builder b(sig);

  if (!j["elements"].is_array())
    throw FormatError("\"elements\" must be an array");
  int prevId = -1;
  for (const auto& e : j["elements"]) {
    if (!e.is_object()) throw FormatError("each element must be an object");
    requireFields(e, {"id", "sort"}, "element");
    rejectUnknownFields(e, {"id", "sort"}, "element");
    int id = intField(e["id"], "element id");
    if (id <= prevId)
      throw FormatError("element ids must be strictly ascending (saw " +
                        std::to_string(id) + " after " +
                        std::to_string(prevId) + ")");
    prevId = id;
    if (!e["sort"].is_string())
      throw FormatError("element sort must be a string");
    try {
      b.addElement(id, e["sort"].get<std::string>());
    } catch (const SignatureError& err) {
      throw FormatError(err.what());
    }
  }

  if (!j["tuples"].is_object())
    throw FormatError("\"tuples\" must be an object");
  for (const auto& r : sig.relations)
    if (!j["tuples"].contains(r.name))
      throw FormatError("tuples object is missing relation " + r.name);
  for (const auto& [name, arr] : j["tuples"].items()) {
    if (!sig.relation(name))
      throw FormatError("tuples given for undeclared relation " + name);
    if (!arr.is_array())
      throw FormatError("tuples for " + name + " must be an array");
    for (const auto& t : arr) {
      if (!t.is_array())
        throw FormatError("each tuple for " + name + " must be an array");
      std::vector<int> tuple;
      for (const auto& v : t) tuple.push_back(intField(v, "tuple entry"));
      b.addTuple(name, std::move(tuple));
    }
  }

  if (!j["order"].is_object()) throw FormatError("\"order\" must be an object");
  for (const auto& s : sig.orderedSorts)
    if (!j["order"].contains(s))
      throw FormatError("order object is missing ordered sort " + s);
  for (const auto& [name, arr] : j["order"].items()) {
    if (!sig.isOrdered(name))
      throw FormatError("order given for sort " + name +
                        " which is not declared ordered");
    if (!arr.is_array())
      throw FormatError("order for " + name + " must be an array");
    std::vector<int> ord;
    for (const auto& v : arr) ord.push_back(intField(v, "order entry"));
    b.setOrder(name, std::move(ord));
  }

  try {
    return b.build();
  } catch (const SignatureError& err) {
    throw FormatError(err.what());
  }
}

std::string writeJsonText(const Json& j) { return j.dump(2) + "\n"; }

Json parseJsonText(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw FormatError("input is not valid JSON");
  return j;
}

std::string writeStructureText(const Structure& s) {
  return writeJsonText(structureToJson(s));
}

Structure readStructureText(const std::string& text) {
  return structureFromJson(parseJsonText(text));
}

Json loadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parseJsonText(text);
}

void saveJsonFile(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write file: " + path);
  out << writeJsonText(j);
}

Structure loadStructureFile(const std::string& path) {
  return structureFromJson(loadJsonFile(path));
}

void saveStructureFile(const Structure& s, const std::string& path) {
  saveJsonFile(structureToJson(s), path);
}

}  // namespace forge
