#pragma once

#include <string>

#include "forge/structure.hpp"

#include "json.hpp"

namespace forge {

using Json = nlohmann::ordered_json;

// Interchange format: top-level object with exactly the fields
//   "signature": {"sorts", "relations": [{"name","profile","graded"}], "ordered"}
//   "elements":  [{"id", "sort"}] ascending by id
//   "tuples":    {relation -> array of id arrays}, every declared relation present
//   "order":     {ordered sort -> ids, least first}, every ordered sort present
// Unknown fields anywhere are rejected. Writing is canonical: rereading the
// output and writing again is byte-identical.
Json structureToJson(const Structure& s);
Structure structureFromJson(const Json& j);

std::string writeStructureText(const Structure& s);  // 2-space indent + '\n'
Structure readStructureText(const std::string& text);

Structure loadStructureFile(const std::string& path);
void saveStructureFile(const Structure& s, const std::string& path);

std::string writeJsonText(const Json& j);
Json parseJsonText(const std::string& text);  // FormatError on bad JSON
Json loadJsonFile(const std::string& path);
void saveJsonFile(const Json& j, const std::string& path);

// Helpers for strict readers elsewhere: throws FormatError naming the field.
void requireFields(const Json& obj, const std::vector<std::string>& required,
                   const std::string& context);

}  // namespace forge
