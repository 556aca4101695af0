#pragma once

#include <string>
#include <vector>

namespace forge {

struct Violation {
  std::string kind;    // stable machine-readable tag, e.g. "g-not-onto"
  std::string detail;  // human-readable witness description
};

struct Verdict {
  bool ok = true;
  std::vector<Violation> violations;

  void fail(std::string kind, std::string detail) {
    ok = false;
    violations.push_back({std::move(kind), std::move(detail)});
  }
  void merge(const Verdict& other) {
    if (!other.ok) ok = false;
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
  }
};

}  // namespace forge
