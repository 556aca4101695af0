#include "forge/end_extension.hpp"

#include <algorithm>

#include "forge/errors.hpp"
#include "forge/knight.hpp"
#include "forge/signature.hpp"

namespace forge {

Structure endExtendStep(const Structure& prev) {
  if (!(prev.signature() == *presetSignature("knight-q")))
    throw SignatureError("end extension works on relativized structures");
  Verdict v = checkRelativized(prev);
  if (!v.ok)
    throw PreconditionError("structure fails the class checker: " +
                            v.violations.front().kind);
  const auto& xs = prev.sortElements("X");
  const auto& oldYs = prev.order("Y");
  if (int(xs.size()) < int(oldYs.size()) + 1)
    throw PreconditionError("insufficient X to end-extend");

  const int yTop = prev.maxId() + 1;
  Structure::Builder b(prev);
  b.addElement(yTop, "Y");
  std::vector<int> order = oldYs;
  order.push_back(yTop);
  b.setOrder("Y", order);
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i < oldYs.size()) {
      b.addTuple("g", {xs[i], yTop, oldYs[i]});
      b.addTuple("G", {xs[i], yTop, oldYs[i]});
    } else {
      b.addTuple("g", {xs[i], yTop, yTop});
    }
  }
  return b.build();
}

Chain endExtend(Chain c, int k) {
  if (c.classTag != "knight-q")
    throw PreconditionError("end extension works on relativized chains");
  if (k < 0) throw PreconditionError("negative step count");
  for (int i = 0; i < k; ++i) {
    LedgerEntry entry;
    entry.stage = int(c.stages.size());
    entry.operation = "end-extend";
    c.stages.push_back(endExtendStep(c.finalStage()));
    c.ledger.push_back(std::move(entry));
  }
  return c;
}

EndExtensionVerdict verifyEndExtensionNecessity(const Structure& c,
                                                const Structure& d,
                                                const Embedding& e) {
  if (e.source != c || e.target != d)
    throw PreconditionError("embedding does not connect the two structures");
  if (!e.isValid()) throw PreconditionError("invalid embedding");

  std::set<int> imgX, imgY;
  for (const auto& [k, v] : e.map)
    (c.sortOf(k) == "X" ? imgX : imgY).insert(v);

  const auto& dXs = d.sortElements("X");
  const bool xFixed = imgX == std::set<int>(dXs.begin(), dXs.end());

  // Least new position lying below an image point, with that image point.
  int y1 = -1, y0 = -1;
  {
    int pendingNew = -1;
    for (int y : d.order("Y")) {
      if (!imgY.count(y)) {
        if (pendingNew == -1) pendingNew = y;
      } else if (pendingNew != -1) {
        y1 = pendingNew;
        y0 = y;
        break;
      }
    }
  }

  if (!xFixed || y1 == -1) return {"end-extension", ""};

  // Surjectivity below y0 demands a preimage of y1 that no element of the
  // fixed X sort can consistently be.
  std::vector<int> fiber;
  for (const auto& t : d.tuples("g"))
    if (t[1] == y0 && t[2] == y1) fiber.push_back(t[0]);
  std::sort(fiber.begin(), fiber.end());
  if (fiber.empty())
    return {"not a valid extension",
            "no x with g(x," + std::to_string(y0) + ") = " +
                std::to_string(y1) +
                ", demanded by surjectivity onto the positions below " +
                std::to_string(y0)};
  return {"not a valid extension",
          "x = " + std::to_string(fiber.front()) + " has g(x," +
              std::to_string(y0) + ") = " + std::to_string(y1) +
              ", but every X element comes from the old structure, whose "
              "g-value there maps elsewhere"};
}

}  // namespace forge
