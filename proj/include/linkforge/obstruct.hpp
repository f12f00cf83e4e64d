#pragma once

// Local-knot exclusion by Jones-polynomial divisibility.
//
// If K is a local knot of L then V_K divides V_L in Z[t^{+-1/2}]. The test
// is one-sided: non-divisibility excludes K, divisibility proves nothing.

#include <map>
#include <string>
#include <vector>

#include "linkforge/errors.hpp"
#include "linkforge/invariants.hpp"
#include "linkforge/io.hpp"
#include "linkforge/laurent.hpp"

namespace linkforge {

enum class Verdict { excluded, inconclusive };

inline const char* to_string(Verdict v) { return v == Verdict::excluded ? "excluded" : "inconclusive"; }

inline Verdict exclude_local_knot(const HalfLaurent& v_link, const HalfLaurent& v_knot) {
  if (v_knot.is_zero()) throw DomainError("exclude_local_knot: knot polynomial is zero");
  return divide_exact(v_link, v_knot) ? Verdict::inconclusive : Verdict::excluded;
}

struct KnotTableEntry {
  std::string name;
  Diagram diagram;
  HalfLaurent jones;
  ConwayPoly conway;
};

// Loads entries {name, crossings, free_loops, jones, conway}; fails loudly
// when a pinned polynomial disagrees with the one computed from the diagram.
inline std::vector<KnotTableEntry> load_knot_table(const json& j) {
  if (!j.is_object() || !j.contains("knots") || !j.at("knots").is_array())
    throw ValidationError("knot table must be an object with a \"knots\" array");
  std::vector<KnotTableEntry> table;
  for (const json& e : j.at("knots")) {
    KnotTableEntry entry;
    entry.name = e.at("name").get<std::string>();
    entry.diagram = diagram_from_json(e);
    entry.diagram.set_name(entry.name);
    if (entry.diagram.component_count() != 1)
      throw ValidationError("knot table entry " + entry.name + " is not a knot");
    entry.jones = parse_half_laurent(e.at("jones").get<std::string>());
    entry.conway = parse_laurent<ConwayTag>(e.at("conway").get<std::string>());
    const HalfLaurent computed = jones(entry.diagram);
    if (computed != entry.jones)
      throw ValidationError("knot table entry " + entry.name + ": pinned Jones " + to_string(entry.jones) +
                            " but diagram gives " + to_string(computed));
    const ConwayPoly computed_conway = conway(entry.diagram);
    if (computed_conway != entry.conway)
      throw ValidationError("knot table entry " + entry.name + ": pinned Conway " + to_string(entry.conway) +
                            " but diagram gives " + to_string(computed_conway));
    table.push_back(std::move(entry));
  }
  if (table.empty()) throw ValidationError("knot table is empty");
  return table;
}

inline constexpr const char* kDefaultKnotTable = R"json({
  "knots": [
    {
      "name": "trefoil",
      "crossings": [[4, 2, 5, 1], [6, 4, 1, 3], [2, 6, 3, 5]],
      "free_loops": 0,
      "jones": "t + t^3 - t^4",
      "conway": "1 + z^2"
    },
    {
      "name": "figure-eight",
      "crossings": [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]],
      "free_loops": 0,
      "jones": "t^-2 - t^-1 + 1 - t + t^2",
      "conway": "1 - z^2"
    }
  ]
}
)json";

inline const std::vector<KnotTableEntry>& default_knot_table() {
  static const std::vector<KnotTableEntry> table = load_knot_table(json::parse(kDefaultKnotTable));
  return table;
}

struct ScanVerdict {
  Verdict knot;    // pinned chirality
  Verdict mirror;  // t -> 1/t
  Verdict combined() const {
    return knot == Verdict::excluded && mirror == Verdict::excluded ? Verdict::excluded : Verdict::inconclusive;
  }
};

inline std::map<std::string, ScanVerdict> scan_table(const HalfLaurent& v_link,
                                                     const std::vector<KnotTableEntry>& table) {
  if (table.empty()) throw DomainError("scan_table: empty table");
  std::map<std::string, ScanVerdict> out;
  for (const KnotTableEntry& e : table)
    out[e.name] = {exclude_local_knot(v_link, e.jones), exclude_local_knot(v_link, substitute_inverse(e.jones))};
  return out;
}

}  // namespace linkforge
