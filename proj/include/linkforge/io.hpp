#pragma once

// JSON and compact-text forms of diagrams and tangles.
//
//   diagram: {"name": "...", "crossings": [[a,b,c,d], ...], "free_loops": n}
//            optional "over_in": [2|4, ...] (1-based slot where the
//            over-strand enters) when the default inference does not apply
//   tangle:  diagram fields plus "endpoints": {"bottom": [...], "top": [...]}
//   compact: "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)" with "O" per free loop

#include <nlohmann/json.hpp>

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "linkforge/compose.hpp"
#include "linkforge/errors.hpp"
#include "linkforge/pdcode.hpp"

namespace linkforge {

using json = nlohmann::json;

namespace detail {

inline std::vector<std::array<int, 4>> read_crossings(const json& j) {
  std::vector<std::array<int, 4>> out;
  if (!j.contains("crossings")) return out;
  const json& xs = j.at("crossings");
  if (!xs.is_array()) throw ValidationError("\"crossings\" must be an array");
  for (const json& x : xs) {
    if (!x.is_array() || x.size() != 4) throw ValidationError("each crossing must list exactly 4 arcs");
    std::array<int, 4> arcs{};
    for (int s = 0; s < 4; ++s) {
      if (!x[s].is_number_integer()) throw ValidationError("arc labels must be integers");
      arcs[s] = x[s].get<int>();
    }
    out.push_back(arcs);
  }
  return out;
}

inline json write_crossings(const std::vector<Crossing>& xs) {
  json out = json::array();
  for (const Crossing& x : xs) out.push_back(x.arcs);
  return out;
}

}  // namespace detail

inline bool is_tangle_json(const json& j) { return j.is_object() && j.contains("endpoints"); }

inline Diagram diagram_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("diagram JSON must be an object");
  if (is_tangle_json(j)) throw ValidationError("expected a closed diagram, got a tangle (use close or double)");
  RawPD raw;
  raw.crossings = detail::read_crossings(j);
  if (j.contains("free_loops")) {
    if (!j.at("free_loops").is_number_integer()) throw ValidationError("\"free_loops\" must be an integer");
    raw.free_loops = j.at("free_loops").get<int>();
  }
  if (j.contains("over_in")) raw.over_in = j.at("over_in").get<std::vector<int>>();
  if (j.contains("name")) raw.name = j.at("name").get<std::string>();
  return validate(raw);
}

inline json to_json(const Diagram& d) {
  const RawPD raw = to_raw(d);
  json j;
  if (!d.name().empty()) j["name"] = d.name();
  j["crossings"] = detail::write_crossings(d.crossings());
  j["free_loops"] = d.free_loops();
  if (raw.over_in) j["over_in"] = *raw.over_in;
  return j;
}

inline TangleDiagram tangle_from_json(const json& j) {
  if (!is_tangle_json(j)) throw ValidationError("tangle JSON needs an \"endpoints\" object");
  const json& e = j.at("endpoints");
  if (!e.contains("bottom") || !e.contains("top")) throw ValidationError("\"endpoints\" needs \"bottom\" and \"top\"");
  const int free_loops = j.value("free_loops", 0);
  const std::string name = j.value("name", std::string{});
  return TangleDiagram::from_pd(detail::read_crossings(j), e.at("bottom").get<std::vector<int>>(),
                                e.at("top").get<std::vector<int>>(), free_loops, name);
}

inline json to_json(const TangleDiagram& t) {
  json j;
  if (!t.name().empty()) j["name"] = t.name();
  j["crossings"] = detail::write_crossings(t.crossings());
  j["free_loops"] = t.free_loops();
  j["endpoints"] = {{"bottom", t.bottom()}, {"top", t.top()}};
  return j;
}

inline Diagram parse_compact_pd(std::string_view text) {
  RawPD raw;
  int loops = 0;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
  };
  skip();
  while (i < text.size()) {
    const char c = text[i];
    if (c == 'O') {
      ++loops;
      ++i;
    } else if (c == 'X') {
      ++i;
      if (i >= text.size() || (text[i] != '(' && text[i] != '['))
        throw ValidationError("compact PD: expected '(' after X");
      const char close = text[i] == '(' ? ')' : ']';
      const std::size_t end = text.find(close, i);
      if (end == std::string_view::npos) throw ValidationError("compact PD: unterminated crossing");
      std::string body(text.substr(i + 1, end - i - 1));
      for (char& ch : body)
        if (ch == ',') ch = ' ';
      std::istringstream in(body);
      std::array<int, 4> arcs{};
      for (int s = 0; s < 4; ++s)
        if (!(in >> arcs[s])) throw ValidationError("compact PD: crossing needs 4 integer arcs");
      std::string rest;
      if (in >> rest) throw ValidationError("compact PD: crossing has more than 4 entries");
      raw.crossings.push_back(arcs);
      i = end + 1;
    } else {
      throw ValidationError(std::string("compact PD: unexpected character '") + c + "'");
    }
    skip();
  }
  if (raw.crossings.empty() && loops == 0) throw ValidationError("empty input without explicit free_loops");
  raw.free_loops = loops;
  return validate(raw);
}

inline std::string to_compact_pd(const Diagram& d) {
  std::string out;
  for (const Crossing& x : d.crossings()) {
    if (!out.empty()) out += ' ';
    out += "X(" + std::to_string(x.arcs[0]) + "," + std::to_string(x.arcs[1]) + "," + std::to_string(x.arcs[2]) +
           "," + std::to_string(x.arcs[3]) + ")";
  }
  for (int k = 0; k < d.free_loops(); ++k) out += out.empty() ? "O" : " O";
  return out;
}

// A diagram or tangle read from JSON (leading '{') or compact PD text.
inline json parse_document(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
  }
  return to_json(parse_compact_pd(text));
}

}  // namespace linkforge
