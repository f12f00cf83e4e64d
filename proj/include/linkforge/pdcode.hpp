#pragma once

// Oriented link diagrams as PD codes.
//
// Slot convention: X(a,b,c,d) lists the four arcs counterclockwise starting
// from the incoming under-strand, so the under-strand runs a -> c. The
// over-strand runs either b -> d or d -> b; which one is stored explicitly
// (over_in) once the diagram is validated.
//
//            c                   c
//            ^                   ^
//       d ---|--> b         d <--|--- b
//            |                   |
//            a                   a
//       over_in = 3 (+1)    over_in = 1 (-1)
//
// Components are ordered by their smallest arc label, then free loops.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linkforge/errors.hpp"

namespace linkforge {

struct Crossing {
  std::array<int, 4> arcs{};
  int over_in = 3;  // slot (1 or 3) through which the over-strand enters

  int over_out() const { return 4 - over_in; }
  int sign() const { return over_in == 3 ? +1 : -1; }
  int incoming_over_arc() const { return arcs[over_in]; }
  int outgoing_over_arc() const { return arcs[over_out()]; }

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

struct SlotRef {
  int crossing = -1;
  int slot = -1;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

using IntMatrix = std::vector<std::vector<long>>;

class Diagram {
 public:
  Diagram() = default;

  // Builds a diagram with explicit over-strand directions; throws
  // ValidationError when the arc multiplicity or orientation is inconsistent.
  Diagram(std::vector<Crossing> crossings, int free_loops, std::string name = {})
      : crossings_(std::move(crossings)), free_loops_(free_loops), name_(std::move(name)) {
    if (free_loops_ < 0) throw ValidationError("free_loops must be nonnegative");
    build();
  }

  const std::vector<Crossing>& crossings() const { return crossings_; }
  std::size_t crossing_count() const { return crossings_.size(); }
  int free_loops() const { return free_loops_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  bool empty() const { return crossings_.empty() && free_loops_ == 0; }

  // Crossing components first (ordered by smallest arc), then free loops.
  int component_count() const { return static_cast<int>(components_.size()) + free_loops_; }
  int crossing_component_count() const { return static_cast<int>(components_.size()); }
  bool is_free_loop(int component) const { return component >= crossing_component_count(); }

  // Arcs of a crossing component in orientation order, starting at its smallest arc.
  const std::vector<int>& component_arcs(int component) const { return components_.at(component); }
  int component_of_arc(int arc) const { return component_of_.at(arc); }
  bool has_arc(int arc) const { return component_of_.count(arc) != 0; }

  // Where the arc ends (enters a crossing) and starts (leaves a crossing).
  SlotRef head(int arc) const { return head_.at(arc); }
  SlotRef tail(int arc) const { return tail_.at(arc); }

  std::vector<int> arcs() const {
    std::vector<int> out;
    out.reserve(component_of_.size());
    for (const auto& [a, c] : component_of_) out.push_back(a);
    return out;
  }
  int max_arc() const { return component_of_.empty() ? 0 : component_of_.rbegin()->first; }

  // Component index of the under- and over-strand at crossing i.
  int under_component(std::size_t i) const { return component_of_.at(crossings_[i].arcs[0]); }
  int over_component(std::size_t i) const { return component_of_.at(crossings_[i].arcs[1]); }

  friend bool operator==(const Diagram& a, const Diagram& b) {
    return a.crossings_ == b.crossings_ && a.free_loops_ == b.free_loops_;
  }

 private:
  void build() {
    std::map<int, std::vector<SlotRef>> occurrences;
    for (int i = 0; i < static_cast<int>(crossings_.size()); ++i) {
      const Crossing& x = crossings_[i];
      if (x.over_in != 1 && x.over_in != 3)
        throw ValidationError("crossing " + std::to_string(i) + ": over_in must be slot 1 or 3");
      for (int s = 0; s < 4; ++s) occurrences[x.arcs[s]].push_back({i, s});
    }
    for (const auto& [arc, occ] : occurrences) {
      if (occ.size() != 2)
        throw ValidationError("arc multiplicity: arc " + std::to_string(arc) + " occurs " +
                              std::to_string(occ.size()) + " times (expected 2)");
    }
    for (const auto& [arc, occ] : occurrences) {
      int heads = 0;
      for (const SlotRef& r : occ) {
        const Crossing& x = crossings_[r.crossing];
        const bool incoming = r.slot == 0 || r.slot == x.over_in;
        if (incoming) {
          head_[arc] = r;
          ++heads;
        } else {
          tail_[arc] = r;
        }
      }
      if (heads != 1)
        throw ValidationError("inconsistent orientation: arc " + std::to_string(arc) + " has " +
                              std::to_string(heads) + " heads");
    }
    // Straight-through traversal; visiting arcs in increasing label order
    // means every component starts at its smallest arc.
    for (const auto& [start, occ] : occurrences) {
      if (component_of_.count(start) != 0) continue;
      const int index = static_cast<int>(components_.size());
      std::vector<int> cycle;
      int arc = start;
      do {
        component_of_[arc] = index;
        cycle.push_back(arc);
        const SlotRef h = head_.at(arc);
        arc = crossings_[h.crossing].arcs[(h.slot + 2) % 4];
      } while (arc != start);
      components_.push_back(std::move(cycle));
    }
  }

  std::vector<Crossing> crossings_;
  int free_loops_ = 0;
  std::string name_;

  std::vector<std::vector<int>> components_;
  std::map<int, int> component_of_;
  std::map<int, SlotRef> head_;
  std::map<int, SlotRef> tail_;
};

// ---------------------------------------------------------------------------
// Construction from bare PD codes

struct RawPD {
  std::vector<std::array<int, 4>> crossings;
  std::optional<int> free_loops;
  // Optional per-crossing slot (1-based: 2 or 4) where the over-strand enters.
  std::optional<std::vector<int>> over_in;
  std::string name;
};

namespace detail {

// Infers over-strand directions from the under-strand convention. A component
// that never passes under is oriented so that its smallest arc is followed by
// the next label when that is unambiguous, otherwise so that the over-strand
// enters through slot b at the first crossing it visits.
inline std::vector<int> infer_over_in(const std::vector<std::array<int, 4>>& pd) {
  const int n = static_cast<int>(pd.size());
  std::map<int, std::vector<SlotRef>> occ;
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 4; ++s) occ[pd[i][s]].push_back({i, s});
  for (const auto& [arc, o] : occ)
    if (o.size() != 2)
      throw ValidationError("arc multiplicity: arc " + std::to_string(arc) + " occurs " +
                            std::to_string(o.size()) + " times (expected 2)");

  std::vector<int> over_in(n, 0);
  std::set<int> seen;
  for (const auto& [start, o0] : occ) {
    if (seen.count(start) != 0) continue;
    // Walk the component entering through the first occurrence of `start`'s
    // partner; record (crossing, entry slot) for the forward direction.
    std::vector<SlotRef> entries;
    std::vector<int> arc_seq;
    int arc = start;
    SlotRef enter = o0[1];
    while (true) {
      seen.insert(arc);
      arc_seq.push_back(arc);
      entries.push_back(enter);
      const int next = pd[enter.crossing][(enter.slot + 2) % 4];
      const SlotRef exit_ref{enter.crossing, (enter.slot + 2) % 4};
      const auto& no = occ[next];
      SlotRef next_enter = (no[0] == exit_ref) ? no[1] : no[0];
      arc = next;
      enter = next_enter;
      if (arc == start && enter == o0[1]) break;
      if (arc_seq.size() > 4 * pd.size() + 4) throw InvariantViolation("runaway component walk");
    }
    // Direction: +1 forward, -1 backward, 0 unknown.
    int dir = 0;
    for (const SlotRef& e : entries) {
      int d = 0;
      if (e.slot == 0) d = +1;
      if (e.slot == 2) d = -1;
      if (d == 0) continue;
      if (dir != 0 && d != dir)
        throw ValidationError("inconsistent orientation on the component containing arc " +
                              std::to_string(start));
      dir = d;
    }
    if (dir == 0) {
      const std::size_t len = arc_seq.size();
      const int fwd_next = arc_seq[1 % len];
      const int bwd_next = arc_seq[len - 1];
      if (fwd_next != bwd_next && fwd_next == start + 1) dir = +1;
      else if (fwd_next != bwd_next && bwd_next == start + 1) dir = -1;
      else {
        std::size_t first = 0;
        for (std::size_t k = 1; k < entries.size(); ++k)
          if (entries[k].crossing < entries[first].crossing) first = k;
        dir = entries[first].slot == 1 ? +1 : -1;
      }
    }
    for (const SlotRef& e : entries) {
      if (e.slot == 1 || e.slot == 3) {
        const int entry_slot = dir > 0 ? e.slot : 4 - e.slot;
        over_in[e.crossing] = entry_slot;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (over_in[i] == 0) throw InvariantViolation("over-strand direction not determined");
  return over_in;
}

}  // namespace detail

inline Diagram validate(const RawPD& raw) {
  if (raw.crossings.empty() && !raw.free_loops)
    throw ValidationError("empty input without explicit free_loops");
  std::vector<int> over_in;
  if (raw.over_in) {
    if (raw.over_in->size() != raw.crossings.size())
      throw ValidationError("over_in must have one entry per crossing");
    for (int v : *raw.over_in) {
      if (v != 2 && v != 4) throw ValidationError("over_in entries must be 2 or 4");
      over_in.push_back(v - 1);
    }
  } else {
    over_in = detail::infer_over_in(raw.crossings);
  }
  std::vector<Crossing> xs;
  xs.reserve(raw.crossings.size());
  for (std::size_t i = 0; i < raw.crossings.size(); ++i) xs.push_back({raw.crossings[i], over_in[i]});
  return Diagram(std::move(xs), raw.free_loops.value_or(0), raw.name);
}

// Bare PD form of a diagram; over_in is filled only when the inference rule
// would not reproduce the stored orientation.
inline RawPD to_raw(const Diagram& d) {
  RawPD raw;
  for (const Crossing& x : d.crossings()) raw.crossings.push_back(x.arcs);
  raw.free_loops = d.free_loops();
  raw.name = d.name();
  if (!raw.crossings.empty()) {
    const std::vector<int> inferred = detail::infer_over_in(raw.crossings);
    bool same = true;
    for (std::size_t i = 0; i < inferred.size(); ++i) same = same && inferred[i] == d.crossings()[i].over_in;
    if (!same) {
      std::vector<int> explicit_over;
      for (const Crossing& x : d.crossings()) explicit_over.push_back(x.over_in + 1);
      raw.over_in = std::move(explicit_over);
    }
  }
  return raw;
}

// ---------------------------------------------------------------------------
// Combinatorial invariants

inline long writhe(const Diagram& d) {
  long w = 0;
  for (const Crossing& x : d.crossings()) w += x.sign();
  return w;
}

inline IntMatrix linking_matrix(const Diagram& d) {
  const int m = d.component_count();
  IntMatrix lk(m, std::vector<long>(m, 0));
  for (std::size_t i = 0; i < d.crossing_count(); ++i) {
    const int p = d.under_component(i);
    const int q = d.over_component(i);
    if (p == q) continue;
    const int s = d.crossings()[i].sign();
    lk[p][q] += s;
    lk[q][p] += s;
  }
  for (auto& row : lk)
    for (long& v : row) {
      if (v % 2 != 0) throw InvariantViolation("odd inter-component crossing sum");
      v /= 2;
    }
  return lk;
}

// Relabels arcs through `map` (every arc must be present).
inline Diagram relabel(const Diagram& d, const std::map<int, int>& map) {
  std::vector<Crossing> xs = d.crossings();
  for (Crossing& x : xs)
    for (int& a : x.arcs) a = map.at(a);
  return Diagram(std::move(xs), d.free_loops(), d.name());
}

// Labels arcs 1..n consecutively along each component, components taken in
// the given order (default: current order). Returns the relabeled diagram.
inline Diagram canonical_labels(const Diagram& d, const std::vector<int>& order = {}) {
  std::vector<int> comps = order;
  if (comps.empty()) {
    comps.resize(d.crossing_component_count());
    std::iota(comps.begin(), comps.end(), 0);
  }
  std::map<int, int> map;
  int next = 1;
  for (int c : comps)
    for (int a : d.component_arcs(c)) map[a] = next++;
  return relabel(d, map);
}

inline Diagram mirror(const Diagram& d) {
  std::vector<Crossing> xs;
  xs.reserve(d.crossing_count());
  for (const Crossing& x : d.crossings()) {
    const auto& [a, b, c, e] = x.arcs;
    if (x.over_in == 3)
      xs.push_back({{e, a, b, c}, 1});
    else
      xs.push_back({{b, c, e, a}, 3});
  }
  return Diagram(std::move(xs), d.free_loops(), d.name().empty() ? "" : "mirror " + d.name());
}

// Reverses orientation of every arc in `reversed`.
inline Diagram reverse_arcs(const Diagram& d, const std::set<int>& reversed) {
  std::vector<Crossing> xs = d.crossings();
  for (Crossing& x : xs) {
    if (reversed.count(x.arcs[0]) != 0) {
      x.arcs = {x.arcs[2], x.arcs[3], x.arcs[0], x.arcs[1]};
      x.over_in = 4 - x.over_in;
    }
    if (reversed.count(x.arcs[1]) != 0) x.over_in = 4 - x.over_in;
  }
  return Diagram(std::move(xs), d.free_loops(), d.name());
}

inline Diagram reverse_component(const Diagram& d, int component) {
  if (component < 0 || component >= d.component_count())
    throw DomainError("reverse_component: index " + std::to_string(component) + " out of range");
  if (d.is_free_loop(component)) return d;
  const auto& arcs = d.component_arcs(component);
  return reverse_arcs(d, std::set<int>(arcs.begin(), arcs.end()));
}

// Arc labels of b are shifted past those of a.
inline Diagram disjoint_union(const Diagram& a, const Diagram& b) {
  std::vector<Crossing> xs = a.crossings();
  const int offset = a.max_arc();
  for (Crossing x : b.crossings()) {
    for (int& v : x.arcs) v += offset;
    xs.push_back(x);
  }
  return Diagram(std::move(xs), a.free_loops() + b.free_loops(), a.name());
}

// Connected components of the "crossings between components" graph.
inline std::vector<int> diagram_pieces(const Diagram& d) {
  const int m = d.component_count();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < d.crossing_count(); ++i)
    parent[find(d.under_component(i))] = find(d.over_component(i));
  std::vector<int> out(m);
  for (int i = 0; i < m; ++i) out[i] = find(i);
  return out;
}

// Sufficient condition for splitness: the components fall into two nonempty
// groups with no crossing between them.
inline bool is_visibly_split(const Diagram& d) {
  if (d.component_count() < 2) return false;
  const std::vector<int> pieces = diagram_pieces(d);
  return std::any_of(pieces.begin(), pieces.end(), [&](int p) { return p != pieces[0]; });
}

}  // namespace linkforge
