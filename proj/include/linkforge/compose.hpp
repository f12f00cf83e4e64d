#pragma once

// String-link tangles and the constructive operations on links: stacking,
// reflection, closures, doubles, Hashizume connected sum and insertion of
// local knots.

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linkforge/errors.hpp"
#include "linkforge/pdcode.hpp"

namespace linkforge {

// An m-strand string link. Strand k runs upward from bottom[k] to top[k];
// bottom[k] == top[k] (a label used by no crossing) denotes a strand with
// no crossings.
class TangleDiagram {
 public:
  TangleDiagram() = default;

  // Explicit over-strand directions; validated against the strand walks.
  TangleDiagram(std::vector<Crossing> crossings, std::vector<int> bottom, std::vector<int> top,
                int free_loops = 0, std::string name = {})
      : crossings_(std::move(crossings)),
        bottom_(std::move(bottom)),
        top_(std::move(top)),
        free_loops_(free_loops),
        name_(std::move(name)) {
    std::vector<int> over_in;
    for (const Crossing& x : crossings_) over_in.push_back(x.over_in);
    walk(over_in, true);
  }

  // Bare PD arcs: over-strand directions follow from walking the strands.
  static TangleDiagram from_pd(const std::vector<std::array<int, 4>>& pd, std::vector<int> bottom,
                               std::vector<int> top, int free_loops = 0, std::string name = {}) {
    TangleDiagram t;
    for (const auto& arcs : pd) t.crossings_.push_back({arcs, 0});
    t.bottom_ = std::move(bottom);
    t.top_ = std::move(top);
    t.free_loops_ = free_loops;
    t.name_ = std::move(name);
    std::vector<int> over_in(pd.size(), 0);
    t.walk(over_in, false);
    for (std::size_t i = 0; i < pd.size(); ++i) t.crossings_[i].over_in = over_in[i];
    return t;
  }

  static TangleDiagram identity(int m) {
    std::vector<int> ends(m);
    std::iota(ends.begin(), ends.end(), 1);
    return TangleDiagram({}, ends, ends, 0, "identity" + std::to_string(m));
  }

  int strand_count() const { return static_cast<int>(bottom_.size()); }
  const std::vector<Crossing>& crossings() const { return crossings_; }
  const std::vector<int>& bottom() const { return bottom_; }
  const std::vector<int>& top() const { return top_; }
  int free_loops() const { return free_loops_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  // Arcs of strand k from bottom to top.
  const std::vector<int>& strand(int k) const { return strands_.at(k); }

  int max_label() const {
    int m = 0;
    for (const Crossing& x : crossings_)
      for (int a : x.arcs) m = std::max(m, a);
    for (int a : bottom_) m = std::max(m, a);
    for (int a : top_) m = std::max(m, a);
    return m;
  }

 private:
  // Walks every strand from its bottom endpoint. With `check`, verifies the
  // given over_in; otherwise fills it in.
  void walk(std::vector<int>& over_in, bool check) {
    const int m = static_cast<int>(bottom_.size());
    if (static_cast<int>(top_.size()) != m) throw ValidationError("tangle: bottom/top endpoint counts differ");
    if (free_loops_ < 0) throw ValidationError("tangle: free_loops must be nonnegative");
    std::map<int, std::vector<SlotRef>> occ;
    for (int i = 0; i < static_cast<int>(crossings_.size()); ++i)
      for (int s = 0; s < 4; ++s) occ[crossings_[i].arcs[s]].push_back({i, s});
    std::set<int> endpoints;
    for (int k = 0; k < m; ++k) {
      for (int label : {bottom_[k], top_[k]}) {
        const std::size_t count = occ.count(label) ? occ[label].size() : 0;
        if (count > 1) throw ValidationError("tangle: endpoint arc " + std::to_string(label) + " is internal");
        if (count == 0 && bottom_[k] != top_[k])
          throw ValidationError("tangle: endpoint arc " + std::to_string(label) + " is not used");
      }
      if (!endpoints.insert(bottom_[k]).second || (top_[k] != bottom_[k] && !endpoints.insert(top_[k]).second))
        throw ValidationError("tangle: endpoint labels must be distinct");
    }
    for (const auto& [arc, o] : occ) {
      if (o.size() > 2) throw ValidationError("arc multiplicity: arc " + std::to_string(arc) + " occurs " +
                                              std::to_string(o.size()) + " times");
      if (o.size() == 1 && endpoints.count(arc) == 0)
        throw ValidationError("arc multiplicity: arc " + std::to_string(arc) + " occurs once but is no endpoint");
    }

    strands_.assign(m, {});
    std::set<int> visited;
    for (int k = 0; k < m; ++k) {
      int arc = bottom_[k];
      std::optional<SlotRef> came_from;  // tail occurrence of `arc`
      while (true) {
        if (!visited.insert(arc).second) throw ValidationError("tangle: strand revisits arc " + std::to_string(arc));
        strands_[k].push_back(arc);
        const auto it = occ.find(arc);
        std::optional<SlotRef> head;
        if (it != occ.end())
          for (const SlotRef& r : it->second)
            if (!came_from || !(r == *came_from)) head = r;
        if (!head) break;  // reached a top endpoint
        const int s = head->slot;
        if (s == 2) throw ValidationError("inconsistent orientation: strand " + std::to_string(k + 1) +
                                          " runs against the under-strand convention");
        if (s == 1 || s == 3) {
          if (check && over_in[head->crossing] != s)
            throw ValidationError("inconsistent orientation at crossing " + std::to_string(head->crossing));
          over_in[head->crossing] = s;
        }
        const SlotRef exit_ref{head->crossing, (s + 2) % 4};
        arc = crossings_[head->crossing].arcs[exit_ref.slot];
        came_from = exit_ref;
      }
      if (arc != top_[k])
        throw ValidationError("tangle: strand " + std::to_string(k + 1) + " does not end at top endpoint " +
                              std::to_string(k + 1) + " (string-link condition)");
    }
    for (const auto& [arc, o] : occ)
      if (visited.count(arc) == 0)
        throw ValidationError("tangle: closed component through arc " + std::to_string(arc) + " inside a string link");
  }

  std::vector<Crossing> crossings_;
  std::vector<int> bottom_, top_;
  int free_loops_ = 0;
  std::string name_;
  std::vector<std::vector<int>> strands_;
};

// ---------------------------------------------------------------------------

// b on top of a: top endpoint k of a is fused with bottom endpoint k of b.
inline TangleDiagram stack(const TangleDiagram& a, const TangleDiagram& b) {
  if (a.strand_count() != b.strand_count())
    throw DomainError("stack: strand-count mismatch (" + std::to_string(a.strand_count()) + " vs " +
                      std::to_string(b.strand_count()) + ")");
  const int offset = a.max_label();
  std::map<int, int> map;
  for (int k = 0; k < b.strand_count(); ++k) map[b.bottom()[k]] = a.top()[k];
  auto relabel = [&](int label) {
    auto it = map.find(label);
    return it != map.end() ? it->second : label + offset;
  };
  std::vector<Crossing> xs = a.crossings();
  for (Crossing x : b.crossings()) {
    for (int& v : x.arcs) v = relabel(v);
    xs.push_back(x);
  }
  std::vector<int> top;
  for (int label : b.top()) top.push_back(relabel(label));
  return TangleDiagram(std::move(xs), a.bottom(), std::move(top), a.free_loops() + b.free_loops());
}

// Reflection of the interval factor: the diagram is flipped top to bottom,
// spatial over/under is kept and strands are reoriented upward. Every
// crossing sign is negated.
inline TangleDiagram reflect(const TangleDiagram& l) {
  std::vector<Crossing> xs;
  for (const Crossing& x : l.crossings()) xs.push_back({{x.arcs[2], x.arcs[1], x.arcs[0], x.arcs[3]}, 4 - x.over_in});
  return TangleDiagram(std::move(xs), l.top(), l.bottom(), l.free_loops(),
                       l.name().empty() ? "" : "reflected " + l.name());
}

// Closure pattern: disjoint cycles of strand indices (1-based). A cycle
// (a1 a2 ... ak) is traversed as strand a1 upward, a cap from top a1 to top
// a2, strand a2 downward, a cup from bottom a2 to bottom a3, and so on; the
// last strand is joined back to bottom a1. The 1-cycle (k) is the standard
// closure of strand k. All joining arcs lie outside the tangle box, so the
// pattern is realizable iff they are pairwise non-crossing.
struct ClosurePattern {
  std::vector<std::vector<int>> cycles;

  static ClosurePattern identity(int m) {
    ClosurePattern p;
    for (int k = 1; k <= m; ++k) p.cycles.push_back({k});
    return p;
  }
};

// Cycle notation, e.g. "(1 2)(3)" or "(1,2)(3)"; strands not mentioned
// close standardly.
inline ClosurePattern parse_closure_pattern(const std::string& text, int m) {
  ClosurePattern p;
  std::set<int> used;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i;
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '(') throw ValidationError("closure pattern: expected '(' in \"" + text + "\"");
    ++i;
    std::vector<int> cycle;
    while (true) {
      skip();
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) throw ValidationError("closure pattern: expected strand index in \"" + text + "\"");
      const int k = std::stoi(text.substr(start, i - start));
      if (k < 1 || k > m) throw ValidationError("closure pattern: strand " + std::to_string(k) + " out of range");
      if (!used.insert(k).second) throw ValidationError("closure pattern: strand " + std::to_string(k) + " repeated");
      cycle.push_back(k);
    }
    if (cycle.empty()) throw ValidationError("closure pattern: empty cycle");
    p.cycles.push_back(std::move(cycle));
    skip();
  }
  for (int k = 1; k <= m; ++k)
    if (used.count(k) == 0) p.cycles.push_back({k});
  return p;
}

namespace detail {

struct Endpoint {
  bool top;
  int strand;  // 1-based
};

struct ClosurePlan {
  std::vector<std::pair<Endpoint, Endpoint>> chords;
  std::set<int> reversed;  // 1-based strands traversed downward
};

inline ClosurePlan plan_closure(const ClosurePattern& p, int m) {
  ClosurePlan plan;
  std::set<int> seen;
  for (const auto& cycle : p.cycles) {
    const int k = static_cast<int>(cycle.size());
    for (int s : cycle) {
      if (s < 1 || s > m) throw DomainError("closure pattern: strand " + std::to_string(s) + " out of range");
      if (!seen.insert(s).second) throw DomainError("closure pattern: strand " + std::to_string(s) + " repeated");
    }
    for (int i = 0; i < k; ++i) {
      const bool up = i % 2 == 0;
      if (!up) plan.reversed.insert(cycle[i]);
      const Endpoint end{up, cycle[i]};
      if (i + 1 < k)
        plan.chords.push_back({end, Endpoint{up, cycle[i + 1]}});
      else
        plan.chords.push_back({end, Endpoint{false, cycle[0]}});
    }
  }
  if (static_cast<int>(seen.size()) != m) throw DomainError("closure pattern does not cover every strand");

  // Boundary order around the box: bottoms left to right, then tops right to left.
  auto position = [m](const Endpoint& e) { return e.top ? 2 * m - e.strand : e.strand - 1; };
  for (std::size_t i = 0; i < plan.chords.size(); ++i)
    for (std::size_t j = i + 1; j < plan.chords.size(); ++j) {
      int a = position(plan.chords[i].first), b = position(plan.chords[i].second);
      int c = position(plan.chords[j].first), d = position(plan.chords[j].second);
      if (a > b) std::swap(a, b);
      if (c > d) std::swap(c, d);
      const bool interleave = (a < c && c < b && b < d) || (c < a && a < d && d < b);
      if (interleave) throw DomainError("closure pattern is not realizable by non-crossing arcs");
    }
  return plan;
}

}  // namespace detail

inline Diagram close(const TangleDiagram& l, const ClosurePattern& p) {
  const int m = l.strand_count();
  const detail::ClosurePlan plan = detail::plan_closure(p, m);

  std::set<int> reversed_arcs;
  for (int s : plan.reversed)
    for (int a : l.strand(s - 1)) reversed_arcs.insert(a);
  std::vector<Crossing> xs = l.crossings();
  for (Crossing& x : xs) {
    if (reversed_arcs.count(x.arcs[0]) != 0) {
      x.arcs = {x.arcs[2], x.arcs[3], x.arcs[0], x.arcs[1]};
      x.over_in = 4 - x.over_in;
    }
    if (reversed_arcs.count(x.arcs[1]) != 0) x.over_in = 4 - x.over_in;
  }

  std::map<int, int> parent;
  auto find = [&](int a) {
    if (!parent.count(a)) parent[a] = a;
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto label = [&](const detail::Endpoint& e) { return e.top ? l.top()[e.strand - 1] : l.bottom()[e.strand - 1]; };
  for (const auto& [e1, e2] : plan.chords) {
    const int a = find(label(e1)), b = find(label(e2));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::set<int> used;
  for (Crossing& x : xs)
    for (int& a : x.arcs) {
      a = find(a);
      used.insert(a);
    }
  int crossing_free = 0;
  std::set<int> roots;
  for (int k = 0; k < m; ++k) roots.insert(find(l.bottom()[k]));
  for (int r : roots)
    if (used.count(r) == 0) ++crossing_free;
  return Diagram(std::move(xs), l.free_loops() + crossing_free, l.name().empty() ? "" : "closure of " + l.name());
}

inline Diagram double_of(const TangleDiagram& l) {
  Diagram d = close(stack(l, reflect(l)), ClosurePattern::identity(l.strand_count()));
  d.set_name(l.name().empty() ? "" : "double of " + l.name());
  return d;
}

// ---------------------------------------------------------------------------

// Connected sum of component i of l with component j of k (0-based), cutting
// arc_l and arc_k (defaults: each component's smallest arc). Result
// components: those of l in order with component i absorbing component j,
// then the remaining components of k; free loops last.
inline Diagram hashizume_sum(const Diagram& l, int i, const Diagram& k, int j, std::optional<int> arc_l = {},
                             std::optional<int> arc_k = {}) {
  if (i < 0 || i >= l.component_count())
    throw DomainError("hashizume_sum: component " + std::to_string(i) + " out of range for the first link");
  if (j < 0 || j >= k.component_count())
    throw DomainError("hashizume_sum: component " + std::to_string(j) + " out of range for the second link");
  auto check_arc = [](const Diagram& d, int comp, std::optional<int>& arc, const char* which) {
    if (d.is_free_loop(comp)) {
      if (arc) throw DomainError(std::string("hashizume_sum: ") + which + " component is a free loop; no arc to cut");
      return;
    }
    if (!arc) arc = d.component_arcs(comp).front();
    if (!d.has_arc(*arc) || d.component_of_arc(*arc) != comp)
      throw DomainError(std::string("hashizume_sum: arc ") + std::to_string(*arc) + " is not on the selected " + which +
                        " component");
  };
  check_arc(l, i, arc_l, "first");
  check_arc(k, j, arc_k, "second");

  const int offset = l.max_arc();
  std::vector<Crossing> xs = l.crossings();
  for (Crossing x : k.crossings()) {
    for (int& v : x.arcs) v += offset;
    xs.push_back(x);
  }
  int free_loops = l.free_loops() + k.free_loops();
  std::optional<int> merged_arc;
  if (arc_l && arc_k) {
    // Splice: the arcs exchange their heads.
    const int al = *arc_l, ak = *arc_k + offset;
    const SlotRef hl = l.head(al);
    SlotRef hk = k.head(*arc_k);
    hk.crossing += static_cast<int>(l.crossing_count());
    xs[hl.crossing].arcs[hl.slot] = ak;
    xs[hk.crossing].arcs[hk.slot] = al;
    merged_arc = al;
  } else {
    free_loops -= 1;  // a free loop is absorbed by the other summand
    if (arc_l) merged_arc = *arc_l;
    if (arc_k) merged_arc = *arc_k + offset;
  }
  Diagram raw(std::move(xs), free_loops);

  // Order: l's crossing components (i replaced by the merged one), the merged
  // component if it came from a free loop of l, then k's other components.
  std::vector<int> order;
  std::set<int> placed;
  auto place = [&](int arc) {
    const int c = raw.component_of_arc(arc);
    if (placed.insert(c).second) order.push_back(c);
  };
  for (int c = 0; c < l.crossing_component_count(); ++c)
    place(c == i && merged_arc ? *merged_arc : l.component_arcs(c).front());
  if (merged_arc) place(*merged_arc);
  for (int c = 0; c < k.crossing_component_count(); ++c) place(k.component_arcs(c).front() + offset);
  Diagram out = canonical_labels(raw, order);
  return out;
}

inline Diagram insert_local_knots(const Diagram& l, const std::vector<std::optional<Diagram>>& knots) {
  if (static_cast<int>(knots.size()) != l.component_count())
    throw DomainError("insert_local_knots: expected " + std::to_string(l.component_count()) + " entries");
  Diagram out = l;
  for (int c = 0; c < static_cast<int>(knots.size()); ++c) {
    if (!knots[c]) continue;
    if (knots[c]->component_count() != 1)
      throw DomainError("insert_local_knots: entry " + std::to_string(c) + " is not a knot");
    out = hashizume_sum(out, c, *knots[c], 0);
  }
  out.set_name(l.name());
  return out;
}

}  // namespace linkforge
