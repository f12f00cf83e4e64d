#pragma once

// Kauffman bracket, Jones polynomial, canonical Seifert surface data and the
// Conway polynomial of an oriented diagram.

#include <algorithm>
#include <cstdint>
#include <map>
#include <thread>
#include <vector>

#include "linkforge/errors.hpp"
#include "linkforge/laurent.hpp"
#include "linkforge/pdcode.hpp"

namespace linkforge {

struct BracketOptions {
  int crossing_cap = 24;
  unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

class LoopCounter {
 public:
  explicit LoopCounter(int n) : parent_(n) {}

  void reset() {
    for (int i = 0; i < static_cast<int>(parent_.size()); ++i) parent_[i] = i;
    roots_ = static_cast<int>(parent_.size());
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent_[a] = b;
      --roots_;
    }
  }
  int loops() const { return roots_; }

 private:
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  std::vector<int> parent_;
  int roots_ = 0;
};

// counts[k][l]: number of states with (#A - #B) = k - c and l loops.
using StateHistogram = std::vector<std::vector<std::int64_t>>;

}  // namespace detail

// <D> = sum over states of A^(#A - #B) * delta^(loops - 1), delta = -A^2 - A^-2.
// At X(a,b,c,d) the A-smoothing joins (a,b),(c,d); the B-smoothing joins (a,d),(b,c).
inline BracketPoly kauffman_bracket(const Diagram& d, const BracketOptions& opts = {}) {
  const int c = static_cast<int>(d.crossing_count());
  if (c > opts.crossing_cap)
    throw ResourceError("kauffman_bracket: " + std::to_string(c) + " crossings exceed the crossing cap of " +
                        std::to_string(opts.crossing_cap));
  if (d.empty()) throw DomainError("kauffman_bracket: empty diagram");

  std::map<int, int> index;
  for (int a : d.arcs()) index.emplace(a, static_cast<int>(index.size()));
  const int n = static_cast<int>(index.size());
  struct Pairs {
    int a, b, c, d;
  };
  std::vector<Pairs> xs;
  for (const Crossing& x : d.crossings())
    xs.push_back({index[x.arcs[0]], index[x.arcs[1]], index[x.arcs[2]], index[x.arcs[3]]});

  const int max_loops = n + d.free_loops() + 1;
  const std::uint64_t states = std::uint64_t{1} << c;
  unsigned workers = opts.threads != 0 ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
  if (states < (std::uint64_t{1} << 12)) workers = 1;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, states));

  std::vector<detail::StateHistogram> partial(
      workers, detail::StateHistogram(2 * c + 1, std::vector<std::int64_t>(max_loops + 1, 0)));
  auto run = [&](unsigned w) {
    detail::LoopCounter uf(n);
    auto& hist = partial[w];
    const std::uint64_t begin = states * w / workers;
    const std::uint64_t end = states * (w + 1) / workers;
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      uf.reset();
      int b_count = 0;
      for (int i = 0; i < c; ++i) {
        const Pairs& p = xs[i];
        if ((mask >> i) & 1U) {
          ++b_count;
          uf.join(p.a, p.d);
          uf.join(p.b, p.c);
        } else {
          uf.join(p.a, p.b);
          uf.join(p.c, p.d);
        }
      }
      ++hist[c - 2 * b_count + c][uf.loops() + d.free_loops()];
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  const BracketPoly delta = BracketPoly::monomial(-1, 2) + BracketPoly::monomial(-1, -2);
  std::vector<BracketPoly> delta_pow{BracketPoly(1)};
  BracketPoly out;
  for (int k = 0; k <= 2 * c; ++k) {
    for (int l = 1; l <= max_loops; ++l) {
      Integer count = 0;
      for (const auto& hist : partial) count += hist[k][l];
      if (count == 0) continue;
      while (static_cast<int>(delta_pow.size()) < l) delta_pow.push_back(delta_pow.back() * delta);
      out += delta_pow[l - 1].shifted(k - c, count);
    }
  }
  return out;
}

inline HalfLaurent jones(const Diagram& d, const BracketOptions& opts = {}) {
  if (d.empty()) throw DomainError("jones: empty diagram");
  return bracket_to_jones(kauffman_bracket(d, opts), writhe(d));
}

// ---------------------------------------------------------------------------
// Seifert surface data

struct SeifertData {
  int circle_count = 0;
  int crossing_count = 0;
  int betti = 0;
  IntMatrix matrix;  // betti x betti, V_ij = lk(g_i, g_j^+)
};

namespace detail {

struct SeifertCircles {
  std::vector<std::vector<int>> circles;  // arcs in orientation order
  std::map<int, int> circle_of_arc;
};

// Oriented smoothing: an arc entering through slot 0 leaves through the
// adjacent over-out slot; one entering on the over-strand leaves through slot 2.
inline SeifertCircles trace_seifert_circles(const Diagram& d) {
  SeifertCircles sc;
  for (int start : d.arcs()) {
    if (sc.circle_of_arc.count(start) != 0) continue;
    const int id = static_cast<int>(sc.circles.size());
    std::vector<int> circle;
    int arc = start;
    do {
      sc.circle_of_arc[arc] = id;
      circle.push_back(arc);
      const SlotRef h = d.head(arc);
      const Crossing& x = d.crossings()[h.crossing];
      arc = x.arcs[h.slot == 0 ? x.over_out() : 2];
    } while (arc != start);
    sc.circles.push_back(std::move(circle));
  }
  return sc;
}

// Faces of the diagram: face_right[arc] / face_left[arc] relative to the
// arc's orientation. Traced by always turning to the next counterclockwise
// slot, which keeps the face on the traveller's right.
struct Faces {
  int count = 0;
  std::map<int, int> right;
  std::map<int, int> left;
};

inline Faces trace_faces(const Diagram& d) {
  // dart (crossing, slot): leaving the crossing through that slot.
  const int n = static_cast<int>(d.crossing_count());
  std::vector<int> face(4 * n, -1);
  auto other_end = [&](int x, int s) {
    const int arc = d.crossings()[x].arcs[s];
    SlotRef h = d.head(arc), t = d.tail(arc);
    if (h.crossing == x && h.slot == s) return t;
    return h;
  };
  Faces f;
  for (int start = 0; start < 4 * n; ++start) {
    if (face[start] >= 0) continue;
    int dart = start;
    while (face[dart] < 0) {
      face[dart] = f.count;
      const SlotRef arrive = other_end(dart / 4, dart % 4);
      dart = 4 * arrive.crossing + (arrive.slot + 1) % 4;
    }
    ++f.count;
  }
  for (int arc : d.arcs()) {
    const SlotRef t = d.tail(arc);
    const SlotRef h = d.head(arc);
    f.right[arc] = face[4 * t.crossing + t.slot];
    f.left[arc] = face[4 * h.crossing + h.slot];
  }
  return f;
}

class FaceUnion {
 public:
  explicit FaceUnion(int n) : parent_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void join(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

struct Band {
  int crossing = -1;
  int sign = 0;
  int ends[2] = {-1, -1};  // circle at s = 0 (under-in arc), circle at s = 1
  bool inner[2] = {false, false};  // band lies over the disk of ends[k]
  int index_on[2] = {-1, -1};      // position of the crossing along each circle
};

struct Step {
  int band;
  int from_end;  // 0: traversed from ends[0] to ends[1]
};

struct CanonicalSurface {
  SeifertCircles circles;
  std::vector<int> ccw;     // +1 counterclockwise (normal up), -1 clockwise
  std::vector<int> parent;  // innermost enclosing circle or -1
  std::vector<Band> bands;
  std::vector<std::vector<Step>> cycles;  // homology basis
};

inline CanonicalSurface build_canonical_surface(const Diagram& d) {
  CanonicalSurface cs;
  cs.circles = trace_seifert_circles(d);
  const auto& circles = cs.circles.circles;
  const int s = static_cast<int>(circles.size());
  const int c = static_cast<int>(d.crossing_count());

  const Faces faces = trace_faces(d);
  if (faces.count != c + 2) throw ValidationError("PD code is not planar (face count mismatch)");
  const int outer = faces.right.begin()->second;

  std::vector<std::vector<bool>> inside(s, std::vector<bool>(s, false));  // inside[v][u]: v inside u
  cs.ccw.assign(s, 1);
  for (int u = 0; u < s; ++u) {
    FaceUnion fu(faces.count);
    for (int arc : d.arcs())
      if (cs.circles.circle_of_arc.at(arc) != u) fu.join(faces.left.at(arc), faces.right.at(arc));
    const int a0 = circles[u][0];
    if (fu.find(faces.left.at(a0)) == fu.find(faces.right.at(a0)))
      throw InvariantViolation("Seifert circle does not separate the sphere");
    cs.ccw[u] = fu.find(faces.left.at(a0)) == fu.find(outer) ? -1 : +1;
    for (int v = 0; v < s; ++v) {
      if (v == u) continue;
      inside[v][u] = fu.find(faces.left.at(circles[v][0])) != fu.find(outer);
    }
  }
  std::vector<int> depth(s, 0);
  for (int v = 0; v < s; ++v)
    for (int u = 0; u < s; ++u) depth[v] += inside[v][u] ? 1 : 0;
  cs.parent.assign(s, -1);
  for (int v = 0; v < s; ++v)
    for (int u = 0; u < s; ++u)
      if (inside[v][u] && (cs.parent[v] < 0 || depth[u] > depth[cs.parent[v]])) cs.parent[v] = u;

  std::vector<std::map<int, int>> index_on(s);
  for (int v = 0; v < s; ++v)
    for (int k = 0; k < static_cast<int>(circles[v].size()); ++k)
      index_on[v][d.head(circles[v][k]).crossing] = k;

  for (int i = 0; i < c; ++i) {
    const Crossing& x = d.crossings()[i];
    Band b;
    b.crossing = i;
    b.sign = x.sign();
    b.ends[0] = cs.circles.circle_of_arc.at(x.arcs[0]);
    b.ends[1] = cs.circles.circle_of_arc.at(x.incoming_over_arc());
    if (b.ends[0] == b.ends[1]) throw InvariantViolation("Seifert circle meets a crossing twice");
    for (int k = 0; k < 2; ++k) {
      b.inner[k] = cs.parent[b.ends[1 - k]] == b.ends[k];
      b.index_on[k] = index_on[b.ends[k]].at(i);
    }
    const bool nested = b.inner[0] || b.inner[1];
    const bool same_orientation = cs.ccw[b.ends[0]] == cs.ccw[b.ends[1]];
    if (nested != same_orientation ||
        (!nested && cs.parent[b.ends[0]] != cs.parent[b.ends[1]]))
      throw InvariantViolation("inconsistent Seifert circle nesting at crossing " + std::to_string(i));
    cs.bands.push_back(b);
  }

  // Spanning tree of the Seifert graph; each non-tree band closes one cycle.
  std::vector<std::vector<int>> incident(s);
  for (int i = 0; i < c; ++i) {
    incident[cs.bands[i].ends[0]].push_back(i);
    incident[cs.bands[i].ends[1]].push_back(i);
  }
  std::vector<int> tree_band(s, -1), tree_parent(s, -1), level(s, -1);
  std::vector<bool> in_tree(c, false);
  std::vector<int> queue{0};
  level[0] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    for (int e : incident[v]) {
      const Band& b = cs.bands[e];
      const int w = b.ends[0] == v ? b.ends[1] : b.ends[0];
      if (level[w] >= 0) continue;
      level[w] = level[v] + 1;
      tree_parent[w] = v;
      tree_band[w] = e;
      in_tree[e] = true;
      queue.push_back(w);
    }
  }
  if (static_cast<int>(queue.size()) != s) throw DomainError("Seifert graph is disconnected");

  auto step_from = [&](int band, int from_circle) {
    return Step{band, cs.bands[band].ends[0] == from_circle ? 0 : 1};
  };
  for (int e = 0; e < c; ++e) {
    if (in_tree[e]) continue;
    const int u = cs.bands[e].ends[0];
    const int w = cs.bands[e].ends[1];
    // u -> w across e, then w up to the common ancestor and down to u.
    std::vector<Step> up, down;
    int a = w, b = u;
    while (a != b) {
      if (level[a] >= level[b]) {
        up.push_back(step_from(tree_band[a], a));
        a = tree_parent[a];
      } else {
        down.push_back(step_from(tree_band[b], tree_parent[b]));
        b = tree_parent[b];
      }
    }
    std::vector<Step> cycle{Step{e, 0}};
    cycle.insert(cycle.end(), up.begin(), up.end());
    cycle.insert(cycle.end(), down.rbegin(), down.rend());
    cs.cycles.push_back(std::move(cycle));
  }
  return cs;
}

// Seifert form of two basis cycles, as twice the linking number.
//
// Model: disk of circle v at height = nesting depth, normal up iff v is
// counterclockwise; each crossing is a half-twisted band. Curve x runs at
// band-width 1/3 and hugs the inside of each disk boundary at offset 1; the
// push-off y+ runs at width 2/3 and offset 2. Every projection crossing of
// x with y+ is then one of:
//   - the twist crossing inside a shared band: -sign * eta_x * eta_y;
//   - y leaving/entering a disk while x runs past that point along the rim;
//   - x descending a band that lies over the disk while y runs past it.
// Positions along a circle are measured in thirds of a crossing slot; the
// band width runs along the circle at the s = 0 end and against it at s = 1.
inline long twice_seifert_form(const CanonicalSurface& cs, const std::vector<Step>& x,
                               const std::vector<Step>& y) {
  struct Visit {
    int circle;
    int pos_in, pos_out;  // scaled by 3
    int band_in, band_out;
  };
  auto position = [&](int band, int end, int width3) {
    const Band& b = cs.bands[band];
    return 3 * b.index_on[end] + (end == 0 ? width3 : 3 - width3);
  };
  auto visits = [&](const std::vector<Step>& cyc, int width3) {
    std::vector<Visit> out;
    const std::size_t n = cyc.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Step& in = cyc[k];
      const Step& next = cyc[(k + 1) % n];
      const int in_end = 1 - in.from_end;
      const int out_end = next.from_end;
      const int circle = cs.bands[in.band].ends[in_end];
      out.push_back({circle, position(in.band, in_end, width3), position(next.band, out_end, width3),
                     in.band, next.band});
    }
    return out;
  };
  auto circle_length = [&](int v) { return 3 * static_cast<int>(cs.circles.circles[v].size()); };
  auto strictly_between = [](int q, int a, int b, int len) {
    const int dq = ((q - a) % len + len) % len;
    const int db = ((b - a) % len + len) % len;
    return dq > 0 && dq < db;
  };

  long total = 0;
  for (const Step& sx : x)
    for (const Step& sy : y)
      if (sx.band == sy.band) {
        const int eta = sx.from_end == sy.from_end ? 1 : -1;
        total += -cs.bands[sx.band].sign * eta;
      }

  const std::vector<Visit> vx = visits(x, 1);
  const std::vector<Visit> vy = visits(y, 2);

  // y crossing the rim of a disk under x's chord.
  for (const Visit& cx : vx)
    for (const Visit& cy : vy) {
      if (cx.circle != cy.circle) continue;
      const int v = cx.circle;
      const int len = circle_length(v);
      const int sigma = cs.ccw[v];
      const struct {
        int pos, band, dir;
      } points[2] = {{cy.pos_in, cy.band_in, -1}, {cy.pos_out, cy.band_out, +1}};
      for (const auto& p : points) {
        if (!strictly_between(p.pos, cx.pos_in, cx.pos_out, len)) continue;
        const Band& b = cs.bands[p.band];
        const int end = b.ends[0] == v ? 0 : 1;
        total += p.dir * (b.inner[end] ? 1 - sigma : 1);
      }
    }

  // x on a band lying over the disk, crossing y's chord.
  for (const Visit& cy : vy)
    for (const Visit& cx : vx) {
      if (cx.circle != cy.circle) continue;
      const int v = cy.circle;
      const int len = circle_length(v);
      const int sigma = cs.ccw[v];
      const struct {
        int pos, band, dir;
      } points[2] = {{cx.pos_in, cx.band_in, +1}, {cx.pos_out, cx.band_out, -1}};
      for (const auto& p : points) {
        const Band& b = cs.bands[p.band];
        const int end = b.ends[0] == v ? 0 : 1;
        if (!b.inner[end]) continue;
        if (strictly_between(p.pos, cy.pos_in, cy.pos_out, len)) total += p.dir * sigma;
      }
    }
  return total;
}

inline void require_connected(const Diagram& d, const char* what) {
  if (d.empty()) throw DomainError(std::string(what) + ": empty diagram");
  if (is_visibly_split(d))
    throw DomainError(std::string(what) + ": diagram is visibly split (canonical surface is not connected)");
}

}  // namespace detail

inline SeifertData seifert_circles(const Diagram& d) {
  detail::require_connected(d, "seifert_circles");
  SeifertData out;
  out.crossing_count = static_cast<int>(d.crossing_count());
  out.circle_count =
      d.crossing_count() == 0 ? 1 : static_cast<int>(detail::trace_seifert_circles(d).circles.size());
  out.betti = out.crossing_count - out.circle_count + 1;
  return out;
}

inline SeifertData seifert_matrix(const Diagram& d) {
  SeifertData out = seifert_circles(d);
  if (d.crossing_count() == 0) return out;
  const detail::CanonicalSurface cs = detail::build_canonical_surface(d);
  const int n = static_cast<int>(cs.cycles.size());
  if (n != out.betti) throw InvariantViolation("cycle basis size differs from betti number");
  out.matrix.assign(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const long twice = detail::twice_seifert_form(cs, cs.cycles[i], cs.cycles[j]);
      if (twice % 2 != 0) throw InvariantViolation("half-integral Seifert form entry");
      out.matrix[i][j] = twice / 2;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Determinants over Z[x^{+-1}]

namespace detail {

struct XTag {
  static constexpr long denominator = 1;
  static constexpr char variable = 'x';
};
using XPoly = Laurent<XTag>;

// Fraction-free Gaussian elimination (Bareiss).
inline XPoly determinant(std::vector<std::vector<XPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return XPoly(1);
  XPoly previous(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m[pivot][k].is_zero()) ++pivot;
    if (pivot == n) return XPoly();
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        XPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        auto q = divide_exact(num, previous);
        if (!q) throw InvariantViolation("Bareiss step is not exact");
        m[i][j] = std::move(*q);
      }
      m[i][k] = XPoly();
    }
    previous = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

// Rewrites a Laurent polynomial in x as a polynomial in z = x - x^{-1}.
inline ConwayPoly to_conway_variable(XPoly p) {
  const XPoly z = XPoly::monomial(1, 1) + XPoly::monomial(-1, -1);
  ConwayPoly out;
  while (!p.is_zero()) {
    const long deg = p.max_numerator();
    if (deg < 0) throw InvariantViolation("polynomial is not a polynomial in x - 1/x");
    const Integer c = p.terms().rbegin()->second;
    p -= pow(z, static_cast<unsigned>(deg)).shifted(0, c);
    out += ConwayPoly::monomial(c, deg);
  }
  return out;
}

}  // namespace detail

// Conway polynomial from the Seifert matrix: det(x^{-1} V - x V^T) in
// z = x - x^{-1}, so that the positive Hopf link has value z. Visibly split
// diagrams return 0.
inline ConwayPoly conway_from_seifert(const IntMatrix& v) {
  using detail::XPoly;
  const std::size_t n = v.size();
  std::vector<std::vector<XPoly>> m(n, std::vector<XPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = XPoly::monomial(v[i][j], -1) - XPoly::monomial(v[j][i], 1);
  return detail::to_conway_variable(detail::determinant(std::move(m)));
}

inline ConwayPoly conway(const Diagram& d) {
  if (d.empty()) throw DomainError("conway: empty diagram");
  if (is_visibly_split(d)) return ConwayPoly();
  return conway_from_seifert(seifert_matrix(d).matrix);
}

}  // namespace linkforge
