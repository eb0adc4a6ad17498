// SPDX-License-Identifier: Apache-2.0
// Parametric vertices, face lattices and simplicial decomposition.
#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "redsimp/lp.hpp"
#include "redsimp/polyhedra.hpp"

namespace redsimp {

namespace {

// All size-k subsets of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i-- > 0) {
      if (idx[i] != i + n - k) break;
    }
    if (i == static_cast<std::size_t>(-1)) return;
    ++idx[i];
    for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<ParamVertex> compute_vertices(const Polyhedron& p) {
  const std::size_t d = p.dim();
  const auto& cons = p.constraints();
  std::vector<std::size_t> eq_idx, in_idx;
  for (std::size_t i = 0; i < cons.size(); ++i)
    (cons[i].equality ? eq_idx : in_idx).push_back(i);
  std::vector<RatVector> eq_rows;
  for (auto i : eq_idx) eq_rows.push_back(cons[i].linear());
  const std::size_t re = rank(eq_rows, d);
  if (re != eq_rows.size()) throw InvariantViolation("dependent equalities");
  const std::size_t k = d - re;

  auto [n1, n2] = structure_samples(p.param_lower_bound());
  std::vector<ParamVertex> symbolic;
  std::vector<std::vector<RatVector>> concrete(2);
  for_each_subset(in_idx.size(), k, [&](const std::vector<std::size_t>& sub) {
    std::vector<RatVector> rows = eq_rows;
    std::vector<std::size_t> used = eq_idx;
    for (auto s : sub) {
      rows.push_back(cons[in_idx[s]].linear());
      used.push_back(in_idx[s]);
    }
    RatMatrix m = RatMatrix::from_rows(rows, d);
    if (d > 0 && rank(m) < d) return;
    RatVector bp(rows.size()), bc(rows.size());
    for (std::size_t r = 0; r < used.size(); ++r) {
      bp[r] = -Rational(cons[used[r]].param);
      bc[r] = -Rational(cons[used[r]].constant);
    }
    std::vector<ParamAffine> coords(d);
    if (d > 0) {
      auto xp = solve_linear(m, bp);
      auto xc = solve_linear(m, bc);
      if (!xp || !xc) return;
      for (std::size_t i = 0; i < d; ++i) coords[i] = ParamAffine((*xc)[i], (*xp)[i]);
    }
    bool large = true;
    bool at[2] = {true, true};
    for (auto i : in_idx) {
      ParamAffine v = cons[i].eval(coords);
      if (v.sign() < 0) large = false;
      if (sgn(v.at(n1)) < 0) at[0] = false;
      if (sgn(v.at(n2)) < 0) at[1] = false;
    }
    if (large) {
      ParamVertex pv;
      pv.coords = coords;
      if (std::find(symbolic.begin(), symbolic.end(), pv) == symbolic.end())
        symbolic.push_back(pv);
    }
    for (int s = 0; s < 2; ++s) {
      if (!at[s]) continue;
      RatVector pt;
      for (auto& c : coords) pt.push_back(c.at(s == 0 ? n1 : n2));
      auto& list = concrete[s];
      if (std::find(list.begin(), list.end(), pt) == list.end()) list.push_back(pt);
    }
  });
  for (auto& v : symbolic)
    for (auto i : in_idx)
      if (cons[i].eval(v.coords) == ParamAffine()) v.saturated.insert(i);
  for (int s = 0; s < 2; ++s) {
    long n = s == 0 ? n1 : n2;
    bool same = concrete[s].size() == symbolic.size();
    for (const auto& v : symbolic) {
      if (!same) break;
      RatVector pt = v.at(n);
      same = std::find(concrete[s].begin(), concrete[s].end(), pt) != concrete[s].end();
      if (!same) break;
      for (auto i : in_idx) {
        bool tight = sgn(cons[i].eval(pt, Rational(n))) == 0;
        if (tight != (v.saturated.count(i) > 0)) same = false;
      }
    }
    if (!same)
      throw UnsupportedInput("vertex structure of " + p.str() +
                             " differs between N=" + std::to_string(n1) +
                             " and N=" + std::to_string(n2));
  }
  std::sort(symbolic.begin(), symbolic.end(),
            [](const ParamVertex& a, const ParamVertex& b) { return a.coords < b.coords; });
  return symbolic;
}

std::mutex g_vertex_mutex;

}  // namespace

bool is_bounded(const Polyhedron& p) {
  if (p.is_empty()) return true;
  std::vector<LinRow> cone;
  for (const auto& c : p.constraints()) {
    LinRow r;
    r.a = c.linear();
    r.b = 0;
    r.equality = c.equality;
    cone.push_back(r);
  }
  for (std::size_t i = 0; i < p.dim(); ++i) {
    for (int s : {1, -1}) {
      RatVector obj(p.dim());
      obj[i] = s;
      if (lp_maximize(p.dim(), cone, obj).status == LpStatus::Unbounded) return false;
    }
  }
  return true;
}

std::vector<ParamVertex> enumerate_vertices(const Polyhedron& p) {
  if (p.is_empty()) return {};
  static std::unordered_map<std::string, std::vector<ParamVertex>> cache;
  const std::string key = p.key() + "#" + p.str();
  {
    std::lock_guard<std::mutex> lock(g_vertex_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  if (!is_bounded(p)) throw UnsupportedInput("unbounded polyhedron " + p.str());
  auto v = compute_vertices(p);
  std::lock_guard<std::mutex> lock(g_vertex_mutex);
  if (cache.size() > 100000) cache.clear();
  cache.emplace(key, v);
  return v;
}

std::string Face::label() const {
  std::string s = "{";
  for (std::size_t i = 0; i < saturated.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(saturated[i] + 1);
  }
  return s + "}";
}

std::size_t FaceLattice::count_of_dim(std::size_t k) const {
  std::size_t n = 0;
  for (const auto& f : faces)
    if (f.dim == k) ++n;
  return n;
}

std::vector<std::size_t> FaceLattice::faces_of_dim(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].dim == k) out.push_back(i);
  return out;
}

std::string FaceLattice::to_dot(const std::string& name) const {
  std::string s = "digraph \"" + name + "\" {\n  rankdir=TB;\n";
  for (std::size_t i = 0; i < faces.size(); ++i) {
    std::string label = i == 0 ? "D" : faces[i].label();
    s += "  f" + std::to_string(i) + " [label=\"" + label + "\", dim=" +
         std::to_string(faces[i].dim) + "];\n";
  }
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (auto c : children[i])
      s += "  f" + std::to_string(i) + " -> f" + std::to_string(c) + ";\n";
  return s + "}\n";
}

FaceLattice build_face_lattice(const Polyhedron& p) {
  if (p.is_empty()) throw UnsupportedInput("face lattice of an empty polyhedron");
  FaceLattice lat;
  lat.poly = p;
  lat.vertices = enumerate_vertices(p);
  const auto& cons = p.constraints();
  std::vector<RatVector> eq_rows;
  std::vector<std::size_t> in_idx;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].equality) {
      eq_rows.push_back(cons[i].linear());
    } else {
      in_idx.push_back(i);
    }
  }
  auto face_dim = [&](const std::vector<std::size_t>& sat) {
    std::vector<RatVector> rows = eq_rows;
    for (auto i : sat) rows.push_back(cons[i].linear());
    return p.dim() - rank(rows, p.dim());
  };

  std::map<std::vector<std::size_t>, std::vector<std::size_t>> found;
  std::vector<std::size_t> all(lat.vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  found[{}] = all;
  std::vector<std::vector<std::size_t>> queue = {{}};
  while (!queue.empty()) {
    auto sat = queue.back();
    queue.pop_back();
    const auto verts = found[sat];
    for (auto c : in_idx) {
      if (std::binary_search(sat.begin(), sat.end(), c)) continue;
      std::vector<std::size_t> sub;
      for (auto v : verts)
        if (lat.vertices[v].saturated.count(c)) sub.push_back(v);
      if (sub.empty()) continue;
      std::vector<std::size_t> common(lat.vertices[sub[0]].saturated.begin(),
                                      lat.vertices[sub[0]].saturated.end());
      for (std::size_t k = 1; k < sub.size(); ++k) {
        std::vector<std::size_t> next;
        const auto& s = lat.vertices[sub[k]].saturated;
        for (auto x : common)
          if (s.count(x)) next.push_back(x);
        common = std::move(next);
      }
      if (found.count(common)) continue;
      found[common] = sub;
      queue.push_back(common);
    }
  }
  std::vector<Face> faces;
  for (const auto& [sat, verts] : found) {
    Face f;
    f.saturated = sat;
    f.vertices = verts;
    f.dim = face_dim(sat);
    faces.push_back(f);
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    return a.saturated < b.saturated;
  });
  lat.faces = std::move(faces);
  lat.children.assign(lat.faces.size(), {});
  for (std::size_t i = 0; i < lat.faces.size(); ++i)
    for (std::size_t j = 0; j < lat.faces.size(); ++j) {
      const Face& a = lat.faces[i];
      const Face& b = lat.faces[j];
      if (b.dim + 1 != a.dim) continue;
      if (std::includes(b.saturated.begin(), b.saturated.end(), a.saturated.begin(),
                        a.saturated.end()))
        lat.children[i].push_back(j);
    }
  return lat;
}

std::size_t facet_constraint(const FaceLattice& lat, std::size_t facet,
                             std::size_t parent) {
  const Face& f = lat.faces.at(facet);
  const Face& p = lat.faces.at(parent);
  if (f.dim + 1 != p.dim ||
      !std::includes(f.saturated.begin(), f.saturated.end(), p.saturated.begin(),
                     p.saturated.end()))
    throw std::invalid_argument("face " + f.label() + " is not a facet of " + p.label());
  for (auto c : f.saturated)
    if (!std::binary_search(p.saturated.begin(), p.saturated.end(), c)) return c;
  throw InvariantViolation("facet saturates no new constraint");
}

RatVector facet_normal(const FaceLattice& lat, std::size_t facet, std::size_t parent) {
  return lat.poly.constraints()[facet_constraint(lat, facet, parent)].linear();
}

bool is_simplex(const Polyhedron& p) {
  if (p.is_empty()) return false;
  auto verts = enumerate_vertices(p);
  const std::size_t k = p.affine_dim();
  if (verts.size() != k + 1) return false;
  for (long n : {structure_samples(p.param_lower_bound()).first,
                 structure_samples(p.param_lower_bound()).second}) {
    std::vector<RatVector> diffs;
    RatVector v0 = verts[0].at(n);
    for (std::size_t i = 1; i < verts.size(); ++i) diffs.push_back(sub(verts[i].at(n), v0));
    if (rank(diffs, p.dim()) != k) return false;
  }
  return true;
}

namespace {

// Hyperplane through v0 and the given vertices with an N-independent normal.
std::optional<Constraint> hyperplane_through(const std::vector<ParamVertex>& pts,
                                             std::size_t dim) {
  std::vector<RatVector> rows;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RatVector dp(dim), dc(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      ParamAffine d = pts[i].coords[j] - pts[0].coords[j];
      dp[j] = d.param_coeff;
      dc[j] = d.constant;
    }
    rows.push_back(dp);
    rows.push_back(dc);
  }
  LinearSubspace ns = null_space(RatMatrix::from_rows(rows, dim));
  if (ns.dim() != 1) return std::nullopt;
  RatVector n = ns.basis()[0];
  ParamAffine off;
  for (std::size_t j = 0; j < dim; ++j) off = off + pts[0].coords[j] * n[j];
  return Constraint::from_rational(n, -off.param_coeff, -off.constant, true);
}

}  // namespace

std::vector<Polyhedron> triangulate(const Polyhedron& p) {
  if (p.is_empty()) return {};
  if (is_simplex(p)) return {p};
  const std::size_t k = p.affine_dim();
  if (k > 3) throw UnsupportedInput("triangulation needs dimension at most 3");
  if (k != p.dim())
    throw UnsupportedInput("triangulation of a lower-dimensional polyhedron");
  std::vector<Polyhedron> work = {p};
  std::vector<Polyhedron> out;
  std::size_t steps = 0;
  while (!work.empty()) {
    if (++steps > 256) throw UnsupportedInput("triangulation did not converge");
    Polyhedron q = work.back();
    work.pop_back();
    if (is_simplex(q)) {
      out.push_back(q);
      continue;
    }
    auto verts = enumerate_vertices(q);
    bool split = false;
    for_each_subset(verts.size() - 1, k - 1, [&](const std::vector<std::size_t>& sub) {
      if (split) return;
      std::vector<ParamVertex> pts = {verts[0]};
      for (auto s : sub) pts.push_back(verts[s + 1]);
      auto h = hyperplane_through(pts, k);
      if (!h) return;
      bool pos = false, neg = false;
      for (const auto& v : verts) {
        int s = h->eval(v.coords).sign();
        pos = pos || s > 0;
        neg = neg || s < 0;
      }
      if (!pos || !neg) return;
      auto [a, b] = split_by_hyperplane(q, *h);
      work.push_back(b);
      work.push_back(a);
      split = true;
    });
    if (!split) throw UnsupportedInput("no separating hyperplane for triangulation");
  }
  return out;
}

}  // namespace redsimp
