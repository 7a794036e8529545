#include "wulff/interface.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <tuple>

#include "wulff/dsu.hpp"
#include "wulff/errors.hpp"

namespace wulff {

namespace {

// Snaps values within 1e-9 of an integer, so that n * rho = 20.000000000000004 counts as 20.
double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? r : x;
}

double dot(Site a, double px, double py) { return a.x * px + a.y * py; }

std::string format_dual(HalfPoint p) { return std::to_string(p.x2) + "," + std::to_string(p.y2); }

}  // namespace

HalfPoint SepGeometry::global_dual(DualSite d) const {
  return {2 * origin.x + (2 * d.i - 1) * right.x + (2 * d.j + 1) * up.x,
          2 * origin.y + (2 * d.i - 1) * right.y + (2 * d.j + 1) * up.y};
}

std::vector<Site> SepGeometry::top_boundary() const {
  std::vector<Site> out;
  for (int u = 0; u < cols; ++u) out.push_back(global(u, rows - 1));
  return out;
}

std::vector<Site> SepGeometry::bottom_boundary() const {
  std::vector<Site> out;
  for (int u = 0; u < cols; ++u) out.push_back(global(u, 0));
  return out;
}

double SepGeometry::interface_bound(double delta) const {
  return 2.0 * n * rho - 2.0 * cut_budget(delta);
}

double SepGeometry::cut_budget(double delta) const {
  return 3.0 * delta / eta * n * std::numbers::pi * radius * radius;
}

SepGeometry build_sep_geometry(int n, Point2 center, double radius, Site direction, double eta, double rho) {
  if (n < 2) throw ConfigError("separation geometry needs n >= 2");
  if (std::abs(direction.x) + std::abs(direction.y) != 1) throw ConfigError("direction w must be an axis direction");
  if (!(eta > 0.0 && eta < rho && rho < radius)) throw ConfigError("need 0 < eta < rho < r");
  if (!(2.0 * eta < std::sqrt(radius * radius - rho * rho))) throw ConfigError("need 2 eta < sqrt(r^2 - rho^2)");
  if (std::abs(center.u) + radius > 0.5 + 1e-12 || std::abs(center.v) + radius > 0.5 + 1e-12) {
    throw ConfigError("the ball B(x, r) must lie inside Q");
  }
  if (eta * n < 3.0) throw ConfigError("need eta n >= 3 so that both cut bands hold a row gap");
  SepGeometry g;
  g.n = n;
  g.center = center;
  g.radius = radius;
  g.eta = eta;
  g.rho = rho;
  g.up = direction;
  g.right = {direction.y, -direction.x};
  // Lattice point of nx: site s sits at (s + 1/2)/n - 1/2 in Q.
  const double px = n * center.u + (n - 1) / 2.0;
  const double py = n * center.v + (n - 1) / 2.0;
  const double pu = dot(g.right, px, py), pv = dot(g.up, px, py);
  // Squares [a, a+1] x [b, b+1] meeting R.
  const int a0 = static_cast<int>(std::ceil(snap(pu - rho * n))) - 1;
  const int a1 = static_cast<int>(std::floor(snap(pu + rho * n)));
  const int b0 = static_cast<int>(std::ceil(snap(pv - eta * n))) - 1;
  const int b1 = static_cast<int>(std::floor(snap(pv + eta * n)));
  g.cols = a1 + 2 - a0;
  g.rows = b1 + 2 - b0;
  g.origin = {a0 * g.right.x + b0 * g.up.x, a0 * g.right.y + b0 * g.up.y};
  g.center_u = pu - a0;
  g.center_v = pv - b0;
  const Box bounds{0, 0, n, n};
  for (Site s : {g.a_plus(), g.b_plus(), g.b_minus(), g.a_minus()}) {
    if (!bounds.contains(s)) throw ConfigError("the domain D leaves the box");
  }
  return g;
}

// ---- SepDomain -------------------------------------------------------------

SepDomain::SepDomain(const Lattice& lattice, const EdgeConfig& omega, const SepGeometry& geometry) : geometry_(geometry) {
  if (lattice.side() != geometry.n) throw ConfigError("geometry and lattice sizes differ");
  if (omega.open.size() != static_cast<std::size_t>(lattice.edge_count())) {
    throw ConfigError("edge configuration does not match the lattice");
  }
  open_.assign(static_cast<std::size_t>(edge_count()), 0);
  DisjointSets dsu(cols() * rows());
  for (int v = 0; v < rows(); ++v) {
    for (int u = 0; u < cols(); ++u) {
      const Site here = geometry.global(u, v);
      if (u + 1 < cols()) {
        const int e = lattice.edge_between(here, geometry.global(u + 1, v));
        if (omega.open[static_cast<std::size_t>(e)]) {
          open_[static_cast<std::size_t>(horizontal_edge(u, v))] = 1;
          dsu.unite(site_index(u, v), site_index(u + 1, v));
        }
      }
      if (v + 1 < rows()) {
        const int e = lattice.edge_between(here, geometry.global(u, v + 1));
        if (omega.open[static_cast<std::size_t>(e)]) {
          open_[static_cast<std::size_t>(vertical_edge(u, v))] = 1;
          dsu.unite(site_index(u, v), site_index(u, v + 1));
        }
      }
    }
  }
  label_.assign(static_cast<std::size_t>(cols() * rows()), -1);
  std::vector<int> id_of_root(label_.size(), -1);
  std::vector<std::uint8_t> top, bottom;
  std::vector<int> leftmost;
  for (int v = 0; v < rows(); ++v) {
    for (int u = 0; u < cols(); ++u) {
      auto& id = id_of_root[static_cast<std::size_t>(dsu.find(site_index(u, v)))];
      if (id < 0) {
        id = static_cast<int>(sizes_.size());
        sizes_.push_back(0);
        top.push_back(0);
        bottom.push_back(0);
        leftmost.push_back(u);
      }
      const auto c = static_cast<std::size_t>(id);
      label_[static_cast<std::size_t>(site_index(u, v))] = id;
      ++sizes_[c];
      leftmost[c] = std::min(leftmost[c], u);
      if (v == 0) bottom[c] = 1;
      if (v == rows() - 1) top[c] = 1;
    }
  }
  for (std::size_t c = 0; c < sizes_.size(); ++c) {
    if (top[c] && bottom[c]) crossing_.push_back(static_cast<int>(c));
  }
  std::stable_sort(crossing_.begin(), crossing_.end(), [&](int a, int b) {
    return leftmost[static_cast<std::size_t>(a)] < leftmost[static_cast<std::size_t>(b)];
  });
}

std::pair<int, int> SepDomain::endpoints(int local_edge) const {
  if (local_edge < horizontal_count()) {
    const int v = local_edge / (cols() - 1), u = local_edge % (cols() - 1);
    return {site_index(u, v), site_index(u + 1, v)};
  }
  const int k = local_edge - horizontal_count();
  const int v = k / cols(), u = k % cols();
  return {site_index(u, v), site_index(u, v + 1)};
}

int SepDomain::crossed_up(DualSite d) const {
  if (d.i <= 0 || d.i >= cols() || d.j + 1 >= dual_rows()) return -1;
  return horizontal_edge(d.i - 1, d.j + 1);
}

bool SepDomain::in_plus(int u, int v) const {
  const double a = geometry_.across(u), h = geometry_.height(v), r = geometry_.radius * geometry_.n;
  return h >= 0.0 && a * a + h * h <= r * r;
}

bool SepDomain::in_minus(int u, int v) const {
  const double a = geometry_.across(u), h = geometry_.height(v), r = geometry_.radius * geometry_.n;
  return h <= 0.0 && a * a + h * h <= r * r;
}

namespace {

// Calls f(neighbour, primal local edge) for the dual steps out of d; every step
// crosses exactly one primal edge of D.
template <class F>
void for_each_dual_step(const SepDomain& domain, DualSite d, F&& f) {
  if (d.i < domain.cols()) f(DualSite{d.i + 1, d.j}, domain.crossed_right(d));
  if (d.i > 0) f(DualSite{d.i - 1, d.j}, domain.crossed_right({d.i - 1, d.j}));
  if (const int e = domain.crossed_up(d); e >= 0) f(DualSite{d.i, d.j + 1}, e);
  if (d.j > 0) {
    if (const int e = domain.crossed_up({d.i, d.j - 1}); e >= 0) f(DualSite{d.i, d.j - 1}, e);
  }
}

// Open dual clusters: labels by dual index and sup-norm diameters.
struct DualClusters {
  std::vector<int> label;
  std::vector<int> diameter;
};

DualClusters dual_open_clusters(const SepDomain& domain) {
  const int count = domain.dual_cols() * domain.dual_rows();
  DisjointSets dsu(count);
  for (int j = 0; j < domain.dual_rows(); ++j) {
    for (int i = 0; i < domain.dual_cols(); ++i) {
      const DualSite d{i, j};
      for_each_dual_step(domain, d, [&](DualSite to, int e) {
        if (!domain.open(e)) dsu.unite(domain.dual_index(d), domain.dual_index(to));
      });
    }
  }
  DualClusters out;
  out.label.assign(static_cast<std::size_t>(count), -1);
  std::vector<int> id_of_root(static_cast<std::size_t>(count), -1);
  std::vector<int> lo_i, hi_i, lo_j, hi_j;
  for (int j = 0; j < domain.dual_rows(); ++j) {
    for (int i = 0; i < domain.dual_cols(); ++i) {
      const int idx = domain.dual_index({i, j});
      auto& id = id_of_root[static_cast<std::size_t>(dsu.find(idx))];
      if (id < 0) {
        id = static_cast<int>(lo_i.size());
        lo_i.push_back(i), hi_i.push_back(i), lo_j.push_back(j), hi_j.push_back(j);
      }
      const auto c = static_cast<std::size_t>(id);
      out.label[static_cast<std::size_t>(idx)] = id;
      lo_i[c] = std::min(lo_i[c], i), hi_i[c] = std::max(hi_i[c], i);
      lo_j[c] = std::min(lo_j[c], j), hi_j[c] = std::max(hi_j[c], j);
    }
  }
  out.diameter.resize(lo_i.size());
  for (std::size_t c = 0; c < lo_i.size(); ++c) out.diameter[c] = std::max(hi_i[c] - lo_i[c], hi_j[c] - lo_j[c]);
  return out;
}

int count_big_on_rows(const SepDomain& domain, const DualClusters& clusters, std::span<const int> rows, int threshold) {
  std::vector<std::uint8_t> seen(clusters.diameter.size(), 0);
  int big = 0;
  for (int j : rows) {
    if (j < 0 || j >= domain.dual_rows()) continue;
    for (int i = 0; i < domain.dual_cols(); ++i) {
      const auto c = static_cast<std::size_t>(clusters.label[static_cast<std::size_t>(domain.dual_index({i, j}))]);
      if (seen[c]) continue;
      seen[c] = 1;
      if (clusters.diameter[c] >= threshold) ++big;
    }
  }
  return big;
}

}  // namespace

// ---- filling -----------------------------------------------------------------

FilledCluster fill_cluster(const SepDomain& domain, int cluster, int threshold) {
  if (cluster < 0 || cluster >= domain.cluster_count()) throw ConfigError("cluster id out of range");
  if (threshold < 1) throw ConfigError("hole threshold M must be at least 1");
  const int edges = domain.edge_count();
  auto site_in_cluster = [&](int s) { return domain.label(s % domain.cols(), s / domain.cols()) == cluster; };
  std::vector<std::uint8_t> in_c(static_cast<std::size_t>(edges), 0);
  FilledCluster out;
  out.cluster = cluster;
  out.sites.assign(static_cast<std::size_t>(domain.cols() * domain.rows()), 0);
  for (int s = 0; s < domain.cols() * domain.rows(); ++s) {
    if (site_in_cluster(s)) out.sites[static_cast<std::size_t>(s)] = 1;
  }
  for (int e = 0; e < edges; ++e) {
    if (domain.open(e) && site_in_cluster(domain.endpoints(e).first)) in_c[static_cast<std::size_t>(e)] = 1;
  }
  out.edges = in_c;

  // Components of the dual of D minus E(C).
  const int dual_count = domain.dual_cols() * domain.dual_rows();
  std::vector<int> comp(static_cast<std::size_t>(dual_count), -1);
  std::vector<DualSite> stack;
  int comps = 0;
  for (int j = 0; j < domain.dual_rows(); ++j) {
    for (int i = 0; i < domain.dual_cols(); ++i) {
      if (comp[static_cast<std::size_t>(domain.dual_index({i, j}))] >= 0) continue;
      Hole hole;
      bool outer = false;
      std::vector<int> inner_edges;
      comp[static_cast<std::size_t>(domain.dual_index({i, j}))] = comps;
      stack.assign(1, DualSite{i, j});
      int lo_i = i, hi_i = i, lo_j = j, hi_j = j;
      while (!stack.empty()) {
        const DualSite d = stack.back();
        stack.pop_back();
        hole.sites.push_back(d);
        lo_i = std::min(lo_i, d.i), hi_i = std::max(hi_i, d.i);
        lo_j = std::min(lo_j, d.j), hi_j = std::max(hi_j, d.j);
        if (d.i == 0 || d.i == domain.cols()) outer = true;
        // The outer face lies beyond the bottom and top rows of primal edges.
        if (d.i > 0 && d.i < domain.cols()) {
          if (d.j == 0 && !in_c[static_cast<std::size_t>(domain.horizontal_edge(d.i - 1, 0))]) outer = true;
          if (d.j == domain.dual_rows() - 1 && !in_c[static_cast<std::size_t>(domain.horizontal_edge(d.i - 1, domain.rows() - 1))]) {
            outer = true;
          }
        }
        for_each_dual_step(domain, d, [&](DualSite to, int e) {
          if (in_c[static_cast<std::size_t>(e)]) return;
          inner_edges.push_back(e);
          auto& c = comp[static_cast<std::size_t>(domain.dual_index(to))];
          if (c < 0) {
            c = comps;
            stack.push_back(to);
          }
        });
      }
      ++comps;
      if (outer) continue;
      std::sort(inner_edges.begin(), inner_edges.end());
      inner_edges.erase(std::unique(inner_edges.begin(), inner_edges.end()), inner_edges.end());
      bool isolated = true;
      for (int e : inner_edges) {
        const auto [a, b] = domain.endpoints(e);
        for (int s : {a, b}) {
          const int lab = domain.label(s % domain.cols(), s / domain.cols());
          if (lab != cluster && std::find(domain.crossing().begin(), domain.crossing().end(), lab) != domain.crossing().end()) {
            isolated = false;
          }
        }
        // Edges of the hole next to C are closed, or they would belong to C.
        if ((site_in_cluster(a) || site_in_cluster(b)) && domain.open(e)) {
          throw AlgorithmError("hole boundary edge is open", "cluster " + std::to_string(cluster));
        }
      }
      if (!isolated) continue;
      std::sort(hole.sites.begin(), hole.sites.end());
      hole.diameter = std::max(hi_i - lo_i, hi_j - lo_j);
      hole.filled = hole.diameter < threshold;
      if (hole.filled) {
        for (int e : inner_edges) {
          out.edges[static_cast<std::size_t>(e)] = 1;
          const auto [a, b] = domain.endpoints(e);
          out.sites[static_cast<std::size_t>(a)] = 1;
          out.sites[static_cast<std::size_t>(b)] = 1;
        }
      }
      out.holes.push_back(std::move(hole));
    }
  }
  return out;
}

// ---- Sep ---------------------------------------------------------------------

namespace {

struct SideCounts {
  std::vector<long long> in_plus;   // by crossing index
  std::vector<long long> in_minus;
};

SideCounts side_counts(const SepDomain& domain, std::optional<int> fill) {
  const auto crossing = domain.crossing();
  SideCounts out;
  out.in_plus.assign(crossing.size(), 0);
  out.in_minus.assign(crossing.size(), 0);
  for (std::size_t k = 0; k < crossing.size(); ++k) {
    std::vector<std::uint8_t> sites;
    if (fill) {
      sites = fill_cluster(domain, crossing[k], *fill).sites;
    } else {
      sites.assign(static_cast<std::size_t>(domain.cols() * domain.rows()), 0);
      for (int v = 0; v < domain.rows(); ++v) {
        for (int u = 0; u < domain.cols(); ++u) {
          if (domain.label(u, v) == crossing[k]) sites[static_cast<std::size_t>(domain.site_index(u, v))] = 1;
        }
      }
    }
    for (int v = 0; v < domain.rows(); ++v) {
      for (int u = 0; u < domain.cols(); ++u) {
        if (!sites[static_cast<std::size_t>(domain.site_index(u, v))]) continue;
        if (domain.in_plus(u, v)) ++out.in_plus[k];
        if (domain.in_minus(u, v)) ++out.in_minus[k];
      }
    }
  }
  return out;
}

double sep_bound(const SepDomain& domain, double delta, double theta, bool filled) {
  const auto& g = domain.geometry();
  const double area = std::numbers::pi * std::pow(g.n * g.radius, 2);
  return filled ? delta * area : delta * theta * area;
}

}  // namespace

SepSums sep_sums(const SepDomain& domain, std::span<const std::uint8_t> partition, double delta, double theta,
                 std::optional<int> fill) {
  if (partition.size() != domain.crossing().size()) throw ConfigError("the partition must cover every crossing cluster");
  if (!(delta > 0.0) || !(theta > 0.0 && theta <= 1.0)) throw ConfigError("need delta > 0 and theta in (0, 1]");
  const auto counts = side_counts(domain, fill);
  SepSums sums;
  sums.bound = sep_bound(domain, delta, theta, fill.has_value());
  for (std::size_t k = 0; k < partition.size(); ++k) {
    if (partition[k]) {
      sums.minus_in_plus += counts.in_plus[k];
    } else {
      sums.plus_in_minus += counts.in_minus[k];
    }
  }
  return sums;
}

bool sep_check(const SepDomain& domain, std::span<const std::uint8_t> partition, double delta, double theta,
               std::optional<int> fill) {
  return sep_sums(domain, partition, delta, theta, fill).holds();
}

std::optional<SepWitness> sep_search(const SepDomain& domain, double delta, double theta, std::optional<int> fill,
                                     const SpinConfig* sigma) {
  if (!(delta > 0.0) || !(theta > 0.0 && theta <= 1.0)) throw ConfigError("need delta > 0 and theta in (0, 1]");
  const auto crossing = domain.crossing();
  const auto m = crossing.size();
  const auto counts = side_counts(domain, fill);
  const double bound = sep_bound(domain, delta, theta, fill.has_value());
  SepWitness witness;
  witness.partition.assign(m, 0);
  if (m <= 20) {
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
      long long minus_in_plus = 0, plus_in_minus = 0;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask >> k & 1U) {
          minus_in_plus += counts.in_plus[k];
        } else {
          plus_in_minus += counts.in_minus[k];
        }
      }
      if (minus_in_plus <= bound && plus_in_minus <= bound) {
        for (std::size_t k = 0; k < m; ++k) witness.partition[k] = static_cast<std::uint8_t>(mask >> k & 1U);
        return witness;
      }
    }
    return std::nullopt;
  }
  witness.heuristic = true;
  const auto& g = domain.geometry();
  for (std::size_t k = 0; k < m; ++k) {
    if (sigma != nullptr) {
      long long sum = 0;
      for (int v = 0; v < domain.rows(); ++v) {
        for (int u = 0; u < domain.cols(); ++u) {
          if (domain.label(u, v) != crossing[k]) continue;
          const Site s = g.global(u, v);
          sum += sigma->values[static_cast<std::size_t>(s.y * g.n + s.x)];
        }
      }
      witness.partition[k] = sum < 0 ? 1 : 0;
    } else {
      witness.partition[k] = counts.in_plus[k] < counts.in_minus[k] ? 1 : 0;
    }
  }
  if (!sep_check(domain, witness.partition, delta, theta, fill)) return std::nullopt;
  return witness;
}

// ---- cut heights -------------------------------------------------------------

int CutHeights::bad_count() const {
  return static_cast<int>(std::count(bad_plus.begin(), bad_plus.end(), std::uint8_t{1}) +
                          std::count(bad_minus.begin(), bad_minus.end(), std::uint8_t{1}));
}

namespace {

struct Cut {
  double h = 0.0;
  int row = 0;  // site row below the cut
};

// Lowest admissible height of the band [lo, hi] in the coordinate t(v) = v - offset,
// moved off the rows: to the midpoint between h* and the next half-integer
// ordinate, or between h* and the next row when that comes first.
std::optional<Cut> lowest_cut(int rows, double offset, double lo, double hi, const std::vector<int>& row_count,
                              const std::vector<int>& cell_count, double budget) {
  auto t = [&](int v) { return v - offset; };
  for (int v = 0; v + 1 < rows; ++v) {
    if (t(v) >= lo && t(v) <= hi && row_count[static_cast<std::size_t>(v)] <= budget) return Cut{t(v) + 0.25, v};
    const bool meets = t(v) < hi && t(v + 1) > lo;
    if (meets && cell_count[static_cast<std::size_t>(v)] <= budget) {
      if (t(v) >= lo) return Cut{t(v) + 0.25, v};
      const double half = t(v) + 0.5;
      return Cut{lo <= half ? 0.5 * (lo + half) : 0.5 * (lo + t(v + 1)), v};
    }
  }
  return std::nullopt;
}

}  // namespace

CutHeights select_cut_heights(const SepDomain& domain, std::span<const FilledCluster> fills,
                              std::span<const std::uint8_t> partition, double delta) {
  const auto crossing = domain.crossing();
  if (fills.size() != crossing.size() || partition.size() != crossing.size()) {
    throw ConfigError("fills and partition must cover every crossing cluster");
  }
  const auto& g = domain.geometry();
  const int edges = domain.edge_count();
  std::vector<std::uint8_t> e_plus(static_cast<std::size_t>(edges), 0), e_minus = e_plus;
  for (std::size_t k = 0; k < fills.size(); ++k) {
    for (int e = 0; e < edges; ++e) {
      if (!fills[k].edges[static_cast<std::size_t>(e)]) continue;
      const auto [a, b] = domain.endpoints(e);
      auto uv = [&](int s) { return std::pair{s % domain.cols(), s / domain.cols()}; };
      const auto [ua, va] = uv(a);
      const auto [ub, vb] = uv(b);
      if (partition[k] && domain.in_plus(ua, va) && domain.in_plus(ub, vb)) e_plus[static_cast<std::size_t>(e)] = 1;
      if (!partition[k] && domain.in_minus(ua, va) && domain.in_minus(ub, vb)) e_minus[static_cast<std::size_t>(e)] = 1;
    }
  }
  const double budget = g.cut_budget(delta);
  const double lo = g.eta * g.n / 3.0, hi = 2.0 * g.eta * g.n / 3.0;
  const int rows = domain.rows(), cols = domain.cols();
  // Edge counts met by the line at a row and strictly between rows v and v+1.
  auto counts = [&](const std::vector<std::uint8_t>& set, std::vector<int>& row_count, std::vector<int>& cell_count) {
    row_count.assign(static_cast<std::size_t>(rows), 0);
    cell_count.assign(static_cast<std::size_t>(rows - 1), 0);
    for (int v = 0; v < rows; ++v) {
      for (int u = 0; u < cols; ++u) {
        if (u + 1 < cols) row_count[static_cast<std::size_t>(v)] += set[static_cast<std::size_t>(domain.horizontal_edge(u, v))];
        if (v + 1 < rows && set[static_cast<std::size_t>(domain.vertical_edge(u, v))]) {
          ++cell_count[static_cast<std::size_t>(v)];
          ++row_count[static_cast<std::size_t>(v)];
          ++row_count[static_cast<std::size_t>(v) + 1];
        }
      }
    }
  };
  std::vector<int> row_count, cell_count;
  CutHeights out;
  counts(e_plus, row_count, cell_count);
  const auto plus = lowest_cut(rows, g.center_v, lo, hi, row_count, cell_count, budget);
  if (!plus) throw AlgorithmError("no admissible cut height on the + side", "budget " + std::to_string(budget));
  out.h_plus = plus->h;
  out.row_plus = plus->row;
  // The - side is the mirror image: reverse the rows and negate heights.
  counts(e_minus, row_count, cell_count);
  std::reverse(row_count.begin(), row_count.end());
  std::reverse(cell_count.begin(), cell_count.end());
  const auto minus = lowest_cut(rows, (rows - 1) - g.center_v, lo, hi, row_count, cell_count, budget);
  if (!minus) throw AlgorithmError("no admissible cut height on the - side", "budget " + std::to_string(budget));
  out.h_minus = -minus->h;
  out.row_minus = rows - 2 - minus->row;
  out.bad_plus.assign(static_cast<std::size_t>(cols), 0);
  out.bad_minus.assign(static_cast<std::size_t>(cols), 0);
  for (int u = 0; u < cols; ++u) {
    out.bad_plus[static_cast<std::size_t>(u)] = e_plus[static_cast<std::size_t>(domain.vertical_edge(u, out.row_plus))];
    out.bad_minus[static_cast<std::size_t>(u)] = e_minus[static_cast<std::size_t>(domain.vertical_edge(u, out.row_minus))];
  }
  if (out.bad_count() > 2.0 * budget) {
    throw AlgorithmError("bad edges exceed the averaging budget", std::to_string(out.bad_count()));
  }
  return out;
}

// ---- interface extraction ----------------------------------------------------------

std::optional<DualPath> dual_crossing(const SepDomain& domain) {
  const int count = domain.dual_cols() * domain.dual_rows();
  std::vector<int> parent(static_cast<std::size_t>(count), -2);
  std::deque<DualSite> queue;
  for (int j = 0; j < domain.dual_rows(); ++j) {
    parent[static_cast<std::size_t>(domain.dual_index({0, j}))] = -1;
    queue.push_back({0, j});
  }
  while (!queue.empty()) {
    const DualSite d = queue.front();
    queue.pop_front();
    if (d.i == domain.cols()) {
      DualPath path;
      for (int idx = domain.dual_index(d); idx >= 0; idx = parent[static_cast<std::size_t>(idx)]) {
        path.sites.push_back({idx % domain.dual_cols(), idx / domain.dual_cols()});
      }
      std::reverse(path.sites.begin(), path.sites.end());
      path.diameter = domain.cols();
      return path;
    }
    for_each_dual_step(domain, d, [&](DualSite to, int e) {
      auto& p = parent[static_cast<std::size_t>(domain.dual_index(to))];
      if (domain.open(e) || p != -2) return;
      p = domain.dual_index(d);
      queue.push_back(to);
    });
  }
  return std::nullopt;
}

namespace {

double w_diameter(std::span<const DualSite> sites) {
  const auto [lo, hi] = std::minmax_element(sites.begin(), sites.end(), [](DualSite a, DualSite b) { return a.i < b.i; });
  return hi->i - lo->i;
}

enum class Move : std::uint8_t { none, open, tunnel };

// Dijkstra over (dual site, mode) with cost (open pieces, edges); mode 1 means
// the walk has not started a piece yet or has just left a tunnel.
std::optional<std::vector<std::pair<DualSite, Move>>> cheapest_crossing(const SepDomain& domain, const CutHeights& cuts,
                                                                        bool directed) {
  const int count = domain.dual_cols() * domain.dual_rows();
  constexpr long long piece = 1LL << 32;
  const long long unreached = std::numeric_limits<long long>::max();
  std::vector<long long> cost(static_cast<std::size_t>(2 * count), unreached);
  std::vector<int> parent(static_cast<std::size_t>(2 * count), -1);
  std::vector<Move> via(static_cast<std::size_t>(2 * count), Move::none);
  using Item = std::pair<long long, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int j = 0; j < domain.dual_rows(); ++j) {
    const int state = 2 * domain.dual_index({0, j}) + 1;
    cost[static_cast<std::size_t>(state)] = 0;
    heap.emplace(0, state);
  }
  auto bad = [&](DualSite from, DualSite to) {
    if (from.j != to.j) return false;
    const int column = std::min(from.i, to.i);
    if (directed && to.i < from.i) return false;
    if (from.j == cuts.row_plus && cuts.bad_plus[static_cast<std::size_t>(column)]) return true;
    if (from.j == cuts.row_minus && cuts.bad_minus[static_cast<std::size_t>(column)]) return true;
    return false;
  };
  int goal = -1;
  while (!heap.empty()) {
    const auto [c, state] = heap.top();
    heap.pop();
    if (c != cost[static_cast<std::size_t>(state)]) continue;
    const int idx = state / 2, mode = state % 2;
    const DualSite d{idx % domain.dual_cols(), idx / domain.dual_cols()};
    if (d.i == domain.cols()) {
      goal = state;
      break;
    }
    auto relax = [&](int next, long long next_cost, Move move) {
      if (next_cost < cost[static_cast<std::size_t>(next)]) {
        cost[static_cast<std::size_t>(next)] = next_cost;
        parent[static_cast<std::size_t>(next)] = state;
        via[static_cast<std::size_t>(next)] = move;
        heap.emplace(next_cost, next);
      }
    };
    for_each_dual_step(domain, d, [&](DualSite to, int e) {
      const int to_idx = domain.dual_index(to);
      if (!domain.open(e)) relax(2 * to_idx, c + (mode == 1 ? piece : 0) + 1, Move::open);
      if (bad(d, to)) relax(2 * to_idx + 1, c + 1, Move::tunnel);
    });
  }
  if (goal < 0) return std::nullopt;
  std::vector<std::pair<DualSite, Move>> walk;
  for (int s = goal; s >= 0; s = parent[static_cast<std::size_t>(s)]) {
    const int idx = s / 2;
    walk.emplace_back(DualSite{idx % domain.dual_cols(), idx / domain.dual_cols()}, via[static_cast<std::size_t>(s)]);
  }
  std::reverse(walk.begin(), walk.end());
  return walk;
}

}  // namespace

InterfaceResult extract_interface(const SepDomain& domain, const CutHeights& cuts, int threshold, double delta,
                                  std::span<const FilledCluster> fills) {
  if (threshold < 1) throw ConfigError("threshold M must be at least 1");
  if (cuts.bad_plus.size() != static_cast<std::size_t>(domain.cols()) ||
      cuts.bad_minus.size() != static_cast<std::size_t>(domain.cols())) {
    throw ConfigError("cut heights do not match the domain");
  }
  const auto& g = domain.geometry();
  InterfaceResult out;
  out.lemma_bound = g.interface_bound(delta);
  const auto clusters = dual_open_clusters(domain);
  const int rows[] = {cuts.row_plus, cuts.row_minus};
  out.big_clusters = count_big_on_rows(domain, clusters, rows, threshold);

  std::vector<std::uint8_t> in_hole(static_cast<std::size_t>(domain.dual_cols() * domain.dual_rows()), 0);
  for (const auto& f : fills) {
    for (const auto& h : f.holes) {
      if (h.filled) continue;
      for (DualSite d : h.sites) in_hole[static_cast<std::size_t>(domain.dual_index(d))] = 1;
    }
  }

  std::vector<std::pair<DualSite, Move>> walk;
  if (domain.crossing().empty()) {
    // No top-bottom crossing: duality gives an open dual crossing.
    const auto path = dual_crossing(domain);
    if (!path) throw AlgorithmError("no dual crossing although no primal crossing exists", "duality check");
    for (std::size_t k = 0; k < path->sites.size(); ++k) walk.emplace_back(path->sites[k], k == 0 ? Move::none : Move::open);
  } else {
    auto found = cheapest_crossing(domain, cuts, true);
    if (!found) {
      out.monotone = false;
      found = cheapest_crossing(domain, cuts, false);
    }
    if (!found) {
      std::ostringstream trace;
      trace << "rows " << cuts.row_plus << "/" << cuts.row_minus << " bad " << cuts.bad_count();
      throw AlgorithmError("interface extraction is stuck: no successor reaches the right boundary", trace.str());
    }
    walk = std::move(*found);
  }

  // Split the walk into maximal runs of one kind.
  std::size_t k = 1;
  while (k < walk.size()) {
    const Move kind = walk[k].second;
    std::size_t end = k;
    while (end + 1 < walk.size() && walk[end + 1].second == kind) ++end;
    std::vector<DualSite> run;
    for (std::size_t m = k - 1; m <= end; ++m) run.push_back(walk[m].first);
    InterfaceStep step;
    step.entry = run.front();
    step.exit = run.back();
    if (kind == Move::tunnel) {
      step.kind = InterfaceStep::Kind::tunnel;
      out.tunnel_length += static_cast<int>(run.size()) - 1;
      for (std::size_t m = 1; m < run.size(); ++m) {
        if (run[m].i < run[m - 1].i) out.monotone = false;
      }
      out.tunnels.push_back(std::move(run));
    } else {
      const bool hole = std::all_of(run.begin(), run.end(), [&](DualSite d) {
        return in_hole[static_cast<std::size_t>(domain.dual_index(d))] != 0;
      });
      step.kind = hole ? InterfaceStep::Kind::hole : InterfaceStep::Kind::open_path;
      DualPath path;
      path.diameter = w_diameter(run);
      path.sites = std::move(run);
      out.diameter_sum += path.diameter;
      out.paths.push_back(std::move(path));
    }
    out.steps.push_back(step);
    k = end + 1;
  }
  // Tunnels along one cut never overlap.
  for (std::size_t a = 0; a < out.tunnels.size(); ++a) {
    for (std::size_t b = a + 1; b < out.tunnels.size(); ++b) {
      const auto& ta = out.tunnels[a];
      const auto& tb = out.tunnels[b];
      if (ta.front().j != tb.front().j) continue;
      const auto [alo, ahi] = std::minmax(ta.front().i, ta.back().i);
      const auto [blo, bhi] = std::minmax(tb.front().i, tb.back().i);
      if (alo < bhi && blo < ahi) out.monotone = false;
    }
  }
  out.diameter_ok = out.diameter_sum >= out.lemma_bound - 1e-9;
  out.count_ok = out.count() - 1 <= out.big_clusters;
  out.budget_ok = out.tunnel_length <= 2.0 * g.cut_budget(delta) + 1e-9;
  return out;
}

std::vector<std::string> trace_lines(const SepDomain& domain, const InterfaceResult& result) {
  const auto& g = domain.geometry();
  std::vector<std::string> lines;
  for (const auto& step : result.steps) {
    const char* kind = step.kind == InterfaceStep::Kind::tunnel ? "tunnel"
                       : step.kind == InterfaceStep::Kind::hole ? "hole"
                                                                : "open-path";
    lines.push_back(std::string(kind) + " " + format_dual(g.global_dual(step.entry)) + " " +
                    format_dual(g.global_dual(step.exit)));
  }
  return lines;
}

// ---- separation ----------------------------------------------------------------------

bool in_upsilon(std::span<const double> widths, double ell, double bound) {
  double sum = 0.0;
  for (double s : widths) {
    if (s < ell) return false;
    sum += s;
  }
  return sum >= bound - 2.0 * static_cast<double>(widths.size()) * ell - 1e-9;
}

SeparatedInterface separate_interface(const InterfaceResult& result, double ell, const SepGeometry& geometry, double delta) {
  if (!(ell > 0.0 && ell < delta * geometry.n)) throw ConfigError("separation width must satisfy 0 < ell < delta n");
  struct Candidate {
    double start;
    double diameter;
    HalfPoint first;
    std::size_t path, index;
    int direction;
    std::size_t end;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < result.paths.size(); ++p) {
    const auto& sites = result.paths[p].sites;
    for (std::size_t s = 0; s < sites.size(); ++s) {
      const int u0 = sites[s].i;
      for (int dir : {1, -1}) {
        int best = u0;
        std::size_t best_at = s;
        for (auto m = static_cast<std::ptrdiff_t>(s) + dir; m >= 0 && m < static_cast<std::ptrdiff_t>(sites.size()); m += dir) {
          const int u = sites[static_cast<std::size_t>(m)].i;
          if (u < u0) break;
          if (u > best) best = u, best_at = static_cast<std::size_t>(m);
        }
        if (best - u0 >= ell) {
          candidates.push_back({u0 - 0.5, static_cast<double>(best - u0), geometry.global_dual(sites[s]), p, s, dir, best_at});
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.start, b.diameter, a.first, a.path, a.index, b.direction) <
           std::tie(b.start, a.diameter, b.first, b.path, b.index, a.direction);
  });
  SeparatedInterface out;
  out.ell = ell;
  double threshold = -std::numeric_limits<double>::infinity();
  double region_start = -0.5;
  for (const auto& c : candidates) {
    if (c.start < threshold) continue;
    SeparatedPiece piece;
    const auto& sites = result.paths[c.path].sites;
    for (auto m = static_cast<std::ptrdiff_t>(c.index);; m += c.direction) {
      piece.path.push_back(sites[static_cast<std::size_t>(m)]);
      if (static_cast<std::size_t>(m) == c.end) break;
    }
    piece.diameter = c.diameter;
    piece.start = c.start;
    piece.end = c.start + c.diameter;
    out.region_widths.push_back(piece.end - region_start);
    out.strip_starts.push_back(piece.end);
    out.diameter_sum += piece.diameter;
    threshold = piece.end + ell;
    region_start = threshold;
    out.gammas.push_back(std::move(piece));
  }
  const double bound = geometry.interface_bound(delta);
  out.eq13_bound = bound - 2.0 * result.count() * ell;
  out.eq13_holds = !out.gammas.empty() && out.gammas.size() <= result.paths.size() && out.diameter_sum >= out.eq13_bound - 1e-9;
  out.upsilon_holds = !out.gammas.empty() && in_upsilon(out.region_widths, ell, bound);
  return out;
}

// ---- big dual clusters and the wall ----------------------------------------------------------

int count_big_dual_clusters(const SepDomain& domain, double h, int threshold) {
  const auto& g = domain.geometry();
  const double lo = g.eta * g.n / 3.0, hi = 2.0 * g.eta * g.n / 3.0;
  if (!(std::abs(h) >= lo - 1e-9 && std::abs(h) <= hi + 1e-9)) {
    throw ConfigError("h must lie in one of the bands eta n/3 <= |h| <= 2 eta n/3");
  }
  if (threshold < 1) throw ConfigError("threshold M must be at least 1");
  const double t = snap(h + g.center_v);
  std::vector<int> rows;
  if (t == std::floor(t)) {
    rows = {static_cast<int>(t) - 1, static_cast<int>(t)};
  } else {
    rows = {static_cast<int>(std::floor(t))};
  }
  return count_big_on_rows(domain, dual_open_clusters(domain), rows, threshold);
}

namespace {

// Sup-norm distance from p to the segment [a, b]; the objective is convex in the parameter.
double linf_to_segment(double px, double py, double ax, double ay, double bx, double by) {
  auto at = [&](double s) { return std::max(std::abs(px - (ax + s * (bx - ax))), std::abs(py - (ay + s * (by - ay)))); };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    (at(m1) < at(m2) ? hi : lo) = at(m1) < at(m2) ? m2 : m1;
  }
  return at(0.5 * (lo + hi));
}

}  // namespace

bool wall_check(const Lattice& lattice, const EdgeConfig& omega, HalfPoint start, HalfPoint target, double half_width) {
  const int n = lattice.side();
  if (omega.open.size() != static_cast<std::size_t>(lattice.edge_count())) {
    throw ConfigError("edge configuration does not match the lattice");
  }
  // Dual site (x + 1/2, y + 1/2) for x, y in [-1, n - 1], indexed by (x + 1, y + 1).
  const int side = n + 1;
  auto valid = [&](HalfPoint p) {
    return p.x2 % 2 != 0 && p.y2 % 2 != 0 && p.x2 >= -1 && p.x2 <= 2 * n - 1 && p.y2 >= -1 && p.y2 <= 2 * n - 1;
  };
  if (!valid(start) || !valid(target)) throw ConfigError("wall endpoints must be dual sites of the box or its outer ring");
  if (start == target) return true;
  auto index = [&](int x, int y) { return (y + 1) * side + (x + 1); };
  auto inside = [&](int x, int y) {
    return linf_to_segment(x + 0.5, y + 0.5, start.x(), start.y(), target.x(), target.y()) <= half_width + 1e-12;
  };
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(side * side), 0);
  std::vector<std::pair<int, int>> stack;
  const int sx = (start.x2 - 1) / 2, sy = (start.y2 - 1) / 2;
  const int tx = (target.x2 - 1) / 2, ty = (target.y2 - 1) / 2;
  seen[static_cast<std::size_t>(index(sx, sy))] = 1;
  stack.emplace_back(sx, sy);
  auto try_step = [&](int x, int y, int primal) {
    if (primal < 0 || omega.open[static_cast<std::size_t>(primal)]) return;
    if (x < -1 || y < -1 || x > n - 1 || y > n - 1) return;
    auto& s = seen[static_cast<std::size_t>(index(x, y))];
    if (s || !inside(x, y)) return;
    s = 1;
    stack.emplace_back(x, y);
  };
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if (x == tx && y == ty) return true;
    // Step right crosses the vertical primal edge (x+1, y)-(x+1, y+1); up crosses (x, y+1)-(x+1, y+1).
    try_step(x + 1, y, lattice.edge_between({x + 1, y}, {x + 1, y + 1}));
    try_step(x - 1, y, lattice.edge_between({x, y}, {x, y + 1}));
    try_step(x, y + 1, lattice.edge_between({x, y + 1}, {x + 1, y + 1}));
    try_step(x, y - 1, lattice.edge_between({x, y}, {x + 1, y}));
  }
  return false;
}

CutGraph wall_cut_graph(const Lattice& lattice, HalfPoint start, HalfPoint target, double half_width) {
  const int n = lattice.side();
  auto valid = [&](HalfPoint p) {
    return p.x2 % 2 != 0 && p.y2 % 2 != 0 && p.x2 >= -1 && p.x2 <= 2 * n - 1 && p.y2 >= -1 && p.y2 <= 2 * n - 1;
  };
  if (!valid(start) || !valid(target)) throw ConfigError("wall endpoints must be dual sites of the box or its outer ring");
  if (!(half_width >= 0.0)) throw ConfigError("corridor half-width must be non-negative");
  const int side = n + 1;
  auto index = [&](int x, int y) { return (y + 1) * side + (x + 1); };
  CutGraph graph;
  std::vector<int> node(static_cast<std::size_t>(side * side), -1);
  for (int y = -1; y <= n - 1; ++y) {
    for (int x = -1; x <= n - 1; ++x) {
      if (linf_to_segment(x + 0.5, y + 0.5, start.x(), start.y(), target.x(), target.y()) > half_width + 1e-12) continue;
      const HalfPoint here{2 * x + 1, 2 * y + 1};
      node[static_cast<std::size_t>(index(x, y))] = graph.add_node(here == start, here == target);
    }
  }
  auto node_of = [&](HalfPoint p) { return node[static_cast<std::size_t>(index((p.x2 - 1) / 2, (p.y2 - 1) / 2))]; };
  if (node_of(start) < 0 || node_of(target) < 0) throw ConfigError("wall endpoints must lie in the corridor");
  for (int y = -1; y <= n - 1; ++y) {
    for (int x = -1; x <= n - 1; ++x) {
      const int here = node[static_cast<std::size_t>(index(x, y))];
      if (here < 0) continue;
      // Right neighbour across the vertical edge (x+1, y)-(x+1, y+1), upper across (x, y+1)-(x+1, y+1).
      if (x + 1 <= n - 1) {
        const int right = node[static_cast<std::size_t>(index(x + 1, y))];
        const int edge = lattice.edge_between({x + 1, y}, {x + 1, y + 1});
        if (right >= 0 && edge >= 0) graph.add_step(here, right, edge);
      }
      if (y + 1 <= n - 1) {
        const int upper = node[static_cast<std::size_t>(index(x, y + 1))];
        const int edge = lattice.edge_between({x, y + 1}, {x + 1, y + 1});
        if (upper >= 0 && edge >= 0) graph.add_step(here, upper, edge);
      }
    }
  }
  return graph;
}

}  // namespace wulff
