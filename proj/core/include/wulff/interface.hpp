#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wulff/cutgraph.hpp"
#include "wulff/lattice.hpp"
#include "wulff/measure.hpp"
#include "wulff/model.hpp"

namespace wulff {

// Local frame of the separation rectangle. Columns run along w_perp ("right"),
// rows along w ("top"); the primal sites of D are (u, v) with 0 <= u < cols and
// 0 <= v < rows. Dual sites are (i, j) with 0 <= i <= cols and 0 <= j < rows - 1,
// sitting at u = i - 1/2, v = j + 1/2. Columns i = 0 and i = cols lie outside D:
// they stand for the left and right arcs of the outer face, so that a top-bottom
// primal crossing and a left-right dual crossing exclude each other exactly.
struct DualSite {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const DualSite&, const DualSite&) = default;
};

struct SepGeometry {
  int n = 0;
  Point2 center;      // x in Q
  double radius = 0;  // r
  double eta = 0;
  double rho = 0;
  Site up{0, 1};      // w, an axis direction
  Site right{1, 0};   // w_perp, with (w_perp, w) a direct basis

  Site origin;        // global site of local (0, 0)
  int cols = 0;
  int rows = 0;
  double center_u = 0;  // nx projected on w_perp, in local units
  double center_v = 0;  // nx projected on w, in local units

  Site global(int u, int v) const { return origin + Site{u * right.x + v * up.x, u * right.y + v * up.y}; }
  HalfPoint global_dual(DualSite d) const;
  // (y - nx) . w and (y - nx) . w_perp for local coordinates.
  double height(double v) const { return v - center_v; }
  double across(double u) const { return u - center_u; }
  // Corners a+ (top left), b+ (top right), b- (bottom right), a- (bottom left).
  Site a_plus() const { return global(0, rows - 1); }
  Site b_plus() const { return global(cols - 1, rows - 1); }
  Site b_minus() const { return global(cols - 1, 0); }
  Site a_minus() const { return global(0, 0); }
  // Sites of the top and bottom arcs of the boundary circuit, left to right.
  std::vector<Site> top_boundary() const;
  std::vector<Site> bottom_boundary() const;
  // 2 n rho - (6 delta / eta) n pi r^2.
  double interface_bound(double delta) const;
  // Bad edges allowed on one cut: (3 delta / eta) n pi r^2.
  double cut_budget(double delta) const;
};

// Throws ConfigError unless 0 < eta < rho < r, 2 eta < sqrt(r^2 - rho^2),
// B(x, r) inside Q, eta n >= 3 and w an axis direction.
SepGeometry build_sep_geometry(int n, Point2 center, double radius, Site direction, double eta, double rho);

// Open clusters of the configuration restricted to the edges of D.
class SepDomain final {
 public:
  SepDomain(const Lattice& lattice, const EdgeConfig& omega, const SepGeometry& geometry);

  const SepGeometry& geometry() const { return geometry_; }
  int cols() const { return geometry_.cols; }
  int rows() const { return geometry_.rows; }
  int site_index(int u, int v) const { return v * cols() + u; }

  // Local edges: horizontal (u, v)-(u+1, v) first, then vertical (u, v)-(u, v+1).
  int edge_count() const { return horizontal_count() + cols() * (rows() - 1); }
  int horizontal_count() const { return (cols() - 1) * rows(); }
  int horizontal_edge(int u, int v) const { return v * (cols() - 1) + u; }
  int vertical_edge(int u, int v) const { return horizontal_count() + v * cols() + u; }
  std::pair<int, int> endpoints(int local_edge) const;
  bool open(int local_edge) const { return open_[static_cast<std::size_t>(local_edge)] != 0; }

  // Primal edge crossed by the dual edge from d towards d + (1, 0) or d + (0, 1);
  // -1 for the vertical steps inside the outer columns, which cross nothing.
  int crossed_right(DualSite d) const { return vertical_edge(d.i, d.j); }
  int crossed_up(DualSite d) const;
  int dual_cols() const { return cols() + 1; }
  int dual_rows() const { return rows() - 1; }
  int dual_index(DualSite d) const { return d.j * dual_cols() + d.i; }

  int label(int u, int v) const { return label_[static_cast<std::size_t>(site_index(u, v))]; }
  int cluster_count() const { return static_cast<int>(sizes_.size()); }
  int cluster_size(int c) const { return sizes_[static_cast<std::size_t>(c)]; }
  // Clusters joining the top row to the bottom row, ordered by leftmost site.
  std::span<const int> crossing() const { return crossing_; }
  bool in_plus(int u, int v) const;   // D+ = B+(nx, nr, w) within D
  bool in_minus(int u, int v) const;  // D-

 private:
  SepGeometry geometry_;
  std::vector<std::uint8_t> open_;
  std::vector<int> label_;
  std::vector<int> sizes_;
  std::vector<int> crossing_;
};

struct Hole {
  std::vector<DualSite> sites;
  int diameter = 0;  // sup-norm, in dual steps
  bool filled = false;
};

struct FilledCluster {
  int cluster = -1;
  std::vector<Hole> holes;
  std::vector<std::uint8_t> sites;  // by local site: in fill C
  std::vector<std::uint8_t> edges;  // by local edge: in fill C
};

// Holes are the components of the dual of D minus the edges of C that the
// outer face cannot reach; those of diameter < M are added to C.
FilledCluster fill_cluster(const SepDomain& domain, int cluster, int threshold);

// partition[k] = 1 puts crossing()[k] in C-. With `fill` set, the sums use the
// filled clusters and the bound delta pi (nr)^2; otherwise the clusters and pi delta theta (nr)^2.
struct SepSums {
  long long minus_in_plus = 0;
  long long plus_in_minus = 0;
  double bound = 0.0;
  bool holds() const { return minus_in_plus <= bound && plus_in_minus <= bound; }
};
SepSums sep_sums(const SepDomain& domain, std::span<const std::uint8_t> partition, double delta, double theta,
                 std::optional<int> fill = std::nullopt);
bool sep_check(const SepDomain& domain, std::span<const std::uint8_t> partition, double delta, double theta,
               std::optional<int> fill = std::nullopt);

struct SepWitness {
  std::vector<std::uint8_t> partition;
  bool heuristic = false;  // spin colouring instead of exhaustive search
};
// Exhaustive over the 2^|C| decompositions when |C| <= 20; otherwise C- is the
// set of crossing clusters whose sites carry mostly minus spins in sigma.
std::optional<SepWitness> sep_search(const SepDomain& domain, double delta, double theta, std::optional<int> fill = std::nullopt,
                                     const SpinConfig* sigma = nullptr);

struct CutHeights {
  double h_plus = 0.0;
  double h_minus = 0.0;
  int row_plus = 0;   // dual row of the cut on the + side
  int row_minus = 0;
  std::vector<std::uint8_t> bad_plus;   // by column u: the cut edge lies in E+
  std::vector<std::uint8_t> bad_minus;  // by column u: the cut edge lies in E-
  int bad_count() const;
};
// fills[k] is the filled crossing()[k]. Throws AlgorithmError when no height of
// a band meets the averaging bound.
CutHeights select_cut_heights(const SepDomain& domain, std::span<const FilledCluster> fills,
                              std::span<const std::uint8_t> partition, double delta);

struct DualPath {
  std::vector<DualSite> sites;
  double diameter = 0.0;  // w-diameter
};

struct InterfaceStep {
  enum class Kind : std::uint8_t { tunnel, hole, open_path } kind = Kind::open_path;
  DualSite entry;
  DualSite exit;
};

struct InterfaceResult {
  std::vector<DualPath> paths;  // xi_1 .. xi_K, left to right
  std::vector<std::vector<DualSite>> tunnels;
  std::vector<InterfaceStep> steps;
  int count() const { return static_cast<int>(paths.size()); }
  double diameter_sum = 0.0;
  int tunnel_length = 0;
  int big_clusters = 0;        // open dual clusters of diameter >= M meeting either cut
  bool monotone = true;        // tunnels taken left to right along their cut
  double lemma_bound = 0.0;    // 2 n rho - (6 delta / eta) n pi r^2
  bool diameter_ok = false;
  bool count_ok = false;       // K - 1 <= big_clusters
  bool budget_ok = false;      // tunnel length within the bad-edge budget
};

// Left-right crossing of D-hat by open dual edges, with tunnels along the bad
// edges of the cuts; among such crossings one with fewest open pieces, then
// fewest edges. Throws AlgorithmError with the explored frontier when none exists.
InterfaceResult extract_interface(const SepDomain& domain, const CutHeights& cuts, int threshold, double delta,
                                  std::span<const FilledCluster> fills = {});
// Plain left-right open dual crossing, the K = 1 case.
std::optional<DualPath> dual_crossing(const SepDomain& domain);

// One line per step: "<tunnel|hole|open-path> <entry> <exit>" with dual sites in
// doubled global coordinates "x2,y2".
std::vector<std::string> trace_lines(const SepDomain& domain, const InterfaceResult& result);

struct SeparatedPiece {
  std::vector<DualSite> path;  // gamma_j from x_j to y_j
  double diameter = 0.0;
  double start = 0.0;  // x_j . w_perp, local units
  double end = 0.0;    // y_j . w_perp
};

struct SeparatedInterface {
  std::vector<SeparatedPiece> gammas;
  double ell = 0.0;
  std::vector<double> strip_starts;  // H_ell(y_j) = (y_j . w_perp, y_j . w_perp + ell)
  std::vector<double> region_widths;  // s_1 .. s_k
  double diameter_sum = 0.0;
  double eq13_bound = 0.0;
  bool eq13_holds = false;
  bool upsilon_holds = false;
};

// s_j >= ell for all j and sum s_j >= bound - 2 k ell.
bool in_upsilon(std::span<const double> widths, double ell, double bound);

// Throws ConfigError unless 0 < ell < delta n.
SeparatedInterface separate_interface(const InterfaceResult& result, double ell, const SepGeometry& geometry, double delta);

// Open dual clusters of diameter >= M meeting the dual edges of pi(h), for h in
// one of the bands eta n/3 <= |h| <= 2 eta n/3.
int count_big_dual_clusters(const SepDomain& domain, double h, int threshold);

// Whether the dual sites start and target are joined by an open dual path all of
// whose sites lie within sup-distance half_width of the segment [start, target].
// Dual sites range over the faces of the box and the ring just outside it.
bool wall_check(const Lattice& lattice, const EdgeConfig& omega, HalfPoint start, HalfPoint target, double half_width);

// Dual graph of the corridor around [start, target]: the wall event holds exactly
// when its shortest() is zero. Throws ConfigError when an endpoint is not a dual
// site of the box or its outer ring, or lies outside the corridor.
CutGraph wall_cut_graph(const Lattice& lattice, HalfPoint start, HalfPoint target, double half_width);
}  // namespace wulff
