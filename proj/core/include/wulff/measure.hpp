#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wulff/model.hpp"

namespace wulff {

// Coordinates on Q = [-1/2, 1/2]^2.
struct Point2 {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Atom {
  Point2 at;
  double weight = 0.0;
};

// Signed measure on Q: cell-averaged densities on a g x g grid (cell (i, j) covers
// u in [-1/2 + i/g, -1/2 + (i+1)/g], row j likewise in v) plus point atoms.
class SignedMeasure final {
 public:
  SignedMeasure() = default;
  explicit SignedMeasure(int grid) : grid_(grid), density_(static_cast<std::size_t>(grid) * grid, 0.0) {}

  int grid() const { return grid_; }
  double cell_side() const { return grid_ > 0 ? 1.0 / grid_ : 0.0; }
  double& density(int i, int j) { return density_[static_cast<std::size_t>(j) * grid_ + i]; }
  double density(int i, int j) const { return density_[static_cast<std::size_t>(j) * grid_ + i]; }
  std::span<const double> densities() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  void add_atom(Point2 at, double weight) { atoms_.push_back({at, weight}); }

  double total() const;

 private:
  int grid_ = 0;
  std::vector<double> density_;
  std::vector<Atom> atoms_;
};

// Continuum position of a site of the n-box: the centre of its cell of side 1/n.
Point2 site_point(int n, Site s);

// sum_x sigma(x) delta_{x/n} / (m* n^2). grid = 0 keeps the atoms; otherwise each
// site spreads its mass uniformly over its cell and is binned onto the grid.
SignedMeasure sigma_measure(const SpinConfig& sigma, double mstar, int grid = 0);

Point2 barycenter(const SignedMeasure& mu);

enum class AreaConvention : std::uint8_t { full, half };
// Centre of the target ball from the barycenter b: -b/2, -b/delta, or -b/(2a) for
// ball area a (the centre that reproduces b for a +-1 density).
enum class CenterShift : std::uint8_t { half_barycenter, barycenter_over_delta, area_consistent };

double droplet_area(double delta, AreaConvention convention);
double droplet_radius(double delta, AreaConvention convention);
Point2 droplet_center(double delta, Point2 barycenter, CenterShift shift, AreaConvention convention);

// Density -1 on the ball of the chosen area around the shifted centre, +1 elsewhere.
// Throws ConfigError when the ball leaves Q.
SignedMeasure target_w(double delta, Point2 barycenter, AreaConvention convention, int grid,
                       CenterShift shift = CenterShift::half_barycenter);

// cos(pi k1 u) cos(pi k2 v) for 0 <= k1, k2 <= 4, then u and v.
struct TestFunction {
  enum class Kind : std::uint8_t { cosine, coord_u, coord_v };
  Kind kind = Kind::cosine;
  int k1 = 0;
  int k2 = 0;

  double operator()(Point2 x) const;
  // Integral over [u0, u1] x [v0, v1].
  double integral(double u0, double u1, double v0, double v1) const;
};

const std::array<TestFunction, 27>& dictionary();
double integrate(const SignedMeasure& mu, const TestFunction& f);
double weak_distance(const SignedMeasure& mu, const SignedMeasure& nu);

// Subset of a g x g grid of cells covering Q.
class DiscreteRegion final {
 public:
  DiscreteRegion() = default;
  explicit DiscreteRegion(int grid) : grid_(grid), cells_(static_cast<std::size_t>(grid) * grid, 0) {}

  int grid() const { return grid_; }
  bool contains(int i, int j) const {
    return i >= 0 && j >= 0 && i < grid_ && j < grid_ && cells_[static_cast<std::size_t>(j) * grid_ + i] != 0;
  }
  void set(int i, int j, bool inside) { cells_[static_cast<std::size_t>(j) * grid_ + i] = inside ? 1 : 0; }
  int cell_count() const;
  double area() const;
  // Cell edges separating the region from its complement; the outside of Q counts
  // as complement.
  int boundary_edges() const;
  bool empty() const { return cell_count() == 0; }

 private:
  int grid_ = 0;
  std::vector<std::uint8_t> cells_;
};

enum class PerimeterMethod : std::uint8_t { raw, polygon };

// raw: boundary edges times the cell side. polygon: length of a marching-squares
// contour of the 3x3-averaged cell indicator (see contour_segments); corners are
// rounded by about one cell, isolated cells vanish.
double perimeter(const DiscreteRegion& region, PerimeterMethod method = PerimeterMethod::raw);

struct Segment {
  Point2 a;
  Point2 b;
};
std::vector<Segment> contour_segments(const DiscreteRegion& region);

// tau_c times the polygonal perimeter of the region.
double rate_function(const DiscreteRegion& region, double tau_c);
// Measures whose cells are all +-1 within 1e-6 are scored through their -1 set;
// anything else returns +infinity. Atoms make a measure inadmissible.
double rate_function(const SignedMeasure& mu, double tau_c);

// Disc of the given radius and centre rasterised on a grid by cell centres.
DiscreteRegion disc_region(int grid, Point2 center, double radius);

}  // namespace wulff
