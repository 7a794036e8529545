#include "wulff/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wulff/errors.hpp"

namespace wulff {

double SignedMeasure::total() const {
  double sum = 0.0;
  for (double d : density_) sum += d;
  sum *= cell_side() * cell_side();
  for (const auto& atom : atoms_) sum += atom.weight;
  return sum;
}

Point2 site_point(int n, Site s) { return {(s.x + 0.5) / n - 0.5, (s.y + 0.5) / n - 0.5}; }

SignedMeasure sigma_measure(const SpinConfig& sigma, double mstar, int grid) {
  if (!(mstar > 0.0)) throw ConfigError("m* must be positive");
  if (grid < 0) throw ConfigError("grid size must be nonnegative");
  const int n = sigma.side;
  const double scale = 1.0 / (mstar * n * n);
  if (grid == 0) {
    SignedMeasure mu;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        mu.add_atom(site_point(n, {x, y}), sigma.values[static_cast<std::size_t>(y) * n + x] * scale);
      }
    }
    return mu;
  }
  SignedMeasure mu(grid);
  // Overlap of site interval [x/n, (x+1)/n] with each grid interval, in units of 1/g.
  std::vector<std::vector<std::pair<int, double>>> overlap(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const double lo = static_cast<double>(x) * grid / n;
    const double hi = static_cast<double>(x + 1) * grid / n;
    for (int c = static_cast<int>(std::floor(lo)); c < grid && c < hi; ++c) {
      const double len = std::min(hi, c + 1.0) - std::max(lo, static_cast<double>(c));
      if (len > 0.0) overlap[static_cast<std::size_t>(x)].push_back({c, len});
    }
  }
  // A site of mass m has density m n^2 over its cell; a grid cell of area 1/g^2
  // receiving overlap a/g^2 of it gains density m n^2 a.
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double density = sigma.values[static_cast<std::size_t>(y) * n + x] * scale * n * n;
      for (const auto& [cx, lx] : overlap[static_cast<std::size_t>(x)]) {
        for (const auto& [cy, ly] : overlap[static_cast<std::size_t>(y)]) mu.density(cx, cy) += density * lx * ly;
      }
    }
  }
  return mu;
}

Point2 barycenter(const SignedMeasure& mu) {
  return {integrate(mu, {TestFunction::Kind::coord_u, 0, 0}), integrate(mu, {TestFunction::Kind::coord_v, 0, 0})};
}

double droplet_area(double delta, AreaConvention convention) {
  return convention == AreaConvention::full ? delta : delta / 2.0;
}

double droplet_radius(double delta, AreaConvention convention) {
  return std::sqrt(droplet_area(delta, convention) / std::numbers::pi);
}

Point2 droplet_center(double delta, Point2 b, CenterShift shift, AreaConvention convention) {
  double factor = 0.5;
  if (shift == CenterShift::barycenter_over_delta) factor = 1.0 / delta;
  if (shift == CenterShift::area_consistent) factor = 0.5 / droplet_area(delta, convention);
  return {-b.u * factor, -b.v * factor};
}

SignedMeasure target_w(double delta, Point2 b, AreaConvention convention, int grid, CenterShift shift) {
  if (!(delta > 0.0 && delta < std::numbers::pi)) throw ConfigError("delta must lie in (0, pi)");
  if (grid < 1) throw ConfigError("grid size must be positive");
  const double radius = droplet_radius(delta, convention);
  const Point2 c = droplet_center(delta, b, shift, convention);
  if (c.u - radius < -0.5 || c.u + radius > 0.5 || c.v - radius < -0.5 || c.v + radius > 0.5) {
    throw ConfigError("target droplet does not fit in the unit square");
  }
  SignedMeasure w(grid);
  const double h = 1.0 / grid;
  constexpr int kSub = 8;
  const double r2 = radius * radius;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const double u0 = -0.5 + i * h;
      const double v0 = -0.5 + j * h;
      // Nearest and farthest cell points from the centre decide the easy cases.
      const double du_near = std::max({c.u - (u0 + h), 0.0, u0 - c.u});
      const double dv_near = std::max({c.v - (v0 + h), 0.0, v0 - c.v});
      const double du_far = std::max(std::abs(u0 - c.u), std::abs(u0 + h - c.u));
      const double dv_far = std::max(std::abs(v0 - c.v), std::abs(v0 + h - c.v));
      double inside;
      if (du_near * du_near + dv_near * dv_near >= r2) {
        inside = 0.0;
      } else if (du_far * du_far + dv_far * dv_far <= r2) {
        inside = 1.0;
      } else {
        int count = 0;
        for (int a = 0; a < kSub; ++a) {
          for (int bb = 0; bb < kSub; ++bb) {
            const double du = u0 + (a + 0.5) * h / kSub - c.u;
            const double dv = v0 + (bb + 0.5) * h / kSub - c.v;
            count += du * du + dv * dv < r2;
          }
        }
        inside = static_cast<double>(count) / (kSub * kSub);
      }
      w.density(i, j) = 1.0 - 2.0 * inside;
    }
  }
  return w;
}

namespace {

double cos_integral(int k, double a, double b) {
  if (k == 0) return b - a;
  const double w = std::numbers::pi * k;
  return (std::sin(w * b) - std::sin(w * a)) / w;
}

}  // namespace

double TestFunction::operator()(Point2 x) const {
  switch (kind) {
    case Kind::coord_u:
      return x.u;
    case Kind::coord_v:
      return x.v;
    case Kind::cosine:
      break;
  }
  return std::cos(std::numbers::pi * k1 * x.u) * std::cos(std::numbers::pi * k2 * x.v);
}

double TestFunction::integral(double u0, double u1, double v0, double v1) const {
  switch (kind) {
    case Kind::coord_u:
      return 0.5 * (u1 * u1 - u0 * u0) * (v1 - v0);
    case Kind::coord_v:
      return 0.5 * (v1 * v1 - v0 * v0) * (u1 - u0);
    case Kind::cosine:
      break;
  }
  return cos_integral(k1, u0, u1) * cos_integral(k2, v0, v1);
}

const std::array<TestFunction, 27>& dictionary() {
  static const std::array<TestFunction, 27> functions = [] {
    std::array<TestFunction, 27> out{};
    int idx = 0;
    for (int k1 = 0; k1 <= 4; ++k1) {
      for (int k2 = 0; k2 <= 4; ++k2) out[static_cast<std::size_t>(idx++)] = {TestFunction::Kind::cosine, k1, k2};
    }
    out[25] = {TestFunction::Kind::coord_u, 0, 0};
    out[26] = {TestFunction::Kind::coord_v, 0, 0};
    return out;
  }();
  return functions;
}

double integrate(const SignedMeasure& mu, const TestFunction& f) {
  double sum = 0.0;
  const int g = mu.grid();
  if (g > 0) {
    const double h = 1.0 / g;
    // Cell integrals factor for cosines; precompute the one-dimensional pieces.
    std::vector<double> iu(static_cast<std::size_t>(g));
    std::vector<double> iv(static_cast<std::size_t>(g));
    const bool separable = f.kind == TestFunction::Kind::cosine;
    if (separable) {
      for (int i = 0; i < g; ++i) {
        iu[static_cast<std::size_t>(i)] = cos_integral(f.k1, -0.5 + i * h, -0.5 + (i + 1) * h);
        iv[static_cast<std::size_t>(i)] = cos_integral(f.k2, -0.5 + i * h, -0.5 + (i + 1) * h);
      }
    }
    for (int j = 0; j < g; ++j) {
      for (int i = 0; i < g; ++i) {
        const double d = mu.density(i, j);
        if (d == 0.0) continue;
        const double cell = separable ? iu[static_cast<std::size_t>(i)] * iv[static_cast<std::size_t>(j)]
                                      : f.integral(-0.5 + i * h, -0.5 + (i + 1) * h, -0.5 + j * h, -0.5 + (j + 1) * h);
        sum += d * cell;
      }
    }
  }
  for (const auto& atom : mu.atoms()) sum += atom.weight * f(atom.at);
  return sum;
}

double weak_distance(const SignedMeasure& mu, const SignedMeasure& nu) {
  double worst = 0.0;
  for (const auto& f : dictionary()) worst = std::max(worst, std::abs(integrate(mu, f) - integrate(nu, f)));
  return worst;
}

int DiscreteRegion::cell_count() const {
  int count = 0;
  for (auto c : cells_) count += c;
  return count;
}

double DiscreteRegion::area() const { return static_cast<double>(cell_count()) / (static_cast<double>(grid_) * grid_); }

int DiscreteRegion::boundary_edges() const {
  int edges = 0;
  for (int j = 0; j < grid_; ++j) {
    for (int i = 0; i < grid_; ++i) {
      if (!contains(i, j)) continue;
      edges += !contains(i - 1, j) + !contains(i + 1, j) + !contains(i, j - 1) + !contains(i, j + 1);
    }
  }
  return edges;
}

namespace {

// The contour is the 1/2 level line of the 3x3 box average of the indicator,
// sampled at cell centres (zero outside Q) and linearly interpolated along the
// sides of the squares joining neighbouring centres. Averaging lets the line
// cut through cells, which removes the staircase bias of a midpoint contour.
// Mean of the cell indicator over the 3x3 neighbourhood, on the grid padded by
// one empty ring. The 1/2 level set follows straight sides exactly and keeps
// digital discs from paying the staircase length.
class SmoothedIndicator {
 public:
  explicit SmoothedIndicator(const DiscreteRegion& region) : g_(region.grid()) {
    const int padded = g_ + 2;
    values_.assign(static_cast<std::size_t>(padded) * padded, 0.0);
    for (int j = -1; j <= g_; ++j) {
      for (int i = -1; i <= g_; ++i) {
        int count = 0;
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) count += region.contains(i + di, j + dj);
        }
        values_[index(i, j)] = count / 9.0;
      }
    }
  }
  int grid() const { return g_; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j + 1) * (g_ + 2) + (i + 1); }
  int g_;
  std::vector<double> values_;
};

enum Side : int { kBottom, kRight, kTop, kLeft };

// Pairs of crossed square sides per case; corner bits are 1 lower-left,
// 2 lower-right, 4 upper-right, 8 upper-left. Saddles keep inside corners apart.
int square_segments(int code, std::array<std::pair<Side, Side>, 2>& out) {
  switch (code) {
    case 1: case 14: out[0] = {kLeft, kBottom}; return 1;
    case 2: case 13: out[0] = {kBottom, kRight}; return 1;
    case 4: case 11: out[0] = {kRight, kTop}; return 1;
    case 8: case 7: out[0] = {kTop, kLeft}; return 1;
    case 3: case 12: out[0] = {kLeft, kRight}; return 1;
    case 6: case 9: out[0] = {kBottom, kTop}; return 1;
    case 5: out[0] = {kLeft, kBottom}; out[1] = {kRight, kTop}; return 2;
    case 10: out[0] = {kBottom, kRight}; out[1] = {kTop, kLeft}; return 2;
    default: return 0;
  }
}

// Visits every contour segment; squares have corners at cell centres (i, j) ..
// (i+1, j+1) with i, j from -1 so the contour closes outside Q.
template <typename Visit>
void march(const DiscreteRegion& region, Visit&& visit) {
  const SmoothedIndicator f(region);
  const int g = region.grid();
  const double h = 1.0 / g;
  constexpr double kLevel = 0.5;
  for (int j = -1; j < g; ++j) {
    for (int i = -1; i < g; ++i) {
      const double ll = f(i, j), lr = f(i + 1, j), ur = f(i + 1, j + 1), ul = f(i, j + 1);
      const int code = (ll > kLevel ? 1 : 0) | (lr > kLevel ? 2 : 0) | (ur > kLevel ? 4 : 0) | (ul > kLevel ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const double u0 = -0.5 + (i + 0.5) * h;
      const double v0 = -0.5 + (j + 0.5) * h;
      auto cross = [&](double a, double b) { return (kLevel - a) / (b - a); };
      auto point = [&](Side s) -> Point2 {
        switch (s) {
          case kBottom: return {u0 + cross(ll, lr) * h, v0};
          case kRight: return {u0 + h, v0 + cross(lr, ur) * h};
          case kTop: return {u0 + cross(ul, ur) * h, v0 + h};
          case kLeft: return {u0, v0 + cross(ll, ul) * h};
        }
        return {};
      };
      std::array<std::pair<Side, Side>, 2> pairs{};
      const int count = square_segments(code, pairs);
      for (int k = 0; k < count; ++k) {
        visit(Segment{point(pairs[static_cast<std::size_t>(k)].first), point(pairs[static_cast<std::size_t>(k)].second)});
      }
    }
  }
}

}  // namespace

std::vector<Segment> contour_segments(const DiscreteRegion& region) {
  std::vector<Segment> segments;
  if (region.grid() > 0) march(region, [&](const Segment& s) { segments.push_back(s); });
  return segments;
}

double perimeter(const DiscreteRegion& region, PerimeterMethod method) {
  if (region.grid() == 0) return 0.0;
  if (method == PerimeterMethod::raw) return static_cast<double>(region.boundary_edges()) / region.grid();
  double length = 0.0;
  march(region, [&](const Segment& s) { length += std::hypot(s.b.u - s.a.u, s.b.v - s.a.v); });
  return length;
}

double rate_function(const DiscreteRegion& region, double tau_c) {
  return tau_c * perimeter(region, PerimeterMethod::polygon);
}

double rate_function(const SignedMeasure& mu, double tau_c) {
  constexpr double kInfinity = std::numeric_limits<double>::infinity();
  if (!mu.atoms().empty() || mu.grid() == 0) return kInfinity;
  DiscreteRegion minus(mu.grid());
  for (int j = 0; j < mu.grid(); ++j) {
    for (int i = 0; i < mu.grid(); ++i) {
      const double d = mu.density(i, j);
      if (std::abs(d - 1.0) <= 1e-6) continue;
      if (std::abs(d + 1.0) > 1e-6) return kInfinity;
      minus.set(i, j, true);
    }
  }
  return rate_function(minus, tau_c);
}

DiscreteRegion disc_region(int grid, Point2 center, double radius) {
  if (grid < 1) throw ConfigError("grid size must be positive");
  DiscreteRegion region(grid);
  const double h = 1.0 / grid;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const double du = -0.5 + (i + 0.5) * h - center.u;
      const double dv = -0.5 + (j + 0.5) * h - center.v;
      region.set(i, j, du * du + dv * dv <= radius * radius);
    }
  }
  return region;
}

}  // namespace wulff
