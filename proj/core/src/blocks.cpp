#include "wulff/blocks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>

#include "wulff/dsu.hpp"
#include "wulff/errors.hpp"
#include "wulff/parallel.hpp"

namespace wulff {

char block_event_letter(BlockEvent kind) {
  constexpr char letters[] = {'U', 'R', 'V', 'F', 'W', 'T'};
  return letters[static_cast<std::size_t>(kind)];
}

BlockEvent block_event_from_letter(char letter) {
  switch (letter) {
    case 'U': return BlockEvent::crossing;
    case 'R': return BlockEvent::regular;
    case 'V': return BlockEvent::dense;
    case 'F': return BlockEvent::circuit;
    case 'W': return BlockEvent::boundary;
    case 'T': return BlockEvent::balanced;
    default: throw ConfigError(std::string("unknown block event '") + letter + "'");
  }
}

void BlockEventParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("block event delta must lie in (0, 1)");
  if (diameter < 1) throw ConfigError("block event diameter must be at least 1");
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("block event theta must lie in (0, 1]");
}

namespace {

constexpr std::uint8_t side_left = 1, side_right = 2, side_bottom = 4, side_top = 8, all_sides = 15;

// Open clusters of the sites of `box` accepted by `keep`, using in-box edges only.
struct BoxClusters {
  std::vector<int> label;  // local site -> cluster id, -1 when not kept
  std::vector<int> size;
  std::vector<std::uint8_t> sides;
  std::vector<int> extent;  // sup-diameter
  int crossing = -1;
};

template <class Keep>
BoxClusters label_box(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box, Keep&& keep) {
  const int w = box.width, h = box.height;
  auto local = [w](int x, int y) { return y * w + x; };
  DisjointSets dsu(w * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!keep(x, y)) continue;
      const int i = lattice.index({box.x0 + x, box.y0 + y});
      if (x + 1 < w && keep(x + 1, y) && open[static_cast<std::size_t>(lattice.right_edge(i))]) {
        dsu.unite(local(x, y), local(x + 1, y));
      }
      if (y + 1 < h && keep(x, y + 1) && open[static_cast<std::size_t>(lattice.up_edge(i))]) {
        dsu.unite(local(x, y), local(x, y + 1));
      }
    }
  }
  BoxClusters out;
  out.label.assign(static_cast<std::size_t>(w * h), -1);
  std::vector<int> id_of_root(static_cast<std::size_t>(w * h), -1);
  std::vector<int> min_x, max_x, min_y, max_y;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!keep(x, y)) continue;
      auto& id = id_of_root[static_cast<std::size_t>(dsu.find(local(x, y)))];
      if (id < 0) {
        id = static_cast<int>(out.size.size());
        out.size.push_back(0);
        out.sides.push_back(0);
        min_x.push_back(x), max_x.push_back(x), min_y.push_back(y), max_y.push_back(y);
      }
      const auto c = static_cast<std::size_t>(id);
      out.label[static_cast<std::size_t>(local(x, y))] = id;
      ++out.size[c];
      if (x == 0) out.sides[c] |= side_left;
      if (x == w - 1) out.sides[c] |= side_right;
      if (y == 0) out.sides[c] |= side_bottom;
      if (y == h - 1) out.sides[c] |= side_top;
      min_x[c] = std::min(min_x[c], x), max_x[c] = std::max(max_x[c], x);
      min_y[c] = std::min(min_y[c], y), max_y[c] = std::max(max_y[c], y);
    }
  }
  out.extent.resize(out.size.size());
  for (std::size_t c = 0; c < out.size.size(); ++c) {
    out.extent[c] = std::max(max_x[c] - min_x[c], max_y[c] - min_y[c]);
    if (out.sides[c] == all_sides) {
      // Two disjoint clusters cannot both cross a planar box.
      if (out.crossing >= 0) throw AlgorithmError("two crossing clusters", "box cluster labeling");
      out.crossing = static_cast<int>(c);
    }
  }
  return out;
}

BoxClusters label_box(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box) {
  return label_box(lattice, open, box, [](int, int) { return true; });
}

// Offsets 0, stride, 2 stride, ... with the last one flush with the far side.
std::vector<int> sub_box_offsets(int length, int side, int stride) {
  std::vector<int> out;
  for (int o = 0; o + side <= length; o += stride) out.push_back(o);
  if (out.empty() || out.back() + side < length) out.push_back(length - side);
  return out;
}

bool crosses_sub_boxes(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box,
                       const BoxClusters& clusters, int diameter) {
  const int side = diameter + 1;
  if (side > box.width || side > box.height) return true;
  const int stride = std::max(1, diameter / 4);
  const auto target = clusters.crossing;
  for (int oy : sub_box_offsets(box.height, side, stride)) {
    for (int ox : sub_box_offsets(box.width, side, stride)) {
      const Box sub{box.x0 + ox, box.y0 + oy, side, side};
      const auto inner = label_box(lattice, open, sub, [&](int x, int y) {
        return clusters.label[static_cast<std::size_t>((oy + y) * box.width + ox + x)] == target;
      });
      if (inner.crossing < 0) return false;
    }
  }
  return true;
}

// Dual sites of the box are (x0 - 1/2 + i, y0 - 1/2 + j) for i <= width, j <= height;
// a dual edge is open when the primal edge it crosses is closed.
bool dual_circuit_event(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box, double delta) {
  const int w = box.width, h = box.height;
  const int mx = std::max(1, static_cast<int>(std::ceil(delta * w)));
  const int my = std::max(1, static_cast<int>(std::ceil(delta * h)));
  if (2 * mx >= w || 2 * my >= h) return true;  // the inner box is empty
  const int dw = w + 1;
  auto dual = [dw](int i, int j) { return j * dw + i; };
  auto inner = [&](int i, int j) { return i >= mx && i <= w - mx && j >= my && j <= h - my; };
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(dw * (h + 1)), 0);
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j <= h; ++j) {
    for (int i = 0; i <= w; ++i) {
      if (i == 0 || j == 0 || i == w || j == h) {
        seen[static_cast<std::size_t>(dual(i, j))] = 1;
        stack.emplace_back(i, j);
      }
    }
  }
  auto site = [&](int x, int y) { return lattice.index({box.x0 + x, box.y0 + y}); };
  auto visit = [&](int i, int j) {
    auto& s = seen[static_cast<std::size_t>(dual(i, j))];
    if (s) return false;
    s = 1;
    stack.emplace_back(i, j);
    return inner(i, j);
  };
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    // Horizontal dual step (i,j)-(i+1,j) crosses the vertical primal edge above (i, j-1).
    if (j >= 1 && j <= h - 1) {
      if (i + 1 <= w && i <= w - 1 && !open[static_cast<std::size_t>(lattice.up_edge(site(i, j - 1)))] && visit(i + 1, j)) return false;
      if (i - 1 >= 0 && !open[static_cast<std::size_t>(lattice.up_edge(site(i - 1, j - 1)))] && visit(i - 1, j)) return false;
    }
    // Vertical dual step (i,j)-(i,j+1) crosses the horizontal primal edge right of (i-1, j).
    if (i >= 1 && i <= w - 1) {
      if (j + 1 <= h && j <= h - 1 && !open[static_cast<std::size_t>(lattice.right_edge(site(i - 1, j)))] && visit(i, j + 1)) return false;
      if (j - 1 >= 0 && !open[static_cast<std::size_t>(lattice.right_edge(site(i - 1, j - 1)))] && visit(i, j - 1)) return false;
    }
  }
  return true;
}

// Fewest open edges crossed by a dual path from the a = 0 side of the box to the
// a = length side, avoiding the outer face. Local (a, b) maps to the site
// (x0 + a, y0 + b), or (x0 + b, y0 + a) when transposed.
int side_to_side_cut(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box, bool transposed) {
  const int length = transposed ? box.height : box.width;
  const int across = transposed ? box.width : box.height;
  if (across < 2) return std::numeric_limits<int>::max();
  auto site = [&](int a, int b) {
    return transposed ? Site{box.x0 + b, box.y0 + a} : Site{box.x0 + a, box.y0 + b};
  };
  auto cost = [&](Site u, Site v) { return static_cast<int>(open[static_cast<std::size_t>(lattice.edge_between(u, v))]); };
  // Dual sites (i, j) with 0 <= i <= length and 1 <= j <= across - 1; columns 0 and
  // length are the two side arcs of the outer face.
  const int cols = length + 1;
  auto index = [&](int i, int j) { return (j - 1) * cols + i; };
  std::vector<int> dist(static_cast<std::size_t>(cols * (across - 1)), std::numeric_limits<int>::max());
  std::deque<std::pair<int, int>> queue;
  for (int j = 1; j <= across - 1; ++j) {
    dist[static_cast<std::size_t>(index(0, j))] = 0;
    queue.emplace_back(0, j);
  }
  auto relax = [&](int i, int j, int base, int step) {
    auto& d = dist[static_cast<std::size_t>(index(i, j))];
    if (base + step >= d) return;
    d = base + step;
    if (step == 0) {
      queue.emplace_front(i, j);
    } else {
      queue.emplace_back(i, j);
    }
  };
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    const int base = dist[static_cast<std::size_t>(index(i, j))];
    if (i == length) return base;
    // (i, j) -> (i +- 1, j) crosses the edge (i', j - 1)-(i', j) for i' the column passed.
    if (i + 1 <= length) relax(i + 1, j, base, cost(site(i, j - 1), site(i, j)));
    if (i - 1 >= 0) relax(i - 1, j, base, cost(site(i - 1, j - 1), site(i - 1, j)));
    if (i >= 1 && i <= length - 1) {
      if (j + 1 <= across - 1) relax(i, j + 1, base, cost(site(i - 1, j), site(i, j)));
      if (j - 1 >= 1) relax(i, j - 1, base, cost(site(i - 1, j - 1), site(i, j - 1)));
    }
  }
  return std::numeric_limits<int>::max();
}

void check_box(const Lattice& lattice, const Box& box) {
  if (box.empty() || box.intersect(lattice.bounds()) != box) throw ConfigError("block box must lie inside the lattice");
}

void check_config(const Lattice& lattice, const EdgeConfig& omega) {
  if (omega.open.size() != static_cast<std::size_t>(lattice.edge_count())) {
    throw ConfigError("edge configuration does not match the lattice");
  }
}

bool evaluate_on(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box, const BoxClusters& clusters,
                 const BlockEventParams& params, const SpinConfig* sigma) {
  const double volume = box.area();
  switch (params.kind) {
    case BlockEvent::crossing:
      return clusters.crossing >= 0;
    case BlockEvent::dense:
      return clusters.crossing >= 0 &&
             clusters.size[static_cast<std::size_t>(clusters.crossing)] >= (1.0 - params.delta) * params.theta * volume;
    case BlockEvent::regular: {
      if (clusters.crossing < 0) return false;
      for (std::size_t c = 0; c < clusters.size.size(); ++c) {
        if (static_cast<int>(c) != clusters.crossing && clusters.extent[c] >= params.diameter) return false;
      }
      return crosses_sub_boxes(lattice, open, box, clusters, params.diameter);
    }
    case BlockEvent::circuit:
      return dual_circuit_event(lattice, open, box, params.delta);
    case BlockEvent::boundary: {
      long long touching = 0;
      for (std::size_t c = 0; c < clusters.size.size(); ++c) {
        if (clusters.sides[c] != 0) touching += clusters.size[c];
      }
      return static_cast<double>(touching) <= (1.0 + params.delta) * params.theta * volume;
    }
    case BlockEvent::balanced: {
      if (sigma == nullptr) throw ConfigError("the balanced event needs a spin configuration");
      long long sum = 0;
      for (int y = 0; y < box.height; ++y) {
        for (int x = 0; x < box.width; ++x) {
          const int c = clusters.label[static_cast<std::size_t>(y * box.width + x)];
          if (clusters.sides[static_cast<std::size_t>(c)] == 0) {
            sum += sigma->values[static_cast<std::size_t>(lattice.index({box.x0 + x, box.y0 + y}))];
          }
        }
      }
      return static_cast<double>(std::llabs(sum)) <= params.delta * params.theta * volume;
    }
  }
  return false;
}

}  // namespace

bool evaluate_block_event(const Lattice& lattice, const EdgeConfig& omega, const Box& box, const BlockEventParams& params,
                          const SpinConfig* sigma) {
  params.validate();
  check_config(lattice, omega);
  check_box(lattice, box);
  if (params.kind == BlockEvent::balanced) {
    if (sigma == nullptr) throw ConfigError("the balanced event needs a spin configuration");
    if (sigma->values.size() != static_cast<std::size_t>(lattice.site_count())) {
      throw ConfigError("spin configuration does not match the lattice");
    }
  }
  const auto clusters = label_box(lattice, omega.open, box);
  return evaluate_on(lattice, omega.open, box, clusters, params, sigma);
}

double BlockField::bad_fraction() const {
  if (good.empty()) return 0.0;
  const auto bad = std::count(good.begin(), good.end(), std::uint8_t{0});
  return static_cast<double>(bad) / static_cast<double>(good.size());
}

BlockField block_field(const Lattice& lattice, const EdgeConfig& omega, const SpinConfig* sigma, int k,
                       std::span<const BlockEventParams> good_def, int threads) {
  check_config(lattice, omega);
  if (k < 1 || 2 * k > lattice.side()) throw ConfigError("block scale must allow at least two blocks per side");
  if (good_def.size() > 32) throw ConfigError("at most 32 events per good-block definition");
  bool needs_spins = false;
  for (const auto& e : good_def) {
    e.validate();
    needs_spins = needs_spins || e.kind == BlockEvent::balanced;
  }
  if (needs_spins && (sigma == nullptr || sigma->values.size() != static_cast<std::size_t>(lattice.site_count()))) {
    throw ConfigError("the balanced event needs a spin configuration on the same lattice");
  }
  BlockField field{blockify(lattice, k), {}, {}};
  const auto count = field.grid.size();
  field.good.assign(count, 0);
  field.event_bits.assign(count, 0);
  const auto bounds = lattice.bounds();
  parallel_for(static_cast<int>(count), threads, [&](int b) {
    const Site xb = field.grid.index_set()[static_cast<std::size_t>(b)];
    const Box block = field.grid.block(xb).intersect(bounds);
    const Box wide = field.grid.event_block(xb).intersect(bounds);
    const auto near = label_box(lattice, omega.open, block);
    std::optional<BoxClusters> far;
    std::uint32_t bits = 0;
    for (std::size_t j = 0; j < good_def.size(); ++j) {
      bool holds = false;
      if (good_def[j].kind == BlockEvent::regular) {
        if (!far) far = label_box(lattice, omega.open, wide);
        holds = evaluate_on(lattice, omega.open, wide, *far, good_def[j], sigma);
      } else {
        holds = evaluate_on(lattice, omega.open, block, near, good_def[j], sigma);
      }
      if (holds) bits |= std::uint32_t{1} << j;
    }
    const auto all = good_def.size() == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << good_def.size()) - 1;
    field.event_bits[static_cast<std::size_t>(b)] = bits;
    field.good[static_cast<std::size_t>(b)] = bits == all ? 1 : 0;
  });
  return field;
}

std::vector<BadComponent> bad_component_stats(const BlockField& field) {
  std::vector<Site> bad;
  for (std::size_t i = 0; i < field.good.size(); ++i) {
    if (!field.good[i]) bad.push_back(field.grid.index_set()[i]);
  }
  std::vector<BadComponent> out;
  for (auto& c : linf_components(bad)) {
    BadComponent comp;
    comp.size = static_cast<int>(c.sites.size());
    comp.diameter = c.diameter;
    comp.blocks = std::move(c.sites);
    out.push_back(std::move(comp));
  }
  std::stable_sort(out.begin(), out.end(), [](const BadComponent& a, const BadComponent& b) { return a.size > b.size; });
  return out;
}

void write_block_csv(std::ostream& out, const BlockField& field) {
  out << "x,y,X,event_bits\n";
  for (std::size_t i = 0; i < field.good.size(); ++i) {
    const Site xb = field.grid.index_set()[i];
    out << xb.x << ',' << xb.y << ',' << static_cast<int>(field.good[i]) << ',' << field.event_bits[i] << '\n';
  }
}

double cramer_rate(double eps, double delta) {
  if (!(delta > 0.0 && delta < 1.0 && eps >= delta && eps < 1.0)) {
    throw ConfigError("Cramer transform needs 0 < delta <= eps < 1");
  }
  auto term = [](double a, double b) { return a > 0.0 ? a * std::log(a / b) : 0.0; };
  return term(eps, delta) + term(1.0 - eps, 1.0 - delta);
}

double hoeffding_bound(int count, double t, double mean) {
  if (count < 1) throw ConfigError("Hoeffding bound needs at least one variable");
  if (!(mean >= 0.0 && mean < 1.0 && t > 0.0 && t < 1.0 - mean)) throw ConfigError("Hoeffding bound needs t in (0, 1 - mean)");
  return std::exp(-static_cast<double>(count) * t * t);
}

double bad_fraction_bound(double eps, double delta, int n, int k) {
  if (n < 1 || k < 1) throw ConfigError("bad-fraction bound needs positive n and K");
  const double blocks = std::floor(static_cast<double>(n) / (6.0 * k));
  return 9.0 * std::exp(-cramer_rate(eps, delta) * blocks * blocks);
}

Estimate estimate_mixing(const MixingParams& params, const EdgeEvent& event_a, const EdgeEvent& event_b, RngStream rng) {
  const Lattice lattice(params.n);
  for (const Box* b : {&params.gamma, &params.delta}) check_box(lattice, *b);
  if (!params.gamma.intersect(params.delta).empty()) throw ConfigError("mixing regions must be disjoint");
  if (params.batches < 2 || params.samples < params.batches) throw ConfigError("need samples >= batches >= 2");
  ClusterSampler chain(params.n, params.p, BoundaryCondition::wired(), rng);
  chain.run(params.thermalize);
  const int per_batch = params.samples / params.batches;
  // Per batch: counts of A, B, A and B.
  std::vector<std::array<double, 3>> counts(static_cast<std::size_t>(params.batches), {0.0, 0.0, 0.0});
  for (int b = 0; b < params.batches; ++b) {
    for (int s = 0; s < per_batch; ++s) {
      chain.sweep();
      const auto omega = chain.edge_config();
      const bool a = event_a(omega), c = event_b(omega);
      auto& row = counts[static_cast<std::size_t>(b)];
      row[0] += a;
      row[1] += c;
      row[2] += a && c;
    }
  }
  auto relative = [&](int skip) {
    double na = 0.0, nb = 0.0, nab = 0.0, total = 0.0;
    for (int b = 0; b < params.batches; ++b) {
      if (b == skip) continue;
      const auto& row = counts[static_cast<std::size_t>(b)];
      na += row[0], nb += row[1], nab += row[2], total += per_batch;
    }
    const double pa = na / total, pb = nb / total, pab = nab / total;
    if (pa == 0.0 || pb == 0.0) return 0.0;
    return std::abs(pab - pa * pb) / (pa * pb);
  };
  Estimate out;
  out.mean = relative(-1);
  const double k = params.batches;
  double ss = 0.0;
  for (int b = 0; b < params.batches; ++b) {
    const double d = relative(b) - out.mean;
    ss += d * d;
  }
  out.std_error = std::sqrt(ss * (k - 1.0) / k);
  return out;
}

EdgeEvent edge_open_event(const Lattice& lattice, Site a, Site b) {
  const int e = lattice.edge_between(a, b);
  if (e < 0) throw ConfigError("edge event needs two adjacent sites of the lattice");
  return [e](const EdgeConfig& omega) { return omega.open[static_cast<std::size_t>(e)] != 0; };
}

int crossing_cut(const Lattice& lattice, const EdgeConfig& omega, const Box& box) {
  check_config(lattice, omega);
  return crossing_cut(lattice, std::span<const std::uint8_t>(omega.open), box);
}

int crossing_cut(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box) {
  check_box(lattice, box);
  if (open.size() != static_cast<std::size_t>(lattice.edge_count())) throw ConfigError("edge states do not match the lattice");
  if (box.width < 2 || box.height < 2) throw ConfigError("crossing cut needs a box of side at least 2");
  return std::min(side_to_side_cut(lattice, open, box, false), side_to_side_cut(lattice, open, box, true));
}

std::array<CutGraph, 2> crossing_cut_graphs(const Lattice& lattice, const Box& box) {
  check_box(lattice, box);
  if (box.width < 2 || box.height < 2) throw ConfigError("crossing cut needs a box of side at least 2");
  std::array<CutGraph, 2> graphs;
  for (bool transposed : {false, true}) {
    const int length = transposed ? box.height : box.width;
    const int across = transposed ? box.width : box.height;
    auto site = [&](int a, int b) {
      return transposed ? Site{box.x0 + b, box.y0 + a} : Site{box.x0 + a, box.y0 + b};
    };
    CutGraph& graph = graphs[transposed ? 1 : 0];
    // Same dual sites as side_to_side_cut: 0 <= i <= length, 1 <= j <= across - 1.
    std::vector<int> node(static_cast<std::size_t>((length + 1) * (across - 1)));
    auto at = [&](int i, int j) { return node[static_cast<std::size_t>((j - 1) * (length + 1) + i)]; };
    for (int j = 1; j <= across - 1; ++j) {
      for (int i = 0; i <= length; ++i) {
        node[static_cast<std::size_t>((j - 1) * (length + 1) + i)] = graph.add_node(i == 0, i == length);
      }
    }
    for (int j = 1; j <= across - 1; ++j) {
      for (int i = 0; i < length; ++i) graph.add_step(at(i, j), at(i + 1, j), lattice.edge_between(site(i, j - 1), site(i, j)));
      if (j + 1 > across - 1) continue;
      for (int i = 1; i < length; ++i) graph.add_step(at(i, j), at(i, j + 1), lattice.edge_between(site(i - 1, j), site(i, j)));
    }
  }
  return graphs;
}

}  // namespace wulff
