#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "phonosim/error.hpp"

namespace phonosim {

template <typename Scalar>
using Points2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class BandwidthRule {
  silverman,         // 1.06 σ n^(-1/5)
  silverman_robust,  // 1.06 min(σ, IQR/1.34) n^(-1/5)
};

template <typename Scalar>
struct Bandwidths {
  Scalar h_x;
  Scalar h_y;
};

namespace detail {

template <typename Scalar>
Scalar quantile_sorted(const std::vector<Scalar>& v, Scalar q) {
  const Scalar pos = q * static_cast<Scalar>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<Scalar>(lo)) * (v[hi] - v[lo]);
}

}  // namespace detail

// Per-axis Gaussian reference rule with weighted standard deviation
// σ_w = sqrt(Σ w (x - x̄_w)² / Σ w). An axis with no spread falls back to
// max(1e-6, 1e-3 · range of the other axis).
template <typename DerivedP, typename DerivedW>
Bandwidths<typename DerivedP::Scalar> silverman_bandwidths(
    const Eigen::MatrixBase<DerivedP>& coords, const Eigen::MatrixBase<DerivedW>& weights,
    BandwidthRule rule = BandwidthRule::silverman) {
  using Scalar = typename DerivedP::Scalar;
  const Eigen::Index n = coords.rows();
  if (coords.cols() != 2) throw Error("bandwidth selection expects 2D coordinates");
  if (n < 2) throw Error("bandwidth selection needs at least two points");
  if (weights.size() != n) throw Error("one weight per point is required");
  if ((weights.array() <= Scalar(0)).any()) throw Error("weights must be positive");

  const Scalar wsum = weights.sum();
  const Scalar factor = Scalar(1.06) * std::pow(static_cast<Scalar>(n), Scalar(-0.2));
  std::array<Scalar, 2> sigma{};
  std::array<Scalar, 2> range{};
  for (Eigen::Index axis = 0; axis < 2; ++axis) {
    const auto col = coords.col(axis);
    const Scalar mean = col.dot(weights) / wsum;
    const Scalar var = (col.array() - mean).square().matrix().dot(weights) / wsum;
    Scalar s = std::sqrt(std::max(var, Scalar(0)));
    if (rule == BandwidthRule::silverman_robust) {
      std::vector<Scalar> sorted(col.begin(), col.end());
      std::sort(sorted.begin(), sorted.end());
      const Scalar iqr = detail::quantile_sorted(sorted, Scalar(0.75)) -
                         detail::quantile_sorted(sorted, Scalar(0.25));
      if (iqr > Scalar(0)) s = std::min(s, iqr / Scalar(1.34));
    }
    sigma[static_cast<std::size_t>(axis)] = s;
    range[static_cast<std::size_t>(axis)] = col.maxCoeff() - col.minCoeff();
  }
  const auto pick = [&](std::size_t axis) {
    if (sigma[axis] > Scalar(0)) return factor * sigma[axis];
    return std::max(Scalar(1e-6), Scalar(1e-3) * range[1 - axis]);
  };
  return {pick(0), pick(1)};
}

template <typename Scalar>
struct KdeParams {
  Scalar h_x = 1;
  Scalar h_y = 1;
  VectorX<Scalar> weights;  // mean one, so the density integrates to one
  std::string family;
  Eigen::Index n_points = 0;

  void validate() const {
    if (!(h_x > Scalar(0)) || !(h_y > Scalar(0))) throw Error("bandwidths must be positive");
    if (n_points < 1 || weights.size() != n_points) throw Error("one weight per point is required");
    if ((weights.array() <= Scalar(0)).any()) throw Error("weights must be positive");
    if (std::abs(weights.mean() - Scalar(1)) > Scalar(1e-9)) throw Error("weights must have mean one");
  }
};

// w_i = N · hours_i / Σ hours.
template <typename Derived>
VectorX<typename Derived::Scalar> normalize_weights(const Eigen::MatrixBase<Derived>& hours) {
  using Scalar = typename Derived::Scalar;
  if (hours.size() == 0) throw Error("no recording hours to weight");
  if ((hours.array() <= Scalar(0)).any()) throw Error("recording hours must be positive to weight");
  return hours * (static_cast<Scalar>(hours.size()) / hours.sum());
}

template <typename DerivedP, typename DerivedH>
KdeParams<typename DerivedP::Scalar> make_kde_params(const Eigen::MatrixBase<DerivedP>& coords,
                                                     const Eigen::MatrixBase<DerivedH>& hours,
                                                     std::string family = {},
                                                     BandwidthRule rule = BandwidthRule::silverman) {
  KdeParams<typename DerivedP::Scalar> p;
  p.weights = normalize_weights(hours);
  const auto h = silverman_bandwidths(coords, p.weights, rule);
  p.h_x = h.h_x;
  p.h_y = h.h_y;
  p.family = std::move(family);
  p.n_points = coords.rows();
  p.validate();
  return p;
}

// f(x, y) = 1/(N h_x h_y) Σ w_i K((x - x_i)/h_x) K((y - y_i)/h_y),
// K(u) = exp(-u²/2) / √(2π).
template <typename Derived>
typename Derived::Scalar kde_density(typename Derived::Scalar x, typename Derived::Scalar y,
                                     const Eigen::MatrixBase<Derived>& coords,
                                     const KdeParams<typename Derived::Scalar>& params) {
  using Scalar = typename Derived::Scalar;
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    const Scalar u = (x - coords(i, 0)) / params.h_x;
    const Scalar v = (y - coords(i, 1)) / params.h_y;
    sum += params.weights[i] * std::exp(Scalar(-0.5) * (u * u + v * v));
  }
  const Scalar norm = Scalar(2) * std::numbers::pi_v<Scalar> * static_cast<Scalar>(params.n_points) *
                      params.h_x * params.h_y;
  return sum / norm;
}

// Density sampled at cell centers. values(r, c) is the density at
// (x_center(c), y_center(r)).
template <typename Scalar>
struct DensityGrid {
  Scalar x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  Eigen::Index resolution = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;

  Scalar cell_width() const { return (x_max - x_min) / static_cast<Scalar>(resolution); }
  Scalar cell_height() const { return (y_max - y_min) / static_cast<Scalar>(resolution); }
  Scalar x_center(Eigen::Index c) const { return x_min + (static_cast<Scalar>(c) + Scalar(0.5)) * cell_width(); }
  Scalar y_center(Eigen::Index r) const { return y_min + (static_cast<Scalar>(r) + Scalar(0.5)) * cell_height(); }
  Scalar integrated_mass() const { return values.sum() * cell_width() * cell_height(); }
};

// Bounding box is the data extent padded by `padding_bandwidths` · (h_x, h_y).
// The Gaussian kernel is separable, so the grid is Ky · diag(w) · Kxᵀ.
template <typename Derived>
DensityGrid<typename Derived::Scalar> rasterize(const Eigen::MatrixBase<Derived>& coords,
                                                const KdeParams<typename Derived::Scalar>& params,
                                                Eigen::Index resolution = 512,
                                                typename Derived::Scalar padding_bandwidths = 3) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (resolution < 16) throw Error("grid resolution must be at least 16");
  if (coords.rows() != params.n_points || coords.cols() != 2) {
    throw Error("coordinates do not match the density parameters");
  }
  params.validate();

  DensityGrid<Scalar> grid;
  grid.resolution = resolution;
  grid.x_min = coords.col(0).minCoeff() - padding_bandwidths * params.h_x;
  grid.x_max = coords.col(0).maxCoeff() + padding_bandwidths * params.h_x;
  grid.y_min = coords.col(1).minCoeff() - padding_bandwidths * params.h_y;
  grid.y_max = coords.col(1).maxCoeff() + padding_bandwidths * params.h_y;

  const Eigen::Index n = coords.rows();
  Matrix kx(resolution, n);
  Matrix ky(resolution, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < resolution; ++c) {
      const Scalar u = (grid.x_center(c) - coords(i, 0)) / params.h_x;
      const Scalar v = (grid.y_center(c) - coords(i, 1)) / params.h_y;
      kx(c, i) = std::exp(Scalar(-0.5) * u * u);
      ky(c, i) = std::exp(Scalar(-0.5) * v * v);
    }
  }
  const Scalar norm = Scalar(2) * std::numbers::pi_v<Scalar> * static_cast<Scalar>(params.n_points) *
                      params.h_x * params.h_y;
  grid.values.noalias() = ky * params.weights.asDiagonal() * kx.transpose();
  grid.values /= norm;
  return grid;
}

template <typename Scalar>
using Polyline = std::vector<Eigen::Matrix<Scalar, 2, 1>>;

template <typename Scalar>
struct ContourSet {
  std::string family;
  Scalar level = 0;
  std::vector<Polyline<Scalar>> polylines;  // closed ones repeat the first vertex
  bool below_level = false;                 // grid never reaches the level
};

template <typename Scalar>
bool is_closed(const Polyline<Scalar>& line) {
  return line.size() > 2 && line.front() == line.back();
}

// `fraction` of the grid maximum, for families whose density stays below an
// absolute level.
template <typename Scalar>
Scalar relative_level(const DensityGrid<Scalar>& grid, Scalar fraction) {
  return fraction * grid.values.maxCoeff();
}

// Marching squares over the sample lattice with linear interpolation along
// cell edges. Ambiguous saddle cells are resolved by the density at the cell
// center: `center_density(x, y)` when given, else the mean of the four corner
// samples. Polylines touching the grid boundary stay open; all others are
// closed.
template <typename Scalar>
ContourSet<Scalar> extract_contours(const DensityGrid<Scalar>& grid, Scalar level,
                                    std::string family = {},
                                    const std::function<Scalar(Scalar, Scalar)>& center_density = {}) {
  if (!(level > Scalar(0))) throw Error("contour level must be positive");
  ContourSet<Scalar> out;
  out.family = std::move(family);
  out.level = level;
  const Eigen::Index res = grid.resolution;
  const auto& v = grid.values;
  if (res < 2 || v.maxCoeff() < level) {
    out.below_level = true;
    return out;
  }

  using EdgeId = std::int64_t;
  const EdgeId horizontal_count = static_cast<EdgeId>(res) * (res - 1);
  const auto h_edge = [&](Eigen::Index r, Eigen::Index c) { return static_cast<EdgeId>(r) * (res - 1) + c; };
  const auto v_edge = [&](Eigen::Index r, Eigen::Index c) {
    return horizontal_count + static_cast<EdgeId>(r) * res + c;
  };
  const auto inside = [&](Eigen::Index r, Eigen::Index c) { return v(r, c) >= level; };

  struct Node {
    std::array<EdgeId, 2> next{-1, -1};
    int degree = 0;
  };
  std::unordered_map<EdgeId, Node> graph;
  const auto link = [&](EdgeId a, EdgeId b) {
    auto& na = graph[a];
    auto& nb = graph[b];
    na.next[static_cast<std::size_t>(na.degree++)] = b;
    nb.next[static_cast<std::size_t>(nb.degree++)] = a;
  };

  for (Eigen::Index r = 0; r + 1 < res; ++r) {
    for (Eigen::Index c = 0; c + 1 < res; ++c) {
      const bool a = inside(r, c);          // bottom-left
      const bool b = inside(r, c + 1);      // bottom-right
      const bool tr = inside(r + 1, c + 1); // top-right
      const bool tl = inside(r + 1, c);     // top-left
      const EdgeId bottom = h_edge(r, c);
      const EdgeId top = h_edge(r + 1, c);
      const EdgeId left = v_edge(r, c);
      const EdgeId right = v_edge(r, c + 1);

      std::array<EdgeId, 4> crossed{};
      int count = 0;
      if (a != b) crossed[static_cast<std::size_t>(count++)] = bottom;
      if (b != tr) crossed[static_cast<std::size_t>(count++)] = right;
      if (tl != tr) crossed[static_cast<std::size_t>(count++)] = top;
      if (a != tl) crossed[static_cast<std::size_t>(count++)] = left;
      if (count == 2) {
        link(crossed[0], crossed[1]);
      } else if (count == 4) {
        const Scalar center =
            center_density
                ? center_density(grid.x_center(c) + grid.cell_width() / Scalar(2),
                                 grid.y_center(r) + grid.cell_height() / Scalar(2))
                : (v(r, c) + v(r, c + 1) + v(r + 1, c + 1) + v(r + 1, c)) / Scalar(4);
        const bool center_inside = center >= level;
        // Separate the corners that disagree with the center.
        if (a == center_inside) {
          link(bottom, right);
          link(top, left);
        } else {
          link(left, bottom);
          link(top, right);
        }
      }
    }
  }

  const auto point_at = [&](EdgeId id) -> Eigen::Matrix<Scalar, 2, 1> {
    if (id < horizontal_count) {
      const Eigen::Index r = static_cast<Eigen::Index>(id / (res - 1));
      const Eigen::Index c = static_cast<Eigen::Index>(id % (res - 1));
      const Scalar t = (level - v(r, c)) / (v(r, c + 1) - v(r, c));
      return {grid.x_center(c) + t * grid.cell_width(), grid.y_center(r)};
    }
    const EdgeId k = id - horizontal_count;
    const Eigen::Index r = static_cast<Eigen::Index>(k / res);
    const Eigen::Index c = static_cast<Eigen::Index>(k % res);
    const Scalar t = (level - v(r, c)) / (v(r + 1, c) - v(r, c));
    return {grid.x_center(c), grid.y_center(r) + t * grid.cell_height()};
  };

  std::vector<EdgeId> ids;
  ids.reserve(graph.size());
  for (const auto& [id, node] : graph) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  std::unordered_map<EdgeId, bool> visited;

  const auto trace = [&](EdgeId start) {
    Polyline<Scalar> line;
    EdgeId prev = -1;
    EdgeId cur = start;
    while (cur >= 0 && !visited[cur]) {
      visited[cur] = true;
      line.push_back(point_at(cur));
      const auto& node = graph[cur];
      EdgeId next = -1;
      for (int k = 0; k < node.degree; ++k) {
        const EdgeId cand = node.next[static_cast<std::size_t>(k)];
        if (cand != prev && !visited[cand]) {
          next = cand;
          break;
        }
      }
      prev = cur;
      cur = next;
    }
    return line;
  };

  for (EdgeId id : ids) {
    if (graph[id].degree == 1 && !visited[id]) out.polylines.push_back(trace(id));
  }
  for (EdgeId id : ids) {
    if (visited[id]) continue;
    auto line = trace(id);
    line.push_back(line.front());
    out.polylines.push_back(std::move(line));
  }
  return out;
}

// One JSON object per family: {"family", "level", "below_level", "polylines"}.
void write_contours_json(std::ostream& out, const std::vector<ContourSet<double>>& contours);

struct LabeledPoint {
  std::string id;
  std::string family;
  double x = 0;
  double y = 0;
};

// Points colored by family with contour overlays.
void write_contours_svg(std::ostream& out, const std::vector<LabeledPoint>& points,
                        const std::vector<ContourSet<double>>& contours);

}  // namespace phonosim
