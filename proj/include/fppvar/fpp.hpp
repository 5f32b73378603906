#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fppvar/edgedist.hpp"

namespace fppvar {

/// Finite box prod_a [lo_a, hi_a] in Z^d with nearest-neighbour edges.
///
/// Vertices are indexed row-major with the last axis fastest. The edge
/// from vertex c to c + e_a is stored under axis block a; blocks are laid
/// out in axis order and each block is indexed row-major over the box with
/// axis a shortened by one.
class GridSpec
{
public:
  GridSpec(std::vector<int> lo, std::vector<int> hi);

  /// [-pad, n + pad] x [-pad, pad]^{d-1}, the box used for target n e_1.
  static GridSpec for_target(int d, int n, int pad);

  int dimension() const { return d_; }
  const std::vector<int>& lo() const { return lo_; }
  const std::vector<int>& hi() const { return hi_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return tail_.size(); }

  bool contains(std::span<const int> c) const;
  /// Throws std::out_of_range outside the box.
  std::size_t vertex(std::span<const int> c) const;
  std::vector<int> coordinates(std::size_t v) const;

  /// Edge from c to c + e_axis; throws std::out_of_range if it leaves the box.
  std::size_t edge(std::span<const int> c, int axis) const;
  std::size_t tail(std::size_t e) const { return tail_[e]; }
  std::size_t head(std::size_t e) const { return head_[e]; }
  int axis(std::size_t e) const { return axis_[e]; }

  static constexpr std::int64_t kNone = -1;
  /// Edge leaving v in direction +e_a (dir 0) or -e_a (dir 1), or kNone.
  std::int64_t incident(std::size_t v, int a, int dir) const { return incident_[(v * d_ + a) * 2 + dir]; }

private:
  int d_;
  std::vector<int> lo_, hi_, extent_;
  std::vector<std::size_t> stride_;
  std::size_t vertex_count_ = 0;
  std::vector<std::size_t> tail_, head_;
  std::vector<int> axis_;
  std::vector<std::int64_t> incident_;
};

/// max(ceil(n/2), 16).
int default_padding(int n);

/// Edge weights over a shared grid.
///
/// sample() draws the weight of the edge from c to c + e_a as H^{-1}(u) with
///   key = splitmix64(a + 1), then key = splitmix64(key ^ uint64(c_i)) for
///   each coordinate in axis order,
///   u = to_unit_open(derive_seed(seed, key)).
/// The weight depends only on (seed, a, c), so boxes of different sizes see
/// the same field on the edges they share.
class WeightField
{
public:
  WeightField(std::shared_ptr<const GridSpec> grid, std::vector<double> weights,
              std::string provenance = "explicit", std::uint64_t seed = 0);

  static WeightField sample(std::shared_ptr<const GridSpec> grid, const EdgeDistribution& dist,
                            std::uint64_t seed);
  static WeightField constant(std::shared_ptr<const GridSpec> grid, double value);

  const GridSpec& grid() const { return *grid_; }
  const std::shared_ptr<const GridSpec>& grid_ptr() const { return grid_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t e) const { return weights_[e]; }
  /// Any value in [0, inf]; +inf removes the edge.
  void set_weight(std::size_t e, double w);
  const std::string& provenance() const { return provenance_; }
  std::uint64_t seed() const { return seed_; }

private:
  std::shared_ptr<const GridSpec> grid_;
  std::vector<double> weights_;
  std::string provenance_;
  std::uint64_t seed_;
};

struct PassageResult
{
  double distance = 0.0;
  std::vector<std::size_t> geodesic_edges; ///< ordered from source to target
  std::size_t source = 0;
  std::size_t target = 0;
  /// True when another optimal path exists (labels equal within 1e-12).
  bool tie = false;
};

/// Label-setting shortest path with a binary heap. Among equal labels the
/// predecessor edge with the smallest index wins.
PassageResult passage_time(const WeightField& field, std::size_t u, std::size_t v);
PassageResult passage_time(const WeightField& field, std::span<const int> u, std::span<const int> v);

class GeodesicTie : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct EdgeDerivative
{
  int indicator = 0;      ///< 1 iff e lies on the geodesic from 0 to v
  double increment = 0.0; ///< f_v(x + delta 1_e) - f_v(x)
  double delta = 1e-9;
  bool fd_agrees = false; ///< |increment - delta * indicator| <= 1e-12
};

/// Derivative of f_v = d_x(0, v) in x_e. Throws GeodesicTie when the
/// geodesic is not unique.
EdgeDerivative edge_derivative(const WeightField& field, std::span<const int> v, std::size_t e);

struct EdgeResponse
{
  std::vector<double> y;
  std::vector<double> distance;
  double g0 = 0.0;         ///< response at x_e = 0
  double plateau = 0.0;    ///< response with e removed
  double breakpoint = 0.0; ///< plateau - g0
  double max_deviation = 0.0;
  bool monotone = false;
  bool lipschitz = false;
};

/// y -> d_{(x^{-e}, y)}(0, v) on `y_grid`, compared with min(g0 + y, C).
EdgeResponse single_edge_response(const WeightField& field, std::span<const int> v, std::size_t e,
                                  std::span<const double> y_grid);

struct AveragedPassage
{
  std::vector<int> shift; ///< z(a)
  double value = 0.0;     ///< d_x(z, v + z)
  double base = 0.0;      ///< d_x(0, v)
  double bound = 0.0;     ///< d_x(0, z) + d_x(v, v + z)
  bool bound_ok = false;  ///< |value - base| <= bound + 1e-9
};

/// Throws std::out_of_range if z(a) or v + z(a) leaves the box.
AveragedPassage averaged_passage_time(const std::vector<std::vector<std::uint8_t>>& a,
                                      const WeightField& field, std::span<const int> v, int m);

/// Fraction of `trials` seeded fields where d(0, n e_1) differs (beyond
/// 1e-9) between padding `pad` and padding 2 pad.
double padding_change_fraction(const EdgeDistribution& dist, int d, int n, int pad, int trials,
                               std::uint64_t seed);

} // namespace fppvar
