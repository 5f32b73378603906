#include "fppvar/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fppvar/cube_averaging.hpp"
#include "fppvar/seeding.hpp"

namespace fppvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;

} // namespace

GridSpec::GridSpec(std::vector<int> lo, std::vector<int> hi)
    : d_(static_cast<int>(lo.size())), lo_(std::move(lo)), hi_(std::move(hi))
{
  if (d_ < 1 || hi_.size() != lo_.size())
    throw std::invalid_argument("grid: bounds must be nonempty and of equal length");
  extent_.resize(d_);
  stride_.resize(d_);
  vertex_count_ = 1;
  for (int a = d_ - 1; a >= 0; --a) {
    if (hi_[a] < lo_[a])
      throw std::invalid_argument("grid: empty axis");
    extent_[a] = hi_[a] - lo_[a] + 1;
    stride_[a] = vertex_count_;
    vertex_count_ *= static_cast<std::size_t>(extent_[a]);
  }

  incident_.assign(vertex_count_ * d_ * 2, kNone);
  std::vector<int> c(d_);
  for (int a = 0; a < d_; ++a) {
    // Row-major over the box with axis a shortened by one.
    std::vector<int> span_hi = hi_;
    --span_hi[a];
    if (span_hi[a] < lo_[a])
      continue;
    c = lo_;
    for (;;) {
      const std::size_t e = tail_.size();
      const std::size_t t = vertex(c);
      const std::size_t h = t + stride_[a];
      tail_.push_back(t);
      head_.push_back(h);
      axis_.push_back(a);
      incident_[(t * d_ + a) * 2 + 0] = static_cast<std::int64_t>(e);
      incident_[(h * d_ + a) * 2 + 1] = static_cast<std::int64_t>(e);
      int i = d_ - 1;
      while (i >= 0 && ++c[i] > span_hi[i]) {
        c[i] = lo_[i];
        --i;
      }
      if (i < 0)
        break;
    }
  }
}

GridSpec GridSpec::for_target(int d, int n, int pad)
{
  if (d < 2)
    throw std::invalid_argument("grid: dimension must be at least 2");
  if (n < 0 || pad < 0)
    throw std::invalid_argument("grid: n and pad must be nonnegative");
  std::vector<int> lo(d, -pad), hi(d, pad);
  hi[0] = n + pad;
  return GridSpec(std::move(lo), std::move(hi));
}

bool GridSpec::contains(std::span<const int> c) const
{
  if (static_cast<int>(c.size()) != d_)
    return false;
  for (int a = 0; a < d_; ++a)
    if (c[a] < lo_[a] || c[a] > hi_[a])
      return false;
  return true;
}

std::size_t GridSpec::vertex(std::span<const int> c) const
{
  if (!contains(c))
    throw std::out_of_range("grid: vertex outside the box");
  std::size_t v = 0;
  for (int a = 0; a < d_; ++a)
    v += static_cast<std::size_t>(c[a] - lo_[a]) * stride_[a];
  return v;
}

std::vector<int> GridSpec::coordinates(std::size_t v) const
{
  if (v >= vertex_count_)
    throw std::out_of_range("grid: vertex index out of range");
  std::vector<int> c(d_);
  for (int a = 0; a < d_; ++a) {
    c[a] = lo_[a] + static_cast<int>(v / stride_[a]);
    v %= stride_[a];
  }
  return c;
}

std::size_t GridSpec::edge(std::span<const int> c, int axis) const
{
  if (axis < 0 || axis >= d_)
    throw std::out_of_range("grid: axis out of range");
  const auto e = incident(vertex(c), axis, 0);
  if (e == kNone)
    throw std::out_of_range("grid: edge leaves the box");
  return static_cast<std::size_t>(e);
}

int default_padding(int n) { return std::max((n + 1) / 2, 16); }

WeightField::WeightField(std::shared_ptr<const GridSpec> grid, std::vector<double> weights,
                         std::string provenance, std::uint64_t seed)
    : grid_(std::move(grid)), weights_(std::move(weights)), provenance_(std::move(provenance)),
      seed_(seed)
{
  if (!grid_)
    throw std::invalid_argument("weight field: null grid");
  if (weights_.size() != grid_->edge_count())
    throw std::invalid_argument("weight field: length does not match the edge count");
  for (double w : weights_)
    if (!(w >= 0.0))
      throw std::invalid_argument("weight field: weights must be nonnegative");
}

WeightField WeightField::sample(std::shared_ptr<const GridSpec> grid, const EdgeDistribution& dist,
                                std::uint64_t seed)
{
  const int d = grid->dimension();
  std::vector<double> w(grid->edge_count());
  for (std::size_t e = 0; e < w.size(); ++e) {
    const auto c = grid->coordinates(grid->tail(e));
    std::uint64_t key = splitmix64(static_cast<std::uint64_t>(grid->axis(e)) + 1);
    for (int a = 0; a < d; ++a)
      key = splitmix64(key ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(c[a])));
    w[e] = dist.quantile(to_unit_open(derive_seed(seed, key)));
  }
  return WeightField(std::move(grid), std::move(w), dist.spec(), seed);
}

WeightField WeightField::constant(std::shared_ptr<const GridSpec> grid, double value)
{
  const std::size_t m = grid->edge_count();
  return WeightField(std::move(grid), std::vector<double>(m, value), "constant", 0);
}

void WeightField::set_weight(std::size_t e, double w)
{
  if (e >= weights_.size())
    throw std::out_of_range("weight field: edge index out of range");
  if (!(w >= 0.0))
    throw std::invalid_argument("weight field: weights must be nonnegative");
  weights_[e] = w;
}

PassageResult passage_time(const WeightField& field, std::size_t u, std::size_t v)
{
  const GridSpec& g = field.grid();
  const std::size_t nv = g.vertex_count();
  if (u >= nv || v >= nv)
    throw std::out_of_range("passage_time: vertex outside the box");
  const int d = g.dimension();

  PassageResult result;
  result.source = u;
  result.target = v;
  if (u == v)
    return result;

  std::vector<double> dist(nv, kInf);
  std::vector<std::int64_t> pred(nv, GridSpec::kNone);
  std::vector<char> settled(nv, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[u] = 0.0;
  heap.emplace(0.0, u);

  while (!heap.empty()) {
    const auto [du, x] = heap.top();
    heap.pop();
    if (settled[x])
      continue;
    settled[x] = 1;
    if (x == v)
      break;
    for (int a = 0; a < d; ++a)
      for (int dir = 0; dir < 2; ++dir) {
        const auto e = g.incident(x, a, dir);
        if (e == GridSpec::kNone)
          continue;
        const double w = field.weight(static_cast<std::size_t>(e));
        if (w == kInf)
          continue;
        const std::size_t y = dir == 0 ? g.head(e) : g.tail(e);
        if (settled[y])
          continue;
        const double nd = du + w;
        if (nd < dist[y]) {
          dist[y] = nd;
          pred[y] = e;
          heap.emplace(nd, y);
        } else if (nd == dist[y] && e < pred[y]) {
          pred[y] = e;
        }
      }
  }
  if (!settled[v])
    throw std::runtime_error("passage_time: target unreachable");
  result.distance = dist[v];

  for (std::size_t x = v; x != u;) {
    const auto e = static_cast<std::size_t>(pred[x]);
    result.geodesic_edges.push_back(e);
    x = g.tail(e) == x ? g.head(e) : g.tail(e);
  }
  std::reverse(result.geodesic_edges.begin(), result.geodesic_edges.end());

  // A second optimal path exists iff some vertex in the backward closure of
  // v over tight edges has two tight incoming edges.
  std::vector<char> seen(nv, 0);
  std::vector<std::size_t> stack{v};
  seen[v] = 1;
  while (!stack.empty() && !result.tie) {
    const std::size_t x = stack.back();
    stack.pop_back();
    if (x == u)
      continue;
    int tight = 0;
    for (int a = 0; a < d; ++a)
      for (int dir = 0; dir < 2; ++dir) {
        const auto e = g.incident(x, a, dir);
        if (e == GridSpec::kNone)
          continue;
        const std::size_t y = dir == 0 ? g.head(e) : g.tail(e);
        const double w = field.weight(static_cast<std::size_t>(e));
        if (!settled[y] || w == kInf || dist[y] >= dist[x])
          continue;
        if (std::abs(dist[y] + w - dist[x]) <= kTieTolerance) {
          ++tight;
          if (!seen[y]) {
            seen[y] = 1;
            stack.push_back(y);
          }
        }
      }
    if (tight > 1)
      result.tie = true;
  }
  return result;
}

PassageResult passage_time(const WeightField& field, std::span<const int> u, std::span<const int> v)
{
  return passage_time(field, field.grid().vertex(u), field.grid().vertex(v));
}

EdgeDerivative edge_derivative(const WeightField& field, std::span<const int> v, std::size_t e)
{
  if (e >= field.grid().edge_count())
    throw std::out_of_range("edge_derivative: edge index out of range");
  const std::vector<int> origin(field.grid().dimension(), 0);
  const PassageResult base = passage_time(field, origin, v);
  if (base.tie)
    throw GeodesicTie("edge_derivative: geodesic is not unique; re-sample the field");

  EdgeDerivative out;
  out.indicator = std::find(base.geodesic_edges.begin(), base.geodesic_edges.end(), e) !=
                          base.geodesic_edges.end()
                      ? 1
                      : 0;
  WeightField bumped = field;
  bumped.set_weight(e, field.weight(e) + out.delta);
  out.increment = passage_time(bumped, origin, v).distance - base.distance;
  out.fd_agrees = std::abs(out.increment - out.delta * out.indicator) <= 1e-12;
  return out;
}

EdgeResponse single_edge_response(const WeightField& field, std::span<const int> v, std::size_t e,
                                  std::span<const double> y_grid)
{
  if (e >= field.grid().edge_count())
    throw std::out_of_range("single_edge_response: edge index out of range");
  const std::vector<int> origin(field.grid().dimension(), 0);
  const std::size_t s = field.grid().vertex(origin);
  const std::size_t t = field.grid().vertex(v);
  WeightField work = field;
  auto at = [&](double y) {
    work.set_weight(e, y);
    return passage_time(work, s, t).distance;
  };

  EdgeResponse r;
  r.g0 = at(0.0);
  r.plateau = at(kInf);
  r.breakpoint = r.plateau - r.g0;
  r.monotone = true;
  r.lipschitz = true;
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    const double y = y_grid[i];
    const double dy = at(y);
    r.y.push_back(y);
    r.distance.push_back(dy);
    r.max_deviation = std::max(r.max_deviation, std::abs(dy - std::min(r.g0 + y, r.plateau)));
    if (i > 0) {
      const double step = dy - r.distance[i - 1];
      const double dyy = y - y_grid[i - 1];
      if (step < -1e-12)
        r.monotone = false;
      if (step > dyy + 1e-12)
        r.lipschitz = false;
    }
  }
  return r;
}

AveragedPassage averaged_passage_time(const std::vector<std::vector<std::uint8_t>>& a,
                                      const WeightField& field, std::span<const int> v, int m)
{
  const GridSpec& g = field.grid();
  if (static_cast<int>(a.size()) != g.dimension() || static_cast<int>(v.size()) != g.dimension())
    throw std::invalid_argument("averaged_passage_time: one row of bits per dimension required");
  const AveragingFunction avg(m);

  AveragedPassage out;
  out.shift = random_vertex(avg, a);
  std::vector<int> origin(g.dimension(), 0), vz(g.dimension());
  for (int i = 0; i < g.dimension(); ++i)
    vz[i] = v[i] + out.shift[i];
  if (!g.contains(out.shift) || !g.contains(vz) || !g.contains(v))
    throw std::out_of_range("averaged_passage_time: shifted endpoints leave the box");

  out.value = passage_time(field, out.shift, vz).distance;
  out.base = passage_time(field, origin, v).distance;
  out.bound = passage_time(field, origin, out.shift).distance + passage_time(field, v, vz).distance;
  out.bound_ok = std::abs(out.value - out.base) <= out.bound + 1e-9;
  return out;
}

double padding_change_fraction(const EdgeDistribution& dist, int d, int n, int pad, int trials,
                               std::uint64_t seed)
{
  if (trials < 1)
    throw std::invalid_argument("padding_change_fraction: trials must be positive");
  auto narrow = std::make_shared<const GridSpec>(GridSpec::for_target(d, n, pad));
  auto wide = std::make_shared<const GridSpec>(GridSpec::for_target(d, n, 2 * pad));
  std::vector<int> origin(d, 0), target(d, 0);
  target[0] = n;
  int changed = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
    const double a = passage_time(WeightField::sample(narrow, dist, s), origin, target).distance;
    const double b = passage_time(WeightField::sample(wide, dist, s), origin, target).distance;
    if (std::abs(a - b) > 1e-9)
      ++changed;
  }
  return static_cast<double>(changed) / trials;
}

} // namespace fppvar
