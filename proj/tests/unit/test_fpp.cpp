#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "fppvar/cube_averaging.hpp"
#include "fppvar/fpp.hpp"
#include "fppvar/seeding.hpp"

using namespace fppvar;

namespace {

std::shared_ptr<const GridSpec> box(std::vector<int> lo, std::vector<int> hi)
{
  return std::make_shared<const GridSpec>(std::move(lo), std::move(hi));
}

// Minimum over all simple paths by exhaustive depth-first search.
double brute_force(const WeightField& f, std::size_t s, std::size_t t)
{
  const auto& g = f.grid();
  std::vector<char> seen(g.vertex_count(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double)> dfs = [&](std::size_t v, double acc) {
    if (acc >= best)
      return;
    if (v == t) {
      best = acc;
      return;
    }
    seen[v] = 1;
    for (int a = 0; a < g.dimension(); ++a)
      for (int dir = 0; dir < 2; ++dir) {
        const auto e = g.incident(v, a, dir);
        if (e == GridSpec::kNone)
          continue;
        const std::size_t w = g.tail(e) == v ? g.head(e) : g.tail(e);
        if (!seen[w])
          dfs(w, acc + f.weight(e));
      }
    seen[v] = 0;
  };
  dfs(s, 0.0);
  return best;
}

} // namespace

TEST_CASE("grid layout")
{
  const auto g = GridSpec::for_target(2, 4, 2);
  CHECK(g.vertex_count() == 9u * 5u);
  // d prod(extent) - sum over axes of the shortened products
  CHECK(g.edge_count() == 8u * 5u + 9u * 4u);
  const std::vector<int> c{1, -1};
  const auto v = g.vertex(c);
  CHECK(g.coordinates(v) == c);
  const auto e = g.edge(c, 0);
  CHECK(g.tail(e) == v);
  CHECK(g.coordinates(g.head(e)) == std::vector<int>{2, -1});
  CHECK(g.axis(e) == 0);
  CHECK(g.incident(v, 0, 0) == static_cast<std::int64_t>(e));
  CHECK_THROWS_AS(g.vertex(std::vector<int>{7, 0}), std::out_of_range);
  CHECK_THROWS_AS(g.edge(std::vector<int>{6, 0}, 0), std::out_of_range);
  CHECK_THROWS_AS(GridSpec::for_target(1, 4, 2), std::invalid_argument);
  CHECK(default_padding(8) == 16);
  CHECK(default_padding(64) == 32);
  CHECK(default_padding(65) == 33);

  const auto g3 = GridSpec::for_target(3, 2, 1);
  CHECK(g3.vertex_count() == 5u * 3u * 3u);
  CHECK(g3.edge_count() == 4u * 3u * 3u + 2u * 5u * 2u * 3u);
}

TEST_CASE("unit weights")
{
  const auto g = box({-2, -2}, {5, 2});
  const auto f = WeightField::constant(g, 1.0);
  const std::vector<int> o{0, 0}, v{3, 0}, w{2, -2};
  const auto r = passage_time(f, o, v);
  CHECK(r.distance == 3.0);
  CHECK(r.geodesic_edges.size() == 3);
  CHECK(passage_time(f, o, w).distance == 4.0);
  CHECK(passage_time(f, o, w).tie);
  const auto z = passage_time(f, o, o);
  CHECK(z.distance == 0.0);
  CHECK(z.geodesic_edges.empty());
}

TEST_CASE("matches exhaustive search on a 3x3 box")
{
  const auto g = box({0, 0}, {2, 2});
  const auto dist = EdgeDistribution::exponential();
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto f = WeightField::sample(g, dist, s);
    for (std::size_t t = 0; t < g->vertex_count(); ++t) {
      const auto r = passage_time(f, 0, t);
      CHECK(r.distance == doctest::Approx(brute_force(f, 0, t)).epsilon(1e-14));
    }
  }
}

TEST_CASE("geodesic is a path whose weight is the distance")
{
  const auto g = std::make_shared<const GridSpec>(GridSpec::for_target(2, 10, 6));
  const auto dist = EdgeDistribution::gamma(2.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = WeightField::sample(g, dist, s);
    const std::vector<int> o{0, 0}, v{10, 0}, w{4, 3};
    const auto r = passage_time(f, o, v);
    double sum = 0.0;
    std::size_t at = r.source;
    for (auto e : r.geodesic_edges) {
      sum += f.weight(e);
      REQUIRE((g->tail(e) == at || g->head(e) == at));
      at = g->tail(e) == at ? g->head(e) : g->tail(e);
    }
    CHECK(at == r.target);
    CHECK(sum == doctest::Approx(r.distance).epsilon(1e-13));
    // triangle inequality and symmetry
    const double ow = passage_time(f, o, w).distance, wv = passage_time(f, w, v).distance;
    CHECK(r.distance <= ow + wv + 1e-12);
    CHECK(passage_time(f, v, o).distance == doctest::Approx(r.distance).epsilon(1e-14));
  }
}

TEST_CASE("removed edges")
{
  const auto g = box({0, 0}, {2, 1});
  auto f = WeightField::constant(g, 1.0);
  const std::vector<int> o{0, 0}, v{2, 0};
  f.set_weight(g->edge(o, 0), std::numeric_limits<double>::infinity());
  CHECK(passage_time(f, o, v).distance == 4.0);
  CHECK_THROWS_AS(f.set_weight(0, -1.0), std::invalid_argument);
}

TEST_CASE("edge derivative is the geodesic indicator")
{
  const auto g = std::make_shared<const GridSpec>(GridSpec::for_target(2, 6, 4));
  const auto dist = EdgeDistribution::exponential();
  const std::vector<int> v{6, 0};
  int agree = 0, total = 0;
  RandomStream pick(3);
  for (std::uint64_t s = 0; total < 100; ++s) {
    const auto f = WeightField::sample(g, dist, s);
    const auto geo = passage_time(f, std::vector<int>{0, 0}, v);
    if (geo.tie)
      continue;
    // alternate between a geodesic edge and an arbitrary edge
    const std::size_t e = s % 2 == 0 ? geo.geodesic_edges[pick.bits() % geo.geodesic_edges.size()]
                                     : pick.bits() % g->edge_count();
    const auto d = edge_derivative(f, v, e);
    const bool on = std::find(geo.geodesic_edges.begin(), geo.geodesic_edges.end(), e) !=
                    geo.geodesic_edges.end();
    CHECK(d.indicator == (on ? 1 : 0));
    agree += d.fd_agrees;
    ++total;
  }
  CHECK(agree >= 99);
  const auto unit = WeightField::constant(g, 1.0);
  CHECK_THROWS_AS(edge_derivative(unit, std::vector<int>{2, 2}, 0), GeodesicTie);
}

TEST_CASE("single edge response is min(g0 + y, C)")
{
  const auto g = std::make_shared<const GridSpec>(GridSpec::for_target(2, 5, 3));
  const auto dist = EdgeDistribution::uniform(0.0, 1.0);
  std::vector<double> ys;
  for (int i = 0; i <= 100; ++i)
    ys.push_back(0.1 * i);
  RandomStream pick(4);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = WeightField::sample(g, dist, s);
    const std::vector<int> v{5, 0};
    const auto geo = passage_time(f, std::vector<int>{0, 0}, v);
    const std::size_t e = geo.geodesic_edges[pick.bits() % geo.geodesic_edges.size()];
    const auto r = single_edge_response(f, v, e, ys);
    CHECK(r.max_deviation <= 1e-9);
    CHECK(r.monotone);
    CHECK(r.lipschitz);
    CHECK(r.breakpoint >= 0.0);
    CHECK(r.distance.size() == ys.size());
  }
}

TEST_CASE("averaged passage time")
{
  const auto g = std::make_shared<const GridSpec>(GridSpec::for_target(2, 4, 4));
  const auto f = WeightField::sample(g, EdgeDistribution::exponential(), 12);
  const std::vector<int> v{4, 0};
  const std::vector<std::vector<std::uint8_t>> zero(2, std::vector<std::uint8_t>(4, 0));
  const auto a = averaged_passage_time(zero, f, v, 2);
  CHECK(a.shift == std::vector<int>{0, 0});
  CHECK(a.value == a.base);
  CHECK(a.bound == 0.0);

  const std::vector<std::vector<std::uint8_t>> ones(2, std::vector<std::uint8_t>(4, 1));
  const auto b = averaged_passage_time(ones, f, v, 2);
  CHECK(b.shift == std::vector<int>{2, 2});
  CHECK(b.bound_ok);
  CHECK(std::abs(b.value - b.base) <= b.bound + 1e-9);

  RandomStream s(5);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::vector<std::uint8_t>> r(2, std::vector<std::uint8_t>(9));
    for (auto& row : r)
      for (auto& bit : row)
        bit = s.coin();
    CHECK(averaged_passage_time(r, f, v, 3).bound_ok);
  }
  const auto small = box({0, 0}, {4, 0});
  const auto line = WeightField::constant(small, 1.0);
  CHECK_THROWS_AS(averaged_passage_time(ones, line, v, 2), std::out_of_range);
}

TEST_CASE("padding rarely matters")
{
  const double frac = padding_change_fraction(EdgeDistribution::exponential(), 2, 16, default_padding(16), 200, 99);
  CHECK(frac <= 0.01);
}

TEST_CASE("hashed weights do not depend on the box")
{
  const auto small = box({-2, -2}, {4, 2});
  const auto big = box({-5, -6}, {9, 7});
  const auto dist = EdgeDistribution::exponential();
  const auto a = WeightField::sample(small, dist, 42);
  const auto b = WeightField::sample(big, dist, 42);
  CHECK(a.provenance() == b.provenance());
  for (std::size_t e = 0; e < small->edge_count(); ++e) {
    const auto c = small->coordinates(small->tail(e));
    CHECK(a.weight(e) == b.weight(big->edge(c, small->axis(e))));
  }
  const auto other = WeightField::sample(small, dist, 43);
  CHECK(other.weight(0) != a.weight(0));
}
