#include <doctest.h>

#include <set>

#include "physauth/harness.hpp"

using namespace physauth;

namespace {

Experiment small_experiment() {
  Experiment e;
  e.grid = {2.0, 2.0, 0.3, 4, 3, 1.0};
  e.bob = {8.0, 6.0, 2.0};
  e.scene.gain = 2e-5;
  e.channel.W = 10e6;
  e.channel.M = 5;
  e.channel.Bc = 2e6;
  e.b_T = 0.5;
  e.trials = 800;
  e.pair_budget = 30;
  e.seed = 17;
  return e;
}

}  // namespace

TEST_CASE("link budget") {
  LinkBudget b;
  CHECK(noise_variance(b, 10) == doctest::Approx(9.952679263837434e-12).epsilon(1e-14));
  b.P_T = 100;
  CHECK(noise_variance(b, 10) == doctest::Approx(9.952679263837434e-13).epsilon(1e-14));
  CHECK(sigma_T_from_bT(0.5, 4.0) == 2.0);
  b.P_T = 0;
  CHECK_THROWS(noise_variance(b, 10));
}

TEST_CASE("pair indexing is a bijection onto i < j") {
  const std::size_t n = 7;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::uint64_t k = 0; k < n * (n - 1) / 2; ++k) {
    const auto [i, j] = pair_from_index(k, n);
    CHECK(i < j);
    CHECK(j < n);
    seen.insert({i, j});
  }
  CHECK(seen.size() == n * (n - 1) / 2);
  CHECK_THROWS(pair_from_index(21, n));
}

TEST_CASE("pair selection") {
  const auto all = select_pairs(6, 100, 1);
  CHECK(all.size() == 15);
  const auto a = select_pairs(300, 500, 9);
  const auto b = select_pairs(300, 500, 9);
  const auto c = select_pairs(300, 500, 10);
  CHECK(a.size() == 500);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 500);
  CHECK(a.back() < 300u * 299u / 2);
}

TEST_CASE("resolve_point applies the sweep axis") {
  const Experiment e = small_experiment();
  const auto m = resolve_point(e, SweepAxis::M, 8);
  CHECK(m.params.M == 8);
  CHECK(m.responses.front().size() == 8);
  CHECK(m.params.sigma_N2 == doctest::Approx(noise_variance(e.budget, 8)));
  CHECK(m.params.sigma_T == doctest::Approx(0.5 * m.room_gain));
  CHECK(resolve_point(e, SweepAxis::spatial_mode, 1).mode == SpatialMode::FullyCorrelatedVariation);
  CHECK(resolve_point(e, SweepAxis::Bc, kInfiniteBc).params.Bc == kInfiniteBc);
  CHECK(resolve_point(e, SweepAxis::bT, 2).params.sigma_T == doctest::Approx(2 * m.room_gain));
  CHECK_THROWS(resolve_point(e, SweepAxis::M, 2.5));
}

TEST_CASE("room sweep is independent of thread count") {
  Experiment e = small_experiment();
  const std::vector<double> values{0.1, 1.0};
  e.threads = 1;
  const auto r1 = room_sweep(e, SweepAxis::bT, values);
  e.threads = 3;
  const auto r3 = room_sweep(e, SweepAxis::bT, values);
  REQUIRE(r1.points.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r1.points[i].beta_bar == r3.points[i].beta_bar);
    CHECK(r1.points[i].std_err == r3.points[i].std_err);
    CHECK(r1.points[i].pair_count == 30);
  }
}

TEST_CASE("empirical false-alarm rate is near alpha") {
  Experiment e = small_experiment();
  const auto rp = resolve_point(e, SweepAxis::bT, 0.5);
  TestConfig cfg;
  EvalOptions opts{SpatialMode::IndependentVariation, 20000, 1};
  const auto er = empirical_error_rates(rp.responses[0], rp.responses[5], rp.params, cfg, opts, RngStream(2, 2));
  CHECK(std::abs(er.alpha_hat - 0.01) < 4 * std::sqrt(0.01 * 0.99 / 20000));
  CHECK(er.trials == 20000);
}

TEST_CASE("separation rule") {
  CHECK(separated(0.1, 0.01, 0.15, 0.01));
  CHECK_FALSE(separated(0.1, 0.01, 0.14, 0.01));
  CHECK_FALSE(separated(0.2, 0.0, 0.1, 0.0));
}

TEST_CASE("experiment validation") {
  Experiment e = small_experiment();
  e.bob = {20, 1, 1};
  CHECK_THROWS(e.validate());
  e = small_experiment();
  e.grid.nx = 100;
  CHECK_THROWS(e.validate());
  e = small_experiment();
  e.bob = e.grid.point(3);
  CHECK_THROWS(e.validate());
}
