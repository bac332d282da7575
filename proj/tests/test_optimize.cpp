#include <doctest.h>

#include <cmath>

#include "quasibell/optimize.hpp"

using namespace quasibell;

namespace {

OptimizeConfig quick_config(int restarts, Ansatz ansatz = Ansatz::full) {
  OptimizeConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = 5;
  cfg.ansatz = ansatz;
  return cfg;
}

std::vector<Direction> random_dirs(Rng& rng, int n) {
  std::vector<Direction> d;
  for (int i = 0; i < n; ++i) d.push_back(random_unit_direction(rng));
  return d;
}

}  // namespace

TEST_CASE("spherical parameterization round trip") {
  Rng rng = make_rng(51);
  for (int t = 0; t < 100; ++t) {
    const Direction d = random_unit_direction(rng);
    const Direction back = direction_from_spherical(spherical_from_direction(d));
    CHECK((d - back).norm() <= 1e-12);
    CHECK(back.is_unit(1e-12));
  }
}

TEST_CASE("order 0 optimum is 1") {
  const auto res = maximize(0, quick_config(4));
  CHECK(std::abs(res.best_value) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.converged);
}

TEST_CASE("order 1 recovers the CHSH optimum") {
  const auto res = maximize(1, quick_config(8));
  CHECK(std::abs(res.best_value) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(std::abs(res.best_value) <= std::sqrt(2.0) + 1e-9);
}

TEST_CASE("order 2 recovers 3/2 and the coplanar geometry") {
  const auto res = maximize(2, quick_config(8));
  CHECK(std::abs(res.best_value) == doctest::Approx(1.5).epsilon(1e-4));

  // Gauge-fixed output: a0 along +x, a1 in the xy-plane.
  CHECK(res.best_a_dirs[0].x == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(res.best_a_dirs[1].z) <= 1e-6);

  const auto cop = coplanarity_report(res);
  CHECK(cop.max_plane_distance <= 1e-3);

  // Recovered geometry matches the known inner-product matrix up to signs
  // fixed by the gauge.
  const std::array<std::array<double, 3>, 3> expected{
      {{-1.0, -0.5, -0.5}, {-0.5, 0.5, -1.0}, {-0.5, -1.0, 0.5}}};
  // The optimum is unique only up to relabeling a1<->a2 (and b1<->b2); compare
  // the multiset of |inner products| row by row after sorting.
  std::array<double, 9> got{}, want{};
  int n = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      got[static_cast<std::size_t>(n)] =
          dot(res.best_a_dirs[static_cast<std::size_t>(i)], res.best_b_dirs[static_cast<std::size_t>(j)]);
      want[static_cast<std::size_t>(n)] = expected[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      ++n;
    }
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 9; ++i)
    CHECK(got[static_cast<std::size_t>(i)] ==
          doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-2));
}

TEST_CASE("reduced ansatz does not beat the full ansatz") {
  for (int order : {2, 3}) {
    const auto reduced = maximize(order, quick_config(8, Ansatz::reduced));
    const auto full = maximize(order, quick_config(8, Ansatz::full));
    CHECK(std::abs(reduced.best_value) <= std::abs(full.best_value) + 1e-6);
  }
}

TEST_CASE("results are reproducible and worker-count independent") {
  const auto a = maximize(2, quick_config(6));
  const auto b = maximize(2, quick_config(6));
  CHECK(a.best_value == b.best_value);
  for (std::size_t i = 0; i < a.best_a_dirs.size(); ++i) {
    CHECK(a.best_a_dirs[i].x == b.best_a_dirs[i].x);
    CHECK(a.best_a_dirs[i].y == b.best_a_dirs[i].y);
    CHECK(a.best_a_dirs[i].z == b.best_a_dirs[i].z);
  }

  OptimizeConfig parallel = quick_config(6);
  parallel.jobs = 2;
  const auto c = maximize(2, parallel);
  CHECK(c.best_value == a.best_value);
}

TEST_CASE("reported value matches re-evaluation of the reported directions") {
  const auto res = maximize(3, quick_config(6, Ansatz::reduced));
  const double v = quantum_value(QuasiBellInstance(3, res.best_a_dirs, res.best_b_dirs));
  CHECK(res.best_value == doctest::Approx(v).epsilon(1e-10));
}

TEST_CASE("exhausted budget returns best-so-far unconverged") {
  OptimizeConfig cfg = quick_config(2);
  cfg.max_evals = 20;
  const auto res = maximize(2, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.evaluations <= 2 * 20 + 60);  // per-restart cap plus initial simplex
  CHECK(res.best_value ==
        doctest::Approx(quantum_value(QuasiBellInstance(2, res.best_a_dirs, res.best_b_dirs)))
            .epsilon(1e-10));
}

TEST_CASE("random search never beats the multistart optimum") {
  Rng rng = make_rng(52);
  for (int order = 1; order <= 4; ++order) {
    const auto res = maximize(order, quick_config(order <= 2 ? 8 : 16, Ansatz::reduced));
    QuasiBellEvaluator ev(order);
    double best_random = 0.0;
    for (int s = 0; s < 100000; ++s) {
      const auto a = random_dirs(rng, order + 1);
      const auto b = random_dirs(rng, order + 1);
      best_random = std::max(best_random, std::abs(ev.value(a, b)));
    }
    CHECK(best_random <= std::abs(res.best_value) + 1e-3);
  }
}

TEST_CASE("stationarity at the known optima") {
  const auto hex = local_stationarity_check(hexagon_settings());
  CHECK(hex.gradient_norm <= 1e-6);
  // Local maximum: no significantly positive curvature beyond gauge noise.
  CHECK(hex.max_curvature <= 1e-3);
  CHECK(hex.min_curvature < -0.1);

  const auto chsh = local_stationarity_check(chsh_settings());
  CHECK(chsh.gradient_norm <= 1e-6);

  Rng rng = make_rng(53);
  const QuasiBellInstance random_inst(2, random_dirs(rng, 3), random_dirs(rng, 3));
  CHECK(local_stationarity_check(random_inst).gradient_norm > 1e-3);
}

TEST_CASE("coplanarity of higher-order optima") {
  const auto res = maximize(4, quick_config(16, Ansatz::reduced));
  const auto cop = coplanarity_report(res);
  CHECK(cop.max_plane_distance <= 1e-2);
  CHECK(cop.max_tail_angle_a <= 1e-2);
  CHECK(cop.max_tail_angle_b <= 1e-2);
}
