#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "quasibell/bell.hpp"
#include "quasibell/joint.hpp"
#include "quasibell/optimize.hpp"
#include "quasibell/symmetrize.hpp"
#include "quasibell/werner.hpp"

// End-to-end verification suite: each check pins one headline number or
// invariant of the construction, with its tolerance fixed here. The
// acceptance binary and the CLI's selftest subcommand both run this list.

namespace quasibell {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  int max_table_order = 6;       // reproduce optimizer values through this order
  bool extended_orders = false;  // also run orders 7..10 at the looser tolerance
  int restarts = 64;
  std::uint64_t seed = 1;
  int jobs = 1;
};

namespace selftest_detail {

class Check {
 public:
  explicit Check(std::string name) : name_(std::move(name)) {}

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }

  void note(const std::string& text) {
    if (!notes_.empty()) notes_ += "; ";
    notes_ += text;
  }

  CheckResult finish(double seconds) const {
    CheckResult r;
    r.name = name_;
    r.passed = passed_;
    r.detail = passed_ ? notes_ : failures_ + (notes_.empty() ? "" : " | " + notes_);
    r.seconds = seconds;
    return r;
  }

 private:
  std::string name_;
  bool passed_ = true;
  std::string notes_;
  std::string failures_;
};

inline std::string fmt(double v, int precision = 9) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

template <typename Fn>
CheckResult timed(const std::string& name, Fn&& body) {
  Check c(name);
  const auto start = std::chrono::steady_clock::now();
  body(c);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  return c.finish(dt.count());
}

}  // namespace selftest_detail

inline std::vector<CheckResult> run_acceptance_checks(const SelftestOptions& opts = {}) {
  using selftest_detail::fmt;
  using selftest_detail::timed;
  std::vector<CheckResult> results;

  results.push_back(timed("chsh-value", [&](selftest_detail::Check& c) {
    const double v = quantum_value(chsh_settings());
    const double target = std::sqrt(2.0);
    c.require(std::abs(std::abs(v) - target) <= 1e-9,
              "|<K_1>| = " + fmt(std::abs(v)) + " differs from sqrt(2)");
    c.note("|<K_1>| = " + fmt(std::abs(v)) + " (signed " + fmt(v) + "), target sqrt(2), tol 1e-9");
    const auto bound = classical_bound_verify(1);
    c.require(bound.all_unit_magnitude && bound.min_value == -1.0 && bound.max_value == 1.0,
              "classical enumeration bound not exactly 1");
    c.note("classical min/max = " + fmt(bound.min_value) + "/" + fmt(bound.max_value) + " over " +
           std::to_string(bound.assignments) + " assignments");
  }));

  results.push_back(timed("order2-value", [&](selftest_detail::Check& c) {
    const auto inst = hexagon_settings();
    const double v = quantum_value(inst);
    c.require(std::abs(v - 1.5) <= 1e-12, "<K_2> = " + fmt(v, 15) + " is not 3/2");
    c.note("<K_2> = " + fmt(v, 15) + ", target 1.5, tol 1e-12");

    const auto a012 = symmetrize_triple(inst.a_dirs[0], inst.a_dirs[1], inst.a_dirs[2]);
    const auto b012 = symmetrize_triple(inst.b_dirs[0], inst.b_dirs[1], inst.b_dirs[2]);
    c.require(a012.vector.norm() <= 1e-12, "a-product vector does not vanish");
    c.require(b012.vector.norm() <= 1e-12, "b-product vector does not vanish");
    c.note("|a012| = " + fmt(a012.vector.norm(), 3) + ", |b012| = " + fmt(b012.vector.norm(), 3));

    const double expected[3][3] = {{-1.0, -0.5, -0.5}, {-0.5, 0.5, -1.0}, {-0.5, -1.0, 0.5}};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(dot(inst.a_dirs[static_cast<std::size_t>(i)],
                                             inst.b_dirs[static_cast<std::size_t>(j)]) -
                                         expected[i][j]));
    c.require(worst <= 1e-12, "inner-product matrix deviates by " + fmt(worst, 3));
    c.note("inner-product matrix max deviation " + fmt(worst, 3) + ", tol 1e-12");
  }));

  results.push_back(timed("test-expressions", [&](selftest_detail::Check& c) {
    const auto grid = test_expression_table();
    const std::array<std::array<int, 8>, 4> expected{{{4, 0, 0, 0, 0, 0, 0, -4},
                                                      {0, 0, 4, 0, 0, -4, 0, 0},
                                                      {0, 4, 0, 0, 0, 0, -4, 0},
                                                      {0, 0, 0, 4, -4, 0, 0, 0}}};
    c.require(grid == expected, "4x8 expression grid differs from the reference");
    c.note("4x8 grid of {0,+-4} matches exactly; one nonzero per column");
  }));

  results.push_back(timed("classical-certificate", [&](selftest_detail::Check& c) {
    long long total = 0;
    for (int order = 0; order <= 8; ++order) {
      const auto rep = classical_bound_verify(order);
      total += rep.assignments;
      c.require(rep.all_unit_magnitude, "order " + std::to_string(order) + ": |K| != 1 somewhere");
      c.require(rep.min_value == -1.0 && rep.max_value == 1.0,
                "order " + std::to_string(order) + ": min/max not exactly -1/+1");
    }
    c.note("K_N = +-1 exactly on all assignments, orders 0..8 (" + std::to_string(total) +
           " assignments total)");
  }));

  results.push_back(timed("optimizer-table", [&](selftest_detail::Check& c) {
    struct Target {
      int order;
      double value;
      double tol;
    };
    std::vector<Target> targets{{0, 1.0, 1e-3},   {1, 1.414, 5e-3}, {2, 1.500, 5e-3},
                                {3, 1.432, 5e-3}, {4, 1.469, 5e-3}, {5, 1.443, 5e-3},
                                {6, 1.467, 5e-3}};
    if (opts.extended_orders)
      for (const Target t : {Target{7, 1.45, 1e-2}, Target{8, 1.467, 1e-2}, Target{9, 1.455, 1e-2},
                             Target{10, 1.469, 1e-2}})
        targets.push_back(t);
    std::string line;
    for (const auto& t : targets) {
      if (t.order > opts.max_table_order && !(opts.extended_orders && t.order >= 7)) continue;
      OptimizeConfig cfg;
      cfg.restarts = opts.restarts;
      cfg.seed = opts.seed;
      cfg.jobs = opts.jobs;
      cfg.ansatz = t.order >= 3 ? Ansatz::reduced : Ansatz::full;
      const auto res = maximize(t.order, cfg);
      const double got = std::abs(res.best_value);
      c.require(std::abs(got - t.value) <= t.tol,
                "order " + std::to_string(t.order) + ": " + fmt(got, 6) + " vs " + fmt(t.value, 6) +
                    " (tol " + fmt(t.tol, 2) + ")");
      if (!line.empty()) line += ", ";
      line += "N=" + std::to_string(t.order) + ": " + fmt(got, 4);
    }
    c.note(line);
  }));

  results.push_back(timed("negative-joint-entry", [&](selftest_detail::Check& c) {
    const double r = 1.0 / std::sqrt(2.0);
    const auto t = symmetrized_pair_joint_table({r, r, 0.0}, x_axis(), y_axis());
    const double target = (1.0 - std::sqrt(2.0)) / 4.0;
    c.require(std::abs(t.entry(-1, -1) - target) <= 1e-12,
              "entry (-,-) = " + fmt(t.entry(-1, -1), 12));
    c.note("entry (-,-) = " + fmt(t.entry(-1, -1), 12) + " = (1-sqrt(2))/4, tol 1e-12");
  }));

  results.push_back(timed("werner-thresholds", [&](selftest_detail::Check& c) {
    const double t2 = violation_threshold(hexagon_settings());
    const double t1 = violation_threshold(chsh_settings());
    c.require(std::abs(t2 - 2.0 / 3.0) <= 1e-9, "order-2 threshold " + fmt(t2, 12));
    c.require(std::abs(t1 - 1.0 / std::sqrt(2.0)) <= 1e-9, "order-1 threshold " + fmt(t1, 12));
    c.note("thresholds: order 2 -> " + fmt(t2, 10) + " (2/3), order 1 -> " + fmt(t1, 10) +
           " (1/sqrt(2)), tol 1e-9");
  }));

  results.push_back(timed("moyal-equivalence", [&](selftest_detail::Check& c) {
    Rng rng = make_rng(opts.seed + 100);
    double worst_entry = 0.0, worst_scalar = 0.0;
    for (int t = 0; t < 20; ++t) {
      const ProductSpec p({random_unit_direction(rng), random_unit_direction(rng),
                           random_unit_direction(rng)});
      const auto moyal = moyal_product_operator(p, 1e-2);
      const auto closed = symmetrize_triple(p.directions[0], p.directions[1], p.directions[2]);
      const double entry_diff = moyal.as_operator().max_abs_diff(closed.as_operator());
      worst_entry = std::max(worst_entry, entry_diff);
      worst_scalar = std::max(worst_scalar, std::abs(moyal.scalar));
    }
    c.require(worst_entry <= 1e-5, "finite-difference operator off by " + fmt(worst_entry, 3));
    c.require(worst_scalar <= 1e-6, "identity-part residue " + fmt(worst_scalar, 3));
    c.note("20 random triples: worst entry deviation " + fmt(worst_entry, 3) +
           " (tol 1e-5), worst identity residue " + fmt(worst_scalar, 3) + " (tol 1e-6)");
  }));

  results.push_back(timed("pairing-oracle", [&](selftest_detail::Check& c) {
    Rng rng = make_rng(opts.seed + 200);
    double worst = 0.0;
    for (int k = 2; k <= 7; ++k) {
      for (int t = 0; t < 100; ++t) {
        std::vector<Direction> dirs;
        for (int i = 0; i < k; ++i) dirs.push_back(random_unit_direction(rng));
        const ProductSpec p(dirs);
        const auto brute = symmetrize_bruteforce(p);
        const auto pairing = symmetrize_pairing(p);
        const double diff = std::max(std::abs(brute.scalar - pairing.scalar),
                                     (brute.vector - pairing.vector).norm());
        worst = std::max(worst, diff);
        c.require(diff <= 1e-10, "k=" + std::to_string(k) + " pairing deviates by " + fmt(diff, 3));
        if (k % 2 == 0)
          c.require(brute.vector.norm() <= 1e-10, "even k with nonzero vector part");
        else
          c.require(std::abs(brute.scalar) <= 1e-10, "odd k with nonzero identity part");
      }
    }
    c.note("600 instances, k = 2..7: worst pairing-vs-permutation deviation " + fmt(worst, 3) +
           " (tol 1e-10); parity law held throughout");
  }));

  results.push_back(timed("joint-properties", [&](selftest_detail::Check& c) {
    Rng rng = make_rng(opts.seed + 300);
    int pair_counterexamples = 0;
    for (int t = 0; t < 500; ++t) {
      const auto table =
          noncommuting_pair_table(random_ball_vector(rng), random_unit_direction(rng),
                                  random_unit_direction(rng), CorrelatorSpec(random_in(rng, -1, 1)));
      if (!frechet_pair_check(table).equivalent) ++pair_counterexamples;
    }
    c.require(pair_counterexamples == 0,
              std::to_string(pair_counterexamples) + " pair equivalence counterexamples");

    int triple_counterexamples = 0;
    for (int t = 0; t < 500; ++t) {
      const Direction u = random_ball_vector(rng);
      const std::array<Direction, 3> dirs{random_unit_direction(rng), random_unit_direction(rng),
                                          random_unit_direction(rng)};
      const CorrelatorSpec cs(random_in(rng, -1, 1), random_in(rng, -1, 1), random_in(rng, -1, 1),
                              random_in(rng, -1, 1));
      const auto t3 = noncommuting_triple_table(u, dirs, cs);
      const std::array<OutcomeTable, 3> pairs{
          noncommuting_pair_table(u, dirs[0], dirs[1], CorrelatorSpec(cs.pair[0])),
          noncommuting_pair_table(u, dirs[0], dirs[2], CorrelatorSpec(cs.pair[1])),
          noncommuting_pair_table(u, dirs[1], dirs[2], CorrelatorSpec(cs.pair[2]))};
      const auto rep = frechet_triple_check(t3, pairs);
      if (!rep.upper_equivalent_to_positivity || !rep.lower_implied_by_positivity)
        ++triple_counterexamples;
    }
    c.require(triple_counterexamples == 0,
              std::to_string(triple_counterexamples) + " triple bound counterexamples");

    double worst_collapse = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Direction u = random_unit_direction(rng);
      const Direction a1 = random_unit_direction(rng);
      const Interval iv = positivity_interval(u, u, a1);
      const double independence = dot(u, u) * dot(a1, u);
      worst_collapse = std::max(worst_collapse, iv.width());
      worst_collapse = std::max(worst_collapse, std::abs(iv.lo - independence));
    }
    c.require(worst_collapse <= 1e-9, "pure-state interval fails to collapse: " +
                                          fmt(worst_collapse, 3));
    c.note("500 pair instances: positivity <-> bound equivalence, 0 counterexamples; "
           "500 triple instances: upper bound <-> positivity and weaker lower bound, 0 "
           "counterexamples; 100 pure states: interval collapse within " +
           fmt(worst_collapse, 3));
  }));

  results.push_back(timed("stationarity", [&](selftest_detail::Check& c) {
    const auto rep = local_stationarity_check(hexagon_settings());
    c.require(rep.gradient_norm <= 1e-6, "gradient norm " + fmt(rep.gradient_norm, 3));
    c.note("gradient norm at the order-2 optimum = " + fmt(rep.gradient_norm, 3) +
           " (tol 1e-6); curvature range [" + fmt(rep.min_curvature, 3) + ", " +
           fmt(rep.max_curvature, 3) + "]");
  }));

  return results;
}

}  // namespace quasibell
