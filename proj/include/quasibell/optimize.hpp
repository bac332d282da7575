#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include "quasibell/bell.hpp"
#include "quasibell/errors.hpp"
#include "quasibell/geometry.hpp"

// Maximization of |<K_N>| over the 2(N+1) measurement directions with a
// multistart downhill simplex in spherical coordinates. The objective depends
// only on inner products, so it is invariant under one global rotation of all
// vectors; reported optima are gauge-fixed with â0 along x and â1 in the
// xy-plane.

namespace quasibell {

/// One (theta, phi) pair per direction; the induced directions are unit-norm
/// by construction, so no constraint handling is needed.
struct SphericalParams {
  std::vector<Spherical> coords;

  static SphericalParams from_directions(const std::vector<Direction>& dirs) {
    SphericalParams p;
    p.coords.reserve(dirs.size());
    for (const auto& d : dirs) p.coords.push_back(spherical_from_direction(d));
    return p;
  }

  std::vector<Direction> to_directions() const {
    std::vector<Direction> dirs;
    dirs.reserve(coords.size());
    for (const auto& s : coords) dirs.push_back(direction_from_spherical(s));
    return dirs;
  }

  std::vector<double> flat() const {
    std::vector<double> v;
    v.reserve(2 * coords.size());
    for (const auto& s : coords) {
      v.push_back(s.theta);
      v.push_back(s.phi);
    }
    return v;
  }

  static SphericalParams from_flat(const std::vector<double>& v) {
    SphericalParams p;
    p.coords.resize(v.size() / 2);
    for (std::size_t i = 0; i < p.coords.size(); ++i) p.coords[i] = {v[2 * i], v[2 * i + 1]};
    return p;
  }
};

enum class Ansatz { full, reduced };

struct OptimizeConfig {
  int restarts = 0;  // 0 selects the per-order default (64 up to order 4, then 256)
  std::uint64_t seed = 1;
  double tol = 1e-9;
  long long max_evals = 40000;  // per restart
  Ansatz ansatz = Ansatz::full;
  int jobs = 1;
};

struct RestartSummary {
  int restart = 0;
  double value = 0.0;
  long long evaluations = 0;
  bool converged = false;
};

struct OptimizationResult {
  int order = 0;
  double best_value = 0.0;  // signed; |best_value| is the maximized violation
  std::vector<Direction> best_a_dirs;
  std::vector<Direction> best_b_dirs;
  int restarts_used = 0;
  long long evaluations = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<RestartSummary> restart_trace;
};

namespace detail {

struct SimplexOutcome {
  std::vector<double> x;
  double f = 0.0;
  long long evals = 0;
  bool converged = false;
};

/// Standard Nelder-Mead on R^n (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). Stops when the simplex's objective spread falls below tol.
template <typename F>
SimplexOutcome nelder_mead(F&& f, const std::vector<double>& start, double step, double tol,
                           long long max_evals) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> xs(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step;

  std::vector<double> fs(n + 1);
  long long evals = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    fs[i] = f(xs[i]);
    ++evals;
  }
  std::vector<std::size_t> ord(n + 1);

  bool converged = false;
  while (evals < max_evals) {
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = ord.front();
    const std::size_t worst = ord.back();
    const std::size_t second_worst = ord[n - 1];
    if (fs[worst] - fs[best] <= tol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t c = 0; c < n; ++c) centroid[c] += xs[i][c];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    const auto blend = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t c = 0; c < n; ++c) x[c] = centroid[c] + t * (xs[worst][c] - centroid[c]);
      return x;
    };

    std::vector<double> reflected = blend(-1.0);
    const double fr = f(reflected);
    ++evals;
    if (fr < fs[best]) {
      std::vector<double> expanded = blend(-2.0);
      const double fe = f(expanded);
      ++evals;
      if (fe < fr) {
        xs[worst] = std::move(expanded);
        fs[worst] = fe;
      } else {
        xs[worst] = std::move(reflected);
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second_worst]) {
      xs[worst] = std::move(reflected);
      fs[worst] = fr;
      continue;
    }
    const bool outside = fr < fs[worst];
    std::vector<double> contracted = blend(outside ? -0.5 : 0.5);
    const double fc = f(contracted);
    ++evals;
    if (fc < (outside ? fr : fs[worst])) {
      xs[worst] = std::move(contracted);
      fs[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t c = 0; c < n; ++c) xs[i][c] = xs[best][c] + 0.5 * (xs[i][c] - xs[best][c]);
      fs[i] = f(xs[i]);
      ++evals;
    }
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fs[i] < fs[arg]) arg = i;
  return {xs[arg], fs[arg], evals, converged};
}

/// Expands a flat spherical parameter vector into the instance's direction
/// lists, duplicating the shared tail direction in the reduced ansatz.
class DirectionLayout {
 public:
  DirectionLayout(int order, Ansatz ansatz)
      : order_(order),
        reduced_(ansatz == Ansatz::reduced && order >= 2),
        unique_per_party_(reduced_ ? 3 : order + 1) {}

  int params() const { return 4 * unique_per_party_; }

  void expand(const std::vector<double>& flat, std::vector<Direction>& a,
              std::vector<Direction>& b) const {
    a.resize(static_cast<std::size_t>(order_) + 1);
    b.resize(static_cast<std::size_t>(order_) + 1);
    const auto dir_at = [&](int slot) {
      return direction_from_spherical({flat[2 * static_cast<std::size_t>(slot)],
                                       flat[2 * static_cast<std::size_t>(slot) + 1]});
    };
    for (int i = 0; i <= order_; ++i) {
      const int slot_a = std::min(i, unique_per_party_ - 1);
      const int slot_b = unique_per_party_ + std::min(i, unique_per_party_ - 1);
      a[static_cast<std::size_t>(i)] = dir_at(slot_a);
      b[static_cast<std::size_t>(i)] = dir_at(slot_b);
    }
  }

  std::vector<double> pack(const std::vector<Direction>& a,
                           const std::vector<Direction>& b) const {
    std::vector<Direction> unique;
    for (int i = 0; i < unique_per_party_; ++i) unique.push_back(a[static_cast<std::size_t>(i)]);
    for (int i = 0; i < unique_per_party_; ++i) unique.push_back(b[static_cast<std::size_t>(i)]);
    return SphericalParams::from_directions(unique).flat();
  }

 private:
  int order_;
  bool reduced_;
  int unique_per_party_;
};

/// Eigenvalues (ascending) of a dense symmetric matrix by cyclic Jacobi;
/// optionally accumulates the rotations so columns of *vectors are the
/// corresponding eigenvectors.
inline std::vector<double> jacobi_symmetric(std::vector<double> a, int n,
                                            std::vector<double>* vectors = nullptr) {
  const auto at = [&](int r, int c) -> double& {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(c)];
  };
  std::vector<double> v;
  if (vectors) {
    v.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      v[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
          1.0;
  }
  const auto vat = [&](int r, int c) -> double& {
    return v[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(c)];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(r, q) = s * arp + c * arq;
        }
        for (int col = 0; col < n; ++col) {
          const double apc = at(p, col);
          const double aqc = at(q, col);
          at(p, col) = c * apc - s * aqc;
          at(q, col) = s * apc + c * aqc;
        }
        if (vectors)
          for (int r = 0; r < n; ++r) {
            const double vrp = vat(r, p);
            const double vrq = vat(r, q);
            vat(r, p) = c * vrp - s * vrq;
            vat(r, q) = s * vrp + c * vrq;
          }
      }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return at(x, x) < at(y, y); });
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = at(order[i], order[i]);
  if (vectors) {
    vectors->assign(v.size(), 0.0);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r)
        (*vectors)[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(c)] = vat(r, order[c]);
  }
  return ev;
}

/// Rotation taking a0 to +x and placing a1 in the xy-plane with positive y.
inline Mat3 gauge_rotation(const Direction& a0, const Direction& a1) {
  const Direction e1 = a0.normalized();
  Direction t = a1 - dot(a1, e1) * e1;
  if (t.norm() < 1e-9) {
    // a1 parallel to a0: any orthogonal completion works.
    t = std::abs(e1.x) < 0.9 ? cross(e1, x_axis()) : cross(e1, y_axis());
  }
  const Direction e2 = t.normalized();
  const Direction e3 = cross(e1, e2);
  Mat3 r;
  r(0, 0) = e1.x;
  r(0, 1) = e1.y;
  r(0, 2) = e1.z;
  r(1, 0) = e2.x;
  r(1, 1) = e2.y;
  r(1, 2) = e2.z;
  r(2, 0) = e3.x;
  r(2, 1) = e3.y;
  r(2, 2) = e3.z;
  return r;
}

}  // namespace detail

struct StationarityReport {
  double gradient_norm = 0.0;     // l2 norm of the central-difference gradient
  double gradient_max_abs = 0.0;  // largest single component
  double min_curvature = 0.0;     // extreme eigenvalue estimates of the Hessian
  double max_curvature = 0.0;     // in spherical coordinates
};

/// Central-difference gradient and curvature of the signed quantum value with
/// respect to all 2(N+1) direction angles at the given instance.
inline StationarityReport local_stationarity_check(const QuasiBellInstance& inst,
                                                   double grad_step = 1e-4,
                                                   double hess_step = 1e-3) {
  QuasiBellEvaluator ev(inst.order);
  std::vector<Direction> dirs = inst.a_dirs;
  dirs.insert(dirs.end(), inst.b_dirs.begin(), inst.b_dirs.end());
  std::vector<double> x0 = SphericalParams::from_directions(dirs).flat();
  const std::size_t n = x0.size();

  const auto f = [&](const std::vector<double>& x) {
    const std::vector<Direction> all = SphericalParams::from_flat(x).to_directions();
    const auto mid = all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2);
    const std::vector<Direction> av(all.begin(), mid);
    const std::vector<Direction> bv(mid, all.end());
    return ev.value(av, bv);
  };

  StationarityReport rep;
  std::vector<double> x = x0;
  double grad_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x0[i] + grad_step;
    const double fp = f(x);
    x[i] = x0[i] - grad_step;
    const double fm = f(x);
    x[i] = x0[i];
    const double g = (fp - fm) / (2.0 * grad_step);
    grad_sq += g * g;
    rep.gradient_max_abs = std::max(rep.gradient_max_abs, std::abs(g));
  }
  rep.gradient_norm = std::sqrt(grad_sq);

  const double f0 = f(x0);
  std::vector<double> hess(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x0[i] + hess_step;
    const double fp = f(x);
    x[i] = x0[i] - hess_step;
    const double fm = f(x);
    x[i] = x0[i];
    hess[i * n + i] = (fp - 2.0 * f0 + fm) / (hess_step * hess_step);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      x[i] = x0[i] + hess_step;
      x[j] = x0[j] + hess_step;
      const double fpp = f(x);
      x[j] = x0[j] - hess_step;
      const double fpm = f(x);
      x[i] = x0[i] - hess_step;
      const double fmm = f(x);
      x[j] = x0[j] + hess_step;
      const double fmp = f(x);
      x[i] = x0[i];
      x[j] = x0[j];
      const double hij = (fpp - fpm - fmp + fmm) / (4.0 * hess_step * hess_step);
      hess[i * n + j] = hij;
      hess[j * n + i] = hij;
    }
  const auto ev_h = detail::jacobi_symmetric(std::move(hess), static_cast<int>(n));
  rep.min_curvature = ev_h.front();
  rep.max_curvature = ev_h.back();
  return rep;
}

struct CoplanarityReport {
  double max_plane_distance = 0.0;  // worst |d·n| against the best-fit plane normal
  double max_tail_angle_a = 0.0;    // largest angle among a-directions 2..N
  double max_tail_angle_b = 0.0;
};

/// Plane fit (through the origin) of all optimal directions plus the spread of
/// the repeated tail directions the optimum is expected to share.
inline CoplanarityReport coplanarity_report(const OptimizationResult& r) {
  CoplanarityReport rep;
  std::vector<Direction> all = r.best_a_dirs;
  all.insert(all.end(), r.best_b_dirs.begin(), r.best_b_dirs.end());
  std::vector<double> scatter(9, 0.0);
  for (const auto& d : all) {
    const std::array<double, 3> v{d.x, d.y, d.z};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        scatter[static_cast<std::size_t>(3 * i + j)] += v[static_cast<std::size_t>(i)] *
                                                        v[static_cast<std::size_t>(j)];
  }
  std::vector<double> vecs;
  detail::jacobi_symmetric(scatter, 3, &vecs);
  const Direction normal{vecs[0], vecs[3], vecs[6]};  // column of smallest eigenvalue
  for (const auto& d : all)
    rep.max_plane_distance = std::max(rep.max_plane_distance, std::abs(dot(d, normal)));

  const auto tail_angle = [](const std::vector<Direction>& dirs) {
    double worst = 0.0;
    for (std::size_t k = 2; k < dirs.size(); ++k)
      for (std::size_t m = k + 1; m < dirs.size(); ++m)
        worst = std::max(worst, std::acos(std::clamp(dot(dirs[k], dirs[m]), -1.0, 1.0)));
    return worst;
  };
  rep.max_tail_angle_a = tail_angle(r.best_a_dirs);
  rep.max_tail_angle_b = tail_angle(r.best_b_dirs);
  return rep;
}

/// Multistart maximization of |<K_N>|. Restart 0 starts from the known
/// optimal settings of low orders (extended by repetition); the rest start
/// from seeded uniform directions. Identical seed and config give identical
/// results regardless of the worker count.
inline OptimizationResult maximize(int order, const OptimizeConfig& cfg = {}) {
  if (order < 0 || order > 10) throw OutOfRange("maximize supports orders 0..10");
  const int restarts = cfg.restarts > 0 ? cfg.restarts : (order <= 4 ? 64 : 256);
  const detail::DirectionLayout layout(order, cfg.ansatz);

  struct RestartOutcome {
    double best_abs = -1.0;
    double signed_value = 0.0;
    std::vector<Direction> a, b;
    long long evals = 0;
    bool converged = false;
  };
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));

  const auto run_block = [&](int begin, int end) {
    QuasiBellEvaluator ev(order);
    std::vector<Direction> a, b;
    const auto objective = [&](const std::vector<double>& flat) {
      layout.expand(flat, a, b);
      return -std::abs(ev.value(a, b));
    };
    for (int r = begin; r < end; ++r) {
      std::vector<double> start;
      if (r == 0) {
        QuasiBellInstance init =
            order == 0
                ? QuasiBellInstance(0, {x_axis()}, {-x_axis()})
                : (order == 1 ? chsh_settings() : repeated_hexagon_settings(order));
        start = layout.pack(init.a_dirs, init.b_dirs);
      } else {
        Rng rng = make_rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        std::vector<double> flat;
        for (int i = 0; i < layout.params() / 2; ++i) {
          const Spherical s = spherical_from_direction(random_unit_direction(rng));
          flat.push_back(s.theta);
          flat.push_back(s.phi);
        }
        start = std::move(flat);
      }
      auto sim = detail::nelder_mead(objective, start, 0.35, cfg.tol, cfg.max_evals);
      RestartOutcome& out = outcomes[static_cast<std::size_t>(r)];
      layout.expand(sim.x, a, b);
      out.signed_value = ev.value(a, b);
      out.best_abs = std::abs(out.signed_value);
      out.a = a;
      out.b = b;
      out.evals = sim.evals;
      out.converged = sim.converged;
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    run_block(0, restarts);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (restarts + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      const int begin = w * chunk;
      const int end = std::min(restarts, begin + chunk);
      if (begin < end) pool.emplace_back(run_block, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  int best_r = 0;
  long long total_evals = 0;
  for (int r = 0; r < restarts; ++r) {
    total_evals += outcomes[static_cast<std::size_t>(r)].evals;
    if (outcomes[static_cast<std::size_t>(r)].best_abs >
        outcomes[static_cast<std::size_t>(best_r)].best_abs)
      best_r = r;
  }
  const RestartOutcome& best = outcomes[static_cast<std::size_t>(best_r)];

  OptimizationResult res;
  res.order = order;
  res.restarts_used = restarts;
  res.evaluations = total_evals;
  res.seed = cfg.seed;
  res.converged = best.converged;
  res.restart_trace.reserve(static_cast<std::size_t>(restarts));
  for (int r = 0; r < restarts; ++r) {
    const RestartOutcome& o = outcomes[static_cast<std::size_t>(r)];
    res.restart_trace.push_back({r, o.signed_value, o.evals, o.converged});
  }

  // Gauge fix: rotate a0 to +x and a1 into the xy-plane, then re-evaluate.
  const Mat3 rot = detail::gauge_rotation(best.a[0], best.a.size() > 1 ? best.a[1] : y_axis());
  res.best_a_dirs.reserve(best.a.size());
  res.best_b_dirs.reserve(best.b.size());
  for (const auto& d : best.a) res.best_a_dirs.push_back(rot.apply(d).normalized());
  for (const auto& d : best.b) res.best_b_dirs.push_back(rot.apply(d).normalized());
  QuasiBellEvaluator ev(order);
  res.best_value = ev.value(res.best_a_dirs, res.best_b_dirs);

  const QuasiBellInstance best_inst(order, res.best_a_dirs, res.best_b_dirs);
  res.gradient_norm = local_stationarity_check(best_inst).gradient_norm;
  return res;
}

}  // namespace quasibell
