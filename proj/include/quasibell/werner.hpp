#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "quasibell/bell.hpp"
#include "quasibell/errors.hpp"

// Noise analysis on the Werner family ρ(z) = (1-z)I/4 + z|singlet><singlet|:
// every singlet correlator, and hence the whole quantum value, scales
// linearly by z. The classical bound stays 1, so a violating instance stops
// violating exactly at z = 1/|<K_N>|.

namespace quasibell {

/// Smallest noise parameter at which the instance still reaches the classical
/// bound: 1/|quantum_value|. Requires a violating instance.
inline double violation_threshold(const QuasiBellInstance& inst) {
  const double v = std::abs(quantum_value(inst));
  if (v <= 1.0) throw NoViolation("instance does not violate the classical bound");
  return 1.0 / v;
}

/// Bisection on z -> z|quantum_value| - 1; confirms the closed form.
inline double threshold_by_bisection(const QuasiBellInstance& inst, double tol = 1e-12) {
  const double v = std::abs(quantum_value(inst));
  if (v <= 1.0) throw NoViolation("instance does not violate the classical bound");
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (mid * v >= 1.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct WernerSweep {
  int order = 0;
  QuasiBellInstance instance;
  std::vector<double> z_grid;
  std::vector<double> values;  // |<K_N>| at each z
  std::optional<double> threshold;
};

/// |werner_value| across a z grid, with the violation threshold when one
/// exists. Values are linear in z by construction.
inline WernerSweep sweep(const QuasiBellInstance& inst, const std::vector<double>& z_grid) {
  for (double z : z_grid)
    if (z < 0.0 || z > 1.0) throw OutOfRange("sweep grid points must lie in [0,1]");
  WernerSweep s;
  s.order = inst.order;
  s.instance = inst;
  s.z_grid = z_grid;
  const double v = std::abs(quantum_value(inst));
  s.values.reserve(z_grid.size());
  for (double z : z_grid) s.values.push_back(z * v);
  if (v > 1.0) s.threshold = 1.0 / v;
  return s;
}

}  // namespace quasibell
