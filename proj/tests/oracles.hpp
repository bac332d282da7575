#pragma once

// Independent reference implementations used only by the test suites. These
// deliberately avoid the closed forms in the library so agreement is a real
// cross-check, not a tautology.

#include <cmath>
#include <complex>
#include <vector>

#include "quasibell/bell.hpp"
#include "quasibell/geometry.hpp"
#include "quasibell/pauli.hpp"

namespace oracles {

using quasibell::Complex;
using quasibell::Direction;
using quasibell::Operator2;
using quasibell::Operator4;
using quasibell::Rng;

/// exp(i h) by scaling-and-squaring with a plain Taylor series.
inline Operator2 matrix_exp_i_series(const Operator2& h) {
  Operator2 x = Complex(0.0, 1.0) * h;
  double norm = 0.0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) norm = std::max(norm, std::abs(x(r, c)));
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  x = x * Complex(std::ldexp(1.0, -squarings));

  Operator2 sum = Operator2::identity();
  Operator2 term = Operator2::identity();
  for (int n = 1; n <= 24; ++n) {
    term = term * x * Complex(1.0 / n);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline Operator2 random_hermitian2(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Operator2 a;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) a(r, c) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

inline Operator4 random_hermitian4(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Operator4 a;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) a(r, c) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

/// Components of the order-N product vector built symbolically from the
/// recursion A_n = [1; a_0 a_n] ⊗ A_{n-1}, cancelling squared factors.
/// Each component is the sorted list of surviving observable indices.
inline std::vector<std::vector<int>> symbolic_factor_sets(int order) {
  std::vector<std::vector<int>> comps{{0}};
  for (int n = 1; n <= order; ++n) {
    std::vector<std::vector<int>> next = comps;
    for (const auto& c : comps) {
      // Multiply by a_0 a_n with x^2 = 1: toggle membership of 0 and n.
      std::vector<int> t;
      bool saw0 = false;
      for (int v : c) {
        if (v == 0) {
          saw0 = true;
          continue;
        }
        t.push_back(v);
      }
      if (!saw0) t.insert(t.begin(), 0);
      t.push_back(n);  // n is new at this level, never cancels
      std::sort(t.begin(), t.end());
      next.push_back(t);
    }
    comps = std::move(next);
  }
  return comps;
}

/// Explicit tensor power of the scaled sign matrix M = ½[[1,1],[1,-1]].
inline std::vector<std::vector<double>> explicit_scaled_hadamard(int order) {
  std::vector<std::vector<double>> m{{1.0}};
  for (int n = 0; n < order; ++n) {
    const std::size_t d = m.size();
    std::vector<std::vector<double>> next(2 * d, std::vector<double>(2 * d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        next[i][j] = 0.5 * m[i][j];
        next[i][j + d] = 0.5 * m[i][j];
        next[i + d][j] = 0.5 * m[i][j];
        next[i + d][j + d] = -0.5 * m[i][j];
      }
    m = std::move(next);
  }
  return m;
}

/// Quantum value by the direct double sum over (i, j) with brute-force
/// symmetrization of each factor set; no transform tricks shared with the
/// library evaluator.
inline double quantum_value_direct(const quasibell::QuasiBellInstance& inst) {
  const auto m = explicit_scaled_hadamard(inst.order);
  const std::size_t dim = m.size();
  std::vector<Direction> alpha(dim), beta(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto set = quasibell::factor_set(inst.order, static_cast<std::uint32_t>(i));
    std::vector<Direction> da, db;
    for (int d : set) {
      da.push_back(inst.a_dirs[static_cast<std::size_t>(d)]);
      db.push_back(inst.b_dirs[static_cast<std::size_t>(d)]);
    }
    alpha[i] = quasibell::symmetrize_bruteforce(quasibell::ProductSpec(da)).vector;
    beta[i] = quasibell::symmetrize_bruteforce(quasibell::ProductSpec(db)).vector;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      total += m[i][j] * quasibell::singlet_pair_expectation(alpha[i], beta[j]);
  return total;
}

}  // namespace oracles
