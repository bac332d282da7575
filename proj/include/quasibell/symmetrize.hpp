#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "quasibell/errors.hpp"
#include "quasibell/geometry.hpp"
#include "quasibell/joint.hpp"
#include "quasibell/pauli.hpp"

// Quantization of classical products of spin observables along directions
// â_0..â_{k-1}: the operator is the average of all orderings of the product
// (â_j·σ)···(â_m·σ). Pauli algebra collapses the average to a multiple of the
// identity (even k) or a single Pauli vector (odd k). Three evaluators are
// provided: the permutation average itself, a pairing sum over perfect
// matchings, and a finite-difference route through the characteristic
// function exp(i Σ θ_j â_j·σ).

namespace quasibell {

/// Ordered list of unit directions entering a product of spin observables.
struct ProductSpec {
  std::vector<Direction> directions;

  explicit ProductSpec(std::vector<Direction> dirs) : directions(std::move(dirs)) {
    for (const auto& d : directions) require_unit(d, "product factor");
  }

  int factor_count() const { return static_cast<int>(directions.size()); }
};

inline double double_factorial(int n) {
  double r = 1.0;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

/// Pairing sums over subsets of a fixed direction set, memoized by subset
/// mask so repeated product evaluations share work. A sum over perfect
/// matchings of a subset is ∏ of pairwise dots summed over all pairings;
/// odd-cardinality subsets have no perfect matching and sum to zero.
class PairingWorkspace {
 public:
  explicit PairingWorkspace(int n_dirs) : n_(n_dirs) {
    if (n_ < 1 || n_ > 20) throw OutOfRange("pairing workspace supports 1..20 directions");
    dirs_.resize(static_cast<std::size_t>(n_));
    dots_.resize(static_cast<std::size_t>(n_) * n_);
    memo_.resize(std::size_t{1} << n_);
    known_.resize(std::size_t{1} << n_);
  }

  int size() const { return n_; }
  const Direction& direction(int i) const { return dirs_[static_cast<std::size_t>(i)]; }

  void set_directions(const std::vector<Direction>& dirs) {
    if (static_cast<int>(dirs.size()) != n_)
      throw OutOfRange("direction count does not match workspace size");
    for (int i = 0; i < n_; ++i) dirs_[i] = dirs[static_cast<std::size_t>(i)];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) dots_[idx(i, j)] = dot(dirs_[i], dirs_[j]);
    std::fill(known_.begin(), known_.end(), char{0});
  }

  double matching_sum(std::uint32_t mask) {
    if (mask == 0) return 1.0;
    if (known_[mask]) return memo_[mask];
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    double total = 0.0;
    for (std::uint32_t m = rest; m != 0; m &= m - 1) {
      const int j = std::countr_zero(m);
      total += dots_[idx(i, j)] * matching_sum(rest & ~(std::uint32_t{1} << j));
    }
    known_[mask] = 1;
    memo_[mask] = total;
    return total;
  }

  /// Symmetrized product over the factors selected by mask.
  SymmetrizedOperator symmetrized(std::uint32_t mask) {
    const int k = std::popcount(mask);
    if (k == 0) return {1.0, {}};
    SymmetrizedOperator out;
    if (k % 2 == 0) {
      out.scalar = matching_sum(mask) / double_factorial(k - 1);
    } else {
      Direction v;
      for (std::uint32_t m = mask; m != 0; m &= m - 1) {
        const int u = std::countr_zero(m);
        v += matching_sum(mask & ~(std::uint32_t{1} << u)) * dirs_[static_cast<std::size_t>(u)];
      }
      out.vector = v * (1.0 / double_factorial(k));
    }
    return out;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<Direction> dirs_;
  std::vector<double> dots_;
  std::vector<double> memo_;
  std::vector<char> known_;
};

/// Permutation average (1/k!) Σ_π ∏_j (â_{π(j)}·σ). Ground truth for the
/// pairing evaluator; cost grows as k!, guarded at k = 9.
inline SymmetrizedOperator symmetrize_bruteforce(const ProductSpec& p,
                                                 bool override_guard = false) {
  const int k = p.factor_count();
  if (k < 1) throw OutOfRange("product needs at least one factor");
  if (k > 9 && !override_guard)
    throw TooManyFactors("factor count " + std::to_string(k) + " exceeds the k! guard");

  std::vector<Operator2> ops;
  ops.reserve(p.directions.size());
  for (const auto& d : p.directions) ops.push_back(pauli_dot(d));

  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Operator2 acc;
  std::size_t count = 0;
  do {
    Operator2 prod = ops[static_cast<std::size_t>(perm[0])];
    for (int j = 1; j < k; ++j) prod = prod * ops[static_cast<std::size_t>(perm[j])];
    acc += prod;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return decompose_pauli(acc * Complex(1.0 / static_cast<double>(count)));
}

/// Half the anticommutator of two spin observables: (â0·â1) I.
inline SymmetrizedOperator symmetrize_pair(const Direction& a0, const Direction& a1) {
  require_unit(a0, "symmetrize_pair a0");
  require_unit(a1, "symmetrize_pair a1");
  return {dot(a0, a1), {}};
}

/// Symmetric product vector of three spin observables:
///   ⅓[(â1·â2)â0 + (â2·â0)â1 + (â0·â1)â2] · σ.
/// The vector has norm at most 1 and is invariant under argument permutation.
inline SymmetrizedOperator symmetrize_triple(const Direction& a0, const Direction& a1,
                                             const Direction& a2) {
  require_unit(a0, "symmetrize_triple a0");
  require_unit(a1, "symmetrize_triple a1");
  require_unit(a2, "symmetrize_triple a2");
  const Direction v =
      (dot(a1, a2) * a0 + dot(a2, a0) * a1 + dot(a0, a1) * a2) * (1.0 / 3.0);
  return {0.0, v};
}

/// Pairing-sum evaluator for any factor count. Even k: scalar =
/// (1/(k-1)!!) Σ over perfect matchings of ∏ dots. Odd k: vector =
/// (1/k!!) Σ over {unpaired factor + matching of the rest} of ∏ dots · â.
inline SymmetrizedOperator symmetrize_pairing(const ProductSpec& p) {
  PairingWorkspace ws(p.factor_count());
  ws.set_directions(p.directions);
  return ws.symmetrized((std::uint32_t{1} << p.factor_count()) - 1);
}

inline double moyal_default_step(int k) {
  switch (k) {
    case 1:
    case 2:
    case 3:
      return 5e-3;
    case 4:
      return 2e-2;
    case 5:
      return 4e-2;
    default:
      return 6e-2;
  }
}

/// Mixed partial ∂^k / (i^k ∂θ_0…∂θ_{k-1}) of exp(i (Σ θ_j â_j)·σ) at θ = 0,
/// by k-dimensional central differences with one Richardson step over
/// {step, step/2}. Agrees with symmetrize_pairing up to O(step^2) truncation
/// plus rounding amplified by step^-k.
inline SymmetrizedOperator moyal_product_operator(const ProductSpec& p, double step) {
  const int k = p.factor_count();
  if (k > 6) throw TooManyFactors("finite-difference stencil supports at most 6 factors");
  if (!(step > 0.0) || step > 0.1) throw StepOutOfRange("step must lie in (0, 0.1]");

  const auto stencil = [&](double h) {
    Operator2 acc;
    for (int mask = 0; mask < (1 << k); ++mask) {
      Direction chi;
      int sign = 1;
      for (int j = 0; j < k; ++j) {
        const int s = (mask >> j) & 1 ? -1 : 1;
        sign *= s;
        chi += (s * h) * p.directions[static_cast<std::size_t>(j)];
      }
      acc += Complex(sign) * matrix_exp_i(pauli_dot(chi));
    }
    return acc * Complex(std::pow(1.0 / (2.0 * h), k));
  };

  const Operator2 coarse = stencil(step);
  const Operator2 fine = stencil(step / 2.0);
  // Richardson: the O(h^2) truncation term cancels in (4 F - C)/3.
  const Operator2 extrap = (Complex(4.0) * fine - coarse) * Complex(1.0 / 3.0);
  const Complex i_pow_k = std::pow(Complex(0.0, 1.0), k);
  return decompose_pauli(extrap * (Complex(1.0) / i_pow_k));
}

inline SymmetrizedOperator moyal_product_operator(const ProductSpec& p) {
  return moyal_product_operator(p, moyal_default_step(p.factor_count()));
}

/// Expectation Tr[ρ_A S] = scalar + vector·u of the symmetrized product on a
/// qubit with Bloch vector u. Independent of u for an even factor count.
inline double product_expectation(const ProductSpec& p, const Direction& u) {
  require_in_ball(u);
  const SymmetrizedOperator s = symmetrize_pairing(p);
  return s.scalar + dot(s.vector, u);
}

/// Joint table from symmetrizing projector products:
///   ¼(1 + a0 â0·u + a1 â1·u + a0 a1 â0·â1).
/// Equals Tr[ρ_A ½{P_{a0}(â0), P_{a1}(â1)}] entry by entry.
inline OutcomeTable symmetrized_pair_joint_table(const Direction& u, const Direction& a0,
                                                 const Direction& a1) {
  require_in_ball(u);
  return noncommuting_pair_table(u, a0, a1, CorrelatorSpec(dot(a0, a1)));
}

}  // namespace quasibell
