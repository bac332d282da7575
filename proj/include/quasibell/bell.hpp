#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "quasibell/errors.hpp"
#include "quasibell/geometry.hpp"
#include "quasibell/symmetrize.hpp"

// Order-N Bell-type quantity K_N = A_N^T M_N B_N built from the recursion
//   A_n = [1; a_0 a_n] ⊗ A_{n-1},  A_0 = [a_0],
// with M_N the 2^N x 2^N scaled sign matrix M^{⊗N}, M = ½[[1,1],[1,-1]].
// Every classical ±1 assignment gives K_N = ±1 exactly; the quantum value
// replaces each product of observables by its symmetrized Pauli vector and
// takes singlet expectations.

namespace quasibell {

/// Indices of the observables multiplied together in component i of A_N.
/// Bit k-1 of i set means the pair a_0 a_k entered at recursion level k;
/// squares cancel, leaving an odd-cardinality set.
inline std::vector<int> factor_set(int order, std::uint32_t i) {
  if (order < 0 || order > 20 || i >= (std::uint32_t{1} << order))
    throw IndexOutOfRange("component index " + std::to_string(i) + " out of range for order " +
                          std::to_string(order));
  std::vector<int> s;
  if (std::popcount(i) % 2 == 0) s.push_back(0);
  for (int k = 1; k <= order; ++k)
    if ((i >> (k - 1)) & 1) s.push_back(k);
  return s;
}

/// Same set as a bitmask over observable indices 0..order.
inline std::uint32_t factor_mask(int order, std::uint32_t i) {
  if (order < 0 || order > 20 || i >= (std::uint32_t{1} << order))
    throw IndexOutOfRange("component index out of range");
  std::uint32_t m = i << 1;
  if (std::popcount(i) % 2 == 0) m |= 1;
  return m;
}

/// Component i of the order-N product vector together with its factor set.
struct ProductIndex {
  int order = 0;
  std::uint32_t index = 0;
  std::vector<int> factors;

  ProductIndex(int order_, std::uint32_t index_)
      : order(order_), index(index_), factors(factor_set(order_, index_)) {}

  std::uint32_t mask() const { return factor_mask(order, index); }
};

inline int hadamard_sign(std::uint32_t i, std::uint32_t j) {
  return std::popcount(i & j) % 2 == 0 ? 1 : -1;
}

/// (M_N)_{ij} = 2^{-N} (-1)^{popcount(i AND j)}.
inline double scaled_hadamard_entry(int order, std::uint32_t i, std::uint32_t j) {
  return std::ldexp(static_cast<double>(hadamard_sign(i, j)), -order);
}

/// In-place length-2^n transform by the unscaled sign matrix H^{⊗n}.
template <typename T>
inline void walsh_hadamard(std::vector<T>& v) {
  const std::size_t n = v.size();
  for (std::size_t len = 1; len < n; len <<= 1)
    for (std::size_t i = 0; i < n; i += 2 * len)
      for (std::size_t j = i; j < i + len; ++j) {
        const T x = v[j];
        const T y = v[j + len];
        v[j] = x + y;
        v[j + len] = x - y;
      }
}

/// ±1 outcomes assigned to each party's observables.
struct ClassicalAssignment {
  std::vector<int> a_vals;
  std::vector<int> b_vals;
};

inline void validate_assignment(int order, const ClassicalAssignment& asg) {
  if (static_cast<int>(asg.a_vals.size()) != order + 1 ||
      static_cast<int>(asg.b_vals.size()) != order + 1)
    throw OutOfRange("assignment must carry order+1 values per party");
  for (int v : asg.a_vals)
    if (v != 1 && v != -1) throw OutOfRange("assignment values must be +1 or -1");
  for (int v : asg.b_vals)
    if (v != 1 && v != -1) throw OutOfRange("assignment values must be +1 or -1");
}

/// K_N on a classical assignment via the full matrix contraction in exact
/// integer arithmetic; the scale 2^-N is applied once at the end. Always ±1.
inline double classical_value(int order, const ClassicalAssignment& asg) {
  validate_assignment(order, asg);
  const std::size_t dim = std::size_t{1} << order;
  std::vector<long long> a_vec(dim), b_vec(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::uint32_t mask = factor_mask(order, static_cast<std::uint32_t>(i));
    long long pa = 1, pb = 1;
    for (std::uint32_t m = mask; m != 0; m &= m - 1) {
      const int d = std::countr_zero(m);
      pa *= asg.a_vals[static_cast<std::size_t>(d)];
      pb *= asg.b_vals[static_cast<std::size_t>(d)];
    }
    a_vec[i] = pa;
    b_vec[i] = pb;
  }
  walsh_hadamard(b_vec);
  long long s = 0;
  for (std::size_t i = 0; i < dim; ++i) s += a_vec[i] * b_vec[i];
  if (std::llabs(s) != (1LL << order))
    throw Error("contraction produced |K|*2^N = " + std::to_string(std::llabs(s)));
  return std::ldexp(static_cast<double>(s), -order);
}

/// K_N via the level-by-level reduction: each level contributes a ±1 factor,
/// -1 exactly when a_0 a_n = b_0 b_n = -1. O(N) per assignment.
inline double classical_value_recursive(int order, const ClassicalAssignment& asg) {
  validate_assignment(order, asg);
  int k = asg.a_vals[0] * asg.b_vals[0];
  for (int n = 1; n <= order; ++n) {
    const int p = asg.a_vals[0] * asg.a_vals[static_cast<std::size_t>(n)];
    const int q = asg.b_vals[0] * asg.b_vals[static_cast<std::size_t>(n)];
    if (p == -1 && q == -1) k = -k;
  }
  return static_cast<double>(k);
}

struct ClassicalBoundReport {
  int order = 0;
  long long assignments = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  bool all_unit_magnitude = false;
  bool exhaustive = true;
};

/// Exhaustive certificate that K_N = ±1 on every one of the 2^{2(N+1)}
/// assignments. For each b-pattern a pair of sign transforms yields the
/// contraction against every a-pattern at once.
inline ClassicalBoundReport classical_bound_verify(int order,
                                                   long long cap = 1LL << 26) {
  const long long total = 1LL << (2 * (order + 1));
  if (total > cap)
    throw EnumerationTooLarge("2^" + std::to_string(2 * (order + 1)) +
                              " assignments exceed the cap");
  const std::size_t dim = std::size_t{1} << order;
  const std::size_t patterns = std::size_t{1} << (order + 1);

  std::vector<std::uint32_t> masks(dim);
  for (std::size_t i = 0; i < dim; ++i)
    masks[i] = factor_mask(order, static_cast<std::uint32_t>(i));

  ClassicalBoundReport rep;
  rep.order = order;
  rep.min_value = 2.0;
  rep.max_value = -2.0;
  rep.all_unit_magnitude = true;

  std::vector<long long> b_vec(dim), scattered(patterns);
  for (std::size_t bneg = 0; bneg < patterns; ++bneg) {
    for (std::size_t i = 0; i < dim; ++i)
      b_vec[i] = std::popcount(masks[i] & static_cast<std::uint32_t>(bneg)) % 2 == 0 ? 1 : -1;
    walsh_hadamard(b_vec);
    // Scatter w by factor mask, then transform over a-patterns: entry aneg of
    // the result is sum_i (-1)^{popcount(mask_i & aneg)} w_i = K * 2^N.
    std::fill(scattered.begin(), scattered.end(), 0LL);
    for (std::size_t i = 0; i < dim; ++i) scattered[masks[i]] += b_vec[i];
    walsh_hadamard(scattered);
    for (std::size_t aneg = 0; aneg < patterns; ++aneg) {
      const long long s = scattered[aneg];
      if (std::llabs(s) != (1LL << order)) rep.all_unit_magnitude = false;
      const double k = std::ldexp(static_cast<double>(s), -order);
      rep.min_value = std::min(rep.min_value, k);
      rep.max_value = std::max(rep.max_value, k);
    }
  }
  rep.assignments = total;
  return rep;
}

/// Seeded random-assignment certificate for orders too large to enumerate.
inline ClassicalBoundReport classical_bound_sample(int order, long long samples,
                                                   std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  ClassicalBoundReport rep;
  rep.order = order;
  rep.exhaustive = false;
  rep.min_value = 2.0;
  rep.max_value = -2.0;
  rep.all_unit_magnitude = true;
  ClassicalAssignment asg;
  asg.a_vals.resize(static_cast<std::size_t>(order) + 1);
  asg.b_vals.resize(static_cast<std::size_t>(order) + 1);
  for (long long s = 0; s < samples; ++s) {
    for (auto& v : asg.a_vals) v = coin(rng) ? 1 : -1;
    for (auto& v : asg.b_vals) v = coin(rng) ? 1 : -1;
    const double k = classical_value_recursive(order, asg);
    if (std::abs(std::abs(k) - 1.0) > 1e-12) rep.all_unit_magnitude = false;
    rep.min_value = std::min(rep.min_value, k);
    rep.max_value = std::max(rep.max_value, k);
  }
  rep.assignments = samples;
  return rep;
}

/// Measurement directions for an order-N instance: N+1 unit vectors per party.
struct QuasiBellInstance {
  int order = 0;
  std::vector<Direction> a_dirs;
  std::vector<Direction> b_dirs;

  QuasiBellInstance() = default;
  QuasiBellInstance(int order_, std::vector<Direction> a, std::vector<Direction> b)
      : order(order_), a_dirs(std::move(a)), b_dirs(std::move(b)) {
    if (static_cast<int>(a_dirs.size()) != order + 1 ||
        static_cast<int>(b_dirs.size()) != order + 1)
      throw OutOfRange("instance needs order+1 directions per party");
  }
};

/// Reusable evaluator of the singlet expectation of the quantized K_N:
///   <K_N> = -Σ_ij (M_N)_{ij} (α_i · β_j),
/// with α_i the symmetrized product vector of the a-directions in factor set
/// i (and likewise β_j). The double sum collapses to three sign transforms.
class QuasiBellEvaluator {
 public:
  explicit QuasiBellEvaluator(int order)
      : order_(order),
        dim_(std::size_t{1} << order),
        ws_a_(order + 1),
        ws_b_(order + 1),
        alpha_(dim_),
        beta_(dim_),
        masks_(dim_) {
    if (order < 0 || order > 16) throw OutOfRange("order must lie in [0,16]");
    for (std::size_t i = 0; i < dim_; ++i)
      masks_[i] = factor_mask(order, static_cast<std::uint32_t>(i));
    for (auto& s : scratch_) s.resize(dim_);
  }

  int order() const { return order_; }

  double value(const std::vector<Direction>& a_dirs, const std::vector<Direction>& b_dirs) {
    ws_a_.set_directions(a_dirs);
    ws_b_.set_directions(b_dirs);
    for (std::size_t i = 0; i < dim_; ++i) {
      alpha_[i] = ws_a_.symmetrized(masks_[i]).vector;
      beta_[i] = ws_b_.symmetrized(masks_[i]).vector;
    }
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
      auto& buf = scratch_[static_cast<std::size_t>(c)];
      for (std::size_t j = 0; j < dim_; ++j) buf[j] = component(beta_[j], c);
      walsh_hadamard(buf);
      for (std::size_t i = 0; i < dim_; ++i) total += component(alpha_[i], c) * buf[i];
    }
    return -std::ldexp(total, -order_);
  }

  const std::vector<Direction>& alpha() const { return alpha_; }
  const std::vector<Direction>& beta() const { return beta_; }

 private:
  static double component(const Direction& d, int c) { return c == 0 ? d.x : c == 1 ? d.y : d.z; }

  int order_;
  std::size_t dim_;
  PairingWorkspace ws_a_, ws_b_;
  std::vector<Direction> alpha_, beta_;
  std::vector<std::uint32_t> masks_;
  std::array<std::vector<double>, 3> scratch_;
};

/// Singlet expectation of the quantized K_N. Signed; the classical bound is
/// |value| <= 1.
inline double quantum_value(const QuasiBellInstance& inst) {
  for (const auto& d : inst.a_dirs) require_unit(d, "quantum_value a-direction");
  for (const auto& d : inst.b_dirs) require_unit(d, "quantum_value b-direction");
  QuasiBellEvaluator ev(inst.order);
  return ev.value(inst.a_dirs, inst.b_dirs);
}

/// Expectation on the noise-scaled singlet: all correlators scale by z.
inline double werner_value(const QuasiBellInstance& inst, double z) {
  if (z < 0.0 || z > 1.0) throw OutOfRange("werner scale must lie in [0,1]");
  return z * quantum_value(inst);
}

/// The four order-2 test expressions b0±b1±b2±b0b1b2 (coefficient rows of the
/// unscaled sign matrix) evaluated on the eight sign triples. Columns order
/// (b0,b1,b2) with b0 slowest and + before -; exactly one entry per column is
/// nonzero and equals ±4.
inline std::array<std::array<int, 8>, 4> test_expression_table() {
  std::array<std::array<int, 8>, 4> grid{};
  for (int col = 0; col < 8; ++col) {
    std::array<int, 3> b{};
    for (int k = 0; k < 3; ++k) b[static_cast<std::size_t>(k)] = ((col >> (2 - k)) & 1) ? -1 : 1;
    const std::array<int, 4> comp{b[0], b[1], b[2], b[0] * b[1] * b[2]};
    for (std::uint32_t row = 0; row < 4; ++row) {
      int v = 0;
      for (std::uint32_t j = 0; j < 4; ++j) v += hadamard_sign(row, j) * comp[j];
      grid[row][static_cast<std::size_t>(col)] = v;
    }
  }
  return grid;
}

/// Standard CHSH-optimal settings (order 1): a along x and y, b along the
/// diagonals between them. |<K_1>| = sqrt(2).
inline QuasiBellInstance chsh_settings() {
  const double r = 1.0 / std::sqrt(2.0);
  return QuasiBellInstance(1, {x_axis(), y_axis()},
                           {{r, r, 0.0}, {r, -r, 0.0}});
}

/// Order-2 optimal settings: six maximally separated coplanar unit vectors at
/// pi/3 spacing. <K_2> = 3/2 and both symmetrized triple-product vectors
/// vanish.
inline QuasiBellInstance hexagon_settings() {
  const double h = std::sqrt(3.0) / 2.0;
  const std::vector<Direction> a{{1.0, 0.0, 0.0}, {0.5, h, 0.0}, {0.5, -h, 0.0}};
  const std::vector<Direction> b{{-1.0, 0.0, 0.0}, {-0.5, h, 0.0}, {-0.5, -h, 0.0}};
  return QuasiBellInstance(2, a, b);
}

/// Deterministic starting point for order N >= 2: the order-2 optimum with
/// its third direction repeated on both parties.
inline QuasiBellInstance repeated_hexagon_settings(int order) {
  if (order < 2) throw OutOfRange("repeated hexagon settings require order >= 2");
  QuasiBellInstance h = hexagon_settings();
  std::vector<Direction> a = h.a_dirs;
  std::vector<Direction> b = h.b_dirs;
  while (static_cast<int>(a.size()) < order + 1) {
    a.push_back(a[2]);
    b.push_back(b[2]);
  }
  return QuasiBellInstance(order, std::move(a), std::move(b));
}

}  // namespace quasibell
