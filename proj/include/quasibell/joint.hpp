#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "quasibell/errors.hpp"
#include "quasibell/geometry.hpp"
#include "quasibell/pauli.hpp"

// Joint (quasi-)probability tables for two or three spin observables on one
// qubit, plus the commuting two-qubit table. Entries follow the closed form
//   p(a_0,..) = 2^-k (1 + Σ a_i x_i + Σ a_i a_j c_ij + a_0 a_1 a_2 c_012),
// with x_i the Bloch projections and c the correlators; they may be negative.
// A commuting two-qubit model with v = u and a suitable correlation matrix
// could simulate any such table; no operation is provided for that view.

namespace quasibell {

/// Pair correlators (indexed 01, 02, 12) and the triple correlator.
struct CorrelatorSpec {
  std::array<double, 3> pair{};
  double triple = 0.0;

  CorrelatorSpec() = default;
  explicit CorrelatorSpec(double c01) : pair{c01, 0.0, 0.0} {}
  CorrelatorSpec(double c01, double c02, double c12, double c012)
      : pair{c01, c02, c12}, triple(c012) {}
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x, double tol = 1e-12) const { return x >= lo - tol && x <= hi + tol; }
  double width() const { return hi - lo; }
};

/// Signed probability table over outcome tuples in {+1,-1}^arity.
/// Entry index packs outcomes as bits, bit i set when observable i yields -1.
class OutcomeTable {
 public:
  OutcomeTable(int arity, std::vector<Direction> directions, Direction bloch_u)
      : arity_(arity), directions_(std::move(directions)), bloch_u_(bloch_u) {
    if (arity_ != 2 && arity_ != 3) throw WrongArity("table arity must be 2 or 3");
  }

  int arity() const { return arity_; }
  int size() const { return 1 << arity_; }
  const std::vector<Direction>& directions() const { return directions_; }
  const Direction& bloch_u() const { return bloch_u_; }

  double& operator[](int idx) { return entries_[static_cast<std::size_t>(idx)]; }
  double operator[](int idx) const { return entries_[static_cast<std::size_t>(idx)]; }

  static int index_of(std::initializer_list<int> outcomes) {
    int idx = 0, bit = 0;
    for (int a : outcomes) {
      if (a == -1) idx |= 1 << bit;
      ++bit;
    }
    return idx;
  }

  /// Outcome of observable i in tuple idx (+1 or -1).
  static int outcome(int idx, int i) { return (idx >> i) & 1 ? -1 : 1; }

  double entry(int a0, int a1) const { return entries_[index_of({a0, a1})]; }
  double entry(int a0, int a1, int a2) const { return entries_[index_of({a0, a1, a2})]; }

  double sum() const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += entries_[i];
    return s;
  }

  double min_entry() const {
    double m = entries_[0];
    for (int i = 1; i < size(); ++i) m = std::min(m, entries_[i]);
    return m;
  }

  bool all_nonnegative(double tol = 1e-12) const { return min_entry() >= -tol; }

  /// One-observable marginal p(a_i = outcome).
  double marginal_one(int i, int outcome_i) const {
    double s = 0.0;
    for (int idx = 0; idx < size(); ++idx)
      if (outcome(idx, i) == outcome_i) s += entries_[idx];
    return s;
  }

  /// Two-observable marginal p(a_i, a_j) of an arity-3 table.
  double marginal_pair(int i, int j, int outcome_i, int outcome_j) const {
    if (arity_ != 3) throw WrongArity("pair marginal requires an arity-3 table");
    double s = 0.0;
    for (int idx = 0; idx < size(); ++idx)
      if (outcome(idx, i) == outcome_i && outcome(idx, j) == outcome_j) s += entries_[idx];
    return s;
  }

  /// Correlator Σ a_i a_j p implied by the table.
  double correlator(int i, int j) const {
    double s = 0.0;
    for (int idx = 0; idx < size(); ++idx) s += outcome(idx, i) * outcome(idx, j) * entries_[idx];
    return s;
  }

  double triple_correlator() const {
    if (arity_ != 3) throw WrongArity("triple correlator requires an arity-3 table");
    double s = 0.0;
    for (int idx = 0; idx < size(); ++idx)
      s += outcome(idx, 0) * outcome(idx, 1) * outcome(idx, 2) * entries_[idx];
    return s;
  }

  /// Tuple key such as "+-" or "-+-" for serialization.
  std::string tuple_key(int idx) const {
    std::string k;
    for (int i = 0; i < arity_; ++i) k += outcome(idx, i) == 1 ? '+' : '-';
    return k;
  }

 private:
  int arity_;
  std::array<double, 8> entries_{};
  std::vector<Direction> directions_;
  Direction bloch_u_;
};

/// Commuting two-qubit table: ¼(1 + a â·u + b b̂·v + ab â^T R b̂).
inline OutcomeTable quantum_pair_table(const BlochState& s, const Direction& a,
                                       const Direction& b) {
  require_unit(a, "quantum_pair_table axis a");
  require_unit(b, "quantum_pair_table axis b");
  OutcomeTable t(2, {a, b}, s.u);
  const double xa = dot(a, s.u);
  const double xb = dot(b, s.v);
  const double rab = bilinear(a, s.R, b);
  for (int idx = 0; idx < 4; ++idx) {
    const int sa = OutcomeTable::outcome(idx, 0);
    const int sb = OutcomeTable::outcome(idx, 1);
    t[idx] = 0.25 * (1.0 + sa * xa + sb * xb + sa * sb * rab);
  }
  return t;
}

/// Local-model table ¼(1 + a f̄_A + b f̄_B + ab f̄_AB); inputs in [-1,1].
inline OutcomeTable lhv_pair_table(double fbar_a, double fbar_b, double fbar_ab) {
  for (double f : {fbar_a, fbar_b, fbar_ab})
    if (f < -1.0 || f > 1.0) throw OutOfRange("lhv averages must lie in [-1,1]");
  OutcomeTable t(2, {}, {});
  for (int idx = 0; idx < 4; ++idx) {
    const int sa = OutcomeTable::outcome(idx, 0);
    const int sb = OutcomeTable::outcome(idx, 1);
    t[idx] = 0.25 * (1.0 + sa * fbar_a + sb * fbar_b + sa * sb * fbar_ab);
  }
  return t;
}

/// Joint table for two noncommuting observables on one qubit with an
/// externally supplied correlator.
inline OutcomeTable noncommuting_pair_table(const Direction& u, const Direction& a0,
                                            const Direction& a1, const CorrelatorSpec& c) {
  require_unit(a0, "noncommuting_pair_table axis a0");
  require_unit(a1, "noncommuting_pair_table axis a1");
  require_in_ball(u);
  OutcomeTable t(2, {a0, a1}, u);
  const double x0 = dot(a0, u);
  const double x1 = dot(a1, u);
  for (int idx = 0; idx < 4; ++idx) {
    const int s0 = OutcomeTable::outcome(idx, 0);
    const int s1 = OutcomeTable::outcome(idx, 1);
    t[idx] = 0.25 * (1.0 + s0 * x0 + s1 * x1 + s0 * s1 * c.pair[0]);
  }
  return t;
}

/// Exact interval of pair correlators keeping all four entries nonnegative.
/// Scans the four sign cases of 1 + s0 x0 + s1 x1 + s0 s1 c >= 0.
inline Interval positivity_interval(const Direction& u, const Direction& a0,
                                    const Direction& a1) {
  require_unit(a0, "positivity_interval axis a0");
  require_unit(a1, "positivity_interval axis a1");
  require_in_ball(u);
  const double x0 = dot(a0, u);
  const double x1 = dot(a1, u);
  Interval iv{-1.0, 1.0};
  for (int s0 : {1, -1})
    for (int s1 : {1, -1}) {
      const double base = 1.0 + s0 * x0 + s1 * x1;
      if (s0 * s1 == 1)
        iv.lo = std::max(iv.lo, -base);
      else
        iv.hi = std::min(iv.hi, base);
    }
  return iv;
}

/// Symmetric mixed-state choice of the pair correlator:
///   [x0 + x1 + (1-|u|) â0·â1](1-|u|) + x0 x1,
/// which reduces to â0·â1 at u = 0 and to x0 x1 on pure states. Positivity of
/// the resulting table is guaranteed only when one axis is û itself; nearly
/// coincident axes anti-aligned with u fall outside the admissible band.
inline double mixed_state_correlator(const Direction& u, const Direction& a0,
                                     const Direction& a1) {
  require_in_ball(u);
  const double un = u.norm();
  const double x0 = dot(a0, u);
  const double x1 = dot(a1, u);
  return (x0 + x1 + (1.0 - un) * dot(a0, a1)) * (1.0 - un) + x0 * x1;
}

/// One-parameter family for the pair (â, û): correlator (α + â·u)(1-|u|) + |u| â·u.
/// For α in [-1,1] it spans exactly the positivity interval of that pair.
inline double alpha_family_correlator(const Direction& u, const Direction& a, double alpha) {
  require_in_ball(u);
  if (alpha < -1.0 || alpha > 1.0) throw OutOfRange("alpha must lie in [-1,1]");
  const double un = u.norm();
  if (un < 1e-12) throw OutOfRange("alpha family requires a nonzero Bloch vector");
  const double x = dot(a, u);
  return (alpha + x) * (1.0 - un) + x * un;
}

struct FrechetPairReport {
  // Per outcome tuple, indexed like OutcomeTable entries.
  std::array<bool, 4> lower_ok{};
  std::array<bool, 4> upper_ok{};
  bool frechet_all = false;
  bool nonneg_all = false;
  bool equivalent = false;  // frechet_all == nonneg_all
};

/// Classical joint-vs-marginal bounds for an arity-2 table:
///   p(a0) + p(a1) - 1 <= p(a0,a1) <= min{p(a0), p(a1)}.
/// Satisfaction across all four tuples coincides with entrywise positivity.
inline FrechetPairReport frechet_pair_check(const OutcomeTable& t, double tol = 1e-12) {
  if (t.arity() != 2) throw WrongArity("frechet_pair_check requires arity 2");
  FrechetPairReport r;
  bool all = true;
  for (int idx = 0; idx < 4; ++idx) {
    const int s0 = OutcomeTable::outcome(idx, 0);
    const int s1 = OutcomeTable::outcome(idx, 1);
    const double p0 = t.marginal_one(0, s0);
    const double p1 = t.marginal_one(1, s1);
    const double p = t[idx];
    r.lower_ok[idx] = p >= p0 + p1 - 1.0 - tol;
    r.upper_ok[idx] = p <= std::min(p0, p1) + tol;
    all = all && r.lower_ok[idx] && r.upper_ok[idx];
  }
  r.frechet_all = all;
  r.nonneg_all = t.all_nonnegative(tol);
  r.equivalent = r.frechet_all == r.nonneg_all;
  return r;
}

/// Triple joint table with supplied pair and triple correlators.
inline OutcomeTable noncommuting_triple_table(const Direction& u,
                                              const std::array<Direction, 3>& dirs,
                                              const CorrelatorSpec& c) {
  for (const auto& d : dirs) require_unit(d, "noncommuting_triple_table axis");
  require_in_ball(u);
  OutcomeTable t(3, {dirs[0], dirs[1], dirs[2]}, u);
  const std::array<double, 3> x{dot(dirs[0], u), dot(dirs[1], u), dot(dirs[2], u)};
  for (int idx = 0; idx < 8; ++idx) {
    const int s0 = OutcomeTable::outcome(idx, 0);
    const int s1 = OutcomeTable::outcome(idx, 1);
    const int s2 = OutcomeTable::outcome(idx, 2);
    t[idx] = 0.125 * (1.0 + s0 * x[0] + s1 * x[1] + s2 * x[2] + s0 * s1 * c.pair[0] +
                      s0 * s2 * c.pair[1] + s1 * s2 * c.pair[2] + s0 * s1 * s2 * c.triple);
  }
  return t;
}

struct FrechetTripleReport {
  std::array<bool, 8> lower_ok{};
  std::array<bool, 8> upper_ok{};
  bool lower_all = false;
  bool upper_all = false;
  bool nonneg_all = false;
  bool upper_equivalent_to_positivity = false;  // upper_all == nonneg_all
  bool lower_implied_by_positivity = false;     // nonneg_all implies lower_all
  // Rewritten forms evaluated alongside the direct bounds: the upper bound per
  // tuple equals one sign-flipped entry >= 0; the lower equals a sum of three.
  bool rewritten_match = false;
};

/// Three-observable bounds
///   max_ijk{p(a_i) + p(a_j,a_k) - 1} <= p(a0,a1,a2) <= min_mn{p(a_m,a_n)},
/// checked over all eight tuples against the supplied pair tables.
inline FrechetTripleReport frechet_triple_check(const OutcomeTable& t,
                                                const std::array<OutcomeTable, 3>& pair_tables,
                                                double tol = 1e-9) {
  if (t.arity() != 3) throw WrongArity("frechet_triple_check requires arity 3");
  // pair_tables order: (a0,a1), (a0,a2), (a1,a2).
  static constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (int p = 0; p < 3; ++p) {
    if (pair_tables[p].arity() != 2) throw WrongArity("pair tables must have arity 2");
    const auto [i, j] = std::pair(kPairs[p][0], kPairs[p][1]);
    for (int si : {1, -1})
      for (int sj : {1, -1}) {
        const double lhs = pair_tables[p].entry(si, sj);
        const double rhs = t.marginal_pair(i, j, si, sj);
        if (std::abs(lhs - rhs) > tol)
          throw InconsistentMarginals("pair table " + std::to_string(p) +
                                      " does not match the triple marginal");
      }
  }

  FrechetTripleReport r;
  const double check_tol = 1e-12;
  bool rewritten_ok = true;
  r.lower_all = r.upper_all = true;
  for (int idx = 0; idx < 8; ++idx) {
    const std::array<int, 3> s{OutcomeTable::outcome(idx, 0), OutcomeTable::outcome(idx, 1),
                               OutcomeTable::outcome(idx, 2)};
    const double p = t[idx];

    double lower = -1.0;
    for (int i = 0; i < 3; ++i) {
      const int j = i == 0 ? 1 : 0;
      const int k = i == 2 ? 1 : 2;
      const int pt = (j == 0 && k == 1) ? 0 : (j == 0 ? 1 : 2);
      lower = std::max(lower, t.marginal_one(i, s[i]) + pair_tables[pt].entry(s[j], s[k]) - 1.0);
    }
    double upper = 2.0;
    for (int pt = 0; pt < 3; ++pt)
      upper = std::min(upper, pair_tables[pt].entry(s[kPairs[pt][0]], s[kPairs[pt][1]]));

    r.lower_ok[idx] = p >= lower - check_tol;
    r.upper_ok[idx] = p <= upper + check_tol;
    r.lower_all = r.lower_all && r.lower_ok[idx];
    r.upper_all = r.upper_all && r.upper_ok[idx];

    // Rewritten lower bound: for each split i|(j,k), the slack is the sum of
    // the three entries with a_i flipped that are not (-a_i, a_j, a_k).
    for (int i = 0; i < 3; ++i) {
      const int j = i == 0 ? 1 : 0;
      const int k = i == 2 ? 1 : 2;
      const int pt = (j == 0 && k == 1) ? 0 : (j == 0 ? 1 : 2);
      const double slack = p - (t.marginal_one(i, s[i]) + pair_tables[pt].entry(s[j], s[k]) - 1.0);
      std::array<int, 3> o{};
      o[i] = -s[i];
      double sum3 = 0.0;
      for (int sj : {1, -1})
        for (int sk : {1, -1}) {
          if (sj == s[j] && sk == s[k]) continue;
          o[j] = sj;
          o[k] = sk;
          sum3 += t.entry(o[0], o[1], o[2]);
        }
      if (std::abs(slack - sum3) > 1e-9) rewritten_ok = false;
    }
    // Rewritten upper bound: the slack of pair (m,n) is the entry with the
    // remaining observable flipped.
    for (int pt = 0; pt < 3; ++pt) {
      const int m = kPairs[pt][0], n = kPairs[pt][1];
      const int l = 3 - m - n;
      std::array<int, 3> o = s;
      o[l] = -s[l];
      const double slack = pair_tables[pt].entry(s[m], s[n]) - p;
      if (std::abs(slack - t.entry(o[0], o[1], o[2])) > 1e-9) rewritten_ok = false;
    }
  }
  r.rewritten_match = rewritten_ok;
  r.nonneg_all = t.all_nonnegative(check_tol);
  r.upper_equivalent_to_positivity = r.upper_all == r.nonneg_all;
  r.lower_implied_by_positivity = !r.nonneg_all || r.lower_all;
  return r;
}

}  // namespace quasibell
