#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "quasibell/errors.hpp"
#include "quasibell/geometry.hpp"

namespace quasibell {

using Complex = std::complex<double>;

/// Dense NxN complex matrix with value semantics. Only the tiny sizes used by
/// one- and two-qubit operators are instantiated (N = 2, 4).
template <std::size_t N>
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  static ComplexMatrix zero() { return {}; }
  static ComplexMatrix identity() {
    ComplexMatrix r;
    for (std::size_t i = 0; i < N; ++i) r(i, i) = 1.0;
    return r;
  }

  Complex& operator()(std::size_t r, std::size_t c) { return m_[r * N + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_[r * N + c]; }

  ComplexMatrix operator+(const ComplexMatrix& o) const {
    ComplexMatrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.m_[i] = m_[i] + o.m_[i];
    return r;
  }
  ComplexMatrix operator-(const ComplexMatrix& o) const {
    ComplexMatrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.m_[i] = m_[i] - o.m_[i];
    return r;
  }
  ComplexMatrix operator*(const ComplexMatrix& o) const {
    ComplexMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex a = (*this)(i, k);
        if (a == Complex{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }
  ComplexMatrix operator*(Complex s) const {
    ComplexMatrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.m_[i] = m_[i] * s;
    return r;
  }
  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) m_[i] += o.m_[i];
    return *this;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs_diff(const ComplexMatrix& o) const {
    double d = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) d = std::max(d, std::abs(m_[i] - o.m_[i]));
    return d;
  }

  bool is_hermitian(double tol = 1e-12) const { return max_abs_diff(adjoint()) <= tol; }

 private:
  std::array<Complex, N * N> m_{};
};

template <std::size_t N>
inline ComplexMatrix<N> operator*(Complex s, const ComplexMatrix<N>& m) {
  return m * s;
}

using Operator2 = ComplexMatrix<2>;
using Operator4 = ComplexMatrix<4>;

/// Kronecker product with the first factor slow (left): index of A ⊗ B is
/// (2*rA + rB, 2*cA + cB). The left slot holds Alice's qubit throughout.
inline Operator4 kron(const Operator2& a, const Operator2& b) {
  Operator4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

inline const Operator2& sigma(int i) {
  static const std::array<Operator2, 3> s = [] {
    std::array<Operator2, 3> r;
    r[0](0, 1) = 1.0;
    r[0](1, 0) = 1.0;
    r[1](0, 1) = Complex(0.0, -1.0);
    r[1](1, 0) = Complex(0.0, 1.0);
    r[2](0, 0) = 1.0;
    r[2](1, 1) = -1.0;
    return r;
  }();
  return s.at(static_cast<std::size_t>(i - 1));
}

/// d.x σ1 + d.y σ2 + d.z σ3. Hermitian and traceless for any real d.
inline Operator2 pauli_dot(const Direction& d) {
  Operator2 r;
  r(0, 0) = d.z;
  r(1, 1) = -d.z;
  r(0, 1) = Complex(d.x, -d.y);
  r(1, 0) = Complex(d.x, d.y);
  return r;
}

/// Spin projector ½(I + a d·σ) onto outcome a = ±1 along unit axis d.
inline Operator2 projector(const Direction& d, int outcome) {
  require_unit(d, "projector axis");
  if (outcome != 1 && outcome != -1) throw OutOfRange("projector outcome must be +1 or -1");
  return 0.5 * (Operator2::identity() + Complex(outcome) * pauli_dot(d));
}

/// Single-qubit density matrix ½(I + u·σ) for Bloch vector u.
inline Operator2 qubit_density(const Direction& u) {
  return 0.5 * (Operator2::identity() + pauli_dot(u));
}

/// Two-qubit state in Bloch parameterization: Alice vector u, Bob vector v,
/// correlation matrix R.
struct BlochState {
  Direction u;
  Direction v;
  Mat3 R;

  static BlochState singlet() { return {{}, {}, Mat3::scaled_identity(-1.0)}; }
  static BlochState maximally_mixed() { return {{}, {}, Mat3::zero()}; }
  /// Singlet mixed with white noise: all correlations scale by z.
  static BlochState werner(double z) {
    if (z < 0.0 || z > 1.0) throw OutOfRange("werner noise parameter must be in [0,1]");
    return {{}, {}, Mat3::scaled_identity(-z)};
  }
};

/// ρ = ¼(I⊗I + Σ u_i σ_i⊗I + Σ v_j I⊗σ_j + Σ R_ij σ_i⊗σ_j).
inline Operator4 density_matrix(const BlochState& s) {
  const Operator2 id = Operator2::identity();
  Operator4 rho = kron(id, id);
  rho += kron(pauli_dot(s.u), id);
  rho += kron(id, pauli_dot(s.v));
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      const double rij = s.R(i - 1, j - 1);
      if (rij != 0.0) rho += rij * kron(sigma(i), sigma(j));
    }
  return 0.25 * rho;
}

// Eigenvalues of a Hermitian matrix by cyclic Jacobi with unitary plane
// rotations. Ascending order.
template <std::size_t N>
inline std::array<double, N> hermitian_eigenvalues(ComplexMatrix<N> a) {
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Columns: col_p <- c*col_p - s*conj(phase)*col_q ; col_q <- s*phase*col_p + c*col_q
        for (std::size_t r = 0; r < N; ++r) {
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = c * arp - s * std::conj(phase) * arq;
          a(r, q) = s * phase * arp + c * arq;
        }
        for (std::size_t col = 0; col < N; ++col) {
          const Complex apc = a(p, col);
          const Complex aqc = a(q, col);
          a(p, col) = c * apc - s * phase * aqc;
          a(q, col) = s * std::conj(phase) * apc + c * aqc;
        }
      }
  }
  std::array<double, N> ev;
  for (std::size_t i = 0; i < N; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Positivity check: all eigenvalues of the reconstructed density matrix are
/// at least -tol. Non-physical correlators are allowed elsewhere, so this is
/// a predicate rather than a constructor guard.
inline bool is_physical(const BlochState& s, double tol = 1e-10) {
  const auto ev = hermitian_eigenvalues(density_matrix(s));
  return ev.front() >= -tol;
}

/// Singlet expectation of (a·σ)⊗(b·σ): equals -a·b for any real vectors.
inline double singlet_pair_expectation(const Direction& a, const Direction& b) {
  return -dot(a, b);
}

/// exp(i h) for Hermitian h, via the decomposition h = c I + w·σ:
/// exp(i h) = e^{ic} (cos|w| I + i sin(|w|)/|w| (w·σ)).
inline Operator2 matrix_exp_i(const Operator2& h) {
  const double c = 0.5 * h.trace().real();
  Direction w;
  w.x = 0.5 * (h * sigma(1)).trace().real();
  w.y = 0.5 * (h * sigma(2)).trace().real();
  w.z = 0.5 * (h * sigma(3)).trace().real();
  const double wn = w.norm();
  const double sinc = wn < 1e-12 ? 1.0 : std::sin(wn) / wn;
  const Complex ph = std::exp(Complex(0.0, c));
  return ph * (std::cos(wn) * Operator2::identity() +
               Complex(0.0, sinc) * pauli_dot(w));
}

/// Symmetrized product of spin observables, decomposed as scalar·I + vector·σ.
/// For unit-direction factors exactly one part is nonzero: the scalar when the
/// factor count is even, the vector when it is odd.
struct SymmetrizedOperator {
  double scalar = 0.0;
  Direction vector;

  Operator2 as_operator() const {
    return Complex(scalar) * Operator2::identity() + pauli_dot(vector);
  }
};

/// Split a (near-)Hermitian 2x2 matrix into real scalar and Pauli-vector parts.
inline SymmetrizedOperator decompose_pauli(const Operator2& m) {
  SymmetrizedOperator r;
  r.scalar = 0.5 * m.trace().real();
  r.vector.x = 0.5 * (m * sigma(1)).trace().real();
  r.vector.y = 0.5 * (m * sigma(2)).trace().real();
  r.vector.z = 0.5 * (m * sigma(3)).trace().real();
  return r;
}

}  // namespace quasibell
