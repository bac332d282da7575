#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quasibell/geometry.hpp"
#include "quasibell/pauli.hpp"

using namespace quasibell;

namespace {

Operator2 expected_sigma_product(int i, int j) {
  // σ_i σ_j = δ_ij I + i ε_ijk σ_k
  if (i == j) return Operator2::identity();
  const int k = 6 - i - j;
  const int perm_sign = (j - i == 1 || j - i == -2) ? 1 : -1;
  return Complex(0.0, perm_sign) * sigma(k);
}

}  // namespace

TEST_CASE("pauli algebra over all index pairs") {
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      const Operator2 prod = sigma(i) * sigma(j);
      CHECK(prod.max_abs_diff(expected_sigma_product(i, j)) <= 1e-14);
    }
}

TEST_CASE("pauli_dot on axes and a diagonal direction") {
  const Operator2 sz = pauli_dot(z_axis());
  CHECK(sz(0, 0) == Complex(1.0));
  CHECK(sz(1, 1) == Complex(-1.0));
  CHECK(sz(0, 1) == Complex(0.0));

  const Operator2 sx = pauli_dot(x_axis());
  CHECK(sx(0, 1) == Complex(1.0));
  CHECK(sx(1, 0) == Complex(1.0));
  CHECK(sx(0, 0) == Complex(0.0));

  const double r = 1.0 / std::sqrt(2.0);
  const Operator2 sd = pauli_dot({r, r, 0.0});
  CHECK(sd.is_hermitian());
  CHECK(std::abs(sd.trace()) <= 1e-15);
  const auto ev = hermitian_eigenvalues(sd);
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pauli_dot product identity on random pairs") {
  Rng rng = make_rng(11);
  for (int t = 0; t < 100; ++t) {
    const Direction a = random_unit_direction(rng);
    const Direction b = random_unit_direction(rng);
    const Operator2 lhs = pauli_dot(a) * pauli_dot(b);
    const Operator2 rhs = Complex(dot(a, b)) * Operator2::identity() +
                          Complex(0.0, 1.0) * pauli_dot(cross(a, b));
    CHECK(lhs.max_abs_diff(rhs) <= 1e-12);
  }
}

TEST_CASE("projector basics") {
  const Operator2 up = projector(z_axis(), 1);
  CHECK(up(0, 0) == Complex(1.0));
  CHECK(up(1, 1) == Complex(0.0));
  const Operator2 down = projector(z_axis(), -1);
  CHECK(down(0, 0) == Complex(0.0));
  CHECK(down(1, 1) == Complex(1.0));

  const Operator2 px = projector(x_axis(), 1);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(px(r, c) == Complex(0.5));

  Rng rng = make_rng(12);
  for (int t = 0; t < 50; ++t) {
    const Direction d = random_unit_direction(rng);
    for (int a : {1, -1}) {
      const Operator2 p = projector(d, a);
      CHECK((p * p).max_abs_diff(p) <= 1e-12);
      CHECK(std::abs(p.trace() - Complex(1.0)) <= 1e-12);
    }
    const Operator2 sum = projector(d, 1) + projector(d, -1);
    CHECK(sum.max_abs_diff(Operator2::identity()) <= 1e-12);
  }

  CHECK_THROWS_AS(projector({0.0, 0.0, 2.0}, 1), NonUnitDirection);
}

TEST_CASE("density_matrix of reference states") {
  const Operator4 singlet = density_matrix(BlochState::singlet());
  CHECK(singlet.is_hermitian(1e-12));
  CHECK(std::abs(singlet.trace() - Complex(1.0)) <= 1e-12);
  const auto ev = hermitian_eigenvalues(singlet);
  CHECK(std::abs(ev[0]) <= 1e-12);
  CHECK(std::abs(ev[1]) <= 1e-12);
  CHECK(std::abs(ev[2]) <= 1e-12);
  CHECK(ev[3] == doctest::Approx(1.0).epsilon(1e-12));

  const Operator4 mixed = density_matrix(BlochState::maximally_mixed());
  CHECK(mixed.max_abs_diff(0.25 * kron(Operator2::identity(), Operator2::identity())) <= 1e-15);

  // Alice's qubit is the slow (left) tensor factor, so u = +z concentrates
  // weight on the first two diagonal entries.
  BlochState polarized;
  polarized.u = z_axis();
  const Operator4 rho = density_matrix(polarized);
  CHECK(std::abs(rho(0, 0) - Complex(0.5)) <= 1e-15);
  CHECK(std::abs(rho(1, 1) - Complex(0.5)) <= 1e-15);
  CHECK(std::abs(rho(2, 2)) <= 1e-15);
  CHECK(std::abs(rho(3, 3)) <= 1e-15);
}

TEST_CASE("tensor product mixes factorwise") {
  Rng rng = make_rng(13);
  for (int t = 0; t < 50; ++t) {
    const Operator2 a = oracles::random_hermitian2(rng);
    const Operator2 b = oracles::random_hermitian2(rng);
    const Operator2 c = oracles::random_hermitian2(rng);
    const Operator2 d = oracles::random_hermitian2(rng);
    CHECK((kron(a, b) * kron(c, d)).max_abs_diff(kron(a * c, b * d)) <= 1e-12);
  }
}

TEST_CASE("is_physical flags unphysical correlations") {
  CHECK(is_physical(BlochState::singlet()));
  CHECK(is_physical(BlochState::maximally_mixed()));
  for (double z : {0.0, 0.3, 0.7, 1.0}) CHECK(is_physical(BlochState::werner(z)));

  BlochState bad;
  bad.R = Mat3::identity();  // +I correlations give one eigenvalue -1/2
  CHECK_FALSE(is_physical(bad));
}

TEST_CASE("singlet_pair_expectation closed form and trace route") {
  CHECK(singlet_pair_expectation(z_axis(), z_axis()) == doctest::Approx(-1.0));
  CHECK(singlet_pair_expectation(x_axis(), y_axis()) == doctest::Approx(0.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(singlet_pair_expectation(x_axis(), {r, r, 0.0}) == doctest::Approx(-r).epsilon(1e-12));

  const Operator4 rho = density_matrix(BlochState::singlet());
  Rng rng = make_rng(14);
  for (int t = 0; t < 100; ++t) {
    const Direction a = random_unit_direction(rng);
    const Direction b = random_unit_direction(rng);
    const Complex tr = (kron(pauli_dot(a), pauli_dot(b)) * rho).trace();
    CHECK(std::abs(tr.imag()) <= 1e-12);
    CHECK(tr.real() == doctest::Approx(singlet_pair_expectation(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("matrix_exp_i closed form cases") {
  CHECK(matrix_exp_i(Operator2::zero()).max_abs_diff(Operator2::identity()) <= 1e-15);

  const Operator2 minus_i = matrix_exp_i(Complex(pi) * sigma(3));
  CHECK(minus_i.max_abs_diff(Complex(-1.0) * Operator2::identity()) <= 1e-12);

  const Operator2 half_turn = matrix_exp_i(Complex(pi / 2.0) * sigma(1));
  CHECK(half_turn.max_abs_diff(Complex(0.0, 1.0) * sigma(1)) <= 1e-12);
}

TEST_CASE("matrix_exp_i is unitary and matches a series evaluation") {
  Rng rng = make_rng(15);
  for (int t = 0; t < 100; ++t) {
    const Operator2 h = oracles::random_hermitian2(rng);
    const Operator2 u = matrix_exp_i(h);
    CHECK((u * u.adjoint()).max_abs_diff(Operator2::identity()) <= 1e-10);
    CHECK(u.max_abs_diff(oracles::matrix_exp_i_series(h)) <= 1e-10);
  }
}

TEST_CASE("hermitian_eigenvalues reconstructs invariants") {
  Rng rng = make_rng(16);
  for (int t = 0; t < 50; ++t) {
    const Operator4 h = oracles::random_hermitian4(rng);
    const auto ev = hermitian_eigenvalues(h);
    double tr = 0.0, fr = 0.0;
    for (double v : ev) {
      tr += v;
      fr += v * v;
    }
    double fr_direct = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) fr_direct += std::norm(h(r, c));
    CHECK(tr == doctest::Approx(h.trace().real()).epsilon(1e-10));
    CHECK(fr == doctest::Approx(fr_direct).epsilon(1e-10));
  }

  // 2x2 closed form: eigenvalues of c I + w·σ are c ± |w|.
  Rng rng2 = make_rng(17);
  for (int t = 0; t < 50; ++t) {
    const double c = random_in(rng2, -2.0, 2.0);
    const Direction w = random_ball_vector(rng2) * 2.0;
    const auto ev = hermitian_eigenvalues(Complex(c) * Operator2::identity() + pauli_dot(w));
    CHECK(ev[0] == doctest::Approx(c - w.norm()).epsilon(1e-10));
    CHECK(ev[1] == doctest::Approx(c + w.norm()).epsilon(1e-10));
  }
}

TEST_CASE("bloch state invariants on random physical mixtures") {
  Rng rng = make_rng(18);
  for (int t = 0; t < 50; ++t) {
    // Convex mixture of product states is always physical.
    BlochState s;
    Mat3 r = Mat3::zero();
    double wsum = 0.0;
    std::vector<std::pair<double, std::pair<Direction, Direction>>> parts;
    for (int k = 0; k < 3; ++k) parts.push_back({random_in(rng, 0.1, 1.0),
                                                 {random_ball_vector(rng), random_ball_vector(rng)}});
    for (auto& [w, uv] : parts) wsum += w;
    for (auto& [w, uv] : parts) {
      const double f = w / wsum;
      s.u += uv.first * f;
      s.v += uv.second * f;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const std::array<double, 3> ua{uv.first.x, uv.first.y, uv.first.z};
          const std::array<double, 3> va{uv.second.x, uv.second.y, uv.second.z};
          r(i, j) += f * ua[static_cast<std::size_t>(i)] * va[static_cast<std::size_t>(j)];
        }
    }
    s.R = r;
    const Operator4 rho = density_matrix(s);
    CHECK(rho.is_hermitian(1e-12));
    CHECK(std::abs(rho.trace() - Complex(1.0)) <= 1e-12);
    CHECK(is_physical(s));
  }
}
