#include <doctest.h>

#include "oracles.hpp"
#include "rnls/field.hpp"

using namespace rnls;

TEST_CASE("single-node table is h0(0)") {
  BasisSpec b = oracle::small_basis(0, 4, 10.0, 2, 1);
  const auto t = build_basis(b);
  REQUIRE(t.nodes.size() == 1);
  CHECK(t.nodes[0] == 0.0);
  CHECK(t.values(0, 0) == doctest::Approx(std::pow(oracle::pi, -0.25)).epsilon(1e-15));
}

TEST_CASE("hermite orthonormality against a long double table at 4x nodes") {
  BasisSpec b = oracle::small_basis(8, 4, 10.0, 2, 16);
  const auto t = build_basis(b);
  CHECK(t.orthonormality_residual() < 1e-12);

  BasisSpec fine = b;
  fine.m_quad = 64;
  const auto ref = build_basis<long double>(fine);
  CHECK(double(ref.orthonormality_residual()) < 1e-15);

  // Same functions evaluated in long double at the double-precision nodes.
  Eigen::Matrix<long double, Eigen::Dynamic, 1> y = t.nodes.cast<long double>();
  const auto hv = hermite_functions<long double>(y, 8);
  CHECK(double((hv - t.values.cast<long double>()).cwiseAbs().maxCoeff()) < 1e-14);

  // Gram matrix of the 16-node rule evaluated in extended precision.
  const auto gram = (hv.transpose() * t.weights.cast<long double>().asDiagonal() * hv).eval();
  CHECK(double((gram - decltype(gram)::Identity(9, 9)).cwiseAbs().maxCoeff()) < 1e-13);
}

TEST_CASE("eigenvalues") {
  CHECK(BasisSpec::eigenvalue(0, 0) == 2.0);
  CHECK(BasisSpec::eigenvalue(2, 3) == 12.0);
}

TEST_CASE("basis spec validation") {
  BasisSpec b = oracle::small_basis(4, 16, 10.0);
  CHECK_NOTHROW(b.validate());
  b.m_quad = 4;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b = oracle::small_basis(4, 15, 10.0);
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b = oracle::small_basis(4, 16, -1.0);
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b = oracle::small_basis(4, 16, 10.0, 1);
  CHECK_THROWS_AS(b.validate(), ConfigError);
}

TEST_CASE("basis element maps to a single unit coefficient") {
  BasisSpec b = oracle::small_basis(4, 16, 12.0, 2, 8);
  const auto t = build_basis(b);
  const double h0 = std::pow(oracle::pi, -0.25);
  const auto f = sample(t, [&](double y1, double y2, double z) {
    return Complex(h0 * std::exp(-0.5 * y1 * y1) * h0 * std::exp(-0.5 * y2 * y2)) *
           std::polar(1.0, 2 * oracle::pi * z / b.l_z) / std::sqrt(b.l_z);
  });
  const SpectralField c = to_spectral(f, t);
  CHECK(std::abs(c(0, 0, 1) - 1.0) < 1e-13);
  SpectralField rest = c;
  rest(0, 0, 1) = 0;
  CHECK(rest.coeffs().cwiseAbs().maxCoeff() < 1e-13);

  const SpectralField zero = to_spectral(PhysicalField(b), t);
  CHECK(zero.coeffs().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("round trip and Parseval on random band-limited fields") {
  BasisSpec b = oracle::small_basis(10, 32, 20.0, 2, 14);
  const auto t = build_basis(b);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField c = random_field(b, seed);
    const PhysicalField f = from_spectral(c, t);
    const PhysicalField f2 = from_spectral(to_spectral(f, t), t);
    CHECK((f2.values - f.values).norm() / f.values.norm() < 1e-12);
    CHECK((to_spectral(f, t).coeffs() - c.coeffs()).norm() / c.coeffs().norm() < 1e-12);
    const double ms = norms(c).mass_L2;
    CHECK(std::abs(physical_mass(f, t) - ms) / ms < 1e-10);
  }
}

TEST_CASE("mixed representation round trip") {
  BasisSpec b = oracle::small_basis(6, 16, 10.0);
  ZTransform zt(b);
  const SpectralField c = random_field(b, 7);
  const SpectralField back = from_mixed(to_mixed(c, zt), b, zt);
  CHECK((back.coeffs() - c.coeffs()).norm() < 1e-13);
}

TEST_CASE("norms of unit modes") {
  BasisSpec b = oracle::small_basis(3, 16, 10.0);
  SpectralField c(b);
  c(0, 0, 0) = 1;
  Norms n = norms(c);
  CHECK(n.mass_L2 == doctest::Approx(1.0));
  CHECK(n.B1_sq == doctest::Approx(2.0));
  CHECK(n.grad_z_sq == 0.0);

  SpectralField d(b);
  d(1, 0, 1) = 1;
  const double k = 2 * oracle::pi / b.l_z;
  CHECK(norms(d).B1_sq == doctest::Approx(4 + k * k).epsilon(1e-14));

  // Two modes: contributions add, and the physical quadrature agrees on mass.
  SpectralField e = c + Complex(0, 2) * d;
  n = norms(e);
  CHECK(n.mass_L2 == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(n.B1_sq == doctest::Approx(2 + 4 * (4 + k * k)).epsilon(1e-14));
  CHECK(physical_mass(from_spectral(e, build_basis(b)), build_basis(b)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(momentum(e) == doctest::Approx(4 * k).epsilon(1e-14));
}

TEST_CASE("B1 seminorm of a Gaussian matches the closed form") {
  // psi = exp(-|y|^2/(2w^2)) exp(-z^2/(2s^2)):
  // mass = pi w^2 sqrt(pi) s, <H psi, psi> = mass (w^2 + 1/w^2), ||psi_z||^2 = mass / (2 s^2).
  const double w = 1.3, s = 1.1;
  const double mass = oracle::pi * w * w * std::sqrt(oracle::pi) * s;
  const double herm = mass * (w * w + 1 / (w * w));
  const double gz = mass / (2 * s * s);
  double prev = 1e300;
  for (int nh : {8, 16, 32}) {
    BasisSpec b = oracle::small_basis(nh, 64, 24.0);
    const Norms n = norms(gaussian_field(b, 1.0, w, s));
    CHECK(n.mass_L2 == doctest::Approx(mass).epsilon(1e-3));
    const double err = std::abs(n.B1_sq - herm - gz);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev / (herm + gz) < 1e-10);
  const Norms fine = norms(gaussian_field(oracle::small_basis(32, 64, 24.0), 1.0, w, s));
  CHECK(fine.mass_L2 == doctest::Approx(mass).epsilon(1e-12));
  CHECK(fine.grad_z_sq == doctest::Approx(gz).epsilon(1e-12));
}

TEST_CASE("boundary mass") {
  BasisSpec b = oracle::small_basis(2, 64, 40.0);
  CHECK(boundary_mass(gaussian_field(b, 1.0, 1.0, 1.0)) < 1e-30);
  CHECK(boundary_mass(gaussian_field(b, 1.0, 1.0, 12.0)) > 1e-6);
}
