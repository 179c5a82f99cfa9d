#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "rnls/ground_state.hpp"

using namespace rnls;

namespace {

const BasisSpec kB = oracle::small_basis(4, 64, 40.0, 24);

RandomFieldOptions localized(double l2 = 1.0) {
  RandomFieldOptions o;
  o.packets = 3;
  o.l2 = l2;
  return o;
}

}  // namespace

TEST_CASE("report of zero and of the lowest mode") {
  const AveragedNonlinearity an(kB, {2.0, -1});
  const FunctionalReport z = report(SpectralField(kB), an);
  CHECK(z.M == 0.0);
  CHECK(z.E == 0.0);
  CHECK(z.S == 0.0);
  CHECK(z.P == 0.0);
  CHECK(z.I == 0.0);

  SpectralField c(kB);
  c(0, 0, 0) = 1;
  const FunctionalReport r = report(c, an);
  CHECK(r.M == doctest::Approx(0.5));
  CHECK(r.K == doctest::Approx(1.0));
  CHECK(r.G == 0.0);
}

TEST_CASE("energy of a level-0 Gaussian at sigma = 1") {
  // h0 h0 f with f = A exp(-z^2/(2s^2)): int f'^2 = A^2 sqrt(pi)/(2s), int f^4 = A^4 s sqrt(pi/2).
  // exp(-|y|^2/2) = sqrt(pi) h0 h0, hence the amplitude A / sqrt(pi).
  const double A = 0.9, s = 2.5;
  const FunctionalReport r =
      report(gaussian_field(kB, A / std::sqrt(oracle::pi), 1.0, s), AveragedNonlinearity(kB, {1.0, -1}));
  const double g = A * A * std::sqrt(oracle::pi) / (2 * s);
  const double f4 = std::pow(A, 4) * s * std::sqrt(oracle::pi / 2);
  CHECK(r.E == doctest::Approx(0.5 * g - f4 / (8 * oracle::pi)).epsilon(1e-12));
  CHECK(r.pot == doctest::Approx(0.25 * f4).epsilon(1e-12));
}

TEST_CASE("scaling family") {
  const SpectralField c = random_field(kB, 2, localized());
  CHECK((scale(c, {1, 2, 0}).coeffs() - c.coeffs()).norm() == 0.0);

  const Norms n0 = norms(c);
  const Norms n1 = norms(scale(c, {1, 0, 0.3}));
  CHECK(n1.mass_L2 == doctest::Approx(std::exp(0.6) * n0.mass_L2).epsilon(1e-14));
  CHECK(n1.B1_sq == doctest::Approx(std::exp(0.6) * n0.B1_sq).epsilon(1e-14));

  // Pure z-dilation e^{mu/2} psi(y, e^{mu} z) keeps the mass.
  const Norms n2 = norms(scale(c, {0.5, 1, 0.2}));
  CHECK(n2.mass_L2 == doctest::Approx(n0.mass_L2).epsilon(1e-10));
  CHECK(n2.grad_z_sq == doctest::Approx(std::exp(0.4) * n0.grad_z_sq).epsilon(1e-10));

  // A field with energy near Nyquist cannot be compressed.
  CHECK_THROWS_AS(scale(random_field(kB, 3, {}), {1, 1, 1.0}), PreconditionError);
}

TEST_CASE("J closed forms") {
  const AveragedNonlinearity an(kB, {3.0, -1});
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SpectralField c = random_field(kB, seed, localized(2.0));
    const FunctionalReport r = report(c, an);
    CHECK(J_ab(r, 1, 0, an.params()) == doctest::Approx(r.I).epsilon(1e-12));
    CHECK(J_ab(r, 1, 2, an.params()) == doctest::Approx(r.P).epsilon(1e-12));
  }
  CHECK(J_ab(SpectralField(kB), 1, 1, an) == 0.0);
  CHECK_THROWS_AS(J_ab(SpectralField(kB), 1, 3, an), PreconditionError);
  CHECK_FALSE((ScaleParams{1, 2, 0}.admissible(2.0)));
  CHECK((ScaleParams{1, 2, 0}.admissible(2.5)));
}

TEST_CASE("finite-difference dS/dmu matches J") {
  const AveragedNonlinearity an(kB, {2.0, -1});
  const auto fd_error = [&](const SpectralField& c, double a, double b, double mu) {
    const double sp = report(scale(c, {a, b, mu}), an).S;
    const double sm = report(scale(c, {a, b, -mu}), an).S;
    const FunctionalReport r = report(c, an);
    const double closed = (a == 1 && b == 2) ? r.P : J_ab(r, a, b, an.params());
    return std::abs((sp - sm) / (2 * mu) - closed) / (std::abs(closed) + r.S);
  };
  const SpectralField c = random_field(kB, 7, localized(3.0));
  const double e1 = fd_error(c, 1, 2, 2e-2), e2 = fd_error(c, 1, 2, 1e-2);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));

  const double pairs[10][2] = {{1, 0}, {1, 0.5}, {1, 1}, {1, 1.5}, {2, 1}, {2, 3}, {0.5, 0.2}, {3, 1}, {1, 1.9}, {1.5, 2}};
  for (int i = 0; i < 10; ++i) {
    const SpectralField f = random_field(kB, 100 + i, localized(2.0));
    const double a = pairs[i][0], b = pairs[i][1];
    REQUIRE((ScaleParams{a, b, 0}.admissible(2.0)));
    const double big = fd_error(f, a, b, 1e-2), small = fd_error(f, a, b, 5e-3);
    CHECK(small < 1e-4);
    CHECK(small < 0.3 * big);
  }
}

TEST_CASE("Nehari rescale") {
  const AveragedNonlinearity an(kB, {2.5, -1});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField c = random_field(kB, seed, localized());
    const double alpha = compute_alpha(c, an);
    const FunctionalReport r = report(Complex(alpha) * c, an);
    CHECK(std::abs(r.I) < 1e-10 * (r.B1_sq + r.mass_L2));
    CHECK(compute_alpha(Complex(alpha) * c, an) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(compute_alpha(Complex(3.0) * c, an) == doctest::Approx(alpha / 3).epsilon(1e-13));
  }
}

TEST_CASE("classification") {
  const NonlinearityParams p{2.5, -1};
  const AveragedNonlinearity an(kB, p);
  const SpectralField c = random_field(kB, 9, localized());
  CHECK(classify(Complex(1e-3) * c, 1.0, an) == Region::Kplus);
  CHECK(classify(SpectralField(kB), 1.0, an) == Region::Kplus);
  CHECK(classify(Complex(1e3) * c, 1.0, an) == Region::Kminus);
  CHECK(classify(Complex(1e3) * c, 1e300, an) == Region::Kminus);
  CHECK(classify(c, 1e-12, an) == Region::AboveThreshold);
  CHECK_THROWS_AS(classify(c, 0.0, an), PreconditionError);

  const AveragedNonlinearity defocusing(kB, {2.5, 1});
  CHECK_THROWS_AS(classify(c, 1.0, defocusing), PreconditionError);
  const FunctionalReport r = report(c, defocusing);
  CHECK_FALSE(r.variational);
  CHECK(r.E > 0.5 * r.grad_z_sq);
  CHECK(to_string(Region::Kminus) == "Kminus");
}

TEST_CASE("K^3 E invariance at sigma = 4") {
  // Twice the z-resolution of kB, so the compressed packets stay in band.
  const BasisSpec b = oracle::small_basis(4, 128, 40.0, 24);
  const AveragedNonlinearity an(b, {4.0, -1});
  const SpectralField c = random_field(b, 13, localized());
  const K3E same = scale_invariant_check(c, 1.0, an);
  CHECK(same.before == same.after);
  const K3E k = scale_invariant_check(c, 2.0, an);
  CHECK(std::abs(k.after - k.before) < 1e-8 * std::abs(k.before));
  CHECK_THROWS_AS(scale_invariant_check(c, 2.0, AveragedNonlinearity(b, {2.0, -1})), PreconditionError);
}

TEST_CASE("Strichartz constant is finite and scale free") {
  const AveragedNonlinearity an(kB, {3.0, -1});
  const SpectralField c = random_field(kB, 17, localized());
  const double k1 = strichartz_constant(c, an);
  CHECK(std::isfinite(k1));
  CHECK(k1 > 0);
  CHECK(strichartz_constant(Complex(5.0) * c, an) == doctest::Approx(k1).epsilon(1e-12));
}

TEST_CASE("csv layout") {
  const std::string h = csv_header();
  REQUIRE(h.front() == '#');
  CHECK(h.find("time,M,E,G,K,S,I,P,B1_sq,pot") != std::string::npos);
  FunctionalReport r;
  r.time = 0.25;
  r.S = 1.0 / 3.0;
  const std::string row = csv_row(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 9);
  std::istringstream is(row);
  std::string cell;
  std::getline(is, cell, ',');
  CHECK(std::stod(cell) == 0.25);
  for (int i = 0; i < 5; ++i) std::getline(is, cell, ',');
  CHECK(std::stod(cell) == 1.0 / 3.0);
}
