#include <doctest.h>

#include "oracles.hpp"
#include "rnls/nonlinearity.hpp"
#include "rnls/propagators.hpp"

using namespace rnls;

namespace {

double rel(const SpectralField& a, const SpectralField& b) {
  return (a.coeffs() - b.coeffs()).norm() / b.coeffs().norm();
}

// Orthonormal z-coefficient of grid samples: (dz / sqrt(L)) sum_j f_j e^{-i k z_j}.
VectorXc project_grid(const BasisSpec& b, const std::vector<Complex>& f) {
  VectorXc out(b.n_z);
  for (int k = 0; k < b.n_z; ++k) {
    Complex acc = 0;
    for (int j = 0; j < b.n_z; ++j) acc += f[j] * std::polar(1.0, -b.wavenumber(k) * b.z_at(j));
    out[k] = acc * b.dz() / std::sqrt(b.l_z);
  }
  return out;
}

SpectralField level0(const BasisSpec& b, const VectorXc& bz) {
  SpectralField c(b);
  for (int k = 0; k < b.n_z; ++k) c(0, 0, k) = bz[k];
  return c;
}

std::vector<Complex> profile(const BasisSpec& b) {
  std::vector<Complex> f(b.n_z);
  for (int j = 0; j < b.n_z; ++j) {
    const double z = b.z_at(j);
    f[j] = 1.3 * std::exp(-z * z / 2) * std::polar(1.0, 0.4 * z);
  }
  return f;
}

}  // namespace

TEST_CASE("zero field") {
  const BasisSpec b = oracle::small_basis(3, 16, 12.0);
  for (double s : {1.0, 2.5}) {
    const AveragedNonlinearity an(b, {s, -1});
    const auto r = an.evaluate(SpectralField(b));
    CHECK(r.f.coeffs().cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.pot == 0.0);
    const Pairings p = an.pairings(SpectralField(b));
    CHECK(p.re_pair_id == 0.0);
    CHECK(p.im_pair_id == 0.0);
    CHECK(p.im_pair_H == 0.0);
  }
}

TEST_CASE("level-0 cubic closed form") {
  // F_av(h0 h0 f) = (1/(2 pi)) |f|^2 f h0 h0, pot = (pi/2) (1/(2 pi)) int |f|^4.
  const BasisSpec b = oracle::small_basis(2, 32, 16.0, 8);
  const auto f = profile(b);
  const SpectralField c = level0(b, project_grid(b, f));
  std::vector<Complex> g(b.n_z);
  double f4 = 0;
  for (int j = 0; j < b.n_z; ++j) {
    g[j] = std::norm(f[j]) * f[j] / (2 * oracle::pi);
    f4 += std::pow(std::abs(f[j]), 4) * b.dz();
  }
  const SpectralField expect = level0(b, project_grid(b, g));
  const AveragedNonlinearity an(b, {1.0, -1});
  const auto r = an.evaluate(c);
  CHECK(rel(r.f, expect) < 1e-13);
  CHECK(r.pot == doctest::Approx(0.25 * f4).epsilon(1e-13));
  CHECK(rel(eval_resonant_sum(c), expect) < 1e-13);
}

TEST_CASE("quadrature matches the resonant sum at sigma = 1") {
  const BasisSpec b = oracle::small_basis(6, 16, 12.0, *exact_theta_count(1.0, 6));
  const AveragedNonlinearity an(b, {1.0, -1});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField c = random_field(b, seed);
    const SpectralField a = an.F_av(c), o = eval_resonant_sum(c);
    CHECK((a.coeffs() - o.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("single-level and two-level fields") {
  const BasisSpec b = oracle::small_basis(4, 16, 12.0, 32);
  SpectralField c = random_field(b, 11);
  for (int n1 = 0; n1 < b.modes(); ++n1)
    for (int n2 = 0; n2 < b.modes(); ++n2)
      if (n1 + n2 != 3)
        for (int k = 0; k < b.n_z; ++k) c(n1, n2, k) = 0;
  const SpectralField r = eval_resonant_sum(c);
  double off = 0;
  for (int n1 = 0; n1 < b.modes(); ++n1)
    for (int n2 = 0; n2 < b.modes(); ++n2)
      if (n1 + n2 != 3)
        for (int k = 0; k < b.n_z; ++k) off = std::max(off, std::abs(r(n1, n2, k)));
  CHECK(off < 1e-14);
  CHECK(r.coeffs().norm() > 1e-5);

  // Add level 1; quadrature above the exactness threshold reproduces the sum.
  SpectralField d = random_field(b, 12);
  for (int n1 = 0; n1 < b.modes(); ++n1)
    for (int n2 = 0; n2 < b.modes(); ++n2)
      if (n1 + n2 == 1)
        for (int k = 0; k < b.n_z; ++k) c(n1, n2, k) = d(n1, n2, k);
  const AveragedNonlinearity an(b, {1.0, -1});
  CHECK(rel(an.F_av(c), eval_resonant_sum(c)) < 1e-12);
}

TEST_CASE("potential refinement in N_theta") {
  const BasisSpec b = oracle::small_basis(4, 16, 12.0);
  const SpectralField c = random_field(b, 21);
  // Integer sigma: exact from the threshold on.
  const int n2 = *exact_theta_count(2.0, 4);
  const double p1 = AveragedNonlinearity(b, {2.0, -1}, ThetaQuadrature::midpoint(n2)).potential(c);
  const double p2 = AveragedNonlinearity(b, {2.0, -1}, ThetaQuadrature::midpoint(2 * n2)).potential(c);
  CHECK(std::abs(p1 - p2) / p2 < 1e-12);
  // Non-integer sigma: successive differences shrink.
  double prev = 1e300, last = 0;
  for (int n : {8, 16, 32, 64, 128}) {
    const double p = AveragedNonlinearity(b, {2.5, -1}, ThetaQuadrature::midpoint(n)).potential(c);
    if (n > 8) {
      const double diff = std::abs(p - last) / p;
      CHECK(diff < prev);
      prev = diff;
    }
    last = p;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("pairings vanish") {
  const BasisSpec b = oracle::small_basis(4, 16, 12.0);
  for (double s : {1.0, 2.0, 3.0}) {
    const AveragedNonlinearity an(b, {s, -1}, ThetaQuadrature::midpoint(*exact_theta_count(s, 4)));
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Pairings p = an.pairings(random_field(b, seed));
      CHECK(p.re_pair_id > 0);
      CHECK(std::abs(p.im_pair_id) < 1e-11);
      CHECK(std::abs(p.im_pair_H) < 1e-10);
    }
  }
}

TEST_CASE("interval halving") {
  const BasisSpec b = oracle::small_basis(4, 16, 12.0);
  for (double s : {1.0, 2.5}) {
    const AveragedNonlinearity half(b, {s, -1}, ThetaQuadrature::midpoint(24, 0, oracle::pi / 2));
    const AveragedNonlinearity full(b, {s, -1}, ThetaQuadrature::midpoint(48, 0, oracle::pi));
    const SpectralField c = random_field(b, 31);
    CHECK(rel(full.F_av(c), half.F_av(c)) < 1e-12);
  }
}

TEST_CASE("gauge, V-covariance and homogeneity") {
  const BasisSpec b = oracle::small_basis(4, 16, 12.0);
  const SpectralField c = random_field(b, 41);
  const AveragedNonlinearity an(b, {2.0, -1}, ThetaQuadrature::midpoint(*exact_theta_count(2.0, 4)));
  const Complex g = std::polar(1.0, 0.83);
  CHECK(rel(an.F_av(g * c), g * an.F_av(c)) < 1e-13);
  CHECK(rel(an.F_av(apply_V(c, 0.377)), apply_V(an.F_av(c), 0.377)) < 1e-12);
  CHECK(rel(an.F_av(Complex(1.7) * c), Complex(std::pow(1.7, 5)) * an.F_av(c)) < 1e-13);

  const AveragedNonlinearity frac(b, {2.5, -1});
  CHECK(rel(frac.F_av(Complex(0.6) * c), Complex(std::pow(0.6, 6)) * frac.F_av(c)) < 1e-13);
  CHECK(rel(frac.F_av(g * c), g * frac.F_av(c)) < 1e-13);
}

TEST_CASE("free-function forms agree with the evaluator") {
  const BasisSpec b = oracle::small_basis(3, 16, 12.0);
  const SpectralField c = random_field(b, 51);
  const NonlinearityParams p{3.0, -1};
  const auto q = ThetaQuadrature::midpoint(20);
  const AveragedNonlinearity an(b, p, q);
  CHECK(rel(eval_F_av(c, p, q), an.F_av(c)) == 0.0);
  CHECK(potential_energy(c, p, q) == an.potential(c));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((NonlinearityParams{5.0, -1}.validate()), ConfigError);
  CHECK_THROWS_AS((NonlinearityParams{2.0, 0.5}.validate()), ConfigError);
  CHECK_NOTHROW((NonlinearityParams{0.5, 1}.validate()));
  CHECK(exact_theta_count(2.0, 16) == 49);
  CHECK_FALSE(exact_theta_count(2.5, 16).has_value());
}
