#include <doctest.h>

#include "oracles.hpp"
#include "rnls/evolution.hpp"
#include "rnls/virial.hpp"

using namespace rnls;

namespace {

const BasisSpec kWide = oracle::small_basis(2, 256, 100.0, 8);

RandomFieldOptions centered(double l2) {
  RandomFieldOptions o;
  o.packets = 2;
  o.packet_spread = 2;
  o.l2 = l2;
  return o;
}

}  // namespace

TEST_CASE("untruncated weight") {
  const VirialWeight w = parse_weight("z2", kWide);
  CHECK(w.kind == WeightKind::Z2);
  for (int j = 0; j < kWide.n_z; j += 17) {
    CHECK(w.chi[j] == kWide.z_at(j) * kWide.z_at(j));
    CHECK(w.chi2[j] == 2.0);
    CHECK(w.chi4[j] == 0.0);
  }
}

TEST_CASE("truncated weight bounds") {
  const double R = 22.0;
  const VirialWeight w = parse_weight("truncated:22", kWide);
  CHECK(w.R == R);
  CHECK(w.chi2.maxCoeff() <= 2 + 1e-12);
  CHECK(w.chi4.maxCoeff() <= 4 / R + 1e-12);
  for (int j = 0; j < kWide.n_z; ++j) {
    const double z = kWide.z_at(j);
    CHECK(w.chi[j] >= 0);
    CHECK(w.chi[j] <= z * z * (1 + 1e-14));
    if (std::abs(z) <= R) CHECK(w.chi[j] == z * z);
  }
  // Smooth join: chi', chi'', chi''' and chi'''' are flat at 2R; continuity at R.
  for (int d = 1; d <= 4; ++d) {
    CHECK(std::abs(truncated_chi(2 * R, R, d)) < 1e-12);
    CHECK(std::abs(truncated_chi(-2 * R, R, d)) < 1e-12);
  }
  CHECK(truncated_chi(R * (1 + 1e-9), R, 2) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(truncated_chi(R * (1 + 1e-9), R, 1) == doctest::Approx(2 * R).epsilon(1e-6));
  CHECK(truncated_chi(2 * R * (1 - 1e-12), R, 0) == doctest::Approx(truncated_chi(3 * R, R, 0)).epsilon(1e-10));

  // Derivatives are consistent with finite differences of the lower one.
  for (double z : {25.0, 31.0, -37.0, 42.0}) {
    for (int d = 0; d < 4; ++d) {
      const double h = 1e-5;
      const double fd = (truncated_chi(z + h, R, d) - truncated_chi(z - h, R, d)) / (2 * h);
      CHECK(fd == doctest::Approx(truncated_chi(z, R, d + 1)).epsilon(1e-6));
    }
  }
}

TEST_CASE("weight preconditions") {
  CHECK_THROWS_AS(parse_weight("truncated:10", kWide), PreconditionError);
  CHECK_THROWS_AS(parse_weight("truncated:30", kWide), PreconditionError);
  CHECK_THROWS_AS(parse_weight("truncated:x", kWide), ConfigError);
  CHECK_THROWS_AS(parse_weight("quartic", kWide), ConfigError);
}

TEST_CASE("W'' = 4P for the untruncated weight") {
  const VirialWeight w = parse_weight("z2", kWide);
  for (double s : {2.0, 2.5}) {
    const AveragedNonlinearity an(kWide, {s, -1});
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const SpectralField c = random_field(kWide, seed, centered(3.0));
      const FunctionalReport r = report(c, an);
      const VirialValues v = W_and_derivatives(c, w, an);
      CHECK(std::abs(v.Wpp - 4 * r.P) < 1e-10 * (std::abs(4 * r.P) + 8 * r.grad_z_sq));
      CHECK(v.W > 0);
    }
  }
  // Real field: W' vanishes.
  const AveragedNonlinearity an(kWide, {2.0, -1});
  CHECK(W_and_derivatives(gaussian_field(kWide, 1.0, 1.2, 2.0), w, an).Wp == doctest::Approx(0.0));
}

TEST_CASE("truncated and untruncated weights agree on localized fields") {
  const AveragedNonlinearity an(kWide, {2.0, -1});
  const VirialWeight z2 = parse_weight("z2", kWide), tr = parse_weight("truncated:24", kWide);
  const SpectralField c = random_field(kWide, 9, centered(2.0));
  const VirialValues a = W_and_derivatives(c, z2, an), b = W_and_derivatives(c, tr, an);
  CHECK(std::abs(a.W - b.W) < 1e-10 * a.W);
  CHECK(std::abs(a.Wp - b.Wp) < 1e-10 * a.W);
  CHECK(std::abs(a.Wpp - b.Wpp) < 1e-10 * std::abs(a.Wpp));
}

TEST_CASE("d2W/dt2 along a trajectory converges to W'' at second order") {
  const BasisSpec b = oracle::small_basis(2, 128, 40.0, 8);
  const AveragedNonlinearity an(b, {2.0, -1});
  const VirialWeight w = parse_weight("z2", b);
  const SpectralField c = random_field(b, 4, centered(6.0));
  const VirialValues v0 = W_and_derivatives(c, w, an);
  const auto fd_err = [&](double h) {
    const double wp = W_and_derivatives(step_nls(c, h, an), w, an).W;
    const double wm = W_and_derivatives(step_nls(c, -h, an), w, an).W;
    // First derivative too: dW/dt = W'.
    CHECK((wp - wm) / (2 * h) == doctest::Approx(v0.Wp).epsilon(1e-5));
    return std::abs((wp - 2 * v0.W + wm) / (h * h) - v0.Wpp);
  };
  // At least second order; W'''' is small here so the ratio is often nearer 16.
  const double e1 = fd_err(0.08), e2 = fd_err(0.04);
  CHECK(e1 / e2 > 3.6);
  CHECK(e2 < 1e-6 * std::abs(v0.Wpp));
}

TEST_CASE("concavity bookkeeping") {
  const BasisSpec b = oracle::small_basis(2, 64, 30.0, 8);
  const AveragedNonlinearity an(b, {2.0, -1});
  const NonlinearityParams& p = an.params();
  const SpectralField small = gaussian_field(b, 0.1, 1.0, 1.0);
  CHECK_THROWS_AS(concavity_constant(report(small, an), 10.0, p), PreconditionError);

  const FunctionalReport big = report(gaussian_field(b, 3.0, 1.0, 1.0), an);
  REQUIRE(big.P < 0);
  CHECK(concavity_constant(big, 1e6, p) == -big.P);
  const FunctionalReport r25 = report(gaussian_field(b, 3.0, 1.0, 1.0), AveragedNonlinearity(b, {2.5, -1}));
  CHECK(concavity_constant(r25, 1e6, {2.5, -1}) == doctest::Approx(0.25 * (1e6 - r25.S)));

  VirialWeight w = parse_weight("z2", b);
  std::vector<VirialSample> s = {{0, {4.0, 1.0, -10.0}}, {0.1, {4.1, 0.2, -9.0}}};
  const ConcavityReport cr = concavity_monitor(s, w, 2.0);
  CHECK(cr.concave);
  CHECK(cr.max_excess == doctest::Approx(-1.0));
  // 4 + t - 4 t^2 = 0.
  CHECK(cr.predicted_time == doctest::Approx((1 + std::sqrt(65.0)) / 8));
  CHECK_THROWS_AS(concavity_monitor({}, w, 1.0), PreconditionError);
}
