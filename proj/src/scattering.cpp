#include "rnls/scattering.hpp"

#include <cmath>

namespace rnls {

ScatteringIndices scattering_indices(double sigma) {
  if (!(sigma > 2 && sigma < 4)) throw PreconditionError("scattering indices need 2 < sigma < 4");
  ScatteringIndices ix;
  ix.p = 2 * sigma / (sigma - 1);
  ix.q = 2 * sigma;
  ix.s = 3 * (sigma - 2) / (2 * (sigma - 1));
  ix.p0 = 2 * sigma * (sigma - 1);
  return ix;
}

double theta_space_norm(const SpectralField& c, const ScatteringIndices& ix, const AveragedNonlinearity& an) {
  const VectorXr mom = an.theta_moments(c, ix.p0);
  const auto& quad = an.quadrature();
  double acc = 0;
  for (int i = 0; i < quad.size(); ++i) acc += quad.weights[i] * std::pow(mom[i], ix.q / ix.p0);
  return std::pow((kPi / 2) / quad.total() * acc, 1 / ix.q);
}

double aux_sup_norm(const SpectralField& c, const ZTransform& zt) {
  const auto& b = c.basis();
  const VectorXc u = to_mixed(c, zt);
  VectorXr col = VectorXr::Zero(b.n_z);
  for (int n1 = 0; n1 < b.modes(); ++n1)
    for (int n2 = 0; n2 < b.modes(); ++n2)
      col += BasisSpec::eigenvalue(n1, n2) * u.segment(c.index(n1, n2, 0), b.n_z).cwiseAbs2();
  return std::sqrt(col.maxCoeff());
}

ScatterAccumulator::ScatterAccumulator(const AveragedNonlinearity& an)
    : an_(an), ix_(scattering_indices(an.params().sigma)) {}

double ScatterAccumulator::increment(const SpectralField& c, double dt) {
  st_pow_ += dt * std::pow(theta_space_norm(c, ix_, an_), 2 * ix_.q);
  aux_pow_ += dt * std::pow(aux_sup_norm(c, an_.ztransform()), 4);
  return stnorm();
}

double ScatterAccumulator::stnorm() const { return std::pow(st_pow_, 1 / (2 * ix_.q)); }
double ScatterAccumulator::aux_norm() const { return std::pow(aux_pow_, 0.25); }

double st_norm_increment(const SpectralField& c, const AveragedNonlinearity& an, double dt,
                         ScatterAccumulator& acc) {
  (void)an;
  return acc.increment(c, dt);
}

ScatterReport asymptotic_profile(const std::vector<SpectralField>& cps, Equation eq) {
  if (cps.size() < 3) throw PreconditionError("asymptotic profile needs at least 3 checkpoints");
  ScatterReport r;
  std::vector<SpectralField> pulled;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const double t = cps[i].time();
    if (i > 0 && !(t > cps[i - 1].time())) throw PreconditionError("checkpoint times must increase");
    r.profile_times.push_back(t);
    pulled.push_back(eq == Equation::NLS ? apply_U(cps[i], -t) : apply_D_flow(cps[i], -t));
  }
  const int n = int(pulled.size());
  r.profile_dists = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) r.profile_dists(i, j) = r.profile_dists(j, i) = b1_distance(pulled[i], pulled[j]);
  r.monotone = true;
  for (int i = 0; i + 1 < n; ++i) {
    r.defects.push_back(r.profile_dists(i, i + 1));
    if (i > 0 && r.defects[i] > r.defects[i - 1]) r.monotone = false;
  }
  r.last_defect = r.defects.back();
  r.profile = pulled.back();
  return r;
}

}  // namespace rnls
