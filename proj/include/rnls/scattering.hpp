#pragma once

#include <vector>

#include "rnls/evolution.hpp"

namespace rnls {

struct ScatteringIndices {
  double p = 0, q = 0, s = 0, p0 = 0;
};

/// p = 2sigma/(sigma-1), q = 2sigma, s = 3(sigma-2)/(2(sigma-1)),
/// p0 = 2sigma(sigma-1); defined for 2 < sigma < 4.
ScatteringIndices scattering_indices(double sigma);

/// ||V(theta)phi||_{L^q_theta L^{p0}_x} over [0, pi/2].
double theta_space_norm(const SpectralField& c, const ScatteringIndices& ix, const AveragedNonlinearity& an);

/// max_z ||H^{1/2} phi(., z)||_{L^2_y} on the grid (a lower bound of the
/// continuum L^inf_z).
double aux_sup_norm(const SpectralField& c, const ZTransform& zt);

/// Left-endpoint accumulators of the space-time norms.
class ScatterAccumulator {
 public:
  ScatterAccumulator(const AveragedNonlinearity& an);

  /// Adds dt * ||.||^{2q} and dt * aux^4; returns the accumulated L^{2q}_t norm.
  double increment(const SpectralField& c, double dt);
  double stnorm() const;
  double aux_norm() const;
  const ScatteringIndices& indices() const { return ix_; }

 private:
  const AveragedNonlinearity& an_;
  ScatteringIndices ix_;
  double st_pow_ = 0, aux_pow_ = 0;
};

double st_norm_increment(const SpectralField& c, const AveragedNonlinearity& an, double dt,
                         ScatterAccumulator& acc);

struct ScatterReport {
  std::vector<double> profile_times;
  Eigen::MatrixXd profile_dists;   // full-B^1 distances of the pulled-back profiles
  std::vector<double> defects;     // consecutive distances
  double last_defect = 0;
  bool monotone = false;           // defects nonincreasing
  SpectralField profile;           // last pulled-back field
  double stnorm = 0, aux_norm = 0;
};

/// Pulls each checkpoint back by the free flow (U(-t) for NLS, e^{itD} for
/// NLS2) and measures the Cauchy defects.
ScatterReport asymptotic_profile(const std::vector<SpectralField>& checkpoints,
                                 Equation eq = Equation::NLS);

}  // namespace rnls
