#pragma once

#include <vector>

#include "rnls/functionals.hpp"

namespace rnls {

struct GroundStateOptions {
  int max_iter = 2000;
  double tol = 1e-8;  // target Euler-Lagrange residual
};

struct GroundStateResult {
  SpectralField Q;
  double d = 0;          // S[Q]
  double d_quotient = 0; // sigma/(2sigma+2) * quotient^{2+2/sigma}
  double residual = 0;   // ||(D+1)Q - F_av(Q)|| / ||Q||
  double quotient = 0;   // full B^1 norm / theta-averaged L^{2sigma+2} norm
  double nehari = 0;     // I[Q]
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_trace;
  std::vector<double> stabilizer_trace;  // M_k
};

/// ||(D+1)c - F_av(c)|| / ||c||.
double el_residual(const SpectralField& c, const AveragedNonlinearity& an);

/// Petviashvili iteration for H Q - Q_zz + Q - F_av(Q) = 0, followed by the
/// Nehari rescale.
GroundStateResult petviashvili_solve(const SpectralField& init, const AveragedNonlinearity& an,
                                     const GroundStateOptions& opts = {});

/// alpha with I[alpha c] = 0.
double compute_alpha(const SpectralField& c, const AveragedNonlinearity& an);
double compute_alpha(const FunctionalReport& r, double sigma);

/// M + E after the z-only Nehari projection (only ||d_z psi|| and the mass on
/// the quadratic side). Its infimum is 0 for sigma > 1: y-concentration drives
/// it down without bound.
double z_nehari_action(const SpectralField& c, const AveragedNonlinearity& an);

/// Scale-invariant Strichartz quotient of c.
double strichartz_quotient(const FunctionalReport& r, double sigma);

/// d = S[Q]; warns when the quotient form disagrees by more than 1e-6.
double threshold_d(const GroundStateResult& res);

/// P[c] + (d - S[c]) / 4; needs 2 < sigma < 4 and c in K-.
double gap_check(const GroundStateResult& res, const SpectralField& c, const AveragedNonlinearity& an);

/// S after projecting c onto the constraint set of the (a, b) family:
/// (1, 0) is the Nehari rescale, other pairs solve J^{a,b} = 0 along
/// psi_mu^{a,b} started from the Nehari rescale of c. Each part of S is
/// homogeneous along the family, so S at the root is evaluated from the
/// parts of c without resampling (the root can sit at dilations far beyond
/// the box). When (a, b) is not admissible for sigma, the J^{a,b} = 0 root is
/// taken along pure amplitude scaling instead.
double projected_action(const SpectralField& c, double a, double b, const AveragedNonlinearity& an);

}  // namespace rnls
