#pragma once

#include <string>

#include "rnls/nonlinearity.hpp"

namespace rnls {

struct FunctionalReport {
  double time = 0;
  double M = 0, E = 0, G = 0, K = 0, S = 0, I = 0, P = 0;
  double B1_sq = 0;
  double pot = 0;
  double grad_z_sq = 0;
  double mass_L2 = 0;
  bool variational = true;  // false for lambda != -1
};

/// All functionals from one F_av-free pass (only the potential integral is
/// needed).
FunctionalReport report(const SpectralField& c, const AveragedNonlinearity& an);
FunctionalReport report(const SpectralField& c, const NonlinearityParams& params,
                        const ThetaQuadrature& quad);

/// Assemble a report from norms and pot; used when pot is already known.
FunctionalReport assemble(const Norms& n, double momentum, double pot, const NonlinearityParams& p,
                          double time);

struct ScaleParams {
  double a = 1, b = 0, mu = 0;
  bool admissible(double sigma) const;
};

/// e^{a mu} psi(y, e^{b mu} z) by trigonometric resampling in z. Throws
/// PreconditionError when the rescaled field would not be resolved (tail mass
/// above `tail_tol`, relative).
SpectralField scale(const SpectralField& c, const ScaleParams& sp, double tail_tol = 1e-10);

/// Closed form of d/dmu S[psi_mu^{a,b}] at mu = 0.
double J_ab(const FunctionalReport& r, double a, double b, const NonlinearityParams& p);
double J_ab(const SpectralField& c, double a, double b, const AveragedNonlinearity& an);

enum class Region { Kplus, Kminus, AboveThreshold };
std::string to_string(Region r);

Region classify(const FunctionalReport& r, double d_threshold, const NonlinearityParams& p);
Region classify(const SpectralField& c, double d_threshold, const AveragedNonlinearity& an);

struct K3E {
  double before = 0, after = 0;
};
/// sigma = 4 only: K^3 E before and after mu^{1/4} phi(y, mu z).
K3E scale_invariant_check(const SpectralField& c, double mu, const AveragedNonlinearity& an);

/// Empirical constant of the Strichartz-type bound: the L^{2sigma+2}_{theta,x}
/// norm over [0, pi/2] divided by the mass/full-B^1 interpolation product.
double strichartz_constant(const SpectralField& c, const AveragedNonlinearity& an);

/// CSV serialization, column order time,M,E,G,K,S,I,P,B1_sq,pot.
std::string csv_header();
std::string csv_row(const FunctionalReport& r);

}  // namespace rnls
