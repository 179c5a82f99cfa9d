#pragma once

#include <string>
#include <vector>

#include "rnls/functionals.hpp"

namespace rnls {

enum class WeightKind { Z2, Truncated };

/// Localized virial weight sampled on the z-grid. The truncated weight is
/// z^2 on |z| <= R, blends on R <= |z| <= 2R through chi' = 2R g((|z|-R)/R)
/// with a degree-9 polynomial g, and is flat beyond 2R.
struct VirialWeight {
  WeightKind kind = WeightKind::Z2;
  double R = 0;
  VectorXr chi, chi1, chi2, chi4;

  /// Smallest R for which chi'''' <= 4/R holds with this blend.
  static double min_radius();
};

/// chi^(der)(z) for der in {0, 1, 2, 3, 4}.
double truncated_chi(double z, double R, int der);

/// Throws PreconditionError if 2R exceeds L_z/2 or a bound fails on the grid.
VirialWeight build_weight(WeightKind kind, double R, const BasisSpec& basis);
VirialWeight parse_weight(const std::string& spec, const BasisSpec& basis);

struct VirialValues {
  double W = 0, Wp = 0, Wpp = 0;
};

VirialValues W_and_derivatives(const SpectralField& c, const VirialWeight& w, const AveragedNonlinearity& an);

struct VirialSample {
  double t = 0;
  VirialValues v;
};

struct ConcavityReport {
  double C1 = 0;
  double max_excess = 0;       // max_t (W'' + 4 C1)
  double predicted_time = 0;   // first zero of the quadratic envelope
  bool concave = false;        // W'' < 0 at every sample
};

/// C1 = (d - S)/4 for 2 < sigma < 4, C1 = -P for sigma = 2; rejects data
/// outside K-.
double concavity_constant(const FunctionalReport& r0, double d, const NonlinearityParams& p);

/// Checks W'' <= -4 C1 along the samples and reports the vanishing time of
/// W(0) + W'(0) t - 2 C1 t^2 (z^2 weight) or W(0) + W'(0) t - C1 t^2
/// (truncated weight).
ConcavityReport concavity_monitor(const std::vector<VirialSample>& samples, const VirialWeight& w, double C1);

}  // namespace rnls
