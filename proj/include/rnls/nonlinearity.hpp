#pragma once

#include <optional>

#include "rnls/field.hpp"

namespace rnls {

/// Uniform midpoint rule on [a, b).
struct ThetaQuadrature {
  VectorXr nodes;
  VectorXr weights;
  double a = 0.0;
  double b = kPi / 2;

  static ThetaQuadrature midpoint(int n, double a = 0.0, double b = kPi / 2);
  int size() const { return int(nodes.size()); }
  double total() const { return weights.sum(); }
};

struct NonlinearityParams {
  double sigma = 1.0;
  double lambda = -1.0;

  /// Throws ConfigError; `evolution` additionally enforces 1/2 <= sigma <= 4.
  void validate(bool evolution = true) const;
};

/// Smallest N_theta for which the midpoint rule reproduces the average
/// exactly at integer sigma (nullopt for non-integer sigma).
std::optional<int> exact_theta_count(double sigma, int n_hermite);

struct Pairings {
  double re_pair_id = 0;  // Re <F_av(phi), phi>
  double im_pair_id = 0;  // Im <F_av(phi), phi>
  double im_pair_H = 0;   // Im <F_av(phi), H phi>
};

/// Evaluator for the theta-averaged nonlinearity and the integrals built
/// from |V(theta)phi|. Pointwise work happens on a Gauss-Hermite grid scaled
/// for the weight e^{-(sigma+1)|y|^2} with enough nodes to integrate the
/// Hermite products exactly at integer sigma.
class AveragedNonlinearity {
 public:
  AveragedNonlinearity(const BasisSpec& basis, NonlinearityParams params, ThetaQuadrature quad);
  AveragedNonlinearity(const BasisSpec& basis, NonlinearityParams params);
  ~AveragedNonlinearity();
  AveragedNonlinearity(AveragedNonlinearity&&) noexcept;
  AveragedNonlinearity& operator=(AveragedNonlinearity&&) noexcept;

  const BasisSpec& basis() const;
  const NonlinearityParams& params() const;
  const ThetaQuadrature& quadrature() const;
  const HermiteGrid& grid() const;
  const ZTransform& ztransform() const;

  struct Result {
    SpectralField f;   // F_av(phi), unsigned
    double pot = 0.0;  // int_0^{pi/2} int |V(theta)phi|^{2sigma+2}
  };
  Result evaluate(const SpectralField& c, bool want_f = true) const;

  SpectralField F_av(const SpectralField& c) const { return evaluate(c, true).f; }
  double potential(const SpectralField& c) const { return evaluate(c, false).pot; }
  Pairings pairings(const SpectralField& c) const;

  /// Per-node integrals int |V(theta_i)phi|^power * zweight(z) dx on a grid
  /// scaled by beta = power/2 (zweight may be null for 1).
  VectorXr theta_moments(const SpectralField& c, double power, const VectorXr* zweight = nullptr) const;

  /// int_0^{pi/2} int |V(theta)phi|^{2sigma+2} zweight(z) dx.
  double weighted_potential(const SpectralField& c, const VectorXr& zweight) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Free-function forms.
SpectralField eval_F_av(const SpectralField& c, const NonlinearityParams& params,
                        const ThetaQuadrature& quad);
double potential_energy(const SpectralField& c, const NonlinearityParams& params,
                        const ThetaQuadrature& quad);
Pairings gateaux_pairings(const SpectralField& c, const NonlinearityParams& params,
                          const ThetaQuadrature& quad);

/// Exact resonant sum for sigma = 1:
/// sum over n1 + n2 = n3 + n of Pi_n(Pi_{n1}phi Pi_{n2}phi conj(Pi_{n3}phi)).
SpectralField eval_resonant_sum(const SpectralField& c, double sigma = 1.0, int cap = 12);

}  // namespace rnls
