#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rnls/functionals.hpp"
#include "rnls/propagators.hpp"

namespace rnls {

enum class Scheme { StrangRK4, LawsonRK4 };
enum class Equation { NLS, NLS2 };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

struct SchemeConfig {
  Scheme scheme = Scheme::LawsonRK4;
  Equation equation = Equation::NLS;
  double dt = 1e-3;
  double t_final = 1.0;
  int check_every = 1;            // report cadence in steps
  double blowup_multiple = 1e4;   // ||d_z phi||^2 trigger relative to t = 0

  void validate() const;
};

/// One step of i phi_t = -phi_zz + lambda F_av(phi) (NLS) or of
/// i psi_t = D psi + lambda F_av(psi) (NLS2).
class Stepper {
 public:
  Stepper(const AveragedNonlinearity& an, Scheme scheme, Equation eq);

  SpectralField step(const SpectralField& c, double dt);
  const AveragedNonlinearity& nonlinearity() const { return an_; }
  int evaluations() const { return evals_; }

 private:
  SpectralField rhs(const SpectralField& c);
  void flow(SpectralField& c, double t);

  const AveragedNonlinearity& an_;
  Scheme scheme_;
  Equation eq_;
  PhaseCache cache_;
  int evals_ = 0;
};

SpectralField step_nls(const SpectralField& c, double dt, const AveragedNonlinearity& an,
                       Scheme scheme = Scheme::LawsonRK4);
SpectralField step_nls2(const SpectralField& c, double dt, const AveragedNonlinearity& an,
                        Scheme scheme = Scheme::LawsonRK4);

enum class Termination { Completed, BlowupDetected, NanDetected };
std::string to_string(Termination t);

struct Drifts {
  double M = 0, K = 0, G = 0, E = 0;
};

struct Trajectory {
  std::vector<FunctionalReport> rows;
  Termination termination = Termination::Completed;
  double final_time = 0;
  SpectralField final_field;

  /// |X(t)-X(0)|/|X(0)| for M, K; |X(t)-X(0)|/(1+|X(0)|) for G, E.
  Drifts max_drifts() const;
};

struct Callbacks {
  /// Called with every recorded report (including t = 0 and the final row).
  std::function<void(const SpectralField&, const FunctionalReport&)> on_report;
  /// Called after every step; returning false stops the run as completed.
  std::function<bool(const SpectralField&)> on_step;
};

Trajectory evolve(const SpectralField& c0, const SchemeConfig& cfg, const AveragedNonlinearity& an,
                  const Callbacks& cb = {});

}  // namespace rnls
