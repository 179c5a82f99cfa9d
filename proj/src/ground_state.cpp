#include "rnls/ground_state.hpp"

#include <cmath>

namespace rnls {

namespace {

// (D + 1) multiplier of every coefficient.
VectorXr shifted_symbol(const BasisSpec& b) {
  VectorXr s(b.spectral_size());
  Eigen::Index i = 0;
  for (int n1 = 0; n1 < b.modes(); ++n1)
    for (int n2 = 0; n2 < b.modes(); ++n2)
      for (int k = 0; k < b.n_z; ++k, ++i) {
        const double kk = b.wavenumber(k);
        s[i] = BasisSpec::eigenvalue(n1, n2) + kk * kk + 1.0;
      }
  return s;
}

double residual_of(const SpectralField& u, const SpectralField& f, const VectorXr& sym) {
  const double un = u.coeffs().norm();
  if (un == 0) return 0;
  return (sym.cwiseProduct(u.coeffs()) - f.coeffs()).norm() / un;
}

}  // namespace

double el_residual(const SpectralField& c, const AveragedNonlinearity& an) {
  return residual_of(c, an.F_av(c), shifted_symbol(c.basis()));
}

double compute_alpha(const FunctionalReport& r, double sigma) {
  if (!(r.pot > 0)) throw PreconditionError("Nehari rescale needs a nonzero potential integral");
  return std::pow((r.mass_L2 + r.B1_sq) / ((2 / kPi) * r.pot), 1 / (2 * sigma));
}

double compute_alpha(const SpectralField& c, const AveragedNonlinearity& an) {
  return compute_alpha(report(c, an), an.params().sigma);
}

double z_nehari_action(const SpectralField& c, const AveragedNonlinearity& an) {
  const FunctionalReport r = report(c, an);
  const double s = an.params().sigma;
  if (!(r.pot > 0)) throw PreconditionError("z-only projection needs a nonzero potential integral");
  const double q = r.mass_L2 + r.grad_z_sq;
  const double alpha = std::pow(q / ((2 / kPi) * r.pot), 1 / (2 * s));
  return s / (2 * s + 2) * alpha * alpha * q;
}

double strichartz_quotient(const FunctionalReport& r, double sigma) {
  return std::sqrt(r.mass_L2 + r.B1_sq) / std::pow((2 / kPi) * r.pot, 1 / (2 * sigma + 2));
}

GroundStateResult petviashvili_solve(const SpectralField& init, const AveragedNonlinearity& an,
                                     const GroundStateOptions& opts) {
  const auto& p = an.params();
  if (p.lambda != -1.0) throw PreconditionError("ground states exist only for the focusing sign");
  if (!(p.sigma > 0 && p.sigma < 4)) throw PreconditionError("ground-state solver needs 0 < sigma < 4");
  if (init.coeffs().squaredNorm() == 0) throw PreconditionError("ground-state init must be nonzero");

  const VectorXr sym = shifted_symbol(init.basis());
  const double gamma = (2 * p.sigma + 1) / (2 * p.sigma);
  GroundStateResult res;
  SpectralField u = init;
  u.set_time(0);
  for (int it = 1; it <= opts.max_iter; ++it) {
    res.iterations = it;
    const SpectralField f = an.F_av(u);
    const double num = u.coeffs().cwiseAbs2().dot(sym);
    const double den = inner(f, u).real();
    const double mk = num / den;
    const double r = residual_of(u, f, sym);
    res.residual_trace.push_back(r);
    res.stabilizer_trace.push_back(mk);
    if (r < 0.1 * opts.tol) {
      res.converged = true;
      break;
    }
    if (!std::isfinite(mk) || mk <= 0 || mk > 1e200 || mk < 1e-200 || !std::isfinite(r)) {
      warn("Petviashvili iteration diverged at step " + std::to_string(it));
      break;
    }
    u.coeffs() = std::pow(mk, gamma) * f.coeffs().cwiseQuotient(sym.cast<Complex>());
  }
  if (!u.all_finite() || u.coeffs().squaredNorm() == 0) throw NumericalError("ground-state iterate degenerated");

  u *= Complex(compute_alpha(u, an));
  res.Q = u;
  const FunctionalReport r = report(u, an);
  res.residual = el_residual(u, an);
  res.d = r.S;
  res.nehari = r.I;
  res.quotient = strichartz_quotient(r, p.sigma);
  res.d_quotient = p.sigma / (2 * p.sigma + 2) * std::pow(res.quotient, 2 + 2 / p.sigma);
  if (!res.converged) {
    warn("Petviashvili iteration stopped after " + std::to_string(res.iterations) +
         " iterations with residual " + std::to_string(res.residual));
  }
  return res;
}

double threshold_d(const GroundStateResult& res) {
  if (!res.converged) throw PreconditionError("threshold needs a converged ground state");
  if (std::abs(res.d - res.d_quotient) > 1e-6 * std::abs(res.d)) {
    warn("threshold formulas disagree: S[Q]=" + std::to_string(res.d) +
         " quotient form=" + std::to_string(res.d_quotient));
  }
  return res.d;
}

double gap_check(const GroundStateResult& res, const SpectralField& c, const AveragedNonlinearity& an) {
  const double s = an.params().sigma;
  if (!(s > 2 && s < 4)) throw PreconditionError("gap check is stated for 2 < sigma < 4");
  const FunctionalReport r = report(c, an);
  if (classify(r, res.d, an.params()) != Region::Kminus) {
    throw PreconditionError("gap check needs a K- datum");
  }
  return r.P + 0.25 * (res.d - r.S);
}

double projected_action(const SpectralField& c, double a, double b, const AveragedNonlinearity& an) {
  const auto& p = an.params();
  if (p.lambda != -1.0) throw PreconditionError("projection needs the focusing sign");
  const SpectralField c1 = Complex(compute_alpha(c, an)) * c;
  const FunctionalReport r = report(c1, an);
  const double s = p.sigma;
  const double A = r.K + r.M, B = 0.5 * r.grad_z_sq, C = r.pot / (kPi * (s + 1));
  const double ep = 2 * a - b, eq = 2 * a + b, er = (2 * s + 2) * a - b;

  if (b == 0 || !ScaleParams{a, b, 0}.admissible(s)) {
    // Pure amplitude: r^{2sigma} = (ep A + eq B) / (er C).
    const double r2 = std::pow((ep * A + eq * B) / (er * C), 1 / s);
    return (A + B) * r2 - C * std::pow(r2, s + 1);
  }
  // J(mu) e^{-ep mu} = ep A + eq B e^{(eq-ep) mu} - er C e^{(er-ep) mu}, decreasing past its
  // maximum; bracket the positive-to-negative crossing and bisect.
  const auto j = [&](double mu) {
    return ep * A + eq * B * std::exp((eq - ep) * mu) - er * C * std::exp((er - ep) * mu);
  };
  double lo = -1, hi = 1;
  while (j(lo) <= 0 && lo > -60) lo *= 2;
  while (j(hi) >= 0 && hi < 60) hi *= 2;
  if (!(j(lo) > 0 && j(hi) < 0)) throw NumericalError("no J^{a,b} = 0 crossing along the scaling family");
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (j(mid) > 0 ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  return A * std::exp(ep * mu) + B * std::exp(eq * mu) - C * std::exp(er * mu);
}

}  // namespace rnls
