#include "rnls/evolution.hpp"

#include <cmath>

namespace rnls {

std::string to_string(Scheme s) { return s == Scheme::StrangRK4 ? "strang_rk4" : "lawson_rk4"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "strang_rk4") return Scheme::StrangRK4;
  if (s == "lawson_rk4") return Scheme::LawsonRK4;
  throw ConfigError("unknown scheme '" + s + "' (expected strang_rk4 or lawson_rk4)");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::BlowupDetected: return "blowup_detected";
    default: return "nan_detected";
  }
}

void SchemeConfig::validate() const {
  std::vector<std::string> errs;
  if (!(dt > 0)) errs.push_back("dt must be positive");
  if (!(t_final >= 0)) errs.push_back("t_final must be >= 0");
  if (check_every < 1) errs.push_back("check_every must be >= 1");
  if (!(blowup_multiple > 1)) errs.push_back("blowup multiple must exceed 1");
  if (!errs.empty()) {
    std::string msg = "invalid scheme:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw ConfigError(msg);
  }
}

Stepper::Stepper(const AveragedNonlinearity& an, Scheme scheme, Equation eq)
    : an_(an), scheme_(scheme), eq_(eq), cache_(an.basis()) {}

SpectralField Stepper::rhs(const SpectralField& c) {
  ++evals_;
  const double lam = an_.params().lambda;
  if (lam == 0.0) return SpectralField(c.basis(), c.time());
  SpectralField f = an_.F_av(c);
  f *= Complex(0, -lam);
  return f;
}

void Stepper::flow(SpectralField& c, double t) {
  apply(*cache_.get(eq_ == Equation::NLS ? FlowKind::U : FlowKind::D, t), c);
}

SpectralField Stepper::step(const SpectralField& c, double h) {
  const double t0 = c.time();
  if (scheme_ == Scheme::LawsonRK4) {
    SpectralField half = c;
    flow(half, h / 2);
    SpectralField k1 = rhs(c);
    SpectralField k1h = k1;
    flow(k1h, h / 2);
    SpectralField k2 = rhs(half + Complex(h / 2) * k1h);
    SpectralField k3 = rhs(half + Complex(h / 2) * k2);
    SpectralField k3h = k3;
    flow(k3h, h / 2);
    SpectralField full = half;
    flow(full, h / 2);
    SpectralField k4 = rhs(full + Complex(h) * k3h);
    // U(h)phi + h/6 [U(h)k1 + 2U(h/2)(k2 + k3) + k4]
    SpectralField mid = k2 + k3;
    flow(mid, h / 2);
    flow(k1, h);
    SpectralField out = full;
    out.coeffs() += (h / 6) * (k1.coeffs() + 2.0 * mid.coeffs() + k4.coeffs());
    out.set_time(t0 + h);
    return out;
  }
  SpectralField u = c;
  flow(u, h / 2);
  SpectralField k1 = rhs(u);
  SpectralField k2 = rhs(u + Complex(h / 2) * k1);
  SpectralField k3 = rhs(u + Complex(h / 2) * k2);
  SpectralField k4 = rhs(u + Complex(h) * k3);
  u.coeffs() += (h / 6) * (k1.coeffs() + 2.0 * k2.coeffs() + 2.0 * k3.coeffs() + k4.coeffs());
  flow(u, h / 2);
  u.set_time(t0 + h);
  return u;
}

SpectralField step_nls(const SpectralField& c, double dt, const AveragedNonlinearity& an, Scheme scheme) {
  return Stepper(an, scheme, Equation::NLS).step(c, dt);
}

SpectralField step_nls2(const SpectralField& c, double dt, const AveragedNonlinearity& an, Scheme scheme) {
  return Stepper(an, scheme, Equation::NLS2).step(c, dt);
}

Drifts Trajectory::max_drifts() const {
  Drifts d;
  if (rows.empty()) return d;
  const auto& r0 = rows.front();
  const auto rel = [](double x, double x0) { return x0 == 0 ? std::abs(x) : std::abs(x - x0) / std::abs(x0); };
  for (const auto& r : rows) {
    d.M = std::max(d.M, rel(r.M, r0.M));
    d.K = std::max(d.K, rel(r.K, r0.K));
    d.G = std::max(d.G, std::abs(r.G - r0.G) / (1 + std::abs(r0.G)));
    d.E = std::max(d.E, std::abs(r.E - r0.E) / (1 + std::abs(r0.E)));
  }
  return d;
}

Trajectory evolve(const SpectralField& c0, const SchemeConfig& cfg, const AveragedNonlinearity& an,
                  const Callbacks& cb) {
  cfg.validate();
  if (!c0.all_finite()) throw NumericalError("initial data is not finite");
  Stepper stepper(an, cfg.scheme, cfg.equation);
  Trajectory tr;
  const double t_start = c0.time();
  SpectralField c = c0;

  auto record = [&](const SpectralField& f) {
    FunctionalReport r = report(f, an);
    tr.rows.push_back(r);
    if (cb.on_report) cb.on_report(f, r);
  };
  record(c);
  const double g0 = norms(c).grad_z_sq;

  // Fixed dt; the last step is shortened to land on t_final.
  const long nfull = long(std::floor(cfg.t_final / cfg.dt + 1e-9));
  const double rest = cfg.t_final - nfull * cfg.dt;
  const long nsteps = nfull + (rest > 1e-12 * cfg.dt ? 1 : 0);
  bool recorded_last = true;
  for (long n = 1; n <= nsteps; ++n) {
    const double h = (n <= nfull) ? cfg.dt : rest;
    c = stepper.step(c, h);
    c.set_time(t_start + (n <= nfull ? n * cfg.dt : cfg.t_final));
    recorded_last = false;
    if (!c.all_finite()) {
      tr.termination = Termination::NanDetected;
      break;
    }
    if (g0 > 0 && norms(c).grad_z_sq > cfg.blowup_multiple * g0) {
      tr.termination = Termination::BlowupDetected;
      record(c);
      recorded_last = true;
      break;
    }
    if (n % cfg.check_every == 0 || n == nsteps) {
      record(c);
      recorded_last = true;
    }
    if (cb.on_step && !cb.on_step(c)) break;
  }
  if (!recorded_last && tr.termination == Termination::Completed) record(c);
  tr.final_time = c.time();
  tr.final_field = c;
  return tr;
}

}  // namespace rnls
