#include "rnls/run.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "rnls/checkpoint.hpp"
#include "rnls/scattering.hpp"
#include "rnls/virial.hpp"

namespace rnls {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::Precondition: return kExitConfig;
    case ErrorKind::Numerical: return kExitNumerical;
    default: return kExitIO;
  }
}

GroundStateResult solve_ground_state(const SimulationConfig& cfg, const AveragedNonlinearity& an) {
  const auto& gs = cfg.ground_state;
  const SpectralField seed = gaussian_field(cfg.basis, 1.0, gs.y_width, gs.z_width);
  return petviashvili_solve(seed, an, {gs.max_iter, gs.tol});
}

SpectralField initial_data(const SimulationConfig& cfg, const AveragedNonlinearity& an) {
  const auto& ic = cfg.initial;
  if (ic.kind == "gaussian") {
    return gaussian_field(cfg.basis, ic.amplitude, ic.y_width, ic.z_width, ic.z_velocity);
  }
  if (ic.kind == "checkpoint") {
    Checkpoint cp = read_checkpoint(ic.path, cfg.basis.n_theta);
    if (!(cp.field.basis() == cfg.basis)) {
      throw ConfigError("checkpoint basis (" + describe(cp.field.basis()) + ") differs from the config (" +
                        describe(cfg.basis) + ")");
    }
    return cp.field;
  }
  SpectralField q;
  if (!ic.path.empty()) {
    Checkpoint cp = read_checkpoint(ic.path, cfg.basis.n_theta);
    if (!(cp.field.basis() == cfg.basis)) throw ConfigError("stored ground state has a different basis");
    q = cp.field;
  } else {
    const auto gs = solve_ground_state(cfg, an);
    if (!gs.converged) throw NumericalError("ground state did not converge");
    q = gs.Q;
  }
  q.set_time(0);
  return Complex(ic.amplitude_factor) * q;
}

int run(const SimulationConfig& cfg, const RunOptions& opts, std::ostream& log) {
  namespace fs = std::filesystem;
  validate(cfg);
  const AveragedNonlinearity an(cfg.basis, cfg.nl);
  const SpectralField c0 = initial_data(cfg, an);

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IOError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
  const fs::path out(cfg.output_dir);
  std::ofstream csv(out / "diagnostics.csv");
  if (!csv) throw IOError("cannot write diagnostics.csv in '" + cfg.output_dir + "'");

  std::optional<VirialWeight> weight;
  if (opts.virial) weight = parse_weight(cfg.virial_weight, cfg.basis);
  std::optional<ScatterAccumulator> scatter;
  if (opts.scatter) scatter.emplace(an);

  std::string header = csv_header();
  if (weight) {
    header.insert(header.find('\n'), "; W, Wp, Wpp: virial integrals for weight " + cfg.virial_weight);
    header.insert(header.size() - 1, ",W,Wp,Wpp");
  }
  csv << header;

  std::vector<SpectralField> profile_samples;
  SpectralField prev;
  bool have_prev = false;
  Callbacks cb;
  cb.on_report = [&](const SpectralField& f, const FunctionalReport& r) {
    csv << csv_row(r);
    if (weight) {
      const auto v = W_and_derivatives(f, *weight, an);
      char buf[128];
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g", v.W, v.Wp, v.Wpp);
      csv << buf;
    }
    csv << "\n";
    if (scatter) {
      if (have_prev) scatter->increment(prev, f.time() - prev.time());
      prev = f;
      have_prev = true;
    }
  };
  long step = 0;
  cb.on_step = [&](const SpectralField& f) {
    ++step;
    if (cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0) {
      write_checkpoint((out / ("checkpoint_" + std::to_string(step) + ".rnls")).string(), f, cfg.nl);
      if (scatter) profile_samples.push_back(f);
    }
    return true;
  };
  if (scatter) profile_samples.push_back(c0);

  log << "evolving " << describe(cfg.basis) << " sigma=" << cfg.nl.sigma << " lambda=" << cfg.nl.lambda
      << " to T=" << cfg.scheme.t_final << "\n";
  const Trajectory tr = evolve(c0, cfg.scheme, an, cb);
  csv.close();
  if (tr.termination != Termination::NanDetected) {
    write_checkpoint((out / "final.rnls").string(), tr.final_field, cfg.nl);
  }

  nlohmann::json js;
  js["termination"] = to_string(tr.termination);
  js["final_time"] = tr.final_time;
  const Drifts d = tr.max_drifts();
  js["max_drifts"] = {{"M", d.M}, {"K", d.K}, {"G", d.G}, {"E", d.E}};
  js["d_if_computed"] = nullptr;
  js["classification"] = nullptr;
  if (cfg.ground_state.d > 0) {
    js["d_if_computed"] = cfg.ground_state.d;
    if (cfg.nl.lambda == -1.0) js["classification"] = to_string(classify(tr.rows.front(), cfg.ground_state.d, cfg.nl));
  }
  if (scatter) {
    js["scatter"]["stnorm"] = scatter->stnorm();
    js["scatter"]["aux_L4LinfL2"] = scatter->aux_norm();
    if (tr.termination != Termination::NanDetected &&
        (profile_samples.empty() || profile_samples.back().time() < tr.final_time)) {
      profile_samples.push_back(tr.final_field);
    }
    if (profile_samples.size() >= 3) {
      const auto rep = asymptotic_profile(profile_samples, cfg.scheme.equation);
      js["scatter"]["profile_times"] = rep.profile_times;
      js["scatter"]["profile_defects"] = rep.defects;
      js["scatter"]["last_defect"] = rep.last_defect;
      js["scatter"]["monotone"] = rep.monotone;
    } else {
      js["scatter"]["profile_defects"] = nullptr;
      log << "asymptotic profile needs at least 3 samples; set output.checkpoint_every\n";
    }
  }
  std::ofstream sj(out / "summary.json");
  if (!sj) throw IOError("cannot write summary.json");
  sj << js.dump(2) << "\n";
  log << "termination: " << to_string(tr.termination) << " at t=" << tr.final_time << "\n";
  return tr.termination == Termination::NanDetected ? kExitNumerical : kExitOk;
}

}  // namespace rnls
