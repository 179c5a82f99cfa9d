// rnls: command-line driver for the averaged-NLS toolkit.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rnls/checkpoint.hpp"
#include "rnls/run.hpp"
#include "rnls/virial.hpp"

namespace {

using nlohmann::json;
using namespace rnls;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::optional<double> sigma, lambda, dt, t_final;
  std::optional<std::string> scheme, out;

  void add_to(CLI::App* app, bool config_required) {
    auto* opt = app->add_option("-c,--config", config, "config file");
    if (config_required) opt->required();
    app->add_option("--set", sets, "override: section.key=value (repeatable)");
    app->add_option("--sigma", sigma, "nonlinearity power");
    app->add_option("--lambda", lambda, "sign: -1 focusing, +1 defocusing, 0 linear");
    app->add_option("--dt", dt, "time step");
    app->add_option("--t-final", t_final, "final time");
    app->add_option("--scheme", scheme, "lawson_rk4 | strang_rk4");
    app->add_option("--out", out, "output directory (ground-state: checkpoint path)");
  }

  // Config file, then --set overrides, then dedicated flags.
  SimulationConfig resolve(bool out_is_dir = true) const {
    SimulationConfig cfg = config.empty() ? SimulationConfig{} : load_config(config);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (sigma) cfg.nl.sigma = *sigma;
    if (lambda) cfg.nl.lambda = *lambda;
    if (dt) cfg.scheme.dt = *dt;
    if (t_final) cfg.scheme.t_final = *t_final;
    if (scheme) cfg.scheme.scheme = parse_scheme(*scheme);
    if (out && out_is_dir) cfg.output_dir = *out;
    return cfg;
  }
};

int cmd_ground_state(const Common& cm, const std::string& json_path) {
  SimulationConfig cfg = cm.resolve(false);
  cfg.nl.lambda = -1.0;
  validate(cfg, false);
  const AveragedNonlinearity an(cfg.basis, cfg.nl);
  const auto res = solve_ground_state(cfg, an);
  json js = {{"sigma", cfg.nl.sigma},      {"d", res.d},
             {"residual", res.residual},   {"iterations", res.iterations},
             {"quotient", res.quotient},   {"converged", res.converged},
             {"d_quotient", res.d_quotient}, {"nehari", res.nehari}};
  const std::string ckpt = cm.out.value_or("q.rnls");
  write_checkpoint(ckpt, res.Q, cfg.nl);
  js["checkpoint"] = ckpt;
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw IOError("cannot write '" + json_path + "'");
    f << js.dump(2) << "\n";
  }
  std::cout << js.dump(2) << std::endl;
  return res.converged ? kExitOk : kExitNumerical;
}

int cmd_resonant(const Common& cm, int fields, std::uint64_t seed) {
  SimulationConfig cfg = cm.resolve();
  cfg.nl.sigma = 1.0;
  if (!cm.config.empty() || !cm.sets.empty()) validate(cfg, false);
  const AveragedNonlinearity an(cfg.basis, cfg.nl);
  double worst = 0;
  for (int i = 0; i < fields; ++i) {
    const SpectralField c = random_field(cfg.basis, seed + i);
    const SpectralField a = an.F_av(c);
    const SpectralField b = eval_resonant_sum(c);
    worst = std::max(worst, (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff());
  }
  json js = {{"fields", fields},
             {"n_hermite", cfg.basis.n_hermite},
             {"n_theta", cfg.basis.n_theta},
             {"exact_n_theta", *exact_theta_count(1.0, cfg.basis.n_hermite)},
             {"max_discrepancy", worst}};
  std::cout << js.dump(2) << std::endl;
  return kExitOk;
}

int cmd_classify(const Common& cm, std::optional<double> d) {
  SimulationConfig cfg = cm.resolve();
  validate(cfg);
  const AveragedNonlinearity an(cfg.basis, cfg.nl);
  double dd = d.value_or(cfg.ground_state.d);
  if (!(dd > 0)) {
    const auto gs = solve_ground_state(cfg, an);
    if (!gs.converged) throw NumericalError("ground state did not converge; pass --d");
    dd = gs.d;
  }
  const SpectralField c = initial_data(cfg, an);
  const FunctionalReport r = report(c, an);
  json js = {{"S", r.S}, {"P", r.P}, {"I", r.I}, {"d", dd}, {"region", to_string(classify(r, dd, cfg.nl))}};
  std::cout << js.dump(2) << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rnls: spectral toolkit for NLS with a theta-averaged nonlinearity"};
  app.require_subcommand(1);

  Common sim, vir, diag, gs, res, cls;
  auto* c_sim = app.add_subcommand("simulate", "evolve a config's initial datum");
  sim.add_to(c_sim, true);

  auto* c_vir = app.add_subcommand("virial", "simulate and append W, W', W'' columns");
  vir.add_to(c_vir, true);
  std::string weight;
  c_vir->add_option("--weight", weight, "z2 | truncated:R");

  auto* c_diag = app.add_subcommand("diagnose", "simulate with extra diagnostics");
  diag.add_to(c_diag, true);
  bool scatter = false, diag_virial = false;
  c_diag->add_flag("--scatter", scatter, "space-time norms and asymptotic profile");
  c_diag->add_flag("--virial", diag_virial, "virial columns");

  auto* c_gs = app.add_subcommand("ground-state", "Petviashvili ground state and threshold d");
  gs.add_to(c_gs, false);
  std::string json_path;
  c_gs->add_option("--json", json_path, "also write the summary JSON here");

  auto* c_res = app.add_subcommand("resonant-check", "sigma=1 quadrature vs resonant-sum oracle");
  res.add_to(c_res, false);
  int fields = 20;
  std::uint64_t seed = 1;
  c_res->add_option("--fields", fields, "number of random fields");
  c_res->add_option("--seed", seed, "first seed");

  auto* c_cls = app.add_subcommand("classify", "K+/K- membership of the initial datum");
  cls.add_to(c_cls, true);
  std::optional<double> dval;
  c_cls->add_option("--d", dval, "stored threshold d");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*c_sim) return run(sim.resolve(), {}, std::cerr);
    if (*c_vir) {
      SimulationConfig cfg = vir.resolve();
      if (!weight.empty()) cfg.virial_weight = weight;
      return run(cfg, {true, false}, std::cerr);
    }
    if (*c_diag) return run(diag.resolve(), {diag_virial, scatter}, std::cerr);
    if (*c_gs) return cmd_ground_state(gs, json_path);
    if (*c_res) return cmd_resonant(res, fields, seed);
    if (*c_cls) return cmd_classify(cls, dval);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
