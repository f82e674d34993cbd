// dol: a numerical laboratory for the scalar delayed negative-feedback
// equation x'(t) = -mu x(t) + f(x(t-1)). Subcommands expose the integrator,
// the characteristic spectrum, cone/monotonicity checks, oscillation
// classification, and seeded experiment campaigns.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "dol/dol.hpp"

namespace {

struct ModelOpts {
  double mu = 0.0;
  std::string family = "tanh:2";
};

void add_model_opts(CLI::App* cmd, ModelOpts& mo) {
  cmd->add_option("--mu", mo.mu, "decay rate mu >= 0")->capture_default_str();
  cmd->add_option("--family", mo.family,
                  "feedback family: tanh:A | wright:A | atan:A | linear:B")
      ->capture_default_str();
}

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delayed negative-feedback oscillation laboratory"};
  app.require_subcommand(1);

  ModelOpts mo;
  std::string phi_spec = "const:0.5";
  std::string phit_spec;
  std::string out_path;
  std::string format = "csv";
  double T = 50.0, horizon = 200.0, stride = 0.25;
  int grid_n = dol::default_grid_n;
  int kmax = 3, count = 200, nsamples = 200, threads = 0;
  std::uint64_t seed = 0;
  double mu = 0.0, beta = 2.0;
  std::vector<double> epsilons;
  std::string config_path, out_dir = "out";

  auto* simulate = app.add_subcommand("simulate", "integrate and export t,x,dxdt");
  add_model_opts(simulate, mo);
  simulate->add_option("--phi", phi_spec, "initial condition spec")->capture_default_str();
  simulate->add_option("--T", T, "time horizon")->capture_default_str();
  simulate->add_option("--stride", stride, "output stride")->capture_default_str();
  simulate->add_option("--grid-n", grid_n, "grid points per unit interval")->capture_default_str();
  simulate->add_option("--out", out_path, "output file (default stdout)");

  auto* classify_cmd = app.add_subcommand("classify", "oscillation verdict for an initial state");
  add_model_opts(classify_cmd, mo);
  classify_cmd->add_option("--phi", phi_spec)->capture_default_str();
  classify_cmd->add_option("--horizon", horizon)->capture_default_str();
  classify_cmd->add_option("--stride", stride)->capture_default_str();
  classify_cmd->add_option("--grid-n", grid_n)->capture_default_str();
  classify_cmd->add_option("--out", out_path);

  auto* roots_cmd = app.add_subcommand("roots", "characteristic roots per strip");
  roots_cmd->add_option("--mu", mu)->capture_default_str();
  roots_cmd->add_option("--beta", beta)->capture_default_str();
  roots_cmd->add_option("--kmax", kmax)->capture_default_str();
  roots_cmd->add_option("--format", format, "csv or json")->capture_default_str();
  roots_cmd->add_option("--out", out_path);

  auto* mono = app.add_subcommand("monotone-test",
                                  "cone invariance (one state) or order preservation (a pair)");
  add_model_opts(mono, mo);
  mono->add_option("--phi", phi_spec)->capture_default_str();
  mono->add_option("--phitilde", phit_spec, "second state; enables the pair check");
  mono->add_option("--T", T)->capture_default_str();
  mono->add_option("--stride", stride)->capture_default_str();
  mono->add_option("--grid-n", grid_n)->capture_default_str();
  mono->add_option("--out", out_path);

  auto* ratio_cmd = app.add_subcommand("ratio", "leading/complement norm ratio trace of a pair");
  add_model_opts(ratio_cmd, mo);
  ratio_cmd->add_option("--phi", phi_spec)->capture_default_str();
  ratio_cmd->add_option("--phitilde", phit_spec)->required();
  ratio_cmd->add_option("--T", T)->capture_default_str();
  ratio_cmd->add_option("--kmax", kmax)->capture_default_str();
  ratio_cmd->add_option("--grid-n", grid_n)->capture_default_str();
  ratio_cmd->add_option("--out", out_path);

  auto* sweep = app.add_subcommand("sweep", "seeded classification sweep over sampled data");
  add_model_opts(sweep, mo);
  sweep->add_option("--sampler", phi_spec, "sampler spec, e.g. fourier:1,8,0.5")
      ->capture_default_str();
  sweep->add_option("--count", count)->capture_default_str();
  sweep->add_option("--horizon", horizon)->capture_default_str();
  sweep->add_option("--stride", stride)->capture_default_str();
  sweep->add_option("--seed", seed)->capture_default_str();
  sweep->add_option("--threads", threads)->capture_default_str();
  sweep->add_option("--grid-n", grid_n)->capture_default_str();
  sweep->add_option("--out", out_path);

  auto* perturb = app.add_subcommand("perturb", "constant-sign perturbation experiment");
  add_model_opts(perturb, mo);
  perturb->add_option("--phi", phi_spec)->capture_default_str();
  perturb->add_option("--epsilons", epsilons, "strictly increasing positive shifts")
      ->required();
  perturb->add_option("--horizon", horizon)->capture_default_str();
  perturb->add_option("--grid-n", grid_n)->capture_default_str();
  perturb->add_option("--out", out_path);

  auto* kappa_cmd = app.add_subcommand("kappa", "sampled norm-cone radius estimate");
  kappa_cmd->add_option("--mu", mu)->capture_default_str();
  kappa_cmd->add_option("--beta", beta)->capture_default_str();
  kappa_cmd->add_option("--nsamples", nsamples)->capture_default_str();
  kappa_cmd->add_option("--seed", seed)->capture_default_str();
  kappa_cmd->add_option("--kmax", kmax)->capture_default_str();
  kappa_cmd->add_option("--out", out_path);

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out_dir, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream sink_file;
    if (simulate->parsed()) {
      const dol::Model m = dol::parse_model(mo.mu, mo.family);
      const dol::Segment phi = dol::build_ic(dol::parse_ic(phi_spec), m, grid_n);
      const dol::Trajectory traj = dol::evolve(m, phi, T);
      dol::write_trajectory_csv(open_sink(sink_file, out_path), traj, stride);
    } else if (classify_cmd->parsed()) {
      const dol::Model m = dol::parse_model(mo.mu, mo.family);
      const dol::Segment phi = dol::build_ic(dol::parse_ic(phi_spec), m, grid_n);
      const dol::OscillationVerdict v = dol::classify(m, phi, horizon, stride);
      open_sink(sink_file, out_path) << dol::to_json(v).dump(2) << "\n";
    } else if (roots_cmd->parsed()) {
      std::vector<dol::CharRoot> roots;
      for (int k = 0; k <= kmax; ++k) {
        const auto rs = dol::roots_in_strip(mu, beta, k);
        roots.insert(roots.end(), rs.begin(), rs.end());
      }
      auto& os = open_sink(sink_file, out_path);
      if (format == "json")
        os << dol::to_json(roots).dump(2) << "\n";
      else
        dol::write_roots_csv(os, roots);
    } else if (mono->parsed()) {
      const dol::Model m = dol::parse_model(mo.mu, mo.family);
      const dol::Segment phi = dol::build_ic(dol::parse_ic(phi_spec), m, grid_n);
      dol::MonotonicityReport rep;
      if (phit_spec.empty()) {
        rep = dol::check_cone_invariance(m, phi, T, stride);
      } else {
        const dol::Segment phit = dol::build_ic(dol::parse_ic(phit_spec), m, grid_n);
        rep = dol::check_order_preservation(m, phi, phit, T, stride);
      }
      open_sink(sink_file, out_path) << dol::to_json(rep).dump(2) << "\n";
    } else if (ratio_cmd->parsed()) {
      const dol::Model m = dol::parse_model(mo.mu, mo.family);
      const dol::SpectralDecomp d = dol::build_decomp(m.mu, m.beta, kmax, grid_n);
      const dol::Segment phi = dol::build_ic(dol::parse_ic(phi_spec), m, grid_n);
      const dol::Segment phit = dol::build_ic(dol::parse_ic(phit_spec), m, grid_n);
      const dol::RatioTrace tr = dol::ratio_trace(d, m, phi, phit, T);
      dol::write_ratio_csv(open_sink(sink_file, out_path), tr);
    } else if (sweep->parsed()) {
      const dol::Model m = dol::parse_model(mo.mu, mo.family);
      const dol::SweepReport rep = dol::density_sweep(m, dol::parse_ic(phi_spec), count, horizon,
                                                      seed, stride, threads, grid_n);
      open_sink(sink_file, out_path) << dol::to_json(rep).dump(2) << "\n";
    } else if (perturb->parsed()) {
      const dol::Model m = dol::parse_model(mo.mu, mo.family);
      const dol::Segment phi = dol::build_ic(dol::parse_ic(phi_spec), m, grid_n);
      const dol::PerturbReport rep =
          dol::perturbation_experiment(m, phi, epsilons, horizon, phi_spec);
      open_sink(sink_file, out_path) << dol::to_json(rep).dump(2) << "\n";
    } else if (kappa_cmd->parsed()) {
      const dol::SpectralDecomp d = dol::build_decomp(mu, beta, kmax);
      const double kh = dol::estimate_kappa(d, nsamples, seed);
      dol::json j{{"schema", dol::schema_version},
                  {"kind", "kappa"},
                  {"mu", mu},
                  {"beta", beta},
                  {"kappa_hat", kh},
                  {"gram_cond", d.gram_cond}};
      open_sink(sink_file, out_path) << j.dump(2) << "\n";
    } else if (run->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config: " + config_path);
      dol::json cfg = dol::json::parse(in);
      return dol::run_report(cfg, out_dir);
    }
  } catch (const dol::invariant_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
