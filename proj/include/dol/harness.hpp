#pragma once

// Experiment harnesses: randomized density sweeps, constant-sign perturbation
// experiments, rapid-oscillation seeds, and config-driven report runs. Every
// randomized experiment is a pure function of (config, seed): per-item RNG
// streams derive from (seed, index), so the thread count never changes the
// results.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dol/classify.hpp"
#include "dol/cones.hpp"
#include "dol/io.hpp"

namespace dol {

/// Deterministic parallel map over [0, count): results are keyed by index.
template <class Fn>
inline void parallel_for_index(int count, int threads, Fn&& fn) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct SampleSummary {
  int index = 0;
  VerdictKind kind = VerdictKind::NotSlowByHorizon;
  double entry_time = 0.0;    // EventuallySlow
  double min_zero_gap = 0.0;  // NotSlowByHorizon
  double tail_norm = 0.0;     // ConvergedToZero
  bool slow_gaps_ok = true;   // post-entry zero gaps all exceed the delay
};

struct SweepReport {
  std::string model_spec;
  double mu = 0.0;
  std::string sampler_spec;
  std::uint64_t seed = 0;
  int count = 0;
  double horizon = 0.0;
  double stride = 0.25;
  std::vector<SampleSummary> samples;
  int n_slow = 0, n_converged = 0, n_not_slow = 0;
  double fraction_slow = 0.0, fraction_converged = 0.0, fraction_not_slow = 0.0;
  std::map<int, int> entry_time_histogram;  // bin floor(entry/5) -> count
  std::vector<int> rerun_candidates;        // NotSlowByHorizon stratum
  std::string caveat;
};

namespace detail {

/// Post-entry slow-gap check: consecutive zeros in [entry_time + 1, horizon]
/// must be more than one delay apart.
inline bool slow_gaps_ok(const OscillationVerdict& v) {
  if (v.kind != VerdictKind::EventuallySlow) return true;
  const double lo = v.entry_time + 1.0;
  double prev = -1e300;
  for (const auto& z : v.zero_records) {
    if (z.time < lo) continue;
    if (prev > -1e299 && z.time - prev <= 1.0) return false;
    prev = z.time;
  }
  return true;
}

}  // namespace detail

/// Classify `count` sampled initial states and aggregate the verdicts.
inline SweepReport density_sweep(const Model& m, const IcSpec& sampler, int count, double horizon,
                                 std::uint64_t seed, double stride = 0.25, int threads = 0,
                                 int n = default_grid_n) {
  if (count < 1) throw std::invalid_argument("sweep needs at least one sample");
  SweepReport rep;
  rep.model_spec = m.spec_string();
  rep.mu = m.mu;
  rep.sampler_spec = sampler.text;
  rep.seed = seed;
  rep.count = count;
  rep.horizon = horizon;
  rep.stride = stride;
  rep.samples.resize(count);

  parallel_for_index(count, threads, [&](int i) {
    const std::uint64_t item = seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i));
    const Segment phi = build_ic(sampler, m, n, item);
    const OscillationVerdict v = classify(m, phi, horizon, stride);
    SampleSummary s;
    s.index = i;
    s.kind = v.kind;
    s.entry_time = v.entry_time;
    s.min_zero_gap = v.min_zero_gap;
    s.tail_norm = v.tail_norm;
    s.slow_gaps_ok = detail::slow_gaps_ok(v);
    rep.samples[i] = s;
  });

  for (const auto& s : rep.samples) {
    switch (s.kind) {
      case VerdictKind::EventuallySlow:
        ++rep.n_slow;
        ++rep.entry_time_histogram[static_cast<int>(s.entry_time / 5.0)];
        break;
      case VerdictKind::ConvergedToZero: ++rep.n_converged; break;
      case VerdictKind::NotSlowByHorizon:
        ++rep.n_not_slow;
        rep.rerun_candidates.push_back(s.index);
        break;
    }
  }
  rep.fraction_slow = static_cast<double>(rep.n_slow) / count;
  rep.fraction_converged = static_cast<double>(rep.n_converged) / count;
  rep.fraction_not_slow = static_cast<double>(rep.n_not_slow) / count;
  rep.caveat =
      "finite-horizon evidence only: no finite run can certify that eventually "
      "slowly oscillating initial data are dense; NotSlowByHorizon samples are "
      "listed for re-runs at a longer horizon";
  return rep;
}

struct PerturbRow {
  double epsilon = 0.0;
  VerdictKind kind = VerdictKind::NotSlowByHorizon;
  double entry_time = 0.0;
};

struct PerturbReport {
  std::string model_spec;
  std::string base_spec;
  double horizon = 0.0;
  std::vector<PerturbRow> rows;
  std::optional<double> smallest_slow_epsilon;
};

/// Classify phi + epsilon * 1 for each epsilon (a strictly positive
/// perturbation direction).
inline PerturbReport perturbation_experiment(const Model& m, const Segment& phi,
                                             const std::vector<double>& epsilons, double horizon,
                                             const std::string& base_spec = "") {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (epsilons[i] <= 0) throw invariant_error("epsilons must be positive");
    if (i > 0 && epsilons[i] <= epsilons[i - 1])
      throw invariant_error("epsilons must be strictly increasing");
  }
  PerturbReport rep;
  rep.model_spec = m.spec_string();
  rep.base_spec = base_spec;
  rep.horizon = horizon;
  const Segment ones = constant_segment(phi.n, 1.0);
  for (double eps : epsilons) {
    const OscillationVerdict v = classify(m, phi + eps * ones, horizon);
    rep.rows.push_back({eps, v.kind, v.entry_time});
    if (v.kind == VerdictKind::EventuallySlow && !rep.smallest_slow_epsilon)
      rep.smallest_slow_epsilon = eps;
  }
  return rep;
}

/// Long-lived many-sign-change initial data: the strip-k eigenfunction of
/// the linearization at 0 (k >= 1 has at least 2k sign changes), scaled to
/// amp in C^1-norm.
inline Segment rapid_seed(const Model& m, const SpectralDecomp& d, int k, double amp) {
  if (k < 1) throw std::invalid_argument("rapid seed needs a strip index k >= 1");
  if (m.mu != d.mu || std::abs(m.beta - d.beta) > 1e-12)
    throw std::invalid_argument("decomposition does not match the model linearization");
  return amp * eigen_ic(d.mu, d.beta, k, d.n);
}

// ---------------------------------------------------------------------------
// Report JSON
// ---------------------------------------------------------------------------

inline json to_json(const SweepReport& r) {
  json j;
  j["schema"] = schema_version;
  j["kind"] = "sweep";
  j["model"] = {{"mu", r.mu}, {"family", r.model_spec}};
  j["sampler"] = r.sampler_spec;
  j["seed"] = r.seed;
  j["count"] = r.count;
  j["horizon"] = r.horizon;
  j["stride"] = r.stride;
  j["n_slow"] = r.n_slow;
  j["n_converged"] = r.n_converged;
  j["n_not_slow"] = r.n_not_slow;
  j["fraction_slow"] = r.fraction_slow;
  j["fraction_converged"] = r.fraction_converged;
  j["fraction_not_slow"] = r.fraction_not_slow;
  json hist = json::array();
  for (const auto& [bin, cnt] : r.entry_time_histogram)
    hist.push_back({{"t_lo", 5.0 * bin}, {"t_hi", 5.0 * (bin + 1)}, {"count", cnt}});
  j["entry_time_histogram"] = hist;
  j["rerun_candidates"] = r.rerun_candidates;
  json samples = json::array();
  for (const auto& s : r.samples) {
    json e{{"index", s.index}, {"kind", to_string(s.kind)}};
    switch (s.kind) {
      case VerdictKind::EventuallySlow:
        e["entry_time"] = s.entry_time;
        e["slow_gaps_ok"] = s.slow_gaps_ok;
        break;
      case VerdictKind::NotSlowByHorizon: e["min_zero_gap"] = s.min_zero_gap; break;
      case VerdictKind::ConvergedToZero: e["tail_norm"] = s.tail_norm; break;
    }
    samples.push_back(e);
  }
  j["samples"] = samples;
  j["caveat"] = r.caveat;
  return j;
}

inline json to_json(const PerturbReport& r) {
  json j;
  j["schema"] = schema_version;
  j["kind"] = "perturb";
  j["model"] = r.model_spec;
  j["base"] = r.base_spec;
  j["horizon"] = r.horizon;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json e{{"epsilon", row.epsilon}, {"kind", to_string(row.kind)}};
    if (row.kind == VerdictKind::EventuallySlow) e["entry_time"] = row.entry_time;
    rows.push_back(e);
  }
  j["rows"] = rows;
  if (r.smallest_slow_epsilon)
    j["smallest_slow_epsilon"] = *r.smallest_slow_epsilon;
  else
    j["smallest_slow_epsilon"] = nullptr;
  return j;
}

// ---------------------------------------------------------------------------
// Config-driven runs
// ---------------------------------------------------------------------------

/// Run one experiment described by a JSON config (fields mirror the CLI
/// flags) and write report.json plus CSV side files into out_dir. Returns 0
/// on success; throws invariant_error for violations detected during the run
/// (mapped to exit code 2 by the CLI) and std::invalid_argument /
/// nlohmann parse errors for malformed configs (exit code 1).
inline int run_report(const json& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (!cfg.contains("experiment")) throw std::invalid_argument("config needs an experiment field");
  const std::string experiment = cfg.at("experiment").get<std::string>();
  const double fraction_tol =
      cfg.contains("tolerances") && cfg["tolerances"].contains("fraction_sum")
          ? cfg["tolerances"]["fraction_sum"].get<double>()
          : 1e-12;

  fs::create_directories(out_dir);
  auto open_out = [&](const std::string& name) {
    std::ofstream os(fs::path(out_dir) / name);
    if (!os) throw std::runtime_error("cannot write to " + out_dir + "/" + name);
    return os;
  };
  auto model_from = [&]() {
    const auto& mj = cfg.at("model");
    return parse_model(mj.at("mu").get<double>(), mj.at("family").get<std::string>());
  };
  const int n = cfg.value("grid_n", default_grid_n);

  json report;
  if (experiment == "sweep") {
    const Model m = model_from();
    const IcSpec sampler = parse_ic(cfg.at("sampler").get<std::string>());
    const SweepReport rep = density_sweep(
        m, sampler, cfg.at("count").get<int>(), cfg.at("horizon").get<double>(),
        cfg.value("seed", 0ull), cfg.value("stride", 0.25), cfg.value("threads", 0), n);
    const double frac_sum = rep.fraction_slow + rep.fraction_converged + rep.fraction_not_slow;
    auto csv = open_out("summary.csv");
    csv << "index,kind,entry_time,min_zero_gap,tail_norm\n";
    for (const auto& s : rep.samples)
      csv << s.index << "," << to_string(s.kind) << "," << detail::fmt(s.entry_time) << ","
          << detail::fmt(s.min_zero_gap) << "," << detail::fmt(s.tail_norm) << "\n";
    report = to_json(rep);
    auto os = open_out("report.json");
    os << report.dump(2) << "\n";
    if (rep.n_slow + rep.n_converged + rep.n_not_slow != rep.count)
      throw invariant_error("verdict counts do not sum to the sample count");
    if (std::abs(frac_sum - 1.0) > fraction_tol)
      throw invariant_error("verdict fractions do not sum to 1 within tolerance");
    for (const auto& s : rep.samples)
      if (!s.slow_gaps_ok) throw invariant_error("slow verdict with a zero gap below the delay");
  } else if (experiment == "perturb") {
    const Model m = model_from();
    const IcSpec base = parse_ic(cfg.at("phi").get<std::string>());
    const std::vector<double> eps = cfg.at("epsilons").get<std::vector<double>>();
    const PerturbReport rep = perturbation_experiment(m, build_ic(base, m, n), eps,
                                                      cfg.at("horizon").get<double>(), base.text);
    report = to_json(rep);
    auto os = open_out("report.json");
    os << report.dump(2) << "\n";
  } else if (experiment == "classify") {
    const Model m = model_from();
    const Segment phi = build_ic(parse_ic(cfg.at("phi").get<std::string>()), m, n);
    const OscillationVerdict v =
        classify(m, phi, cfg.at("horizon").get<double>(), cfg.value("stride", 0.25));
    report = to_json(v);
    auto os = open_out("report.json");
    os << report.dump(2) << "\n";
  } else if (experiment == "simulate") {
    const Model m = model_from();
    const Segment phi = build_ic(parse_ic(cfg.at("phi").get<std::string>()), m, n);
    const Trajectory traj = evolve(m, phi, cfg.at("T").get<double>());
    auto csv = open_out("trajectory.csv");
    write_trajectory_csv(csv, traj, cfg.value("stride", 1.0 / n));
    report = {{"schema", schema_version}, {"kind", "simulate"}, {"span", traj.span}};
    auto os = open_out("report.json");
    os << report.dump(2) << "\n";
  } else if (experiment == "ratio") {
    const Model m = model_from();
    const Segment phi = build_ic(parse_ic(cfg.at("phi").get<std::string>()), m, n);
    const Segment phit = build_ic(parse_ic(cfg.at("phitilde").get<std::string>()), m, n);
    const SpectralDecomp d = build_decomp(m.mu, m.beta, cfg.value("kmax", 3), n);
    const RatioTrace tr = ratio_trace(d, m, phi, phit, cfg.at("T").get<double>());
    auto csv = open_out("trace.csv");
    write_ratio_csv(csv, tr);
    report = {{"schema", schema_version},
              {"kind", "ratio"},
              {"t0", tr.t0},
              {"max_ratio", tr.max_ratio}};
    auto os = open_out("report.json");
    os << report.dump(2) << "\n";
  } else if (experiment == "roots") {
    const double mu = cfg.at("mu").get<double>();
    const double beta = cfg.at("beta").get<double>();
    std::vector<CharRoot> roots;
    for (int k = 0; k <= cfg.at("kmax").get<int>(); ++k) {
      const auto rs = roots_in_strip(mu, beta, k);
      roots.insert(roots.end(), rs.begin(), rs.end());
    }
    auto csv = open_out("roots.csv");
    write_roots_csv(csv, roots);
    report = {{"schema", schema_version}, {"kind", "roots"}, {"roots", to_json(roots)}};
    auto os = open_out("report.json");
    os << report.dump(2) << "\n";
  } else if (experiment == "kappa") {
    const double mu = cfg.at("mu").get<double>();
    const double beta = cfg.at("beta").get<double>();
    const SpectralDecomp d = build_decomp(mu, beta, cfg.value("kmax", 3), n);
    const double kh = estimate_kappa(d, cfg.value("nsamples", 200), cfg.value("seed", 0ull));
    report = {{"schema", schema_version},
              {"kind", "kappa"},
              {"kappa_hat", kh},
              {"gram_cond", d.gram_cond}};
    auto os = open_out("report.json");
    os << report.dump(2) << "\n";
  } else {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  return 0;
}

}  // namespace dol
