#pragma once

// Parsing of the CLI mini-syntaxes (feedback families and initial
// conditions), CSV emitters, and JSON serialization of verdicts and reports.

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dol/classify.hpp"
#include "dol/cones.hpp"
#include "dol/model.hpp"
#include "dol/sampling.hpp"
#include "dol/spectrum.hpp"

namespace dol {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "dol/1";

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
  return v;
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Feedback family mini-syntax: tanh:ALPHA, wright:ALPHA, atan:ALPHA,
/// linear:BETA.
inline Model parse_model(double mu, const std::string& family_spec,
                         bool allow_unbounded = false) {
  const auto parts = detail::split(family_spec, ':');
  if (parts.size() != 2) throw std::invalid_argument("family spec must be NAME:PARAM");
  const double a = detail::parse_double(parts[1]);
  if (parts[0] == "tanh") return make_model(mu, FeedbackFamily::Tanh, a, allow_unbounded);
  if (parts[0] == "wright") return make_model(mu, FeedbackFamily::Wright, a, allow_unbounded);
  if (parts[0] == "atan") return make_model(mu, FeedbackFamily::Atan, a, allow_unbounded);
  if (parts[0] == "linear") return make_model(mu, FeedbackFamily::Linear, a, true);
  throw std::invalid_argument("unknown feedback family: " + parts[0]);
}

/// Initial-condition mini-syntax.
///   const:C            psi = C
///   lin:A,B            psi = A theta + B
///   sin:K,AMP          psi = AMP sin(K pi theta)
///   fourier:SEED,NMODES,AMP   random trigonometric polynomial, sup norm AMP
///   eig:K[,AMP]        strip-K eigenfunction (unit C^1-norm, scaled by AMP)
///   file:PATH          CSV rows theta,value[,deriv]
struct IcSpec {
  enum class Kind { Const, Lin, Sin, Fourier, Eig, File } kind = Kind::Const;
  double c = 0.0, a = 0.0, b = 0.0, amp = 1.0;
  int k = 0, nmodes = 0;
  std::uint64_t seed = 0;
  std::string path;
  std::string text;  // original spec string
};

inline IcSpec parse_ic(const std::string& spec) {
  IcSpec ic;
  ic.text = spec;
  const auto head = spec.find(':');
  if (head == std::string::npos) throw std::invalid_argument("initial condition must be KIND:ARGS");
  const std::string kind = spec.substr(0, head);
  const auto args = detail::split(spec.substr(head + 1), ',');
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw std::invalid_argument("bad argument count in initial condition: " + spec);
  };
  if (kind == "const") {
    need(1, 1);
    ic.kind = IcSpec::Kind::Const;
    ic.c = detail::parse_double(args[0]);
  } else if (kind == "lin") {
    need(2, 2);
    ic.kind = IcSpec::Kind::Lin;
    ic.a = detail::parse_double(args[0]);
    ic.b = detail::parse_double(args[1]);
  } else if (kind == "sin") {
    need(2, 2);
    ic.kind = IcSpec::Kind::Sin;
    ic.k = static_cast<int>(detail::parse_double(args[0]));
    ic.amp = detail::parse_double(args[1]);
  } else if (kind == "fourier") {
    need(3, 3);
    ic.kind = IcSpec::Kind::Fourier;
    ic.seed = static_cast<std::uint64_t>(detail::parse_double(args[0]));
    ic.nmodes = static_cast<int>(detail::parse_double(args[1]));
    ic.amp = detail::parse_double(args[2]);
    if (ic.nmodes < 1) throw std::invalid_argument("fourier needs at least one mode");
  } else if (kind == "eig") {
    need(1, 2);
    ic.kind = IcSpec::Kind::Eig;
    ic.k = static_cast<int>(detail::parse_double(args[0]));
    ic.amp = args.size() == 2 ? detail::parse_double(args[1]) : 1.0;
  } else if (kind == "file") {
    need(1, 1);
    ic.kind = IcSpec::Kind::File;
    ic.path = args[0];
  } else {
    throw std::invalid_argument("unknown initial condition kind: " + kind);
  }
  return ic;
}

inline Segment read_segment_csv(const std::string& path);

/// Materialize an initial condition. The model supplies (mu, beta) for
/// eigenfunction data; rng_index derives the per-item stream for random
/// samplers inside sweeps.
inline Segment build_ic(const IcSpec& ic, const Model& m, int n = default_grid_n,
                        std::uint64_t rng_index = 0) {
  switch (ic.kind) {
    case IcSpec::Kind::Const: return constant_segment(n, ic.c);
    case IcSpec::Kind::Lin:
      return make_segment(
          n, [&](double th) { return ic.a * th + ic.b; }, [&](double) { return ic.a; });
    case IcSpec::Kind::Sin: {
      const double w = ic.k * std::numbers::pi;
      return make_segment(
          n, [&](double th) { return ic.amp * std::sin(w * th); },
          [&](double th) { return ic.amp * w * std::cos(w * th); });
    }
    case IcSpec::Kind::Fourier: {
      Rng rng = derive_rng(ic.seed, rng_index);
      return fourier_segment(rng, ic.nmodes, ic.amp, n);
    }
    case IcSpec::Kind::Eig: return ic.amp * eigen_ic(m.mu, m.beta, ic.k, n);
    case IcSpec::Kind::File: return read_segment_csv(ic.path);
  }
  throw std::logic_error("unhandled initial condition kind");
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline void write_segment_csv(std::ostream& os, const Segment& s) {
  os << "theta,value" << (s.has_derivs() ? ",deriv" : "") << "\n";
  for (int i = 0; i <= s.n; ++i) {
    os << detail::fmt(s.theta(i)) << "," << detail::fmt(s.values[i]);
    if (s.has_derivs()) os << "," << detail::fmt(s.derivs[i]);
    os << "\n";
  }
}

inline Segment read_segment_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open segment file: " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values, derivs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = detail::split(line, ',');
    if (cols.size() < 2) throw std::invalid_argument("bad segment row: " + line);
    values.push_back(detail::parse_double(cols[1]));
    if (cols.size() >= 3) derivs.push_back(detail::parse_double(cols[2]));
  }
  if (values.size() < 3) throw std::invalid_argument("segment file too short");
  if (!derivs.empty() && derivs.size() != values.size())
    throw std::invalid_argument("segment file mixes rows with and without derivatives");
  Segment s;
  s.n = static_cast<int>(values.size()) - 1;
  s.values = std::move(values);
  s.derivs = std::move(derivs);
  validate_segment(s);
  return s;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double stride) {
  os << "t,x,dxdt\n";
  for (double t = -1.0; t <= traj.span + 1e-9; t += stride) {
    const double tc = std::min(t, traj.span);
    os << detail::fmt(tc) << "," << detail::fmt(traj.value(tc)) << ","
       << detail::fmt(traj.derivative(tc)) << "\n";
  }
}

inline void write_roots_csv(std::ostream& os, const std::vector<CharRoot>& roots) {
  os << "k,re,im,residual,multiplicity\n";
  for (const auto& r : roots)
    os << r.strip << "," << detail::fmt(r.lambda.real()) << "," << detail::fmt(r.lambda.imag())
       << "," << detail::fmt(r.residual) << "," << r.multiplicity << "\n";
}

inline void write_ratio_csv(std::ostream& os, const RatioTrace& tr) {
  os << "t,norm_leading,norm_complement,ratio,flagged\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << detail::fmt(tr.times[i]) << "," << detail::fmt(tr.norm_leading[i]) << ","
       << detail::fmt(tr.norm_complement[i]) << ",";
    if (tr.flagged[i])
      os << ",1\n";
    else
      os << detail::fmt(tr.ratios[i]) << ",0\n";
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline json to_json(const std::vector<ZeroRecord>& zeros) {
  json arr = json::array();
  for (const auto& z : zeros) arr.push_back({{"time", z.time}, {"slope", to_string(z.slope)}});
  return arr;
}

inline json to_json(const OscillationVerdict& v) {
  json j;
  j["schema"] = schema_version;
  j["kind"] = to_string(v.kind);
  j["horizon"] = v.horizon;
  switch (v.kind) {
    case VerdictKind::EventuallySlow:
      j["entry_time"] = v.entry_time;
      break;
    case VerdictKind::NotSlowByHorizon:
      j["min_zero_gap"] = v.min_zero_gap;
      j["sign_change_profile"] = v.sign_change_profile;
      break;
    case VerdictKind::ConvergedToZero:
      j["converge_time"] = v.converge_time;
      j["tail_norm"] = v.tail_norm;
      break;
  }
  j["zero_records"] = to_json(v.zero_records);
  return j;
}

inline json to_json(const MonotonicityReport& rep) {
  json j;
  j["schema"] = schema_version;
  json arr = json::array();
  for (const auto& v : rep.verdicts) {
    json e{{"t", v.t}, {"relation", to_string(v.relation)}, {"ok", v.ok}};
    if (v.interior) e["interior"] = *v.interior;
    arr.push_back(e);
  }
  j["verdicts"] = arr;
  if (rep.first_violation)
    j["first_violation"] = *rep.first_violation;
  else
    j["first_violation"] = nullptr;
  j["ok"] = rep.ok();
  return j;
}

inline json to_json(const std::vector<CharRoot>& roots) {
  json arr = json::array();
  for (const auto& r : roots)
    arr.push_back({{"k", r.strip},
                   {"re", r.lambda.real()},
                   {"im", r.lambda.imag()},
                   {"residual", r.residual},
                   {"multiplicity", r.multiplicity}});
  return arr;
}

}  // namespace dol
