#include "pdsys/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pdsys/csv.hpp"
#include "pdsys/lyapunov.hpp"
#include "pdsys/models.hpp"
#include "pdsys/nonlinear_ns.hpp"
#include "pdsys/parallel.hpp"
#include "pdsys/sk.hpp"
#include "pdsys/spectral_sim.hpp"

namespace pdsys {
namespace {

const std::set<std::string> kSections = {"model", "sphere", "rho_grid", "grid", "sim", "lyapunov"};

Config load_config(const CommandOptions& options) {
  Config cfg = Config::load(options.config);
  cfg.require_sections(kSections);
  cfg.require_keys("sphere", {"count"});
  cfg.require_keys("rho_grid", {"lo", "hi", "count", "values", "omega"});
  cfg.require_keys("grid", {"n", "box_length"});
  cfg.require_keys("sim", {"scheme", "preset", "amplitude", "mode", "width", "xi_lo", "xi_hi",
                           "seed", "t_end", "samples", "times", "dt", "cfl_max", "save_fields",
                           "fit_lo", "fit_hi", "small_data"});
  cfg.require_keys("lyapunov", {"split_j", "decay_s"});
  set_thread_count(options.threads);
  return cfg;
}

ModelParams model_params(const Config& cfg) {
  ModelParams params;
  for (const std::string& key : cfg.keys("model")) {
    if (key != "name") params[key] = cfg.get_double("model", key);
  }
  return params;
}

SymbolicSystem build_model(const Config& cfg) {
  SymbolicSystem sys = make_model(cfg.get_string("model", "name"), model_params(cfg));
  validate_shape(sys);
  return sys;
}

int sphere_count(const Config& cfg) {
  const long long count = cfg.get_int("sphere", "count", 0);
  if (count < 0) {
    throw Error(ErrorCode::kConfigParseError,
                cfg.source() + ": [sphere] count must be nonnegative");
  }
  return static_cast<int>(count);
}

std::vector<double> rho_grid(const Config& cfg) {
  if (cfg.has("rho_grid", "values")) return cfg.get_doubles("rho_grid", "values");
  return log_grid(cfg.get_double("rho_grid", "lo", 1e-3), cfg.get_double("rho_grid", "hi", 1e3),
                  static_cast<int>(cfg.get_int("rho_grid", "count", 61)));
}

void prepare_out(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
}

class Summary {
 public:
  template <typename T>
  void add(const std::string& key, const T& value) {
    std::ostringstream os;
    os << key << " = ";
    if constexpr (std::is_floating_point_v<T>) {
      os << format_double(value);
    } else if constexpr (std::is_same_v<T, bool>) {
      os << (value ? "true" : "false");
    } else {
      os << value;
    }
    text_ += os.str() + "\n";
  }

  const std::string& text() const { return text_; }

  void write(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    os << text_;
    if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }

 private:
  std::string text_;
};

SpectralField initial_field(const Config& cfg, const SymbolicSystem& sys,
                            const CommandOptions& options) {
  const int n = static_cast<int>(cfg.get_int("grid", "n"));
  const double box = cfg.get_double("grid", "box_length");
  if (n < 2 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::kConfigParseError, cfg.source() + ": [grid] n must be a power of two");
  }
  if (!(box > 0.0)) {
    throw Error(ErrorCode::kConfigParseError, cfg.source() + ": [grid] box_length must be positive");
  }
  const std::string preset = cfg.get_string("sim", "preset", "gaussian");
  const auto amplitude = [&]() {
    const std::vector<double> a =
        cfg.get_doubles("sim", "amplitude", std::vector<double>(sys.n(), 1.0));
    if (static_cast<int>(a.size()) != sys.n()) {
      throw Error(ErrorCode::kConfigParseError,
                  cfg.source() + ": [sim] amplitude needs one entry per component");
    }
    return Vec(Eigen::Map<const Vec>(a.data(), sys.n()));
  };
  if (preset == "zero") return SpectralField::zeros(sys.d, sys.n(), n, box);
  if (preset == "gaussian") {
    return gaussian_field(sys.d, sys.n(), n, box, cfg.get_double("sim", "width", 0.5), amplitude());
  }
  if (preset == "single-mode") {
    std::vector<int> k;
    for (long long v : cfg.get_ints("sim", "mode")) k.push_back(static_cast<int>(v));
    if (static_cast<int>(k.size()) != sys.d) {
      throw Error(ErrorCode::kConfigParseError,
                  cfg.source() + ": [sim] mode needs one integer per dimension");
    }
    return single_mode_field(sys.d, sys.n(), n, box, k, amplitude().cast<Complex>());
  }
  if (preset == "random-band") {
    const std::uint64_t seed = options.seed ? *options.seed : cfg.get_u64("sim", "seed", 1);
    SpectralField f = random_band_field(sys.d, sys.n(), n, box, cfg.get_double("sim", "xi_lo", 0.0),
                                        cfg.get_double("sim", "xi_hi"), seed);
    const Vec a = amplitude();
    for (int c = 0; c < sys.n(); ++c) {
      for (std::size_t m = 0; m < f.modes(); ++m) f.at(c, m) *= a(c);
    }
    return f;
  }
  throw Error(ErrorCode::kConfigParseError, cfg.source() + ": unknown [sim] preset '" + preset + "'");
}

std::vector<double> sample_times(const Config& cfg, const SymbolicSystem& sys, double box) {
  if (cfg.has("sim", "times")) {
    std::vector<double> t = cfg.get_doubles("sim", "times");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] >= 0.0) || (i > 0 && !(t[i] > t[i - 1]))) {
        throw Error(ErrorCode::kConfigParseError,
                    cfg.source() + ": [sim] times must be nonnegative and increasing");
      }
    }
    return t;
  }
  const std::string t_end_text = cfg.get_string("sim", "t_end", "auto");
  const double t_end =
      t_end_text == "auto" ? decay_fit_horizon(sys, box) : cfg.get_double("sim", "t_end");
  const long long samples = cfg.get_int("sim", "samples", 33);
  if (!(t_end > 0.0) || samples < 2) {
    throw Error(ErrorCode::kConfigParseError,
                cfg.source() + ": [sim] needs t_end > 0 and samples >= 2");
  }
  std::vector<double> times = {0.0};
  for (double t : log_grid(t_end / 64.0, t_end, static_cast<int>(samples))) times.push_back(t);
  times.back() = t_end;
  return times;
}

NsParams ns_params(const Config& cfg) {
  const ModelParams p = model_params(cfg);
  const auto get = [&p](const std::string& key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
  };
  NsParams ns;
  ns.d = static_cast<int>(get("d", 2.0));
  ns.mu = get("mu", 1.0);
  ns.lambda = get("lambda", 0.0);
  ns.pressure = gamma_law(get("pressure_coeff", 1.0), get("gamma", 2.0));
  ns.rho_ref = get("rho_ref", 1.0);
  return ns;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigParseError:
    case ErrorCode::kParameterViolation:
    case ErrorCode::kAssumptionGViolation:
    case ErrorCode::kIoError:
      return kExitConfig;
    case ErrorCode::kModelUnknown:
      return kExitUnknownModel;
    case ErrorCode::kCflViolation:
      return kExitCfl;
    case ErrorCode::kBlowupDetected:
      return kExitBlowup;
    default:
      return kExitNumerical;
  }
}

CommandResult cmd_check_sk(const CommandOptions& options) {
  const Config cfg = load_config(options);
  const SymbolicSystem sys = build_model(cfg);
  const SkSphereReport report = sk_over_sphere(sys, sphere_count(cfg));
  prepare_out(options.out_dir);

  std::vector<std::string> header = {"omega_index"};
  for (int a = 0; a < sys.d; ++a) header.push_back("omega_" + std::to_string(a));
  for (const char* h : {"rank", "holds", "min_singular_value", "reduced_holds", "agree"}) {
    header.push_back(h);
  }
  CsvTable table(header);
  for (const SkSphereRow& row : report.rows) {
    std::vector<std::string> fields = {std::to_string(row.omega_index)};
    for (int a = 0; a < sys.d; ++a) fields.push_back(format_double(row.omega(a)));
    fields.push_back(std::to_string(row.full.rank));
    fields.push_back(row.full.holds ? "true" : "false");
    fields.push_back(format_double(row.full.min_singular_value()));
    fields.push_back(row.reduced.holds ? "true" : "false");
    fields.push_back(row.agree ? "true" : "false");
    table.add_row(std::move(fields));
  }
  table.write(options.out_dir / "sk_report.csv");

  Summary s;
  s.add("command", std::string("check-sk"));
  s.add("model", sys.name);
  s.add("directions", report.rows.size());
  s.add("failing", report.failing);
  s.add("reduced_agreement", report.reduced_agreement);
  s.add("sk_holds", report.pass);
  s.write(options.out_dir / "sk_summary.txt");
  return {report.pass ? kExitPass : kExitNegative, s.text()};
}

CommandResult cmd_decay_rate(const CommandOptions& options) {
  const Config cfg = load_config(options);
  const SymbolicSystem sys = build_model(cfg);
  Vec omega = Vec::Zero(sys.d);
  omega(0) = 1.0;
  if (cfg.has("rho_grid", "omega")) {
    const std::vector<double> w = cfg.get_doubles("rho_grid", "omega");
    if (static_cast<int>(w.size()) != sys.d) {
      throw Error(ErrorCode::kConfigParseError,
                  cfg.source() + ": [rho_grid] omega needs one entry per dimension");
    }
    omega = Eigen::Map<const Vec>(w.data(), sys.d);
  }
  const EnvelopeReport env = rate_envelope_fit(sys, omega, rho_grid(cfg));
  prepare_out(options.out_dir);
  CsvTable table({"rho", "rate"});
  for (std::size_t i = 0; i < env.rho.size(); ++i) table.add_row(std::vector<double>{env.rho[i], env.rate[i]});
  table.write(options.out_dir / "rate_envelope.csv");

  Summary s;
  s.add("command", std::string("decay-rate"));
  s.add("model", sys.name);
  s.add("low_slope", env.low_slope);
  s.add("high_slope", env.high_slope);
  s.add("plateau", env.plateau);
  s.add("crossover_rho", env.crossover_rho);
  s.write(options.out_dir / "decay_rate_summary.txt");
  return {kExitPass, s.text()};
}

CommandResult cmd_simulate(const CommandOptions& options) {
  const Config cfg = load_config(options);
  const SymbolicSystem sys = build_model(cfg);
  const SpectralField field0 = initial_field(cfg, sys, options);
  const std::vector<double> times = sample_times(cfg, sys, field0.box_length);
  const std::string scheme = cfg.get_string("sim", "scheme", "linear");
  const FunctionalParams weights = certify_functional_params(sys, rho_grid(cfg), sphere_count(cfg));
  FunctionalOptions fopt;
  fopt.split_j = static_cast<int>(cfg.get_int("lyapunov", "split_j", 0));
  fopt.decay_s = cfg.get_double("lyapunov", "decay_s", 0.0);

  Trajectory trajectory;
  std::vector<FunctionalRow> rows;
  bool property = true;
  if (scheme == "linear") {
    trajectory = evolve_linear(sys, field0, times);
    rows = functional_time_series(sys, trajectory, weights, fopt);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      property = property && rows[i].functional <= rows[i - 1].functional * (1.0 + 1e-9);
    }
  } else if (scheme == "nonlinear") {
    if (sys.name != "ns-baro") {
      throw Error(ErrorCode::kConfigParseError,
                  cfg.source() + ": the nonlinear scheme needs model ns-baro");
    }
    NonlinearOptions nopt;
    nopt.dt = cfg.get_double("sim", "dt", 1e-3);
    nopt.cfl_max = cfg.get_double("sim", "cfl_max", 0.5);
    nopt.small_data = cfg.get_double("sim", "small_data", nopt.small_data);
    nopt.split_j = fopt.split_j;
    NonlinearResult run = evolve_nonlinear_ns(ns_params(cfg), field0, times, nopt, weights);
    trajectory = std::move(run.trajectory);
    rows = functional_time_series(sys, trajectory, weights, fopt);
    property = run.bounded;
  } else {
    throw Error(ErrorCode::kConfigParseError, cfg.source() + ": unknown [sim] scheme '" + scheme + "'");
  }

  prepare_out(options.out_dir);
  if (cfg.get_bool("sim", "save_fields", true)) {
    const std::filesystem::path dir = options.out_dir / "trajectory";
    prepare_out(dir);
    CsvTable index({"time", "file", "l2_norm"});
    for (std::size_t i = 0; i < trajectory.fields.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "field_%04zu.bin", i);
      write_field(trajectory.fields[i], dir / name);
      index.add_row({format_double(trajectory.times[i]), name,
                     format_double(trajectory.fields[i].l2_norm())});
    }
    index.write(dir / "trajectory.csv");
  }

  CsvTable norms({"time", "low_v", "high_v1", "high_v2", "high_w", "low_decay", "residual",
                  "functional"});
  std::vector<double> t, low_decay, functional;
  for (const FunctionalRow& r : rows) {
    norms.add_row(std::vector<double>{r.time, r.low_v, r.high_v1, r.high_v2, r.high_w,
                                      r.low_decay, r.residual, r.functional});
    t.push_back(r.time);
    low_decay.push_back(r.low_decay);
    functional.push_back(r.functional);
  }
  norms.write(options.out_dir / "norms.csv");

  const double t_end = times.back();
  const double fit_lo = cfg.get_double("sim", "fit_lo", t_end / 4.0);
  const double fit_hi = cfg.get_double("sim", "fit_hi", t_end);
  // σ₁ = d/2 for integrable data such as the gaussian preset.
  const double target = -(0.5 * sys.d + fopt.decay_s) / 2.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CsvTable fits({"norm", "exponent", "standard_error", "points", "t_lo", "t_hi", "target", "status"});
  double low_exponent = nan;
  const auto add_fit = [&](const std::string& name, const std::vector<double>& values, double tgt) {
    try {
      const DecayFit fit = fit_decay_exponent(t, values, fit_lo, fit_hi);
      fits.add_row({name, format_double(fit.exponent), format_double(fit.standard_error),
                    std::to_string(fit.points), format_double(fit_lo), format_double(fit_hi),
                    format_double(tgt), "ok"});
      return fit.exponent;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateWindow) throw;
      fits.add_row({name, format_double(nan), format_double(nan), "0", format_double(fit_lo),
                    format_double(fit_hi), format_double(tgt), "degenerate"});
      return nan;
    }
  };
  low_exponent = add_fit("low_decay", low_decay, target);
  add_fit("functional", functional, nan);
  fits.write(options.out_dir / "decay_fit.csv");

  const double norm0 = field0.l2_norm();
  Summary s;
  s.add("command", std::string("simulate"));
  s.add("model", sys.name);
  s.add("scheme", scheme);
  s.add("samples", times.size());
  s.add("t_end", t_end);
  s.add("low_decay_exponent", low_exponent);
  s.add("target_exponent", target);
  s.add("residual_fraction", norm0 > 0.0 && !rows.empty() ? rows.front().residual / norm0 : 0.0);
  s.add(scheme == "linear" ? "functional_monotone" : "functional_bounded", property);
  s.write(options.out_dir / "simulate_summary.txt");
  return {property ? kExitPass : kExitNegative, s.text()};
}

CommandResult run_command(const std::string& name, const CommandOptions& options) {
  try {
    if (name == "check-sk") return cmd_check_sk(options);
    if (name == "decay-rate") return cmd_decay_rate(options);
    if (name == "simulate") return cmd_simulate(options);
    return {kExitConfig, "error: unknown command '" + name + "'\n"};
  } catch (const Error& e) {
    return {exit_code_for(e.code()), std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace pdsys
