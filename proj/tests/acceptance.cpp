// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdsys/commands.hpp"
#include "pdsys/error.hpp"
#include "pdsys/littlewood_paley.hpp"
#include "pdsys/lyapunov.hpp"
#include "pdsys/models.hpp"
#include "pdsys/sk.hpp"
#include "pdsys/spectral_field.hpp"
#include "pdsys/spectral_sim.hpp"
#include "random_pairs.hpp"

namespace fs = std::filesystem;
using namespace pdsys;

namespace {

const fs::path kConfigs = PDSYS_CONFIG_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pdsys_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CommandResult run(const std::string& command, const std::string& config, const fs::path& out,
                  unsigned threads = 0) {
  CommandOptions opts;
  opts.config = kConfigs / config;
  opts.out_dir = out;
  opts.threads = threads;
  return run_command(command, opts);
}

std::string summary_text(const std::string& summary, const std::string& key) {
  std::istringstream is(summary);
  for (std::string line; std::getline(is, line);) {
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  }
  throw Error(ErrorCode::kIoError, "summary lacks " + key);
}

double summary_value(const std::string& summary, const std::string& key) {
  return std::stod(summary_text(summary, key));
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

bool nonincreasing(const std::vector<FunctionalRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].functional > rows[i - 1].functional * (1.0 + 1e-9)) return false;
  }
  return true;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = lo + (hi - lo) * i / (count - 1);
  return t;
}

Outcome mhd_sk() {
  const CommandResult r = run("check-sk", "mhd_check_sk.ini", scratch_dir("mhd_sk"));
  const double directions = summary_value(r.summary, "directions");
  return {r.exit_code == kExitPass && directions >= 256 &&
              summary_text(r.summary, "sk_holds") == "true",
          fmt("%.0f directions", directions)};
}

Outcome ns_sk() {
  const CommandResult ns = run("check-sk", "ns_check_sk.ini", scratch_dir("ns_sk"));
  const CommandResult dec = run("check-sk", "decoupled_check_sk.ini", scratch_dir("dec_sk"));
  const double directions = summary_value(dec.summary, "directions");
  const double failing = summary_value(dec.summary, "failing");
  return {ns.exit_code == kExitPass && summary_text(ns.summary, "sk_holds") == "true" &&
              dec.exit_code == kExitNegative && failing == directions,
          fmt("decoupled fails at %.0f of %.0f directions", failing, directions)};
}

Outcome oracle_agreement() {
  std::mt19937_64 rng(2024);
  int disagreements = 0;
  int planted_missed = 0;
  int total = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial, ++total) {
      const auto p = testing::random_pair(n, trial, rng);
      const bool kalman = kalman_rank_holds(p.n, p.m).holds;
      const bool eigen = sk_eigenvector_check(p.n, p.m).holds;
      const bool positive =
          hypocoercivity_positivity(p.n / p.n.norm(), p.m / p.m.norm(),
                                    std::vector<double>(n, 1.0)) > 1e-12;
      if (kalman != eigen || kalman != positive) ++disagreements;
      if (p.planted_failure && kalman) ++planted_missed;
    }
  }
  return {disagreements == 0 && planted_missed == 0,
          fmt("%.0f pairs, %.0f disagreements, %.0f planted failures missed", total,
              disagreements, planted_missed)};
}

bool certificate_holds(const std::vector<GeneratorSymbol>& gens, const LyapunovParams& p,
                       const std::vector<double>& grid, double& worst_margin) {
  bool ok = p.certified;
  for (const GeneratorSymbol& g : gens) {
    for (double rho : grid) {
      const FlowRates f = lyapunov_derivative_along_flow(rho, g, p);
      ok = ok && f.min_eig_h >= 1.0 / p.equivalence_C && f.max_eig_h <= p.equivalence_C &&
           f.certified();
      worst_margin = std::min(worst_margin, f.observed_rate / f.required_rate);
    }
  }
  return ok;
}

Outcome lyapunov_certification() {
  const std::vector<double> grid = default_rho_grid();
  double margin = 1e300;
  bool ok = true;
  std::string detail;
  for (const char* key : {"toy1d", "ns-baro"}) {
    const SymbolicSystem sys = make_model(key);
    std::vector<GeneratorSymbol> gens;
    for (const Vec& omega : sample_sphere(sys.d)) gens.push_back(full_generator(evaluate_symbols(sys, omega)));
    try {
      const LyapunovParams p = select_epsilons(gens, 0.0, grid);
      ok = certificate_holds(gens, p, grid, margin) && ok;
      detail += std::string(key) + fmt(" (c %.3g, C %.3g) ", p.dissipation_c, p.equivalence_C);
    } catch (const Error& e) {
      ok = false;
      detail += std::string(key) + ": " + e.what() + " ";
    }
  }
  return {ok, detail + fmt("worst observed/required %.3g", margin)};
}

Outcome rate_envelope() {
  const SymbolicSystem toy = make_toy1d();
  const Vec omega = Vec::Ones(1);
  const EnvelopeReport env = rate_envelope_fit(toy, omega, default_rho_grid());
  const double r01 = spectral_decay_rate(toy, omega, 0.1);
  const double r1 = spectral_decay_rate(toy, omega, 1.0);
  const double r10 = spectral_decay_rate(toy, omega, 10.0);
  const bool ok = std::abs(env.low_slope - 2.0) <= 0.05 && std::abs(env.plateau - 1.0) <= 0.05 &&
                  std::abs(r01 - 0.005) <= 1e-3 * 0.005 && std::abs(r1 - 0.5) <= 1e-9 &&
                  std::abs(r10 - 1.0102) <= 1e-3;
  return {ok, fmt("low slope %.4f, plateau %.6f, ", env.low_slope, env.plateau) +
                  fmt("rates %.6g %.6g %.6g", r01, r1, r10)};
}

Outcome littlewood_paley() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SpectralField grid = SpectralField::zeros(2, 1, 256, 64.0);
  const int jlo = j_min(grid.box_length);
  const int jhi = j_max(grid);
  double partition = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng) * grid.max_frequency();
    double sum = cutoff_chi(std::ldexp(r, -jlo));
    for (int j = jlo; j <= jhi; ++j) sum += cutoff_phi(std::ldexp(r, -j));
    partition = std::max(partition, std::abs(sum - 1.0));
  }

  double reconstruction = 0.0;
  double annihilation = 0.0;
  for (int d : {1, 2, 3}) {
    const SpectralField f = random_band_field(d, 2, d == 3 ? 16 : 64, 3.0, 0.0, 1e9, 40 + d);
    const int lo = j_min(f.box_length);
    const int hi = j_max(f);
    std::vector<SpectralField> blocks;
    SpectralField sum = low_frequency_residual(f);
    for (int j = lo; j <= hi; ++j) {
      blocks.push_back(dyadic_block(f, j));
      sum += blocks.back();
    }
    reconstruction = std::max(reconstruction, (sum - f).l2_norm() / f.l2_norm());
    for (int j = lo; j <= hi; ++j) {
      for (int k = lo; k <= hi; ++k) {
        if (std::abs(j - k) < 2) continue;
        annihilation = std::max(annihilation, dyadic_block(blocks[j - lo], k).l2_norm() / f.l2_norm());
      }
    }
  }
  return {partition <= 1e-12 && reconstruction <= 1e-10 && annihilation <= 1e-12,
          fmt("partition %.2e, reconstruction %.2e, annihilation %.2e", partition, reconstruction,
              annihilation)};
}

Outcome parabolic_mode() {
  int violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymbolicSystem sys = make_model(trial % 2 == 0 ? "toy1d" : "ns-baro");
    const double c = 1.0 + 4.0 / 3.0 * parabolic_multiplier_bound(sys);
    const SpectralField v =
        random_band_field(sys.d, sys.n(), sys.d == 1 ? 128 : 32, 4.0, 0.0, 1e9, 500 + trial);
    const SpectralField w = parabolic_mode_field(sys, v);
    for (int j = j_min(v.box_length); j <= j_max(v); ++j) {
      const double vj = dyadic_block(v, j).l2_norm();
      const double wj = dyadic_block(w, j).l2_norm();
      const double bound = j > 0 ? c * vj : c * std::ldexp(1.0, -j) * vj;
      if (bound > 0.0) worst_ratio = std::max(worst_ratio, wj / bound);
      if (wj > bound * (1.0 + 1e-12)) ++violations;
    }
  }
  const SymbolicSystem toy = make_toy1d();
  double residual = 0.0;
  for (int seed = 0; seed < 3; ++seed) {
    const SpectralField f = random_band_field(1, 2, 256, 2.0, 0.0, 1e9, 900 + seed);
    residual = std::max(residual,
                        parabolic_residual(toy, evolve_linear(toy, f, linspace(0.0, 5.0, 11))).max_overall);
  }
  return {violations == 0 && residual <= 1e-9,
          fmt("%.0f block violations, worst ‖W_j‖/bound %.3f, residual %.2e", violations,
              worst_ratio, residual)};
}

Outcome linear_decay_fit() {
  const CommandResult r = run("simulate", "ns_linear_decay.ini", scratch_dir("ns_decay"));
  if (r.exit_code != kExitPass) return {false, r.summary};
  const double exponent = summary_value(r.summary, "low_decay_exponent");
  const double target = summary_value(r.summary, "target_exponent");
  const double residual = summary_value(r.summary, "residual_fraction");
  return {target == -0.5 && std::abs(exponent - target) <= 0.1 * std::abs(target),
          fmt("exponent %.4f, target %.2f, residual fraction %.4f", exponent, target, residual)};
}

Outcome monotone_functional() {
  struct Case {
    std::string key;
    ModelParams params;
    SpectralField field;
    std::vector<double> times;
  };
  const std::vector<Case> cases = {
      {"toy1d", {}, random_band_field(1, 2, 128, 2.0, 0.0, 1e9, 1), linspace(0.0, 10.0, 41)},
      {"toy1d", {}, single_mode_field(1, 2, 64, 1.0, {1}, CVec::Unit(2, 0)), linspace(0.0, 20.0, 41)},
      {"parabolic", {{"d", 2}}, random_band_field(2, 1, 32, 1.0, 0.0, 1e9, 2), linspace(0.0, 2.0, 21)},
      {"ns-baro", {}, random_band_field(2, 3, 32, 2.0, 0.0, 6.0, 17), linspace(0.0, 2.0, 21)},
      {"ns-baro", {}, gaussian_field(2, 3, 64, 8.0, 0.5, Vec::Ones(3)), linspace(0.0, 4.0, 21)},
  };
  int failures = 0;
  for (const Case& c : cases) {
    const SymbolicSystem sys = make_model(c.key, c.params);
    const FunctionalParams params = certify_functional_params(sys, default_rho_grid());
    const Trajectory tr = evolve_linear(sys, c.field, c.times);
    if (!nonincreasing(functional_time_series(sys, tr, params))) ++failures;
  }
  for (const char* config : {"toy1d_simulate.ini", "ns_random_band.ini", "ns_linear_decay.ini"}) {
    const CommandResult r = run("simulate", config, scratch_dir("mono"));
    if (r.exit_code != kExitPass || summary_text(r.summary, "functional_monotone") != "true") ++failures;
  }
  return {failures == 0, fmt("%.0f of %.0f trajectories not monotone", failures, cases.size() + 3)};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  int compared = 0;
  int differing = 0;
  for (const auto& [command, config] : std::vector<std::pair<std::string, std::string>>{
           {"simulate", "ns_random_band.ini"}, {"check-sk", "ns_check_sk.ini"},
           {"decay-rate", "toy1d_decay_rate.ini"}}) {
    const fs::path a = scratch_dir("det_a");
    const fs::path b = scratch_dir("det_b");
    run(command, config, a, 1);
    run(command, config, b, 0);
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      const fs::path other = b / fs::relative(entry.path(), a);
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differing;
    }
  }
  return {compared > 0 && differing == 0, fmt("%.0f CSV files compared, %.0f differ", compared, differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 SK verification, MHD", mhd_sk},
      {"2 SK verification, NS and decoupled toy", ns_sk},
      {"3 oracle equivalence", oracle_agreement},
      {"4 Lyapunov certification", lyapunov_certification},
      {"5 rate envelope", rate_envelope},
      {"6 Littlewood-Paley", littlewood_paley},
      {"7 parabolic mode", parabolic_mode},
      {"8 linear decay fit", linear_decay_fit},
      {"9 monotone functional", monotone_functional},
      {"10 determinism", determinism},
  };
  const std::vector<double> limits = {10.0, 5.0, 0.0, 30.0, 0.0, 0.0, 0.0, 120.0, 0.0, 0.0};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limits[i] > 0.0 && seconds >= limits[i]) {
      o.pass = false;
      o.detail += fmt(" (limit %.0f s)", limits[i]);
    }
    if (!o.pass) ++failed;
    std::printf("%s  %-42s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
