#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cvqb/circuit_model.hpp"
#include "cvqb/csv.hpp"
#include "cvqb/dynamics.hpp"
#include "cvqb/errors.hpp"
#include "cvqb/gaussian.hpp"
#include "cvqb/spectral.hpp"
#include "cvqb/sweeps.hpp"
#include "json.hpp"

namespace cvqb::cli {

namespace {

using Json = nlohmann::ordered_json;
using Preset = std::pair<std::string, std::vector<std::string>>;

constexpr const char* kSimulateHeader = "t,e1,e2,ee,ei,r,s,c";
constexpr const char* kUnits = "hbar = 1, omega1 = 1; energies in hbar*omega1, times in 1/omega1, S and C in nats";

const std::vector<Preset> kSimulatePresets = {
    {"resonant", {"--omega2", "1", "--kl", "0.7", "--kc", "0.7", "--coherent-alpha", "2",
                  "--tmax", "20", "--dt", "0.01"}},
    {"fig2ab", {"--omega2", "1.3", "--kl", "0.7", "--kc", "0.7", "--coherent-alpha", "2",
                "--tmax", "20", "--dt", "0.01"}},
    {"fig2cd", {"--omega2", "1.3", "--kl", "-0.7", "--kc", "0.7", "--coherent-alpha", "2",
                "--tmax", "20", "--dt", "0.01"}},
    {"fig3", {"--omega2", "1.3", "--kl", "-0.57", "--kc", "0.7", "--thermal-np", "4",
              "--tmax", "20", "--dt", "0.01"}},
    {"fig6", {"--omega2", "1.3", "--kl", "-0.37", "--kc", "0.7", "--thermal-np", "4",
              "--gamma", "0.1", "--n-th", "4", "--tmax", "400", "--dt", "0.05"}},
    {"coils", {"--omega2", "1.3", "--kl", "0.99", "--kc", "-0.201", "--thermal-np", "4",
               "--tmax", "20", "--dt", "0.01"}},
};

const std::vector<Preset> kSweepPresets = {
    {"fig4", {"--omega2", "1.3", "--kl-grid", "-0.9:0.9:41", "--kc-grid", "-0.9:0.9:41",
              "--np-grid", "4", "--charger", "thermal", "--tmax", "20", "--dt", "0.01"}},
    {"fig5", {"--omega2", "1.3", "--kl-grid", "-0.37", "--kc-grid", "0.7", "--np-grid",
              "1:64:geometric", "--charger", "thermal", "--tmax", "20", "--dt", "0.01"}},
};

const std::map<std::string, std::string> kAliases = {
    {"--kl", "--kl-grid"}, {"--kc", "--kc-grid"}, {"--np", "--np-grid"}};

const std::set<std::string> kChargerFlags = {"--coherent-alpha", "--thermal-np"};

std::string flag_name(const std::string& token) {
  if (token.rfind("--", 0) != 0) return {};
  return token.substr(0, token.find('='));
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || first == last) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// Splices a preset's flags in front of the user's, dropping any flag the user set
// explicitly. A user-chosen charger replaces the preset's charger altogether.
std::vector<std::string> expand(const std::vector<std::string>& args, const Preset& preset,
                                bool sweep) {
  std::set<std::string> user;
  for (std::size_t i = 2; i < args.size(); ++i) {
    std::string name = flag_name(args[i]);
    if (name.empty()) continue;
    if (sweep) {
      const auto it = kAliases.find(name);
      if (it != kAliases.end()) name = it->second;
    }
    user.insert(name);
  }
  const bool user_charger =
      std::any_of(kChargerFlags.begin(), kChargerFlags.end(), [&](const std::string& f) {
        return user.count(f) > 0;
      });
  std::vector<std::string> merged(args.begin(), args.begin() + 2);
  const auto& flags = preset.second;
  for (std::size_t i = 0; i + 1 < flags.size(); i += 2) {
    if (user.count(flags[i]) > 0) continue;
    if (user_charger && kChargerFlags.count(flags[i]) > 0) continue;
    merged.push_back(flags[i]);
    merged.push_back(flags[i + 1]);
  }
  merged.insert(merged.end(), args.begin() + 2, args.end());
  return merged;
}

std::optional<std::string> find_preset_name(const std::vector<std::string>& args) {
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--preset" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--preset=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

const Preset* lookup(const std::vector<Preset>& table, const std::string& name) {
  for (const Preset& p : table) {
    if (p.first == name) return &p;
  }
  return nullptr;
}

std::string preset_names(const std::vector<Preset>& table) {
  std::string s;
  for (const Preset& p : table) s += (s.empty() ? "" : ", ") + p.first;
  return s;
}

// Writes `text` to `path`, or to `out` when path is "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed on " + path);
}

struct SimulateConfig {
  std::string preset;
  double omega2 = 1.3;
  double kl = 0.0;
  double kc = 0.0;
  std::optional<double> alpha;
  std::optional<double> n_p;
  double gamma = 0.0;
  double n_th = 0.0;
  double tmax = 20.0;
  double dt = 0.01;
  std::string method = "exact";
  std::string output = "-";
  bool extrapolate = false;
};

struct SweepConfig {
  std::string preset;
  double omega2 = 1.3;
  std::string kl = "0";
  std::string kc = "0";
  std::string np = "4";
  std::string charger = "thermal";
  double tmax = 20.0;
  double dt = 0.01;
  unsigned workers = 0;
  std::string output = "-";
};

struct AnalyzeConfig {
  std::string input;
  std::string column = "ee";
  int count = 2;
  std::string output = "-";
};

int do_simulate(const SimulateConfig& cfg, const std::vector<std::string>& preset_flags,
                std::ostream& out) {
  if (cfg.alpha.has_value() == cfg.n_p.has_value()) {
    throw DomainError("choose exactly one charger: --coherent-alpha or --thermal-np");
  }
  const HamiltonianParams h =
      cfg.extrapolate ? hamiltonian_extrapolated(1.0, cfg.omega2, cfg.kl, cfg.kc)
                      : hamiltonian_from_frequencies(1.0, cfg.omega2, cfg.kl, cfg.kc);
  const SingleModeState charger =
      cfg.alpha ? coherent_mode({*cfg.alpha, 0.0}) : thermal_mode(*cfg.n_p);
  PropagateOptions opts;
  opts.method = cfg.method == "numeric" ? Method::Numeric : Method::Exact;
  const EvolutionSpec spec{h, cfg.gamma, cfg.n_th, uniform_grid(cfg.tmax, cfg.dt)};
  const Trajectory traj = propagate(spec, product_state(charger, vacuum_mode()), opts);

  std::string csv = std::string(kSimulateHeader) + "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Observables& o = traj.obs[i];
    csv += format_number(traj.times[i]) + ',' + format_number(o.E1) + ',' + format_number(o.E2) +
           ',' + format_number(o.Ee) + ',' + format_number(o.Ei) + ',' + format_number(o.R) +
           ',' + format_number(o.S) + ',' + format_number(o.C) + '\n';
  }
  emit(cfg.output, csv, out);

  if (cfg.output != "-") {
    Json meta;
    meta["command"] = "simulate";
    meta["preset"] = cfg.preset.empty() ? Json(nullptr) : Json(cfg.preset);
    meta["preset_flags"] = preset_flags;
    meta["omega1"] = 1.0;
    meta["omega2"] = cfg.omega2;
    meta["kl"] = cfg.kl;
    meta["kc"] = cfg.kc;
    meta["g"] = h.g;
    meta["G"] = h.G;
    meta["coupling"] = std::string(to_string(classify_coupling(h)));
    meta["charger"] = cfg.alpha ? Json{{"kind", "coherent"}, {"alpha", *cfg.alpha}}
                                : Json{{"kind", "thermal"}, {"n_p", *cfg.n_p}};
    meta["battery"] = "vacuum";
    meta["gamma"] = cfg.gamma;
    meta["n_th"] = cfg.n_th;
    meta["tmax"] = cfg.tmax;
    meta["dt"] = cfg.dt;
    meta["samples"] = traj.size();
    meta["method"] = cfg.method;
    meta["extrapolate"] = cfg.extrapolate;
    meta["columns"] = kSimulateHeader;
    meta["units"] = kUnits;
    emit(cfg.output + ".meta.json", meta.dump(2) + "\n", out);
  }
  return kOk;
}

int do_sweep(const SweepConfig& cfg, const std::vector<std::string>& preset_flags,
             std::ostream& out) {
  SweepSpec spec;
  try {
    spec.kL_grid = parse_grid(cfg.kl);
    spec.kC_grid = parse_grid(cfg.kc);
    spec.n_p_grid = parse_grid(cfg.np);
  } catch (const std::invalid_argument& e) {
    throw DomainError(e.what());
  }
  spec.omega2 = cfg.omega2;
  spec.tmax = cfg.tmax;
  spec.dt = cfg.dt;
  spec.charger = cfg.charger == "coherent" ? ChargerKind::Coherent : ChargerKind::Thermal;
  const SweepResult result = run_sweep(spec, cfg.workers);

  std::ostringstream csv;
  write_sweep_csv(result, csv);
  emit(cfg.output, csv.str(), out);

  if (cfg.output != "-") {
    Json meta;
    meta["command"] = "sweep";
    meta["preset"] = cfg.preset.empty() ? Json(nullptr) : Json(cfg.preset);
    meta["preset_flags"] = preset_flags;
    meta["spec"] = Json::parse(sweep_metadata_json(spec));
    emit(cfg.output + ".meta.json", meta.dump(2) + "\n", out);
  }
  return kOk;
}

struct Series {
  std::vector<double> t;
  std::vector<double> v;
};

Series read_column(const std::string& path, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DomainError(path + ": empty file");
  const auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  strip_cr(line);
  const std::vector<std::string> header = split(line, ',');
  const auto find = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DomainError(path + ": no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ti = find("t");
  const std::size_t vi = find(column);

  std::vector<double> t;
  std::vector<std::optional<double>> v;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw DomainError(path + ": row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    try {
      t.push_back(parse_double(fields[ti]));
      v.push_back(fields[vi].empty() ? std::nullopt
                                     : std::optional<double>(parse_double(fields[vi])));
    } catch (const std::invalid_argument& e) {
      throw DomainError(path + ": row " + std::to_string(row) + ": " + e.what());
    }
  }
  // undefined stretches at either end are dropped; gaps inside are not recoverable
  std::size_t lo = 0;
  std::size_t hi = v.size();
  while (lo < hi && !v[lo]) ++lo;
  while (hi > lo && !v[hi - 1]) --hi;
  Series s;
  for (std::size_t i = lo; i < hi; ++i) {
    if (!v[i]) throw DomainError(path + ": column '" + column + "' has an interior gap");
    s.t.push_back(t[i]);
    s.v.push_back(*v[i]);
  }
  return s;
}

int do_analyze(const AnalyzeConfig& cfg, std::ostream& out) {
  const Series s = read_column(cfg.input, cfg.column);
  FrequencyReport report;
  try {
    report = dominant_frequencies(s.t, s.v, cfg.count);
  } catch (const std::invalid_argument& e) {
    throw DomainError(e.what());
  }
  Json j;
  j["input"] = cfg.input;
  j["column"] = cfg.column;
  j["samples"] = s.t.size();
  j["t_start"] = s.t.empty() ? 0.0 : s.t.front();
  j["t_end"] = s.t.empty() ? 0.0 : s.t.back();
  Json tones = Json::array();
  for (const Tone& tone : report.tones) {
    tones.push_back({{"frequency", tone.frequency}, {"amplitude", tone.amplitude}});
  }
  j["tones"] = tones;
  j["dominant_frequency"] = report.tones.empty() ? Json(nullptr) : Json(report.tones[0].frequency);
  if (report.beat) {
    j["half_difference"] = report.beat->half_difference;
    j["half_sum"] = report.beat->half_sum;
    j["difference"] = report.beat->difference;
    j["sum"] = report.beat->sum;
  } else {
    j["half_difference"] = nullptr;
    j["half_sum"] = nullptr;
    j["difference"] = nullptr;
    j["sum"] = nullptr;
  }
  emit(cfg.output, j.dump(2) + "\n", out);
  return kOk;
}

}  // namespace

const std::vector<std::pair<std::string, std::vector<std::string>>>& presets(
    const std::string& subcommand) {
  static const std::vector<Preset> none;
  if (subcommand == "simulate") return kSimulatePresets;
  if (subcommand == "sweep") return kSweepPresets;
  return none;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty grid");
  if (text.find(':') == std::string::npos) {
    std::vector<double> values;
    for (const std::string& part : split(text, ',')) values.push_back(parse_double(part));
    return values;
  }
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4) {
    throw std::invalid_argument("grid '" + text + "' must be a:b:N, a:b:geometric or a:b:geometric:N");
  }
  const double a = parse_double(parts[0]);
  const double b = parse_double(parts[1]);
  if (!(b >= a)) throw std::invalid_argument("grid '" + text + "' has an upper end below its start");
  std::vector<double> values;
  if (parts[2] == "geometric") {
    if (!(a > 0.0)) throw std::invalid_argument("geometric grid '" + text + "' needs a positive start");
    if (parts.size() == 3) {
      for (double v = a; v <= b * (1.0 + 1e-12); v *= 2.0) values.push_back(v);
      return values;
    }
    const int n = static_cast<int>(parse_double(parts[3]));
    if (n < 1) throw std::invalid_argument("grid '" + text + "' needs at least one point");
    if (n == 1) return {a};
    for (int i = 0; i < n; ++i) {
      values.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
    }
    values.back() = b;
    return values;
  }
  if (parts.size() != 3) throw std::invalid_argument("grid '" + text + "' is malformed");
  const double nd = parse_double(parts[2]);
  const int n = static_cast<int>(nd);
  if (n < 1 || static_cast<double>(n) != nd) {
    throw std::invalid_argument("grid '" + text + "' needs a positive integer point count");
  }
  if (n == 1) return {a};
  for (int i = 0; i < n; ++i) {
    // symmetric construction keeps grids like -0.9:0.9:41 exactly mirrored
    const double u = static_cast<double>(i) / (n - 1);
    const double v = a * (1.0 - u) + b * u;
    values.push_back(std::abs(v) < 1e-15 ? 0.0 : v);
  }
  return values;
}

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw;
  if (args.empty()) args.emplace_back("cvqb");

  std::vector<std::string> preset_flags;
  if (args.size() >= 2) {
    const bool sweep = args[1] == "sweep";
    if (auto name = find_preset_name(args)) {
      const Preset* p = lookup(presets(args[1]), *name);
      if (p == nullptr) {
        err << "error: unknown preset '" << *name << "' for '" << args[1] << "'";
        const std::string known = preset_names(presets(args[1]));
        if (!known.empty()) err << " (known: " << known << ")";
        err << "\n";
        return kInvalid;
      }
      preset_flags = p->second;
      args = expand(args, *p, sweep);
    }
  }

  CLI::App app{"Continuous-variable quantum battery simulator (two coupled LC circuits)", "cvqb"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  SimulateConfig sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Time series of energies, ratio, entropy, coherence");
  simulate->add_option("--preset", sim.preset, "Figure preset: " + preset_names(kSimulatePresets));
  simulate->add_option("--omega2", sim.omega2, "Battery frequency in units of omega1")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--kl", sim.kl, "Magnetic coupling coefficient");
  simulate->add_option("--kc", sim.kc, "Electric coupling coefficient");
  auto* alpha_opt = simulate->add_option("--coherent-alpha", sim.alpha, "Coherent charger amplitude (real)");
  auto* np_opt = simulate->add_option("--thermal-np", sim.n_p, "Thermal charger mean photon number")
                     ->check(CLI::NonNegativeNumber);
  alpha_opt->excludes(np_opt);
  simulate->add_option("--gamma", sim.gamma, "Charger decay rate")->check(CLI::NonNegativeNumber);
  simulate->add_option("--n-th", sim.n_th, "Reservoir mean photon number")->check(CLI::NonNegativeNumber);
  simulate->add_option("--tmax", sim.tmax, "End of the time window")->check(CLI::NonNegativeNumber);
  simulate->add_option("--dt", sim.dt, "Sampling interval")->check(CLI::PositiveNumber);
  simulate->add_option("--method", sim.method, "Propagator")->check(CLI::IsMember({"exact", "numeric"}));
  simulate->add_option("-o,--output", sim.output, "CSV path, '-' for stdout");
  simulate->add_flag("--extrapolate", sim.extrapolate, "Allow |k| >= 1 (deep strong coupling)");

  SweepConfig swp;
  CLI::App* sweep = app.add_subcommand("sweep", "Max[Ee] and Max[R] over a grid of couplings and photon numbers");
  sweep->add_option("--preset", swp.preset, "Figure preset: " + preset_names(kSweepPresets));
  sweep->add_option("--omega2", swp.omega2, "Battery frequency in units of omega1")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--kl-grid,--kl", swp.kl, "kL grid");
  sweep->add_option("--kc-grid,--kc", swp.kc, "kC grid");
  sweep->add_option("--np-grid,--np", swp.np, "Charger mean photon number grid");
  sweep->add_option("--charger", swp.charger, "Charger state")->check(CLI::IsMember({"thermal", "coherent"}));
  sweep->add_option("--tmax", swp.tmax, "End of the time window")->check(CLI::NonNegativeNumber);
  sweep->add_option("--dt", swp.dt, "Sampling interval")->check(CLI::PositiveNumber);
  sweep->add_option("--workers", swp.workers, "Worker threads, 0 = all cores");
  sweep->add_option("-o,--output", swp.output, "CSV path, '-' for stdout");

  AnalyzeConfig ana;
  CLI::App* analyze = app.add_subcommand("analyze", "Dominant frequencies of one CSV column");
  analyze->add_option("input", ana.input, "CSV produced by 'simulate'")->required();
  analyze->add_option("--column", ana.column, "Column to analyze");
  analyze->add_option("--count", ana.count, "Number of tones")->check(CLI::Range(1, 64));
  analyze->add_option("-o,--output", ana.output, "JSON path, '-' for stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalid;
  }

  try {
    if (simulate->parsed()) return do_simulate(sim, preset_flags, out);
    if (sweep->parsed()) return do_sweep(swp, preset_flags, out);
    return do_analyze(ana, out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace cvqb::cli
