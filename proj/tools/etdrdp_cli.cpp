// Command-line front end: solve / converge / efficiency.
#include "etdrdp/config.hpp"
#include "etdrdp/study.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace etdrdp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBlowUp = 2;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    out.push_back(item.substr(a, item.find_last_not_of(" \t") - a + 1));
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidArgument(key + ": '" + text + "' is not a number");
  return v;
}

long long to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != static_cast<double>(static_cast<long long>(v))) throw InvalidArgument(key + ": expected an integer");
  return static_cast<long long>(v);
}

Coordinates parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty() || parts.size() > 3) throw InvalidArgument("probe: expected x[,y[,z]]");
  Coordinates x{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < parts.size(); ++i) x[i] = to_double("probe", parts[i]);
  return x;
}

// Values from the command line, keyed like the config file; a key is present only when given.
using Settings = std::map<std::string, std::vector<std::string>>;

Settings from_config(const ConfigMap& file) {
  Settings s;
  for (const auto& [key, value] : file) {
    if (key == "k" || key == "scheme" || key == "param") {
      s[key] = split(value, ',');
    } else if (key == "probe") {
      s[key] = split(value, ';');
    } else if (key.rfind("param.", 0) == 0) {
      s["param"].push_back(key.substr(6) + "=" + value);
    } else {
      s[key] = {value};
    }
  }
  return s;
}

const std::string* single(const Settings& s, const std::string& key) {
  auto it = s.find(key);
  if (it == s.end() || it->second.empty()) return nullptr;
  return &it->second.back();
}

StudyConfig build_config(const Settings& s, const std::string& command) {
  static const std::set<std::string> known{"problem", "scheme", "p", "h", "k", "T", "bc", "threads", "seed", "out",
                                           "snapshot-every", "diagnostics-every", "probe", "param", "reference", "csv"};
  for (const auto& [key, _] : s) {
    if (!known.count(key)) throw InvalidArgument("unknown setting '" + key + "'");
  }
  StudyConfig cfg;
  if (auto v = single(s, "problem")) cfg.problem = *v;
  if (s.count("scheme")) {
    cfg.schemes.clear();
    for (const auto& name : s.at("scheme")) {
      for (const auto& part : split(name, ',')) cfg.schemes.push_back(parse_scheme(part));
    }
  } else if (command == "efficiency") {
    cfg.schemes = {Scheme::EtdRdpIf, Scheme::EtdRdp, Scheme::ImexBdf2, Scheme::ImexTr, Scheme::ImexAdams2};
  }
  if (s.count("k")) {
    for (const auto& text : s.at("k")) {
      for (const auto& part : split(text, ',')) cfg.ks.push_back(to_double("k", part));
    }
  }
  if (auto v = single(s, "p")) cfg.points = to_int("p", *v);
  if (auto v = single(s, "h")) cfg.h = to_double("h", *v);
  if (auto v = single(s, "T")) cfg.final_time = to_double("T", *v);
  if (auto v = single(s, "bc")) cfg.bc = parse_boundary(*v);
  if (auto v = single(s, "threads")) cfg.threads = static_cast<int>(to_int("threads", *v));
  if (auto v = single(s, "seed")) {
    const long long seed = to_int("seed", *v);
    if (seed < 0) throw InvalidArgument("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto v = single(s, "out")) cfg.out_dir = *v;
  if (auto v = single(s, "snapshot-every")) cfg.snapshot_every = to_int("snapshot-every", *v);
  if (auto v = single(s, "diagnostics-every")) cfg.diagnostics_every = to_int("diagnostics-every", *v);
  if (s.count("probe")) {
    for (const auto& text : s.at("probe")) cfg.probes.push_back(parse_point(text));
  }
  if (s.count("param")) {
    for (const auto& kv : s.at("param")) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InvalidArgument("param: expected name=value, got '" + kv + "'");
      cfg.overrides[kv.substr(0, eq)] = to_double("param " + kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
  if (auto v = single(s, "reference")) {
    if (*v == "auto") {
      cfg.reference = ReferenceRule::Auto;
    } else if (*v == "exact") {
      cfg.reference = ReferenceRule::Exact;
    } else if (*v == "self-refined") {
      cfg.reference = ReferenceRule::SelfRefined;
    } else {
      throw InvalidArgument("reference must be auto, exact or self-refined");
    }
  }
  if (auto v = single(s, "csv")) cfg.csv_snapshots = *v == "1" || *v == "true" || *v == "yes";
  if (cfg.ks.empty()) throw InvalidArgument("at least one --k is required");
  return cfg;
}

// Writes to out_dir/name, or to stdout when no directory was given.
void emit(const StudyConfig& cfg, const std::string& name, const std::function<void(std::ostream&)>& body) {
  if (cfg.out_dir.empty()) {
    body(std::cout);
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = cfg.out_dir / name;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  body(os);
  std::cerr << "wrote " << path.string() << "\n";
}

bool any_blow_up(const RunReport& r) {
  for (const auto& c : r.cells) {
    if (c.blew_up) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stiff reaction-diffusion solver (ETD-RDP-IF and baselines)"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1, 1);

  std::map<std::string, std::vector<std::string>> cli;
  std::string config_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", cli["problem"], "catalog key")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--scheme", cli["scheme"], "etd-rdp-if, etd-rdp, imex-bdf2, imex-tr, imex-adams2, etd1-if")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--p", cli["p"], "grid points per axis")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--h", cli["h"], "grid spacing (ignored when --p is given)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--k", cli["k"], "time step; repeat or comma-separate for studies")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--T", cli["T"], "final time")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--bc", cli["bc"], "boundary override: dirichlet, neumann, periodic")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--threads", cli["threads"], "1 or 3")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--seed", cli["seed"], "seed for random initial data")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--out", cli["out"], "output directory (reports go to stdout when omitted)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--param", cli["param"], "problem parameter override name=value (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--reference", cli["reference"], "auto, exact or self-refined")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--config", config_path, "file of key = value lines; flags override it");
  };

  auto* solve = app.add_subcommand("solve", "single run with snapshots and diagnostics");
  auto* converge = app.add_subcommand("converge", "EOC table over the k list");
  auto* efficiency = app.add_subcommand("efficiency", "error vs wall time for several schemes");
  for (auto* sub : {solve, converge, efficiency}) add_common(sub);
  solve->add_option("--snapshot-every", cli["snapshot-every"], "field snapshot cadence in steps (0: first/last)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  solve->add_option("--diagnostics-every", cli["diagnostics-every"], "diagnostics cadence in steps")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  solve->add_option("--probe", cli["probe"], "probe point x,y,z (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  solve->add_option("--csv", cli["csv"], "also export snapshots as CSV (0/1)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string command = solve->parsed() ? "solve" : converge->parsed() ? "converge" : "efficiency";
  StudyConfig cfg;
  try {
    Settings settings;
    if (!config_path.empty()) settings = from_config(load_config(config_path));
    for (const auto& [key, values] : cli) {
      if (!values.empty()) settings[key] = values;
    }
    cfg = build_config(settings, command);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (command == "solve") {
      const RunReport report = run_simulation(cfg);
      emit(cfg, "diagnostics.csv", [&](std::ostream& os) { write_diagnostics_csv(report, os); });
      const auto& cell = report.cells.front();
      std::cerr << report.problem << " " << scheme_name(cell.scheme) << ": " << cell.steps << " steps, dt=" << cell.dt_used
                << (cell.dt_adjusted ? " (adjusted)" : "") << ", wall " << cell.wall_seconds << " s\n";
      if (report.blow_up) {
        std::cerr << "blow-up: " << report.blow_up->what() << "\n";
        return kExitBlowUp;
      }
      return kExitOk;
    }
    const RunReport report = command == "converge" ? run_convergence_study(cfg) : run_efficiency_study(cfg);
    if (command == "converge") {
      emit(cfg, "convergence.csv", [&](std::ostream& os) { write_convergence_csv(report, os); });
    } else {
      emit(cfg, "efficiency.csv", [&](std::ostream& os) { write_efficiency_csv(report, os); });
      if (report.etd_rdp_if_dominates && !*report.etd_rdp_if_dominates) {
        std::cerr << "note: etd-rdp-if is not the fastest at equal error in this run\n";
      }
    }
    return any_blow_up(report) ? kExitBlowUp : kExitOk;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BlowUp& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
