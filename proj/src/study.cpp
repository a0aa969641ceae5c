#include "etdrdp/study.hpp"

#include "etdrdp/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace etdrdp {
namespace {

template <typename Scalar>
double max_abs_diff(const StateVector<Scalar>& a, const StateVector<Scalar>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

template <typename Scalar>
DiagnosticsRecord diagnose(const StateVector<Scalar>& u, const GridSpec& grid, double t,
                           const std::vector<Coordinates>& probes) {
  DiagnosticsRecord rec;
  rec.t = t;
  rec.max_modulus = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  const bool conserved_pair = grid.components == 1 || (grid.components == 2 && !is_complex_v<Scalar>);
  if (grid.dim == 1 && conserved_pair) {
    rec.mass = mass(u, grid);
    rec.energy = energy(u, grid);
  }
  for (const auto& x : probes) {
    const auto vals = probe(u, grid, x);
    rec.probes.emplace_back(vals.begin(), vals.end());
  }
  return rec;
}

CellResult make_cell(Scheme scheme, double k, const IntegrationRecord& rec) {
  CellResult c;
  c.scheme = scheme;
  c.k = k;
  c.dt_used = rec.dt;
  c.dt_adjusted = rec.dt_adjusted;
  c.steps = rec.steps;
  c.wall_seconds = rec.wall_seconds();
  c.setup_seconds = rec.setup_seconds;
  c.loop_seconds = rec.loop_seconds;
  c.solves = rec.counters.solves;
  c.reactions = rec.counters.reactions;
  return c;
}

template <typename Scalar>
RunReport convergence(const Problem<Scalar>& prob, const GridSpec& grid, const StudyConfig& cfg) {
  RunReport report;
  report.problem = prob.name;
  report.grid = grid;
  report.final_time = cfg.final_time.value_or(prob.final_time);
  report.seed = cfg.seed;
  report.threads = cfg.threads;

  bool use_exact = prob.has_exact();
  if (cfg.reference == ReferenceRule::Exact && !use_exact) {
    throw InvalidArgument("problem '" + prob.name + "' has no exact solution");
  }
  if (cfg.reference == ReferenceRule::SelfRefined) use_exact = false;
  report.reference = use_exact ? "exact" : "self-refined";

  const Reaction<Scalar> reaction = bind_reaction(prob, grid);
  const StateVector<Scalar> u0 = initial_state(prob, grid);
  std::optional<StateVector<Scalar>> exact;
  if (use_exact) exact = exact_solution(prob, grid, report.final_time);

  for (Scheme scheme : cfg.schemes) {
    SchemeConfig sc;
    sc.scheme = scheme;
    sc.final_time = report.final_time;
    sc.threads = cfg.threads;

    std::optional<StateVector<Scalar>> reference = exact;
    std::string ref_failure;
    if (!use_exact) {
      sc.dt = cfg.ks.back() / 4.0;
      try {
        reference = integrate<Scalar>(grid, prob.diffusion, reaction, u0, sc).state;
      } catch (const std::exception& e) {
        ref_failure = std::string("reference run failed: ") + e.what();
      }
    }
    for (double k : cfg.ks) {
      sc.dt = k;
      CellResult cell;
      try {
        auto res = integrate<Scalar>(grid, prob.diffusion, reaction, u0, sc);
        cell = make_cell(scheme, k, res.record);
        if (reference) {
          cell.error = max_abs_diff(res.state, *reference);
        } else {
          cell.failure = ref_failure;
        }
      } catch (const std::exception& e) {
        cell.scheme = scheme;
        cell.k = k;
        cell.failure = e.what();
        cell.blew_up = dynamic_cast<const BlowUp*>(&e) != nullptr;
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

// Time ETD-RDP-IF needs to reach error `e`, by log-log interpolation of its curve; nullopt outside its range.
std::optional<double> interpolated_time(std::vector<CellResult> curve, double e) {
  std::erase_if(curve, [](const CellResult& c) { return !c.ok() || !(c.error > 0.0) || !(c.wall_seconds > 0.0); });
  std::sort(curve.begin(), curve.end(), [](const auto& a, const auto& b) { return a.error < b.error; });
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double e0 = curve[i].error;
    const double e1 = curve[i + 1].error;
    if (e >= e0 && e <= e1) {
      const double w = e1 > e0 ? (std::log(e) - std::log(e0)) / (std::log(e1) - std::log(e0)) : 0.0;
      return std::exp((1.0 - w) * std::log(curve[i].wall_seconds) + w * std::log(curve[i + 1].wall_seconds));
    }
  }
  return std::nullopt;
}

template <typename Scalar>
RunReport simulation(const Problem<Scalar>& prob, const GridSpec& grid, const StudyConfig& cfg) {
  RunReport report;
  report.problem = prob.name;
  report.grid = grid;
  report.final_time = cfg.final_time.value_or(prob.final_time);
  report.reference = "none";
  report.seed = cfg.seed;
  report.threads = cfg.threads;

  const bool write = !cfg.out_dir.empty();
  if (write) std::filesystem::create_directories(cfg.out_dir);
  auto snapshot = [&](const StateVector<Scalar>& u, const std::string& tag) {
    if (!write) return;
    const auto path = cfg.out_dir / (prob.name + "_" + tag + ".etd");
    write_field(u, grid, path);
    report.files.push_back(path);
    if (cfg.csv_snapshots) {
      auto csv = path;
      csv.replace_extension(".csv");
      write_field_csv(u, grid, csv);
      report.files.push_back(csv);
    }
  };
  auto step_tag = [](Index n) {
    std::ostringstream os;
    os << std::setw(8) << std::setfill('0') << n;
    return os.str();
  };

  SchemeConfig sc;
  sc.scheme = cfg.schemes.front();
  sc.dt = cfg.ks.front();
  sc.final_time = report.final_time;
  sc.threads = cfg.threads;
  const Index final_step = plan_steps(sc.final_time, sc.dt).steps;

  StateVector<Scalar> last_good;
  Index last_step = 0;
  Observer<Scalar> observer = [&](Index n, double t, const StateVector<Scalar>& u) {
    last_good = u;
    last_step = n;
    const Index every = std::max<Index>(1, cfg.diagnostics_every);
    if (n % every == 0 || n == final_step) report.diagnostics.push_back({n, diagnose(u, grid, t, cfg.probes)});
    if (n == 0 || n == final_step || (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0)) {
      snapshot(u, step_tag(n));
    }
  };

  try {
    auto res = integrate(prob, grid, sc, observer, 1);
    report.cells.push_back(make_cell(sc.scheme, sc.dt, res.record));
  } catch (const BlowUp& b) {
    report.blow_up = b;
    CellResult cell;
    cell.scheme = sc.scheme;
    cell.k = sc.dt;
    cell.steps = last_step;
    cell.failure = b.what();
    cell.blew_up = true;
    report.cells.push_back(cell);
    snapshot(last_good, "last_good");
  }
  return report;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

void StudyConfig::validate() const {
  if (schemes.empty()) throw InvalidArgument("at least one scheme is required");
  if (ks.empty()) throw InvalidArgument("at least one time step is required");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0.0)) throw InvalidArgument("time steps must be positive");
    if (i > 0 && !(ks[i] < ks[i - 1])) throw InvalidArgument("time steps must be strictly decreasing");
  }
  if (threads != 1 && threads != 3) throw InvalidArgument("threads must be 1 or 3");
  if (points && *points < 3) throw InvalidArgument("need at least 3 points per axis");
  if (h && !(*h > 0.0)) throw InvalidArgument("spacing must be positive");
  if (final_time && !(*final_time >= 0.0)) throw InvalidArgument("final time must be non-negative");
  if (snapshot_every < 0 || diagnostics_every < 0) throw InvalidArgument("cadences must be non-negative");
}

std::vector<CellResult> RunReport::cells_for(Scheme scheme) const {
  std::vector<CellResult> out;
  for (const auto& c : cells) {
    if (c.scheme == scheme) out.push_back(c);
  }
  return out;
}

std::vector<double> RunReport::eoc(Scheme scheme) const {
  std::vector<double> errors;
  for (const auto& c : cells_for(scheme)) errors.push_back(c.error);
  return eoc_sequence(errors);
}

std::vector<double> eoc_sequence(const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double a = errors[i];
    const double b = errors[i + 1];
    const bool valid = std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0;
    out.push_back(valid ? std::log2(a / b) : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

AnyProblem study_problem(const StudyConfig& cfg) {
  ParamMap overrides = cfg.overrides;
  if (cfg.seed) {
    const ParamMap defaults = problem_defaults(cfg.problem);
    if (defaults.count("seed")) overrides["seed"] = static_cast<double>(*cfg.seed);
  }
  return make_problem(cfg.problem, overrides);
}

GridSpec study_grid(const AnyProblem& prob, const StudyConfig& cfg) {
  return std::visit(
      [&](const auto& p) {
        if (cfg.points) return p.grid(*cfg.points, cfg.bc);
        return p.grid_for_spacing(cfg.h.value_or(p.default_spacing), cfg.bc);
      },
      prob);
}

RunReport run_convergence_study(const StudyConfig& cfg) {
  cfg.validate();
  if (cfg.ks.size() < 2) throw InvalidArgument("a convergence study needs at least two time steps");
  const AnyProblem prob = study_problem(cfg);
  const GridSpec grid = study_grid(prob, cfg);
  return std::visit([&](const auto& p) { return convergence(p, grid, cfg); }, prob);
}

RunReport run_efficiency_study(const StudyConfig& cfg) {
  cfg.validate();
  if (cfg.schemes.size() < 2) throw InvalidArgument("an efficiency study needs at least two schemes");
  const AnyProblem prob = study_problem(cfg);
  const GridSpec grid = study_grid(prob, cfg);
  // A single k still yields one (time, error) point per scheme.
  RunReport report = std::visit([&](const auto& p) { return convergence(p, grid, cfg); }, prob);

  const auto ours = report.cells_for(Scheme::EtdRdpIf);
  if (!ours.empty()) {
    bool compared = false;
    bool dominates = true;
    for (const auto& cell : report.cells) {
      if (cell.scheme == Scheme::EtdRdpIf || !cell.ok() || !(cell.error > 0.0)) continue;
      const auto t = interpolated_time(ours, cell.error);
      if (!t) continue;
      compared = true;
      if (*t > cell.wall_seconds) dominates = false;
    }
    if (compared) report.etd_rdp_if_dominates = dominates;
  }
  return report;
}

RunReport run_simulation(const StudyConfig& cfg) {
  cfg.validate();
  const AnyProblem prob = study_problem(cfg);
  const GridSpec grid = study_grid(prob, cfg);
  return std::visit([&](const auto& p) { return simulation(p, grid, cfg); }, prob);
}

std::string report_metadata(const RunReport& report) {
  std::ostringstream os;
  os << "# problem=" << report.problem << " d=" << report.grid.dim << " p=" << report.grid.points
     << " s=" << report.grid.components << " bc=" << boundary_code(report.grid.bc) << " h=" << fmt(report.grid.spacing())
     << " T=" << fmt(report.final_time) << " norm=Linf reference=" << report.reference
     << " seed=" << (report.seed ? std::to_string(*report.seed) : std::string("none")) << " threads=" << report.threads;
  if (report.etd_rdp_if_dominates) os << " etd_rdp_if_dominates=" << (*report.etd_rdp_if_dominates ? 1 : 0);
  if (report.blow_up) os << " blow_up_step=" << report.blow_up->step() << " blow_up_t=" << fmt(report.blow_up->time());
  return os.str();
}

void write_convergence_csv(const RunReport& report, std::ostream& os) {
  os << report_metadata(report) << "\n";
  os << "scheme,k,dt_used,dt_adjusted,steps,error,eoc,wall_s,setup_s,loop_s,solves,reactions,status\n";
  std::map<Scheme, std::size_t> seen;
  std::map<Scheme, std::vector<double>> eocs;
  for (const auto& c : report.cells) {
    if (!eocs.count(c.scheme)) eocs[c.scheme] = report.eoc(c.scheme);
    const std::size_t i = seen[c.scheme]++;
    os << scheme_name(c.scheme) << "," << fmt(c.k) << "," << fmt(c.dt_used) << "," << (c.dt_adjusted ? 1 : 0) << ","
       << c.steps << "," << std::setprecision(10) << c.error << ",";
    if (i > 0) os << fmt(eocs[c.scheme][i - 1]);
    os << "," << fmt(c.wall_seconds) << "," << fmt(c.setup_seconds) << "," << fmt(c.loop_seconds) << "," << c.solves
       << "," << c.reactions << ",";
    if (c.ok()) {
      os << "ok";
    } else {
      std::string msg = c.failure;
      std::replace(msg.begin(), msg.end(), ',', ';');
      os << "failed: " << msg;
    }
    os << "\n";
  }
}

void write_efficiency_csv(const RunReport& report, std::ostream& os) {
  os << report_metadata(report) << "\n";
  os << "scheme,k,error,wall_s,setup_s,loop_s,status\n";
  for (const auto& c : report.cells) {
    os << scheme_name(c.scheme) << "," << fmt(c.k) << "," << std::setprecision(10) << c.error << ","
       << fmt(c.wall_seconds) << "," << fmt(c.setup_seconds) << "," << fmt(c.loop_seconds) << ","
       << (c.ok() ? "ok" : "failed") << "\n";
  }
}

void write_diagnostics_csv(const RunReport& report, std::ostream& os) {
  os << report_metadata(report) << "\n";
  os << "step,t,max_abs,mass,energy";
  const std::size_t nprobes = report.diagnostics.empty() ? 0 : report.diagnostics.front().record.probes.size();
  for (std::size_t p = 0; p < nprobes; ++p) {
    for (Index c = 0; c < report.grid.components; ++c) {
      os << ",probe" << p << "_u" << c + 1 << "_re,probe" << p << "_u" << c + 1 << "_im";
    }
  }
  os << "\n" << std::setprecision(15);
  for (const auto& row : report.diagnostics) {
    const auto& r = row.record;
    os << row.step << "," << r.t << "," << r.max_modulus << ",";
    if (r.mass) os << *r.mass;
    os << ",";
    if (r.energy) os << *r.energy;
    for (const auto& vals : r.probes) {
      for (const Complex& v : vals) os << "," << v.real() << "," << v.imag();
    }
    os << "\n";
  }
}

}  // namespace etdrdp
