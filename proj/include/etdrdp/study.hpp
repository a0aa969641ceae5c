#pragma once

#include "etdrdp/integrate.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace etdrdp {

enum class ReferenceRule { Auto, Exact, SelfRefined };

struct StudyConfig {
  std::string problem = "enzyme";
  ParamMap overrides;
  std::vector<Scheme> schemes{Scheme::EtdRdpIf};
  std::vector<double> ks;               // strictly decreasing
  std::optional<Index> points;          // takes precedence over h
  std::optional<double> h;              // default: the problem's spacing
  std::optional<double> final_time;     // default: the problem's T
  std::optional<Boundary> bc;
  std::optional<std::uint64_t> seed;    // forwarded to problems with a "seed" parameter
  ReferenceRule reference = ReferenceRule::Auto;
  int threads = 1;

  // run_simulation only
  std::filesystem::path out_dir;        // empty: no files
  Index snapshot_every = 0;             // 0: initial and final snapshots only
  Index diagnostics_every = 1;
  std::vector<Coordinates> probes;
  bool csv_snapshots = false;

  void validate() const;
};

/// One (scheme, k) integration.
struct CellResult {
  Scheme scheme = Scheme::EtdRdpIf;
  double k = 0.0;
  double dt_used = 0.0;
  bool dt_adjusted = false;
  Index steps = 0;
  double error = std::numeric_limits<double>::quiet_NaN();  // L-infinity vs the reference
  double wall_seconds = 0.0;
  double setup_seconds = 0.0;
  double loop_seconds = 0.0;
  std::uint64_t solves = 0;
  std::uint64_t reactions = 0;
  std::string failure;  // empty on success
  bool blew_up = false;

  bool ok() const { return failure.empty(); }
};

struct DiagnosticsRow {
  Index step = 0;
  DiagnosticsRecord record;
};

struct RunReport {
  std::string problem;
  GridSpec grid;
  double final_time = 0.0;
  std::string reference;  // "exact", "self-refined" or "none"
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::vector<CellResult> cells;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<std::filesystem::path> files;
  std::optional<BlowUp> blow_up;
  /// Efficiency studies: ETD-RDP-IF needs no more time than any other scheme at equal error.
  std::optional<bool> etd_rdp_if_dominates;

  /// Cells of one scheme in the order of the k list.
  std::vector<CellResult> cells_for(Scheme scheme) const;
  /// log2(e(k)/e(k/2)) for consecutive cells of `scheme`.
  std::vector<double> eoc(Scheme scheme) const;
};

/// log2(errors[i] / errors[i+1]); NaN where either entry is not positive and finite.
std::vector<double> eoc_sequence(const std::vector<double>& errors);

GridSpec study_grid(const AnyProblem& prob, const StudyConfig& cfg);
AnyProblem study_problem(const StudyConfig& cfg);

/// Errors against the exact solution when one exists (or is demanded), else against the same scheme
/// at min(k)/4. A failed cell records its message and the study carries on.
RunReport run_convergence_study(const StudyConfig& cfg);
/// Convergence data for two or more schemes plus the dominance flag.
RunReport run_efficiency_study(const StudyConfig& cfg);
/// Single integration with k = ks.front(): snapshots into out_dir, diagnostics rows at the cadence.
/// On blow-up the last finite state is written as `<problem>_last_good.etd` and blow_up is set.
RunReport run_simulation(const StudyConfig& cfg);

/// `# key=value ...` metadata line shared by every CSV report.
std::string report_metadata(const RunReport& report);
void write_convergence_csv(const RunReport& report, std::ostream& os);
void write_efficiency_csv(const RunReport& report, std::ostream& os);
void write_diagnostics_csv(const RunReport& report, std::ostream& os);

}  // namespace etdrdp
