#pragma once

#include "etdrdp/baselines.hpp"
#include "etdrdp/etd.hpp"
#include "etdrdp/problems.hpp"

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace etdrdp {

enum class Scheme { EtdRdpIf, EtdRdp, ImexBdf2, ImexTr, ImexAdams2, Etd1If };

std::string_view scheme_name(Scheme scheme);
/// Accepts the names printed by scheme_name ("etd-rdp-if", "imex-bdf2", ...), case-insensitive,
/// with '_' and '-' interchangeable.
Scheme parse_scheme(std::string_view text);

struct SchemeConfig {
  Scheme scheme = Scheme::EtdRdpIf;
  double dt = 0.01;
  double final_time = 1.0;
  int threads = 1;
};

/// Number of steps for [0, T] and the step actually used: T/dt is rounded to an integer n and
/// dt is replaced by T/n when the two differ.
struct StepPlan {
  Index steps = 0;
  double dt = 0.0;
  bool adjusted = false;
};
StepPlan plan_steps(double final_time, double dt);

/// A non-finite value appeared in the state.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(Index step, double time)
      : std::runtime_error("non-finite state at step " + std::to_string(step) + " (t = " + std::to_string(time) + ")"),
        step_(step),
        time_(time) {}
  Index step() const { return step_; }
  double time() const { return time_; }

 private:
  Index step_;
  double time_;
};

struct IntegrationRecord {
  Index steps = 0;
  double dt = 0.0;
  bool dt_adjusted = false;
  int threads = 1;
  double setup_seconds = 0.0;
  double loop_seconds = 0.0;
  StepCounters counters;

  double wall_seconds() const { return setup_seconds + loop_seconds; }
};

template <typename Scalar>
struct IntegrationResult {
  StateVector<Scalar> state;
  IntegrationRecord record;
};

template <typename Scalar>
using Observer = std::function<void(Index step, double t, const StateVector<Scalar>& u)>;

/// Builds the stepper for `scheme`. Split schemes receive the d axis operators, unsplit ones the sum.
template <typename Scalar>
std::unique_ptr<Stepper<Scalar>> make_stepper(Scheme scheme, const GridSpec& grid, const DiffusionSpec& diff,
                                              Reaction<Scalar> reaction, double dt, int threads = 1) {
  if (scheme == Scheme::EtdRdpIf || scheme == Scheme::Etd1If) {
    std::vector<BandedOperator<Scalar>> ops;
    for (int a = 1; a <= grid.dim; ++a) ops.push_back(split_operator<Scalar>(grid, diff, a));
    return std::make_unique<EtdRdpIfStepper<Scalar>>(std::move(ops), std::move(reaction), dt, threads,
                                                      scheme == Scheme::Etd1If);
  }
  const auto op = full_operator<Scalar>(grid, diff);
  switch (scheme) {
    case Scheme::EtdRdp:
      return std::make_unique<EtdRdpStepper<Scalar>>(op, std::move(reaction), dt);
    case Scheme::ImexBdf2:
      return std::make_unique<ImexBdf2Stepper<Scalar>>(op, std::move(reaction), dt);
    case Scheme::ImexTr:
      return std::make_unique<ImexTrStepper<Scalar>>(op, std::move(reaction), dt);
    case Scheme::ImexAdams2:
      return std::make_unique<ImexAdams2Stepper<Scalar>>(op, std::move(reaction), dt);
    default:
      break;
  }
  throw InvalidArgument("unknown scheme");
}

/// Advances `initial` from t = 0 to cfg.final_time.
///
/// `observer` sees step 0, every `observe_every`-th step (0: never in between) and the last step.
/// Throws BlowUp as soon as a non-finite entry appears.
template <typename Scalar>
IntegrationResult<Scalar> integrate(const GridSpec& grid, const DiffusionSpec& diff, const Reaction<Scalar>& reaction,
                                    StateVector<Scalar> initial, const SchemeConfig& cfg,
                                    const Observer<Scalar>& observer = {}, Index observe_every = 0) {
  using clock = std::chrono::steady_clock;
  if (initial.size() != grid.size()) throw InvalidArgument("initial state does not match the grid");
  IntegrationResult<Scalar> result;
  auto& rec = result.record;
  rec.threads = cfg.threads;
  if (!(cfg.final_time >= 0.0)) throw InvalidArgument("final time must be non-negative");

  const StepPlan plan = plan_steps(cfg.final_time, cfg.dt);
  rec.steps = plan.steps;
  rec.dt = plan.dt;
  rec.dt_adjusted = plan.adjusted;
  result.state = std::move(initial);
  if (observer) observer(0, 0.0, result.state);
  if (plan.steps == 0) return result;

  const auto t0 = clock::now();
  auto stepper = make_stepper<Scalar>(cfg.scheme, grid, diff, reaction, plan.dt, cfg.threads);
  const auto t1 = clock::now();
  for (Index n = 1; n <= plan.steps; ++n) {
    stepper->step(result.state);
    const double t = static_cast<double>(n) * plan.dt;
    if (!result.state.allFinite()) throw BlowUp(n, t);
    if (observer && ((observe_every > 0 && n % observe_every == 0) || n == plan.steps)) {
      observer(n, t, result.state);
    }
  }
  const auto t2 = clock::now();
  rec.setup_seconds = std::chrono::duration<double>(t1 - t0).count();
  rec.loop_seconds = std::chrono::duration<double>(t2 - t1).count();
  rec.counters = stepper->counters();
  return result;
}

/// Integrates a catalog problem from its initial data.
template <typename Scalar>
IntegrationResult<Scalar> integrate(const Problem<Scalar>& prob, const GridSpec& grid, const SchemeConfig& cfg,
                                    const Observer<Scalar>& observer = {}, Index observe_every = 0) {
  return integrate<Scalar>(grid, prob.diffusion, bind_reaction(prob, grid), initial_state(prob, grid), cfg, observer,
                           observe_every);
}

}  // namespace etdrdp
