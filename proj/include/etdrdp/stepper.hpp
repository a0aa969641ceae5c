#pragma once

#include "etdrdp/grid.hpp"

#include <cstdint>
#include <functional>
#include <string_view>

namespace etdrdp {

/// Pointwise reaction term evaluated over a whole state: out = F(u).
template <typename Scalar>
using Reaction = std::function<void(const StateVector<Scalar>& u, StateVector<Scalar>& out)>;

struct StepCounters {
  std::uint64_t steps = 0;
  std::uint64_t solves = 0;
  std::uint64_t reactions = 0;
};

/// One-step advance U_n -> U_{n+1} with a fixed step size.
template <typename Scalar>
class Stepper {
 public:
  virtual ~Stepper() = default;

  virtual void step(StateVector<Scalar>& u) = 0;
  /// Drops any multistep history so the next step starts afresh.
  virtual void reset() {}
  virtual std::string_view name() const = 0;

  double dt() const { return dt_; }
  const StepCounters& counters() const { return counters_; }

 protected:
  explicit Stepper(double dt) : dt_(dt) {}

  void eval_reaction(const Reaction<Scalar>& f, const StateVector<Scalar>& u, StateVector<Scalar>& out) {
    out.resize(u.size());
    f(u, out);
    ++counters_.reactions;
  }

  double dt_;
  StepCounters counters_;
};

}  // namespace etdrdp
