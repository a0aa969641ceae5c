#pragma once

#include "etdrdp/bandsolve.hpp"
#include "etdrdp/stepper.hpp"

#include <optional>
#include <utility>

namespace etdrdp {

/// Shared machinery of the second-order IMEX comparators.
///
/// All three treat the unsplit diffusion operator implicitly (one band LU solve per step) and the
/// reaction explicitly with second-order extrapolation. The first step is a single ETD1 / IMEX
/// backward Euler step, U_1 = (I + kA)^{-1}(U_0 + k f(U_0)).
template <typename Scalar>
class ImexMultistep : public Stepper<Scalar> {
 public:
  void reset() override {
    prev_u_.reset();
    prev_f_.reset();
  }

  void step(StateVector<Scalar>& u) override {
    this->eval_reaction(reaction_, u, fn_);
    if (!prev_u_) {
      if (!startup_) startup_ = factor_shifted(op_, this->dt_);
      rhs_ = u + Scalar(this->dt_) * fn_;
      prev_u_ = u;
      prev_f_ = fn_;
      solve(*startup_, rhs_, u);
    } else {
      build_rhs(u, fn_);
      prev_u_->swap(u);  // prev <- U_n; u holds U_{n-1} until overwritten
      prev_f_->swap(fn_);
      solve(implicit_, rhs_, u);
    }
    ++this->counters_.solves;
    ++this->counters_.steps;
  }

 protected:
  ImexMultistep(const BandedOperator<Scalar>& op, Reaction<Scalar> reaction, double k, double shift)
      : Stepper<Scalar>(k),
        op_(op),
        reaction_(std::move(reaction)),
        implicit_(factor_shifted(op, shift)) {}

  /// Fills rhs_ for (I + shift*A) U_{n+1} = rhs_, given U_n, f(U_n) and the stored history.
  virtual void build_rhs(const StateVector<Scalar>& un, const StateVector<Scalar>& fn) = 0;

  const StateVector<Scalar>& prev_u() const { return *prev_u_; }
  const StateVector<Scalar>& prev_f() const { return *prev_f_; }

  BandedOperator<Scalar> op_;
  Reaction<Scalar> reaction_;
  ShiftedFactor<Scalar> implicit_;
  std::optional<ShiftedFactor<Scalar>> startup_;
  std::optional<StateVector<Scalar>> prev_u_, prev_f_;
  StateVector<Scalar> fn_, rhs_;
};

/// IMEX-BDF2 (SBDF2): (3/2) U_{n+1} - 2 U_n + (1/2) U_{n-1} + k A U_{n+1} = k (2 f_n - f_{n-1}).
/// Solved as (I + 2k/3 A) U_{n+1} = (2/3) [2 U_n - U_{n-1}/2 + k (2 f_n - f_{n-1})].
template <typename Scalar>
class ImexBdf2Stepper final : public ImexMultistep<Scalar> {
 public:
  ImexBdf2Stepper(const BandedOperator<Scalar>& op, Reaction<Scalar> reaction, double k)
      : ImexMultistep<Scalar>(op, std::move(reaction), k, 2.0 * k / 3.0) {}
  std::string_view name() const override { return "imex-bdf2"; }

 private:
  void build_rhs(const StateVector<Scalar>& un, const StateVector<Scalar>& fn) override {
    const Scalar k(this->dt_);
    this->rhs_ = Scalar(2.0 / 3.0) *
                 (Scalar(2) * un - Scalar(0.5) * this->prev_u() + k * (Scalar(2) * fn - this->prev_f()));
  }
};

/// IMEX-TR (Crank-Nicolson / Adams-Bashforth 2):
/// (I + k/2 A) U_{n+1} = (I - k/2 A) U_n + k (3/2 f_n - 1/2 f_{n-1}).
template <typename Scalar>
class ImexTrStepper final : public ImexMultistep<Scalar> {
 public:
  ImexTrStepper(const BandedOperator<Scalar>& op, Reaction<Scalar> reaction, double k)
      : ImexMultistep<Scalar>(op, std::move(reaction), k, 0.5 * k) {}
  std::string_view name() const override { return "imex-tr"; }

 private:
  void build_rhs(const StateVector<Scalar>& un, const StateVector<Scalar>& fn) override {
    const Scalar k(this->dt_);
    this->rhs_ = un - (Scalar(0.5) * k) * apply_operator(this->op_, un) +
                 k * (Scalar(1.5) * fn - Scalar(0.5) * this->prev_f());
  }
};

/// IMEX-Adams2: implicit weights (3/4, 0, 1/4) on A U at t_{n+1}, t_n, t_{n-1} and
/// Adams-Bashforth 2 on the reaction:
/// (I + 3k/4 A) U_{n+1} = U_n - k/4 A U_{n-1} + k (3/2 f_n - 1/2 f_{n-1}).
template <typename Scalar>
class ImexAdams2Stepper final : public ImexMultistep<Scalar> {
 public:
  ImexAdams2Stepper(const BandedOperator<Scalar>& op, Reaction<Scalar> reaction, double k)
      : ImexMultistep<Scalar>(op, std::move(reaction), k, 0.75 * k) {}
  std::string_view name() const override { return "imex-adams2"; }

 private:
  void build_rhs(const StateVector<Scalar>& un, const StateVector<Scalar>& fn) override {
    const Scalar k(this->dt_);
    this->rhs_ = un - (Scalar(0.25) * k) * apply_operator(this->op_, this->prev_u()) +
                 k * (Scalar(1.5) * fn - Scalar(0.5) * this->prev_f());
  }
};

}  // namespace etdrdp
