#pragma once

#include "etdrdp/lanes.hpp"
#include "etdrdp/rdp.hpp"
#include "etdrdp/stepper.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace etdrdp {

/// ETD-RDP with integrating-factor dimensional splitting.
///
/// Per step, for split operators A_1..A_d and P = prod_{i=d-1..1} (9 T_i - 8 S_i):
///
///   U*      = (I + k A_d)^{-1} ... (I + k A_1)^{-1} (U_n + k f(U_n))
///   U_{n+1} = T_d [P (9 U_n + 2k f(U_n)) + k f(U*)] - S_d [P (8 U_n + 3k/2 f(U_n)) + k/2 f(U*)]
///
/// with T_i = (I + k/3 A_i)^{-1}, S_i = (I + k/4 A_i)^{-1}. P is applied to U_n and f(U_n)
/// separately and recombined, which groups the solves into stages of at most three independent
/// solves (the T lane, the S lane and the predictor lane). Each stage is one LanePool::run, so the
/// result does not depend on the lane count. A step costs 5d - 2 solves and two reaction calls.
template <typename Scalar>
class EtdRdpIfStepper final : public Stepper<Scalar> {
 public:
  EtdRdpIfStepper(std::vector<BandedOperator<Scalar>> ops, Reaction<Scalar> reaction, double k, int threads = 1,
                  bool predictor_only = false)
      : Stepper<Scalar>(k),
        ops_(std::move(ops)),
        reaction_(std::move(reaction)),
        factors_(RdpFactors<Scalar>::build(ops_, k)),
        lanes_(std::make_unique<LanePool>(threads)),
        predictor_only_(predictor_only) {
    if (ops_.empty()) throw InvalidArgument("need at least one split operator");
  }

  std::string_view name() const override { return predictor_only_ ? "etd1-if" : "etd-rdp-if"; }
  int dim() const { return static_cast<int>(ops_.size()); }
  const RdpFactors<Scalar>& factors() const { return factors_; }
  int threads() const { return lanes_->lanes(); }

  void step(StateVector<Scalar>& u) override {
    const double k = this->dt_;
    const int d = dim();
    const Scalar ks(k);

    this->eval_reaction(reaction_, u, f0_);
    pred_ = u + ks * f0_;
    if (predictor_only_) {
      for (int i = 1; i <= d; ++i) predictor_solve(i);
      u.swap(pred_);
      ++this->counters_.steps;
      return;
    }

    cu_ = u;
    cf_ = f0_;
    int next_pred = 1;
    // Axes 1..d-1: one stage for the U chain, one for the f chain; the predictor rides along.
    for (int i = 1; i < d; ++i) {
      const auto& ax = factors_.axis(i);
      for (StateVector<Scalar>* chain : {&cu_, &cf_}) {
        const bool with_pred = next_pred <= d;
        const int pred_axis = next_pred;
        lanes_->run([&] { solve(ax.third, *chain, a_); }, [&] { solve(ax.quarter, *chain, b_); },
                    [&] {
                      if (with_pred) solve(factors_.axis(pred_axis).full, pred_, pred_tmp_);
                    });
        this->counters_.solves += with_pred ? 3 : 2;
        if (with_pred) {
          pred_.swap(pred_tmp_);
          ++next_pred;
        }
        *chain = Scalar(9) * a_ - Scalar(8) * b_;
      }
    }
    while (next_pred <= d) predictor_solve(next_pred++);

    this->eval_reaction(reaction_, pred_, fs_);
    f1_ = Scalar(9) * cu_ + (Scalar(2) * ks) * cf_ + ks * fs_;
    f2_ = Scalar(8) * cu_ + (Scalar(1.5) * ks) * cf_ + (Scalar(0.5) * ks) * fs_;

    const auto& last = factors_.axis(d);
    lanes_->run([&] { solve(last.third, f1_, a_); }, [&] { solve(last.quarter, f2_, b_); });
    this->counters_.solves += 2;
    u = a_ - b_;
    ++this->counters_.steps;
  }

 private:
  void predictor_solve(int axis) {
    lanes_->run([&] { solve(factors_.axis(axis).full, pred_, pred_tmp_); });
    ++this->counters_.solves;
    pred_.swap(pred_tmp_);
  }

  std::vector<BandedOperator<Scalar>> ops_;
  Reaction<Scalar> reaction_;
  RdpFactors<Scalar> factors_;
  std::unique_ptr<LanePool> lanes_;
  bool predictor_only_;
  StateVector<Scalar> f0_, fs_, cu_, cf_, a_, b_, pred_, pred_tmp_, f1_, f2_;
};

/// Unsplit ETD-RDP on A = sum_i A_i:
///
///   U*      = (I + k A)^{-1} (U_n + k f(U_n))
///   U_{n+1} = (I + k/3 A)^{-1} [9 U_n + 2k f(U_n) + k f(U*)] - (I + k/4 A)^{-1} [8 U_n + 3k/2 f(U_n) + k/2 f(U*)]
///
/// The three shifted systems are factorised once (band LU for d >= 2, the axis solver in 1-D).
template <typename Scalar>
class EtdRdpStepper final : public Stepper<Scalar> {
 public:
  EtdRdpStepper(const BandedOperator<Scalar>& op, Reaction<Scalar> reaction, double k)
      : Stepper<Scalar>(k),
        reaction_(std::move(reaction)),
        third_(factor_shifted(op, k / 3.0)),
        quarter_(factor_shifted(op, k / 4.0)),
        full_(factor_shifted(op, k)) {}

  std::string_view name() const override { return "etd-rdp"; }

  void step(StateVector<Scalar>& u) override {
    const Scalar ks(this->dt_);
    this->eval_reaction(reaction_, u, f0_);
    rhs_ = u + ks * f0_;
    solve(full_, rhs_, pred_);
    this->eval_reaction(reaction_, pred_, fs_);
    f1_ = Scalar(9) * u + (Scalar(2) * ks) * f0_ + ks * fs_;
    f2_ = Scalar(8) * u + (Scalar(1.5) * ks) * f0_ + (Scalar(0.5) * ks) * fs_;
    solve(third_, f1_, a_);
    solve(quarter_, f2_, b_);
    this->counters_.solves += 3;
    u = a_ - b_;
    ++this->counters_.steps;
  }

 private:
  Reaction<Scalar> reaction_;
  ShiftedFactor<Scalar> third_, quarter_, full_;
  StateVector<Scalar> f0_, fs_, rhs_, pred_, f1_, f2_, a_, b_;
};

}  // namespace etdrdp
