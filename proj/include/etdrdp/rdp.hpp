#pragma once

#include "etdrdp/bandsolve.hpp"

#include <complex>
#include <vector>

namespace etdrdp {

/// Real-distinct-pole approximation of e^{-z}: (1 - 5z/12) / ((1 + z/3)(1 + z/4)).
///
/// Second order at the origin and L-acceptable: |R(z)| <= 1 on Re z >= 0 and R(z) -> 0
/// as z -> infinity. Poles at z = -3 and z = -4.
inline Complex rdp_scalar(Complex z) {
  const Complex third = 1.0 + z / 3.0;
  const Complex quarter = 1.0 + z / 4.0;
  if (std::abs(third) == 0.0 || std::abs(quarter) == 0.0) {
    throw InvalidArgument("rdp_scalar: argument is a pole");
  }
  return (1.0 - 5.0 * z / 12.0) / (third * quarter);
}

/// The three shifted factors of one split axis: shifts k/3, k/4 and k.
template <typename Scalar>
struct AxisFactors {
  ShiftedFactor<Scalar> third;
  ShiftedFactor<Scalar> quarter;
  ShiftedFactor<Scalar> full;
};

/// Factor triples for every split axis, all built for the same step k.
template <typename Scalar>
struct RdpFactors {
  double dt = 0.0;
  std::vector<AxisFactors<Scalar>> axes;

  static RdpFactors build(const std::vector<BandedOperator<Scalar>>& ops, double k) {
    if (!(k > 0.0)) throw InvalidArgument("time step must be positive");
    RdpFactors f;
    f.dt = k;
    f.axes.reserve(ops.size());
    for (const auto& op : ops) {
      f.axes.push_back({factor_shifted(op, k / 3.0), factor_shifted(op, k / 4.0), factor_shifted(op, k)});
    }
    return f;
  }

  const AxisFactors<Scalar>& axis(int i) const {
    if (i < 1 || i > static_cast<int>(axes.size())) throw InvalidArgument("axis out of range");
    return axes[static_cast<std::size_t>(i - 1)];
  }
};

/// R_RDP(k A_axis) v in partial-fraction form: 9 (I + k/3 A)^{-1} v - 8 (I + k/4 A)^{-1} v.
template <typename Scalar>
StateVector<Scalar> apply_rdp_factor(const RdpFactors<Scalar>& f, int axis, const StateVector<Scalar>& v) {
  const auto& ax = f.axis(axis);
  StateVector<Scalar> a, b;
  solve(ax.third, v, a);
  solve(ax.quarter, v, b);
  return Scalar(9) * a - Scalar(8) * b;
}

}  // namespace etdrdp
