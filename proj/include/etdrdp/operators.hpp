#pragma once

#include "etdrdp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace etdrdp {

/// Sparse square matrix stored as a handful of diagonals.
///
/// `bands[j][r]` holds A(r, r + offsets[j]); entries whose column falls outside [0, size)
/// or across a line boundary are stored as zero. A split operator (axis >= 1) also records
/// the line geometry it was assembled from, which the fast solvers rely on.
template <typename Scalar>
struct BandedOperator {
  Index size = 0;
  int axis = 0;  // 0 for an unsplit sum of axis operators
  Boundary bc = Boundary::Dirichlet;
  Index stride = 1;       // offset between line neighbours (s * p^(axis-1))
  Index line_points = 0;  // p
  Index components = 1;   // s
  std::vector<Index> offsets;
  std::vector<StateVector<Scalar>> bands;

  Index half_bandwidth() const {
    Index w = 0;
    for (Index o : offsets) w = std::max(w, std::abs(o));
    return w;
  }

  /// Band for `offset`, or nullptr when the offset is not stored.
  const StateVector<Scalar>* band(Index offset) const {
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      if (offsets[j] == offset) return &bands[j];
    }
    return nullptr;
  }

  bool is_zero() const {
    for (const auto& b : bands) {
      if (!b.isZero(0.0)) return false;
    }
    return true;
  }

  /// Max-row-sum norm computed from the bands.
  double norm_inf() const {
    double best = 0.0;
    for (Index r = 0; r < size; ++r) {
      double row = 0.0;
      for (const auto& b : bands) row += std::abs(b[r]);
      best = std::max(best, row);
    }
    return best;
  }
};

namespace detail {

// Inserts `values` at `offset`, summing into an existing band if present.
template <typename Scalar>
void accumulate_band(BandedOperator<Scalar>& op, Index offset, const StateVector<Scalar>& values) {
  auto it = std::lower_bound(op.offsets.begin(), op.offsets.end(), offset);
  const auto pos = static_cast<std::size_t>(it - op.offsets.begin());
  if (it != op.offsets.end() && *it == offset) {
    op.bands[pos] += values;
  } else {
    op.offsets.insert(it, offset);
    op.bands.insert(op.bands.begin() + static_cast<std::ptrdiff_t>(pos), values);
  }
}

// Entries of the 1-D stencil B_p: main, upper (j -> j+1), lower (j -> j-1) and, for periodic
// grids, the wraparound corner. Returned in units of 1/h^2.
struct LineStencil {
  double main = 2.0;
  double upper = -1.0;
  double lower = -1.0;
  double first_upper = -1.0;  // row 0
  double last_lower = -1.0;   // row p-1
};

inline LineStencil line_stencil(Boundary bc) {
  LineStencil st;
  if (bc == Boundary::Neumann) {
    st.first_upper = -2.0;
    st.last_lower = -2.0;
  }
  return st;
}

}  // namespace detail

/// Split operator A_axis = I ⊗ .. ⊗ B_p ⊗ .. ⊗ I ⊗ D for the component-fastest layout.
///
/// Dirichlet/Neumann operators carry offsets {-w, 0, w}; periodic operators add the
/// wraparound bands ±w(p-1), where w = grid.stride(axis).
template <typename Scalar>
BandedOperator<Scalar> split_operator(const GridSpec& grid, const DiffusionSpec& diff, int axis) {
  grid.validate();
  diff.validate(grid.components);
  if (axis < 1 || axis > grid.dim) throw InvalidArgument("axis out of range");

  const Index p = grid.points;
  const Index s = grid.components;
  const Index m = grid.size();
  const Index w = grid.stride(axis);
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const auto st = detail::line_stencil(grid.bc);

  std::vector<Scalar> coeff(static_cast<std::size_t>(s));
  for (Index c = 0; c < s; ++c) {
    coeff[static_cast<std::size_t>(c)] = coefficient_cast<Scalar>(diff.coeffs[static_cast<std::size_t>(c)]);
  }

  StateVector<Scalar> main(m), upper = StateVector<Scalar>::Zero(m), lower = StateVector<Scalar>::Zero(m);
  StateVector<Scalar> wrap_up, wrap_down;
  const bool periodic = grid.bc == Boundary::Periodic;
  if (periodic) {
    wrap_up = StateVector<Scalar>::Zero(m);
    wrap_down = StateVector<Scalar>::Zero(m);
  }

  for (Index r = 0; r < m; ++r) {
    const Scalar dc = coeff[static_cast<std::size_t>(r % s)];
    const Index j = (r / w) % p;
    main[r] = dc * (st.main * inv_h2);
    if (j < p - 1) upper[r] = dc * ((j == 0 ? st.first_upper : st.upper) * inv_h2);
    if (j > 0) lower[r] = dc * ((j == p - 1 ? st.last_lower : st.lower) * inv_h2);
    if (periodic) {
      if (j == 0) wrap_up[r] = dc * (-inv_h2);
      if (j == p - 1) wrap_down[r] = dc * (-inv_h2);
    }
  }

  BandedOperator<Scalar> op;
  op.size = m;
  op.axis = axis;
  op.bc = grid.bc;
  op.stride = w;
  op.line_points = p;
  op.components = s;
  if (periodic) {
    op.offsets = {-w * (p - 1), -w, 0, w, w * (p - 1)};
    op.bands = {std::move(wrap_down), std::move(lower), std::move(main), std::move(upper), std::move(wrap_up)};
  } else {
    op.offsets = {-w, 0, w};
    op.bands = {std::move(lower), std::move(main), std::move(upper)};
  }
  return op;
}

/// One-dimensional B_p for a single component with unit diffusion and spacing `h`.
///
/// Accepts p >= 2 (p >= 3 for periodic, where the corner bands would collide otherwise).
inline BandedOperator<double> laplacian_band(Index p, Boundary bc, double h) {
  if (!(h > 0.0)) throw InvalidArgument("mesh width must be positive");
  if (p < 2 || (bc == Boundary::Periodic && p < 3)) {
    throw InvalidArgument("too few points for the requested boundary condition");
  }
  // A grid whose spacing is exactly h; extents only matter through spacing().
  GridSpec g;
  g.dim = 1;
  g.points = p;
  g.components = 1;
  g.bc = bc;
  g.lo = {0.0, 0.0, 0.0};
  const double len = bc == Boundary::Dirichlet  ? h * static_cast<double>(p + 1)
                     : bc == Boundary::Neumann ? h * static_cast<double>(p - 1)
                                                : h * static_cast<double>(p);
  g.hi = {len, len, len};
  if (p == 2) {
    // GridSpec insists on p >= 3; assemble the 2x2 case directly.
    BandedOperator<double> op;
    const double inv_h2 = 1.0 / (h * h);
    const auto st = detail::line_stencil(bc);
    op.size = 2;
    op.axis = 1;
    op.bc = bc;
    op.stride = 1;
    op.line_points = 2;
    op.offsets = {-1, 0, 1};
    op.bands = {StateVector<double>(2), StateVector<double>(2), StateVector<double>(2)};
    op.bands[0] << 0.0, st.last_lower * inv_h2;
    op.bands[1] << st.main * inv_h2, st.main * inv_h2;
    op.bands[2] << st.first_upper * inv_h2, 0.0;
    return op;
  }
  return split_operator<double>(g, DiffusionSpec::uniform(1, 1.0), 1);
}

/// Unsplit A = sum_i A_i, merged into one multi-band operator (axis = 0).
template <typename Scalar>
BandedOperator<Scalar> full_operator(const GridSpec& grid, const DiffusionSpec& diff) {
  // A one-term sum is the axis operator itself, so 1-D keeps its structured solver.
  if (grid.dim == 1) return split_operator<Scalar>(grid, diff, 1);
  BandedOperator<Scalar> sum;
  sum.size = grid.size();
  sum.axis = 0;
  sum.bc = grid.bc;
  sum.components = grid.components;
  sum.line_points = grid.points;
  for (int a = 1; a <= grid.dim; ++a) {
    const auto op = split_operator<Scalar>(grid, diff, a);
    for (std::size_t j = 0; j < op.offsets.size(); ++j) {
      detail::accumulate_band(sum, op.offsets[j], op.bands[j]);
    }
  }
  return sum;
}

/// y = A x evaluated from the bands.
template <typename Scalar>
StateVector<Scalar> apply_operator(const BandedOperator<Scalar>& op, const StateVector<Scalar>& x) {
  if (x.size() != op.size) throw InvalidArgument("apply_operator: size mismatch");
  StateVector<Scalar> y = StateVector<Scalar>::Zero(op.size);
  for (std::size_t j = 0; j < op.offsets.size(); ++j) {
    const Index o = op.offsets[j];
    const auto& b = op.bands[j];
    const Index r0 = std::max<Index>(0, -o);
    const Index r1 = std::min<Index>(op.size, op.size - o);
    for (Index r = r0; r < r1; ++r) y[r] += b[r] * x[r + o];
  }
  return y;
}

inline constexpr Index kDenseGuard = 4096;

/// Full matrix with every band placed at its offset. Test oracle only: refuses size > 4096.
template <typename Scalar>
DenseMatrix<Scalar> dense_materialize(const BandedOperator<Scalar>& op) {
  if (op.size > kDenseGuard) throw InvalidArgument("dense_materialize: operator too large");
  DenseMatrix<Scalar> a = DenseMatrix<Scalar>::Zero(op.size, op.size);
  for (std::size_t j = 0; j < op.offsets.size(); ++j) {
    const Index o = op.offsets[j];
    for (Index r = 0; r < op.size; ++r) {
      const Index c = r + o;
      if (c >= 0 && c < op.size) a(r, c) += op.bands[j][r];
    }
  }
  return a;
}

/// Re-extracts the bands at `like.offsets` from a dense matrix, keeping the metadata of `like`.
template <typename Scalar>
BandedOperator<Scalar> bands_from_dense(const DenseMatrix<Scalar>& a, const BandedOperator<Scalar>& like) {
  if (a.rows() != like.size || a.cols() != like.size) throw InvalidArgument("bands_from_dense: size mismatch");
  BandedOperator<Scalar> op = like;
  for (std::size_t j = 0; j < op.offsets.size(); ++j) {
    const Index o = op.offsets[j];
    for (Index r = 0; r < op.size; ++r) {
      const Index c = r + o;
      op.bands[j][r] = (c >= 0 && c < op.size) ? a(r, c) : Scalar(0);
    }
  }
  return op;
}

}  // namespace etdrdp
