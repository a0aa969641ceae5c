#pragma once

#include "etdrdp/operators.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace etdrdp {

enum class FactorKind {
  OffsetThomas,  // three bands {-w, 0, w}: Thomas recurrence with stride w
  Circulant,     // periodic split operator: per-line DFT diagonalisation
  BandedLU,      // general multi-band operator (unsplit sums): unpivoted band LU
};

/// Reusable factorisation of I + sigma*A.
///
/// Immutable once built; concurrent solves with distinct right-hand sides are safe.
template <typename Scalar>
struct ShiftedFactor {
  FactorKind kind = FactorKind::OffsetThomas;
  double sigma = 0.0;
  Index size = 0;

  // OffsetThomas: lower band l_i, effective pivots d_i - alpha_{i-w} l_i and multipliers alpha_i.
  // The sweep uses 1/pivot_i and l_i/pivot_i so each link of the recurrence is a single multiply-add.
  Index w = 0;
  StateVector<Scalar> lower;
  StateVector<Scalar> pivot;
  StateVector<Scalar> alpha;
  StateVector<Scalar> inv_pivot;
  StateVector<Scalar> lower_scaled;

  // Circulant: eigenvalues of the p x p line matrix for each component.
  Index stride = 0;
  Index line_points = 0;
  Index components = 1;
  std::vector<std::vector<Complex>> diag_fft;

  // BandedLU: LAPACK-style band storage, element (i, j) at lu(ku + i - j, j).
  Index kl = 0;
  Index ku = 0;
  DenseMatrix<Scalar> lu;
};

namespace detail {

inline double pivot_floor(double row_scale) { return 1e-14 * row_scale; }

template <typename Scalar>
Scalar band_value(const BandedOperator<Scalar>& op, Index offset, Index row) {
  const auto* b = op.band(offset);
  return b ? (*b)[row] : Scalar(0);
}

template <typename Scalar>
ShiftedFactor<Scalar> factor_offset_thomas(const BandedOperator<Scalar>& op, double sigma) {
  Index w = 0;
  for (Index o : op.offsets) {
    if (o == 0) continue;
    const Index a = std::abs(o);
    if (w != 0 && a != w) throw InvalidArgument("offset Thomas needs offsets {-w, 0, w}");
    w = a;
  }
  if (w == 0) w = op.size;  // diagonal operator: no coupling

  ShiftedFactor<Scalar> f;
  f.kind = FactorKind::OffsetThomas;
  f.sigma = sigma;
  f.size = op.size;
  f.w = w;
  const Index m = op.size;
  f.lower.resize(m);
  f.pivot.resize(m);
  f.alpha = StateVector<Scalar>::Zero(m);
  for (Index i = 0; i < m; ++i) {
    const Scalar l = i >= w ? Scalar(sigma) * band_value(op, -w, i) : Scalar(0);
    const Scalar d = Scalar(1) + Scalar(sigma) * band_value(op, 0, i);
    const Scalar u = i + w < m ? Scalar(sigma) * band_value(op, w, i) : Scalar(0);
    f.lower[i] = l;
    const Scalar piv = i >= w ? d - f.alpha[i - w] * l : d;
    const double scale = std::abs(d) + std::abs(l) + std::abs(u);
    if (!(std::abs(piv) > pivot_floor(scale))) {
      throw SolverError("offset Thomas: vanishing pivot at row " + std::to_string(i) +
                        " (shift too large for diagonal dominance)");
    }
    f.pivot[i] = piv;
    f.alpha[i] = u / piv;
  }
  f.inv_pivot = f.pivot.cwiseInverse();
  f.lower_scaled = f.lower.cwiseProduct(f.inv_pivot);
  return f;
}

template <typename Scalar>
ShiftedFactor<Scalar> factor_circulant(const BandedOperator<Scalar>& op, double sigma) {
  if (op.bc != Boundary::Periodic || op.axis < 1) {
    throw InvalidArgument("circulant factor requires a periodic split operator");
  }
  ShiftedFactor<Scalar> f;
  f.kind = FactorKind::Circulant;
  f.sigma = sigma;
  f.size = op.size;
  f.stride = op.stride;
  f.line_points = op.line_points;
  f.components = op.components;
  const Index p = op.line_points;
  const Index w = op.stride;

  Eigen::FFT<double> fft;
  f.diag_fft.resize(static_cast<std::size_t>(op.components));
  for (Index c = 0; c < op.components; ++c) {
    // First column of the line matrix, read off row c (line position 0).
    std::vector<Complex> col(static_cast<std::size_t>(p), Complex(0.0));
    col[0] = Complex(1.0);
    double scale = 1.0;
    for (std::size_t j = 0; j < op.offsets.size(); ++j) {
      const Index o = op.offsets[j];
      if (o < 0) continue;
      const Complex v = Complex(sigma) * Complex(op.bands[j][c]);
      const Index jcol = (c + o) / w;
      col[static_cast<std::size_t>((p - jcol) % p)] += v;
      scale += std::abs(v);
    }
    std::vector<Complex> eig;
    fft.fwd(eig, col);
    for (const auto& lambda : eig) {
      if (!(std::abs(lambda) > pivot_floor(scale))) {
        throw SolverError("circulant factor: zero eigenvalue");
      }
    }
    f.diag_fft[static_cast<std::size_t>(c)] = std::move(eig);
  }
  return f;
}

template <typename Scalar>
ShiftedFactor<Scalar> factor_banded_lu(const BandedOperator<Scalar>& op, double sigma) {
  ShiftedFactor<Scalar> f;
  f.kind = FactorKind::BandedLU;
  f.sigma = sigma;
  f.size = op.size;
  const Index m = op.size;
  Index kl = 0, ku = 0;
  for (Index o : op.offsets) {
    if (o < 0) kl = std::max(kl, -o);
    if (o > 0) ku = std::max(ku, o);
  }
  kl = std::min(kl, m - 1);
  ku = std::min(ku, m - 1);
  f.kl = kl;
  f.ku = ku;
  auto& ab = f.lu;
  ab = DenseMatrix<Scalar>::Zero(kl + ku + 1, m);
  for (std::size_t j = 0; j < op.offsets.size(); ++j) {
    const Index o = op.offsets[j];
    for (Index r = 0; r < m; ++r) {
      const Index c = r + o;
      if (c >= 0 && c < m) ab(ku + r - c, c) += Scalar(sigma) * op.bands[j][r];
    }
  }
  for (Index c = 0; c < m; ++c) ab(ku, c) += Scalar(1);

  std::vector<double> row_scale(static_cast<std::size_t>(m), 0.0);
  for (Index c = 0; c < m; ++c) {
    for (Index i = std::max<Index>(0, c - ku); i <= std::min(m - 1, c + kl); ++i) {
      row_scale[static_cast<std::size_t>(i)] += std::abs(ab(ku + i - c, c));
    }
  }

  // Doolittle elimination without pivoting; fill stays inside the band.
  for (Index k = 0; k < m; ++k) {
    const Scalar piv = ab(ku, k);
    if (!(std::abs(piv) > pivot_floor(row_scale[static_cast<std::size_t>(k)]))) {
      throw SolverError("banded LU: vanishing pivot at row " + std::to_string(k));
    }
    const Index imax = std::min(m - 1, k + kl);
    for (Index i = k + 1; i <= imax; ++i) ab(ku + i - k, k) /= piv;
    const Index jmax = std::min(m - 1, k + ku);
    for (Index j = k + 1; j <= jmax; ++j) {
      const Scalar ukj = ab(ku + k - j, j);
      if (ukj == Scalar(0)) continue;
      Scalar* colj = &ab(0, j);
      const Scalar* colk = &ab(0, k);
      for (Index i = k + 1; i <= imax; ++i) colj[ku + i - j] -= colk[ku + i - k] * ukj;
    }
  }
  return f;
}

}  // namespace detail

/// Factorises I + sigma*A, picking the solver from the operator structure:
/// periodic split operators go to the circulant path, other split operators to the offset
/// Thomas recurrence, unsplit sums to band LU.
template <typename Scalar>
ShiftedFactor<Scalar> factor_shifted(const BandedOperator<Scalar>& op, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("factor_shifted: sigma must be positive");
  if (op.axis >= 1 && op.bc == Boundary::Periodic && op.line_points >= 3) {
    return detail::factor_circulant(op, sigma);
  }
  if (op.axis >= 1 || op.offsets.size() <= 1) return detail::factor_offset_thomas(op, sigma);
  return detail::factor_banded_lu(op, sigma);
}

/// Factorisation with an explicitly requested solver.
template <typename Scalar>
ShiftedFactor<Scalar> factor_shifted(const BandedOperator<Scalar>& op, double sigma, FactorKind kind) {
  if (!(sigma > 0.0)) throw InvalidArgument("factor_shifted: sigma must be positive");
  switch (kind) {
    case FactorKind::OffsetThomas:
      return detail::factor_offset_thomas(op, sigma);
    case FactorKind::Circulant:
      return detail::factor_circulant(op, sigma);
    case FactorKind::BandedLU:
      return detail::factor_banded_lu(op, sigma);
  }
  throw InvalidArgument("unknown factor kind");
}

/// Offset Thomas sweep: beta_i = (b_i - beta_{i-w} l_i) / pivot_i, then x_i = beta_i - alpha_i x_{i+w}.
/// With stride w the sweep is w interleaved recurrences, so for w = 1 it is latency bound.
template <typename Scalar>
void solve_offset_banded(const ShiftedFactor<Scalar>& f, const StateVector<Scalar>& b, StateVector<Scalar>& x) {
  if (f.kind != FactorKind::OffsetThomas) throw InvalidArgument("solve_offset_banded: wrong factor kind");
  if (b.size() != f.size) throw InvalidArgument("solve_offset_banded: size mismatch");
  const Index m = f.size;
  const Index w = std::min(f.w, m);
  x.resize(m);
  const Scalar* ls = f.lower_scaled.data();
  const Scalar* ip = f.inv_pivot.data();
  const Scalar* al = f.alpha.data();
  const Scalar* bb = b.data();
  Scalar* xx = x.data();
  if (w == 1) {
    // Carry the recurrence in a register instead of reloading the value just stored.
    Scalar carry = bb[0] * ip[0];
    xx[0] = carry;
    for (Index i = 1; i < m; ++i) xx[i] = carry = bb[i] * ip[i] - carry * ls[i];
    carry = xx[m - 1];
    for (Index i = m - 2; i >= 0; --i) xx[i] = carry = xx[i] - al[i] * carry;
    return;
  }
  for (Index i = 0; i < w; ++i) xx[i] = bb[i] * ip[i];
  for (Index i = w; i < m; ++i) xx[i] = bb[i] * ip[i] - xx[i - w] * ls[i];
  for (Index i = m - w - 1; i >= 0; --i) xx[i] -= al[i] * xx[i + w];
}

/// Circulant solve: every 1-D line along the factor's axis is transformed, divided by the
/// symbol of its component and transformed back.
template <typename Scalar>
void solve_cyclic(const ShiftedFactor<Scalar>& f, const StateVector<Scalar>& b, StateVector<Scalar>& x) {
  if (f.kind != FactorKind::Circulant) throw InvalidArgument("solve_cyclic: wrong factor kind");
  if (b.size() != f.size) throw InvalidArgument("solve_cyclic: size mismatch");
  const Index p = f.line_points;
  const Index w = f.stride;
  const Index block = w * p;
  x.resize(f.size);

  thread_local Eigen::FFT<double> fft;
  thread_local std::vector<Complex> line, spec;
  line.resize(static_cast<std::size_t>(p));

  for (Index q = 0; q < f.size / block; ++q) {
    for (Index t = 0; t < w; ++t) {
      const Index base = q * block + t;
      const auto& eig = f.diag_fft[static_cast<std::size_t>(t % f.components)];
      for (Index j = 0; j < p; ++j) line[static_cast<std::size_t>(j)] = Complex(b[base + j * w]);
      fft.fwd(spec, line);
      for (Index j = 0; j < p; ++j) spec[static_cast<std::size_t>(j)] /= eig[static_cast<std::size_t>(j)];
      fft.inv(line, spec);
      for (Index j = 0; j < p; ++j) {
        if constexpr (is_complex_v<Scalar>) {
          x[base + j * w] = line[static_cast<std::size_t>(j)];
        } else {
          x[base + j * w] = line[static_cast<std::size_t>(j)].real();
        }
      }
    }
  }
}

/// Forward and back substitution with the band LU factors.
template <typename Scalar>
void solve_banded_lu(const ShiftedFactor<Scalar>& f, const StateVector<Scalar>& b, StateVector<Scalar>& x) {
  if (f.kind != FactorKind::BandedLU) throw InvalidArgument("solve_banded_lu: wrong factor kind");
  if (b.size() != f.size) throw InvalidArgument("solve_banded_lu: size mismatch");
  const Index m = f.size;
  const Index kl = f.kl, ku = f.ku;
  x = b;
  for (Index k = 0; k < m; ++k) {
    const Scalar yk = x[k];
    if (yk == Scalar(0)) continue;
    const Scalar* colk = &f.lu(0, k);
    const Index imax = std::min(m - 1, k + kl);
    for (Index i = k + 1; i <= imax; ++i) x[i] -= colk[ku + i - k] * yk;
  }
  for (Index k = m - 1; k >= 0; --k) {
    const Scalar* colk = &f.lu(0, k);
    x[k] /= colk[ku];
    const Scalar xk = x[k];
    if (xk == Scalar(0)) continue;
    for (Index i = std::max<Index>(0, k - ku); i < k; ++i) x[i] -= colk[ku + i - k] * xk;
  }
}

/// Solves (I + sigma*A) x = b with whichever path `f` was built for.
template <typename Scalar>
void solve(const ShiftedFactor<Scalar>& f, const StateVector<Scalar>& b, StateVector<Scalar>& x) {
  switch (f.kind) {
    case FactorKind::OffsetThomas:
      return solve_offset_banded(f, b, x);
    case FactorKind::Circulant:
      return solve_cyclic(f, b, x);
    case FactorKind::BandedLU:
      return solve_banded_lu(f, b, x);
  }
}

template <typename Scalar>
StateVector<Scalar> solve(const ShiftedFactor<Scalar>& f, const StateVector<Scalar>& b) {
  StateVector<Scalar> x;
  solve(f, b, x);
  return x;
}

/// Dense partially pivoted solve, used as a test oracle (size <= 4096).
template <typename Scalar>
StateVector<Scalar> dense_solve_oracle(const DenseMatrix<Scalar>& a, const StateVector<Scalar>& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw InvalidArgument("dense_solve_oracle: size mismatch");
  if (a.rows() > kDenseGuard) throw InvalidArgument("dense_solve_oracle: matrix too large");
  Eigen::PartialPivLU<DenseMatrix<Scalar>> lu(a);
  const auto diag = lu.matrixLU().diagonal();
  const double scale = a.cwiseAbs().maxCoeff();
  for (Index i = 0; i < diag.size(); ++i) {
    if (!(std::abs(diag[i]) > std::numeric_limits<double>::epsilon() * scale * static_cast<double>(a.rows()))) {
      throw SolverError("dense_solve_oracle: singular matrix");
    }
  }
  return lu.solve(b);
}

}  // namespace etdrdp
