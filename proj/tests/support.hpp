#pragma once

#include "etdrdp/operators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

namespace etdrdp::testing {

/// Deterministic pseudo-random vector with entries in [-1, 1] (both parts for complex scalars).
template <typename Scalar>
StateVector<Scalar> random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  StateVector<Scalar> v(n);
  for (Index i = 0; i < n; ++i) {
    if constexpr (is_complex_v<Scalar>) {
      const double re = dist(gen);
      v[i] = Scalar(re, dist(gen));
    } else {
      v[i] = dist(gen);
    }
  }
  return v;
}

template <typename Scalar>
DenseMatrix<Scalar> random_matrix(Index n, std::uint64_t seed) {
  const StateVector<Scalar> flat = random_vector<Scalar>(n * n, seed);
  return Eigen::Map<const DenseMatrix<Scalar>>(flat.data(), n, n);
}

template <typename Scalar>
DenseMatrix<Scalar> identity(Index n) {
  return DenseMatrix<Scalar>::Identity(n, n);
}

/// (I + sigma A)^{-1} densely.
template <typename Scalar>
DenseMatrix<Scalar> shifted_inverse(const DenseMatrix<Scalar>& a, double sigma) {
  return (identity<Scalar>(a.rows()) + Scalar(sigma) * a).inverse();
}

/// (I - 5k/12 A)(I + k/3 A)^{-1}(I + k/4 A)^{-1}, the product form of the RDP approximation.
template <typename Scalar>
DenseMatrix<Scalar> rdp_dense(const DenseMatrix<Scalar>& a, double k) {
  const Index n = a.rows();
  return (identity<Scalar>(n) - Scalar(5.0 * k / 12.0) * a) * shifted_inverse(a, k / 3.0) * shifted_inverse(a, k / 4.0);
}

/// e^{-kA} by Eigen's scaling-and-squaring.
template <typename Scalar>
DenseMatrix<Scalar> expm_dense(const DenseMatrix<Scalar>& a, double k) {
  return DenseMatrix<Scalar>((Scalar(-k) * a).exp());
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

/// max|a - b| / max(max|b|, tiny).
template <typename A, typename B>
double rel_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return max_abs(a - b) / std::max(max_abs(b), 1e-300);
}

}  // namespace etdrdp::testing
