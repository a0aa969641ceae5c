#include "etdrdp/bandsolve.hpp"

#include "../support.hpp"

#include <doctest.h>

#include <chrono>
#include <cstring>

using namespace etdrdp;
using etdrdp::testing::max_abs;
using etdrdp::testing::random_vector;
using etdrdp::testing::rel_diff;

namespace {

BandedOperator<double> tridiagonal(Index m, double lower, double main, double upper) {
  BandedOperator<double> op;
  op.size = m;
  op.axis = 1;
  op.stride = 1;
  op.line_points = m;
  op.offsets = {-1, 0, 1};
  op.bands = {StateVector<double>::Constant(m, lower), StateVector<double>::Constant(m, main),
              StateVector<double>::Constant(m, upper)};
  op.bands[0][0] = 0.0;
  op.bands[2][m - 1] = 0.0;
  return op;
}

template <typename Scalar>
DenseMatrix<Scalar> shifted_dense(const BandedOperator<Scalar>& op, double sigma) {
  return DenseMatrix<Scalar>::Identity(op.size, op.size) + Scalar(sigma) * dense_materialize(op);
}

}  // namespace

TEST_CASE("identity and hand-computed systems") {
  BandedOperator<double> zero = tridiagonal(5, 0.0, 0.0, 0.0);
  const auto f = factor_shifted(zero, 1.0);
  const auto b = random_vector<double>(5, 1);
  CHECK(max_abs(solve(f, b) - b) == 0.0);

  // I + A = tridiag(-1, 4, -1); row sums are (3, 2, 3).
  const auto t = factor_shifted(tridiagonal(3, -1.0, 3.0, -1.0), 1.0);
  StateVector<double> rhs(3);
  rhs << 3.0, 2.0, 3.0;
  CHECK(max_abs(solve(t, rhs) - StateVector<double>::Ones(3)) < 1e-15);

  CHECK(max_abs(dense_solve_oracle<double>(DenseMatrix<double>::Identity(4, 4), b.head(4)) - b.head(4)) == 0.0);
  CHECK(max_abs(dense_solve_oracle<double>(2.0 * DenseMatrix<double>::Identity(5, 5), b) - 0.5 * b) < 1e-16);
  CHECK_THROWS_AS(dense_solve_oracle<double>(DenseMatrix<double>::Zero(3, 3), b.head(3)), SolverError);
}

TEST_CASE("offset Thomas pivots agree with an unpivoted dense elimination") {
  const auto op = laplacian_band(3, Boundary::Dirichlet, 0.5);
  const double sigma = 0.1;
  const auto f = factor_shifted(op, sigma);
  REQUIRE(f.kind == FactorKind::OffsetThomas);
  DenseMatrix<double> m = shifted_dense(op, sigma);
  for (Index k = 0; k < 3; ++k) {
    for (Index i = k + 1; i < 3; ++i) {
      const double l = m(i, k) / m(k, k);
      m.row(i) -= l * m.row(k);
    }
  }
  for (Index i = 0; i < 3; ++i) {
    CHECK(f.pivot[i] >= 1.0);
    CHECK(f.pivot[i] == doctest::Approx(m(i, i)).epsilon(1e-14));
  }
}

TEST_CASE("fast solves match the dense oracle over the randomized suite") {
  const double k = 0.01;
  std::uint64_t seed = 100;
  for (Boundary bc : {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic}) {
    for (int d = 1; d <= 3; ++d) {
      for (Index p : {3, 4, 5, 6}) {
        if (d == 3 && p > 5) continue;
        for (Index s : {1, 2}) {
          const auto g = GridSpec::cube(d, p, s, bc);
          DiffusionSpec diff;
          diff.coeffs = {Complex(1.0, 0.4), Complex(0.25, -1.0)};
          diff.coeffs.resize(static_cast<std::size_t>(s));
          for (int ax = 1; ax <= d; ++ax) {
            const auto op = split_operator<Complex>(g, diff, ax);
            for (double sigma : {k, k / 3.0, k / 4.0}) {
              const auto f = factor_shifted(op, sigma);
              CHECK(f.kind == (bc == Boundary::Periodic ? FactorKind::Circulant : FactorKind::OffsetThomas));
              const auto b = random_vector<Complex>(g.size(), ++seed);
              const auto x = solve(f, b);
              const auto x_ref = dense_solve_oracle(shifted_dense(op, sigma), b);
              CHECK(rel_diff(x, x_ref) <= 1e-10);
            }
          }
          const auto full = full_operator<Complex>(g, diff);
          const auto fl = factor_shifted(full, k);
          const auto b = random_vector<Complex>(g.size(), ++seed);
          CHECK(rel_diff(solve(fl, b), dense_solve_oracle(shifted_dense(full, k), b)) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("residual bound of the offset Thomas solve") {
  const auto g = GridSpec::cube(2, 30, 2, Boundary::Neumann);
  const auto op = split_operator<double>(g, DiffusionSpec::uniform(2, 0.7), 2);
  const double sigma = 0.05;
  const auto f = factor_shifted(op, sigma);
  const auto b = random_vector<double>(g.size(), 5);
  const auto x = solve(f, b);
  const StateVector<double> r = x + sigma * apply_operator(op, x) - b;
  const double norm = 1.0 + sigma * op.norm_inf();
  CHECK(max_abs(r) <= 1e-12 * (max_abs(b) + max_abs(x) * norm));
}

TEST_CASE("circulant path details") {
  const auto op = laplacian_band(4, Boundary::Periodic, 0.25);
  const auto f = factor_shifted(op, 0.3);
  REQUIRE(f.kind == FactorKind::Circulant);
  CHECK(std::abs(f.diag_fft[0][0] - Complex(1.0)) < 1e-14);

  const StateVector<double> c = StateVector<double>::Constant(4, 2.5);
  CHECK(max_abs(solve(f, c) - c) < 1e-14);

  // 4x4 cyclic line (-sigma/h^2)(1, -2, 1)
  const auto b = random_vector<double>(4, 9);
  CHECK(rel_diff(solve(f, b), dense_solve_oracle(shifted_dense(op, 0.3), b)) < 1e-10);

  // Components decouple under diagonal D.
  const auto g2 = GridSpec::cube(1, 8, 2, Boundary::Periodic);
  DiffusionSpec diff;
  diff.coeffs = {1.0, 0.3};
  const auto op2 = split_operator<double>(g2, diff, 1);
  const auto f2 = factor_shifted(op2, 0.01);
  const auto b2 = random_vector<double>(16, 10);
  const auto x2 = solve(f2, b2);
  for (Index comp = 0; comp < 2; ++comp) {
    const auto g1 = GridSpec::cube(1, 8, 1, Boundary::Periodic);
    const auto op1 = split_operator<double>(g1, DiffusionSpec::uniform(1, diff.coeffs[static_cast<std::size_t>(comp)]), 1);
    StateVector<double> bc(8), xc(8);
    for (Index i = 0; i < 8; ++i) {
      bc[i] = b2[2 * i + comp];
      xc[i] = x2[2 * i + comp];
    }
    CHECK(rel_diff(xc, solve(factor_shifted(op1, 0.01), bc)) < 1e-13);
  }

  const auto dir = laplacian_band(4, Boundary::Dirichlet, 0.25);
  CHECK_THROWS_AS(factor_shifted(dir, 0.1, FactorKind::Circulant), InvalidArgument);
  StateVector<double> out;
  CHECK_THROWS_AS(solve_cyclic(factor_shifted(dir, 0.1), StateVector<double>(StateVector<double>::Zero(4)), out),
                  InvalidArgument);
}

TEST_CASE("zero pivots abort instead of degrading") {
  // I + sigma*A with A = -I/sigma is the zero matrix.
  BandedOperator<double> op = tridiagonal(4, 0.0, -10.0, 0.0);
  CHECK_THROWS_AS(factor_shifted(op, 0.1), SolverError);
  CHECK_THROWS_AS(factor_shifted(op, 0.1, FactorKind::BandedLU), SolverError);
  CHECK_THROWS_AS(factor_shifted(op, 0.0), InvalidArgument);
  const auto f = factor_shifted(laplacian_band(4, Boundary::Dirichlet, 0.25), 0.1);
  StateVector<double> wrong(5);
  CHECK_THROWS_AS(solve(f, wrong), InvalidArgument);
}

TEST_CASE("linearity and bitwise factor reuse") {
  const auto g = GridSpec::cube(3, 5, 2, Boundary::Dirichlet);
  DiffusionSpec diff;
  diff.coeffs = {Complex(1.0, 1.0), Complex(0.5, 0.0)};
  for (int ax = 1; ax <= 3; ++ax) {
    const auto f = factor_shifted(split_operator<Complex>(g, diff, ax), 0.02);
    const auto b1 = random_vector<Complex>(g.size(), 21);
    const auto b2 = random_vector<Complex>(g.size(), 22);
    const Complex alpha(0.3, -1.2), beta(-2.0, 0.5);
    const StateVector<Complex> lhs = solve(f, StateVector<Complex>(alpha * b1 + beta * b2));
    const StateVector<Complex> rhs = alpha * solve(f, b1) + beta * solve(f, b2);
    CHECK(max_abs(lhs - rhs) <= 1e-12 * max_abs(rhs));
    const auto x1 = solve(f, b1);
    const auto x2 = solve(f, b1);
    CHECK(std::memcmp(x1.data(), x2.data(), sizeof(Complex) * static_cast<std::size_t>(x1.size())) == 0);
  }
}

TEST_CASE("offset Thomas cost is linear in the system size") {
  std::vector<double> logm, logt;
  for (Index m : {Index(1000), Index(10000), Index(100000), Index(1000000)}) {
    const auto op = tridiagonal(m, -1.0, 2.0, -1.0);
    const auto f = factor_shifted(op, 0.5);
    const StateVector<double> b = StateVector<double>::Ones(m);
    StateVector<double> x;
    const int reps = static_cast<int>(std::max<Index>(3, 2000000 / m));
    double best = 1e300;
    for (int trial = 0; trial < 5; ++trial) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int r = 0; r < reps; ++r) solve(f, b, x);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
      best = std::min(best, dt);
    }
    logm.push_back(std::log(static_cast<double>(m)));
    logt.push_back(std::log(best));
  }
  // Least-squares slope of log t against log m.
  const double n = static_cast<double>(logm.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < logm.size(); ++i) {
    sx += logm[i];
    sy += logt[i];
    sxx += logm[i] * logm[i];
    sxy += logm[i] * logt[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CAPTURE(slope);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.15));
}
