#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace etdrdp {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
inline constexpr bool is_complex_v = false;
template <typename T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

/// Thrown for malformed inputs (bad sizes, unknown keys, out-of-range axes).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a fast solver meets a vanishing pivot or circulant eigenvalue.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Boundary { Dirichlet, Neumann, Periodic };

/// Single-letter code used in field headers: D, N or P.
char boundary_code(Boundary bc);
/// Accepts "D"/"N"/"P" or the full names, case-insensitive.
Boundary parse_boundary(std::string_view text);
std::string_view boundary_name(Boundary bc);

/// Number of grid points needed to cover an interval of `length` with spacing `h`.
Index points_for_spacing(Boundary bc, double length, double h);

/// Uniform tensor grid with `points` nodes per axis and `components` unknowns per node.
///
/// Node placement follows the boundary kind: Dirichlet grids hold the interior nodes
/// lo+h..hi-h, Neumann grids include both endpoints, periodic grids include lo but not hi.
/// The unknown for component c at node (i1, i2, i3) sits at c + s*(i1 + p*(i2 + p*i3)).
struct GridSpec {
  int dim = 1;
  Index points = 3;
  Index components = 1;
  Boundary bc = Boundary::Dirichlet;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};

  /// Grid on the cube [lo, hi]^dim.
  static GridSpec cube(int dim, Index points, Index components, Boundary bc, double lo = 0.0,
                       double hi = 1.0);

  void validate() const;

  double spacing() const;
  Index nodes() const;
  Index size() const { return components * nodes(); }
  /// Distance between neighbours along `axis` (1-based) in the flattened vector.
  Index stride(int axis) const;
  double coordinate(int axis, Index i) const;
  /// Node coordinates of flat node index `node` (0 <= node < nodes()).
  std::array<double, 3> node_coordinates(Index node) const;
};

/// Diffusion coefficients D_1..D_s; complex entries carry the Schrödinger/GL dispersion.
struct DiffusionSpec {
  std::vector<Complex> coeffs;

  static DiffusionSpec uniform(Index components, Complex value);
  void validate(Index components) const;
};

/// Converts a complex coefficient to `Scalar`, rejecting non-zero imaginary parts for reals.
template <typename Scalar>
Scalar coefficient_cast(Complex value) {
  if constexpr (is_complex_v<Scalar>) {
    return Scalar(value.real(), value.imag());
  } else {
    if (value.imag() != 0.0) {
      throw InvalidArgument("complex diffusion coefficient requires a complex scalar type");
    }
    return Scalar(value.real());
  }
}

}  // namespace etdrdp
