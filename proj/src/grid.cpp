#include "etdrdp/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace etdrdp {

char boundary_code(Boundary bc) {
  switch (bc) {
    case Boundary::Dirichlet:
      return 'D';
    case Boundary::Neumann:
      return 'N';
    case Boundary::Periodic:
      return 'P';
  }
  throw InvalidArgument("unknown boundary kind");
}

std::string_view boundary_name(Boundary bc) {
  switch (bc) {
    case Boundary::Dirichlet:
      return "dirichlet";
    case Boundary::Neumann:
      return "neumann";
    case Boundary::Periodic:
      return "periodic";
  }
  throw InvalidArgument("unknown boundary kind");
}

Boundary parse_boundary(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "d" || lower == "dirichlet") return Boundary::Dirichlet;
  if (lower == "n" || lower == "neumann") return Boundary::Neumann;
  if (lower == "p" || lower == "periodic") return Boundary::Periodic;
  throw InvalidArgument("unknown boundary condition '" + std::string(text) + "'");
}

Index points_for_spacing(Boundary bc, double length, double h) {
  if (!(h > 0.0) || !(length > 0.0)) throw InvalidArgument("spacing and length must be positive");
  const double cells = length / h;
  const auto n = static_cast<Index>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(n)) > 1e-6 * std::max(1.0, cells)) {
    throw InvalidArgument("spacing does not divide the domain length");
  }
  switch (bc) {
    case Boundary::Dirichlet:
      return n - 1;
    case Boundary::Neumann:
      return n + 1;
    case Boundary::Periodic:
      return n;
  }
  throw InvalidArgument("unknown boundary kind");
}

GridSpec GridSpec::cube(int dim, Index points, Index components, Boundary bc, double lo,
                        double hi) {
  GridSpec g;
  g.dim = dim;
  g.points = points;
  g.components = components;
  g.bc = bc;
  g.lo.fill(lo);
  g.hi.fill(hi);
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (points < 3) throw InvalidArgument("grid needs at least 3 points per axis");
  if (components < 1) throw InvalidArgument("grid needs at least one component");
  const double len = hi[0] - lo[0];
  if (!(len > 0.0)) throw InvalidArgument("domain bounds must satisfy lo < hi");
  for (int a = 1; a < dim; ++a) {
    const double other = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
    if (std::abs(other - len) > 1e-12 * len) {
      throw InvalidArgument("all axes must share the same extent (single mesh width)");
    }
  }
}

double GridSpec::spacing() const {
  const double len = hi[0] - lo[0];
  switch (bc) {
    case Boundary::Dirichlet:
      return len / static_cast<double>(points + 1);
    case Boundary::Neumann:
      return len / static_cast<double>(points - 1);
    case Boundary::Periodic:
      return len / static_cast<double>(points);
  }
  throw InvalidArgument("unknown boundary kind");
}

Index GridSpec::nodes() const {
  Index n = 1;
  for (int a = 0; a < dim; ++a) n *= points;
  return n;
}

Index GridSpec::stride(int axis) const {
  if (axis < 1 || axis > dim) throw InvalidArgument("axis out of range");
  Index w = components;
  for (int a = 1; a < axis; ++a) w *= points;
  return w;
}

double GridSpec::coordinate(int axis, Index i) const {
  const double h = spacing();
  const double origin = lo[static_cast<std::size_t>(axis - 1)];
  return bc == Boundary::Dirichlet ? origin + static_cast<double>(i + 1) * h
                                   : origin + static_cast<double>(i) * h;
}

std::array<double, 3> GridSpec::node_coordinates(Index node) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 1; a <= dim; ++a) {
    x[static_cast<std::size_t>(a - 1)] = coordinate(a, node % points);
    node /= points;
  }
  return x;
}

DiffusionSpec DiffusionSpec::uniform(Index components, Complex value) {
  return DiffusionSpec{std::vector<Complex>(static_cast<std::size_t>(components), value)};
}

void DiffusionSpec::validate(Index components) const {
  if (static_cast<Index>(coeffs.size()) != components) {
    throw InvalidArgument("diffusion spec needs one coefficient per component");
  }
  for (const auto& c : coeffs) {
    if (c.real() < 0.0) throw InvalidArgument("diffusion coefficients need Re(D) >= 0");
  }
}

}  // namespace etdrdp
