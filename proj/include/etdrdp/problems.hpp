#pragma once

#include "etdrdp/stepper.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace etdrdp {

using Coordinates = std::array<double, 3>;
using ParamMap = std::map<std::string, double>;

/// A catalog benchmark: diffusion, pointwise reaction, initial data and, when known, the exact solution.
template <typename Scalar>
struct Problem {
  using PointReaction = std::function<void(const Coordinates& x, std::span<const Scalar> u, std::span<Scalar> out)>;
  using PointInitial = std::function<void(const Coordinates& x, std::span<Scalar> out)>;
  using PointExact = std::function<void(const Coordinates& x, double t, std::span<Scalar> out)>;

  std::string name;
  int dim = 2;
  Index components = 1;
  Boundary bc = Boundary::Dirichlet;
  double lo = 0.0;
  double hi = 1.0;
  DiffusionSpec diffusion;
  double final_time = 1.0;
  double default_spacing = 0.1;
  ParamMap params;

  PointReaction reaction;
  /// Whole-state form of `reaction` for terms that ignore x; bind_reaction prefers it.
  Reaction<Scalar> field_reaction;
  PointInitial initial;
  PointExact exact;  // empty when no closed form is known
  /// Whole-field initial data (random fields); takes precedence over `initial`.
  std::function<StateVector<Scalar>(const GridSpec&)> initial_field;

  bool has_exact() const { return static_cast<bool>(exact); }

  GridSpec grid(Index points, std::optional<Boundary> bc_override = std::nullopt) const {
    GridSpec g;
    g.dim = dim;
    g.points = points;
    g.components = components;
    g.bc = bc_override.value_or(bc);
    g.lo.fill(lo);
    g.hi.fill(hi);
    g.validate();
    return g;
  }

  GridSpec grid_for_spacing(double h, std::optional<Boundary> bc_override = std::nullopt) const {
    return grid(points_for_spacing(bc_override.value_or(bc), hi - lo, h), bc_override);
  }
};

using AnyProblem = std::variant<Problem<double>, Problem<Complex>>;

/// Catalog keys: enzyme, brusselator2d, brusselator3d, ginzburg_landau2d, ginzburg_landau3d,
/// schrodinger1d_soliton, schrodinger2d_cosine. Unknown parameter names are rejected.
AnyProblem make_problem(std::string_view name, const ParamMap& overrides = {});
std::vector<std::string> problem_names();
/// Parameter names (with defaults) accepted by `name`.
ParamMap problem_defaults(std::string_view name);

/// Whole-state reaction evaluator for `grid`; node coordinates are computed once.
template <typename Scalar>
Reaction<Scalar> bind_reaction(const Problem<Scalar>& prob, const GridSpec& grid) {
  if (prob.field_reaction) return prob.field_reaction;
  const Index s = grid.components;
  std::vector<Coordinates> coords(static_cast<std::size_t>(grid.nodes()));
  for (Index n = 0; n < grid.nodes(); ++n) coords[static_cast<std::size_t>(n)] = grid.node_coordinates(n);
  return [fn = prob.reaction, coords = std::move(coords), s](const StateVector<Scalar>& u, StateVector<Scalar>& out) {
    out.resize(u.size());
    const auto nodes = static_cast<Index>(coords.size());
    for (Index n = 0; n < nodes; ++n) {
      fn(coords[static_cast<std::size_t>(n)], std::span<const Scalar>(u.data() + n * s, static_cast<std::size_t>(s)),
         std::span<Scalar>(out.data() + n * s, static_cast<std::size_t>(s)));
    }
  };
}

template <typename Scalar>
StateVector<Scalar> initial_state(const Problem<Scalar>& prob, const GridSpec& grid) {
  if (prob.initial_field) return prob.initial_field(grid);
  StateVector<Scalar> u(grid.size());
  const Index s = grid.components;
  for (Index n = 0; n < grid.nodes(); ++n) {
    prob.initial(grid.node_coordinates(n), std::span<Scalar>(u.data() + n * s, static_cast<std::size_t>(s)));
  }
  return u;
}

/// Samples the closed-form solution at time t on the grid.
template <typename Scalar>
StateVector<Scalar> exact_solution(const Problem<Scalar>& prob, const GridSpec& grid, double t) {
  if (!prob.has_exact()) throw InvalidArgument("problem '" + prob.name + "' has no exact solution");
  StateVector<Scalar> u(grid.size());
  const Index s = grid.components;
  for (Index n = 0; n < grid.nodes(); ++n) {
    prob.exact(grid.node_coordinates(n), t, std::span<Scalar>(u.data() + n * s, static_cast<std::size_t>(s)));
  }
  return u;
}

namespace detail {

// Node values of a 1-D field extended to cover [lo, hi]: Dirichlet pads the zero boundary values,
// periodic repeats the first node at hi, Neumann grids already contain both endpoints.
template <typename Scalar>
std::vector<Complex> extended_line(const StateVector<Scalar>& state, const GridSpec& grid) {
  if (grid.dim != 1) throw InvalidArgument("mass/energy are defined for one-dimensional states");
  std::vector<Complex> v;
  const Index p = grid.points;
  auto value = [&](Index i) -> Complex {
    if (grid.components == 1) return Complex(state[i]);
    if (grid.components == 2 && !is_complex_v<Scalar>) {
      return Complex(std::real(state[2 * i]), std::real(state[2 * i + 1]));
    }
    throw InvalidArgument("mass/energy need one complex or two real components");
  };
  if (grid.bc == Boundary::Dirichlet) v.emplace_back(0.0);
  for (Index i = 0; i < p; ++i) v.push_back(value(i));
  if (grid.bc == Boundary::Dirichlet) v.emplace_back(0.0);
  if (grid.bc == Boundary::Periodic) v.push_back(v.front());
  return v;
}

}  // namespace detail

/// Trapezoidal mass (h/2)[|U_0|^2 + 2 sum |U_i|^2 + |U_{p+1}|^2] over the boundary-extended line.
template <typename Scalar>
double mass(const StateVector<Scalar>& state, const GridSpec& grid) {
  const auto v = detail::extended_line(state, grid);
  const double h = grid.spacing();
  double sum = 0.5 * (std::norm(v.front()) + std::norm(v.back()));
  for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += std::norm(v[i]);
  return h * sum;
}

/// Trapezoidal energy with centred differences at the interior nodes:
/// (h/2)[-(|U_0|^4 + |U_{p+1}|^4)/2 + 2 sum (|(U_{i+1} - U_{i-1})/2h|^2 - |U_i|^4/2)].
template <typename Scalar>
double energy(const StateVector<Scalar>& state, const GridSpec& grid) {
  const auto v = detail::extended_line(state, grid);
  const double h = grid.spacing();
  const auto quartic = [](Complex z) { return std::norm(z) * std::norm(z); };
  double sum = -0.25 * (quartic(v.front()) + quartic(v.back()));
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    sum += std::norm((v[i + 1] - v[i - 1]) / (2.0 * h)) - 0.5 * quartic(v[i]);
  }
  return h * sum;
}

/// Flat node index of the grid node nearest to `point` (no interpolation).
Index nearest_node(const GridSpec& grid, const Coordinates& point);

/// Component values at the node nearest to `point`.
template <typename Scalar>
std::vector<Scalar> probe(const StateVector<Scalar>& state, const GridSpec& grid, const Coordinates& point) {
  const Index node = nearest_node(grid, point);
  const Index s = grid.components;
  std::vector<Scalar> out(static_cast<std::size_t>(s));
  for (Index c = 0; c < s; ++c) out[static_cast<std::size_t>(c)] = state[node * s + c];
  return out;
}

struct DiagnosticsRecord {
  double t = 0.0;
  std::optional<double> mass;
  std::optional<double> energy;
  double max_modulus = 0.0;
  std::vector<std::vector<Complex>> probes;  // one entry per probe point, s values each
};

}  // namespace etdrdp
