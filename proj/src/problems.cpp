#include "etdrdp/problems.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace etdrdp {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

const std::map<std::string, ParamMap, std::less<>>& catalog_defaults() {
  static const std::map<std::string, ParamMap, std::less<>> defaults{
      {"enzyme", {{"D", 0.2}}},
      {"brusselator2d", {{"D", 2e-3}, {"A", 3.4}, {"B", 1.0}}},
      {"brusselator3d", {{"D", 0.02}, {"A", 1.0}, {"B", 2.0}}},
      {"ginzburg_landau2d", {{"alpha", 0.0}, {"beta", 1.3}, {"L", 200.0}, {"random", 0.0}, {"seed", 0.0}}},
      {"ginzburg_landau3d", {{"alpha", 0.0}, {"beta", 1.3}, {"L", 200.0}, {"random", 0.0}, {"seed", 0.0}}},
      {"schrodinger1d_soliton", {{"a", 0.01}, {"c", 0.1}, {"L0", -80.0}, {"L1", 100.0}}},
      {"schrodinger2d_cosine", {}},
  };
  return defaults;
}

ParamMap merged(std::string_view name, const ParamMap& overrides) {
  ParamMap params = problem_defaults(name);
  for (const auto& [key, value] : overrides) {
    auto it = params.find(key);
    if (it == params.end()) {
      throw InvalidArgument("problem '" + std::string(name) + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw InvalidArgument("parameter '" + key + "' must be finite");
    it->second = value;
  }
  return params;
}

Problem<double> enzyme(const ParamMap& params) {
  const double diff = params.at("D");
  if (!(diff >= 0.0)) throw InvalidArgument("enzyme: D must be non-negative");
  Problem<double> p;
  p.name = "enzyme";
  p.dim = 2;
  p.components = 1;
  p.bc = Boundary::Dirichlet;
  p.diffusion = DiffusionSpec::uniform(1, diff);
  p.final_time = 1.0;
  p.default_spacing = 0.0125;
  p.params = params;
  p.reaction = [](const Coordinates&, std::span<const double> u, std::span<double> out) {
    out[0] = -u[0] / (1.0 + u[0]);
  };
  p.field_reaction = [](const StateVector<double>& u, StateVector<double>& out) {
    out = -u.array() / (1.0 + u.array());
  };
  p.initial = [](const Coordinates&, std::span<double> out) { out[0] = 1.0; };
  return p;
}

Problem<double> brusselator(int dim, const ParamMap& params) {
  const double diff = params.at("D");
  const double a = params.at("A");
  const double b = params.at("B");
  if (!(diff >= 0.0)) throw InvalidArgument("brusselator: D must be non-negative");
  Problem<double> p;
  p.name = dim == 2 ? "brusselator2d" : "brusselator3d";
  p.dim = dim;
  p.components = 2;
  p.bc = Boundary::Neumann;
  p.diffusion = DiffusionSpec::uniform(2, diff);
  p.final_time = dim == 2 ? 2.0 : 5.0;
  p.default_spacing = dim == 2 ? 0.0125 : 0.1;
  p.params = params;
  p.reaction = [a, b](const Coordinates&, std::span<const double> u, std::span<double> out) {
    const double u1sq_u2 = u[0] * u[0] * u[1];
    out[0] = u1sq_u2 - (a + 1.0) * u[0] + b;
    out[1] = -u1sq_u2 + a * u[0];
  };
  p.field_reaction = [a, b](const StateVector<double>& u, StateVector<double>& out) {
    using Strided = Eigen::Map<const Eigen::ArrayXd, 0, Eigen::InnerStride<2>>;
    using StridedOut = Eigen::Map<Eigen::ArrayXd, 0, Eigen::InnerStride<2>>;
    const Index n = u.size() / 2;
    out.resize(u.size());
    const Strided u1(u.data(), n), u2(u.data() + 1, n);
    StridedOut f1(out.data(), n), f2(out.data() + 1, n);
    const Eigen::ArrayXd q = u1.square() * u2;
    f1 = q - (a + 1.0) * u1 + b;
    f2 = a * u1 - q;
  };
  if (dim == 2) {
    p.initial = [](const Coordinates& x, std::span<double> out) {
      out[0] = 0.5 + x[1];
      out[1] = 1.0 + 5.0 * x[0];
    };
  } else {
    p.initial = [](const Coordinates& x, std::span<double> out) {
      out[0] = 1.0 + std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]) * std::sin(2.0 * kPi * x[2]);
      out[1] = 3.0;
    };
  }
  return p;
}

Problem<Complex> ginzburg_landau(int dim, const ParamMap& params) {
  const double alpha = params.at("alpha");
  const double beta = params.at("beta");
  Problem<Complex> p;
  p.name = dim == 2 ? "ginzburg_landau2d" : "ginzburg_landau3d";
  p.dim = dim;
  p.components = 1;
  p.bc = Boundary::Periodic;
  p.lo = 0.0;
  p.hi = params.at("L");
  if (!(p.hi > 0.0)) throw InvalidArgument("ginzburg_landau: L must be positive");
  p.diffusion = DiffusionSpec::uniform(1, Complex(1.0, alpha));
  p.final_time = 100.0;
  p.default_spacing = dim == 2 ? 0.5 : 1.0;
  p.params = params;
  const Complex nonlinear(1.0, beta);
  p.reaction = [nonlinear](const Coordinates&, std::span<const Complex> u, std::span<Complex> out) {
    out[0] = u[0] - nonlinear * u[0] * std::norm(u[0]);
  };
  auto pulse = [](const Coordinates& x, int d, double cx, double cy, double cz) {
    double r2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy);
    if (d == 3) r2 += (x[2] - cz) * (x[2] - cz);
    return std::exp(-r2 / 1000.0);
  };
  if (dim == 2) {
    p.initial = [pulse](const Coordinates& x, std::span<Complex> out) {
      out[0] = pulse(x, 2, 50, 50, 0) - pulse(x, 2, 100, 100, 0) + pulse(x, 2, 100, 50, 0);
    };
  } else {
    p.initial = [pulse](const Coordinates& x, std::span<Complex> out) {
      out[0] = pulse(x, 3, 50, 50, 50) - pulse(x, 3, 100, 100, 100);
    };
  }
  if (params.at("random") != 0.0) {
    const auto seed = static_cast<std::uint64_t>(params.at("seed"));
    // Real standard normal field drawn in flat index order.
    p.initial_field = [seed](const GridSpec& grid) {
      std::mt19937_64 gen(seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      StateVector<Complex> u(grid.size());
      for (Index i = 0; i < u.size(); ++i) u[i] = Complex(normal(gen), 0.0);
      return u;
    };
  }
  return p;
}

Problem<Complex> soliton(const ParamMap& params) {
  const double a = params.at("a");
  const double c = params.at("c");
  if (!(a > 0.0)) throw InvalidArgument("soliton: a must be positive");
  Problem<Complex> p;
  p.name = "schrodinger1d_soliton";
  p.dim = 1;
  p.components = 1;
  p.bc = Boundary::Neumann;
  p.lo = params.at("L0");
  p.hi = params.at("L1");
  if (!(p.hi > p.lo)) throw InvalidArgument("soliton: need L0 < L1");
  p.diffusion = DiffusionSpec::uniform(1, kI);
  p.final_time = 108.0;
  p.default_spacing = 0.5;
  p.params = params;
  // i psi_t + psi_xx + |psi|^2 psi = 0  =>  psi_t = i psi_xx + i |psi|^2 psi
  p.reaction = [](const Coordinates&, std::span<const Complex> u, std::span<Complex> out) {
    out[0] = kI * std::norm(u[0]) * u[0];
  };
  p.exact = [a, c](const Coordinates& x, double t, std::span<Complex> out) {
    const double phase = 0.5 * c * x[0] - (0.25 * c * c - a) * t;
    out[0] = std::sqrt(2.0 * a) * std::exp(kI * phase) / std::cosh(std::sqrt(a) * (x[0] - c * t));
  };
  auto exact = p.exact;
  p.initial = [exact](const Coordinates& x, std::span<Complex> out) { exact(x, 0.0, out); };
  return p;
}

Problem<Complex> schrodinger2d() {
  Problem<Complex> p;
  p.name = "schrodinger2d_cosine";
  p.dim = 2;
  p.components = 1;
  p.bc = Boundary::Neumann;
  p.diffusion = DiffusionSpec::uniform(1, kI);
  p.final_time = 1.0;
  p.default_spacing = 1.0 / 78.0;
  // i psi_t + lap psi = q psi with q = B(x,y) + C |psi|^2  =>  psi_t = i lap psi - i q psi
  const double cc = 1.0 - 2.0 * kPi * kPi;
  p.reaction = [cc](const Coordinates& x, std::span<const Complex> u, std::span<Complex> out) {
    const double cxy = std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
    const double q_b = cc * (1.0 - cxy * cxy);
    out[0] = -kI * (q_b + cc * std::norm(u[0])) * u[0];
  };
  p.exact = [](const Coordinates& x, double t, std::span<Complex> out) {
    out[0] = std::exp(-kI * t) * std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
  };
  auto exact = p.exact;
  p.initial = [exact](const Coordinates& x, std::span<Complex> out) { exact(x, 0.0, out); };
  return p;
}

}  // namespace

ParamMap problem_defaults(std::string_view name) {
  const auto& all = catalog_defaults();
  auto it = all.find(name);
  if (it == all.end()) throw InvalidArgument("unknown problem '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const auto& [key, _] : catalog_defaults()) names.push_back(key);
  return names;
}

AnyProblem make_problem(std::string_view name, const ParamMap& overrides) {
  const ParamMap params = merged(name, overrides);
  if (name == "enzyme") return enzyme(params);
  if (name == "brusselator2d") return brusselator(2, params);
  if (name == "brusselator3d") return brusselator(3, params);
  if (name == "ginzburg_landau2d") return ginzburg_landau(2, params);
  if (name == "ginzburg_landau3d") return ginzburg_landau(3, params);
  if (name == "schrodinger1d_soliton") return soliton(params);
  if (name == "schrodinger2d_cosine") return schrodinger2d();
  throw InvalidArgument("unknown problem '" + std::string(name) + "'");
}

Index nearest_node(const GridSpec& grid, const Coordinates& point) {
  const double h = grid.spacing();
  Index node = 0;
  Index scale = 1;
  for (int a = 1; a <= grid.dim; ++a) {
    const auto ax = static_cast<std::size_t>(a - 1);
    const double x = point[ax];
    if (x < grid.lo[ax] - 1e-12 || x > grid.hi[ax] + 1e-12) {
      throw InvalidArgument("probe point outside the domain");
    }
    const double first = grid.coordinate(a, 0);
    auto i = static_cast<Index>(std::llround((x - first) / h));
    if (grid.bc == Boundary::Periodic) {
      i = ((i % grid.points) + grid.points) % grid.points;
    } else {
      i = std::clamp<Index>(i, 0, grid.points - 1);
    }
    node += i * scale;
    scale *= grid.points;
  }
  return node;
}

}  // namespace etdrdp
