#include "etdrdp/integrate.hpp"

#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace etdrdp;
using namespace etdrdp::testing;

namespace {

template <typename Scalar>
std::vector<Scalar> react(const Problem<Scalar>& p, std::vector<Scalar> u, Coordinates x = {0.5, 0.5, 0.5}) {
  std::vector<Scalar> out(u.size());
  p.reaction(x, u, out);
  return out;
}

// max |(-A u + F(u)) - u_t| for the closed-form solution at time t, over nodes at least `margin` from the ends.
double exact_residual(const Problem<Complex>& prob, const GridSpec& g, double t, double margin = 0.0) {
  const double dt = 1e-5;
  const auto u = exact_solution(prob, g, t);
  const StateVector<Complex> ut = (exact_solution(prob, g, t + dt) - exact_solution(prob, g, t - dt)) / (2.0 * dt);
  StateVector<Complex> f;
  bind_reaction(prob, g)(u, f);
  const StateVector<Complex> rhs = f - apply_operator(full_operator<Complex>(g, prob.diffusion), u);
  double worst = 0.0;
  for (Index n = 0; n < g.nodes(); ++n) {
    const auto x = g.node_coordinates(n);
    bool inside = true;
    for (int a = 0; a < g.dim; ++a) inside = inside && x[a] >= g.lo[a] + margin && x[a] <= g.hi[a] - margin;
    if (inside) worst = std::max(worst, std::abs(rhs[n] - ut[n]));
  }
  return worst;
}

}  // namespace

TEST_CASE("catalog reaction terms") {
  const auto enzyme = std::get<Problem<double>>(make_problem("enzyme"));
  CHECK(react(enzyme, {1.0})[0] == doctest::Approx(-0.5));
  CHECK(enzyme.bc == Boundary::Dirichlet);
  CHECK(enzyme.final_time == 1.0);

  const auto bru = std::get<Problem<double>>(make_problem("brusselator2d"));
  const auto f = react(bru, {1.0, 1.0});
  CHECK(f[0] == doctest::Approx(-2.4));
  CHECK(f[1] == doctest::Approx(2.4));
  CHECK(bru.components == 2);

  const auto bru3 = std::get<Problem<double>>(make_problem("brusselator3d", {{"A", 3.0}, {"B", 1.0}}));
  // Steady state (B, A/B) is a fixed point of the reaction.
  const auto f3 = react(bru3, {1.0, 3.0});
  CHECK(std::abs(f3[0]) < 1e-15);
  CHECK(std::abs(f3[1]) < 1e-15);

  const auto gl = std::get<Problem<Complex>>(make_problem("ginzburg_landau2d"));
  const auto fg = react(gl, {Complex(1.0, 0.0)});
  CHECK(std::abs(fg[0] - Complex(0.0, -1.3)) < 1e-15);
  CHECK(gl.bc == Boundary::Periodic);
  CHECK(gl.hi == 200.0);
}

TEST_CASE("initial data and exact solutions") {
  const auto sol = std::get<Problem<Complex>>(make_problem("schrodinger1d_soliton"));
  const auto g = sol.grid_for_spacing(0.5);
  CHECK(g.points == 361);
  const auto u0 = initial_state(sol, g);
  CHECK(u0.cwiseAbs().maxCoeff() == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
  CHECK(max_abs(u0 - exact_solution(sol, g, 0.0)) == 0.0);

  const auto s2 = std::get<Problem<Complex>>(make_problem("schrodinger2d_cosine"));
  const auto g2 = s2.grid(11);
  const auto e0 = exact_solution(s2, g2, 0.0);
  CHECK(std::abs(e0[0] - Complex(1.0)) < 1e-15);
  const auto epi = exact_solution(s2, g2, std::numbers::pi);
  CHECK(max_abs(epi + e0) < 1e-14);

  const auto enzyme = std::get<Problem<double>>(make_problem("enzyme"));
  CHECK_THROWS_AS(exact_solution(enzyme, enzyme.grid(5), 0.0), InvalidArgument);
  const auto ue = initial_state(enzyme, enzyme.grid(5));
  CHECK(max_abs(ue - StateVector<double>::Ones(25)) == 0.0);
}

TEST_CASE("random Ginzburg-Landau data is reproducible from the seed") {
  const auto a = std::get<Problem<Complex>>(make_problem("ginzburg_landau2d", {{"random", 1.0}, {"seed", 7.0}}));
  const auto b = std::get<Problem<Complex>>(make_problem("ginzburg_landau2d", {{"random", 1.0}, {"seed", 7.0}}));
  const auto c = std::get<Problem<Complex>>(make_problem("ginzburg_landau2d", {{"random", 1.0}, {"seed", 8.0}}));
  const auto g = a.grid(20);
  const auto ua = initial_state(a, g);
  CHECK(max_abs(ua - initial_state(b, g)) == 0.0);
  CHECK(max_abs(ua - initial_state(c, g)) > 0.0);
  const double mean = ua.real().mean();
  const double var = (ua.real().array() - mean).square().mean();
  CHECK(std::abs(mean) < 0.2);
  CHECK(var == doctest::Approx(1.0).epsilon(0.2));
  CHECK(ua.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mass and energy") {
  const auto g = GridSpec::cube(1, 11, 1, Boundary::Neumann);
  const StateVector<Complex> one = StateVector<Complex>::Constant(11, Complex(0.6, 0.8));
  CHECK(mass(one, g) == doctest::Approx(1.0).epsilon(1e-14));
  const StateVector<Complex> c = StateVector<Complex>::Constant(11, Complex(1.5, 0.0));
  CHECK(energy(c, g) == doctest::Approx(-std::pow(1.5, 4) / 2.0).epsilon(1e-14));
  const StateVector<Complex> zero = StateVector<Complex>::Zero(11);
  CHECK(mass(zero, g) == 0.0);
  CHECK(energy(zero, g) == 0.0);

  const auto sol = std::get<Problem<Complex>>(make_problem("schrodinger1d_soliton"));
  const auto gs = sol.grid_for_spacing(0.5);
  const auto u0 = initial_state(sol, gs);
  CHECK(std::abs(mass(u0, gs) - 0.399999954) <= 1e-8);
  CHECK(std::abs(energy(u0, gs) - (-0.000336760546)) <= 1e-9);

  const StateVector<Complex> plane = StateVector<Complex>::Zero(121);
  CHECK_THROWS_AS(mass(plane, GridSpec::cube(2, 11, 1, Boundary::Neumann)), InvalidArgument);
}

TEST_CASE("probes pick the nearest node") {
  const auto g = GridSpec::cube(3, 11, 2, Boundary::Neumann);
  StateVector<double> u(g.size());
  for (Index n = 0; n < g.nodes(); ++n) {
    u[2 * n] = 4.0;
    u[2 * n + 1] = -1.0;
  }
  const auto v = probe(u, g, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  CHECK(v[0] == 4.0);
  CHECK(v[1] == -1.0);
  // Node (3, 3, 3) at x = 0.3 is the nearest to 1/3.
  CHECK(nearest_node(g, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}) == 3 + 11 * (3 + 11 * 3));
  CHECK(nearest_node(g, {1.0, 0.0, 0.0}) == 10);
  CHECK_THROWS_AS(nearest_node(g, {1.5, 0.5, 0.5}), InvalidArgument);
}

TEST_CASE("invalid names and parameters are rejected") {
  CHECK_THROWS_AS(make_problem("heat"), InvalidArgument);
  CHECK_THROWS_AS(make_problem("enzyme", {{"gamma", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(make_problem("enzyme", {{"D", -1.0}}), InvalidArgument);
  CHECK_THROWS_AS(make_problem("schrodinger1d_soliton", {{"a", 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(make_problem("brusselator2d", {{"A", std::nan("")}}), InvalidArgument);
  CHECK(problem_names().size() == 7);
  CHECK(problem_defaults("brusselator3d").at("B") == 2.0);
}

TEST_CASE("exact solutions satisfy the semi-discrete system to second order") {
  const auto s2 = std::get<Problem<Complex>>(make_problem("schrodinger2d_cosine"));
  std::vector<double> res;
  for (Index p : {11, 21, 41}) res.push_back(exact_residual(s2, s2.grid(p), 0.3));
  for (std::size_t i = 0; i + 1 < res.size(); ++i) {
    const double order = std::log2(res[i] / res[i + 1]);
    CAPTURE(order);
    CHECK(order >= 1.7);
  }

  // The sech tails do not satisfy the Neumann condition exactly on the truncated domain, so the
  // end nodes carry an O(1/h) defect; measure away from them.
  const auto sol = std::get<Problem<Complex>>(make_problem("schrodinger1d_soliton"));
  res.clear();
  for (double h : {1.0, 0.5, 0.25}) res.push_back(exact_residual(sol, sol.grid_for_spacing(h), 5.0, 5.0));
  for (std::size_t i = 0; i + 1 < res.size(); ++i) {
    const double order = std::log2(res[i] / res[i + 1]);
    CAPTURE(order);
    CHECK(order >= 1.7);
  }
}

TEST_CASE("Brusselator relaxes to its steady state when 1 - A + B^2 >= 0") {
  const auto bru = std::get<Problem<double>>(make_problem("brusselator2d", {{"A", 1.0}, {"B", 2.0}, {"D", 0.02}}));
  const auto g = bru.grid(11);
  SchemeConfig cfg;
  cfg.dt = 0.05;
  cfg.final_time = 30.0;
  const auto res = integrate(bru, g, cfg);
  const auto v = probe(res.state, g, {0.5, 0.5, 0.0});
  CHECK(std::abs(v[0] - 2.0) < 5e-2);
  CHECK(std::abs(v[1] - 0.5) < 5e-2);
}

TEST_CASE("whole-field reactions agree with the pointwise form") {
  for (const char* name : {"enzyme", "brusselator2d", "brusselator3d"}) {
    auto prob = std::get<Problem<double>>(make_problem(name));
    REQUIRE(static_cast<bool>(prob.field_reaction));
    const auto g = prob.grid(6);
    const auto u = random_vector<double>(g.size(), 11);
    StateVector<double> fast, slow;
    bind_reaction(prob, g)(u, fast);
    prob.field_reaction = {};
    bind_reaction(prob, g)(u, slow);
    CAPTURE(name);
    CHECK(max_abs(fast - slow) == 0.0);
  }
}
