#include <cmath>
#include <random>

#include "doctest.h"
#include "mz/ball_selection.hpp"
#include "mz/diagnostics.hpp"
#include "mz/errors.hpp"
#include "mz/field_ops.hpp"
#include "mz/generators.hpp"
#include "mz/profile.hpp"
#include "mz/regularize.hpp"
#include "mz/schedule.hpp"
#include "mz/sweep.hpp"
#include "mz/truncation.hpp"

using mz::ConvexBody;
using mz::Grid;
using mz::GridField;

namespace {

// Background slope 0.5 along x plus a bump of height amp * w with radius w.
GridField spike_field(const Grid& g, std::vector<std::vector<double>> centres, double amp, double w) {
  GridField u(g, 1);
  int m[5];
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    g.unravel(i, m);
    const double x = g.coord(0, m[0]), y = g.coord(1, m[1]);
    double v = 0.5 * x;
    for (const auto& c : centres) {
      const double s = ((x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1])) / (w * w);
      if (s < 1.0) v += amp * w * std::pow(1.0 - s, 4);
    }
    u(i, 0) = v;
  }
  return u;
}

ConvexBody unit_ball2() { return ConvexBody::ball(Eigen::Vector2d(0, 0), 1.0); }

}  // namespace

TEST_SUITE("truncation") {

TEST_CASE("profile values and certificate") {
  const auto p = mz::make_profile(0.05, 1.0);
  CHECK(p.unit(0.0) == 0.05);
  CHECK(p.unit(0.9) == 0.0);
  CHECK(p.unit(0.75) == doctest::Approx(0.025).epsilon(1e-14));
  for (double eps : {0.01, 0.05, 0.099}) {
    const auto c = mz::make_profile(eps, 1.0).certify(100000);
    CHECK(c.passed());
    CHECK(c.max_slope == doctest::Approx(8.0 * eps).epsilon(0.01));
    CHECK(c.max_curvature == doctest::Approx(64.0 * eps).epsilon(0.01));
  }
  CHECK_THROWS_AS(mz::make_profile(0.1, 1.0), mz::InvalidArgument);
  CHECK_THROWS_AS(mz::make_profile(0.05, 0.0), mz::InvalidArgument);
}

TEST_CASE("regularize leaves affine data with Bu in K unchanged") {
  const Grid g = Grid::make({129, 129}, 1.0 / 64, {-1.0, -1.0});
  const GridField u = spike_field(g, {}, 0.0, 0.1);
  const auto res = mz::regularize_on_ball(u, std::vector<double>{0.0, 0.0}, 0.5, 5e-4, unit_ball2(), 1.0,
                                          mz::gradient_operator(2));
  double worst = 0.0;
  for (std::size_t i = 0; i < u.nodes(); ++i) worst = std::max(worst, std::abs(res.u_tilde(i, 0) - u(i, 0)));
  CHECK(worst <= 1e-12);
  CHECK(res.cert.l1_after == 0.0);
  CHECK(res.cert.passed());
}

TEST_CASE("regularize certificate on a spike") {
  const auto op = mz::gradient_operator(2);
  const std::vector<double> a{0.05, -0.1};
  for (const auto& c : {std::vector<double>{0.08, -0.07}, std::vector<double>{0.35, -0.1}}) {
    double prev_gap = -1.0;
    for (int n : {129, 257}) {
      const Grid g = Grid::make({n, n}, 2.0 / (n - 1), {-1.0, -1.0});
      const GridField u = spike_field(g, {c}, 0.34, 0.06);
      const auto res = mz::regularize_on_ball(u, a, 0.5, 9e-4, unit_ball2(), 1.6, op);
      const auto& cert = res.cert;
      CHECK(cert.identity_outside);
      CHECK(cert.l1_ok());
      CHECK(cert.dl_ok());
      CHECK(cert.interior_ok());
      CHECK(cert.derivative_precondition);
      CHECK(cert.gamma == doctest::Approx(std::cbrt(9e-4) * (1.0 + 18.0 * 1.6)).epsilon(1e-12));
      // Linear in h up to the lattice measure of the ball.
      if (prev_gap >= 0.0) CHECK(cert.l1_slack == doctest::Approx(0.5 * prev_gap).epsilon(0.01));
      prev_gap = cert.l1_slack;
    }
  }
}

TEST_CASE("regularize rejects a violated mean precondition") {
  const Grid g = Grid::make({65, 65}, 1.0 / 32, {-1.0, -1.0});
  const GridField u = spike_field(g, {{0.0, 0.0}}, 4.0, 0.2);
  CHECK_THROWS_AS(mz::regularize_on_ball(u, std::vector<double>{0.0, 0.0}, 0.5, 5e-4, unit_ball2(), 2.0,
                                         mz::gradient_operator(2)),
                  mz::InvalidArgument);
  CHECK_THROWS_AS(mz::regularize_on_ball(u, std::vector<double>{0.0, 0.0}, 0.5, 2e-3, unit_ball2(), 2.0,
                                         mz::gradient_operator(2)),
                  mz::InvalidArgument);
}

TEST_CASE("ball selection on empty, single and separated spikes") {
  const Grid g = Grid::make({257, 257}, 1.0 / 32, {-4.0, -4.0});
  std::vector<double> e(g.nodes(), 0.0);
  CHECK(mz::select_balls(g, e, 1e-3, 1.0).balls.empty());

  int m[2] = {128, 128};
  e[g.ravel(m)] = 1.0;
  auto sel = mz::select_balls(g, e, 1e-3, 1.0);
  REQUIRE(sel.balls.size() == 1);
  CHECK(mz::lattice_dist2(g, sel.balls[0].node, g.ravel(m)) <= 1L * sel.balls[0].radius_cells * sel.balls[0].radius_cells);

  std::fill(e.begin(), e.end(), 0.0);
  int p[2] = {40, 40}, q[2] = {216, 216};
  e[g.ravel(p)] = 0.01;
  e[g.ravel(q)] = 0.01;
  sel = mz::select_balls(g, e, 1e-3, 1.0);
  REQUIRE(sel.balls.size() == 2);
  const long R = std::max(sel.balls[0].radius_cells, sel.balls[1].radius_cells);
  CHECK(mz::lattice_dist2(g, g.ravel(p), g.ravel(q)) > 100 * R * R);
  const auto chk = mz::verify_selection(g, sel);
  CHECK(chk.disjoint);
  CHECK(chk.covered);
}

TEST_CASE("ball selection is disjoint and 5-covers on random fields") {
  const Grid g = Grid::make({129, 129}, 1.0 / 16, {-4.0, -4.0});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> e(g.nodes(), 0.0);
    for (auto& v : e)
      if (U(rng) < 0.002) v = U(rng) * 0.05;
    const auto sel = mz::select_balls(g, e, 1e-3, 1.0);
    const auto chk = mz::verify_selection(g, sel);
    CHECK(chk.disjoint);
    CHECK(chk.covered);
    for (std::size_t i = 0; i < sel.balls.size(); ++i)
      for (std::size_t j = i + 1; j < sel.balls.size(); ++j) {
        const long r = sel.balls[i].radius_cells + sel.balls[j].radius_cells;
        CHECK(mz::lattice_dist2(g, sel.balls[i].node, sel.balls[j].node) > r * r);
      }
  }
}

TEST_CASE("sweep is the identity when Bu lies in K") {
  const Grid g = Grid::make({129, 129}, 1.0 / 16, {-4.0, -4.0});
  const GridField u = spike_field(g, {}, 0.0, 0.1);
  const auto r = mz::sweep(u, unit_ball2(), 0.5, 1.0, mz::gradient_operator(2));
  CHECK(r.mu == 0.0);
  CHECK(r.lambda_new == 0.0);
  CHECK(r.u_tilde.data == u.data);
}

TEST_CASE("sweep on a spike contracts and respects the measure bound") {
  const Grid g = Grid::make({513, 513}, 1.0 / 64, {-4.0, -4.0});
  const GridField u = spike_field(g, {{0.3, -0.2}}, 0.45, 0.1);
  const auto op = mz::gradient_operator(2);
  const double M = 1.2;
  const double gamma = 0.9 * 0.09 * (1.0 + op.c1() * M);
  const auto r = mz::sweep(u, unit_ball2(), gamma, M, op);
  REQUIRE(r.balls >= 1);
  CHECK(r.mu > 0.0);
  CHECK(r.mu_ok());
  const double bound = 4.0 * r.lambda * std::pow((1.0 + 18.0 * M) / gamma, 3);
  CHECK(r.mu <= bound);
  CHECK(r.alpha_emp < 1.0);
  CHECK(r.lambda_new <= r.alpha_emp * r.lambda * (1.0 + 1e-12));
  CHECK(r.dl_ok());
  CHECK(r.disjoint);
  CHECK(r.covered);
}

TEST_CASE("schedule identities") {
  mz::ScheduleOptions o;
  o.C1 = 18.0;
  const auto s = mz::build_schedule(0.05, 2, 1.0, 0.5, 1.0, o);
  const double da = s.delta * s.alpha_bar;
  CHECK(std::abs(da * std::exp(da) - 0.05) <= 1e-12);
  CHECK(s.alpha_bar == doctest::Approx(1.0 / (1.0 - std::pow(0.5, 1.0 / 6.0))).epsilon(1e-14));
  double sum = 0.0;
  for (std::size_t i = 0; i < s.stages.size(); ++i) {
    const auto& st = s.stages[i];
    CHECK(st.gamma_i / st.M_i == doctest::Approx(s.delta * std::pow(0.5, i / 6.0)).epsilon(1e-14));
    if (i > 0) CHECK(st.M_i == s.stages[i - 1].M_i + s.stages[i - 1].gamma_i);
    CHECK(st.M_i <= s.M_bar);
    sum += st.gamma_i;
  }
  CHECK(sum <= s.gamma_bar);

  // Small gamma linearises: delta alpha_bar ~ gamma.
  const auto t = mz::build_schedule(1e-9, 2, 1.0, 0.5, 1.0, o);
  CHECK(t.delta * t.alpha_bar == doctest::Approx(1e-9).epsilon(1e-8));
  double prev = 0.0;
  for (double gm : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
    const auto u = mz::build_schedule(gm, 2, 1.0, 0.5, 1.0, o);
    CHECK(u.delta > prev);
    prev = u.delta;
  }
  CHECK_THROWS_AS(mz::build_schedule(10.0, 2, 1.0, 0.5, 1.0, o), mz::InvalidArgument);
  CHECK_THROWS_AS(mz::build_schedule(0.05, 2, 1.0, 1.0, 1.0, o), mz::InvalidArgument);
  CHECK(mz::default_alpha(2) == doctest::Approx(1.0 - 1.0 / 100.0));
}

TEST_CASE("growth admissibility") {
  CHECK(mz::growth_admissibility(0.0, 1.0, 0.5, 2, 1.0, 18.0, 0.09) == 0.0);
  double prev = mz::growth_admissibility(1.0, 1.0, 0.5, 2, 1.0, 18.0, 0.09);
  for (int j = 1; j < 6; ++j) {
    const double v = mz::growth_admissibility(std::pow(2.0, -j), 1.0, 0.5, 2, 1.0, 18.0, 0.09);
    CHECK(v / prev == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    prev = v;
  }
  const double lam = 0.3, M = 1.5, eps = 0.2, Ks = 2.0;
  const double ref = std::pow(lam, 1.0 - eps) * (1.0 + 18.0 * M) * std::pow(Ks, 3) * std::exp(6.0 * 0.09 * (1.0 + 18.0 * M));
  CHECK(mz::growth_admissibility(lam, M, eps, 2, Ks, 18.0, 0.09) == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("whole-space truncation is the identity when Bu lies in K") {
  const Grid g = Grid::make({129, 129}, 1.0 / 16, {-4.0, -4.0});
  const GridField u = spike_field(g, {}, 0.0, 0.1);
  mz::WholeSpaceOptions o;
  o.alpha = 1e-6;
  const auto r = mz::truncate_whole_space(u, unit_ball2(), 1.0, 1.2, mz::gradient_operator(2), o);
  CHECK(r.report.total_mu == 0.0);
  CHECK(r.g.data == u.data);
}

TEST_CASE("whole-space truncation of a spike train") {
  const Grid g = Grid::make({513, 513}, 1.0 / 64, {-4.0, -4.0});
  const auto op = mz::gradient_operator(2);
  mz::GeneratorSpec spec{.family = mz::Family::kSpikeTrain, .grid = g, .op = op, .K = unit_ball2(), .M = 1.2};
  spec.lambda0 = 2.5e-4;
  spec.width = 0.1;
  spec.seed = 7;
  const double gamma = 0.9 * 0.09 * (1.0 + op.c1() * spec.M);
  mz::WholeSpaceOptions o;
  o.alpha = 1e-6;
  o.support = mz::Box{{-2.0, -2.0}, {2.0, 2.0}};
  std::vector<double> mus;
  for (int j = 0; j < 3; ++j) {
    const auto gen = mz::generate_sequence(spec, j);
    const auto r = mz::truncate_whole_space(gen.u, unit_ball2(), gamma, spec.M, op, o);
    const auto& rep = r.report;
    CHECK(rep.stages_ok());
    CHECK(rep.sup_dist_gamma_bar <= rep.gamma_bar);
    CHECK(rep.dl_final <= rep.dl_bound + rep.dl_slack);
    CHECK(rep.outside_support == 0);
    CHECK(rep.total_mu <= rep.sum_mu);
    mus.push_back(rep.total_mu);
  }
  CHECK(mus[0] > 0.0);
  CHECK(mus[1] <= mus[0]);
  CHECK(mus[2] <= mus[1]);
}

TEST_CASE("whole-space truncation reports divergence") {
  const Grid g = Grid::make({129, 129}, 1.0 / 16, {-4.0, -4.0});
  // A uniform offset from K cannot be repaired by local averaging.
  GridField u(g, 1);
  int m[2];
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    g.unravel(i, m);
    u(i, 0) = 1.15 * g.coord(0, m[0]);
  }
  mz::WholeSpaceOptions o;
  o.alpha = 1e-6;
  o.max_stages = 50;
  CHECK_THROWS_AS(mz::truncate_whole_space(u, unit_ball2(), 0.05, 1.2, mz::gradient_operator(2), o),
                  mz::DivergenceError);
}

TEST_CASE("cutoff function") {
  const mz::Cutoff phi{mz::Box{{-1.0, -1.0}, {1.0, 1.0}}, 0.2};
  CHECK(phi.value(std::vector<double>{0.0, 0.0}) == 1.0);
  CHECK(phi.value(std::vector<double>{-1.0, 0.0}) == 0.0);
  CHECK(phi.value(std::vector<double>{-0.9, 0.0}) == doctest::Approx(0.5));
  // Gradient against central differences.
  const std::vector<double> x{-0.93, 0.85};
  double grad[2], hess[4];
  phi.gradient(x, grad);
  phi.hessian(x, hess);
  const double h = 1e-5;
  for (int a = 0; a < 2; ++a) {
    std::vector<double> xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    CHECK(grad[a] == doctest::Approx((phi.value(xp) - phi.value(xm)) / (2 * h)).epsilon(1e-6));
    double gp[2], gm[2];
    phi.gradient(xp, gp);
    phi.gradient(xm, gm);
    for (int b = 0; b < 2; ++b) CHECK(hess[b * 2 + a] == doctest::Approx((gp[b] - gm[b]) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("domain truncation keeps u0 outside U") {
  const Grid g = Grid::make({257, 257}, 1.0 / 32, {-4.0, -4.0});
  const auto op = mz::gradient_operator(2);
  mz::DomainTruncationConfig dc;
  dc.u0 = spike_field(g, {}, 0.0, 0.1);
  dc.U = mz::Box{{-3.0, -3.0}, {3.0, 3.0}};
  dc.V = mz::Box{{-2.5, -2.5}, {2.5, 2.5}};
  dc.gamma = 0.9 * 0.09 * (1.0 + op.c1() * 1.2);
  dc.whole_space.alpha = 1e-6;

  auto same = mz::truncate_domain(dc.u0, dc, unit_ball2(), 1.2, op);
  CHECK(same.w.data == dc.u0.data);

  std::vector<double> in_u;
  for (double amp : {0.45, 0.38, 0.3}) {
    const GridField uj = spike_field(g, {{0.2, 0.1}}, amp, 0.15);
    const auto r = mz::truncate_domain(uj, dc, unit_ball2(), 1.2, op);
    CHECK(r.report.outside_U_exact);
    in_u.push_back(r.report.modified_in_U);
  }
  CHECK(in_u[2] <= in_u[0]);

  mz::DomainTruncationConfig bad = dc;
  bad.V = mz::Box{{-3.5, -3.5}, {3.5, 3.5}};
  CHECK_THROWS_AS(mz::truncate_domain(dc.u0, bad, unit_ball2(), 1.2, op), mz::InvalidArgument);
}

TEST_CASE("blend remainder bound for second-order operators") {
  for (int n : {129, 257, 513}) {
    const Grid g = Grid::make({n, n}, 4.0 / (n - 1), {-2.0, -2.0});
    GridField u0(g, 1), uj(g, 1);
    int m[2];
    for (std::size_t i = 0; i < g.nodes(); ++i) {
      g.unravel(i, m);
      const double x = g.coord(0, m[0]), y = g.coord(1, m[1]);
      u0(i, 0) = 0.1 * x * x;
      uj(i, 0) = u0(i, 0) + 0.05 * std::sin(3 * x) * std::cos(2 * y);
    }
    const mz::Cutoff phi{mz::Box{{-1.2, -1.2}, {1.2, 1.2}}, 0.4};
    const auto chk = mz::blend_remainder_check(uj, u0, phi, mz::SlackModel{}, 1.0);
    CHECK(chk.nodes > 0);
    CHECK(chk.ok());
    CHECK(chk.sup_bound > 1.0);
  }
}

TEST_CASE("dyadic depth and ladder") {
  const std::vector<mz::ModulusEntry> t{{0.5, 0.25}, {0.2, 0.1}, {0.05, 0.02}};
  auto [n1, e1] = mz::dyadic_depth(t, 2, 1);
  CHECK(e1.delta == 0.25);
  CHECK(n1 == static_cast<int>(std::ceil(std::log2(std::sqrt(2.0) / 0.25))));
  auto [n5, e5] = mz::dyadic_depth(t, 2, 5);
  CHECK(e5.eps <= 0.2);
  CHECK(n5 >= n1);
  CHECK_THROWS_AS(mz::dyadic_depth(t, 2, 100), mz::InvalidArgument);
  const auto lad = mz::ladder_indices({{2.0, 0.5, 0.1}, {2.0, 0.6, 0.3}}, {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
  CHECK(lad == std::vector<int>{1, 2});
}

TEST_CASE("varying K reduces to fixed K for a constant family") {
  const Grid g = Grid::make({65, 65}, 1.0 / 64, {0.0, 0.0});
  const auto op = mz::gradient_operator(2);
  const ConvexBody K = ConvexBody::ball(Eigen::Vector2d(0, 0), 1.0);
  GridField u0(g, 1), uj(g, 1);
  int m[2];
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    g.unravel(i, m);
    const double x = g.coord(0, m[0]), y = g.coord(1, m[1]);
    u0(i, 0) = 0.3 * x;
    const double s = ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)) / 0.01;
    uj(i, 0) = u0(i, 0) + (s < 1.0 ? 0.05 * std::pow(1.0 - s, 4) : 0.0);
  }
  mz::VaryingKConfig vc;
  vc.K_map = [K](std::span<const double>) { return K; };
  vc.eta = 0.5;
  vc.modulus = {{0.0, 2.0}};
  vc.u0 = u0;
  vc.whole_space.alpha = 1e-6;
  const auto r = mz::truncate_varying_K_level(uj, vc, 1.2, op, 1);
  REQUIRE(r.report.N == 0);
  const auto& cube = r.report.cubes.at(0);
  mz::DomainTruncationConfig dc;
  dc.u0 = u0;
  const double side = 1.0;
  const double um = std::max(vc.u_margin * side, 2.0 * g.spacing);
  const double vm = std::max(vc.v_margin * side, um + 2.0 * g.spacing);
  dc.U = mz::Box{cube.lo, cube.hi}.shrunk(um);
  dc.V = mz::Box{cube.lo, cube.hi}.shrunk(vm);
  dc.gamma = cube.gamma;
  dc.whole_space = vc.whole_space;
  const auto d = mz::truncate_domain(uj, dc, K, 1.2 / vc.eta, op);
  CHECK(r.w.data == d.w.data);
  CHECK(r.report.band_consistent);
}

TEST_CASE("young measure comparison") {
  const Grid g = Grid::make({33, 33}, 1.0 / 32);
  GridField f(g, 2);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double& v : f.data) v = U(rng);
  const auto mons = mz::monomials_up_to(2, 2);
  CHECK(mons.size() == 5);
  CHECK(mz::young_measure_compare(f, f, mons).max_diff == 0.0);
  GridField h = f;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < h.nodes(); i += 10, ++changed) h(i, 0) = 1.0;
  const double frac = static_cast<double>(changed) / static_cast<double>(h.nodes());
  const auto t = mz::young_measure_compare(f, h, {{1, 0}});
  CHECK(t.max_diff <= frac * 2.0);
  CHECK_THROWS_AS(mz::young_measure_compare(f, h, {{2, 2}}), mz::InvalidArgument);
}

}  // TEST_SUITE
