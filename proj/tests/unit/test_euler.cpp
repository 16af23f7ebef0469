#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mz/errors.hpp"
#include "mz/euler.hpp"
#include "mz/field_ops.hpp"
#include "mz/spectral.hpp"

using mz::Grid;
using mz::GridField;

namespace {

double sup_abs(const GridField& f) {
  double s = 0.0;
  for (double v : f.data) s = std::max(s, std::abs(v));
  return s;
}

double max_diff(const GridField& a, const GridField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s = std::max(s, std::abs(a.data[i] - b.data[i]));
  return s;
}

Grid torus(int dims, int n) {
  return Grid::make(std::vector<int>(dims, n), 2.0 * std::numbers::pi / n, {}, mz::Boundary::kPeriodic);
}

GridField from_source(const Grid& g, int comps, const mz::ComponentSource& src) {
  GridField f(g, comps);
  std::vector<double> buf(g.nodes());
  for (int c = 0; c < comps; ++c) {
    src(c, buf.data());
    for (std::size_t i = 0; i < g.nodes(); ++i) f(i, c) = buf[i];
  }
  return f;
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = N(rng);
  return x.normalized();
}

}  // namespace

TEST_SUITE("euler_potential") {

TEST_CASE("state to matrix examples") {
  const int d = 3;
  std::vector<double> z(mz::euler_state_size(d), 0.0);
  CHECK(z.size() == 10);
  z[0] = 1.0;
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(4, 4);
  want(3, 3) = 1.0;
  CHECK(mz::state_to_matrix(z, d) == want);

  std::fill(z.begin(), z.end(), 0.0);
  z[1] = 1.0;      // m = e_1
  z.back() = 1.0;  // q = 1
  want.setZero();
  want.topLeftCorner(3, 3) = Eigen::MatrixXd::Identity(3, 3);
  want(0, 3) = want(3, 0) = 1.0;
  CHECK(mz::state_to_matrix(z, d) == want);
}

TEST_CASE("state round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int d : {3, 4}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> z(mz::euler_state_size(d));
      for (double& v : z) v = U(rng);
      const auto back = mz::matrix_to_state(mz::state_to_matrix(z, d), d);
      for (std::size_t k = 0; k < z.size(); ++k) CHECK(std::abs(back[k] - z[k]) <= 1e-15);
      const auto s = mz::EulerState::from_vector(z, d);
      CHECK(std::abs(s.M.trace()) <= 1e-15);
      CHECK(s.to_vector() == z);
    }
  }
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 4);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(mz::matrix_to_state(bad, 3), mz::InvalidArgument);
  mz::EulerState s;
  s.m = Eigen::VectorXd::Zero(3);
  s.M = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(s.to_vector(), mz::InvalidArgument);
}

TEST_CASE("A of a constant state vanishes") {
  const Grid g = torus(4, 8);
  GridField z(g, 10);
  for (std::size_t i = 0; i < z.nodes(); ++i)
    for (int c = 0; c < 10; ++c) z(i, c) = 0.1 * (c + 1);
  CHECK(sup_abs(mz::apply_A_euler(z, 3)) == 0.0);
  CHECK(sup_abs(mz::apply_A_euler(z, 3, mz::DerivativeMode::kFiniteDifference)) == 0.0);
}

TEST_CASE("manufactured solution of the linear system") {
  // rho = m_1 = q = cos(x1 - t), M_11 = -M_33 = sin(x2), M_12 = sin(x3).
  const Grid g = torus(4, 16);
  GridField z(g, 10);
  int m[4];
  for (std::size_t i = 0; i < z.nodes(); ++i) {
    g.unravel(i, m);
    const double t = g.coord(0, m[0]), x1 = g.coord(1, m[1]), x2 = g.coord(2, m[2]), x3 = g.coord(3, m[3]);
    z(i, 0) = std::cos(x1 - t);
    z(i, 1) = std::cos(x1 - t);
    z(i, 4) = std::sin(x2);  // M_11
    z(i, 5) = std::sin(x3);  // M_12
    z(i, 9) = std::cos(x1 - t);
  }
  const GridField a = mz::apply_A_euler(z, 3);
  CHECK(a.components == 4);
  CHECK(sup_abs(a) <= 1e-10 * sup_abs(z));
  // Breaking the pressure leaves a momentum residual sin(x1 - t).
  GridField w = z;
  for (std::size_t i = 0; i < w.nodes(); ++i) w(i, 9) = 0.0;
  CHECK(sup_abs(mz::apply_A_euler(w, 3)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("A equals the row divergence of U") {
  for (int d : {3, 4}) {
    const Grid g = torus(d + 1, 8);
    const int N = mz::euler_state_size(d);
    const GridField z = from_source(g, N, mz::trig_source(g, N, 17 + d));
    const GridField a = mz::apply_A_euler(z, d);
    const GridField r = mz::apply_operator_spectral(mz::row_divergence_operator(d), mz::state_matrix_field(z, d));
    REQUIRE(r.components == d + 1);
    CHECK(max_diff(a, r) <= 1e-12);
    const GridField af = mz::apply_A_euler(z, d, mz::DerivativeMode::kFiniteDifference);
    const GridField rf = mz::apply_operator(mz::row_divergence_operator(d), mz::state_matrix_field(z, d));
    CHECK(max_diff(af, rf) <= 1e-12);
  }
}

TEST_CASE("potential of zero is zero") {
  const Grid g = torus(4, 6);
  const GridField psi(g, mz::potential_input_size(3));
  CHECK(sup_abs(mz::apply_B_euler(psi, 3)) == 0.0);
  CHECK_THROWS_AS(mz::apply_B_euler(GridField(g, 9), 3), mz::InvalidArgument);
  CHECK_THROWS_AS(mz::potential_indices(2), mz::InvalidArgument);
}

TEST_CASE("quadratic potentials give exactly divergence-free constants") {
  const Grid g = Grid::make({9, 9, 9, 9}, 0.125, {-0.5, -0.5, -0.5, -0.5});
  const GridField psi = mz::quadratic_field(g, mz::potential_input_size(3), 21);
  const GridField z = mz::apply_B_euler(psi, 3, mz::DerivativeMode::kFiniteDifference);
  CHECK(sup_abs(z) > 0.0);
  const GridField a = mz::apply_A_euler(z, 3, mz::DerivativeMode::kFiniteDifference);
  int m[4];
  double worst = 0.0;
  for (std::size_t i = 0; i < a.nodes(); ++i) {
    g.unravel(i, m);
    if (!mz::is_interior(g, m)) continue;
    for (int c = 0; c < a.components; ++c) worst = std::max(worst, std::abs(a(i, c)));
  }
  CHECK(worst == 0.0);
}

TEST_CASE("random trigonometric potentials are divergence free") {
  const Grid g = torus(4, 12);
  const int n = mz::potential_input_size(3);
  const GridField psi = from_source(g, n, mz::trig_source(g, n, 5));
  const GridField z = mz::apply_B_euler(psi, 3);
  const GridField a = mz::apply_A_euler(z, 3);
  double usup = 0.0, sym = 0.0, tr = 0.0;
  for (std::size_t i = 0; i < z.nodes(); ++i) {
    const std::span<const double> zi(z.at(i), z.components);
    const Eigen::MatrixXd U = mz::state_to_matrix(zi, 3);
    usup = std::max(usup, U.cwiseAbs().maxCoeff());
    sym = std::max(sym, (U - U.transpose()).cwiseAbs().maxCoeff());
    tr = std::max(tr, std::abs(mz::EulerState::from_vector(zi, 3).M.trace()));
  }
  CHECK(usup > 1.0);
  CHECK(sup_abs(a) <= 1e-10 * usup);
  CHECK(sym <= 1e-12 * usup);
  CHECK(tr <= 1e-12 * usup);
}

TEST_CASE("potential is linear") {
  const Grid g = torus(4, 8);
  const int n = mz::potential_input_size(3);
  const GridField p1 = from_source(g, n, mz::trig_source(g, n, 1));
  const GridField p2 = from_source(g, n, mz::trig_source(g, n, 2));
  GridField mix(g, n);
  for (std::size_t k = 0; k < mix.data.size(); ++k) mix.data[k] = 2.0 * p1.data[k] - 0.5 * p2.data[k];
  const GridField b1 = mz::apply_B_euler(p1, 3), b2 = mz::apply_B_euler(p2, 3), bm = mz::apply_B_euler(mix, 3);
  GridField comb(g, b1.components);
  for (std::size_t k = 0; k < comb.data.size(); ++k) comb.data[k] = 2.0 * b1.data[k] - 0.5 * b2.data[k];
  CHECK(max_diff(bm, comb) <= 1e-12 * std::max(1.0, sup_abs(bm)));
}

TEST_CASE("streaming and stepwise routes agree") {
  const Grid g = torus(4, 8);
  const int n = mz::potential_input_size(3);
  const auto src = mz::trig_source(g, n, 9);
  const GridField streamed = mz::apply_B_euler(g, 3, src);
  const GridField stepwise = mz::apply_B_euler_stepwise(from_source(g, n, src), 3);
  CHECK(max_diff(streamed, stepwise) <= 1e-11 * sup_abs(streamed));
}

TEST_CASE("triple matrix") {
  const Eigen::Matrix3d& T = mz::triple_matrix();
  CHECK(T.determinant() == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK((T * mz::triple_matrix_inverse() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((mz::triple_matrix_inverse() * T - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("component counts") {
  for (int d : {3, 4, 5}) {
    CHECK(mz::potential_input_size(d, mz::PotentialIndexing::kSpatialOnly) == (d - 1) * (d - 1) * d * d / 4);
    CHECK(mz::potential_input_size(d) == d * d * (d + 1) * (d + 1) / 4);
    CHECK(2 * mz::euler_state_size(d) == (2 + d) * (d + 1));
  }
  CHECK(mz::euler_state_size(3) == 10);
  CHECK(mz::euler_B_operator(3).in_components == 36);
  CHECK(mz::euler_B_operator(3).out_components == 10);
  CHECK(mz::euler_A_operator(3).out_components == 4);
}

TEST_CASE("spatial-only completion loses rank") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd xi = random_unit(rng, 4);
    CHECK(mz::numerical_rank(mz::euler_B_symbol(3, xi, mz::PotentialIndexing::kSpatialOnly)) < 6);
    CHECK(mz::numerical_rank(mz::euler_B_symbol(3, xi)) == 6);
  }
}

TEST_CASE("Euler A symbol acts as U xi") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int d : {3, 4}) {
    const auto A = mz::euler_A_operator(d);
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd xi = random_unit(rng, d + 1);
      std::vector<double> z(mz::euler_state_size(d));
      for (double& v : z) v = U(rng);
      const Eigen::MatrixXd Um = mz::state_to_matrix(z, d);
      Eigen::VectorXd xm(d + 1);
      for (int b = 0; b <= d; ++b) xm(b) = xi(mz::matrix_axis(d, b));
      const Eigen::VectorXd direct = Um * xm;
      const Eigen::VectorXd via = mz::symbol_matrix(A, xi) * Eigen::Map<const Eigen::VectorXd>(z.data(), z.size());
      CHECK((direct - via).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("symbols are homogeneous and ranks scale invariant") {
  std::mt19937_64 rng(14);
  const auto A = mz::euler_A_operator(3);
  const auto B = mz::euler_B_operator(3);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd xi = random_unit(rng, 4);
    CHECK(mz::symbol_homogeneity_defect(A, xi, 2.0) <= 1e-14);
    CHECK(mz::symbol_homogeneity_defect(B, xi, 2.0) <= 1e-14);
    CHECK(mz::symbol_homogeneity_defect(B, xi, -0.3) <= 1e-14);
    CHECK(mz::numerical_rank(mz::symbol_matrix(B, 3.7 * xi)) == mz::numerical_rank(mz::symbol_matrix(B, xi)));
    CHECK(mz::numerical_rank(mz::symbol_matrix(A, xi)) == 4);
  }
  const auto grad = mz::gradient_operator(3);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1(0) = 1.0;
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(3, 1);
  sel(0, 0) = 1.0;
  CHECK(mz::symbol_matrix(grad, e1) == sel);
}

TEST_CASE("exactness of the Euler and symmetric-gradient pairs") {
  for (int d : {3, 4}) {
    const auto rep = mz::exactness_check(mz::euler_A_operator(d), mz::euler_B_operator(d), 100, 1e-12);
    CHECK(rep.passed());
    CHECK(rep.max_composition <= 1e-12);
    for (int r : rep.rank_B) CHECK(r == mz::euler_state_size(d) - (d + 1));
  }
  for (int d : {2, 3}) {
    const auto [e, ann] = mz::symgrad_pair(d);
    const auto rep = mz::exactness_check(ann, e, 100, 1e-12);
    CHECK(rep.passed());
  }
  CHECK_THROWS_AS(mz::exactness_check(mz::euler_A_operator(3), mz::gradient_operator(4), 5, 1e-12), mz::InvalidArgument);
}

TEST_CASE("symmetric gradient of affine and cubic fields") {
  const int d = 3;
  const auto [e, ann] = mz::symgrad_pair(d);
  CHECK(e.order == 1);
  CHECK(ann.order == 2);
  CHECK(e.out_components == 6);
  CHECK(ann.in_components == 6);
  const Grid g = Grid::make({9, 9, 9}, 0.125, {-0.5, -0.5, -0.5});
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> coef(-3, 3);

  // Affine u = S x + W x + c with S symmetric, W antisymmetric.
  Eigen::Matrix3d S, W;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      S(a, b) = S(b, a) = coef(rng);
      W(a, b) = b == a ? 0.0 : coef(rng);
      W(b, a) = -W(a, b);
    }
  GridField u(g, 3);
  int m[3];
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    g.unravel(i, m);
    const Eigen::Vector3d x(g.coord(0, m[0]), g.coord(1, m[1]), g.coord(2, m[2]));
    const Eigen::Vector3d v = (S + W) * x + Eigen::Vector3d(1, 2, 3);
    for (int c = 0; c < 3; ++c) u(i, c) = v(c);
  }
  const GridField eu = mz::apply_operator(e, u);
  double worst = 0.0;
  for (std::size_t i = 0; i < eu.nodes(); ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) worst = std::max(worst, std::abs(eu(i, mz::sym_index(3, a, b)) - S(a, b)));
  CHECK(worst <= 1e-12);

  // Cubic polynomial u: the annihilator kills e(u) in the interior of its stencil.
  GridField c(g, 3);
  for (std::size_t i = 0; i < c.nodes(); ++i) {
    g.unravel(i, m);
    const double x = g.coord(0, m[0]), y = g.coord(1, m[1]), zc = g.coord(2, m[2]);
    c(i, 0) = x * x * y - 2 * y * y * zc + x * y * zc + 3 * x;
    c(i, 1) = zc * zc * zc - x * x * x + 2 * x * y * y;
    c(i, 2) = y * y * y + x * zc * zc - y * zc;
  }
  const GridField f = mz::apply_operator(ann, mz::apply_operator(e, c));
  worst = 0.0;
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    g.unravel(i, m);
    bool deep = true;
    for (int a = 0; a < 3; ++a) deep = deep && m[a] >= 2 && m[a] <= 6;
    if (!deep) continue;
    for (int k = 0; k < f.components; ++k) worst = std::max(worst, std::abs(f(i, k)));
  }
  CHECK(worst == 0.0);

  // A generic symmetric field is not a symmetric gradient.
  GridField s(g, 6);
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    g.unravel(i, m);
    const double x = g.coord(0, m[0]), y = g.coord(1, m[1]);
    s(i, mz::sym_index(3, 0, 0)) = y * y;
  }
  CHECK(sup_abs(mz::apply_operator(ann, s)) > 0.5);
}

}  // TEST_SUITE
