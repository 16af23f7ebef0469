#include "mz/regularize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "mz/errors.hpp"
#include "mz/field_ops.hpp"
#include "mz/numerics.hpp"
#include "mz/profile.hpp"

namespace mz {

namespace {

struct BallNode {
  std::size_t index;
  std::array<int, 5> multi;
  double dist;
};

std::vector<BallNode> nodes_in_ball(const Grid& g, std::span<const double> a, double r) {
  std::array<int, 5> lo{}, hi{}, cur{};
  for (int ax = 0; ax < g.dim; ++ax) {
    lo[ax] = std::max(0, static_cast<int>(std::ceil((a[ax] - r - g.origin[ax]) / g.spacing - 1e-12)));
    hi[ax] = std::min(g.shape[ax] - 1, static_cast<int>(std::floor((a[ax] + r - g.origin[ax]) / g.spacing + 1e-12)));
    if (lo[ax] > hi[ax]) return {};
    cur[ax] = lo[ax];
  }
  std::vector<BallNode> out;
  const double r2 = r * r * (1.0 + 1e-12);
  while (true) {
    double d2 = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
      const double t = g.coord(ax, cur[ax]) - a[ax];
      d2 += t * t;
    }
    if (d2 <= r2) out.push_back({g.ravel(cur.data()), cur, std::sqrt(d2)});
    int ax = g.dim - 1;
    while (ax >= 0 && cur[ax] == hi[ax]) {
      cur[ax] = lo[ax];
      --ax;
    }
    if (ax < 0) break;
    ++cur[ax];
  }
  return out;
}

}  // namespace

RegularizeResult regularize_on_ball(const GridField& u, std::span<const double> a, double r, double theta,
                                    const InflatedBody& K, double M, const HomogeneousOperator& op,
                                    const SlackModel& slack) {
  const Grid& g = u.grid;
  const int d = g.dim;
  if (static_cast<int>(a.size()) != d) throw InvalidArgument("ball centre dimension mismatch");
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  if (!(theta < std::pow(10.0, -(d + 1)))) throw InvalidArgument("theta too large: need theta < 10^-(d+1)");
  if (!ball_inside(g, a, r)) throw InvalidArgument("regularisation ball exits the grid domain");
  const double Ks = K.sup_norm();
  if (!(Ks > 0.0)) throw InvalidArgument("sup norm of K is zero");

  const auto ball = nodes_in_ball(g, a, r);
  if (ball.empty()) throw InvalidArgument("regularisation ball contains no nodes");
  const double hd = g.cell_volume();
  std::vector<double> bu(op.out_components);

  std::vector<double> e_before(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    apply_operator_at(op, u, ball[i].multi.data(), bu.data());
    e_before[i] = K.distance(bu.data());
  }
  BallCert c;
  c.center.assign(a.begin(), a.end());
  c.radius = r;
  c.theta = theta;
  c.mean_dist = pairwise_sum(e_before) / static_cast<double>(ball.size()) / Ks;
  if (c.mean_dist > theta * (1.0 + 1e-12))
    throw InvalidArgument("mean distance precondition violated: normalised mean " + std::to_string(c.mean_dist) +
                          " exceeds theta " + std::to_string(theta));

  c.epsilon = std::pow(theta, 1.0 / (d + 1));
  const double C1 = op.c1();
  c.gamma = c.epsilon * (1.0 + C1 * M) * Ks;
  const RadialProfile profile(c.epsilon, r);

  GridField ut = u;
  c.modified_nodes = mollify_region(u, ut, a, r, profile);

  const InflatedBody Kg = K.inflated(c.gamma);
  std::vector<double> annulus, after;
  annulus.reserve(ball.size());
  after.reserve(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& n = ball[i];
    if (n.dist >= 0.5 * r) annulus.push_back(e_before[i]);
    apply_operator_at(op, ut, n.multi.data(), bu.data());
    after.push_back(Kg.distance(bu.data()));
    if (n.dist <= 0.625 * r) c.interior_sup = std::max(c.interior_sup, K.distance(bu.data()));
    if (is_interior(g, n.multi.data())) {
      c.dl_before = std::max(c.dl_before, derivative_norm_at(u, op.order, n.multi.data()));
      c.dl_after = std::max(c.dl_after, derivative_norm_at(ut, op.order, n.multi.data()));
    }
  }
  c.l1_before = pairwise_sum(e_before) * hd;
  c.l1_before_annulus = pairwise_sum(annulus) * hd;
  c.l1_after = pairwise_sum(after) * hd;
  c.l1_bound = (1.0 + 2.0 * c.epsilon) * c.l1_before_annulus;
  c.l1_slack = slack(g, theta * Ks * static_cast<double>(ball.size()) * hd);
  c.dl_bound = (1.0 + C1 * c.epsilon) * Ks * M;
  c.dl_slack = slack(g, Ks * M);
  c.interior_slack = slack(g, c.gamma);
  c.derivative_precondition = c.dl_before <= Ks * M + c.dl_slack;

  c.identity_outside = true;
  const double outer2 = (0.875 * r) * (0.875 * r);
  int multi[5];
  for (std::size_t i = 0; i < u.nodes() && c.identity_outside; ++i) {
    g.unravel(i, multi);
    double d2 = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      const double t = g.coord(ax, multi[ax]) - a[ax];
      d2 += t * t;
    }
    if (d2 < outer2) continue;
    for (int k = 0; k < u.components; ++k)
      if (std::bit_cast<std::uint64_t>(u(i, k)) != std::bit_cast<std::uint64_t>(ut(i, k))) c.identity_outside = false;
  }
  return {std::move(ut), std::move(c)};
}

RegularizeResult regularize_on_ball(const GridField& u, std::span<const double> a, double r, double theta,
                                    const ConvexBody& K, double M, const HomogeneousOperator& op,
                                    const SlackModel& slack) {
  return regularize_on_ball(u, a, r, theta, InflatedBody{K, 0.0}, M, op, slack);
}

}  // namespace mz
