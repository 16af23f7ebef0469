#include "mz/sweep.hpp"

#include <cmath>

#include "mz/errors.hpp"
#include "mz/field_ops.hpp"
#include "mz/numerics.hpp"
#include "mz/parallel.hpp"
#include "mz/profile.hpp"

namespace mz {

SweepResult sweep(const GridField& u, const InflatedBody& K, double gamma, double M, const HomogeneousOperator& op,
                  const SweepOptions& options) {
  const Grid& g = u.grid;
  const int d = g.dim;
  const double Ks = K.sup_norm();
  if (!(Ks > 0.0)) throw InvalidArgument("sup norm of K is zero");
  const double C1 = op.c1();
  const double scale = (1.0 + C1 * M) * Ks;
  if (!(gamma > 0.0) || !(gamma < options.C2 * scale))
    throw InvalidArgument("gamma outside (0, C2 (1 + C1 M) |K|)");

  SweepResult r;
  r.gamma = gamma;
  r.M = M;
  r.K_sup = Ks;
  r.epsilon = gamma / scale;
  r.theta = std::pow(r.epsilon, d + 1);

  const GridField bu = apply_operator(op, u);
  const std::vector<double> e = dist_field(bu, K);
  r.lambda = pairwise_sum(e) * g.cell_volume() / Ks;

  BallSelection sel = select_balls(g, e, r.theta, Ks);
  r.balls = sel.balls.size();
  r.candidates = sel.candidates.size();
  r.unresolved = sel.unresolved;
  if (options.verify_selection) {
    const SelectionCheck chk = verify_selection(g, sel);
    r.disjoint = chk.disjoint;
    r.covered = chk.covered;
  }

  r.u_tilde = u;
  if (!sel.balls.empty()) {
    // Profile eps must stay below 1/10; guaranteed by C2 < 1/10.
    parallel_for(sel.balls.size(), [&](std::size_t begin, std::size_t end) {
      int multi[5];
      std::vector<double> a(d);
      for (std::size_t i = begin; i < end; ++i) {
        const auto& b = sel.balls[i];
        g.unravel(b.node, multi);
        for (int ax = 0; ax < d; ++ax) a[ax] = g.coord(ax, multi[ax]);
        const double R = b.radius_cells * g.spacing;
        mollify_region(u, r.u_tilde, a, R, RadialProfile(r.epsilon, R));
      }
    }, 1);
  }

  r.modified_mask.assign(u.nodes(), 0);
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    for (int c = 0; c < u.components; ++c) {
      if (u(i, c) != r.u_tilde(i, c)) {
        r.modified_mask[i] = 1;
        ++r.modified_nodes;
        break;
      }
    }
  }
  r.mu = static_cast<double>(r.modified_nodes) * g.cell_volume();
  r.mu_bound = std::pow(2.0, d) * r.lambda * std::pow(scale / gamma, d + 1);

  const GridField bu_new = apply_operator(op, r.u_tilde);
  r.lambda_new = pairwise_sum(dist_field(bu_new, K.inflated(gamma))) * g.cell_volume() / Ks;
  r.alpha_emp = r.lambda > 0.0 ? r.lambda_new / r.lambda : 0.0;
  r.dl_after = sup_norm_derivative(r.u_tilde, op.order);
  r.dl_bound = Ks * M + gamma;
  r.dl_slack = options.slack(g, Ks * M);
  r.selected = std::move(sel.balls);
  return r;
}

SweepResult sweep(const GridField& u, const ConvexBody& K, double gamma, double M, const HomogeneousOperator& op,
                  const SweepOptions& options) {
  return sweep(u, InflatedBody{K, 0.0}, gamma, M, op, options);
}

}  // namespace mz
