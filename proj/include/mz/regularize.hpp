#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mz/convex_geom.hpp"
#include "mz/grid.hpp"
#include "mz/operator.hpp"

namespace mz {

/// Additive discretisation slack c * (h / L) * scale, L the grid's short side.
struct SlackModel {
  double c_slack = 1.0;
  double operator()(const Grid& g, double scale) const { return c_slack * g.spacing / g.short_side() * scale; }
  /// Same model for a feature of the given length (e.g. a cutoff width).
  double at_length(const Grid& g, double length, double scale) const { return c_slack * g.spacing / length * scale; }
};

struct BallCert {
  std::vector<double> center;
  double radius = 0.0;
  double theta = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  double mean_dist = 0.0;          // normalised node mean of dist(Bu, K) over B_r
  double l1_before_annulus = 0.0;  // over B_r \ B_{r/2}
  double l1_before = 0.0;          // over B_r
  double l1_after = 0.0;           // dist(Bu~, K_gamma) over B_r
  double l1_bound = 0.0;           // (1 + 2 eps) * l1_before_annulus
  double l1_slack = 0.0;
  double dl_before = 0.0;          // max |D^l u| on B_r
  double dl_after = 0.0;           // max |D^l u~| on B_r
  double dl_bound = 0.0;           // (1 + C1 eps) |K| M
  double dl_slack = 0.0;
  double interior_sup = 0.0;       // max dist(Bu~, K) on B_{5r/8}
  double interior_slack = 0.0;
  std::size_t modified_nodes = 0;
  bool identity_outside = false;   // u~ == u bitwise for |x - a| >= 7r/8
  bool derivative_precondition = false;

  bool l1_ok() const { return l1_after <= l1_bound + l1_slack; }
  bool dl_ok() const { return dl_after <= dl_bound + dl_slack; }
  bool interior_ok() const { return interior_sup <= gamma + interior_slack; }
  bool passed() const { return identity_outside && l1_ok() && dl_ok() && interior_ok(); }
};

struct RegularizeResult {
  GridField u_tilde;
  BallCert cert;
};

/// Single-ball regulariser. eps = theta^(1/(d+1)),
/// gamma = eps (1 + C1 M) |K|. Throws InvalidArgument when
/// theta >= 10^-(d+1) or the normalised mean of dist(Bu, K) over the ball
/// exceeds theta, or when the ball leaves the grid.
RegularizeResult regularize_on_ball(const GridField& u, std::span<const double> a, double r, double theta,
                                    const InflatedBody& K, double M, const HomogeneousOperator& op,
                                    const SlackModel& slack = {});
RegularizeResult regularize_on_ball(const GridField& u, std::span<const double> a, double r, double theta,
                                    const ConvexBody& K, double M, const HomogeneousOperator& op,
                                    const SlackModel& slack = {});

}  // namespace mz
