#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mz/ball_selection.hpp"
#include "mz/convex_geom.hpp"
#include "mz/grid.hpp"
#include "mz/operator.hpp"
#include "mz/regularize.hpp"

namespace mz {

struct SweepOptions {
  double C2 = 0.09;
  SlackModel slack{};
  /// Run the exhaustive disjointness / 5-dilate check on the selection.
  bool verify_selection = true;
};

struct SweepResult {
  GridField u_tilde;
  std::vector<std::uint8_t> modified_mask;
  double lambda = 0.0;       // (1/|K|) int dist(Bu, K)
  double lambda_new = 0.0;   // (1/|K|) int dist(Bu~, K_gamma)
  double theta = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  double M = 0.0;
  double K_sup = 0.0;
  double mu = 0.0;           // |{u != u~}| as node count * h^d
  std::size_t modified_nodes = 0;
  double mu_bound = 0.0;     // 2^d lambda ((1 + C1 M)|K| / gamma)^(d+1)
  double dl_after = 0.0;
  double dl_bound = 0.0;     // |K| M + gamma
  double dl_slack = 0.0;
  double alpha_emp = 0.0;    // lambda_new / lambda (0 when lambda = 0)
  std::size_t balls = 0;
  std::size_t candidates = 0;
  std::size_t unresolved = 0;
  bool disjoint = true;
  bool covered = true;
  std::vector<SelectedBall> selected;

  bool mu_ok() const { return mu <= mu_bound; }
  bool dl_ok() const { return dl_after <= dl_bound + dl_slack; }
};

/// One sweep: theta = (gamma / ((1 + C1 M)|K|))^(d+1), stopping-time ball
/// selection on dist(Bu, K), the single-ball regulariser on every selected
/// ball (in parallel; the balls are disjoint), and the measured bounds.
/// Throws InvalidArgument unless 0 < gamma < C2 (1 + C1 M)|K|.
SweepResult sweep(const GridField& u, const InflatedBody& K, double gamma, double M, const HomogeneousOperator& op,
                  const SweepOptions& options = {});
SweepResult sweep(const GridField& u, const ConvexBody& K, double gamma, double M, const HomogeneousOperator& op,
                  const SweepOptions& options = {});

}  // namespace mz
