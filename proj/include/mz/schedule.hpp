#pragma once

#include <vector>

#include "json.hpp"

namespace mz {

struct ScheduleOptions {
  double C1 = 0.0;
  double C2 = 0.09;
  double C3 = -1.0;  // negative: 2^d
  double C4 = -1.0;
  double C5 = -1.0;
  /// Stop emitting stages once gamma_i / gamma_0 drops below this.
  double stage_floor = 1e-6;
  int max_stages = 200;
};

struct Stage {
  int index = 0;
  double factor = 0.0;     // delta * alpha^(i / (2(d+1)))
  double M_i = 0.0;        // |K_i| / |K|
  double gamma_i = 0.0;    // factor * M_i (unit frame)
  double inflation = 0.0;  // sum_{j<i} gamma_j (unit frame)
};

/// Iteration schedule in the frame |K| = 1; multiply gammas and inflations
/// by K_sup for physical values.
struct Schedule {
  double gamma_target = 0.0;  // physical
  int d = 0;
  double M = 0.0;
  double alpha = 0.0;
  double K_sup = 0.0;
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0, C5 = 0.0;
  double delta = 0.0;
  double alpha_bar = 0.0;         // summed series
  double alpha_bar_closed = 0.0;  // 1 / (1 - alpha^(1/(2(d+1))))
  std::size_t series_terms = 0;
  double M_bar = 0.0;             // e^(delta alpha_bar)
  double gamma_bar = 0.0;         // delta alpha_bar M_bar (unit frame)
  double residual = 0.0;          // |delta alpha_bar e^(delta alpha_bar) - gamma / K_sup|
  std::vector<Stage> stages;

  nlohmann::ordered_json to_json() const;
};

/// Throws InvalidArgument unless 0 < gamma < C2 (1 + C1 M) K_sup and
/// alpha in (0, 1).
Schedule build_schedule(double gamma, int d, double M, double alpha, double K_sup, const ScheduleOptions& options);

/// Default decay factor 1 - 5^-d / 4.
double default_alpha(int d);

/// Literal value of lambda^(1-eps) (1 + C1 M) K_sup^(d+1) e^(2(d+1) C2 (1 + C1 M)).
double growth_admissibility(double lambda, double M, double eps, int d, double K_sup, double C1, double C2);

}  // namespace mz
