#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mz/convex_geom.hpp"
#include "mz/grid.hpp"
#include "mz/operator.hpp"
#include "mz/regularize.hpp"
#include "mz/schedule.hpp"

namespace mz {

/// Axis-aligned box [lo, hi].
struct Box {
  std::vector<double> lo, hi;

  bool contains(std::span<const double> x) const;
  /// Euclidean distance from x to the box (0 inside).
  double distance(std::span<const double> x) const;
  double volume() const;
  Box shrunk(double margin) const;
  /// lo + margin <= other.lo and other.hi <= hi - margin on every axis.
  bool contains_box(const Box& other, double margin) const;
};

/// The node box [origin, origin + (n-1) h].
Box grid_box(const Grid& g);

struct WholeSpaceOptions {
  double alpha = 0.0;  // 0 selects default_alpha(d)
  double C2 = 0.09;
  double C3 = -1.0;
  double C4 = -1.0;
  double C5 = -1.0;
  /// Stop once lambda_i <= lambda_stop; negative selects 1e-8 * |domain|
  /// (equivalently int dist <= 1e-8 |K| |domain|).
  double lambda_stop = -1.0;
  double stage_floor = 1e-6;
  int max_stages = 200;
  int divergence_window = 3;
  SlackModel slack{};
  /// Declared support V of the deviation; enables the V_rho containment check.
  std::optional<Box> support;
};

struct StageReport {
  int index = 0;
  double gamma_i = 0.0;    // physical
  double inflation = 0.0;  // physical, K_i = K_{inflation}
  double K_sup = 0.0;      // |K_i|
  double M_rel = 0.0;      // derivative bound relative to |K_i|
  double theta = 0.0;
  double lambda = 0.0;     // against K_i, normalised by |K_i|
  double lambda_new = 0.0; // against K_{i+1}
  double alpha_emp = 0.0;
  double mu = 0.0;
  double mu_bound = 0.0;
  double dl = 0.0;
  double dl_bound = 0.0;
  std::size_t balls = 0;
  std::size_t candidates = 0;
  std::size_t unresolved = 0;
  bool mu_ok = true;
  bool dl_ok = true;
  bool disjoint = true;
  bool covered = true;

  nlohmann::ordered_json to_json() const;
};

struct TruncationReport {
  Schedule schedule;
  std::vector<StageReport> stages;
  double K_sup = 0.0;
  double M = 0.0;
  double C1 = 0.0;
  double lambda0 = 0.0;
  double lambda_final = 0.0;
  double lambda_stop = 0.0;
  double total_mu = 0.0;           // |{u != g}|
  double sum_mu = 0.0;             // sum of stage mu_i
  double neq_bound = 0.0;          // C4 lambda ((1+C1 M)|K|/gamma)^(d+1) e^(2(d+1) C2 (1+C1 M))
  double sup_dist_K = 0.0;         // max dist(Bg, K)
  double sup_dist_gamma_bar = 0.0; // max dist(Bg, K_gamma_bar)
  double gamma_bar = 0.0;          // physical
  double dl_final = 0.0;
  double dl_bound = 0.0;           // M |K| + gamma
  double dl_slack = 0.0;
  std::string stop_reason;
  bool support_tracked = false;
  double rho = 0.0;
  std::size_t outside_support = 0;
  double wall_clock = 0.0;

  bool stages_ok() const;
  nlohmann::ordered_json to_json() const;
};

struct TruncationResult {
  GridField g;
  std::vector<std::uint8_t> modified;  // u != g
  TruncationReport report;
};

/// Iterated sweeps with K_{i+1} = (K_i)_{gamma_i}. gamma is physical; M is
/// the derivative bound relative to |K|. Throws DivergenceError after
/// `divergence_window` consecutive sweeps that do not lower lambda against
/// the stage body.
TruncationResult truncate_whole_space(const GridField& u, const InflatedBody& K, double gamma, double M,
                                      const HomogeneousOperator& op, const WholeSpaceOptions& options = {});
TruncationResult truncate_whole_space(const GridField& u, const ConvexBody& K, double gamma, double M,
                                      const HomogeneousOperator& op, const WholeSpaceOptions& options = {});

/// Quintic-smoothstep cutoff: 1 on V shrunk by `width`, 0 outside V.
struct Cutoff {
  Box V;
  double width = 0.0;
  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, double* out) const;
  /// Full Hessian, row-major d x d.
  void hessian(std::span<const double> x, double* out) const;
};

struct DomainTruncationConfig {
  GridField u0;
  Box U;
  Box V;
  /// Cutoff transition width; values below 10 h are raised to 10 h.
  double cutoff_width = 0.0;
  double gamma = 0.0;
  /// Tolerance for the Bu0 in K check.
  double u0_tolerance = 1e-8;
  WholeSpaceOptions whole_space{};
};

struct RemainderCheck {
  std::size_t nodes = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;  // max over nodes of |R| - bound (negative if slack unused)
  double slack = 0.0;
  double sup_bound = 0.0;   // max over nodes of 2|Dv||Dphi| + |v||D^2 phi|
  bool ok() const { return violations == 0; }
};

struct DomainReport {
  TruncationReport inner;
  double cutoff_width = 0.0;
  double M_blend = 0.0;           // relative derivative bound used for the blend
  double lambda_blend = 0.0;
  double modified_in_U = 0.0;     // |{u_j != w_j} cap U|
  double modified_total = 0.0;    // |{u_j != w_j}|
  std::size_t leaked_nodes = 0;   // truncation edits outside U, reset to u0
  bool outside_U_exact = false;   // w == u0 bitwise outside U
  double sup_dist_K = 0.0;        // max dist(Bw, K) over the grid
  RemainderCheck remainder;       // l = 2 only
  nlohmann::ordered_json to_json() const;
};

struct DomainResult {
  GridField w;
  DomainReport report;
};

/// w_j = phi u_j + (1 - phi) u0, truncated with declared support V, then
/// reset to u0 outside U. Throws InvalidArgument on broken nesting
/// V cc U cc grid box or when Bu0 leaves K beyond tolerance.
DomainResult truncate_domain(const GridField& uj, const DomainTruncationConfig& config, const InflatedBody& K,
                             double M, const HomogeneousOperator& op);
DomainResult truncate_domain(const GridField& uj, const DomainTruncationConfig& config, const ConvexBody& K,
                             double M, const HomogeneousOperator& op);

/// Pointwise l = 2 blend check: |D^2 w - phi D^2 u - (1-phi) D^2 u0| against
/// 2 |D(u - u0)||D phi| + |u - u0||D^2 phi| + slack at interior nodes.
RemainderCheck blend_remainder_check(const GridField& uj, const GridField& u0, const Cutoff& phi,
                                     const SlackModel& slack, double scale);

/// Nested boxes for an exhaustion of the grid box: U_j leaves a margin of
/// base_margin * 2^-j (at least min_margin) and V_j sits inside U_j by band.
std::pair<Box, Box> exhaustion_boxes(const Grid& g, int j, double base_margin, double min_margin, double band);

struct ModulusEntry {
  double eps = 0.0;    // d_H(K_x, K_y) <= eps ...
  double delta = 0.0;  // ... whenever |x - y| <= delta
};

struct VaryingKConfig {
  std::function<ConvexBody(std::span<const double>)> K_map;
  double eta = 0.0;
  std::vector<ModulusEntry> modulus;
  GridField u0;
  /// Per-cube nesting as fractions of the cube side.
  double u_margin = 0.1;
  double v_margin = 0.2;
  double cutoff_width = 0.0;
  /// gamma for level i is min(1/i, gamma_cap_fraction * C2 (1 + C1 M/eta) |K_x|).
  double gamma_cap_fraction = 0.9;
  WholeSpaceOptions whole_space{};
};

struct CubeReport {
  std::vector<double> lo, hi;
  std::vector<double> x_center;
  double inflation = 0.0;
  double gamma = 0.0;
  double M_rel = 0.0;
  double modified = 0.0;
  double sup_dist_local = 0.0;
  nlohmann::ordered_json to_json() const;
};

struct LevelReport {
  int level = 0;
  int N = 0;                    // cube side 2^-N
  double eps_entry = 0.0;
  double delta_entry = 0.0;
  std::vector<CubeReport> cubes;
  double modified = 0.0;        // |{u_j != w_j}|
  double sup_dist = 0.0;        // max_x dist(Bw_j(x), K_x)
  double bound = 0.0;           // (2 + |Omega|) / i
  double slack = 0.0;
  bool band_consistent = true;  // neighbouring cubes equal u0 on shared bands
  bool ok() const { return sup_dist <= bound + slack; }
  nlohmann::ordered_json to_json() const;
};

struct VaryingKResult {
  GridField w;
  LevelReport report;
};

/// Level-i construction: dyadic cubes of side 2^-N_i, per-cube domain
/// truncation against (K_{x_n})_{|Omega| eps}, stitched onto u0.
VaryingKResult truncate_varying_K_level(const GridField& uj, const VaryingKConfig& config, double M,
                                        const HomogeneousOperator& op, int level);

/// Smallest dyadic depth with sqrt(d) 2^-N <= delta of the coarsest table
/// entry whose eps <= 1/level. Throws InvalidArgument if none qualifies.
std::pair<int, ModulusEntry> dyadic_depth(const std::vector<ModulusEntry>& table, int dim, int level);

/// j_i ladder: for each level i, the least j from which on both the modified
/// measure and the sup distance (to the inflated cube bodies) stay <= 1/i.
/// Table rows are levels, columns j = 0..J-1. Returns -1 for levels never met.
std::vector<int> ladder_indices(const std::vector<std::vector<double>>& modified,
                                const std::vector<std::vector<double>>& sup_dist);

}  // namespace mz
