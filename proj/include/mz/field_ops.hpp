#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mz/convex_geom.hpp"
#include "mz/grid.hpp"
#include "mz/operator.hpp"
#include "mz/profile.hpp"

namespace mz {

/// Finite-difference partial derivative d_alpha of component c at a node
/// (|alpha| <= 2). Central second-order stencils in the interior and along
/// periodic axes; one-sided second-order stencils at non-periodic ends.
double derivative_at(const GridField& u, int c, const int* multi, const MultiIndex& alpha);

/// (B u)(x) at one node; `out` receives op.out_components values.
void apply_operator_at(const HomogeneousOperator& op, const GridField& u, const int* multi, double* out);

/// B u on every node.
GridField apply_operator(const HomogeneousOperator& op, const GridField& u);

/// Frobenius norm of the D^l u tensor at a node (all components, all ordered
/// derivative index tuples).
double derivative_norm_at(const GridField& u, int l, const int* multi);

/// True unless the node lies on a non-periodic boundary face.
bool is_interior(const Grid& g, const int* multi);

/// max over interior nodes of derivative_norm_at.
double sup_norm_derivative(const GridField& u, int l);

/// Integer lattice offsets sorted by squared length, for discrete balls
/// centred at nodes.
class BallOffsets {
 public:
  BallOffsets(int dim, double max_radius_in_cells);
  int dim() const noexcept { return dim_; }
  double max_radius() const noexcept { return max_radius_; }
  /// Number of offsets with |o| <= radius_in_cells.
  std::size_t count_within(double radius_in_cells) const;
  const int* offset(std::size_t i) const { return offsets_.data() + i * dim_; }

 private:
  int dim_;
  double max_radius_;
  std::vector<int> offsets_;
  std::vector<long> norms2_;
};

/// Mean of u over grid nodes y with |y - center| <= r; out-of-range nodes
/// are mapped by the grid boundary rule. Throws InvalidArgument if r < h.
std::vector<double> ball_average(const GridField& u, std::span<const double> center, double r);

/// Node-centred variant used by the mollifier.
void ball_average_at(const GridField& u, const int* multi, double r, const BallOffsets& offsets, double* out);

/// Whether the closed ball B_r(a) lies inside the node box (always true along
/// periodic axes when r is below half the period).
bool ball_inside(const Grid& g, std::span<const double> a, double r);

/// Writes the variable-radius average of src into dst over B_{7r/8}(a); dst
/// is untouched elsewhere. Returns the number of nodes whose value changed.
std::size_t mollify_region(const GridField& src, GridField& dst, std::span<const double> a, double r,
                           const RadialProfile& profile);

/// u~ = average over B_{rho(x)}(x) for |x - a| < 7r/8 and rho(x) >= h,
/// u otherwise. Throws InvalidArgument if B_r(a) leaves the grid.
GridField variable_mollify(const GridField& u, std::span<const double> a, double r, const RadialProfile& profile);

/// Pointwise dist(f(x), K_gamma) for every node.
std::vector<double> dist_field(const GridField& f, const InflatedBody& body);

struct L1Dist {
  double raw = 0.0;     // h^d * sum dist(f(x), K)
  double lambda = 0.0;  // raw / |K|
};

/// Pairwise-summed L1 distance of f to K. Throws InvalidArgument if |K| = 0.
L1Dist l1_dist_integral(const GridField& f, const ConvexBody& body);
L1Dist l1_dist_integral(const GridField& f, const InflatedBody& body, double normaliser);

}  // namespace mz
