#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "json.hpp"

namespace mz {

using Point = Eigen::VectorXd;

struct Ball {
  Point center;
  double radius = 0.0;
};

/// Convex hull of a finite, nonempty vertex list.
struct VPolytope {
  std::vector<Point> vertices;
};

/// Compact convex target set K, either a closed ball or a vertex polytope.
class ConvexBody {
 public:
  enum class Kind { kBall, kVPolytope };

  static ConvexBody ball(Point center, double radius);
  static ConvexBody polytope(std::vector<Point> vertices);

  Kind kind() const noexcept;
  int dim() const noexcept;
  const Ball& as_ball() const;
  const VPolytope& as_polytope() const;

  bool operator==(const ConvexBody& other) const;

 private:
  explicit ConvexBody(std::variant<Ball, VPolytope> shape) : shape_(std::move(shape)) {}
  std::variant<Ball, VPolytope> shape_;
};

struct DistanceResult {
  double distance = 0.0;
  Point foot_point;
};

struct ProjectionOptions {
  /// Stopping tolerance of the minimum-norm-point iteration, measured in the
  /// frame where the translated vertices have unit maximal norm.
  double tolerance = 1e-10;
  /// 0 selects the default budget of 10 * (vertex count)^2 major iterations.
  int max_iterations = 0;
};

/// |K|_inf = max{|A| : A in K}.
double sup_norm(const ConvexBody& body);

/// Euclidean distance to K and a nearest point of K. Polytopes use Wolfe's
/// minimum-norm-point algorithm on the translated vertex set; throws
/// NumericFailure (carrying the final duality gap) if it runs out of budget.
DistanceResult project(const ConvexBody& body, const Point& p, const ProjectionOptions& options = {});

/// dist(p, K); the same as project(body, p).distance.
double distance(const ConvexBody& body, const Point& p);

/// dist(p, K_gamma) for the inflation K_gamma = {z : dist(z, K) <= gamma}.
/// For convex K this equals (dist(p, K) - gamma)^+.
double inflated_distance(const ConvexBody& body, double gamma, const Point& p);

/// Boundary sample counts for ball/polytope Hausdorff distances.
int ball_boundary_samples(int dim);

/// Hausdorff distance. Polytope excesses are maximised over vertices; the
/// ball/ball case is closed form; a ball's excess over a polytope is sampled
/// at ball_boundary_samples(dim) boundary directions.
double hausdorff(const ConvexBody& a, const ConvexBody& b);

/// A body together with an inflation radius, i.e. the set K_gamma. Chains of
/// inflations collapse because (K_a)_b = K_{a+b} for convex K.
struct InflatedBody {
  ConvexBody body;
  double inflation = 0.0;

  double distance(const Point& p) const;
  double distance(const double* p) const;
  double sup_norm() const;
  InflatedBody inflated(double gamma) const;
};

ConvexBody body_from_json(const nlohmann::json& j);
nlohmann::ordered_json body_to_json(const ConvexBody& body);

}  // namespace mz
