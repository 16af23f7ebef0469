#include "mz/convex_geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mz/errors.hpp"

namespace mz {

ConvexBody ConvexBody::ball(Point center, double radius) {
  if (center.size() == 0) throw InvalidBody("ball center must have positive dimension");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidBody("ball radius must be finite and nonnegative");
  if (!center.allFinite()) throw InvalidBody("ball center must be finite");
  return ConvexBody(Ball{std::move(center), radius});
}

ConvexBody ConvexBody::polytope(std::vector<Point> vertices) {
  if (vertices.empty()) throw InvalidBody("vpolytope needs at least one vertex");
  const auto k = vertices.front().size();
  if (k == 0) throw InvalidBody("vpolytope vertices must have positive dimension");
  for (const auto& v : vertices) {
    if (v.size() != k) throw InvalidBody("vpolytope vertices have mixed dimensions");
    if (!v.allFinite()) throw InvalidBody("vpolytope vertex is not finite");
  }
  return ConvexBody(VPolytope{std::move(vertices)});
}

ConvexBody::Kind ConvexBody::kind() const noexcept {
  return std::holds_alternative<Ball>(shape_) ? Kind::kBall : Kind::kVPolytope;
}

int ConvexBody::dim() const noexcept {
  if (auto b = std::get_if<Ball>(&shape_)) return static_cast<int>(b->center.size());
  return static_cast<int>(std::get<VPolytope>(shape_).vertices.front().size());
}

const Ball& ConvexBody::as_ball() const {
  if (auto b = std::get_if<Ball>(&shape_)) return *b;
  throw InvalidArgument("body is not a ball");
}

const VPolytope& ConvexBody::as_polytope() const {
  if (auto p = std::get_if<VPolytope>(&shape_)) return *p;
  throw InvalidArgument("body is not a vpolytope");
}

bool ConvexBody::operator==(const ConvexBody& other) const {
  if (kind() != other.kind() || dim() != other.dim()) return false;
  if (kind() == Kind::kBall) {
    return as_ball().radius == other.as_ball().radius && as_ball().center == other.as_ball().center;
  }
  const auto& a = as_polytope().vertices;
  const auto& b = other.as_polytope().vertices;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

double sup_norm(const ConvexBody& body) {
  if (body.kind() == ConvexBody::Kind::kBall) {
    const auto& b = body.as_ball();
    return b.center.norm() + b.radius;
  }
  double best = 0.0;
  for (const auto& v : body.as_polytope().vertices) best = std::max(best, v.norm());
  return best;
}

namespace {

void check_dim(const ConvexBody& body, const Point& p) {
  if (p.size() != body.dim()) throw InvalidArgument("query point dimension does not match the body");
}

// Minimum-norm point of conv{P_0..P_{n-1}} (Wolfe). Columns of P are points.
// Returns barycentric weights; throws on budget exhaustion.
Eigen::VectorXd min_norm_point(const Eigen::MatrixXd& P, double tol, int max_iter) {
  const int n = static_cast<int>(P.cols());
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
  int start = 0;
  P.colwise().squaredNorm().minCoeff(&start);
  std::vector<int> active{start};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd x = P.col(start);
  double gap = 0.0;

  auto rebuild_x = [&] {
    x.setZero();
    for (std::size_t i = 0; i < active.size(); ++i) x += lambda[i] * P.col(active[i]);
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    const double xx = x.squaredNorm();
    const double xn = std::sqrt(xx);
    if (xn <= tol) {
      gap = 0.0;
      break;
    }
    Eigen::VectorXd dots = P.transpose() * x;
    int j = 0;
    const double best = dots.minCoeff(&j);
    gap = xx - best;
    if (gap <= tol * xn) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < max_iter; ++minor) {
      const int s = static_cast<int>(active.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
      for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) kkt(a, b) = P.col(active[a]).dot(P.col(active[b]));
        kkt(a, s) = 1.0;
        kkt(s, a) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      rhs(s) = 1.0;
      Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      Eigen::VectorXd mu = sol.head(s);
      mu /= mu.sum();
      if (mu.minCoeff() > 0.0) {
        for (int a = 0; a < s; ++a) lambda[a] = mu(a);
        rebuild_x();
        break;
      }
      double step = 1.0;
      for (int a = 0; a < s; ++a) {
        if (mu(a) <= 0.0) {
          const double denom = lambda[a] - mu(a);
          if (denom > 0.0) step = std::min(step, lambda[a] / denom);
        }
      }
      for (int a = 0; a < s; ++a) lambda[a] = (1.0 - step) * lambda[a] + step * mu(a);
      std::vector<int> keep_idx;
      std::vector<double> keep_lambda;
      for (int a = 0; a < s; ++a) {
        if (lambda[a] > 1e-15) {
          keep_idx.push_back(active[a]);
          keep_lambda.push_back(lambda[a]);
        }
      }
      if (keep_idx.empty()) {
        keep_idx.push_back(active.back());
        keep_lambda.push_back(1.0);
      }
      double total = 0.0;
      for (double l : keep_lambda) total += l;
      for (double& l : keep_lambda) l /= total;
      active = std::move(keep_idx);
      lambda = std::move(keep_lambda);
      rebuild_x();
    }
    if (iter + 1 == max_iter) throw NumericFailure("minimum-norm-point iteration did not converge", gap);
  }
  for (std::size_t i = 0; i < active.size(); ++i) weights(active[i]) = lambda[i];
  return weights;
}

}  // namespace

DistanceResult project(const ConvexBody& body, const Point& p, const ProjectionOptions& options) {
  check_dim(body, p);
  if (body.kind() == ConvexBody::Kind::kBall) {
    const auto& b = body.as_ball();
    const Point diff = p - b.center;
    const double n = diff.norm();
    if (n <= b.radius) return {0.0, p};
    return {n - b.radius, b.center + diff * (b.radius / n)};
  }
  const auto& verts = body.as_polytope().vertices;
  const int n = static_cast<int>(verts.size());
  Eigen::MatrixXd P(p.size(), n);
  for (int i = 0; i < n; ++i) P.col(i) = verts[i] - p;
  const double scale = P.colwise().norm().maxCoeff();
  if (scale == 0.0) return {0.0, p};
  P /= scale;
  const int budget = options.max_iterations > 0 ? options.max_iterations : std::max(10 * n * n, 10);
  const Eigen::VectorXd w = min_norm_point(P, options.tolerance, budget);
  Point foot = Point::Zero(p.size());
  for (int i = 0; i < n; ++i) foot += w(i) * verts[i];
  return {(foot - p).norm(), foot};
}

double distance(const ConvexBody& body, const Point& p) {
  if (body.kind() == ConvexBody::Kind::kBall) {
    check_dim(body, p);
    const auto& b = body.as_ball();
    return std::max(0.0, (p - b.center).norm() - b.radius);
  }
  return project(body, p).distance;
}

double inflated_distance(const ConvexBody& body, double gamma, const Point& p) {
  if (!(gamma >= 0.0)) throw InvalidArgument("inflation radius must be nonnegative");
  return std::max(0.0, distance(body, p) - gamma);
}

int ball_boundary_samples(int dim) {
  if (dim == 1) return 2;
  if (dim == 2) return 4096;
  return 16384;
}

namespace {

std::vector<Point> sphere_directions(int dim) {
  const int n = ball_boundary_samples(dim);
  std::vector<Point> dirs;
  dirs.reserve(n);
  if (dim == 1) {
    dirs.push_back(Point::Constant(1, 1.0));
    dirs.push_back(Point::Constant(1, -1.0));
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * std::numbers::pi * i / n;
      Point u(2);
      u << std::cos(t), std::sin(t);
      dirs.push_back(u);
    }
  } else if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double rr = std::sqrt(1.0 - z * z);
      Point u(3);
      u << rr * std::cos(golden * i), rr * std::sin(golden * i), z;
      dirs.push_back(u);
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    for (int i = 0; i < n; ++i) {
      Point u(dim);
      for (int k = 0; k < dim; ++k) u(k) = g(rng);
      dirs.push_back(u.normalized());
    }
  }
  return dirs;
}

// max_{a in A} dist(a, B)
double excess(const ConvexBody& a, const ConvexBody& b) {
  if (a.kind() == ConvexBody::Kind::kVPolytope) {
    double e = 0.0;
    for (const auto& v : a.as_polytope().vertices) e = std::max(e, distance(b, v));
    return e;
  }
  const auto& ball = a.as_ball();
  if (b.kind() == ConvexBody::Kind::kBall) {
    const auto& other = b.as_ball();
    return std::max(0.0, (ball.center - other.center).norm() + ball.radius - other.radius);
  }
  double e = distance(b, ball.center);
  if (ball.radius == 0.0) return e;
  for (const auto& u : sphere_directions(a.dim())) e = std::max(e, distance(b, ball.center + ball.radius * u));
  return e;
}

}  // namespace

double hausdorff(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("hausdorff: bodies live in different dimensions");
  if (a.kind() == ConvexBody::Kind::kBall && b.kind() == ConvexBody::Kind::kBall) {
    const auto& x = a.as_ball();
    const auto& y = b.as_ball();
    return (x.center - y.center).norm() + std::abs(x.radius - y.radius);
  }
  return std::max(excess(a, b), excess(b, a));
}

double InflatedBody::distance(const Point& p) const {
  return std::max(0.0, mz::distance(body, p) - inflation);
}

double InflatedBody::distance(const double* p) const {
  const int k = body.dim();
  if (body.kind() == ConvexBody::Kind::kBall) {
    const auto& b = body.as_ball();
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      const double t = p[i] - b.center(i);
      s += t * t;
    }
    return std::max(0.0, std::sqrt(s) - b.radius - inflation);
  }
  return distance(Eigen::Map<const Point>(p, k));
}

double InflatedBody::sup_norm() const { return mz::sup_norm(body) + inflation; }

InflatedBody InflatedBody::inflated(double gamma) const {
  if (!(gamma >= 0.0)) throw InvalidArgument("inflation radius must be nonnegative");
  return {body, inflation + gamma};
}

ConvexBody body_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    auto to_point = [](const nlohmann::json& a) {
      std::vector<double> v = a.get<std::vector<double>>();
      return Point(Eigen::Map<Point>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    if (kind == "ball") return ConvexBody::ball(to_point(j.at("center")), j.at("radius").get<double>());
    if (kind == "vpolytope") {
      std::vector<Point> verts;
      for (const auto& v : j.at("vertices")) verts.push_back(to_point(v));
      return ConvexBody::polytope(std::move(verts));
    }
    throw FormatError("unknown body kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed convex body: ") + e.what());
  }
}

nlohmann::ordered_json body_to_json(const ConvexBody& body) {
  nlohmann::ordered_json j;
  auto arr = [](const Point& p) { return std::vector<double>(p.data(), p.data() + p.size()); };
  if (body.kind() == ConvexBody::Kind::kBall) {
    j["kind"] = "ball";
    j["center"] = arr(body.as_ball().center);
    j["radius"] = body.as_ball().radius;
  } else {
    j["kind"] = "vpolytope";
    auto verts = nlohmann::ordered_json::array();
    for (const auto& v : body.as_polytope().vertices) verts.push_back(arr(v));
    j["vertices"] = verts;
  }
  return j;
}

}  // namespace mz
