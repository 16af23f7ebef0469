#pragma once

namespace mz {

struct ProfileCertificate {
  double epsilon = 0.0;
  int samples = 0;
  double max_slope = 0.0;      // max |rho'| from first differences
  double max_curvature = 0.0;  // max |rho''| from second differences
  double slope_bound = 0.0;    // 9 eps
  double curvature_bound = 0.0;  // 65 eps
  bool plateau_ok = false;     // rho = eps on [0, 5/8]
  bool range_ok = false;       // 0 < rho <= eps on [0, 7/8)
  bool tail_ok = false;        // rho = 0 on [7/8, 1]
  bool passed() const {
    return plateau_ok && range_ok && tail_ok && max_slope <= slope_bound && max_curvature <= curvature_bound;
  }
};

/// Mollification radius on the unit ball: eps on [0, 5/8], two quadratic
/// arcs meeting at (3/4, eps/2), and 0 from 7/8 on (closed convention).
/// Slope is at most 8 eps, curvature 64 eps in absolute value.
class RadialProfile {
 public:
  /// Throws InvalidArgument unless 0 < eps < 1/10 and r > 0.
  RadialProfile(double epsilon, double r);

  double epsilon() const noexcept { return epsilon_; }
  double r() const noexcept { return r_; }

  double unit(double s) const;
  double unit_slope(double s) const;
  double unit_curvature(double s) const;
  /// Physical radius r * rho(dist / r) at distance `dist` from the center.
  double radius_at(double dist) const { return r_ * unit(dist / r_); }

  ProfileCertificate certify(int samples = 100000) const;

 private:
  double epsilon_;
  double r_;
};

RadialProfile make_profile(double epsilon, double r);

}  // namespace mz
