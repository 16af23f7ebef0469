#include "mz/profile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mz/errors.hpp"

namespace mz {

RadialProfile::RadialProfile(double epsilon, double r) : epsilon_(epsilon), r_(r) {
  if (!(epsilon > 0.0) || !(epsilon < 0.1)) throw InvalidArgument("profile epsilon must lie in (0, 1/10)");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("profile radius must be positive");
}

double RadialProfile::unit(double s) const {
  const double e = epsilon_;
  if (s <= 0.625) return e;
  if (s <= 0.75) return e - 32.0 * e * (s - 0.625) * (s - 0.625);
  if (s < 0.875) return 32.0 * e * (0.875 - s) * (0.875 - s);
  return 0.0;
}

double RadialProfile::unit_slope(double s) const {
  const double e = epsilon_;
  if (s <= 0.625) return 0.0;
  if (s <= 0.75) return -64.0 * e * (s - 0.625);
  if (s < 0.875) return -64.0 * e * (0.875 - s);
  return 0.0;
}

double RadialProfile::unit_curvature(double s) const {
  const double e = epsilon_;
  if (s <= 0.625) return 0.0;
  if (s <= 0.75) return -64.0 * e;
  if (s < 0.875) return 64.0 * e;
  return 0.0;
}

ProfileCertificate RadialProfile::certify(int samples) const {
  ProfileCertificate c;
  c.epsilon = epsilon_;
  c.samples = samples;
  c.slope_bound = 9.0 * epsilon_;
  c.curvature_bound = 65.0 * epsilon_;
  const double ds = 1.0 / (samples - 1);
  std::vector<double> v(samples);
  for (int i = 0; i < samples; ++i) v[i] = unit(i * ds);
  c.plateau_ok = c.range_ok = c.tail_ok = true;
  for (int i = 0; i < samples; ++i) {
    const double s = i * ds;
    if (s <= 0.625 && v[i] != epsilon_) c.plateau_ok = false;
    if (s < 0.875 && !(v[i] > 0.0 && v[i] <= epsilon_)) c.range_ok = false;
    if (s >= 0.875 && v[i] != 0.0) c.tail_ok = false;
  }
  for (int i = 0; i + 1 < samples; ++i) c.max_slope = std::max(c.max_slope, std::abs(v[i + 1] - v[i]) / ds);
  for (int i = 1; i + 1 < samples; ++i)
    c.max_curvature = std::max(c.max_curvature, std::abs(v[i + 1] - 2.0 * v[i] + v[i - 1]) / (ds * ds));
  return c;
}

RadialProfile make_profile(double epsilon, double r) { return RadialProfile(epsilon, r); }

}  // namespace mz
