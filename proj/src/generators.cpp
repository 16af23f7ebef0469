#include "mz/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mz/errors.hpp"
#include "mz/field_ops.hpp"
#include "mz/numerics.hpp"

namespace mz {

std::string family_name(Family f) {
  switch (f) {
    case Family::kSpikeTrain: return "spike_train";
    case Family::kOscillation: return "oscillation";
    case Family::kShearLayer: return "shear_layer";
  }
  return "";
}

Family family_from_name(const std::string& name) {
  if (name == "spike_train") return Family::kSpikeTrain;
  if (name == "oscillation") return Family::kOscillation;
  if (name == "shear_layer") return Family::kShearLayer;
  throw InvalidArgument("unknown generator family '" + name + "'");
}

namespace {

double bump(double s) {
  if (s >= 1.0) return 0.0;
  const double t = 1.0 - s * s;
  return t * t * t * t;
}

// Smooth window: 1 on [lo + ramp, hi - ramp], 0 outside [lo, hi].
double window(double x, double lo, double hi, double ramp) {
  auto step = [](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  };
  return step((x - lo) / ramp) * step((hi - x) / ramp);
}

Box support_of(const GeneratorSpec& s) {
  if (s.support) return *s.support;
  const Box b = grid_box(s.grid);
  double side = b.hi[0] - b.lo[0];
  for (int a = 1; a < s.grid.dim; ++a) side = std::min(side, b.hi[a] - b.lo[a]);
  return b.shrunk(0.25 * side);
}

std::vector<double> direction_of(const GeneratorSpec& s) {
  std::vector<double> v = s.direction;
  if (v.empty()) {
    v.assign(s.op.in_components, 0.0);
    v[0] = 1.0;
  }
  if (static_cast<int>(v.size()) != s.op.in_components) throw InvalidArgument("direction length must equal the input component count");
  double n = 0.0;
  for (double t : v) n += t * t;
  if (!(n > 0.0)) throw InvalidArgument("direction must be nonzero");
  for (double& t : v) t /= std::sqrt(n);
  return v;
}

// Unit-amplitude profile b; shape depends on the family.
GridField base_profile(const GeneratorSpec& s) {
  const Grid& g = s.grid;
  const int d = g.dim;
  const int l = s.op.order;
  const auto dir = direction_of(s);
  GridField b(g, s.op.in_components);
  const double wl = std::pow(s.width, l);
  int multi[5];
  std::vector<double> x(d);
  if (s.family == Family::kSpikeTrain) {
    const auto centres = spike_centres(s);
    for (std::size_t i = 0; i < b.nodes(); ++i) {
      g.unravel(i, multi);
      for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
      double v = 0.0;
      for (const auto& c : centres) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
        v += bump(std::sqrt(r2) / s.width);
      }
      for (int k = 0; k < b.components; ++k) b(i, k) = wl * v * dir[k];
    }
  } else {
    const Box sup = support_of(s);
    const double mid = 0.5 * (sup.lo[d - 1] + sup.hi[d - 1]);
    const double ramp = std::max(4.0 * s.width, 4.0 * g.spacing);
    for (std::size_t i = 0; i < b.nodes(); ++i) {
      g.unravel(i, multi);
      double w = 1.0;
      for (int a = 0; a < d - 1; ++a) w *= window(g.coord(a, multi[a]), sup.lo[a], sup.hi[a], ramp);
      const double v = w * bump(std::abs(g.coord(d - 1, multi[d - 1]) - mid) / s.width);
      for (int k = 0; k < b.components; ++k) b(i, k) = wl * v * dir[k];
    }
  }
  return b;
}

}  // namespace

std::vector<std::vector<double>> spike_centres(const GeneratorSpec& s) {
  const int d = s.grid.dim;
  const Box sup = support_of(s).shrunk(s.width);
  for (int a = 0; a < d; ++a)
    if (sup.lo[a] > sup.hi[a]) throw InvalidArgument("support box too small for the spike width");
  std::mt19937_64 rng(s.seed);
  std::vector<std::vector<double>> out;
  for (int k = 0; k < s.spikes; ++k) {
    std::vector<double> c(d);
    for (int a = 0; a < d; ++a) {
      std::uniform_real_distribution<double> u(sup.lo[a], sup.hi[a]);
      c[a] = s.spikes == 1 ? 0.5 * (sup.lo[a] + sup.hi[a]) : u(rng);
    }
    out.push_back(std::move(c));
  }
  return out;
}

Generated generate_sequence(const GeneratorSpec& s, int j) {
  s.op.validate();
  if (j < 0) throw InvalidArgument("sequence index must be nonnegative");
  if (s.op.dim != s.grid.dim) throw InvalidArgument("operator and grid dimensions differ");
  const double Ks = sup_norm(s.K);
  if (!(Ks > 0.0)) throw InvalidArgument("|K| must be positive");
  const InflatedBody K{s.K, 0.0};
  const double hd = s.grid.cell_volume();
  Generated out;

  if (s.family == Family::kOscillation) {
    if (s.op.in_components != 1) throw InvalidArgument("oscillation family needs a scalar input");
    const Grid& g = s.grid;
    const int d = g.dim;
    const Box sup = support_of(s);
    const double ramp = std::max(4.0 * s.width, 4.0 * g.spacing);
    const double P = s.period0 * std::pow(2.0, -j);
    out.u = GridField(g, 1);
    out.bad_set.assign(g.nodes(), 0);
    int multi[5];
    for (std::size_t i = 0; i < g.nodes(); ++i) {
      g.unravel(i, multi);
      double w = 1.0;
      bool inner = true;
      for (int a = 0; a < d; ++a) {
        const double x = g.coord(a, multi[a]);
        w *= window(x, sup.lo[a], sup.hi[a], ramp);
        if (x < sup.lo[a] + ramp + g.spacing || x > sup.hi[a] - ramp - g.spacing) inner = false;
      }
      const double t = (g.coord(0, multi[0]) - sup.lo[0]) / P;
      const double tri = P * std::abs(t - std::round(t));
      out.u(i, 0) = s.slope * tri * w;
      out.bad_set[i] = (!inner && w > 0.0) ? 1 : 0;
    }
    // Stencil reach: flag neighbours of the ramp too.
    std::vector<std::uint8_t> grown = out.bad_set;
    for (std::size_t i = 0; i < g.nodes(); ++i) {
      if (!out.bad_set[i]) continue;
      g.unravel(i, multi);
      for (int a = 0; a < d; ++a)
        for (int off : {-1, 1}) {
          int m2[5];
          std::copy(multi, multi + d, m2);
          m2[a] = std::clamp(multi[a] + off, 0, g.shape[a] - 1);
          grown[g.ravel(m2)] = 1;
        }
    }
    out.bad_set = std::move(grown);
    out.amplitude = s.slope;
    out.lambda_measured = l1_dist_integral(apply_operator(s.op, out.u), K, Ks).lambda;
    out.dl = sup_norm_derivative(out.u, s.op.order);
    if (out.dl > s.M * Ks * (1.0 + 1e-12))
      throw InvalidArgument("oscillation violates the declared derivative bound");
    return out;
  }

  const GridField b = base_profile(s);
  const GridField bb = apply_operator(s.op, b);
  // Nodes where B b is nonzero, for cheap evaluation of lambda(a).
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < bb.nodes(); ++i)
    for (int k = 0; k < bb.components; ++k)
      if (bb(i, k) != 0.0) {
        live.push_back(i);
        break;
      }
  std::vector<double> buf(live.size()), p(bb.components);
  auto lambda_of = [&](double a) {
    for (std::size_t n = 0; n < live.size(); ++n) {
      const double* v = bb.at(live[n]);
      for (int k = 0; k < bb.components; ++k) p[k] = a * v[k];
      buf[n] = K.distance(p.data());
    }
    return pairwise_sum(buf) * hd / Ks;
  };
  const double dlb = sup_norm_derivative(b, s.op.order);
  if (!(dlb > 0.0)) throw InvalidArgument("generator profile is not resolved by the grid");
  const double a_max = s.M * Ks / dlb;
  const double target = s.lambda0 * std::pow(s.ratio, j);
  if (lambda_of(a_max) < target)
    throw InvalidArgument("lambda_" + std::to_string(j) + " = " + std::to_string(target) +
                          " is out of reach under the derivative bound M");
  double lo = 0.0, hi = a_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = lambda_of(mid);
    if (v < target)
      lo = mid;
    else
      hi = mid;
    if (std::abs(v - target) <= 1e-6 * target) break;
  }
  out.amplitude = hi;
  out.u = b;
  for (double& v : out.u.data) v *= out.amplitude;
  out.lambda_target = target;
  out.lambda_measured = l1_dist_integral(apply_operator(s.op, out.u), K, Ks).lambda;
  out.dl = sup_norm_derivative(out.u, s.op.order);
  if (out.dl > s.M * Ks * (1.0 + 1e-12))
    throw InvalidArgument("generated field violates the declared derivative bound");
  return out;
}

}  // namespace mz
