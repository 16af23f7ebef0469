#include <algorithm>
#include <bit>
#include <cmath>

#include "mz/errors.hpp"
#include "mz/field_ops.hpp"
#include "mz/truncation.hpp"

namespace mz {

namespace {

// phi uj + (1 - phi) u0, exact where phi is 0 or 1 and where uj == u0.
double blend(double p, double uj, double u0) {
  if (p == 0.0) return u0;
  if (p == 1.0) return uj;
  return u0 + p * (uj - u0);
}

// Quintic smoothstep and its derivatives on [0, 1], clamped outside.
double smooth(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double smooth_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}
double smooth_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

// One-axis factor s((x - lo)/w) s((hi - x)/w) with first and second derivatives.
void axis_factor(double x, double lo, double hi, double w, double& f, double& f1, double& f2) {
  const double a = (x - lo) / w, b = (hi - x) / w;
  const double sa = smooth(a), sb = smooth(b);
  const double da = smooth_d1(a) / w, db = -smooth_d1(b) / w;
  const double dda = smooth_d2(a) / (w * w), ddb = smooth_d2(b) / (w * w);
  f = sa * sb;
  f1 = da * sb + sa * db;
  f2 = dda * sb + 2.0 * da * db + sa * ddb;
}

}  // namespace

double Cutoff::value(std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t a = 0; a < V.lo.size(); ++a) {
    double f, f1, f2;
    axis_factor(x[a], V.lo[a], V.hi[a], width, f, f1, f2);
    v *= f;
  }
  return v;
}

void Cutoff::gradient(std::span<const double> x, double* out) const {
  const std::size_t d = V.lo.size();
  std::vector<double> f(d), f1(d), f2(d);
  for (std::size_t a = 0; a < d; ++a) axis_factor(x[a], V.lo[a], V.hi[a], width, f[a], f1[a], f2[a]);
  for (std::size_t a = 0; a < d; ++a) {
    double p = f1[a];
    for (std::size_t b = 0; b < d; ++b)
      if (b != a) p *= f[b];
    out[a] = p;
  }
}

void Cutoff::hessian(std::span<const double> x, double* out) const {
  const std::size_t d = V.lo.size();
  std::vector<double> f(d), f1(d), f2(d);
  for (std::size_t a = 0; a < d; ++a) axis_factor(x[a], V.lo[a], V.hi[a], width, f[a], f1[a], f2[a]);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      double p = 1.0;
      for (std::size_t c = 0; c < d; ++c) {
        if (a == b && c == a)
          p *= f2[c];
        else if (c == a || c == b)
          p *= f1[c];
        else
          p *= f[c];
      }
      out[a * d + b] = p;
    }
  }
}

RemainderCheck blend_remainder_check(const GridField& uj, const GridField& u0, const Cutoff& phi,
                                     const SlackModel& slack, double scale) {
  const Grid& g = uj.grid;
  const int d = g.dim;
  const int m = uj.components;
  GridField w(g, m), v(g, m);
  std::vector<double> x(d);
  int multi[5];
  std::vector<double> phis(uj.nodes());
  for (std::size_t i = 0; i < uj.nodes(); ++i) {
    g.unravel(i, multi);
    for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
    const double p = phi.value(x);
    phis[i] = p;
    for (int c = 0; c < m; ++c) {
      w(i, c) = blend(p, uj(i, c), u0(i, c));
      v(i, c) = uj(i, c) - u0(i, c);
    }
  }
  RemainderCheck chk;
  std::vector<double> excesses;
  std::vector<double> grad(d), hess(d * d);
  for (std::size_t i = 0; i < uj.nodes(); ++i) {
    g.unravel(i, multi);
    if (!is_interior(g, multi)) continue;
    ++chk.nodes;
    for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
    phi.gradient(x, grad.data());
    phi.hessian(x, hess.data());
    double gphi = 0.0, hphi = 0.0;
    for (double t : grad) gphi += t * t;
    for (double t : hess) hphi += t * t;
    gphi = std::sqrt(gphi);
    hphi = std::sqrt(hphi);
    double r2 = 0.0, dv2 = 0.0, v2 = 0.0;
    for (int c = 0; c < m; ++c) {
      v2 += v(i, c) * v(i, c);
      for (int a = 0; a < d; ++a) {
        MultiIndex e(d, 0);
        e[a] = 1;
        const double t = derivative_at(v, c, multi, e);
        dv2 += t * t;
        for (int b = 0; b < d; ++b) {
          MultiIndex ab(d, 0);
          ab[a] += 1;
          ab[b] += 1;
          const double r = derivative_at(w, c, multi, ab) - phis[i] * derivative_at(uj, c, multi, ab) -
                           (1.0 - phis[i]) * derivative_at(u0, c, multi, ab);
          r2 += r * r;
        }
      }
    }
    const double bound = 2.0 * std::sqrt(dv2) * gphi + std::sqrt(v2) * hphi;
    const double excess = std::sqrt(r2) - bound;
    if (chk.nodes == 1 || excess > chk.max_excess) chk.max_excess = excess;
    excesses.push_back(excess);
    chk.sup_bound = std::max(chk.sup_bound, bound);
  }
  // The cutoff width is the length on which the remainder varies.
  chk.slack = slack.at_length(g, phi.width, std::max(scale, chk.sup_bound));
  for (double e : excesses)
    if (e > chk.slack) ++chk.violations;
  return chk;
}

std::pair<Box, Box> exhaustion_boxes(const Grid& g, int j, double base_margin, double min_margin, double band) {
  const Box omega = grid_box(g);
  const double margin = std::max(min_margin, base_margin * std::pow(2.0, -j));
  const Box U = omega.shrunk(margin);
  const Box V = U.shrunk(band);
  return {U, V};
}

nlohmann::ordered_json DomainReport::to_json() const {
  nlohmann::ordered_json j;
  j["cutoff_width"] = cutoff_width;
  j["M_blend"] = M_blend;
  j["lambda_blend"] = lambda_blend;
  j["modified_in_U"] = modified_in_U;
  j["modified_total"] = modified_total;
  j["leaked_nodes"] = leaked_nodes;
  j["outside_U_exact"] = outside_U_exact;
  j["sup_dist_K"] = sup_dist_K;
  nlohmann::ordered_json r;
  r["nodes"] = remainder.nodes;
  r["violations"] = remainder.violations;
  r["max_excess"] = remainder.max_excess;
  r["slack"] = remainder.slack;
  r["sup_bound"] = remainder.sup_bound;
  j["remainder"] = r;
  j["truncation"] = inner.to_json();
  return j;
}

DomainResult truncate_domain(const GridField& uj, const DomainTruncationConfig& cfg, const InflatedBody& K, double M,
                             const HomogeneousOperator& op) {
  const Grid& g = uj.grid;
  const int d = g.dim;
  const int m = uj.components;
  if (!(cfg.u0.grid == g) || cfg.u0.components != m) throw InvalidArgument("u0 must share grid and components with u_j");
  const Box omega = grid_box(g);
  if (!omega.contains_box(cfg.U, g.spacing)) throw InvalidArgument("nesting violated: U is not compactly inside the grid box");
  if (!cfg.U.contains_box(cfg.V, g.spacing)) throw InvalidArgument("nesting violated: V is not compactly inside U");
  const double width = std::max(cfg.cutoff_width, 10.0 * g.spacing);
  for (int a = 0; a < d; ++a)
    if (cfg.V.hi[a] - cfg.V.lo[a] <= 2.0 * width) throw InvalidArgument("V too small for the cutoff width");
  const double Ks = K.sup_norm();

  const GridField bu0 = apply_operator(op, cfg.u0);
  {
    const auto e = dist_field(bu0, K);
    const double worst = e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
    if (worst > cfg.u0_tolerance * std::max(1.0, Ks))
      throw InvalidArgument("B u0 is not in K (max distance " + std::to_string(worst) + ")");
  }

  const Cutoff phi{cfg.V, width};
  GridField w(g, m);
  std::vector<double> x(d);
  int multi[5];
  for (std::size_t i = 0; i < uj.nodes(); ++i) {
    g.unravel(i, multi);
    for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
    const double p = phi.value(x);
    for (int c = 0; c < m; ++c) w(i, c) = blend(p, uj(i, c), cfg.u0(i, c));
  }

  DomainResult res;
  DomainReport& rep = res.report;
  rep.cutoff_width = width;
  rep.M_blend = std::max(M, sup_norm_derivative(w, op.order) / Ks);
  rep.lambda_blend = l1_dist_integral(apply_operator(op, w), K, Ks).lambda;

  WholeSpaceOptions opts = cfg.whole_space;
  opts.support = cfg.V;
  TruncationResult tr = truncate_whole_space(w, K, cfg.gamma, rep.M_blend, op, opts);
  rep.inner = std::move(tr.report);
  GridField out = std::move(tr.g);

  for (std::size_t i = 0; i < uj.nodes(); ++i) {
    g.unravel(i, multi);
    for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
    if (cfg.U.contains(x)) continue;
    bool leaked = false;
    for (int c = 0; c < m; ++c) {
      if (out(i, c) != cfg.u0(i, c)) leaked = true;
      out(i, c) = cfg.u0(i, c);
    }
    if (leaked) ++rep.leaked_nodes;
  }

  rep.outside_U_exact = true;
  std::size_t in_u = 0, total = 0;
  for (std::size_t i = 0; i < uj.nodes(); ++i) {
    g.unravel(i, multi);
    for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
    const bool inside = cfg.U.contains(x);
    bool differs = false;
    for (int c = 0; c < m; ++c) {
      if (out(i, c) != uj(i, c)) differs = true;
      if (!inside && std::bit_cast<std::uint64_t>(out(i, c)) != std::bit_cast<std::uint64_t>(cfg.u0(i, c)))
        rep.outside_U_exact = false;
    }
    if (differs) {
      ++total;
      if (inside) ++in_u;
    }
  }
  rep.modified_in_U = static_cast<double>(in_u) * g.cell_volume();
  rep.modified_total = static_cast<double>(total) * g.cell_volume();
  {
    const auto e = dist_field(apply_operator(op, out), K);
    rep.sup_dist_K = e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
  }
  if (op.order == 2) rep.remainder = blend_remainder_check(uj, cfg.u0, phi, opts.slack, M * Ks);
  res.w = std::move(out);
  return res;
}

DomainResult truncate_domain(const GridField& uj, const DomainTruncationConfig& config, const ConvexBody& K, double M,
                             const HomogeneousOperator& op) {
  return truncate_domain(uj, config, InflatedBody{K, 0.0}, M, op);
}

}  // namespace mz
