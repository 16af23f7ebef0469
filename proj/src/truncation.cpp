#include "mz/truncation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mz/errors.hpp"
#include "mz/field_ops.hpp"
#include "mz/numerics.hpp"
#include "mz/sweep.hpp"

namespace mz {

bool Box::contains(std::span<const double> x) const {
  for (std::size_t a = 0; a < lo.size(); ++a)
    if (x[a] < lo[a] || x[a] > hi[a]) return false;
  return true;
}

double Box::distance(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    const double t = std::max({lo[a] - x[a], 0.0, x[a] - hi[a]});
    s += t * t;
  }
  return std::sqrt(s);
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < lo.size(); ++a) v *= std::max(0.0, hi[a] - lo[a]);
  return v;
}

Box Box::shrunk(double margin) const {
  Box b = *this;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    b.lo[a] += margin;
    b.hi[a] -= margin;
  }
  return b;
}

bool Box::contains_box(const Box& other, double margin) const {
  if (other.lo.size() != lo.size()) return false;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (other.lo[a] < lo[a] + margin || other.hi[a] > hi[a] - margin) return false;
    if (other.lo[a] >= other.hi[a]) return false;
  }
  return true;
}

Box grid_box(const Grid& g) {
  Box b;
  for (int a = 0; a < g.dim; ++a) {
    b.lo.push_back(g.origin[a]);
    b.hi.push_back(g.origin[a] + g.spacing * (g.shape[a] - 1));
  }
  return b;
}

nlohmann::ordered_json StageReport::to_json() const {
  nlohmann::ordered_json j;
  j["index"] = index;
  j["gamma_i"] = gamma_i;
  j["inflation"] = inflation;
  j["K_sup"] = K_sup;
  j["M_rel"] = M_rel;
  j["theta"] = theta;
  j["lambda"] = lambda;
  j["lambda_new"] = lambda_new;
  j["alpha_emp"] = alpha_emp;
  j["mu"] = mu;
  j["mu_bound"] = mu_bound;
  j["dl"] = dl;
  j["dl_bound"] = dl_bound;
  j["balls"] = balls;
  j["candidates"] = candidates;
  j["unresolved"] = unresolved;
  j["mu_ok"] = mu_ok;
  j["dl_ok"] = dl_ok;
  j["disjoint"] = disjoint;
  j["covered"] = covered;
  return j;
}

bool TruncationReport::stages_ok() const {
  for (const auto& s : stages)
    if (!(s.mu_ok && s.dl_ok && s.disjoint && s.covered)) return false;
  return true;
}

nlohmann::ordered_json TruncationReport::to_json() const {
  nlohmann::ordered_json j;
  j["K_sup"] = K_sup;
  j["M"] = M;
  j["C1"] = C1;
  j["lambda0"] = lambda0;
  j["lambda_final"] = lambda_final;
  j["lambda_stop"] = lambda_stop;
  j["total_mu"] = total_mu;
  j["sum_mu"] = sum_mu;
  j["neq_bound"] = neq_bound;
  j["sup_dist_K"] = sup_dist_K;
  j["sup_dist_gamma_bar"] = sup_dist_gamma_bar;
  j["gamma_bar"] = gamma_bar;
  j["dl_final"] = dl_final;
  j["dl_bound"] = dl_bound;
  j["dl_slack"] = dl_slack;
  j["stop_reason"] = stop_reason;
  if (support_tracked) {
    j["support_rho"] = rho;
    j["outside_support"] = outside_support;
  }
  std::vector<double> lam, mu, alpha_emp;
  for (const auto& s : stages) {
    lam.push_back(s.lambda);
    mu.push_back(s.mu);
    alpha_emp.push_back(s.alpha_emp);
  }
  j["lambda_i"] = lam;
  j["mu_i"] = mu;
  j["alpha_emp_i"] = alpha_emp;
  auto st = nlohmann::ordered_json::array();
  for (const auto& s : stages) st.push_back(s.to_json());
  j["stages"] = st;
  j["schedule"] = schedule.to_json();
  j["wall_clock"] = wall_clock;
  return j;
}

namespace {

double max_dist(const GridField& bu, const InflatedBody& K) {
  const auto e = dist_field(bu, K);
  return e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
}

}  // namespace

TruncationResult truncate_whole_space(const GridField& u, const InflatedBody& K, double gamma, double M,
                                      const HomogeneousOperator& op, const WholeSpaceOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid& g = u.grid;
  const int d = g.dim;
  const double Ks = K.sup_norm();
  const double C1 = op.c1();
  const double alpha = options.alpha > 0.0 ? options.alpha : default_alpha(d);

  ScheduleOptions so;
  so.C1 = C1;
  so.C2 = options.C2;
  so.C3 = options.C3;
  so.C4 = options.C4;
  so.C5 = options.C5;
  so.stage_floor = options.stage_floor;
  so.max_stages = options.max_stages;

  TruncationResult res;
  TruncationReport& rep = res.report;
  rep.schedule = build_schedule(gamma, d, M, alpha, Ks, so);
  rep.K_sup = Ks;
  rep.M = M;
  rep.C1 = C1;
  rep.gamma_bar = rep.schedule.gamma_bar * Ks;
  rep.lambda_stop = options.lambda_stop >= 0.0 ? options.lambda_stop : 1e-8 * g.volume();

  SweepOptions sw;
  sw.C2 = options.C2;
  sw.slack = options.slack;

  GridField cur = u;
  rep.lambda0 = l1_dist_integral(apply_operator(op, u), K, Ks).lambda;
  double gamma_sum = 0.0;
  int stalled = 0;
  rep.stop_reason = "schedule_exhausted";
  for (const Stage& st : rep.schedule.stages) {
    const InflatedBody Ki = K.inflated(st.inflation * Ks);
    const double Ki_sup = Ki.sup_norm();
    const double lambda_i = l1_dist_integral(apply_operator(op, cur), Ki, Ki_sup).lambda;
    if (lambda_i <= rep.lambda_stop) {
      rep.stop_reason = "lambda_stop";
      break;
    }
    StageReport sr;
    sr.index = st.index;
    sr.gamma_i = st.gamma_i * Ks;
    sr.inflation = st.inflation * Ks;
    sr.K_sup = Ki_sup;
    sr.M_rel = (M * Ks + gamma_sum) / Ki_sup;
    SweepResult s = sweep(cur, Ki, sr.gamma_i, sr.M_rel, op, sw);
    sr.theta = s.theta;
    sr.lambda = s.lambda;
    sr.lambda_new = s.lambda_new;
    sr.alpha_emp = s.alpha_emp;
    sr.mu = s.mu;
    sr.mu_bound = s.mu_bound;
    sr.dl = s.dl_after;
    sr.dl_bound = s.dl_bound;
    sr.balls = s.balls;
    sr.candidates = s.candidates;
    sr.unresolved = s.unresolved;
    sr.mu_ok = s.mu_ok();
    sr.dl_ok = s.dl_ok();
    sr.disjoint = s.disjoint;
    sr.covered = s.covered;
    rep.stages.push_back(sr);
    rep.sum_mu += s.mu;
    // Decay is judged against the same body, so inflation alone does not count.
    const double lambda_same =
        s.balls == 0 ? s.lambda : l1_dist_integral(apply_operator(op, s.u_tilde), Ki, Ki_sup).lambda;
    cur = std::move(s.u_tilde);
    gamma_sum += sr.gamma_i;
    if (s.lambda > 0.0 && lambda_same >= s.lambda) {
      if (++stalled >= options.divergence_window)
        throw DivergenceError("lambda did not decrease over " + std::to_string(stalled) +
                              " consecutive sweeps (stage " + std::to_string(st.index) + ", lambda " +
                              std::to_string(s.lambda) + ")");
    } else {
      stalled = 0;
    }
  }

  const GridField bg = apply_operator(op, cur);
  const InflatedBody Kbar = K.inflated(rep.gamma_bar);
  rep.lambda_final = l1_dist_integral(bg, Kbar, Kbar.sup_norm()).lambda;
  rep.sup_dist_K = max_dist(bg, K);
  rep.sup_dist_gamma_bar = max_dist(bg, Kbar);
  rep.dl_final = sup_norm_derivative(cur, op.order);
  rep.dl_bound = M * Ks + gamma;
  rep.dl_slack = options.slack(g, M * Ks);

  res.modified.assign(u.nodes(), 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    for (int c = 0; c < u.components; ++c) {
      if (u(i, c) != cur(i, c)) {
        res.modified[i] = 1;
        ++count;
        break;
      }
    }
  }
  rep.total_mu = static_cast<double>(count) * g.cell_volume();
  const double b = 1.0 + C1 * M;
  rep.neq_bound = rep.schedule.C4 * rep.lambda0 * std::pow(b * Ks / gamma, d + 1) *
                  std::exp(2.0 * (d + 1) * options.C2 * b);

  if (options.support) {
    rep.support_tracked = true;
    const double p = 1.0 / d + 1.0;
    rep.rho = rep.schedule.C5 * std::pow(b * Ks, p) * std::exp(2.0 * p * options.C2 * b) *
              std::pow(rep.lambda0, 1.0 / d) / std::pow(gamma, p);
    int multi[5];
    std::vector<double> x(d);
    for (std::size_t i = 0; i < u.nodes(); ++i) {
      if (!res.modified[i]) continue;
      g.unravel(i, multi);
      for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
      if (options.support->distance(x) > rep.rho) ++rep.outside_support;
    }
  }
  res.g = std::move(cur);
  rep.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

TruncationResult truncate_whole_space(const GridField& u, const ConvexBody& K, double gamma, double M,
                                      const HomogeneousOperator& op, const WholeSpaceOptions& options) {
  return truncate_whole_space(u, InflatedBody{K, 0.0}, gamma, M, op, options);
}

}  // namespace mz
