#include "mz/schedule.hpp"

#include <cmath>

#include "mz/errors.hpp"

namespace mz {

double default_alpha(int d) { return 1.0 - std::pow(5.0, -d) / 4.0; }

Schedule build_schedule(double gamma, int d, double M, double alpha, double K_sup, const ScheduleOptions& o) {
  if (d < 1) throw InvalidArgument("schedule dimension must be positive");
  if (!(K_sup > 0.0)) throw InvalidArgument("schedule needs |K| > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(gamma > 0.0) || !(gamma < o.C2 * (1.0 + o.C1 * M) * K_sup))
    throw InvalidArgument("gamma outside (0, C2 (1 + C1 M) |K|)");
  Schedule s;
  s.gamma_target = gamma;
  s.d = d;
  s.M = M;
  s.alpha = alpha;
  s.K_sup = K_sup;
  s.C1 = o.C1;
  s.C2 = o.C2;
  const double two_d = std::pow(2.0, d);
  s.C3 = o.C3 > 0.0 ? o.C3 : two_d;
  s.C4 = o.C4 > 0.0 ? o.C4 : two_d;
  s.C5 = o.C5 > 0.0 ? o.C5 : two_d;

  const double q = std::pow(alpha, 1.0 / (2.0 * (d + 1)));
  s.alpha_bar_closed = 1.0 / (1.0 - q);
  double sum = 0.0, comp = 0.0, term = 1.0;
  std::size_t n = 0;
  while (true) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    ++n;
    term *= q;
    if (term / (1.0 - q) < 1e-15 * sum) break;
  }
  s.alpha_bar = sum;
  s.series_terms = n;

  const double g = gamma / K_sup;
  auto f = [&](double delta) { return delta * s.alpha_bar * std::exp(delta * s.alpha_bar) - g; };
  double lo = 0.0, hi = g / s.alpha_bar;
  if (!(f(lo) <= 0.0 && f(hi) >= 0.0)) throw NumericFailure("schedule bisection does not bracket", f(hi));
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  s.delta = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
  s.residual = std::abs(f(s.delta));
  if (s.residual > 1e-12) throw NumericFailure("schedule bisection residual above 1e-12", s.residual);
  s.M_bar = std::exp(s.delta * s.alpha_bar);
  s.gamma_bar = s.delta * s.alpha_bar * s.M_bar;

  double M_i = 1.0, inflation = 0.0;
  for (int i = 0; i < o.max_stages; ++i) {
    Stage st;
    st.index = i;
    st.factor = s.delta * std::pow(alpha, i / (2.0 * (d + 1)));
    st.M_i = M_i;
    st.gamma_i = st.factor * M_i;
    st.inflation = inflation;
    if (i > 0 && st.gamma_i < o.stage_floor * s.stages.front().gamma_i) break;
    s.stages.push_back(st);
    inflation += st.gamma_i;
    M_i += st.gamma_i;
  }
  return s;
}

nlohmann::ordered_json Schedule::to_json() const {
  nlohmann::ordered_json j;
  j["gamma_target"] = gamma_target;
  j["d"] = d;
  j["M"] = M;
  j["alpha"] = alpha;
  j["K_sup"] = K_sup;
  j["C1"] = C1;
  j["C2"] = C2;
  j["C3"] = C3;
  j["C4"] = C4;
  j["C5"] = C5;
  j["delta"] = delta;
  j["alpha_bar"] = alpha_bar;
  j["alpha_bar_closed"] = alpha_bar_closed;
  j["series_terms"] = series_terms;
  j["M_bar"] = M_bar;
  j["gamma_bar"] = gamma_bar;
  j["residual"] = residual;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& st : stages) {
    nlohmann::ordered_json sj;
    sj["index"] = st.index;
    sj["factor"] = st.factor;
    sj["M_i"] = st.M_i;
    sj["gamma_i"] = st.gamma_i;
    sj["inflation"] = st.inflation;
    arr.push_back(sj);
  }
  j["stages"] = arr;
  return j;
}

double growth_admissibility(double lambda, double M, double eps, int d, double K_sup, double C1, double C2) {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
  if (lambda == 0.0) return 0.0;
  const double b = 1.0 + C1 * M;
  return std::pow(lambda, 1.0 - eps) * b * std::pow(K_sup, d + 1) * std::exp(2.0 * (d + 1) * C2 * b);
}

}  // namespace mz
