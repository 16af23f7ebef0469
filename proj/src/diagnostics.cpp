#include "mz/diagnostics.hpp"

#include <cmath>

#include "mz/errors.hpp"
#include "mz/numerics.hpp"

namespace mz {

nlohmann::ordered_json MomentTable::to_json() const {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back({{"power", r.power}, {"mean1", r.mean1}, {"mean2", r.mean2}, {"diff", r.diff}});
  return {{"moments", arr}, {"max_diff", max_diff}};
}

std::vector<MultiIndex> monomials_up_to(int components, int max_degree) {
  std::vector<MultiIndex> out;
  for (int deg = 1; deg <= max_degree; ++deg) {
    const auto m = multi_indices(components, deg);
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

namespace {

double monomial_mean(const GridField& f, const MultiIndex& p) {
  std::vector<double> v(f.nodes());
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    double t = 1.0;
    for (int c = 0; c < f.components; ++c)
      for (int k = 0; k < p[c]; ++k) t *= f(i, c);
    v[i] = t;
  }
  return pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace

MomentTable young_measure_compare(const GridField& f1, const GridField& f2, const std::vector<MultiIndex>& moments) {
  if (!(f1.grid == f2.grid) || f1.components != f2.components) throw InvalidArgument("fields differ in grid or components");
  MomentTable t;
  for (const auto& p : moments) {
    if (static_cast<int>(p.size()) != f1.components) throw InvalidArgument("monomial length must equal component count");
    int deg = 0;
    for (int e : p) {
      if (e < 0) throw InvalidArgument("negative monomial exponent");
      deg += e;
    }
    if (deg > 3) throw InvalidArgument("monomial degree above 3");
    MomentRow r;
    r.power = p;
    r.mean1 = monomial_mean(f1, p);
    r.mean2 = monomial_mean(f2, p);
    r.diff = std::abs(r.mean1 - r.mean2);
    t.max_diff = std::max(t.max_diff, r.diff);
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace mz
