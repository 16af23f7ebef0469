#include <algorithm>
#include <cmath>

#include "mz/errors.hpp"
#include "mz/field_ops.hpp"
#include "mz/truncation.hpp"

namespace mz {

nlohmann::ordered_json CubeReport::to_json() const {
  nlohmann::ordered_json j;
  j["lo"] = lo;
  j["hi"] = hi;
  j["x_center"] = x_center;
  j["inflation"] = inflation;
  j["gamma"] = gamma;
  j["M_rel"] = M_rel;
  j["modified"] = modified;
  j["sup_dist_local"] = sup_dist_local;
  return j;
}

nlohmann::ordered_json LevelReport::to_json() const {
  nlohmann::ordered_json j;
  j["level"] = level;
  j["N"] = N;
  j["eps_entry"] = eps_entry;
  j["delta_entry"] = delta_entry;
  j["modified"] = modified;
  j["sup_dist"] = sup_dist;
  j["bound"] = bound;
  j["slack"] = slack;
  j["band_consistent"] = band_consistent;
  j["ok"] = ok();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : cubes) arr.push_back(c.to_json());
  j["cubes"] = arr;
  return j;
}

std::pair<int, ModulusEntry> dyadic_depth(const std::vector<ModulusEntry>& table, int dim, int level) {
  if (level < 1) throw InvalidArgument("level must be >= 1");
  const ModulusEntry* best = nullptr;
  for (const auto& e : table) {
    if (!(e.eps >= 0.0) || !(e.delta > 0.0)) throw InvalidArgument("modulus table entries need eps >= 0, delta > 0");
    if (e.eps <= 1.0 / level && (!best || e.delta > best->delta)) best = &e;
  }
  if (!best)
    throw InvalidArgument("modulus table has no entry with eps <= 1/" + std::to_string(level));
  const double n = std::ceil(std::log2(std::sqrt(static_cast<double>(dim)) / best->delta) - 1e-12);
  return {std::max(0, static_cast<int>(n)), *best};
}

namespace {

Grid sub_grid(const Grid& g, const std::vector<int>& s, const std::vector<int>& e) {
  std::vector<int> shape(g.dim);
  std::vector<double> origin(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    shape[a] = e[a] - s[a] + 1;
    origin[a] = g.coord(a, s[a]);
  }
  return Grid::make(shape, g.spacing, origin, Boundary::kExtend);
}

GridField extract(const GridField& f, const Grid& sub, const std::vector<int>& s) {
  GridField out(sub, f.components);
  int m[5], gm[5];
  for (std::size_t i = 0; i < out.nodes(); ++i) {
    sub.unravel(i, m);
    for (int a = 0; a < sub.dim; ++a) gm[a] = m[a] + s[a];
    const double* src = f.at(f.grid.ravel(gm));
    std::copy(src, src + f.components, out.at(i));
  }
  return out;
}

}  // namespace

VaryingKResult truncate_varying_K_level(const GridField& uj, const VaryingKConfig& cfg, double M,
                                        const HomogeneousOperator& op, int level) {
  const Grid& g = uj.grid;
  const int d = g.dim;
  const int m = uj.components;
  if (g.boundary != Boundary::kExtend) throw InvalidArgument("varying-K truncation needs a bounded (extend) grid");
  if (!cfg.K_map) throw InvalidArgument("K_map not set");
  if (!(cfg.eta > 0.0)) throw InvalidArgument("eta must be positive");
  if (!(cfg.u0.grid == g) || cfg.u0.components != m) throw InvalidArgument("u0 must share grid and components with u_j");

  const Box omega = grid_box(g);
  const double omega_vol = omega.volume();
  double side_max = 0.0;
  for (int a = 0; a < d; ++a) side_max = std::max(side_max, omega.hi[a] - omega.lo[a]);

  VaryingKResult res;
  LevelReport& rep = res.report;
  rep.level = level;
  const auto [n_unit, entry] = dyadic_depth(cfg.modulus, d, level);
  (void)n_unit;
  rep.eps_entry = entry.eps;
  rep.delta_entry = entry.delta;
  rep.N = std::max(0, static_cast<int>(std::ceil(std::log2(std::sqrt(static_cast<double>(d)) * side_max / entry.delta) - 1e-12)));
  const int parts = 1 << rep.N;

  // Node ranges per axis: cube c owns [starts[c], starts[c+1]) and its
  // subgrid reaches the shared boundary node starts[c+1].
  std::vector<std::vector<int>> starts(d);
  for (int a = 0; a < d; ++a) {
    const int cells = g.shape[a] - 1;
    for (int c = 0; c <= parts; ++c) starts[a].push_back(static_cast<int>(std::llround(static_cast<double>(cells) * c / parts)));
    for (int c = 0; c < parts; ++c)
      if (starts[a][c + 1] - starts[a][c] + 1 < 5)
        throw InvalidArgument("dyadic depth " + std::to_string(rep.N) + " leaves fewer than 5 nodes per cube side");
  }

  res.w = cfg.u0;
  std::vector<int> owner_u(g.nodes(), 0);  // 1 if the node lies inside its owning cube's U
  const double C1 = op.c1();
  const double M_rel = M / cfg.eta;
  const double h = g.spacing;

  std::vector<int> cidx(d, 0);
  while (true) {
    std::vector<int> s(d), e(d);
    CubeReport cr;
    for (int a = 0; a < d; ++a) {
      s[a] = starts[a][cidx[a]];
      e[a] = starts[a][cidx[a] + 1];
      cr.lo.push_back(g.coord(a, s[a]));
      cr.hi.push_back(g.coord(a, e[a]));
      cr.x_center.push_back(std::clamp(0.5 * (cr.lo[a] + cr.hi[a]), omega.lo[a], omega.hi[a]));
    }
    const ConvexBody Kn = cfg.K_map(cr.x_center);
    if (sup_norm(Kn) < cfg.eta)
      throw InvalidArgument("eta violated: |K_x| = " + std::to_string(sup_norm(Kn)) + " < " + std::to_string(cfg.eta));
    cr.inflation = omega_vol * entry.eps;
    const InflatedBody Khat{Kn, cr.inflation};
    const double Ks = Khat.sup_norm();
    cr.M_rel = M_rel;
    cr.gamma = std::min(1.0 / level, cfg.gamma_cap_fraction * cfg.whole_space.C2 * (1.0 + C1 * M_rel) * Ks);

    const Grid sub = sub_grid(g, s, e);
    const Box cube{cr.lo, cr.hi};
    double side = cr.hi[0] - cr.lo[0];
    for (int a = 1; a < d; ++a) side = std::min(side, cr.hi[a] - cr.lo[a]);
    const double um = std::max(cfg.u_margin * side, 2.0 * h);
    const double vm = std::max(cfg.v_margin * side, um + 2.0 * h);

    DomainTruncationConfig dc;
    dc.u0 = extract(cfg.u0, sub, s);
    dc.U = cube.shrunk(um);
    dc.V = cube.shrunk(vm);
    dc.cutoff_width = cfg.cutoff_width;
    dc.gamma = cr.gamma;
    dc.whole_space = cfg.whole_space;
    const DomainResult dr = truncate_domain(extract(uj, sub, s), dc, Khat, M_rel, op);
    cr.modified = dr.report.modified_total;
    cr.sup_dist_local = dr.report.sup_dist_K;

    int lm[5], gm[5];
    std::vector<double> x(d);
    for (std::size_t i = 0; i < sub.nodes(); ++i) {
      sub.unravel(i, lm);
      bool owned = true;
      for (int a = 0; a < d; ++a) {
        gm[a] = lm[a] + s[a];
        const bool last = cidx[a] == parts - 1;
        if (gm[a] == e[a] && !last) owned = false;
        x[a] = g.coord(a, gm[a]);
      }
      if (!owned) continue;
      const std::size_t gi = g.ravel(gm);
      std::copy(dr.w.at(i), dr.w.at(i) + m, res.w.at(gi));
      owner_u[gi] = dc.U.contains(x) ? 1 : 0;
    }
    rep.cubes.push_back(std::move(cr));

    int a = d - 1;
    while (a >= 0 && cidx[a] == parts - 1) {
      cidx[a] = 0;
      --a;
    }
    if (a < 0) break;
    ++cidx[a];
  }

  std::size_t changed = 0;
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    bool differs = false;
    for (int c = 0; c < m; ++c) {
      if (res.w(i, c) != uj(i, c)) differs = true;
      if (!owner_u[i] && res.w(i, c) != cfg.u0(i, c)) rep.band_consistent = false;
    }
    if (differs) ++changed;
  }
  rep.modified = static_cast<double>(changed) * g.cell_volume();

  const GridField bw = apply_operator(op, res.w);
  int multi[5];
  std::vector<double> x(d);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    g.unravel(i, multi);
    for (int a = 0; a < d; ++a) x[a] = g.coord(a, multi[a]);
    const ConvexBody Kx = cfg.K_map(x);
    rep.sup_dist = std::max(rep.sup_dist, InflatedBody{Kx, 0.0}.distance(bw.at(i)));
  }
  rep.bound = (2.0 + omega_vol) / level;
  rep.slack = cfg.whole_space.slack(g, rep.bound);
  return res;
}

std::vector<int> ladder_indices(const std::vector<std::vector<double>>& modified,
                                const std::vector<std::vector<double>>& sup_dist) {
  if (modified.size() != sup_dist.size()) throw InvalidArgument("ladder tables must have the same shape");
  std::vector<int> out;
  for (std::size_t r = 0; r < modified.size(); ++r) {
    if (modified[r].size() != sup_dist[r].size()) throw InvalidArgument("ladder tables must have the same shape");
    const double tol = 1.0 / static_cast<double>(r + 1);
    int j = static_cast<int>(modified[r].size());
    while (j > 0 && modified[r][j - 1] <= tol && sup_dist[r][j - 1] <= tol) --j;
    out.push_back(j == static_cast<int>(modified[r].size()) ? -1 : j);
  }
  return out;
}

}  // namespace mz
