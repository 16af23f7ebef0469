#include "mz/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "mz/euler.hpp"
#include "mz/field_ops.hpp"
#include "mz/fld_io.hpp"
#include "mz/numerics.hpp"

namespace mz {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

std::vector<double> vec_of(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(what + " must be an array of numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

double num(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string resolve(const std::string& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? p : (fs::path(base) / path).string();
}

GridField load_field(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("missing field file: " + path);
  return read_fld(path);
}

double gamma_from(const json& sched, const HomogeneousOperator& op, double M, double Ks, double C2) {
  if (sched.contains("gamma")) return num(sched, "gamma", 0.0);
  const double f = num(sched, "gamma_fraction", 0.9);
  return f * C2 * (1.0 + op.c1() * M) * Ks;
}

bool nonincreasing(const std::vector<double>& v, double tol) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + tol) return false;
  return true;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << s;
}

HomogeneousOperator op_from(const json& j, int grid_dim) {
  // The potential acts on space-time grids: axis 0 is time.
  if (j.is_string() && j.get<std::string>() == "euler_B") {
    if (grid_dim < 4) throw ConfigError("euler_B needs a grid of dimension d + 1 >= 4");
    return euler_B_operator(grid_dim - 1);
  }
  return operator_from_json(j, grid_dim);
}

struct Sequence {
  std::vector<int> js;
  std::function<GridField(int j, ordered_json& info)> get;
  std::optional<Box> support;
};

Sequence sequence_from(const json& cfg, const std::string& base, const Grid& grid, const HomogeneousOperator& op,
                       const ConvexBody& K, double M) {
  Sequence seq;
  if (cfg.contains("generator") == cfg.contains("inputs"))
    throw ConfigError("exactly one of 'generator' or 'inputs' is required");
  if (cfg.contains("inputs")) {
    std::vector<std::string> paths;
    for (const auto& p : cfg.at("inputs")) {
      if (!p.is_string()) throw ConfigError("'inputs' must list file paths");
      paths.push_back(resolve(base, p.get<std::string>()));
    }
    for (const auto& p : paths)
      if (!fs::exists(p)) throw ConfigError("missing field file: " + p);
    for (std::size_t j = 0; j < paths.size(); ++j) seq.js.push_back(static_cast<int>(j));
    seq.get = [paths, grid, op](int j, ordered_json& info) {
      GridField u = load_field(paths[j]);
      if (!(u.grid == grid)) throw ConfigError("grid of " + paths[j] + " differs from the configured grid");
      if (u.components != op.in_components) throw ConfigError("component count of " + paths[j] + " does not match the operator");
      info["input"] = paths[j];
      return u;
    };
    if (cfg.contains("support")) seq.support = box_from_json(cfg.at("support"), grid.dim);
    return seq;
  }
  const GeneratorSpec spec = generator_from_json(cfg.at("generator"), grid, op, K, M);
  const json& jr = cfg.at("generator").contains("j_range") ? cfg.at("generator").at("j_range") : json::array({0, 0});
  if (!jr.is_array() || jr.size() != 2) throw ConfigError("'j_range' must be [first, last]");
  for (int j = jr[0].get<int>(); j <= jr[1].get<int>(); ++j) seq.js.push_back(j);
  seq.get = [spec](int j, ordered_json& info) {
    Generated g = generate_sequence(spec, j);
    info["family"] = family_name(spec.family);
    info["amplitude"] = g.amplitude;
    info["lambda_target"] = g.lambda_target;
    info["lambda_measured"] = g.lambda_measured;
    info["dl"] = g.dl;
    return std::move(g.u);
  };
  if (spec.family != Family::kOscillation) {
    Box sup = spec.support ? *spec.support : Box{};
    if (!spec.support) {
      const Box b = grid_box(grid);
      double side = b.hi[0] - b.lo[0];
      for (int a = 1; a < grid.dim; ++a) side = std::min(side, b.hi[a] - b.lo[a]);
      sup = b.shrunk(0.25 * side);
    }
    seq.support = sup;
  }
  return seq;
}

struct Checks {
  ordered_json failures = ordered_json::array();
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

void check_whole_space(const TruncationReport& r, const Grid& g, const WholeSpaceOptions& opts, int j, Checks& c) {
  const std::string tag = " (j=" + std::to_string(j) + ")";
  c.expect(r.stages_ok(), "stage bound violated" + tag);
  c.expect(r.sup_dist_gamma_bar <= r.gamma_bar + opts.slack(g, r.gamma_bar), "sup dist to K_gamma_bar above gamma_bar" + tag);
  c.expect(r.dl_final <= r.dl_bound + r.dl_slack, "derivative bound violated" + tag);
  if (r.support_tracked) c.expect(r.outside_support == 0, "modification outside V_rho" + tag);
}

ordered_json run_whole_or_domain(const json& cfg, const std::string& base, const fs::path* out_dir, bool dump,
                                 Checks& checks) {
  const Grid grid = grid_from_json(cfg.at("grid"));
  const HomogeneousOperator op = op_from(cfg.at("operator"), grid.dim);
  const ConvexBody K = body_from_json(cfg.at("K"));
  const double M = num(cfg, "M", 1.0);
  const WholeSpaceOptions opts = whole_space_options_from_json(cfg);
  const json sched = cfg.value("schedule", json::object());
  const double Ks = sup_norm(K);
  const double gamma = gamma_from(sched, op, M, Ks, opts.C2);
  const std::string mode = cfg.at("mode").get<std::string>();
  const bool domain = mode == "domain";

  GridField u0(grid, op.in_components);
  if (cfg.contains("u0")) {
    u0 = load_field(resolve(base, cfg.at("u0").get<std::string>()));
    if (!(u0.grid == grid) || u0.components != op.in_components) throw ConfigError("u0 does not match grid/operator");
  }
  DomainTruncationConfig dc;
  if (domain) {
    const json& dj = cfg.at("domain");
    require_keys(dj, {"U", "V", "cutoff_width", "u0_tolerance"}, "domain");
    dc.u0 = u0;
    dc.U = box_from_json(dj.at("U"), grid.dim);
    dc.V = box_from_json(dj.at("V"), grid.dim);
    dc.cutoff_width = num(dj, "cutoff_width", 0.0);
    dc.u0_tolerance = num(dj, "u0_tolerance", 1e-8);
    dc.gamma = gamma;
    dc.whole_space = opts;
  }
  Sequence seq = sequence_from(cfg, base, grid, op, K, M);

  ordered_json runs = ordered_json::array();
  std::vector<double> sup_dist, total_mu, in_u;
  for (int j : seq.js) {
    ordered_json info;
    info["j"] = j;
    const GridField u = seq.get(j, info);
    GridField w;
    if (domain) {
      DomainResult dr = truncate_domain(u, dc, K, M, op);
      const auto& r = dr.report;
      check_whole_space(r.inner, grid, opts, j, checks);
      checks.expect(r.outside_U_exact, "w differs from u0 outside U (j=" + std::to_string(j) + ")");
      checks.expect(r.sup_dist_K <= r.inner.gamma_bar + opts.slack(grid, r.inner.gamma_bar),
                    "sup dist(Bw, K) above gamma_bar (j=" + std::to_string(j) + ")");
      if (op.order == 2) checks.expect(r.remainder.ok(), "blend remainder bound violated (j=" + std::to_string(j) + ")");
      sup_dist.push_back(r.sup_dist_K);
      total_mu.push_back(r.modified_total);
      in_u.push_back(r.modified_in_U);
      info["report"] = r.to_json();
      w = std::move(dr.w);
    } else {
      WholeSpaceOptions o = opts;
      o.support = seq.support;
      TruncationResult tr = truncate_whole_space(u, K, gamma, M, op, o);
      check_whole_space(tr.report, grid, o, j, checks);
      sup_dist.push_back(tr.report.sup_dist_gamma_bar);
      total_mu.push_back(tr.report.total_mu);
      info["report"] = tr.report.to_json();
      w = std::move(tr.g);
    }
    if (dump && out_dir) write_fld((*out_dir / ("w_" + std::to_string(j) + ".fld")).string(), w);
    runs.push_back(std::move(info));
  }
  ordered_json summary;
  summary["gamma"] = gamma;
  summary["sup_dist"] = sup_dist;
  summary["total_mu"] = total_mu;
  summary["sup_dist_nonincreasing"] = nonincreasing(sup_dist, 0.0);
  if (domain) summary["modified_in_U"] = in_u;
  if (!total_mu.empty()) {
    summary["mu_first"] = total_mu.front();
    summary["mu_last"] = total_mu.back();
  }
  ordered_json out;
  out["runs"] = std::move(runs);
  out["summary"] = std::move(summary);
  return out;
}

ordered_json run_varying(const json& cfg, const std::string& base, const fs::path* out_dir, bool dump, Checks& checks) {
  const Grid grid = grid_from_json(cfg.at("grid"));
  const HomogeneousOperator op = op_from(cfg.at("operator"), grid.dim);
  const double M = num(cfg, "M", 1.0);
  const json& vj = cfg.at("varying_k");
  require_keys(vj, {"K_map", "eta", "modulus", "levels", "u_margin", "v_margin", "cutoff_width", "gamma_cap_fraction"},
               "varying_k");
  VaryingKConfig vc;
  vc.K_map = k_map_from_json(vj.at("K_map"), grid.dim);
  vc.eta = num(vj, "eta", 0.0);
  for (const auto& e : vj.at("modulus")) {
    const auto p = vec_of(e, "modulus entry");
    if (p.size() != 2) throw ConfigError("modulus entries are [eps, delta]");
    vc.modulus.push_back({p[0], p[1]});
  }
  vc.u_margin = num(vj, "u_margin", 0.1);
  vc.v_margin = num(vj, "v_margin", 0.2);
  vc.cutoff_width = num(vj, "cutoff_width", 0.0);
  vc.gamma_cap_fraction = num(vj, "gamma_cap_fraction", 0.9);
  vc.whole_space = whole_space_options_from_json(cfg);
  vc.u0 = GridField(grid, op.in_components);
  if (cfg.contains("u0")) {
    vc.u0 = load_field(resolve(base, cfg.at("u0").get<std::string>()));
    if (!(vc.u0.grid == grid) || vc.u0.components != op.in_components) throw ConfigError("u0 does not match grid/operator");
  }
  std::vector<int> levels;
  for (const auto& l : vj.at("levels")) levels.push_back(l.get<int>());
  if (levels.empty()) throw ConfigError("'levels' must not be empty");
  std::vector<double> centre(grid.dim);
  const Box gb = grid_box(grid);
  for (int a = 0; a < grid.dim; ++a) centre[a] = 0.5 * (gb.lo[a] + gb.hi[a]);
  const ConvexBody Kref = cfg.contains("K") ? body_from_json(cfg.at("K")) : vc.K_map(centre);
  Sequence seq = sequence_from(cfg, base, grid, op, Kref, M);

  std::vector<GridField> inputs;
  ordered_json runs = ordered_json::array();
  std::vector<std::vector<double>> mod(levels.size()), dist(levels.size());
  std::vector<std::vector<GridField>> outs(levels.size());
  for (int j : seq.js) {
    ordered_json info;
    info["j"] = j;
    const GridField u = seq.get(j, info);
    ordered_json lv = ordered_json::array();
    for (std::size_t li = 0; li < levels.size(); ++li) {
      VaryingKResult r = truncate_varying_K_level(u, vc, M, op, levels[li]);
      const std::string tag = " (level " + std::to_string(levels[li]) + ", j=" + std::to_string(j) + ")";
      checks.expect(r.report.ok(), "per-level bound violated" + tag);
      checks.expect(r.report.band_consistent, "cube outputs disagree on shared bands" + tag);
      mod[li].push_back(r.report.modified);
      dist[li].push_back(r.report.sup_dist);
      lv.push_back(r.report.to_json());
      outs[li].push_back(std::move(r.w));
    }
    info["levels"] = std::move(lv);
    runs.push_back(std::move(info));
  }
  const std::vector<int> ladder = ladder_indices(mod, dist);
  // w_j uses the finest level whose ladder index has been reached.
  std::vector<int> chosen;
  for (std::size_t n = 0; n < seq.js.size(); ++n) {
    int pick = 0;
    for (std::size_t li = 0; li < levels.size(); ++li)
      if (ladder[li] >= 0 && static_cast<std::size_t>(ladder[li]) <= n) pick = static_cast<int>(li);
    chosen.push_back(levels[pick]);
    if (dump && out_dir) write_fld((*out_dir / ("w_" + std::to_string(seq.js[n]) + ".fld")).string(), outs[pick][n]);
  }
  ordered_json summary;
  summary["levels"] = levels;
  summary["modified"] = mod;
  summary["sup_dist"] = dist;
  summary["ladder"] = ladder;
  summary["level_for_j"] = chosen;
  ordered_json out;
  out["runs"] = std::move(runs);
  out["summary"] = std::move(summary);
  return out;
}

void strip_rec(ordered_json& j) {
  if (j.is_object()) {
    j.erase("wall_clock");
    for (auto& [k, v] : j.items()) strip_rec(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_rec(v);
  }
}

}  // namespace

Grid grid_from_json(const json& j) {
  require_keys(j, {"shape", "spacing", "origin", "boundary"}, "grid");
  try {
    std::vector<int> shape = j.at("shape").get<std::vector<int>>();
    std::vector<double> origin = j.contains("origin") ? vec_of(j.at("origin"), "origin") : std::vector<double>{};
    const Boundary b = boundary_from_name(j.value("boundary", std::string("extend")));
    return Grid::make(std::move(shape), num(j, "spacing", 1.0), std::move(origin), b);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

Box box_from_json(const json& j, int dim) {
  require_keys(j, {"lo", "hi"}, "box");
  Box b{vec_of(j.at("lo"), "lo"), vec_of(j.at("hi"), "hi")};
  if (static_cast<int>(b.lo.size()) != dim || static_cast<int>(b.hi.size()) != dim)
    throw ConfigError("box corners must have the grid dimension");
  for (int a = 0; a < dim; ++a)
    if (!(b.lo[a] < b.hi[a])) throw ConfigError("box needs lo < hi on every axis");
  return b;
}

std::function<ConvexBody(std::span<const double>)> k_map_from_json(const json& j, int dim) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("K_map needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    require_keys(j, {"kind", "body"}, "K_map");
    const ConvexBody body = body_from_json(j.at("body"));
    return [body](std::span<const double>) { return body; };
  }
  if (kind == "ball_affine_radius") {
    require_keys(j, {"kind", "center", "radius0", "slope"}, "K_map");
    const auto c = vec_of(j.at("center"), "center");
    const double r0 = num(j, "radius0", 1.0);
    const auto slope = vec_of(j.at("slope"), "slope");
    if (static_cast<int>(slope.size()) != dim) throw ConfigError("K_map slope must have the grid dimension");
    Point centre = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    return [centre, r0, slope](std::span<const double> x) {
      double r = r0;
      for (std::size_t a = 0; a < slope.size(); ++a) r += slope[a] * x[a];
      return ConvexBody::ball(centre, std::max(0.0, r));
    };
  }
  throw ConfigError("unknown K_map kind '" + kind + "'");
}

GeneratorSpec generator_from_json(const json& j, const Grid& grid, const HomogeneousOperator& op, const ConvexBody& K,
                                  double M) {
  require_keys(j, {"family", "lambda0", "ratio", "width", "spikes", "direction", "support", "period0", "slope",
                   "seed", "j_range"},
               "generator");
  Family family;
  try {
    family = family_from_name(j.at("family").get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!j.contains("seed")) throw ConfigError("generator: 'seed' is mandatory");
  GeneratorSpec s{.family = family, .grid = grid, .op = op, .K = K, .M = M};
  s.lambda0 = num(j, "lambda0", s.lambda0);
  s.ratio = num(j, "ratio", s.ratio);
  s.width = num(j, "width", s.width);
  s.spikes = static_cast<int>(num(j, "spikes", 1));
  if (j.contains("direction")) s.direction = vec_of(j.at("direction"), "direction");
  if (j.contains("support")) s.support = box_from_json(j.at("support"), grid.dim);
  s.period0 = num(j, "period0", s.period0);
  s.slope = num(j, "slope", s.slope);
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

WholeSpaceOptions whole_space_options_from_json(const json& cfg) {
  WholeSpaceOptions o;
  const json sched = cfg.value("schedule", json::object());
  require_keys(sched, {"gamma", "gamma_fraction", "alpha", "C2", "C3", "C4", "C5", "lambda_stop", "stage_floor",
                       "max_stages", "divergence_window"},
               "schedule");
  o.alpha = num(sched, "alpha", 0.0);
  o.C2 = num(sched, "C2", o.C2);
  o.C3 = num(sched, "C3", o.C3);
  o.C4 = num(sched, "C4", o.C4);
  o.C5 = num(sched, "C5", o.C5);
  o.lambda_stop = num(sched, "lambda_stop", o.lambda_stop);
  o.stage_floor = num(sched, "stage_floor", o.stage_floor);
  o.max_stages = static_cast<int>(num(sched, "max_stages", o.max_stages));
  o.divergence_window = static_cast<int>(num(sched, "divergence_window", o.divergence_window));
  if (cfg.contains("slack")) {
    require_keys(cfg.at("slack"), {"c_slack"}, "slack");
    o.slack.c_slack = num(cfg.at("slack"), "c_slack", 1.0);
  }
  return o;
}

ordered_json strip_timing(ordered_json report) {
  strip_rec(report);
  return report;
}

RunOutcome run_config(const json& cfg, const std::string& base_dir, const std::optional<std::string>& out_dir_flag) {
  RunOutcome out;
  Checks checks;
  std::optional<fs::path> out_dir;
  bool dump = false;
  std::string mode;
  // Parse phase: every failure here is a schema error.
  try {
    require_keys(cfg, {"seed", "mode", "operator", "grid", "K", "M", "schedule", "slack", "generator", "inputs",
                       "support", "u0", "domain", "varying_k", "threads", "output"},
                 "config");
    if (!cfg.contains("seed")) throw ConfigError("'seed' is mandatory");
    for (const char* k : {"mode", "operator", "grid"})
      if (!cfg.contains(k)) throw ConfigError(std::string("missing required key '") + k + "'");
    mode = cfg.at("mode").get<std::string>();
    if (mode != "whole_space" && mode != "domain" && mode != "varying_k") throw ConfigError("unknown mode '" + mode + "'");
    if (mode != "varying_k" && !cfg.contains("K")) throw ConfigError("missing required key 'K'");
    if (mode == "domain" && !cfg.contains("domain")) throw ConfigError("domain mode needs a 'domain' block");
    if (mode == "varying_k" && !cfg.contains("varying_k")) throw ConfigError("varying_k mode needs a 'varying_k' block");
    if (out_dir_flag) out_dir = *out_dir_flag;
    if (cfg.contains("output")) {
      const json& o = cfg.at("output");
      require_keys(o, {"dir", "fields"}, "output");
      if (o.contains("dir")) out_dir = resolve(base_dir, o.at("dir").get<std::string>());
      dump = o.value("fields", false);
    }
    if (cfg.contains("threads")) set_worker_override(cfg.at("threads").get<int>());
    // Fail early on unreadable inputs so the message names the path.
    if (cfg.contains("u0")) {
      const std::string p = resolve(base_dir, cfg.at("u0").get<std::string>());
      if (!fs::exists(p)) throw ConfigError("missing field file: " + p);
    }
    if (cfg.contains("inputs"))
      for (const auto& p : cfg.at("inputs"))
        if (!p.is_string() || !fs::exists(resolve(base_dir, p.get<std::string>())))
          throw ConfigError("missing field file: " + resolve(base_dir, p.is_string() ? p.get<std::string>() : p.dump()));
    grid_from_json(cfg.at("grid"));
  } catch (const json::exception& e) {
    out.exit_code = kExitSchema;
    out.message = std::string("config schema error: ") + e.what();
    return out;
  } catch (const Error& e) {
    out.exit_code = kExitSchema;
    out.message = std::string("config error: ") + e.what();
    return out;
  }

  ordered_json body;
  try {
    if (out_dir) fs::create_directories(*out_dir);
    const fs::path* od = out_dir ? &*out_dir : nullptr;
    body = mode == "varying_k" ? run_varying(cfg, base_dir, od, dump, checks)
                               : run_whole_or_domain(cfg, base_dir, od, dump, checks);
  } catch (const ConfigError& e) {
    out.exit_code = kExitSchema;
    out.message = std::string("config error: ") + e.what();
  } catch (const FormatError& e) {
    out.exit_code = kExitSchema;
    out.message = std::string("config error: ") + e.what();
  } catch (const InvalidBody& e) {
    out.exit_code = kExitSchema;
    out.message = std::string("config error: ") + e.what();
  } catch (const json::exception& e) {
    out.exit_code = kExitSchema;
    out.message = std::string("config schema error: ") + e.what();
  } catch (const DivergenceError& e) {
    out.exit_code = kExitDivergence;
    out.message = std::string("divergence: ") + e.what();
  } catch (const NumericFailure& e) {
    out.exit_code = kExitDivergence;
    out.message = std::string("numeric failure: ") + e.what();
  } catch (const Error& e) {
    out.exit_code = kExitInvariant;
    out.message = std::string("invariant violated: ") + e.what();
  } catch (const fs::filesystem_error& e) {
    out.exit_code = kExitSchema;
    out.message = std::string("file error: ") + e.what();
  }
  if (out.exit_code == kExitOk && !checks.failures.empty()) {
    out.exit_code = kExitInvariant;
    out.message = "invariant violated: " + checks.failures[0].get<std::string>();
  }
  ordered_json rep;
  rep["mode"] = mode;
  rep["seed"] = cfg.at("seed");
  rep["exit_code"] = out.exit_code;
  rep["message"] = out.message;
  rep["failures"] = checks.failures;
  if (!body.is_null()) {
    rep["summary"] = body["summary"];
    rep["runs"] = body["runs"];
  }
  out.report = std::move(rep);
  if (out_dir) {
    try {
      write_text(*out_dir / "report.json", out.report.dump(2) + "\n");
    } catch (const Error& e) {
      if (out.exit_code == kExitOk) {
        out.exit_code = kExitSchema;
        out.message = e.what();
      }
    }
  }
  if (out.message.empty()) out.message = "ok";
  return out;
}

RunOutcome run_config_file(const std::string& path, const std::optional<std::string>& out_dir) {
  RunOutcome out;
  std::ifstream f(path);
  if (!f) {
    out.exit_code = kExitSchema;
    out.message = "config error: cannot open config file: " + path;
    return out;
  }
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::exception& e) {
    out.exit_code = kExitSchema;
    out.message = "config schema error in " + path + ": " + e.what();
    return out;
  }
  const std::string base = fs::path(path).parent_path().string();
  return run_config(cfg, base.empty() ? "." : base, out_dir);
}

}  // namespace mz
