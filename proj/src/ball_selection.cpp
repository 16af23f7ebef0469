#include "mz/ball_selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "mz/errors.hpp"
#include "mz/parallel.hpp"

namespace mz {

namespace {

constexpr int kMaxDim = 5;

int isqrt(long v) {
  if (v < 0) return -1;
  long w = static_cast<long>(std::floor(std::sqrt(static_cast<double>(v))));
  while ((w + 1) * (w + 1) <= v) ++w;
  while (w * w > v) --w;
  return static_cast<int>(w);
}

// Prefix sums along the last axis, one (n + 1)-row per grid line.
struct LinePrefix {
  const Grid& g;
  int n;
  std::vector<double> p;

  LinePrefix(const Grid& grid, std::span<const double> e) : g(grid), n(grid.shape[grid.dim - 1]) {
    const std::size_t lines = grid.nodes() / static_cast<std::size_t>(n);
    p.assign(lines * (n + 1), 0.0);
    for (std::size_t l = 0; l < lines; ++l) {
      double* row = p.data() + l * (n + 1);
      const double* src = e.data() + l * n;
      for (int k = 0; k < n; ++k) row[k + 1] = row[k] + src[k];
    }
  }

  // Sum over [lo, hi] on a line, wrapping on periodic grids.
  double segment(std::size_t line, int lo, int hi) const {
    const double* row = p.data() + line * (n + 1);
    if (lo >= 0 && hi < n) return row[hi + 1] - row[lo];
    double s = 0.0;
    for (int k = lo; k <= hi; ++k) {
      const int f = ((k % n) + n) % n;
      s += row[f + 1] - row[f];
    }
    return s;
  }
};

bool lattice_ball_inside(const Grid& g, const int* multi, int R) {
  if (g.boundary == Boundary::kPeriodic) return 2 * R < *std::min_element(g.shape.begin(), g.shape.end());
  for (int a = 0; a < g.dim; ++a)
    if (multi[a] - R < 0 || multi[a] + R > g.shape[a] - 1) return false;
  return true;
}

// Sum and node count of e over the lattice ball |o|^2 <= R^2 around multi.
std::pair<double, long> disc_sum(const Grid& g, const LinePrefix& lp, const int* multi, int R) {
  const int d = g.dim;
  const long R2 = static_cast<long>(R) * R;
  const int last = multi[d - 1];
  double sum = 0.0;
  long count = 0;
  if (d == 1) {
    sum = lp.segment(0, last - R, last + R);
    return {sum, 2L * R + 1};
  }
  std::array<int, kMaxDim> off{}, pos{};
  for (int a = 0; a < d - 1; ++a) off[a] = -R;
  while (true) {
    long s = 0;
    for (int a = 0; a < d - 1; ++a) s += static_cast<long>(off[a]) * off[a];
    if (s <= R2) {
      const int w = isqrt(R2 - s);
      for (int a = 0; a < d - 1; ++a) pos[a] = g.fold(a, multi[a] + off[a]);
      pos[d - 1] = 0;
      const std::size_t line = g.ravel(pos.data()) / static_cast<std::size_t>(g.shape[d - 1]);
      sum += lp.segment(line, last - w, last + w);
      count += 2L * w + 1;
    }
    int a = d - 2;
    while (a >= 0 && off[a] == R) {
      off[a] = -R;
      --a;
    }
    if (a < 0) break;
    ++off[a];
  }
  return {sum, count};
}

}  // namespace

long lattice_dist2(const Grid& g, std::size_t a, std::size_t b) {
  int ma[kMaxDim], mb[kMaxDim];
  g.unravel(a, ma);
  g.unravel(b, mb);
  long s = 0;
  for (int ax = 0; ax < g.dim; ++ax) {
    long t = std::labs(static_cast<long>(ma[ax]) - mb[ax]);
    if (g.boundary == Boundary::kPeriodic) t = std::min(t, static_cast<long>(g.shape[ax]) - t);
    s += t * t;
  }
  return s;
}

BallSelection select_balls(const Grid& g, std::span<const double> e, double theta, double K_sup) {
  if (e.size() != g.nodes()) throw InvalidArgument("select_balls: field size does not match grid");
  const double T = theta * K_sup;
  BallSelection out;
  std::vector<std::size_t> above;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0.0) throw InvalidArgument("select_balls: distance field must be nonnegative");
    if (e[i] > T) above.push_back(i);
  }
  if (above.empty()) return out;

  const int cap = std::max(1, static_cast<int>(std::floor(g.short_side() / (4.0 * g.spacing) + 1e-9)));
  const LinePrefix lp(g, e);
  std::vector<int> radius(above.size(), 0);
  parallel_for(above.size(), [&](std::size_t begin, std::size_t end) {
    int multi[kMaxDim];
    for (std::size_t c = begin; c < end; ++c) {
      g.unravel(above[c], multi);
      for (int R = 1; R <= cap; R *= 2) {
        if (!lattice_ball_inside(g, multi, R)) break;
        const auto [sum, count] = disc_sum(g, lp, multi, R);
        if (sum / static_cast<double>(count) <= T) {
          radius[c] = R;
          break;
        }
      }
    }
  }, 64);

  for (std::size_t c = 0; c < above.size(); ++c) {
    if (radius[c] == 0)
      ++out.unresolved;
    else
      out.candidates.push_back({above[c], radius[c]});
  }
  std::vector<SelectedBall> order = out.candidates;
  std::sort(order.begin(), order.end(), [](const SelectedBall& a, const SelectedBall& b) {
    if (a.radius_cells != b.radius_cells) return a.radius_cells > b.radius_cells;
    return a.node < b.node;
  });
  if (order.empty()) return out;

  // Bucket accepted balls by centre; overlapping centres are at most
  // 2 * max radius apart, so a +-2 bucket window also covers periodic wraps.
  const int S = std::max(1, 2 * order.front().radius_cells);
  std::array<int, kMaxDim> nb{};
  for (int a = 0; a < g.dim; ++a) nb[a] = (g.shape[a] + S - 1) / S;
  std::map<std::vector<int>, std::vector<std::size_t>> buckets;
  int multi[kMaxDim];
  for (const auto& cand : order) {
    g.unravel(cand.node, multi);
    std::vector<int> key(g.dim);
    for (int a = 0; a < g.dim; ++a) key[a] = multi[a] / S;
    bool free = true;
    std::vector<int> off(g.dim, -2);
    while (free) {
      std::vector<int> probe(g.dim);
      bool valid = true;
      for (int a = 0; a < g.dim; ++a) {
        int k = key[a] + off[a];
        if (g.boundary == Boundary::kPeriodic)
          k = ((k % nb[a]) + nb[a]) % nb[a];
        else if (k < 0 || k >= nb[a])
          valid = false;
        probe[a] = k;
      }
      if (valid) {
        auto it = buckets.find(probe);
        if (it != buckets.end()) {
          for (std::size_t idx : it->second) {
            const auto& acc = out.balls[idx];
            const long reach = static_cast<long>(acc.radius_cells) + cand.radius_cells;
            if (lattice_dist2(g, acc.node, cand.node) <= reach * reach) {
              free = false;
              break;
            }
          }
        }
      }
      int a = g.dim - 1;
      while (a >= 0 && off[a] == 2) {
        off[a] = -2;
        --a;
      }
      if (a < 0) break;
      ++off[a];
    }
    if (free) {
      buckets[key].push_back(out.balls.size());
      out.balls.push_back(cand);
    }
  }
  return out;
}

SelectionCheck verify_selection(const Grid& g, const BallSelection& sel) {
  SelectionCheck chk;
  const auto& b = sel.balls;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      const long reach = static_cast<long>(b[i].radius_cells) + b[j].radius_cells;
      if (lattice_dist2(g, b[i].node, b[j].node) <= reach * reach) chk.disjoint = false;
    }
  }
  for (const auto& c : sel.candidates) {
    bool hit = false;
    for (const auto& a : b) {
      const long r5 = 5L * a.radius_cells;
      if (lattice_dist2(g, a.node, c.node) <= r5 * r5) {
        hit = true;
        break;
      }
    }
    if (!hit) ++chk.uncovered;
  }
  chk.covered = chk.uncovered == 0;
  return chk;
}

}  // namespace mz
