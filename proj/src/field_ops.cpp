#include "mz/field_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mz/errors.hpp"
#include "mz/numerics.hpp"
#include "mz/parallel.hpp"

namespace mz {

namespace {

constexpr int kMaxDim = 5;

struct Stencil {
  int n = 0;
  std::array<int, 4> idx{};
  std::array<double, 4> w{};
  void add(int i, double weight) {
    idx[n] = i;
    w[n] = weight;
    ++n;
  }
};

Stencil first_stencil(const Grid& g, int axis, int i) {
  const int n = g.shape[axis];
  const double h = g.spacing;
  Stencil s;
  if (g.boundary == Boundary::kPeriodic || (i > 0 && i < n - 1)) {
    s.add(g.fold(axis, i - 1), -0.5 / h);
    s.add(g.fold(axis, i + 1), 0.5 / h);
  } else if (i == 0) {
    s.add(0, -1.5 / h);
    s.add(1, 2.0 / h);
    s.add(2, -0.5 / h);
  } else {
    s.add(n - 1, 1.5 / h);
    s.add(n - 2, -2.0 / h);
    s.add(n - 3, 0.5 / h);
  }
  return s;
}

Stencil second_stencil(const Grid& g, int axis, int i) {
  const int n = g.shape[axis];
  const double h2 = g.spacing * g.spacing;
  Stencil s;
  if (g.boundary == Boundary::kPeriodic || (i > 0 && i < n - 1)) {
    s.add(g.fold(axis, i - 1), 1.0 / h2);
    s.add(i, -2.0 / h2);
    s.add(g.fold(axis, i + 1), 1.0 / h2);
  } else if (i == 0) {
    s.add(0, 2.0 / h2);
    s.add(1, -5.0 / h2);
    s.add(2, 4.0 / h2);
    s.add(3, -1.0 / h2);
  } else {
    s.add(n - 1, 2.0 / h2);
    s.add(n - 2, -5.0 / h2);
    s.add(n - 3, 4.0 / h2);
    s.add(n - 4, -1.0 / h2);
  }
  return s;
}

std::array<std::size_t, kMaxDim> strides_of(const Grid& g) {
  std::array<std::size_t, kMaxDim> st{};
  st[g.dim - 1] = 1;
  for (int a = g.dim - 2; a >= 0; --a) st[a] = st[a + 1] * static_cast<std::size_t>(g.shape[a + 1]);
  return st;
}

// Derivative of all components at once; alpha given as (axis_a, axis_b),
// axis_b = -1 for first order.
void derivative_all(const GridField& u, const int* multi, int axis_a, int axis_b, double* out) {
  const Grid& g = u.grid;
  const int m = u.components;
  const auto st = strides_of(g);
  const std::size_t base = g.ravel(multi);
  std::fill(out, out + m, 0.0);
  auto accumulate = [&](std::size_t node, double w) {
    const double* v = u.at(node);
    for (int c = 0; c < m; ++c) out[c] += w * v[c];
  };
  auto shift = [&](int axis, int target) {
    return static_cast<std::ptrdiff_t>(target - multi[axis]) * static_cast<std::ptrdiff_t>(st[axis]);
  };
  if (axis_b < 0) {
    const Stencil s = first_stencil(g, axis_a, multi[axis_a]);
    for (int k = 0; k < s.n; ++k) accumulate(base + shift(axis_a, s.idx[k]), s.w[k]);
  } else if (axis_a == axis_b) {
    const Stencil s = second_stencil(g, axis_a, multi[axis_a]);
    for (int k = 0; k < s.n; ++k) accumulate(base + shift(axis_a, s.idx[k]), s.w[k]);
  } else {
    const Stencil sa = first_stencil(g, axis_a, multi[axis_a]);
    const Stencil sb = first_stencil(g, axis_b, multi[axis_b]);
    for (int i = 0; i < sa.n; ++i)
      for (int k = 0; k < sb.n; ++k)
        accumulate(base + shift(axis_a, sa.idx[i]) + shift(axis_b, sb.idx[k]), sa.w[i] * sb.w[k]);
  }
}

void alpha_axes(const MultiIndex& alpha, int& a, int& b) {
  a = -1;
  b = -1;
  for (int ax = 0; ax < static_cast<int>(alpha.size()); ++ax) {
    for (int k = 0; k < alpha[ax]; ++k) {
      if (a < 0)
        a = ax;
      else
        b = ax;
    }
  }
}

}  // namespace

double derivative_at(const GridField& u, int c, const int* multi, const MultiIndex& alpha) {
  int a, b;
  alpha_axes(alpha, a, b);
  if (a < 0) return u(u.grid.ravel(multi), c);
  std::vector<double> tmp(u.components);
  derivative_all(u, multi, a, b, tmp.data());
  return tmp[c];
}

void apply_operator_at(const HomogeneousOperator& op, const GridField& u, const int* multi, double* out) {
  const int m = u.components;
  std::array<double, 128> stack_buf;
  std::vector<double> heap_buf;
  double* d = stack_buf.data();
  if (m > 128) {
    heap_buf.resize(m);
    d = heap_buf.data();
  }
  std::fill(out, out + op.out_components, 0.0);
  for (const auto& t : op.terms) {
    int a, b;
    alpha_axes(t.alpha, a, b);
    derivative_all(u, multi, a, b, d);
    for (int r = 0; r < op.out_components; ++r) {
      double s = 0.0;
      for (int c = 0; c < m; ++c) s += t.coeff(r, c) * d[c];
      out[r] += s;
    }
  }
}

GridField apply_operator(const HomogeneousOperator& op, const GridField& u) {
  if (u.components != op.in_components) throw InvalidArgument("operator input components do not match the field");
  if (u.grid.dim != op.dim) throw InvalidArgument("operator dimension does not match the grid");
  GridField out(u.grid, op.out_components);
  parallel_for(u.nodes(), [&](std::size_t begin, std::size_t end) {
    int multi[kMaxDim];
    for (std::size_t i = begin; i < end; ++i) {
      u.grid.unravel(i, multi);
      apply_operator_at(op, u, multi, out.at(i));
    }
  });
  return out;
}

double derivative_norm_at(const GridField& u, int l, const int* multi) {
  const int m = u.components;
  const int d = u.grid.dim;
  std::vector<double> tmp(m);
  double s = 0.0;
  if (l == 1) {
    for (int a = 0; a < d; ++a) {
      derivative_all(u, multi, a, -1, tmp.data());
      for (double v : tmp) s += v * v;
    }
  } else if (l == 2) {
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) {
        derivative_all(u, multi, a, b, tmp.data());
        const double w = a == b ? 1.0 : 2.0;
        for (double v : tmp) s += w * v * v;
      }
    }
  } else {
    throw InvalidArgument("derivative order must be 1 or 2");
  }
  return std::sqrt(s);
}

bool is_interior(const Grid& g, const int* multi) {
  if (g.boundary == Boundary::kPeriodic) return true;
  for (int a = 0; a < g.dim; ++a)
    if (multi[a] == 0 || multi[a] == g.shape[a] - 1) return false;
  return true;
}

double sup_norm_derivative(const GridField& u, int l) {
  const std::size_t n = u.nodes();
  std::vector<double> per_node(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    int multi[kMaxDim];
    for (std::size_t i = begin; i < end; ++i) {
      u.grid.unravel(i, multi);
      if (is_interior(u.grid, multi)) per_node[i] = derivative_norm_at(u, l, multi);
    }
  });
  return n ? *std::max_element(per_node.begin(), per_node.end()) : 0.0;
}

BallOffsets::BallOffsets(int dim, double max_radius_in_cells) : dim_(dim), max_radius_(max_radius_in_cells) {
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("ball offsets: unsupported dimension");
  const int R = static_cast<int>(std::floor(max_radius_in_cells + 1e-9));
  const long R2 = static_cast<long>(std::floor(max_radius_in_cells * max_radius_in_cells * (1.0 + 1e-12)));
  std::vector<std::pair<long, std::vector<int>>> entries;
  std::vector<int> cur(dim, -R);
  while (true) {
    long n2 = 0;
    for (int v : cur) n2 += static_cast<long>(v) * v;
    if (n2 <= R2) entries.emplace_back(n2, cur);
    int a = dim - 1;
    while (a >= 0 && cur[a] == R) {
      cur[a] = -R;
      --a;
    }
    if (a < 0) break;
    ++cur[a];
  }
  std::sort(entries.begin(), entries.end());
  offsets_.reserve(entries.size() * dim);
  norms2_.reserve(entries.size());
  for (const auto& [n2, o] : entries) {
    norms2_.push_back(n2);
    offsets_.insert(offsets_.end(), o.begin(), o.end());
  }
}

std::size_t BallOffsets::count_within(double radius_in_cells) const {
  if (radius_in_cells > max_radius_ + 1e-9) throw InvalidArgument("ball radius exceeds the offset table");
  const long r2 = static_cast<long>(std::floor(radius_in_cells * radius_in_cells * (1.0 + 1e-12)));
  return static_cast<std::size_t>(std::upper_bound(norms2_.begin(), norms2_.end(), r2) - norms2_.begin());
}

std::vector<double> ball_average(const GridField& u, std::span<const double> center, double r) {
  const Grid& g = u.grid;
  if (static_cast<int>(center.size()) != g.dim) throw InvalidArgument("center dimension mismatch");
  if (!(r >= g.spacing)) throw InvalidArgument("ball radius below grid spacing");
  std::array<int, kMaxDim> lo{}, hi{}, cur{}, folded{};
  for (int a = 0; a < g.dim; ++a) {
    lo[a] = static_cast<int>(std::ceil((center[a] - r - g.origin[a]) / g.spacing - 1e-12));
    hi[a] = static_cast<int>(std::floor((center[a] + r - g.origin[a]) / g.spacing + 1e-12));
    cur[a] = lo[a];
  }
  const double r2 = r * r * (1.0 + 1e-12);
  // Deviations from the first node's value are summed so constants average exactly.
  std::vector<double> sum(u.components, 0.0), ref;
  std::size_t count = 0;
  while (true) {
    double d2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double t = g.coord(a, cur[a]) - center[a];
      d2 += t * t;
    }
    if (d2 <= r2) {
      for (int a = 0; a < g.dim; ++a) folded[a] = g.fold(a, cur[a]);
      const double* v = u.at(g.ravel(folded.data()));
      if (ref.empty()) ref.assign(v, v + u.components);
      for (int c = 0; c < u.components; ++c) sum[c] += v[c] - ref[c];
      ++count;
    }
    int a = g.dim - 1;
    while (a >= 0 && cur[a] == hi[a]) {
      cur[a] = lo[a];
      --a;
    }
    if (a < 0) break;
    ++cur[a];
  }
  if (count == 0) throw InvalidArgument("ball contains no grid nodes");
  for (int c = 0; c < u.components; ++c) sum[c] = ref[c] + sum[c] / static_cast<double>(count);
  return sum;
}

void ball_average_at(const GridField& u, const int* multi, double r, const BallOffsets& offsets, double* out) {
  const Grid& g = u.grid;
  const std::size_t n = offsets.count_within(r / g.spacing);
  const int m = u.components;
  // offsets[0] is the centre; deviations from it keep constants exact.
  const double* ref = u.at(g.ravel(multi));
  std::fill(out, out + m, 0.0);
  int folded[kMaxDim];
  for (std::size_t i = 1; i < n; ++i) {
    const int* o = offsets.offset(i);
    for (int a = 0; a < g.dim; ++a) folded[a] = g.fold(a, multi[a] + o[a]);
    const double* v = u.at(g.ravel(folded));
    for (int c = 0; c < m; ++c) out[c] += v[c] - ref[c];
  }
  for (int c = 0; c < m; ++c) out[c] = ref[c] + out[c] / static_cast<double>(n);
}

bool ball_inside(const Grid& g, std::span<const double> a, double r) {
  const double tol = 1e-9 * g.spacing;
  for (int ax = 0; ax < g.dim; ++ax) {
    if (g.boundary == Boundary::kPeriodic) {
      if (2.0 * r >= g.shape[ax] * g.spacing) return false;
      continue;
    }
    const double lo = g.origin[ax];
    const double hi = g.origin[ax] + g.spacing * (g.shape[ax] - 1);
    if (a[ax] - r < lo - tol || a[ax] + r > hi + tol) return false;
  }
  return true;
}

std::size_t mollify_region(const GridField& src, GridField& dst, std::span<const double> a, double r,
                           const RadialProfile& profile) {
  const Grid& g = src.grid;
  const double h = g.spacing;
  const double outer = 0.875 * r;
  const BallOffsets offsets(g.dim, std::max(1.0, profile.epsilon() * r / h));
  std::array<int, kMaxDim> lo{}, hi{}, cur{};
  for (int ax = 0; ax < g.dim; ++ax) {
    lo[ax] = static_cast<int>(std::ceil((a[ax] - outer - g.origin[ax]) / h - 1e-12));
    hi[ax] = static_cast<int>(std::floor((a[ax] + outer - g.origin[ax]) / h + 1e-12));
    cur[ax] = lo[ax];
  }
  std::vector<double> avg(src.components);
  std::size_t changed = 0;
  std::array<int, kMaxDim> folded{};
  while (true) {
    double d2 = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
      const double t = g.coord(ax, cur[ax]) - a[ax];
      d2 += t * t;
    }
    const double dist = std::sqrt(d2);
    if (dist < outer) {
      const double rho = profile.radius_at(dist);
      if (rho >= h) {
        for (int ax = 0; ax < g.dim; ++ax) folded[ax] = g.fold(ax, cur[ax]);
        ball_average_at(src, folded.data(), rho, offsets, avg.data());
        double* out = dst.at(g.ravel(folded.data()));
        const double* in = src.at(g.ravel(folded.data()));
        bool diff = false;
        for (int c = 0; c < src.components; ++c) {
          out[c] = avg[c];
          if (avg[c] != in[c]) diff = true;
        }
        if (diff) ++changed;
      }
    }
    int ax = g.dim - 1;
    while (ax >= 0 && cur[ax] == hi[ax]) {
      cur[ax] = lo[ax];
      --ax;
    }
    if (ax < 0) break;
    ++cur[ax];
  }
  return changed;
}

GridField variable_mollify(const GridField& u, std::span<const double> a, double r, const RadialProfile& profile) {
  if (static_cast<int>(a.size()) != u.grid.dim) throw InvalidArgument("ball center dimension mismatch");
  if (!ball_inside(u.grid, a, r)) throw InvalidArgument("mollification ball exits the grid domain");
  GridField out = u;
  mollify_region(u, out, a, r, profile);
  return out;
}

std::vector<double> dist_field(const GridField& f, const InflatedBody& body) {
  if (f.components != body.body.dim()) throw InvalidArgument("field components do not match the body dimension");
  std::vector<double> e(f.nodes());
  parallel_for(f.nodes(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) e[i] = body.distance(f.at(i));
  }, 1024);
  return e;
}

L1Dist l1_dist_integral(const GridField& f, const InflatedBody& body, double normaliser) {
  if (!(normaliser > 0.0)) throw InvalidArgument("cannot normalise by a zero sup norm");
  const auto e = dist_field(f, body);
  L1Dist r;
  r.raw = pairwise_sum(e) * f.grid.cell_volume();
  r.lambda = r.raw / normaliser;
  return r;
}

L1Dist l1_dist_integral(const GridField& f, const ConvexBody& body) {
  const double s = sup_norm(body);
  if (!(s > 0.0)) throw InvalidArgument("sup norm of K is zero");
  return l1_dist_integral(f, InflatedBody{body, 0.0}, s);
}

}  // namespace mz
