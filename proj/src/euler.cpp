#include "mz/euler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "mz/errors.hpp"
#include "mz/field_ops.hpp"

namespace mz {

int matrix_axis(int d, int a) { return a < d ? a + 1 : 0; }

int euler_state_size(int d) { return (d + 1) * (d + 2) / 2; }

namespace {

void check_dim(int d) {
  if (d < 1 || d > 4) throw InvalidArgument("Euler state dimension must be in 1..4");
}

// Calls f(a, b, slot) for the stored M entries, a <= b, skipping (d-1, d-1).
template <class F>
void for_each_M_slot(int d, F&& f) {
  int slot = 1 + d;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      if (a == d - 1 && b == d - 1) continue;
      f(a, b, slot++);
    }
}

}  // namespace

std::vector<double> EulerState::to_vector(double tol) const {
  const int d = static_cast<int>(m.size());
  check_dim(d);
  if (M.rows() != d || M.cols() != d) throw InvalidArgument("M must be d x d");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol * scale) throw InvalidArgument("M is not symmetric");
  if (std::abs(M.trace()) > tol * scale) throw InvalidArgument("M is not trace-free");
  std::vector<double> z(euler_state_size(d));
  z[0] = rho;
  for (int a = 0; a < d; ++a) z[1 + a] = m[a];
  for_each_M_slot(d, [&](int a, int b, int s) { z[s] = M(a, b); });
  z.back() = q;
  return z;
}

EulerState EulerState::from_vector(std::span<const double> z, int d) {
  check_dim(d);
  if (static_cast<int>(z.size()) != euler_state_size(d)) throw InvalidArgument("state vector has wrong length");
  EulerState s;
  s.rho = z[0];
  s.m.resize(d);
  for (int a = 0; a < d; ++a) s.m[a] = z[1 + a];
  s.M = Eigen::MatrixXd::Zero(d, d);
  for_each_M_slot(d, [&](int a, int b, int k) {
    s.M(a, b) = z[k];
    s.M(b, a) = z[k];
  });
  double tr = 0.0;
  for (int a = 0; a < d - 1; ++a) tr += s.M(a, a);
  s.M(d - 1, d - 1) = -tr;
  s.q = z.back();
  return s;
}

Eigen::MatrixXd state_to_matrix(std::span<const double> z, int d) {
  const EulerState s = EulerState::from_vector(z, d);
  Eigen::MatrixXd U(d + 1, d + 1);
  U.topLeftCorner(d, d) = s.M + s.q * Eigen::MatrixXd::Identity(d, d);
  U.topRightCorner(d, 1) = s.m;
  U.bottomLeftCorner(1, d) = s.m.transpose();
  U(d, d) = s.rho;
  return U;
}

std::vector<double> matrix_to_state(const Eigen::MatrixXd& U, int d, double tol) {
  check_dim(d);
  if (U.rows() != d + 1 || U.cols() != d + 1) throw InvalidArgument("matrix must be (d+1) x (d+1)");
  const double scale = std::max(1.0, U.cwiseAbs().maxCoeff());
  if ((U - U.transpose()).cwiseAbs().maxCoeff() > tol * scale) throw InvalidArgument("matrix is not symmetric");
  EulerState s;
  s.rho = U(d, d);
  s.m = 0.5 * (U.topRightCorner(d, 1) + U.bottomLeftCorner(1, d).transpose());
  const Eigen::MatrixXd block = 0.5 * (U.topLeftCorner(d, d) + U.topLeftCorner(d, d).transpose());
  s.q = block.trace() / d;
  s.M = block - s.q * Eigen::MatrixXd::Identity(d, d);
  std::vector<double> z(euler_state_size(d));
  z[0] = s.rho;
  for (int a = 0; a < d; ++a) z[1 + a] = s.m[a];
  for_each_M_slot(d, [&](int a, int b, int k) { z[k] = s.M(a, b); });
  z.back() = s.q;
  return z;
}

std::vector<PotentialIndex> potential_indices(int d, PotentialIndexing indexing) {
  if (d < 3) throw InvalidArgument("the potential needs d >= 3");
  const int limit = indexing == PotentialIndexing::kSpaceTime ? d + 1 : d;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < limit; ++i)
    for (int j = i + 1; j < limit; ++j) pairs.emplace_back(i, j);
  std::vector<PotentialIndex> out;
  for (const auto& [i, j] : pairs)
    for (const auto& [k, l] : pairs) out.push_back({i, j, k, l});
  return out;
}

int potential_input_size(int d, PotentialIndexing indexing) {
  return static_cast<int>(potential_indices(d, indexing).size());
}

const Eigen::Matrix3d& triple_matrix() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 1, -1, 0, -1, 0, -1, 0, -1, 1).finished();
  return m;
}

const Eigen::Matrix3d& triple_matrix_inverse() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, 0.5).finished();
  return m;
}

namespace {

// phi^a_{bc} from the divergences D^{ab}_c of the antisymmetric psi^{ab}.
// dv(a, b, c) must be antisymmetric in (a, b).
template <class DV>
void solve_phi(int D, DV&& dv, std::vector<double>& phi) {
  phi.assign(static_cast<std::size_t>(D) * D * D, 0.0);
  auto P = [&](int a, int b, int c) -> double& { return phi[(static_cast<std::size_t>(a) * D + b) * D + c]; };
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      if (a == b) continue;
      const double v = dv(a, b, a);
      P(a, b, a) = v;
      P(a, a, b) = -v;
    }
  const Eigen::Matrix3d& inv = triple_matrix_inverse();
  for (int a = 0; a < D; ++a)
    for (int b = a + 1; b < D; ++b)
      for (int c = b + 1; c < D; ++c) {
        const Eigen::Vector3d x = inv * Eigen::Vector3d(dv(a, b, c), dv(a, c, b), dv(b, c, a));
        P(a, b, c) = x[0];
        P(a, c, b) = -x[0];
        P(b, a, c) = x[1];
        P(b, c, a) = -x[1];
        P(c, a, b) = x[2];
        P(c, b, a) = -x[2];
      }
}

using SymbolFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

HomogeneousOperator operator_from_symbol(int order, int dim, int in, int out, const SymbolFn& fn) {
  HomogeneousOperator op{order, dim, in, out, {}};
  auto unit = [&](int a) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[a] = 1.0;
    return e;
  };
  for (const MultiIndex& al : multi_indices(dim, order)) {
    Eigen::MatrixXd c;
    std::vector<int> axes;
    for (int a = 0; a < dim; ++a)
      for (int r = 0; r < al[a]; ++r) axes.push_back(a);
    if (order == 1 || axes[0] == axes[1]) {
      c = fn(unit(axes[0]));
    } else {
      c = fn(unit(axes[0]) + unit(axes[1])) - fn(unit(axes[0])) - fn(unit(axes[1]));
    }
    const double big = std::max(1.0, c.cwiseAbs().maxCoeff());
    c = c.unaryExpr([&](double v) { return std::abs(v) < 1e-13 * big ? 0.0 : v; });
    if (c.squaredNorm() > 0.0) op.terms.push_back({al, c});
  }
  op.validate();
  return op;
}

}  // namespace

Eigen::MatrixXd euler_B_symbol(int d, const Eigen::VectorXd& xi, PotentialIndexing indexing) {
  const int D = d + 1;
  if (xi.size() != D) throw InvalidArgument("frequency must have d + 1 entries");
  Eigen::VectorXd xm(D);
  for (int b = 0; b < D; ++b) xm[b] = xi[matrix_axis(d, b)];
  const auto idx = potential_indices(d, indexing);
  Eigen::MatrixXd out(euler_state_size(d), idx.size());
  std::vector<double> dv(static_cast<std::size_t>(D) * D * D), phi;
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const auto [i, j, k, l] = idx[n];
    std::fill(dv.begin(), dv.end(), 0.0);
    auto DV = [&](int a, int b, int c) -> double& { return dv[(static_cast<std::size_t>(a) * D + b) * D + c]; };
    // psi^{ij}_{kl} = 1 with both antisymmetries; D^{ij}_c = sum_e psi^{ij}_{ce} xi_e.
    DV(i, j, k) += xm[l];
    DV(i, j, l) -= xm[k];
    DV(j, i, k) -= xm[l];
    DV(j, i, l) += xm[k];
    solve_phi(D, [&](int a, int b, int c) { return DV(a, b, c); }, phi);
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(D, D);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b)
        for (int c = 0; c < D; ++c) U(a, b) += phi[(static_cast<std::size_t>(a) * D + b) * D + c] * xm[c];
    const auto z = matrix_to_state(U, d, 1e-12);
    for (int r = 0; r < out.rows(); ++r) out(r, static_cast<Eigen::Index>(n)) = z[r];
  }
  return out;
}

HomogeneousOperator euler_A_operator(int d) {
  check_dim(d);
  const int D = d + 1;
  const int N = euler_state_size(d);
  HomogeneousOperator op{1, D, N, D, {}};
  std::vector<Eigen::MatrixXd> coeff(D, Eigen::MatrixXd::Zero(D, N));
  std::vector<double> e(N, 0.0);
  for (int n = 0; n < N; ++n) {
    std::fill(e.begin(), e.end(), 0.0);
    e[n] = 1.0;
    const Eigen::MatrixXd U = state_to_matrix(e, d);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) coeff[matrix_axis(d, b)](a, n) += U(a, b);
  }
  for (int ax = 0; ax < D; ++ax) {
    MultiIndex al(D, 0);
    al[ax] = 1;
    op.terms.push_back({al, coeff[ax]});
  }
  op.validate();
  return op;
}

HomogeneousOperator euler_B_operator(int d, PotentialIndexing indexing) {
  const int D = d + 1;
  return operator_from_symbol(2, D, potential_input_size(d, indexing), euler_state_size(d),
                              [&](const Eigen::VectorXd& xi) { return euler_B_symbol(d, xi, indexing); });
}

HomogeneousOperator row_divergence_operator(int d) {
  const int D = d + 1;
  HomogeneousOperator op{1, D, D * D, D, {}};
  for (int ax = 0; ax < D; ++ax) {
    MultiIndex al(D, 0);
    al[ax] = 1;
    op.terms.push_back({al, Eigen::MatrixXd::Zero(D, D * D)});
  }
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) op.terms[matrix_axis(d, b)].coeff(a, a * D + b) = 1.0;
  op.validate();
  return op;
}

std::pair<HomogeneousOperator, HomogeneousOperator> symgrad_pair(int d) {
  if (d < 2) throw InvalidArgument("symmetric gradient pair needs d >= 2");
  const int s = sym_size(d);
  auto annihilator = [d, s](const Eigen::VectorXd& xi) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(s, s);
    for (int pa = 0; pa < d; ++pa)
      for (int pb = pa; pb < d; ++pb) {
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(d, d);
        f(pa, pb) = 1.0;
        f(pb, pa) = 1.0;
        const int col = sym_index(d, pa, pb);
        for (int j = 0; j < d; ++j)
          for (int k = j; k < d; ++k) {
            double v = 0.0;
            for (int i = 0; i < d; ++i)
              v += xi[i] * xi[k] * f(i, j) + xi[i] * xi[j] * f(i, k) - xi[j] * xi[k] * f(i, i) - xi[i] * xi[i] * f(j, k);
            out(sym_index(d, j, k), col) = v;
          }
      }
    return out;
  };
  return {symgrad_operator(d), operator_from_symbol(2, d, s, s, annihilator)};
}

Eigen::MatrixXd symbol_matrix(const HomogeneousOperator& op, const Eigen::VectorXd& xi) {
  if (xi.size() != op.dim) throw InvalidArgument("frequency dimension mismatch");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(op.out_components, op.in_components);
  for (const auto& t : op.terms) {
    double mono = 1.0;
    for (int a = 0; a < op.dim; ++a)
      for (int r = 0; r < t.alpha[a]; ++r) mono *= xi[a];
    s += mono * t.coeff;
  }
  return s;
}

double symbol_homogeneity_defect(const HomogeneousOperator& op, const Eigen::VectorXd& xi, double t) {
  const Eigen::MatrixXd a = symbol_matrix(op, t * xi);
  const Eigen::MatrixXd b = std::pow(t, op.order) * symbol_matrix(op, xi);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rel * sv[0]) ++r;
  return r;
}

nlohmann::ordered_json ExactnessReport::to_json() const {
  nlohmann::ordered_json j;
  j["trials"] = trials;
  j["tol"] = tol;
  j["A_in"] = a_in;
  j["max_composition"] = max_composition;
  j["rank_A"] = rank_A;
  j["rank_B"] = rank_B;
  j["failures"] = failures;
  j["passed"] = passed();
  return j;
}

ExactnessReport exactness_check(const HomogeneousOperator& A, const HomogeneousOperator& B, int trials, double tol,
                                std::uint64_t seed) {
  if (A.in_components != B.out_components) throw InvalidArgument("B's output count must equal A's input count");
  if (A.dim != B.dim) throw InvalidArgument("A and B act on different dimensions");
  if (trials < 1) throw InvalidArgument("trials must be positive");
  ExactnessReport rep;
  rep.trials = trials;
  rep.tol = tol;
  rep.a_in = A.in_components;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd xi(A.dim);
    do {
      for (int a = 0; a < A.dim; ++a) xi[a] = normal(rng);
    } while (xi.norm() == 0.0);
    xi /= xi.norm();
    const Eigen::MatrixXd sa = symbol_matrix(A, xi);
    const Eigen::MatrixXd sb = symbol_matrix(B, xi);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sa * sb);
    const double comp = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    rep.max_composition = std::max(rep.max_composition, comp);
    const int ra = numerical_rank(sa), rb = numerical_rank(sb);
    rep.rank_A.push_back(ra);
    rep.rank_B.push_back(rb);
    if (comp > tol || rb != A.in_components - ra) rep.failures.push_back(t);
  }
  return rep;
}

namespace {

void check_state_field(const GridField& z, int d) {
  check_dim(d);
  if (z.grid.dim != d + 1) throw InvalidArgument("state fields live on (d+1)-dimensional grids");
  if (z.components != euler_state_size(d)) throw InvalidArgument("state field has the wrong component count");
}

}  // namespace

GridField apply_A_euler(const GridField& z, int d, DerivativeMode mode) {
  check_state_field(z, d);
  const HomogeneousOperator A = euler_A_operator(d);
  return mode == DerivativeMode::kSpectral ? apply_operator_spectral(A, z) : apply_operator(A, z);
}

GridField state_matrix_field(const GridField& z, int d) {
  check_state_field(z, d);
  const int D = d + 1;
  GridField out(z.grid, D * D);
  for (std::size_t i = 0; i < z.nodes(); ++i) {
    const Eigen::MatrixXd U = state_to_matrix(std::span<const double>(z.at(i), z.components), d);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) out(i, a * D + b) = U(a, b);
  }
  return out;
}

GridField apply_B_euler(const GridField& psi, int d, DerivativeMode mode, PotentialIndexing indexing) {
  if (psi.grid.dim != d + 1) throw InvalidArgument("potential inputs live on (d+1)-dimensional grids");
  if (psi.components != potential_input_size(d, indexing))
    throw InvalidArgument("wrong number of potential inputs: got " + std::to_string(psi.components) + ", need " +
                          std::to_string(potential_input_size(d, indexing)));
  const HomogeneousOperator B = euler_B_operator(d, indexing);
  return mode == DerivativeMode::kSpectral ? apply_operator_spectral(B, psi) : apply_operator(B, psi);
}

GridField apply_B_euler(const Grid& grid, int d, const ComponentSource& psi, PotentialIndexing indexing) {
  if (grid.dim != d + 1) throw InvalidArgument("potential inputs live on (d+1)-dimensional grids");
  const HomogeneousOperator B = euler_B_operator(d, indexing);
  return apply_operator_spectral(B, grid, B.in_components, psi);
}

GridField apply_B_euler_stepwise(const GridField& psi, int d, PotentialIndexing indexing) {
  const auto idx = potential_indices(d, indexing);
  if (psi.grid.dim != d + 1) throw InvalidArgument("potential inputs live on (d+1)-dimensional grids");
  if (psi.components != static_cast<int>(idx.size())) throw InvalidArgument("wrong number of potential inputs");
  const int D = d + 1;
  auto pair_slot = [D](int i, int j) {
    int s = 0;
    for (int a = 0; a < i; ++a) s += D - 1 - a;
    return s + (j - i - 1);
  };
  const int P = D * (D - 1) / 2;

  // Divergences D^{ij}_k = sum_l d_l psi^{ij}_{kl}, stored for i < j.
  HomogeneousOperator div_op{1, D, psi.components, P * D, {}};
  for (int ax = 0; ax < D; ++ax) {
    MultiIndex al(D, 0);
    al[ax] = 1;
    div_op.terms.push_back({al, Eigen::MatrixXd::Zero(P * D, psi.components)});
  }
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const auto [i, j, k, l] = idx[n];
    const int p = pair_slot(i, j);
    div_op.terms[matrix_axis(d, l)].coeff(p * D + k, static_cast<Eigen::Index>(n)) += 1.0;
    div_op.terms[matrix_axis(d, k)].coeff(p * D + l, static_cast<Eigen::Index>(n)) -= 1.0;
  }
  const GridField dv = apply_operator_spectral(div_op, psi);

  GridField phi(psi.grid, D * D * D);
  std::vector<double> local;
  for (std::size_t node = 0; node < psi.nodes(); ++node) {
    const double* src = dv.at(node);
    solve_phi(D, [&](int a, int b, int c) {
      if (a == b) return 0.0;
      return a < b ? src[pair_slot(a, b) * D + c] : -src[pair_slot(b, a) * D + c];
    }, local);
    std::copy(local.begin(), local.end(), phi.at(node));
  }

  // U_ab = sum_c d_c phi^a_{bc}.
  HomogeneousOperator u_op{1, D, D * D * D, D * D, {}};
  for (int ax = 0; ax < D; ++ax) {
    MultiIndex al(D, 0);
    al[ax] = 1;
    u_op.terms.push_back({al, Eigen::MatrixXd::Zero(D * D, D * D * D)});
  }
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c) u_op.terms[matrix_axis(d, c)].coeff(a * D + b, (a * D + b) * D + c) = 1.0;
  const GridField U = apply_operator_spectral(u_op, phi);

  GridField out(psi.grid, euler_state_size(d));
  Eigen::MatrixXd Um(D, D);
  for (std::size_t node = 0; node < psi.nodes(); ++node) {
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) Um(a, b) = U(node, a * D + b);
    const auto z = matrix_to_state(Um, d, 1e-8);
    std::copy(z.begin(), z.end(), out.at(node));
  }
  return out;
}

ComponentSource trig_source(const Grid& grid, int components, std::uint64_t seed, int modes, int kmax) {
  struct Mode {
    std::vector<int> k;
    double amp, phase;
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> wave(-kmax, kmax);
  std::vector<std::vector<Mode>> table(components);
  for (int c = 0; c < components; ++c)
    for (int t = 0; t < modes; ++t) {
      Mode m;
      for (int a = 0; a < grid.dim; ++a) m.k.push_back(wave(rng));
      m.amp = normal(rng);
      m.phase = phase(rng);
      table[c].push_back(std::move(m));
    }
  return [grid, table](int c, double* out) {
    const std::size_t n = grid.nodes();
    int multi[5];
    for (std::size_t i = 0; i < n; ++i) {
      grid.unravel(i, multi);
      double v = 0.0;
      for (const Mode& m : table[c]) {
        double arg = m.phase;
        for (int a = 0; a < grid.dim; ++a) arg += m.k[a] * grid.coord(a, multi[a]);
        v += m.amp * std::cos(arg);
      }
      out[i] = v;
    }
  };
}

GridField quadratic_field(const Grid& grid, int components, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  const int d = grid.dim;
  GridField out(grid, components);
  int multi[5];
  for (int c = 0; c < components; ++c) {
    std::vector<double> quad(d * d, 0.0), lin(d);
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) quad[a * d + b] = coef(rng);
    for (int a = 0; a < d; ++a) lin[a] = coef(rng);
    const double c0 = coef(rng);
    for (std::size_t i = 0; i < out.nodes(); ++i) {
      grid.unravel(i, multi);
      double v = c0;
      for (int a = 0; a < d; ++a) {
        const double xa = grid.coord(a, multi[a]);
        v += lin[a] * xa;
        for (int b = a; b < d; ++b) v += quad[a * d + b] * xa * grid.coord(b, multi[b]);
      }
      out(i, c) = v;
    }
  }
  return out;
}

EulerRun run_euler_potential(int d, int n, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  if (d < 3 || d > 4) throw InvalidArgument("euler-potential supports d = 3 or 4");
  if (n < 5) throw InvalidArgument("grid must have at least 5 nodes per axis");
  const int D = d + 1;
  const Grid grid = Grid::make(std::vector<int>(D, n), 2.0 * std::numbers::pi / n, {}, Boundary::kPeriodic);
  const int inputs = potential_input_size(d);
  EulerRun run;
  run.state = apply_B_euler(grid, d, trig_source(grid, inputs, seed));
  const GridField a = apply_A_euler(run.state, d, DerivativeMode::kSpectral);

  double u_sup = 0.0, sym_defect = 0.0, trace_defect = 0.0;
  for (std::size_t i = 0; i < run.state.nodes(); ++i) {
    const std::span<const double> z(run.state.at(i), run.state.components);
    const Eigen::MatrixXd U = state_to_matrix(z, d);
    u_sup = std::max(u_sup, U.cwiseAbs().maxCoeff());
    sym_defect = std::max(sym_defect, (U - U.transpose()).cwiseAbs().maxCoeff());
    const EulerState s = EulerState::from_vector(z, d);
    trace_defect = std::max(trace_defect, std::abs(s.M.trace()));
  }
  double a_sup = 0.0;
  for (double v : a.data) a_sup = std::max(a_sup, std::abs(v));

  auto& r = run.report;
  r["d"] = d;
  r["grid"] = std::vector<int>(D, n);
  r["seed"] = seed;
  r["inputs"] = inputs;
  r["state_components"] = euler_state_size(d);
  r["U_sup"] = u_sup;
  r["A_sup"] = a_sup;
  r["relative_residual"] = u_sup > 0.0 ? a_sup / u_sup : 0.0;
  r["tolerance"] = 1e-10;
  r["symmetry_defect"] = sym_defect;
  r["trace_defect"] = trace_defect;
  r["passed"] = u_sup > 0.0 && a_sup <= 1e-10 * u_sup;
  r["wall_clock"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

}  // namespace mz
