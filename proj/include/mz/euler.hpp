#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "mz/grid.hpp"
#include "mz/operator.hpp"
#include "mz/spectral.hpp"

namespace mz {

/// Symmetric (d+1) x (d+1) matrices are indexed 0..d; index d is the time
/// row. Grids carry time on axis 0, so matrix index a < d lives on axis a + 1.
int matrix_axis(int d, int a);

/// (1 + d/2)(d + 1).
int euler_state_size(int d);

/// Pointwise state. M is stored in full and must be symmetric and trace-free.
struct EulerState {
  double rho = 0.0;
  Eigen::VectorXd m;
  Eigen::MatrixXd M;
  double q = 0.0;

  /// Component order [rho, m_1..m_d, M upper triangle row-major without M_dd, q].
  /// Throws InvalidArgument on asymmetric or traced M beyond tol.
  std::vector<double> to_vector(double tol = 1e-12) const;
  static EulerState from_vector(std::span<const double> z, int d);
};

/// U = (M + q I, m; m^T, rho).
Eigen::MatrixXd state_to_matrix(std::span<const double> z, int d);
/// Inverse of state_to_matrix. Throws InvalidArgument if U is not symmetric
/// to tol relative to max(1, |U|).
std::vector<double> matrix_to_state(const Eigen::MatrixXd& U, int d, double tol = 1e-12);

enum class PotentialIndexing {
  kSpaceTime,   // psi^{ij}_{kl} over all d + 1 matrix indices
  kSpatialOnly  // entries touching the time index fixed to zero
};

struct PotentialIndex {
  int i, j, k, l;  // i < j, k < l, matrix indices
};

std::vector<PotentialIndex> potential_indices(int d, PotentialIndexing indexing = PotentialIndexing::kSpaceTime);
int potential_input_size(int d, PotentialIndexing indexing = PotentialIndexing::kSpaceTime);

/// [[1, -1, 0], [-1, 0, -1], [0, -1, 1]] and its inverse.
const Eigen::Matrix3d& triple_matrix();
const Eigen::Matrix3d& triple_matrix_inverse();

/// Symbol of the potential at xi (axis order), N x N~, built by solving the
/// two Poincare steps on the symbol level.
Eigen::MatrixXd euler_B_symbol(int d, const Eigen::VectorXd& xi, PotentialIndexing indexing = PotentialIndexing::kSpaceTime);

/// d_t m + div M + grad q and d_t rho + div m, rows 0..d-1 and d.
HomogeneousOperator euler_A_operator(int d);
/// Second-order coefficient table of the potential, by polarising the symbol.
HomogeneousOperator euler_B_operator(int d, PotentialIndexing indexing = PotentialIndexing::kSpaceTime);
/// Row divergence of a (d+1)^2-component matrix field (row-major).
HomogeneousOperator row_divergence_operator(int d);

/// Symmetric gradient and its second-order annihilator on symmetric fields
/// (upper triangle row-major).
std::pair<HomogeneousOperator, HomogeneousOperator> symgrad_pair(int d);

/// sum_alpha B^alpha xi^alpha.
Eigen::MatrixXd symbol_matrix(const HomogeneousOperator& op, const Eigen::VectorXd& xi);
/// max |symbol(t xi) - t^l symbol(xi)|, relative to max(1, |t^l symbol(xi)|).
double symbol_homogeneity_defect(const HomogeneousOperator& op, const Eigen::VectorXd& xi, double t);

/// Numerical rank with threshold rel * top singular value.
int numerical_rank(const Eigen::MatrixXd& m, double rel = 1e-8);

struct ExactnessReport {
  int trials = 0;
  double tol = 0.0;
  int a_in = 0;
  double max_composition = 0.0;
  std::vector<int> rank_A, rank_B;
  std::vector<int> failures;  // trial indices failing either check
  bool passed() const { return failures.empty(); }
  nlohmann::ordered_json to_json() const;
};

/// A(xi) B(xi) = 0 and rank B(xi) = in(A) - rank A(xi) at random unit xi.
ExactnessReport exactness_check(const HomogeneousOperator& A, const HomogeneousOperator& B, int trials, double tol,
                                std::uint64_t seed = 0x5eedULL);

enum class DerivativeMode { kSpectral, kFiniteDifference };

/// Residual of the linearised system for an N-component state field on a
/// (d+1)-dimensional grid.
GridField apply_A_euler(const GridField& z, int d, DerivativeMode mode = DerivativeMode::kSpectral);
/// (d+1)^2-component field of state_to_matrix at every node.
GridField state_matrix_field(const GridField& z, int d);
/// Potential applied through the coefficient table.
GridField apply_B_euler(const GridField& psi, int d, DerivativeMode mode = DerivativeMode::kSpectral,
                        PotentialIndexing indexing = PotentialIndexing::kSpaceTime);
/// Streaming spectral variant for inputs too large to hold at once.
GridField apply_B_euler(const Grid& grid, int d, const ComponentSource& psi,
                        PotentialIndexing indexing = PotentialIndexing::kSpaceTime);
/// Potential applied step by step in physical space (divergences of psi,
/// pointwise 3x3 solves for phi, divergence of phi), spectral derivatives.
GridField apply_B_euler_stepwise(const GridField& psi, int d,
                                 PotentialIndexing indexing = PotentialIndexing::kSpaceTime);

/// Random trigonometric polynomials, `modes` terms per component with integer
/// wave vectors in [-kmax, kmax] on the 2 pi torus.
ComponentSource trig_source(const Grid& grid, int components, std::uint64_t seed, int modes = 3, int kmax = 3);
/// Random quadratic polynomials with small integer coefficients.
GridField quadratic_field(const Grid& grid, int components, std::uint64_t seed);

struct EulerRun {
  GridField state;
  nlohmann::ordered_json report;
};

/// Random trigonometric psi on the periodic (d+1)-torus with n nodes per
/// axis; applies B, then A, spectrally.
EulerRun run_euler_potential(int d, int n, std::uint64_t seed);

}  // namespace mz
