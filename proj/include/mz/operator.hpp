#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "json.hpp"

namespace mz {

/// Multi-index as per-axis derivative counts, e.g. {1, 1} = d^2/dx0 dx1.
using MultiIndex = std::vector<int>;

struct OperatorTerm {
  MultiIndex alpha;
  Eigen::MatrixXd coeff;  // out_components x in_components
};

/// B = sum_alpha B^alpha d_alpha with |alpha| = order. A mixed multi-index
/// appears once; its coefficient is the full symmetric sum B^{ij} + B^{ji}.
struct HomogeneousOperator {
  int order = 1;
  int dim = 1;
  int in_components = 1;
  int out_components = 1;
  std::vector<OperatorTerm> terms;

  /// Throws InvalidArgument on any broken invariant (wrong |alpha|, shape,
  /// duplicate multi-index, all coefficients zero).
  void validate() const;

  /// Lemma constant: 9 sum |B^i| (order 1) or 36 sum_{i,j} |B^{ij}|
  /// (order 2), spectral norms; a mixed term contributes |B^alpha| in total.
  double c1() const;
};

/// All multi-indices with |alpha| = order in `dim` variables, lexicographically
/// descending (e_0 first).
std::vector<MultiIndex> multi_indices(int dim, int order);

HomogeneousOperator gradient_operator(int dim);
/// Symmetric gradient e(u); outputs the upper triangle row-major.
HomogeneousOperator symgrad_operator(int dim);
HomogeneousOperator laplacian_operator(int dim);
HomogeneousOperator hessian_operator(int dim);

/// Upper-triangle row-major position of (i, j), i <= j, in a dim x dim matrix.
int sym_index(int dim, int i, int j);
int sym_size(int dim);

HomogeneousOperator operator_from_json(const nlohmann::json& j, int dim);
nlohmann::ordered_json operator_to_json(const HomogeneousOperator& op);

}  // namespace mz
