#include "mz/operator.hpp"

#include <numeric>
#include <set>

#include "mz/errors.hpp"

namespace mz {

void HomogeneousOperator::validate() const {
  if (order != 1 && order != 2) throw InvalidArgument("operator order must be 1 or 2");
  if (dim < 1) throw InvalidArgument("operator dimension must be positive");
  if (in_components < 1 || out_components < 1) throw InvalidArgument("operator component counts must be positive");
  std::set<MultiIndex> seen;
  bool nonzero = false;
  for (const auto& t : terms) {
    if (static_cast<int>(t.alpha.size()) != dim) throw InvalidArgument("multi-index length must equal dimension");
    int total = 0;
    for (int a : t.alpha) {
      if (a < 0) throw InvalidArgument("multi-index entries must be nonnegative");
      total += a;
    }
    if (total != order) throw InvalidArgument("multi-index order differs from operator order");
    if (!seen.insert(t.alpha).second) throw InvalidArgument("duplicate multi-index in operator");
    if (t.coeff.rows() != out_components || t.coeff.cols() != in_components)
      throw InvalidArgument("coefficient matrix shape mismatch");
    if (!t.coeff.allFinite()) throw InvalidArgument("coefficient matrix not finite");
    if (t.coeff.squaredNorm() > 0.0) nonzero = true;
  }
  if (!nonzero) throw InvalidArgument("operator has no nonzero coefficient");
}

double HomogeneousOperator::c1() const {
  double s = 0.0;
  for (const auto& t : terms) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.coeff);
    s += svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  }
  return (order == 1 ? 9.0 : 36.0) * s;
}

std::vector<MultiIndex> multi_indices(int dim, int order) {
  std::vector<MultiIndex> out;
  MultiIndex cur(dim, 0);
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == dim - 1) {
      cur[axis] = left;
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[axis] = k;
      self(self, axis + 1, left - k);
    }
  };
  rec(rec, 0, order);
  return out;
}

int sym_size(int dim) { return dim * (dim + 1) / 2; }

int sym_index(int dim, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * dim - i * (i - 1) / 2 + (j - i);
}

namespace {
MultiIndex unit(int dim, int a) {
  MultiIndex m(dim, 0);
  m[a] = 1;
  return m;
}
}  // namespace

HomogeneousOperator gradient_operator(int dim) {
  HomogeneousOperator op{1, dim, 1, dim, {}};
  for (int a = 0; a < dim; ++a) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, 1);
    c(a, 0) = 1.0;
    op.terms.push_back({unit(dim, a), c});
  }
  return op;
}

HomogeneousOperator symgrad_operator(int dim) {
  const int k = sym_size(dim);
  HomogeneousOperator op{1, dim, dim, k, {}};
  for (int a = 0; a < dim; ++a) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, dim);
    // e_ij = (d_i u_j + d_j u_i) / 2; the d_a part.
    for (int j = 0; j < dim; ++j) c(sym_index(dim, a, j), j) += 0.5;
    c(sym_index(dim, a, a), a) += 0.5;
    op.terms.push_back({unit(dim, a), c});
  }
  return op;
}

HomogeneousOperator laplacian_operator(int dim) {
  HomogeneousOperator op{2, dim, 1, 1, {}};
  for (int a = 0; a < dim; ++a) {
    MultiIndex m(dim, 0);
    m[a] = 2;
    op.terms.push_back({m, Eigen::MatrixXd::Ones(1, 1)});
  }
  return op;
}

HomogeneousOperator hessian_operator(int dim) {
  const int k = sym_size(dim);
  HomogeneousOperator op{2, dim, 1, k, {}};
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      MultiIndex m(dim, 0);
      m[i] += 1;
      m[j] += 1;
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, 1);
      c(sym_index(dim, i, j), 0) = 1.0;
      op.terms.push_back({m, c});
    }
  }
  return op;
}

HomogeneousOperator operator_from_json(const nlohmann::json& j, int dim) {
  try {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      if (name == "gradient") return gradient_operator(dim);
      if (name == "symgrad") return symgrad_operator(dim);
      if (name == "laplacian") return laplacian_operator(dim);
      if (name == "hessian") return hessian_operator(dim);
      throw FormatError("unknown builtin operator '" + name + "'");
    }
    HomogeneousOperator op;
    op.order = j.at("order").get<int>();
    op.dim = dim;
    op.in_components = j.at("in_components").get<int>();
    op.out_components = j.at("out_components").get<int>();
    for (const auto& t : j.at("terms")) {
      OperatorTerm term;
      term.alpha = t.at("alpha").get<MultiIndex>();
      const auto rows = t.at("coeff").get<std::vector<std::vector<double>>>();
      term.coeff = Eigen::MatrixXd::Zero(op.out_components, op.in_components);
      if (static_cast<int>(rows.size()) != op.out_components) throw FormatError("coefficient row count mismatch");
      for (int r = 0; r < op.out_components; ++r) {
        if (static_cast<int>(rows[r].size()) != op.in_components) throw FormatError("coefficient column count mismatch");
        for (int c = 0; c < op.in_components; ++c) term.coeff(r, c) = rows[r][c];
      }
      op.terms.push_back(std::move(term));
    }
    op.validate();
    return op;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed operator: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid operator: ") + e.what());
  }
}

nlohmann::ordered_json operator_to_json(const HomogeneousOperator& op) {
  nlohmann::ordered_json j;
  j["order"] = op.order;
  j["in_components"] = op.in_components;
  j["out_components"] = op.out_components;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& t : op.terms) {
    nlohmann::ordered_json tj;
    tj["alpha"] = t.alpha;
    std::vector<std::vector<double>> rows(t.coeff.rows(), std::vector<double>(t.coeff.cols()));
    for (int r = 0; r < t.coeff.rows(); ++r)
      for (int c = 0; c < t.coeff.cols(); ++c) rows[r][c] = t.coeff(r, c);
    tj["coeff"] = rows;
    terms.push_back(tj);
  }
  j["terms"] = terms;
  return j;
}

}  // namespace mz
