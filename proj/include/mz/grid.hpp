#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mz {

enum class Boundary { kExtend, kPeriodic };

std::string boundary_name(Boundary b);
Boundary boundary_from_name(const std::string& name);

/// Uniform rectangular grid. Node (i_0, ..., i_{d-1}) sits at
/// origin + h * i; nodes are stored row-major (last axis fastest).
struct Grid {
  int dim = 0;
  std::vector<int> shape;
  double spacing = 1.0;
  std::vector<double> origin;
  Boundary boundary = Boundary::kExtend;

  static Grid make(std::vector<int> shape, double spacing, std::vector<double> origin = {},
                   Boundary boundary = Boundary::kExtend);

  /// Throws InvalidArgument unless 1 <= dim <= 5, every shape entry >= 5,
  /// spacing > 0 and origin has dim finite entries.
  void validate() const;

  std::size_t nodes() const;
  std::vector<std::size_t> strides() const;
  std::size_t ravel(const int* multi) const;
  void unravel(std::size_t index, int* multi) const;
  double coord(int axis, int i) const { return origin[axis] + spacing * i; }
  /// h^d, the weight of one node in discrete integrals.
  double cell_volume() const;
  /// prod(shape) * h^d.
  double volume() const;
  /// (shape - 1) * h along the shortest axis.
  double short_side() const;
  /// Wraps (periodic) or clamps (extend) an index along an axis.
  int fold(int axis, int i) const;

  bool operator==(const Grid& other) const = default;
};

/// Node data with m components per node, component index fastest.
struct GridField {
  Grid grid;
  int components = 1;
  std::vector<double> data;

  GridField() = default;
  GridField(Grid g, int m);

  std::size_t nodes() const { return grid.nodes(); }
  double* at(std::size_t node) { return data.data() + node * components; }
  const double* at(std::size_t node) const { return data.data() + node * components; }
  double& operator()(std::size_t node, int c) { return data[node * components + c]; }
  double operator()(std::size_t node, int c) const { return data[node * components + c]; }
};

}  // namespace mz
