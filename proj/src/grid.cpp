#include "mz/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mz/errors.hpp"

namespace mz {

std::string boundary_name(Boundary b) { return b == Boundary::kPeriodic ? "periodic" : "extend"; }

Boundary boundary_from_name(const std::string& name) {
  if (name == "extend") return Boundary::kExtend;
  if (name == "periodic") return Boundary::kPeriodic;
  throw FormatError("unknown boundary '" + name + "'");
}

Grid Grid::make(std::vector<int> shape, double spacing, std::vector<double> origin, Boundary boundary) {
  Grid g;
  g.dim = static_cast<int>(shape.size());
  g.shape = std::move(shape);
  g.spacing = spacing;
  g.origin = origin.empty() ? std::vector<double>(g.dim, 0.0) : std::move(origin);
  g.boundary = boundary;
  g.validate();
  return g;
}

void Grid::validate() const {
  if (dim < 1 || dim > 5) throw InvalidArgument("grid dimension must be between 1 and 5");
  if (static_cast<int>(shape.size()) != dim || static_cast<int>(origin.size()) != dim)
    throw InvalidArgument("grid shape/origin length must equal dim");
  for (int n : shape)
    if (n < 5) throw InvalidArgument("grid shape entries must be at least 5");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidArgument("grid spacing must be positive");
  for (double o : origin)
    if (!std::isfinite(o)) throw InvalidArgument("grid origin must be finite");
}

std::size_t Grid::nodes() const {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

std::vector<std::size_t> Grid::strides() const {
  std::vector<std::size_t> st(dim, 1);
  for (int a = dim - 2; a >= 0; --a) st[a] = st[a + 1] * static_cast<std::size_t>(shape[a + 1]);
  return st;
}

std::size_t Grid::ravel(const int* multi) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) idx = idx * static_cast<std::size_t>(shape[a]) + static_cast<std::size_t>(multi[a]);
  return idx;
}

void Grid::unravel(std::size_t index, int* multi) const {
  for (int a = dim - 1; a >= 0; --a) {
    multi[a] = static_cast<int>(index % static_cast<std::size_t>(shape[a]));
    index /= static_cast<std::size_t>(shape[a]);
  }
}

double Grid::cell_volume() const { return std::pow(spacing, dim); }

double Grid::volume() const { return static_cast<double>(nodes()) * cell_volume(); }

double Grid::short_side() const {
  return spacing * (*std::min_element(shape.begin(), shape.end()) - 1);
}

int Grid::fold(int axis, int i) const {
  const int n = shape[axis];
  if (boundary == Boundary::kPeriodic) {
    i %= n;
    return i < 0 ? i + n : i;
  }
  return std::clamp(i, 0, n - 1);
}

GridField::GridField(Grid g, int m) : grid(std::move(g)), components(m) {
  if (m < 1) throw InvalidArgument("field needs at least one component");
  grid.validate();
  data.assign(grid.nodes() * static_cast<std::size_t>(m), 0.0);
}

}  // namespace mz
