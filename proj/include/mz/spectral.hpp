#pragma once

#include <functional>

#include "mz/grid.hpp"
#include "mz/operator.hpp"

namespace mz {

/// Angular wavenumber of FFT bin k along an axis with n nodes and spacing h.
double wavenumber(int k, int n, double h);

/// Fills component c of the input, one value per node in grid order.
using ComponentSource = std::function<void(int c, double* out)>;

/// B u by Fourier multipliers on a periodic grid: sum_alpha B^alpha (i xi)^alpha.
/// Odd-order and mixed derivatives drop the Nyquist bin. Inputs are pulled one
/// component at a time, so only the output is held in memory.
GridField apply_operator_spectral(const HomogeneousOperator& op, const Grid& grid, int in_components,
                                  const ComponentSource& source);
GridField apply_operator_spectral(const HomogeneousOperator& op, const GridField& u);

}  // namespace mz
