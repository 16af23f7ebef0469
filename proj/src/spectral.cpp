#include "mz/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "mz/errors.hpp"

namespace mz {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

}  // namespace

double wavenumber(int k, int n, double h) {
  const int s = k <= n / 2 ? k : k - n;
  return 2.0 * std::numbers::pi * s / (n * h);
}

GridField apply_operator_spectral(const HomogeneousOperator& op, const Grid& g, int in_components,
                                  const ComponentSource& source) {
  op.validate();
  if (g.boundary != Boundary::kPeriodic) throw InvalidArgument("spectral differentiation needs a periodic grid");
  if (op.dim != g.dim) throw InvalidArgument("operator dimension differs from grid dimension");
  if (op.in_components != in_components) throw InvalidArgument("component count mismatch");
  const int d = g.dim;
  const std::size_t n = g.nodes();
  const int last = g.shape[d - 1];
  const int half = last / 2 + 1;
  const std::size_t spec = n / last * half;
  const int k_out = op.out_components;

  std::vector<double> real(n);
  std::unique_ptr<fftw_complex, void (*)(void*)> cbuf_owner(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spec)), fftw_free);
  fftw_complex* cbuf = cbuf_owner.get();
  std::vector<std::complex<double>> acc(spec * k_out, {0.0, 0.0});
  Plans plans;
  {
    std::lock_guard lock(planner_mutex());
    plans.forward = fftw_plan_dft_r2c(d, g.shape.data(), real.data(), cbuf, FFTW_ESTIMATE);
    plans.backward = fftw_plan_dft_c2r(d, g.shape.data(), cbuf, real.data(), FFTW_ESTIMATE);
  }

  // Per-term multiplier i^|alpha| xi^alpha on the half spectrum.
  std::vector<std::vector<std::complex<double>>> mult(op.terms.size(), std::vector<std::complex<double>>(spec));
  {
    std::vector<int> shape_half = g.shape;
    shape_half[d - 1] = half;
    Grid hg = g;
    hg.shape = shape_half;
    int multi[5];
    for (std::size_t t = 0; t < op.terms.size(); ++t) {
      const MultiIndex& al = op.terms[t].alpha;
      const std::complex<double> ipow = op.order == 1 ? std::complex<double>(0.0, 1.0) : std::complex<double>(-1.0, 0.0);
      for (std::size_t s = 0; s < spec; ++s) {
        hg.unravel(s, multi);
        double v = 1.0;
        for (int a = 0; a < d; ++a) {
          if (al[a] == 0) continue;
          const bool nyquist = g.shape[a] % 2 == 0 && multi[a] == g.shape[a] / 2;
          if (nyquist && (al[a] % 2 == 1)) {
            v = 0.0;
            break;
          }
          v *= std::pow(wavenumber(multi[a], g.shape[a], g.spacing), al[a]);
        }
        mult[t][s] = ipow * v;
      }
    }
  }

  for (int c = 0; c < in_components; ++c) {
    source(c, real.data());
    fftw_execute(plans.forward);
    for (std::size_t t = 0; t < op.terms.size(); ++t) {
      const auto& coeff = op.terms[t].coeff;
      for (int k = 0; k < k_out; ++k) {
        const double b = coeff(k, c);
        if (b == 0.0) continue;
        std::complex<double>* dst = acc.data() + static_cast<std::size_t>(k) * spec;
        const auto& mt = mult[t];
        for (std::size_t s = 0; s < spec; ++s) dst[s] += b * mt[s] * std::complex<double>(cbuf[s][0], cbuf[s][1]);
      }
    }
  }

  GridField out(g, k_out);
  const double scale = 1.0 / static_cast<double>(n);
  for (int k = 0; k < k_out; ++k) {
    const std::complex<double>* src = acc.data() + static_cast<std::size_t>(k) * spec;
    for (std::size_t s = 0; s < spec; ++s) {
      cbuf[s][0] = src[s].real();
      cbuf[s][1] = src[s].imag();
    }
    fftw_execute(plans.backward);
    for (std::size_t i = 0; i < n; ++i) out(i, k) = real[i] * scale;
  }
  return out;
}

GridField apply_operator_spectral(const HomogeneousOperator& op, const GridField& u) {
  const int m = u.components;
  const std::size_t n = u.nodes();
  return apply_operator_spectral(op, u.grid, m, [&](int c, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = u(i, c);
  });
}

}  // namespace mz
