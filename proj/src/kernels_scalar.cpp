// Reference kernels. Kept deliberately simple; the SIMD variants are
// equivalence-tested against these.

#include "sfradar/kernels/kernels.hpp"

namespace sfr::kernels::detail {

namespace {

cd scalar_cdotu(const cd* x, const cd* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double c = y[i].real(), d = y[i].imag();
    re += a * c - b * d;
    im += a * d + b * c;
  }
  return {re, im};
}

cd scalar_cdotc(const cd* x, const cd* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double c = y[i].real(), d = y[i].imag();
    re += a * c + b * d;
    im += a * d - b * c;
  }
  return {re, im};
}

void scalar_caxpy(cd a, const cd* x, cd* y, std::size_t n) {
  const double p = a.real(), q = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = x[i].real(), d = x[i].imag();
    y[i] += cd{p * c - q * d, p * d + q * c};
  }
}

void scalar_caxpy_conj(cd a, const cd* x, cd* y, std::size_t n) {
  const double p = a.real(), q = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = x[i].real(), d = -x[i].imag();
    y[i] += cd{p * c - q * d, p * d + q * c};
  }
}

double scalar_norm2sq(const cd* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{scalar_cdotu, scalar_cdotc, scalar_caxpy,
                       scalar_caxpy_conj, scalar_norm2sq};
  return ops;
}

}  // namespace sfr::kernels::detail
