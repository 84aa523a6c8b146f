#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace sfr::kernels {

using cd = std::complex<double>;

// Unconjugated dot product: sum_i x[i]*y[i].
cd cdotu(const cd* x, const cd* y, std::size_t n);

// Conjugated dot product: sum_i conj(x[i])*y[i].
cd cdotc(const cd* x, const cd* y, std::size_t n);

// y += a*x
void caxpy(cd a, const cd* x, cd* y, std::size_t n);

// y += a*conj(x)
void caxpy_conj(cd a, const cd* x, cd* y, std::size_t n);

// sum_i |x[i]|^2
double norm2sq(const cd* x, std::size_t n);

// Backend currently in use ("avx2" or "scalar").
std::string_view active_backend();

// Force a backend ("scalar", "avx2", or "auto" for runtime detection).
// Throws std::invalid_argument for unknown or unavailable backends.
void select_backend(std::string_view name);

namespace detail {

struct Ops {
  cd (*cdotu)(const cd*, const cd*, std::size_t);
  cd (*cdotc)(const cd*, const cd*, std::size_t);
  void (*caxpy)(cd, const cd*, cd*, std::size_t);
  void (*caxpy_conj)(cd, const cd*, cd*, std::size_t);
  double (*norm2sq)(const cd*, std::size_t);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when the CPU lacks AVX2+FMA

}  // namespace detail

}  // namespace sfr::kernels
