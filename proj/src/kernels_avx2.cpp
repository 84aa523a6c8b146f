// AVX2/FMA kernels for interleaved complex<double>. Two complex values per
// 256-bit lane pair; tails fall back to the scalar loop. Compiled with
// per-function target attributes so the rest of the build stays generic.

#include "sfradar/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace sfr::kernels::detail {

namespace {

#define SFR_AVX2 __attribute__((target("avx2,fma")))

SFR_AVX2 inline cd hsum_complex(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

// [t1 -/+ t2] per lane: even lanes t1-t2, odd lanes t1+t2. For
// x = [a b], y = [c d] this yields the complex product (ac-bd, ad+bc).
SFR_AVX2 inline __m256d cmul_accum(__m256d x, __m256d y, __m256d acc) {
  const __m256d xre = _mm256_movedup_pd(x);
  const __m256d xim = _mm256_permute_pd(x, 0xF);
  const __m256d ysw = _mm256_permute_pd(y, 0x5);
  const __m256d t = _mm256_mul_pd(xim, ysw);
  const __m256d prod = _mm256_fmaddsub_pd(xre, y, t);
  return _mm256_add_pd(acc, prod);
}

SFR_AVX2 inline __m256d conj_mask() {
  return _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);  // flips imaginary lanes
}

SFR_AVX2 cd avx2_cdotu(const cd* x, const cd* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const auto* xp = reinterpret_cast<const double*>(x);
  const auto* yp = reinterpret_cast<const double*>(y);
  for (; i + 2 <= n; i += 2) {
    acc = cmul_accum(_mm256_loadu_pd(xp + 2 * i), _mm256_loadu_pd(yp + 2 * i),
                     acc);
  }
  cd s = hsum_complex(acc);
  for (; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double c = y[i].real(), d = y[i].imag();
    s += cd{a * c - b * d, a * d + b * c};
  }
  return s;
}

SFR_AVX2 cd avx2_cdotc(const cd* x, const cd* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d mask = conj_mask();
  std::size_t i = 0;
  const auto* xp = reinterpret_cast<const double*>(x);
  const auto* yp = reinterpret_cast<const double*>(y);
  for (; i + 2 <= n; i += 2) {
    const __m256d xc = _mm256_xor_pd(_mm256_loadu_pd(xp + 2 * i), mask);
    acc = cmul_accum(xc, _mm256_loadu_pd(yp + 2 * i), acc);
  }
  cd s = hsum_complex(acc);
  for (; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double c = y[i].real(), d = y[i].imag();
    s += cd{a * c + b * d, a * d - b * c};
  }
  return s;
}

SFR_AVX2 void avx2_caxpy(cd a, const cd* x, cd* y, std::size_t n) {
  const __m256d are = _mm256_set1_pd(a.real());
  const __m256d aim = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  const auto* xp = reinterpret_cast<const double*>(x);
  auto* yp = reinterpret_cast<double*>(y);
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xsw = _mm256_permute_pd(xv, 0x5);
    const __m256d t = _mm256_mul_pd(aim, xsw);
    const __m256d prod = _mm256_fmaddsub_pd(are, xv, t);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
  }
  const double p = a.real(), q = a.imag();
  for (; i < n; ++i) {
    const double c = x[i].real(), d = x[i].imag();
    y[i] += cd{p * c - q * d, p * d + q * c};
  }
}

SFR_AVX2 void avx2_caxpy_conj(cd a, const cd* x, cd* y, std::size_t n) {
  const __m256d are = _mm256_set1_pd(a.real());
  const __m256d aim = _mm256_set1_pd(a.imag());
  const __m256d mask = conj_mask();
  std::size_t i = 0;
  const auto* xp = reinterpret_cast<const double*>(x);
  auto* yp = reinterpret_cast<double*>(y);
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_xor_pd(_mm256_loadu_pd(xp + 2 * i), mask);
    const __m256d xsw = _mm256_permute_pd(xv, 0x5);
    const __m256d t = _mm256_mul_pd(aim, xsw);
    const __m256d prod = _mm256_fmaddsub_pd(are, xv, t);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
  }
  const double p = a.real(), q = a.imag();
  for (; i < n; ++i) {
    const double c = x[i].real(), d = -x[i].imag();
    y[i] += cd{p * c - q * d, p * d + q * c};
  }
}

SFR_AVX2 double avx2_norm2sq(const cd* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const auto* xp = reinterpret_cast<const double*>(x);
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
  for (; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

#undef SFR_AVX2

}  // namespace

const Ops* avx2_ops() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) {
    return nullptr;
  }
  static const Ops ops{avx2_cdotu, avx2_cdotc, avx2_caxpy, avx2_caxpy_conj,
                       avx2_norm2sq};
  return &ops;
}

}  // namespace sfr::kernels::detail

#else

namespace sfr::kernels::detail {
const Ops* avx2_ops() { return nullptr; }
}  // namespace sfr::kernels::detail

#endif
