#include "sfradar/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "sfradar/kernels/kernels.hpp"

namespace sfr::linalg {

CVec matvec(const CMat& a, const CVec& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: size mismatch");
  CVec y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    y[r] = kernels::cdotu(a.row(r), x.data(), a.cols());
  }
  return y;
}

CVec adjoint_matvec(const CMat& a, const CVec& r) {
  if (r.size() != a.rows())
    throw std::invalid_argument("adjoint_matvec: size mismatch");
  CVec y(a.cols(), cd{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    // y_j += conj(A_ij) r_i
    kernels::caxpy_conj(r[i], a.row(i), y.data(), a.cols());
  }
  return y;
}

CMat gram(const CMat& a) {
  const std::size_t n = a.cols();
  CMat k(n, n);
  // Column-wise dots via a transposed staging copy keeps the inner loops
  // contiguous for the kernels.
  CMat at(n, a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) at(c, r) = a(r, c);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const cd v = kernels::cdotc(at.row(i), at.row(j), a.rows());
      k(i, j) = v;
      k(j, i) = std::conj(v);
    }
  }
  return k;
}

double norm2(const CVec& x) {
  return std::sqrt(kernels::norm2sq(x.data(), x.size()));
}

double norm_inf(const CVec& x) {
  double m = 0.0;
  for (const cd& v : x) m = std::max(m, std::abs(v));
  return m;
}

cd inner(const CVec& x, const CVec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner: size mismatch");
  return kernels::cdotc(x.data(), y.data(), x.size());
}

double spectral_norm_hermitian(const CMat& k, int iters) {
  const std::size_t n = k.cols();
  if (n == 0) return 0.0;
  CVec v(n, cd{1.0 / std::sqrt(static_cast<double>(n)), 0.0});
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    CVec w = matvec(k, v);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (auto& e : w) e /= nw;
    lambda = nw;
    v = std::move(w);
  }
  return lambda;
}

CVec solve_hpd(CMat k, CVec b) {
  const std::size_t n = k.cols();
  if (k.rows() != n || b.size() != n)
    throw std::invalid_argument("solve_hpd: size mismatch");
  // Cholesky K = L L^H, lower triangle of k overwritten with L.
  for (std::size_t j = 0; j < n; ++j) {
    double d = k(j, j).real();
    for (std::size_t p = 0; p < j; ++p) d -= std::norm(k(j, p));
    if (!(d > 0.0)) throw std::runtime_error("solve_hpd: not positive definite");
    const double ljj = std::sqrt(d);
    k(j, j) = cd{ljj, 0.0};
    for (std::size_t i = j + 1; i < n; ++i) {
      cd s = k(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= k(i, p) * std::conj(k(j, p));
      k(i, j) = s / ljj;
    }
  }
  // Forward solve L y = b.
  for (std::size_t i = 0; i < n; ++i) {
    cd s = b[i];
    for (std::size_t p = 0; p < i; ++p) s -= k(i, p) * b[p];
    b[i] = s / k(i, i).real();
  }
  // Back solve L^H x = y.
  for (std::size_t ii = n; ii-- > 0;) {
    cd s = b[ii];
    for (std::size_t p = ii + 1; p < n; ++p) s -= std::conj(k(p, ii)) * b[p];
    b[ii] = s / k(ii, ii).real();
  }
  return b;
}

CVec least_squares_subset(const CMat& a, const std::vector<std::size_t>& cols,
                          const CVec& r, double* residual_norm) {
  const std::size_t s = cols.size();
  CMat sub(s, a.rows());  // rows are the selected columns of A
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t row = 0; row < a.rows(); ++row) {
      sub(i, row) = a(row, cols[i]);
    }
  }
  CMat g(s, s);
  CVec rhs(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      const cd v = kernels::cdotc(sub.row(i), sub.row(j), a.rows());
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
    rhs[i] = kernels::cdotc(sub.row(i), r.data(), a.rows());
  }
  CVec z = solve_hpd(std::move(g), std::move(rhs));
  if (residual_norm != nullptr) {
    CVec res = r;
    for (std::size_t i = 0; i < s; ++i) {
      kernels::caxpy(-z[i], sub.row(i), res.data(), a.rows());
    }
    *residual_norm = norm2(res);
  }
  return z;
}

cd soft_threshold(cd z, double t) {
  const double m = std::abs(z);
  if (m <= t || m == 0.0) return cd{0.0, 0.0};
  return z * ((m - t) / m);
}

}  // namespace sfr::linalg
