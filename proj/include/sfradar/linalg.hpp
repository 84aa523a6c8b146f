#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sfr {

using cd = std::complex<double>;
using CVec = std::vector<cd>;

/// Dense row-major complex matrix. Thin wrapper; heavy lifting goes
/// through the dispatched kernels.
class CMat {
 public:
  CMat() = default;
  CMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cd& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  cd* row(std::size_t r) { return data_.data() + r * cols_; }
  const cd* row(std::size_t r) const { return data_.data() + r * cols_; }

  cd* data() { return data_.data(); }
  const cd* data() const { return data_.data(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVec data_;
};

namespace linalg {

// y = A x
CVec matvec(const CMat& a, const CVec& x);

// y = A^H r
CVec adjoint_matvec(const CMat& a, const CVec& r);

// A^H A (Hermitian, cols x cols)
CMat gram(const CMat& a);

// A^H B entrywise conjugate-transpose product is not needed; columns are
// accessed through the stacked layout instead.

double norm2(const CVec& x);
double norm_inf(const CVec& x);  // max complex modulus
cd inner(const CVec& x, const CVec& y);  // conj(x)^H-style: sum conj(x_i) y_i

// Largest eigenvalue of a Hermitian PSD matrix by power iteration.
double spectral_norm_hermitian(const CMat& k, int iters = 200);

// Solves K x = b for Hermitian positive definite K (in-place Cholesky on a
// copy). Throws std::runtime_error if the factorization breaks down.
CVec solve_hpd(CMat k, CVec b);

// Least squares min ||r - A_S z|| over the column subset S; returns the
// coefficients (size S) and optionally the residual norm.
CVec least_squares_subset(const CMat& a, const std::vector<std::size_t>& cols,
                          const CVec& r, double* residual_norm = nullptr);

// Complex soft threshold: z * max(|z| - t, 0) / |z| (0 when z = 0).
cd soft_threshold(cd z, double t);

}  // namespace linalg

}  // namespace sfr
