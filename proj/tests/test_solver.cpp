#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sfradar/rng.hpp"
#include "sfradar/solver.hpp"

using namespace sfr;

namespace {

CMat random_theta(std::size_t rows, std::size_t cols, Rng& rng) {
  CMat m(rows, cols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.cnormal() * scale;
  return m;
}

CVec random_rhs(const CMat& theta, const std::vector<std::size_t>& support,
                const std::vector<cd>& amps) {
  CVec r(theta.rows(), cd{0.0, 0.0});
  for (std::size_t k = 0; k < support.size(); ++k)
    for (std::size_t i = 0; i < theta.rows(); ++i)
      r[i] += amps[k] * theta(i, support[k]);
  return r;
}

double feasibility(const CMat& theta, const CVec& r, const CVec& s) {
  CVec res = r;
  const CVec fit = linalg::matvec(theta, s);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= fit[i];
  return linalg::norm_inf(linalg::adjoint_matvec(theta, res));
}

double l1_norm(const CVec& s) {
  double v = 0.0;
  for (const cd& x : s) v += std::abs(x);
  return v;
}

// Exhaustive oracle for tiny instances: over all supports of size <= kmax,
// least-squares-fit the amplitudes, keep fits that are lambda-feasible, and
// return the smallest l1 norm among them (and the zero vector if feasible).
double brute_force_min_l1(const CMat& theta, const CVec& r, double lambda,
                          std::size_t kmax) {
  const std::size_t n = theta.cols();
  double best = std::numeric_limits<double>::infinity();
  CVec zero(n, cd{0.0, 0.0});
  if (feasibility(theta, r, zero) <= lambda * (1.0 + 1e-9)) best = 0.0;
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t i = 0; i < n; ++i) subsets.push_back({i});
  if (kmax >= 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) subsets.push_back({i, j});
  }
  for (const auto& cols : subsets) {
    // Dense search over complex amplitudes is infeasible; instead refine from
    // the LS fit with a simple shrink toward feasibility boundary: scan scale
    // factors of the LS solution and keep feasible ones.
    const CVec z = linalg::least_squares_subset(theta, cols, r);
    for (int step = 1000; step >= 0; --step) {
      const double scale = static_cast<double>(step) / 1000.0;
      CVec s(n, cd{0.0, 0.0});
      for (std::size_t k = 0; k < cols.size(); ++k) s[cols[k]] = scale * z[k];
      if (feasibility(theta, r, s) <= lambda * (1.0 + 1e-9)) {
        best = std::min(best, l1_norm(s));
        break;  // smaller scales only increase infeasibility risk? no: keep first
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("zero measurement yields the zero solution") {
  Rng rng(1);
  const CMat theta = random_theta(12, 20, rng);
  const CVec r(12, cd{0.0, 0.0});
  const RecoveryResult out = dantzig_selector(theta, r, 0.1);
  CHECK(linalg::norm2(out.s_hat) == 0.0);
  CHECK(out.support.empty());
  CHECK(out.diagnostics.converged);
}

TEST_CASE("large lambda admits the zero solution") {
  Rng rng(2);
  const CMat theta = random_theta(10, 15, rng);
  const CVec r = random_rhs(theta, {3}, {cd{1.0, 0.5}});
  const double lambda = 2.0 * linalg::norm_inf(linalg::adjoint_matvec(theta, r));
  const RecoveryResult out = dantzig_selector(theta, r, lambda);
  CHECK(linalg::norm2(out.s_hat) == 0.0);
  CHECK(out.diagnostics.message.find("zero solution") != std::string::npos);
}

TEST_CASE("small lambda recovers a single target near the least squares fit") {
  Rng rng(3);
  const CMat theta = random_theta(24, 12, rng);
  const cd amp{1.3, -0.7};
  const CVec r = random_rhs(theta, {5}, {amp});
  const RecoveryResult out = dantzig_selector(theta, r, 1e-4);
  REQUIRE_FALSE(out.support.empty());
  CHECK(out.support.front().index == 5);
  CHECK(std::abs(out.s_hat[5] - amp) < 0.01 * std::abs(amp));
  CHECK(feasibility(theta, r, out.s_hat) <= 1e-4 * (1.0 + 1e-6));
}

TEST_CASE("solutions are always lambda-feasible") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat theta = random_theta(16, 32, rng);
    const CVec r = random_rhs(
        theta, {static_cast<std::size_t>(trial), static_cast<std::size_t>(trial + 12)},
        {cd{1.0, 0.0}, cd{-0.4, 0.8}});
    const double lambda = 0.05 * linalg::norm_inf(linalg::adjoint_matvec(theta, r));
    const RecoveryResult out = dantzig_selector(theta, r, lambda);
    CHECK(feasibility(theta, r, out.s_hat) <= lambda * (1.0 + 1e-6));
  }
}

TEST_CASE("scaling covariance: (c r, c lambda) maps to c s_hat") {
  Rng rng(5);
  const CMat theta = random_theta(18, 10, rng);
  const CVec r = random_rhs(theta, {2, 7}, {cd{1.0, 0.2}, cd{0.5, -0.9}});
  const double lambda = 0.02;
  const cd c{3.0, 0.0};
  CVec rc = r;
  for (auto& x : rc) x *= c;
  const RecoveryResult a = dantzig_selector(theta, r, lambda);
  const RecoveryResult b = dantzig_selector(theta, rc, 3.0 * lambda);
  for (std::size_t i = 0; i < a.s_hat.size(); ++i)
    CHECK(std::abs(b.s_hat[i] - c * a.s_hat[i]) < 1e-6);
}

TEST_CASE("dantzig objective matches an exhaustive small-instance oracle") {
  Rng rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const CMat theta = random_theta(10, 6, rng);
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 2);
    std::vector<std::size_t> support{static_cast<std::size_t>(trial % 6)};
    std::vector<cd> amps{cd{1.0, 0.4}};
    if (k == 2) {
      support.push_back((trial + 3) % 6);
      amps.push_back(cd{-0.6, 0.9});
    }
    const CVec r = random_rhs(theta, support, amps);
    const double lambda = 0.1 * linalg::norm_inf(linalg::adjoint_matvec(theta, r));
    const RecoveryResult out = dantzig_selector(theta, r, lambda);
    const double oracle = brute_force_min_l1(theta, r, lambda, 2);
    // The solver must be feasible and no worse than the restricted oracle.
    CHECK(feasibility(theta, r, out.s_hat) <= lambda * (1.0 + 1e-6));
    CHECK(l1_norm(out.s_hat) <= oracle * (1.0 + 1e-3) + 1e-9);
  }
}

TEST_CASE("first-order l1 solver basics") {
  Rng rng(7);
  const CMat theta = random_theta(20, 14, rng);
  const CVec r = random_rhs(theta, {4, 9}, {cd{1.2, 0.0}, cd{0.0, -0.8}});

  // Huge lambda shrinks everything to zero.
  const RecoveryResult zero = l1_first_order(theta, r, 100.0);
  CHECK(linalg::norm2(zero.s_hat) == 0.0);

  // Moderate lambda finds the true support.
  const double lam = 0.02 * linalg::norm_inf(linalg::adjoint_matvec(theta, r));
  const RecoveryResult out = l1_first_order(theta, r, lam);
  REQUIRE(out.support.size() >= 2);
  std::set<std::size_t> found;
  for (const auto& e : out.support) found.insert(e.index);
  CHECK(found.count(4) == 1);
  CHECK(found.count(9) == 1);

  // Surrogate objective at the solution beats the zero vector.
  const auto surrogate = [&](const CVec& s) {
    CVec res = r;
    const CVec fit = linalg::matvec(theta, s);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= fit[i];
    const double d = linalg::norm2(res);
    return 0.5 * d * d + lam * l1_norm(s);
  };
  const double at_zero = surrogate(CVec(theta.cols(), cd{0.0, 0.0}));
  CHECK(surrogate(out.s_hat) < at_zero);
}

TEST_CASE("dantzig and first-order solvers agree on the support") {
  Rng rng(8);
  const CMat theta = random_theta(30, 16, rng);
  const CVec r = random_rhs(theta, {1, 11}, {cd{1.0, 0.0}, cd{0.7, 0.7}});
  const double lam = 0.05 * linalg::norm_inf(linalg::adjoint_matvec(theta, r));
  const RecoveryResult a = dantzig_selector(theta, r, lam);
  const RecoveryResult b = l1_first_order(theta, r, lam);
  std::set<std::size_t> sa, sb;
  for (const auto& e : a.support) sa.insert(e.index);
  for (const auto& e : b.support) sb.insert(e.index);
  CHECK(sa == std::set<std::size_t>{1, 11});
  CHECK(sb == std::set<std::size_t>{1, 11});
}

TEST_CASE("extract_support decoding and policies") {
  const ParamGrid g = ParamGrid::full3d({0.0, 0.1}, {10.0, 20.0}, {1000.0});
  CVec s(g.size(), cd{0.0, 0.0});
  s[3] = cd{0.0, 2.0};   // (0.1, 20, 1000)
  s[1] = cd{0.5, 0.0};   // below the tau = 0.5 threshold
  s[0] = cd{-1.2, 0.0};  // (0.0, 10, 1000)

  const auto dets = extract_support(s, g);
  REQUIRE(dets.size() == 2);
  CHECK(dets[0].grid_index == 3);  // sorted by magnitude, largest first
  CHECK(dets[0].point.angle == 0.1);
  CHECK(dets[0].point.velocity == 20.0);
  CHECK(std::abs(dets[0].amplitude - cd{0.0, 2.0}) < 1e-15);
  CHECK(dets[1].grid_index == 0);

  SupportPolicy topk;
  topk.kind = SupportPolicy::Kind::kTopK;
  topk.top_k = 3;
  const auto top = extract_support(s, g, topk);
  REQUIRE(top.size() == 3);
  CHECK(top[2].grid_index == 1);

  CHECK(extract_support(CVec(g.size(), cd{0.0, 0.0}), g).empty());
  CHECK_THROWS_AS(extract_support(CVec(2, cd{1.0, 0.0}), g),
                  std::invalid_argument);
}
