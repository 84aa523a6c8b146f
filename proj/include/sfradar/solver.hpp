#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sfradar/linalg.hpp"
#include "sfradar/sensing.hpp"

namespace sfr {

/// Detection policy used when reading the support out of a recovered
/// sparse vector.
struct SupportPolicy {
  enum class Kind { kRelativeThreshold, kTopK };
  Kind kind = Kind::kRelativeThreshold;
  double tau = 0.5;     // keep |s_n| >= tau * max|s|
  std::size_t top_k = 0;
};

struct SolverDiagnostics {
  std::size_t iterations = 0;
  bool converged = false;
  double achieved_feasibility = 0.0;  // ||Theta^H (r - Theta s)||_inf
  double objective = 0.0;             // ||s||_1 (dantzig) or surrogate value
  std::string message;
};

struct SupportEntry {
  std::size_t index = 0;
  double magnitude = 0.0;
};

struct RecoveryResult {
  CVec s_hat;
  std::vector<SupportEntry> support;  // default tau = 0.5 policy, sorted by magnitude
  double residual_norm = 0.0;         // ||r - Theta s_hat||_2
  SolverDiagnostics diagnostics;
};

struct SolverOptions {
  std::size_t max_iterations = 40000;
  double feasibility_rel_tol = 1e-7;  // target: lambda * (1 + tol)
  double change_tol = 1e-8;           // relative iterate change (ista stop)
  SupportPolicy support_policy;
};

/// Dantzig selector: minimizes ||s||_1 subject to
/// ||Theta^H (r - Theta s)||_inf <= lambda (complex moduli), solved by a
/// primal-dual first-order method on the normal-equations operator.
/// Non-convergence after max_iterations is reported in diagnostics, never
/// silently dropped.
RecoveryResult dantzig_selector(const CMat& theta, const CVec& r, double lambda,
                                const SolverOptions& opts = {});

/// Iterative shrinkage on the basis-pursuit-denoising surrogate
/// min 1/2 ||r - Theta s||^2 + lambda ||s||_1, step 1/||Theta||_op^2.
/// A surrogate for the Dantzig selector, useful when the grid is large.
RecoveryResult l1_first_order(const CMat& theta, const CVec& r, double lambda,
                              const SolverOptions& opts = {});

/// Decoded detection: grid tuple plus complex amplitude.
struct Detection {
  GridPoint point;
  cd amplitude{0.0, 0.0};
  std::size_t grid_index = 0;
};

/// Indices with |s_n| >= tau * max|s| (or the top-K), decoded through the
/// grid. An empty result means no detection.
std::vector<Detection> extract_support(const CVec& s_hat, const ParamGrid& grid,
                                       const SupportPolicy& policy = {});

}  // namespace sfr
