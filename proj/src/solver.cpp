#include "sfradar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sfradar/kernels/kernels.hpp"

namespace sfr {

namespace {

std::vector<SupportEntry> support_of(const CVec& s, const SupportPolicy& policy) {
  std::vector<SupportEntry> entries;
  double maxmag = 0.0;
  for (const cd& v : s) maxmag = std::max(maxmag, std::abs(v));
  if (maxmag == 0.0) return entries;

  for (std::size_t i = 0; i < s.size(); ++i) {
    const double m = std::abs(s[i]);
    if (m > 0.0) entries.push_back(SupportEntry{i, m});
  }
  std::sort(entries.begin(), entries.end(),
            [](const SupportEntry& a, const SupportEntry& b) {
              return a.magnitude > b.magnitude ||
                     (a.magnitude == b.magnitude && a.index < b.index);
            });
  if (policy.kind == SupportPolicy::Kind::kTopK) {
    if (entries.size() > policy.top_k) entries.resize(policy.top_k);
  } else {
    const double cut = policy.tau * maxmag;
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [cut](const SupportEntry& e) {
                                   return e.magnitude < cut;
                                 }),
                  entries.end());
  }
  return entries;
}

double residual_norm(const CMat& theta, const CVec& r, const CVec& s) {
  CVec res = r;
  // res -= Theta s, column-wise accumulation through rows.
  const CVec ts = linalg::matvec(theta, s);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= ts[i];
  return linalg::norm2(res);
}

void check_inputs(const CMat& theta, const CVec& r, double lambda) {
  if (theta.rows() != r.size())
    throw std::invalid_argument("solver: measurement size does not match Theta");
  if (lambda < 0.0) throw std::invalid_argument("solver: lambda must be >= 0");
}

}  // namespace

RecoveryResult dantzig_selector(const CMat& theta, const CVec& r, double lambda,
                                const SolverOptions& opts) {
  check_inputs(theta, r, lambda);
  const std::size_t n = theta.cols();
  const CVec b = linalg::adjoint_matvec(theta, r);
  const CMat k = linalg::gram(theta);
  const double binf = linalg::norm_inf(b);

  RecoveryResult out;
  out.s_hat.assign(n, cd{0.0, 0.0});

  // s = 0 is feasible and optimal whenever ||b||_inf <= lambda.
  if (binf <= lambda) {
    out.residual_norm = linalg::norm2(r);
    out.diagnostics.converged = true;
    out.diagnostics.achieved_feasibility = binf;
    out.diagnostics.message = "zero solution is feasible";
    out.support = support_of(out.s_hat, opts.support_policy);
    return out;
  }

  const double knorm = linalg::spectral_norm_hermitian(k) * 1.01 + 1e-300;
  const double tau = 1.0 / std::sqrt(knorm * knorm);  // tau*sigma*||K||^2 <= 1
  const double sigma = tau;
  const double feas_target =
      std::max(lambda * (1.0 + opts.feasibility_rel_tol), 1e-10 * binf);

  CVec s(n, cd{0.0, 0.0}), sbar(n, cd{0.0, 0.0}), y(n, cd{0.0, 0.0});
  CVec s_prev_check = s;
  double feas = binf;
  std::size_t it = 0;
  bool converged = false;
  // Primal-dual iteration on min ||s||_1 + indicator{||K s - b||_inf <= lambda}.
  for (; it < opts.max_iterations; ++it) {
    const CVec ksbar = linalg::matvec(k, sbar);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = linalg::soft_threshold(y[i] + sigma * (ksbar[i] - b[i]),
                                    sigma * lambda);
    }
    const CVec ky = linalg::matvec(k, y);
    for (std::size_t i = 0; i < n; ++i) {
      const cd snew = linalg::soft_threshold(s[i] - tau * ky[i], tau);
      sbar[i] = 2.0 * snew - s[i];
      s[i] = snew;
    }
    if ((it + 1) % 50 == 0) {
      const CVec ks = linalg::matvec(k, s);
      feas = 0.0;
      double change = 0.0, snorm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        feas = std::max(feas, std::abs(b[i] - ks[i]));
        change = std::max(change, std::abs(s[i] - s_prev_check[i]));
        snorm = std::max(snorm, std::abs(s[i]));
      }
      s_prev_check = s;
      if (feas <= feas_target && change <= 1e-9 * std::max(snorm, 1e-30)) {
        converged = true;
        ++it;
        break;
      }
    }
  }

  out.s_hat = std::move(s);
  {
    const CVec ks = linalg::matvec(k, out.s_hat);
    feas = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      feas = std::max(feas, std::abs(b[i] - ks[i]));
  }
  double l1 = 0.0;
  for (const cd& v : out.s_hat) l1 += std::abs(v);
  out.residual_norm = residual_norm(theta, r, out.s_hat);
  out.diagnostics.iterations = it;
  out.diagnostics.converged = converged;
  out.diagnostics.achieved_feasibility = feas;
  out.diagnostics.objective = l1;
  out.diagnostics.message =
      converged ? "converged" : "max iterations reached before convergence";
  out.support = support_of(out.s_hat, opts.support_policy);
  return out;
}

RecoveryResult l1_first_order(const CMat& theta, const CVec& r, double lambda,
                              const SolverOptions& opts) {
  check_inputs(theta, r, lambda);
  const std::size_t n = theta.cols();
  const CVec b = linalg::adjoint_matvec(theta, r);
  const CMat k = linalg::gram(theta);
  const double lip = linalg::spectral_norm_hermitian(k) * 1.01 + 1e-300;
  const double step = 1.0 / lip;

  RecoveryResult out;
  CVec s(n, cd{0.0, 0.0});
  std::size_t it = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    const CVec ks = linalg::matvec(k, s);
    double change = 0.0, snorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cd snew =
          linalg::soft_threshold(s[i] - step * (ks[i] - b[i]), step * lambda);
      change += std::norm(snew - s[i]);
      snorm += std::norm(snew);
      s[i] = snew;
    }
    if (std::sqrt(change) <= opts.change_tol * std::max(std::sqrt(snorm), 1e-30)) {
      converged = true;
      ++it;
      break;
    }
  }

  out.s_hat = std::move(s);
  const CVec ks = linalg::matvec(k, out.s_hat);
  double feas = 0.0, l1 = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    feas = std::max(feas, std::abs(b[i] - ks[i]));
    l1 += std::abs(out.s_hat[i]);
    quad += (std::conj(out.s_hat[i]) * (ks[i] - 2.0 * b[i])).real();
  }
  out.residual_norm = residual_norm(theta, r, out.s_hat);
  out.diagnostics.iterations = it;
  out.diagnostics.converged = converged;
  out.diagnostics.achieved_feasibility = feas;
  out.diagnostics.objective =
      0.5 * (kernels::norm2sq(r.data(), r.size()) + quad) + lambda * l1;
  out.diagnostics.message =
      converged ? "converged" : "max iterations reached before convergence";
  out.support = support_of(out.s_hat, opts.support_policy);
  return out;
}

std::vector<Detection> extract_support(const CVec& s_hat, const ParamGrid& grid,
                                       const SupportPolicy& policy) {
  if (s_hat.size() != grid.size())
    throw std::invalid_argument("extract_support: vector does not match grid");
  const auto entries = support_of(s_hat, policy);
  std::vector<Detection> dets;
  dets.reserve(entries.size());
  for (const auto& e : entries) {
    dets.push_back(Detection{grid.point(e.index), s_hat[e.index], e.index});
  }
  return dets;
}

}  // namespace sfr
