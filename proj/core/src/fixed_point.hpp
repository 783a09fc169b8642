#pragma once

#include <limits>
#include <string>
#include <utility>

#include "rqlab/soft_oracle.hpp"
#include "rqlab/table.hpp"

namespace rqlab::detail {

/// Largest iterate gap that still guarantees sup-norm error <= tol for a
/// gamma-contraction. With gamma = 0 one sweep is already exact.
inline double gap_threshold(double gamma, double tol) {
  if (gamma <= 0.0) return std::numeric_limits<double>::infinity();
  return tol * (1.0 - gamma) / gamma;
}

/// Jacobi iteration of `sweep(previous, next)` from `start`. Every sweep reads
/// only the previous iterate.
template <class Sweep>
SolveResult iterate_to_fixed_point(ActionTable start, double gamma, double tol, int max_iter,
                                   const char* what, Sweep&& sweep) {
  SolveResult result;
  ActionTable next(start.n_states(), start.n_actions());
  const double threshold = gap_threshold(gamma, tol);
  for (int it = 1; it <= max_iter; ++it) {
    sweep(static_cast<const ActionTable&>(start), next);
    const double gap = sup_norm_diff(start, next);
    std::swap(start, next);
    result.residuals.push_back(gap);
    result.iterations = it;
    if (gap <= threshold) {
      result.q = std::move(start);
      return result;
    }
  }
  const double last = result.residuals.empty() ? std::numeric_limits<double>::infinity()
                                                : result.residuals.back();
  throw ConvergenceError(std::string(what) + " did not converge in " + std::to_string(max_iter) +
                             " iterations (last residual " + std::to_string(last) + ")",
                         last, max_iter);
}

}  // namespace rqlab::detail
