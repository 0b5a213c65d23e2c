#pragma once

#include <vector>

#include "ftfp/instance.hpp"
#include "ftfp/lp.hpp"

namespace ftfp {

/// Which rounding rule produced a decomposition.
///
/// kKeepOneBack holds one unit of every y*_i >= 1 back in the residual, so the
/// residual pair is a feasible fractional solution for the residual demands.
/// kPlainFloor floors everything; its residual pair is NOT a feasible
/// fractional solution and must not be used as one.
enum class RoundingMode { kKeepOneBack, kPlainFloor };

struct Decomposition {
  RoundingMode mode = RoundingMode::kKeepOneBack;
  Matrix<Demand> xhat;       // integral part of x*
  std::vector<Demand> yhat;  // integral part of y*
  Matrix<double> xbar;       // x* - xhat
  std::vector<double> ybar;  // y* - yhat
  std::vector<Demand> rhat;  // sum_i xhat_ij
  std::vector<Demand> rbar;  // r_j - rhat_j

  Demand max_residual_demand() const;
  bool residual_empty() const;
};

/// Rounds values within 1e-6 of an integer onto it; tiny negatives go to 0.
/// Throws PreconditionError for v < -1e-6.
double snap(double v);

/// yhat_i = max(0, floor(y*_i) - 1), xhat_ij = min(floor(x*_ij), yhat_i).
Decomposition decompose_keep_one_back(const FractionalSolution& sol, const Instance& inst);

/// yhat_i = floor(y*_i), xhat_ij = floor(x*_ij).
Decomposition decompose_plain_floor(const FractionalSolution& sol, const Instance& inst);

/// The instance with demands rbar.
Instance residual_instance(const Decomposition& dec, const Instance& inst);

/// The instance with demands rhat, which the integral part serves exactly.
Instance rounded_instance(const Decomposition& dec, const Instance& inst);

/// sum_i f_i yhat_i + sum_ij d_ij xhat_ij
double rounded_cost(const Decomposition& dec, const Instance& inst);

/// sum_i f_i ybar_i + sum_ij d_ij xbar_ij
double residual_fractional_cost(const Decomposition& dec, const Instance& inst);

/// Largest xbar_ij - ybar_i; positive means the residual pair is not a
/// feasible fractional solution.
double residual_linking_excess(const Decomposition& dec);

bool residual_is_fractionally_feasible(const Decomposition& dec, double tol = 1e-9);

}  // namespace ftfp
