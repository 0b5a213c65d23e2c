#include "ftfp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ftfp/errors.hpp"

namespace ftfp {

namespace {

constexpr double kSnapTol = 1e-6;
constexpr double kFeasTol = 1e-7;

void require_feasible(const FractionalSolution& sol, const Instance& inst) {
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  if (sol.y.size() != n || sol.x.rows() != n || sol.x.cols() != m) {
    throw PreconditionError("decompose: solution shape does not match instance");
  }
  for (std::size_t j = 0; j < m; ++j) {
    double cover = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (sol.x(i, j) > sol.y[i] + kFeasTol) {
        throw PreconditionError("decompose: x_" + std::to_string(i + 1) + std::to_string(j + 1) + " exceeds y_" +
                                std::to_string(i + 1));
      }
      cover += sol.x(i, j);
    }
    if (cover < static_cast<double>(inst.demands[j]) - kFeasTol) {
      throw PreconditionError("decompose: client " + std::to_string(j + 1) + " is under-covered");
    }
  }
}

Demand floor_snapped(double v) { return static_cast<Demand>(std::floor(v)); }

Decomposition decompose(const FractionalSolution& sol, const Instance& inst, RoundingMode mode) {
  require_feasible(sol, inst);
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  Decomposition dec;
  dec.mode = mode;
  dec.yhat.resize(n);
  dec.ybar.resize(n);
  dec.xhat = Matrix<Demand>(n, m);
  dec.xbar = Matrix<double>(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = snap(sol.y[i]);
    const Demand fy = floor_snapped(y);
    dec.yhat[i] = mode == RoundingMode::kKeepOneBack ? std::max<Demand>(0, fy - 1) : fy;
    dec.ybar[i] = y - static_cast<double>(dec.yhat[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const double x = snap(sol.x(i, j));
      const Demand fx = floor_snapped(x);
      dec.xhat(i, j) = mode == RoundingMode::kKeepOneBack ? std::min(fx, dec.yhat[i]) : fx;
      dec.xbar(i, j) = x - static_cast<double>(dec.xhat(i, j));
    }
  }
  dec.rhat.assign(m, 0);
  dec.rbar.assign(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) dec.rhat[j] += dec.xhat(i, j);
    if (dec.rhat[j] > inst.demands[j]) {
      throw PreconditionError("decompose: client " + std::to_string(j + 1) +
                              " is over-covered by the rounded part; trim the solution first");
    }
    dec.rbar[j] = inst.demands[j] - dec.rhat[j];
  }
  return dec;
}

}  // namespace

Demand Decomposition::max_residual_demand() const {
  return rbar.empty() ? 0 : *std::max_element(rbar.begin(), rbar.end());
}

bool Decomposition::residual_empty() const { return max_residual_demand() == 0; }

double snap(double v) {
  if (!(v >= -kSnapTol)) throw PreconditionError("snap: value " + format_real(v) + " is negative");
  const double r = std::round(v);
  if (std::abs(v - r) <= kSnapTol) return r == 0 ? 0.0 : r;
  return v;
}

Decomposition decompose_keep_one_back(const FractionalSolution& sol, const Instance& inst) {
  return decompose(sol, inst, RoundingMode::kKeepOneBack);
}

Decomposition decompose_plain_floor(const FractionalSolution& sol, const Instance& inst) {
  return decompose(sol, inst, RoundingMode::kPlainFloor);
}

Instance residual_instance(const Decomposition& dec, const Instance& inst) {
  Instance out = with_demands(inst, dec.rbar);
  if (!inst.name.empty()) out.name = inst.name + "/residual";
  return out;
}

Instance rounded_instance(const Decomposition& dec, const Instance& inst) {
  Instance out = with_demands(inst, dec.rhat);
  if (!inst.name.empty()) out.name = inst.name + "/rounded";
  return out;
}

double rounded_cost(const Decomposition& dec, const Instance& inst) {
  double c = 0;
  for (std::size_t i = 0; i < inst.num_sites(); ++i) {
    c += inst.site_costs[i] * static_cast<double>(dec.yhat[i]);
    for (std::size_t j = 0; j < inst.num_clients(); ++j) c += inst.dist(i, j) * static_cast<double>(dec.xhat(i, j));
  }
  return c;
}

double residual_fractional_cost(const Decomposition& dec, const Instance& inst) {
  double c = 0;
  for (std::size_t i = 0; i < inst.num_sites(); ++i) {
    c += inst.site_costs[i] * dec.ybar[i];
    for (std::size_t j = 0; j < inst.num_clients(); ++j) c += inst.dist(i, j) * dec.xbar(i, j);
  }
  return c;
}

double residual_linking_excess(const Decomposition& dec) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dec.xbar.rows(); ++i)
    for (std::size_t j = 0; j < dec.xbar.cols(); ++j) worst = std::max(worst, dec.xbar(i, j) - dec.ybar[i]);
  return worst;
}

bool residual_is_fractionally_feasible(const Decomposition& dec, double tol) {
  return residual_linking_excess(dec) <= tol;
}

}  // namespace ftfp
