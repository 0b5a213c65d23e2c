#include "ftfp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ftfp/errors.hpp"

namespace ftfp {

namespace {
constexpr double kFeasTol = 1e-7;
constexpr double kGapTol = 1e-6;
}  // namespace

FtfpProgram build_lp(const Instance& inst, std::optional<std::vector<double>> caps) {
  FtfpProgram prog;
  prog.n = inst.num_sites();
  prog.m = inst.num_clients();
  const std::size_t n = prog.n, m = prog.m;
  if (caps && caps->size() != n) throw PreconditionError("build_lp: caps must have one entry per site");
  LinearProgram& lp = prog.lp;
  lp.num_vars = n + n * m;
  lp.objective.assign(lp.num_vars, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    lp.objective[prog.y_col(i)] = inst.site_costs[i];
    for (std::size_t j = 0; j < m; ++j) lp.objective[prog.x_col(i, j)] = inst.dist(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> row(lp.num_vars, 0.0);
      row[prog.y_col(i)] = 1.0;
      row[prog.x_col(i, j)] = -1.0;
      lp.add_row(std::move(row), RowSense::kGreaterEqual, 0.0);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[prog.x_col(i, j)] = 1.0;
    lp.add_row(std::move(row), RowSense::kGreaterEqual, static_cast<double>(inst.demands[j]));
  }
  if (caps) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*caps)[i] >= 0)) throw PreconditionError("build_lp: caps must be non-negative");
      std::vector<double> row(lp.num_vars, 0.0);
      row[prog.y_col(i)] = 1.0;
      lp.add_row(std::move(row), RowSense::kLessEqual, (*caps)[i]);
    }
  }
  prog.caps = std::move(caps);
  return prog;
}

LpSolution solve_lp(const FtfpProgram& prog) {
  SimplexResult res;
  try {
    res = solve_simplex(prog.lp);
  } catch (const ResourceError& e) {
    throw InternalError(std::string("solve_lp: ") + e.what());
  }
  const std::size_t n = prog.n, m = prog.m;
  LpSolution out;
  out.pivots = res.pivots;
  auto& p = out.primal;
  p.y.resize(n);
  p.x = Matrix<double>(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    p.y[i] = res.primal[prog.y_col(i)];
    for (std::size_t j = 0; j < m; ++j) p.x(i, j) = res.primal[prog.x_col(i, j)];
  }
  p.objective = res.objective;

  auto& d = out.dual;
  d.alpha.resize(m);
  d.beta = Matrix<double>(n, m);
  for (std::size_t j = 0; j < m; ++j) d.alpha[j] = std::max(0.0, res.dual[prog.coverage_row(j)]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) d.beta(i, j) = std::max(0.0, res.dual[prog.linking_row(i, j)]);
  }
  d.objective = 0;
  for (std::size_t j = 0; j < m; ++j) d.objective += prog.lp.rhs[prog.coverage_row(j)] * d.alpha[j];
  if (prog.caps) {
    d.gamma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      d.gamma[i] = std::max(0.0, -res.dual[prog.cap_row(i)]);
      d.objective -= (*prog.caps)[i] * d.gamma[i];
    }
  }
  return out;
}

double lp_value(const Instance& inst, std::optional<std::vector<double>> caps) {
  return solve_lp(build_lp(inst, std::move(caps))).primal.objective;
}

std::size_t trim_coverage(FractionalSolution& sol, const Instance& inst) {
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  std::size_t trimmed = 0;
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < m; ++j) {
    double cover = 0;
    for (std::size_t i = 0; i < n; ++i) cover += sol.x(i, j);
    double surplus = cover - static_cast<double>(inst.demands[j]);
    if (surplus <= 1e-12) continue;
    ++trimmed;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return inst.dist(a, j) > inst.dist(b, j); });
    for (std::size_t i : order) {
      if (surplus <= 0) break;
      const double cut = std::min(surplus, sol.x(i, j));
      sol.x(i, j) -= cut;
      surplus -= cut;
      sol.objective -= cut * inst.dist(i, j);
    }
  }
  return trimmed;
}

DualityReport check_duality(const FractionalSolution& p, const DualSolution& d, const Instance& inst) {
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  DualityReport rep;
  auto family = [&rep](const std::string& name) -> FamilySlack& {
    rep.families.push_back({name, 0.0, true});
    return rep.families.back();
  };
  auto record = [&rep](FamilySlack& fam, double slack, const std::string& where) {
    fam.worst = std::min(fam.worst, slack);
    if (slack < -kFeasTol) {
      fam.ok = false;
      rep.ok = false;
      rep.violations.push_back(fam.family + " violated at " + where + " by " + format_real(-slack));
    }
  };
  auto ij = [](std::size_t i, std::size_t j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; };

  {
    auto& fam = family("primal_linking: y_i - x_ij >= 0");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) record(fam, p.y[i] - p.x(i, j), ij(i, j));
  }
  {
    auto& fam = family("primal_coverage: sum_i x_ij >= r_j");
    for (std::size_t j = 0; j < m; ++j) {
      double c = 0;
      for (std::size_t i = 0; i < n; ++i) c += p.x(i, j);
      record(fam, c - static_cast<double>(inst.demands[j]), "j=" + std::to_string(j + 1));
    }
  }
  {
    auto& fam = family("primal_nonneg: x, y >= 0");
    for (std::size_t i = 0; i < n; ++i) {
      record(fam, p.y[i], "y_" + std::to_string(i + 1));
      for (std::size_t j = 0; j < m; ++j) record(fam, p.x(i, j), "x" + ij(i, j));
    }
  }
  {
    auto& fam = family("dual_nonneg: alpha, beta >= 0");
    for (std::size_t j = 0; j < m; ++j) record(fam, d.alpha[j], "alpha_" + std::to_string(j + 1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) record(fam, d.beta(i, j), "beta" + ij(i, j));
  }
  {
    auto& fam = family("facility_budget: sum_j beta_ij <= f_i");
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < m; ++j) s += d.beta(i, j);
      record(fam, inst.site_costs[i] - s, "i=" + std::to_string(i + 1));
    }
  }
  {
    auto& fam = family("connection: alpha_j - beta_ij <= d_ij");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) record(fam, inst.dist(i, j) - (d.alpha[j] - d.beta(i, j)), ij(i, j));
  }

  double primal = 0;
  for (std::size_t i = 0; i < n; ++i) {
    primal += inst.site_costs[i] * p.y[i];
    for (std::size_t j = 0; j < m; ++j) primal += inst.dist(i, j) * p.x(i, j);
  }
  double dual = 0;
  for (std::size_t j = 0; j < m; ++j) dual += static_cast<double>(inst.demands[j]) * d.alpha[j];
  rep.primal_objective = primal;
  rep.dual_objective = dual;
  rep.gap = std::abs(primal - dual);
  {
    auto& fam = family("objective_gap: |primal - dual| <= 1e-6 (1 + |primal|)");
    const double allowed = kGapTol * (1.0 + std::abs(primal));
    fam.worst = allowed - rep.gap;
    if (rep.gap > allowed) {
      fam.ok = false;
      rep.ok = false;
      rep.violations.push_back("objective gap " + format_real(rep.gap) + " exceeds " + format_real(allowed));
    }
  }
  return rep;
}

}  // namespace ftfp
