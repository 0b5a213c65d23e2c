#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ftfp/decompose.hpp"
#include "ftfp/instance.hpp"
#include "ftfp/solution.hpp"
#include "ftfp/solvers.hpp"

namespace ftfp {

enum class Algo { kReduce, kLarge, kOracle };

std::string_view to_string(Algo algo);
Algo parse_algo(std::string_view text);

/// Costs, LP references and the measured cost-chain bound of one run.
struct SolveReport {
  Algo algo = Algo::kReduce;
  double cost_s1 = 0;
  double cost_s2 = 0;
  double cost_total = 0;
  double lp_star = 0;
  double lp_star_residual = 0;         // uncapped LP of the residual instance
  double lp_star_residual_capped = 0;  // same LP with y_i <= copies_i
  double rho_sub = 0;                  // cost_s2 / lp_star_residual, 0 when the residual is empty
  double ratio_total = 0;              // cost_total / lp_star
  double chain_bound = 0;
  double chain_slack = 0;              // chain_bound - cost_total
  std::map<std::string, double> wall_times;  // milliseconds per phase
};

struct SolveResult {
  IntegralSolution solution;
  SolveReport report;
  std::optional<Decomposition> decomposition;
};

/// LP rounding with the keep-one-back rule, then the subroutine on the
/// residual split into max(Pbar, 2) copies per site.
/// chain_bound = max(1, rho_sub) * lp_star.
SolveResult solve_reduce(const Instance& inst, const Subroutine& sub);

/// LP rounding with plain floors, then the subroutine on the residual split
/// into n - 1 copies per site. Requires min_j r_j >= 1.
/// chain_bound = (1 + rho_sub * n / R) * lp_star.
SolveResult solve_large(const Instance& inst, const Subroutine& sub);

/// Exact optimum with every site capped at max_j r_j.
IntegralSolution solve_oracle(const Instance& inst, std::uint64_t node_budget = kDefaultNodeBudget);

/// Oracle run wrapped in a report: lp_star, cost_total and ratio_total are filled.
SolveResult solve_oracle_report(const Instance& inst, std::uint64_t node_budget = kDefaultNodeBudget);

SolveResult run_algo(Algo algo, const Instance& inst, const Subroutine& sub);

/// Checks shape, non-negativity, x_ij <= y_i, exact coverage and the cost
/// field (relative 1e-6). Empty means ok.
std::vector<Violation> verify_solution(const Instance& inst, const IntegralSolution& s);

/// Entrywise sum; facilities from the two parts are distinct even at one site.
IntegralSolution combine(const IntegralSolution& s1, const IntegralSolution& s2);

/// Drops surplus connections, most expensive first, until coverage is exact.
void trim_surplus(IntegralSolution& s, const Instance& inst);

std::string report_to_json(const SolveReport& rep, int indent = 2);

/// `ftfp-dec 1` block: header, `n m`, mode, yhat, xhat rows, ybar, xbar rows, rhat, rbar.
void write_decomposition(std::ostream& out, const Decomposition& dec);

}  // namespace ftfp
