#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftfp/instance.hpp"
#include "ftfp/simplex.hpp"

namespace ftfp {

/// The facility placement LP over an instance, with its column and row maps.
///
/// Columns: y_i at i, x_ij at n + i*m + j. Rows: the n*m linking rows
/// y_i - x_ij >= 0 first (row i*m + j), then m coverage rows
/// sum_i x_ij >= r_j, then (when capped) n rows y_i <= cap_i.
struct FtfpProgram {
  std::size_t n = 0;
  std::size_t m = 0;
  LinearProgram lp;
  std::optional<std::vector<double>> caps;

  std::size_t y_col(std::size_t i) const { return i; }
  std::size_t x_col(std::size_t i, std::size_t j) const { return n + i * m + j; }
  std::size_t linking_row(std::size_t i, std::size_t j) const { return i * m + j; }
  std::size_t coverage_row(std::size_t j) const { return n * m + j; }
  std::size_t cap_row(std::size_t i) const { return n * m + m + i; }
};

struct FractionalSolution {
  Matrix<double> x;       // x*_ij
  std::vector<double> y;  // y*_i
  double objective = 0;   // LP*
};

struct DualSolution {
  std::vector<double> alpha;  // per client
  Matrix<double> beta;        // per site x client
  std::vector<double> gamma;  // per-site cap multipliers; empty when uncapped
  double objective = 0;
};

struct LpSolution {
  FractionalSolution primal;
  DualSolution dual;
  std::size_t pivots = 0;
};

FtfpProgram build_lp(const Instance& inst, std::optional<std::vector<double>> caps = std::nullopt);

/// Optimal basic solution and its complementary dual.
LpSolution solve_lp(const FtfpProgram& program);

/// Convenience: LP* of an instance, optionally capped.
double lp_value(const Instance& inst, std::optional<std::vector<double>> caps = std::nullopt);

/// Reduces over-coverage so that sum_i x_ij == r_j, dropping the most
/// expensive connections first. Cost does not increase and x <= y still holds.
/// Returns the number of clients that were trimmed.
std::size_t trim_coverage(FractionalSolution& sol, const Instance& inst);

struct FamilySlack {
  std::string family;
  double worst = 0;  // most negative slack seen (negative means violated)
  bool ok = true;
};

struct DualityReport {
  bool ok = true;
  double primal_objective = 0;
  double dual_objective = 0;
  double gap = 0;
  std::vector<FamilySlack> families;
  std::vector<std::string> violations;
};

/// Checks primal and dual feasibility for the uncapped program and the
/// objective gap against 1e-6 * (1 + |primal|).
DualityReport check_duality(const FractionalSolution& p, const DualSolution& d, const Instance& inst);

}  // namespace ftfp
