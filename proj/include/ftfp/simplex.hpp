#pragma once

#include <cstddef>
#include <vector>

namespace ftfp {

enum class RowSense { kGreaterEqual, kLessEqual };

/// min c'z  s.t.  a_k z (>= | <=) b_k,  z >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;

  std::size_t num_rows() const noexcept { return rows.size(); }
  void add_row(std::vector<double> coeffs, RowSense sense, double b);
};

struct SimplexResult {
  std::vector<double> primal;  // one value per variable
  std::vector<double> dual;    // one multiplier per row, >= 0 for >= rows, <= 0 for <= rows
  double objective = 0;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-7;
  std::size_t max_pivots = 0;  // 0 selects a size-dependent default
};

/// Two-phase dense tableau simplex with Bland's rule.
///
/// Entering and leaving choices both break ties by lowest index, so a given
/// program always follows the same pivot path. Throws InfeasibleError when
/// phase one ends with positive artificial mass, InternalError on
/// unboundedness, and ResourceError when the pivot limit is hit.
SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace ftfp
