#include "ftfp/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ftfp/errors.hpp"

namespace ftfp {

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double b) {
  coeffs.resize(num_vars, 0.0);
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(b);
}

namespace {

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {
    const std::size_t rows = lp.num_rows();
    nvars_ = lp.num_vars;
    // Column layout: structural | one slack/surplus per row | artificials.
    nslack_ = rows;
    row_sign_.resize(rows);
    needs_artificial_.resize(rows);
    std::size_t nart = 0;
    for (std::size_t k = 0; k < rows; ++k) {
      const double slack_coef = lp.senses[k] == RowSense::kGreaterEqual ? -1.0 : 1.0;
      // Negate rows so that every right-hand side is non-negative, preferring
      // the orientation whose slack can start basic.
      const bool negate = lp.rhs[k] < 0 || (lp.rhs[k] == 0 && slack_coef < 0);
      row_sign_[k] = negate ? -1.0 : 1.0;
      needs_artificial_[k] = row_sign_[k] * slack_coef < 0;
      if (needs_artificial_[k]) ++nart;
    }
    ncols_ = nvars_ + nslack_ + nart;
    width_ = ncols_ + 1;
    t_.assign(rows * width_, 0.0);
    basis_.resize(rows);
    identity_col_.resize(rows);
    std::size_t next_art = nvars_ + nslack_;
    for (std::size_t k = 0; k < rows; ++k) {
      const double s = row_sign_[k];
      for (std::size_t j = 0; j < nvars_; ++j) at(k, j) = s * lp.rows[k][j];
      const double slack_coef = lp.senses[k] == RowSense::kGreaterEqual ? -1.0 : 1.0;
      at(k, nvars_ + k) = s * slack_coef;
      rhs(k) = s * lp.rhs[k];
      if (needs_artificial_[k]) {
        at(k, next_art) = 1.0;
        basis_[k] = next_art;
        identity_col_[k] = next_art;
        ++next_art;
      } else {
        basis_[k] = nvars_ + k;
        identity_col_[k] = nvars_ + k;
      }
    }
    max_pivots_ = opts.max_pivots ? opts.max_pivots : 20000 + 200 * (rows + ncols_);
  }

  SimplexResult run() {
    const std::size_t rows = lp_.num_rows();
    const std::size_t first_art = nvars_ + nslack_;
    if (first_art < ncols_) {
      std::vector<double> phase1(ncols_, 0.0);
      for (std::size_t j = first_art; j < ncols_; ++j) phase1[j] = 1.0;
      load_costs(phase1);
      optimize(ncols_);
      if (-cost_rhs_ > opts_.feasibility_tol * (1.0 + max_abs_rhs())) {
        throw InfeasibleError("linear program is infeasible (phase one residual " + std::to_string(-cost_rhs_) + ")");
      }
      drive_out_artificials(first_art);
    }
    std::vector<double> phase2(ncols_, 0.0);
    for (std::size_t j = 0; j < nvars_; ++j) phase2[j] = lp_.objective[j];
    load_costs(phase2);
    optimize(first_art);

    SimplexResult res;
    res.primal.assign(nvars_, 0.0);
    for (std::size_t k = 0; k < rows; ++k) {
      if (basis_[k] < nvars_) {
        const double v = rhs(k);
        res.primal[basis_[k]] = std::abs(v) < opts_.pivot_tol ? 0.0 : v;
      }
    }
    res.objective = 0;
    for (std::size_t j = 0; j < nvars_; ++j) res.objective += lp_.objective[j] * res.primal[j];
    // Reduced cost of an identity column e_k is -pi_k; undo the row negation.
    res.dual.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) {
      double y = -cost_[identity_col_[k]] * row_sign_[k];
      if (std::abs(y) < opts_.pivot_tol) y = 0.0;
      res.dual[k] = y;
    }
    res.pivots = pivots_;
    return res;
  }

 private:
  double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
  double& rhs(std::size_t r) { return t_[r * width_ + ncols_]; }

  double max_abs_rhs() const {
    double mx = 0;
    for (double b : lp_.rhs) mx = std::max(mx, std::abs(b));
    return mx;
  }

  void load_costs(const std::vector<double>& c) {
    cost_ = c;
    cost_rhs_ = 0;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const double cb = c[basis_[k]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < ncols_; ++j) cost_[j] -= cb * at(k, j);
      cost_rhs_ -= cb * rhs(k);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    if (++pivots_ > max_pivots_) throw ResourceError("simplex pivot limit exceeded");
    const double p = at(r, c);
    for (std::size_t j = 0; j <= ncols_; ++j) t_[r * width_ + j] /= p;
    at(r, c) = 1.0;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if (k == r) continue;
      const double f = at(k, c);
      if (f == 0) continue;
      for (std::size_t j = 0; j <= ncols_; ++j) t_[k * width_ + j] -= f * t_[r * width_ + j];
      at(k, c) = 0.0;
    }
    const double f = cost_[c];
    if (f != 0) {
      for (std::size_t j = 0; j < ncols_; ++j) cost_[j] -= f * at(r, j);
      cost_rhs_ -= f * rhs(r);
      cost_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Bland: lowest-index improving column; ratio ties go to the lowest basic index.
  void optimize(std::size_t allowed_cols) {
    for (;;) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (cost_[j] < -opts_.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return;
      std::size_t leave = basis_.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < basis_.size(); ++k) {
        const double a = at(k, enter);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = std::max(0.0, rhs(k)) / a;
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && leave < basis_.size() && basis_[k] < basis_[leave])) {
          if (ratio < best) best = ratio;
          leave = k;
        }
      }
      if (leave == basis_.size()) throw InternalError("linear program is unbounded");
      pivot(leave, enter);
    }
  }

  void drive_out_artificials(std::size_t first_art) {
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if (basis_[k] < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::abs(at(k, j)) > opts_.pivot_tol) {
          pivot(k, j);
          break;
        }
      }
      // A row with no structural or slack support is redundant; its artificial stays at zero.
    }
  }

  const LinearProgram& lp_;
  const SimplexOptions& opts_;
  std::size_t nvars_ = 0, nslack_ = 0, ncols_ = 0, width_ = 0;
  std::vector<double> t_;
  std::vector<double> cost_;
  double cost_rhs_ = 0;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> identity_col_;
  std::vector<double> row_sign_;
  std::vector<bool> needs_artificial_;
  std::size_t pivots_ = 0;
  std::size_t max_pivots_ = 0;
};

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& opts) {
  if (lp.objective.size() != lp.num_vars) throw PreconditionError("objective length differs from variable count");
  for (const auto& row : lp.rows) {
    if (row.size() != lp.num_vars) throw PreconditionError("constraint row length differs from variable count");
  }
  Tableau tab(lp, opts);
  return tab.run();
}

}  // namespace ftfp
