#include "ftfp/bridge.hpp"

#include <algorithm>

#include "ftfp/errors.hpp"

namespace ftfp {

SplitMap SplitMap::from_copies(std::vector<Demand> copies) {
  SplitMap map;
  for (std::size_t i = 0; i < copies.size(); ++i) {
    if (copies[i] < 0) throw PreconditionError("split map: negative copy count");
    for (Demand c = 0; c < copies[i]; ++c) map.copy_to_site.push_back(i);
  }
  map.total_copies = map.copy_to_site.size();
  map.copies = std::move(copies);
  return map;
}

std::vector<Demand> split_count_reduce(const Decomposition& dec) {
  if (dec.mode != RoundingMode::kKeepOneBack) {
    throw PreconditionError("split_count_reduce: decomposition must use the keep-one-back rule");
  }
  const Demand pbar = dec.max_residual_demand();
  const std::size_t n = dec.yhat.size();
  if (pbar == 0) return std::vector<Demand>(n, 0);
  // ybar_i can exceed 1 while Pbar == 1, so a single copy may not embed it.
  return std::vector<Demand>(n, std::max<Demand>(pbar, 2));
}

std::vector<Demand> split_count_large(const Instance& residual) {
  const std::size_t n = residual.num_sites();
  if (residual.all_demands_zero()) return std::vector<Demand>(n, 0);
  return std::vector<Demand>(n, std::max<Demand>(static_cast<Demand>(n) - 1, 1));
}

CappedInstance to_capped(const Instance& inst, std::vector<Demand> copies) {
  if (copies.size() != inst.num_sites()) throw PreconditionError("to_capped: one copy count per site required");
  if (std::any_of(copies.begin(), copies.end(), [](Demand c) { return c < 0; })) {
    throw PreconditionError("to_capped: copy counts must be non-negative");
  }
  return CappedInstance{inst, std::move(copies)};
}

Instance materialize_split(const Instance& inst, const SplitMap& map) {
  if (map.copies.size() != inst.num_sites()) throw PreconditionError("materialize_split: map does not match instance");
  const std::size_t m = inst.num_clients();
  Instance out;
  out.name = inst.name.empty() ? std::string() : inst.name + "/split";
  out.demands = inst.demands;
  out.site_costs.reserve(map.total_copies);
  out.dist = Matrix<double>(map.total_copies, m);
  for (std::size_t c = 0; c < map.total_copies; ++c) {
    const std::size_t i = map.copy_to_site[c];
    out.site_costs.push_back(inst.site_costs[i]);
    for (std::size_t j = 0; j < m; ++j) out.dist(c, j) = inst.dist(i, j);
  }
  return out;
}

IntegralSolution merge_solution(const IntegralSolution& s, const SplitMap& map) {
  const std::size_t n = map.copies.size();
  const std::size_t m = s.x.cols();
  if (s.x.rows() != s.y.size()) throw PreconditionError("merge_solution: solution shape is inconsistent");
  for (std::size_t r = 0; r < s.y.size(); ++r) {
    if (s.y[r] < 0) throw PreconditionError("merge_solution: negative facility count");
    for (std::size_t j = 0; j < m; ++j) {
      if (s.x(r, j) < 0 || s.x(r, j) > s.y[r]) {
        throw PreconditionError("merge_solution: connection count exceeds open facilities at row " + std::to_string(r + 1));
      }
    }
  }
  if (s.y.size() == map.total_copies) {
    IntegralSolution out = empty_solution(n, m);
    out.cost = s.cost;
    for (std::size_t c = 0; c < map.total_copies; ++c) {
      if (s.y[c] > 1) throw PreconditionError("merge_solution: a split copy hosts more than one facility");
      const std::size_t i = map.copy_to_site[c];
      out.y[i] += s.y[c];
      for (std::size_t j = 0; j < m; ++j) out.x(i, j) += s.x(c, j);
    }
    return out;
  }
  if (s.y.size() == n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s.y[i] > map.copies[i]) throw PreconditionError("merge_solution: site " + std::to_string(i + 1) + " exceeds its cap");
    }
    return s;
  }
  throw PreconditionError("merge_solution: solution matches neither the split nor the capped shape");
}

}  // namespace ftfp
