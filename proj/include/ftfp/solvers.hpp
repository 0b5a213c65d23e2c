#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "ftfp/bridge.hpp"
#include "ftfp/solution.hpp"

namespace ftfp {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

struct Assignment {
  Matrix<Demand> x;
  double cost = 0;
};

/// Cheapest connections given open counts: each client independently takes
/// its r_j nearest facility copies, at most y_i from site i. Ties go to the
/// lower site index. Throws InfeasibleError naming the first short client.
Assignment optimal_assignment(std::span<const Demand> y, const Instance& inst);

/// Exact optimum over 0 <= y_i <= caps_i by depth-first branch-and-bound.
///
/// Sites are branched in index order with counts ascending; the bound adds the
/// facility cost committed so far to each client's cheapest connections when
/// every undecided site is fully open. Among optimal y the lexicographically
/// smallest is returned. Throws ResourceError once `node_budget` nodes have
/// been visited and InfeasibleError when the caps cannot cover some client.
IntegralSolution solve_exact(const CappedInstance& ci, std::uint64_t node_budget = kDefaultNodeBudget);

/// Amortized-cost greedy: repeatedly open the facility whose star
/// (f_i plus the nearest unsatisfied clients, prefix chosen to minimize the
/// average) is cheapest per demand unit served, then reassign optimally.
IntegralSolution solve_greedy(const CappedInstance& ci);

enum class SubroutineKind { kExact, kGreedy };

/// The pluggable FTFL step of the pipelines.
struct Subroutine {
  SubroutineKind kind = SubroutineKind::kExact;
  std::uint64_t node_budget = kDefaultNodeBudget;

  IntegralSolution operator()(const CappedInstance& ci) const;
};

std::string_view to_string(SubroutineKind kind);
SubroutineKind parse_subroutine_kind(std::string_view text);

}  // namespace ftfp
