#include "ftfp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ftfp/errors.hpp"

namespace ftfp {

namespace {

// Sites ordered by (d_ij, i) for each client.
std::vector<std::vector<std::size_t>> nearest_order(const Instance& inst) {
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  std::vector<std::vector<std::size_t>> order(m, std::vector<std::size_t>(n));
  for (std::size_t j = 0; j < m; ++j) {
    std::iota(order[j].begin(), order[j].end(), std::size_t{0});
    std::stable_sort(order[j].begin(), order[j].end(),
                     [&](std::size_t a, std::size_t b) { return inst.dist(a, j) < inst.dist(b, j); });
  }
  return order;
}

void check_caps(const CappedInstance& ci) {
  const std::size_t n = ci.base.num_sites();
  if (ci.caps.size() != n) throw PreconditionError("capped instance: one cap per site required");
  Demand total = 0;
  for (Demand c : ci.caps) {
    if (c < 0) throw PreconditionError("capped instance: negative cap");
    total += c;
  }
  for (std::size_t j = 0; j < ci.base.num_clients(); ++j) {
    if (ci.base.demands[j] > total) {
      throw InfeasibleError("client " + std::to_string(j + 1) + " demands " + std::to_string(ci.base.demands[j]) +
                            " but only " + std::to_string(total) + " facilities can be opened");
    }
  }
}

class BranchAndBound {
 public:
  BranchAndBound(const CappedInstance& ci, std::uint64_t budget)
      : inst_(ci.base), budget_(budget), order_(nearest_order(ci.base)) {
    const std::size_t n = inst_.num_sites();
    const Demand p = inst_.max_demand();
    // No site ever needs more than max_j r_j facilities.
    limit_.resize(n);
    for (std::size_t i = 0; i < n; ++i) limit_[i] = std::min(ci.caps[i], p);
    y_.assign(n, 0);
    avail_.assign(limit_.begin(), limit_.end());
  }

  IntegralSolution run() {
    descend(0, 0.0);
    if (!found_) throw InfeasibleError("no feasible facility vector within caps");
    IntegralSolution s;
    s.y = best_y_;
    Assignment a = optimal_assignment(s.y, inst_);
    s.x = std::move(a.x);
    s.cost = solution_cost(inst_, s);
    return s;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  // Connection cost with avail_ as capacities; +inf if some client is short.
  double connection_bound() const {
    double total = 0;
    for (std::size_t j = 0; j < inst_.num_clients(); ++j) {
      Demand need = inst_.demands[j];
      for (std::size_t i : order_[j]) {
        if (need == 0) break;
        const Demand take = std::min(need, avail_[i]);
        total += static_cast<double>(take) * inst_.dist(i, j);
        need -= take;
      }
      if (need > 0) return std::numeric_limits<double>::infinity();
    }
    return total;
  }

  void descend(std::size_t site, double facility_cost) {
    if (++nodes_ > budget_) {
      throw ResourceError("branch-and-bound node budget of " + std::to_string(budget_) + " exceeded");
    }
    const double bound = facility_cost + connection_bound();
    if (!std::isfinite(bound)) return;
    // Nodes are visited in lexicographic order of y, so a later node only
    // matters if it is strictly cheaper.
    if (found_ && bound >= best_cost_ - 1e-9 * (1.0 + std::abs(best_cost_))) return;
    if (site == inst_.num_sites()) {
      // All sites fixed: the bound is the exact cost.
      found_ = true;
      best_cost_ = bound;
      best_y_ = y_;
      return;
    }
    for (Demand k = 0; k <= limit_[site]; ++k) {
      y_[site] = k;
      avail_[site] = k;
      descend(site + 1, facility_cost + inst_.site_costs[site] * static_cast<double>(k));
    }
    y_[site] = 0;
    avail_[site] = limit_[site];
  }

  const Instance& inst_;
  std::uint64_t budget_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<Demand> limit_;
  std::vector<Demand> y_;
  std::vector<Demand> avail_;
  std::vector<Demand> best_y_;
  double best_cost_ = 0;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

Assignment optimal_assignment(std::span<const Demand> y, const Instance& inst) {
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  if (y.size() != n) throw PreconditionError("optimal_assignment: one open count per site required");
  const auto order = nearest_order(inst);
  Assignment a{Matrix<Demand>(n, m), 0.0};
  for (std::size_t j = 0; j < m; ++j) {
    Demand need = inst.demands[j];
    for (std::size_t i : order[j]) {
      if (need == 0) break;
      const Demand take = std::min(need, std::max<Demand>(y[i], 0));
      a.x(i, j) = take;
      a.cost += static_cast<double>(take) * inst.dist(i, j);
      need -= take;
    }
    if (need > 0) {
      throw InfeasibleError("client " + std::to_string(j + 1) + " cannot be served: " + std::to_string(need) +
                            " demand units lack an open facility");
    }
  }
  return a;
}

IntegralSolution solve_exact(const CappedInstance& ci, std::uint64_t node_budget) {
  check_caps(ci);
  BranchAndBound bnb(ci, node_budget);
  return bnb.run();
}

IntegralSolution solve_greedy(const CappedInstance& ci) {
  check_caps(ci);
  const Instance& inst = ci.base;
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  std::vector<Demand> y(n, 0);
  std::vector<Demand> served(m, 0);
  std::vector<std::size_t> clients;
  clients.reserve(m);

  for (;;) {
    bool pending = false;
    for (std::size_t j = 0; j < m; ++j) pending = pending || served[j] < inst.demands[j];
    if (!pending) break;

    double best_ratio = std::numeric_limits<double>::infinity();
    std::size_t best_site = n;
    std::size_t best_prefix = 0;
    std::vector<std::size_t> best_clients;
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] >= ci.caps[i]) continue;
      clients.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (served[j] < inst.demands[j]) clients.push_back(j);
      }
      std::stable_sort(clients.begin(), clients.end(),
                       [&](std::size_t a, std::size_t b) { return inst.dist(i, a) < inst.dist(i, b); });
      double sum = inst.site_costs[i];
      for (std::size_t k = 0; k < clients.size(); ++k) {
        sum += inst.dist(i, clients[k]);
        const double ratio = sum / static_cast<double>(k + 1);
        if (best_site == n || ratio < best_ratio - 1e-12 * (1.0 + std::abs(best_ratio))) {
          best_ratio = ratio;
          best_site = i;
          best_prefix = k + 1;
          best_clients = clients;
        }
      }
    }
    if (best_site == n) break;  // every site is at its cap
    ++y[best_site];
    for (std::size_t k = 0; k < best_prefix; ++k) ++served[best_clients[k]];
  }

  IntegralSolution s;
  s.y = std::move(y);
  Assignment a = optimal_assignment(s.y, inst);
  s.x = std::move(a.x);
  s.cost = solution_cost(inst, s);
  return s;
}

IntegralSolution Subroutine::operator()(const CappedInstance& ci) const {
  switch (kind) {
    case SubroutineKind::kExact:
      return solve_exact(ci, node_budget);
    case SubroutineKind::kGreedy:
      return solve_greedy(ci);
  }
  throw InternalError("unknown subroutine kind");
}

std::string_view to_string(SubroutineKind kind) {
  return kind == SubroutineKind::kExact ? "exact" : "greedy";
}

SubroutineKind parse_subroutine_kind(std::string_view text) {
  if (text == "exact") return SubroutineKind::kExact;
  if (text == "greedy") return SubroutineKind::kGreedy;
  throw PreconditionError("unknown subroutine '" + std::string(text) + "' (expected exact or greedy)");
}

}  // namespace ftfp
