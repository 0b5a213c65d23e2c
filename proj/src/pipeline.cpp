#include "ftfp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "ftfp/bridge.hpp"
#include "ftfp/errors.hpp"
#include "ftfp/lp.hpp"

namespace ftfp {

namespace {

class PhaseTimer {
 public:
  explicit PhaseTimer(std::map<std::string, double>& sink) : sink_(sink), start_(Clock::now()) {}
  void lap(const std::string& phase) {
    const auto now = Clock::now();
    sink_[phase] += std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::map<std::string, double>& sink_;
  Clock::time_point start_;
};

double safe_ratio(double num, double den) {
  const double tol = 1e-12 * (1.0 + std::abs(num));
  if (std::abs(den) <= 1e-12) {
    return std::abs(num) <= tol ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return num / den;
}

IntegralSolution rounded_solution(const Decomposition& dec, const Instance& inst) {
  IntegralSolution s;
  s.y = dec.yhat;
  s.x = dec.xhat;
  s.cost = solution_cost(inst, s);
  return s;
}

void check_verified(const Instance& inst, const IntegralSolution& s) {
  auto v = verify_solution(inst, s);
  if (!v.empty()) throw InternalError("combined solution failed verification: " + v.front().message);
}

struct ResidualPhase {
  IntegralSolution solution;
  double lp_residual = 0;
  double lp_residual_capped = 0;
};

ResidualPhase solve_residual(const Instance& residual, std::vector<Demand> copies, const Subroutine& sub,
                             PhaseTimer& timer) {
  ResidualPhase out;
  const std::size_t n = residual.num_sites(), m = residual.num_clients();
  if (residual.all_demands_zero()) {
    out.solution = empty_solution(n, m);
    return out;
  }
  out.lp_residual = lp_value(residual);
  std::vector<double> caps(copies.begin(), copies.end());
  out.lp_residual_capped = lp_value(residual, caps);
  timer.lap("residual_lp");
  const SplitMap map = SplitMap::from_copies(copies);
  const CappedInstance ci = to_capped(residual, std::move(copies));
  IntegralSolution s2 = sub(ci);
  out.solution = merge_solution(s2, map);
  timer.lap("subroutine");
  return out;
}

void finish(SolveResult& res, Algo algo, const Instance& inst, const FractionalSolution& lp, Decomposition dec,
            ResidualPhase residual, PhaseTimer& timer) {
  SolveReport& rep = res.report;
  IntegralSolution s1 = rounded_solution(dec, inst);
  IntegralSolution total = combine(s1, residual.solution);
  trim_surplus(total, inst);
  total.cost = solution_cost(inst, total);
  check_verified(inst, total);
  timer.lap("combine_verify");

  rep.algo = algo;
  rep.cost_s1 = s1.cost;
  rep.cost_s2 = solution_cost(inst, residual.solution);
  rep.cost_total = total.cost;
  rep.lp_star = lp.objective;
  rep.lp_star_residual = residual.lp_residual;
  rep.lp_star_residual_capped = residual.lp_residual_capped;
  rep.rho_sub = dec.residual_empty() ? 0.0 : safe_ratio(rep.cost_s2, rep.lp_star_residual);
  rep.ratio_total = safe_ratio(rep.cost_total, rep.lp_star);
  if (rep.lp_star <= 1e-12 && rep.cost_total <= 1e-12) rep.ratio_total = 1.0;
  res.solution = std::move(total);
  res.decomposition = std::move(dec);
}

FractionalSolution solve_root_lp(const Instance& inst) {
  FractionalSolution sol = solve_lp(build_lp(inst)).primal;
  trim_coverage(sol, inst);
  return sol;
}

void require_valid(const Instance& inst) {
  auto v = validate(inst);
  if (!v.empty()) throw PreconditionError("invalid instance: " + v.front().message);
}

}  // namespace

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::kReduce:
      return "reduce";
    case Algo::kLarge:
      return "large";
    case Algo::kOracle:
      return "oracle";
  }
  return "?";
}

Algo parse_algo(std::string_view text) {
  if (text == "reduce") return Algo::kReduce;
  if (text == "large") return Algo::kLarge;
  if (text == "oracle") return Algo::kOracle;
  throw PreconditionError("unknown algorithm '" + std::string(text) + "' (expected reduce, large or oracle)");
}

SolveResult solve_reduce(const Instance& inst, const Subroutine& sub) {
  require_valid(inst);
  SolveResult res;
  PhaseTimer timer(res.report.wall_times);
  const FractionalSolution lp = solve_root_lp(inst);
  timer.lap("lp");
  Decomposition dec = decompose_keep_one_back(lp, inst);
  if (!residual_is_fractionally_feasible(dec)) {
    throw InternalError("keep-one-back residual is not fractionally feasible");
  }
  timer.lap("decompose");
  ResidualPhase residual = solve_residual(residual_instance(dec, inst), split_count_reduce(dec), sub, timer);
  finish(res, Algo::kReduce, inst, lp, std::move(dec), std::move(residual), timer);
  SolveReport& r = res.report;
  r.chain_bound = std::max(1.0, r.rho_sub) * r.lp_star;
  r.chain_slack = r.chain_bound - r.cost_total;
  return res;
}

SolveResult solve_large(const Instance& inst, const Subroutine& sub) {
  require_valid(inst);
  const Demand big_r = inst.min_demand();
  if (big_r < 1) throw PreconditionError("solve_large requires every demand to be at least 1");
  SolveResult res;
  PhaseTimer timer(res.report.wall_times);
  const FractionalSolution lp = solve_root_lp(inst);
  timer.lap("lp");
  Decomposition dec = decompose_plain_floor(lp, inst);
  const Demand n = static_cast<Demand>(inst.num_sites());
  if (dec.max_residual_demand() > std::max<Demand>(n - 1, 0)) {
    throw InternalError("plain-floor residual demand exceeds n - 1");
  }
  timer.lap("decompose");
  const Instance residual = residual_instance(dec, inst);
  ResidualPhase phase = solve_residual(residual, split_count_large(residual), sub, timer);
  finish(res, Algo::kLarge, inst, lp, std::move(dec), std::move(phase), timer);
  SolveReport& r = res.report;
  r.chain_bound = (1.0 + r.rho_sub * static_cast<double>(n) / static_cast<double>(big_r)) * r.lp_star;
  r.chain_slack = r.chain_bound - r.cost_total;
  return res;
}

IntegralSolution solve_oracle(const Instance& inst, std::uint64_t node_budget) {
  require_valid(inst);
  const Demand p = inst.max_demand();
  IntegralSolution s = solve_exact(to_capped(inst, std::vector<Demand>(inst.num_sites(), p)), node_budget);
  return s;
}

SolveResult solve_oracle_report(const Instance& inst, std::uint64_t node_budget) {
  SolveResult res;
  SolveReport& rep = res.report;
  rep.algo = Algo::kOracle;
  PhaseTimer timer(rep.wall_times);
  rep.lp_star = lp_value(inst);
  timer.lap("lp");
  IntegralSolution s = solve_oracle(inst, node_budget);
  timer.lap("subroutine");
  check_verified(inst, s);
  timer.lap("combine_verify");
  rep.cost_s1 = s.cost;
  rep.cost_total = s.cost;
  rep.ratio_total = safe_ratio(rep.cost_total, rep.lp_star);
  if (rep.lp_star <= 1e-12 && rep.cost_total <= 1e-12) rep.ratio_total = 1.0;
  rep.chain_bound = rep.cost_total;
  rep.chain_slack = 0;
  res.solution = std::move(s);
  return res;
}

SolveResult run_algo(Algo algo, const Instance& inst, const Subroutine& sub) {
  switch (algo) {
    case Algo::kReduce:
      return solve_reduce(inst, sub);
    case Algo::kLarge:
      return solve_large(inst, sub);
    case Algo::kOracle:
      return solve_oracle_report(inst, sub.node_budget);
  }
  throw InternalError("unknown algorithm");
}

std::vector<Violation> verify_solution(const Instance& inst, const IntegralSolution& s) {
  std::vector<Violation> out;
  const std::size_t n = inst.num_sites(), m = inst.num_clients();
  if (s.y.size() != n || s.x.rows() != n || s.x.cols() != m) {
    out.push_back({"shape", "solution is not shaped for " + std::to_string(n) + " sites and " + std::to_string(m) +
                                " clients"});
    return out;
  }
  auto ij = [](std::size_t i, std::size_t j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); };
  for (std::size_t i = 0; i < n; ++i) {
    if (s.y[i] < 0) out.push_back({"nonnegativity", "y_" + std::to_string(i + 1) + " is negative"});
    for (std::size_t j = 0; j < m; ++j) {
      if (s.x(i, j) < 0) out.push_back({"nonnegativity", "x_" + ij(i, j) + " is negative"});
      if (s.x(i, j) > s.y[i]) {
        out.push_back({"linking", "x_" + ij(i, j) + " = " + std::to_string(s.x(i, j)) + " exceeds y_" +
                                      std::to_string(i + 1) + " = " + std::to_string(s.y[i])});
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    Demand cover = 0;
    for (std::size_t i = 0; i < n; ++i) cover += s.x(i, j);
    if (cover != inst.demands[j]) {
      out.push_back({"coverage", "client " + std::to_string(j + 1) + " has " + std::to_string(cover) +
                                     " connections but demand " + std::to_string(inst.demands[j])});
    }
  }
  const double expect = solution_cost(inst, s);
  if (std::abs(expect - s.cost) > 1e-6 * (1.0 + std::abs(expect))) {
    out.push_back({"cost", "recorded cost " + format_real(s.cost) + " differs from recomputed " + format_real(expect)});
  }
  return out;
}

IntegralSolution combine(const IntegralSolution& s1, const IntegralSolution& s2) {
  if (s1.y.size() != s2.y.size() || s1.x.rows() != s2.x.rows() || s1.x.cols() != s2.x.cols()) {
    throw PreconditionError("combine: solutions have different shapes");
  }
  IntegralSolution out = s1;
  for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += s2.y[i];
  for (std::size_t k = 0; k < out.x.data().size(); ++k) out.x.data()[k] += s2.x.data()[k];
  out.cost = s1.cost + s2.cost;
  return out;
}

void trim_surplus(IntegralSolution& s, const Instance& inst) {
  const std::size_t n = inst.num_sites();
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    Demand cover = 0;
    for (std::size_t i = 0; i < n; ++i) cover += s.x(i, j);
    Demand surplus = cover - inst.demands[j];
    if (surplus <= 0) continue;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return inst.dist(a, j) > inst.dist(b, j); });
    for (std::size_t i : order) {
      const Demand cut = std::min(surplus, s.x(i, j));
      s.x(i, j) -= cut;
      surplus -= cut;
      if (surplus == 0) break;
    }
  }
  s.cost = solution_cost(inst, s);
}

std::string report_to_json(const SolveReport& rep, int indent) {
  auto num = [](double v) -> nlohmann::json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  nlohmann::ordered_json j;
  j["algo"] = std::string(to_string(rep.algo));
  j["cost_s1"] = num(rep.cost_s1);
  j["cost_s2"] = num(rep.cost_s2);
  j["cost_total"] = num(rep.cost_total);
  j["lp_star"] = num(rep.lp_star);
  j["lp_star_residual"] = num(rep.lp_star_residual);
  j["lp_star_residual_capped"] = num(rep.lp_star_residual_capped);
  j["rho_sub"] = num(rep.rho_sub);
  j["ratio_total"] = num(rep.ratio_total);
  j["chain_bound"] = num(rep.chain_bound);
  j["chain_slack"] = num(rep.chain_slack);
  nlohmann::ordered_json times = nlohmann::ordered_json::object();
  for (const auto& [phase, ms] : rep.wall_times) times[phase] = ms;
  j["wall_times"] = times;
  return j.dump(indent);
}

void write_decomposition(std::ostream& out, const Decomposition& dec) {
  const std::size_t n = dec.yhat.size(), m = dec.xhat.cols();
  out << "ftfp-dec 1\n" << n << ' ' << m << '\n';
  out << (dec.mode == RoundingMode::kKeepOneBack ? "keep_one_back" : "plain_floor") << '\n';
  auto row = [&out](const auto& values, auto fmt) {
    bool first = true;
    for (const auto& v : values) {
      out << (first ? "" : " ") << fmt(v);
      first = false;
    }
    out << '\n';
  };
  auto ints = [](Demand v) { return std::to_string(v); };
  row(dec.yhat, ints);
  for (std::size_t i = 0; i < n; ++i) row(dec.xhat.row(i), ints);
  row(dec.ybar, format_real);
  for (std::size_t i = 0; i < n; ++i) row(dec.xbar.row(i), format_real);
  row(dec.rhat, ints);
  row(dec.rbar, ints);
}

}  // namespace ftfp
