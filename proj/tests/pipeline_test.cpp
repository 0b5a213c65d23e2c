#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ftfp/errors.hpp"
#include "ftfp/lp.hpp"
#include "ftfp/pipeline.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace ftfp;

namespace {

const Subroutine kExact{SubroutineKind::kExact};
const Subroutine kGreedy{SubroutineKind::kGreedy};

bool same_report(const SolveReport& a, const SolveReport& b) {
  return a.algo == b.algo && a.cost_s1 == b.cost_s1 && a.cost_s2 == b.cost_s2 && a.cost_total == b.cost_total &&
         a.lp_star == b.lp_star && a.lp_star_residual == b.lp_star_residual &&
         a.lp_star_residual_capped == b.lp_star_residual_capped && a.rho_sub == b.rho_sub &&
         a.ratio_total == b.ratio_total && a.chain_bound == b.chain_bound && a.chain_slack == b.chain_slack;
}

}  // namespace

TEST_CASE("reduce on instance A") {
  const Instance a = testing::instance_a();
  const SolveResult res = solve_reduce(a, kExact);
  const SolveReport& r = res.report;
  CHECK(r.cost_s1 == doctest::Approx(4.0));
  CHECK(r.cost_s2 == doctest::Approx(4.0));
  CHECK(r.cost_total == doctest::Approx(8.0));
  CHECK(r.lp_star == doctest::Approx(8.0));
  CHECK(r.lp_star_residual == doctest::Approx(4.0));
  CHECK(r.rho_sub == doctest::Approx(1.0));
  CHECK(r.ratio_total == doctest::Approx(1.0));
  CHECK(r.chain_bound == doctest::Approx(8.0));
  CHECK(res.solution.y == std::vector<Demand>{2, 0});
  CHECK(res.solution.x(0, 0) == 2);
  REQUIRE(res.decomposition);
  CHECK(res.decomposition->rbar == std::vector<Demand>{1});
  CHECK(verify_solution(a, res.solution).empty());
}

TEST_CASE("large on instance A") {
  const SolveResult res = solve_large(testing::instance_a(), kExact);
  CHECK(res.report.cost_total == doctest::Approx(8.0));
  CHECK(res.report.cost_s2 == 0);
  CHECK(res.report.rho_sub == 0);
  CHECK(res.report.chain_bound >= 8.0 - 1e-9);
  CHECK(res.decomposition->residual_empty());
}

TEST_CASE("large requires positive demands") {
  Instance b = testing::instance_b();
  b.demands = {0, 1};
  CHECK_THROWS_AS(solve_large(b, kExact), PreconditionError);
}

TEST_CASE("zero-demand pipelines") {
  const Instance z = uniform_demand_copy(testing::instance_b(), 0);
  const SolveResult res = solve_reduce(z, kExact);
  CHECK(res.report.cost_total == 0);
  CHECK(res.solution == empty_solution(2, 2));
  CHECK(res.report.chain_bound == 0);
  CHECK(solve_oracle(z).cost == 0);
}

TEST_CASE("oracle fixtures") {
  const IntegralSolution a = solve_oracle(testing::instance_a());
  CHECK(a.cost == doctest::Approx(8.0));
  CHECK(a.y == std::vector<Demand>{2, 0});
  CHECK(verify_solution(testing::instance_a(), a).empty());
  CHECK(solve_oracle(testing::instance_b()).cost == doctest::Approx(2.0));
}

TEST_CASE("verify_solution catches tampering") {
  const Instance a = testing::instance_a();
  IntegralSolution s = solve_oracle(a);
  CHECK(verify_solution(a, s).empty());

  IntegralSolution more = s;
  more.x(0, 0) += 1;
  more.cost = solution_cost(a, more);
  auto v = verify_solution(a, more);
  bool coverage = false;
  for (const auto& x : v) coverage = coverage || x.kind == "coverage";
  CHECK(coverage);

  IntegralSolution link = empty_solution(2, 1);
  link.y = {1, 0};
  link.x(0, 0) = 2;
  link.cost = solution_cost(a, link);
  v = verify_solution(a, link);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().kind == "linking");

  IntegralSolution cost = s;
  cost.cost += 1;
  CHECK(verify_solution(a, cost).front().kind == "cost");
}

TEST_CASE("combine") {
  const Instance a = testing::instance_a();
  IntegralSolution s1 = empty_solution(2, 1);
  s1.y = {1, 0};
  s1.x(0, 0) = 1;
  s1.cost = 4;
  const IntegralSolution both = combine(s1, s1);
  CHECK(both.y == std::vector<Demand>{2, 0});
  CHECK(both.x(0, 0) == 2);
  CHECK(solution_cost(a, both) == doctest::Approx(8.0));
  CHECK(combine(s1, empty_solution(2, 1)) == s1);
  CHECK_THROWS_AS(combine(s1, empty_solution(2, 2)), PreconditionError);
}

TEST_CASE("trim_surplus drops the most expensive connection") {
  const Instance a = testing::instance_a();
  IntegralSolution s = empty_solution(2, 1);
  s.y = {2, 1};
  s.x(0, 0) = 2;
  s.x(1, 0) = 1;
  trim_surplus(s, a);
  CHECK(s.x(1, 0) == 0);
  CHECK(s.x(0, 0) == 2);
}

TEST_CASE("chain inequalities and determinism on random instances") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenParams p{1 + static_cast<int>(seed % 5), 1 + static_cast<int>((seed / 5) % 5), 1, 4, 0.0, 1.5, seed};
    const Instance inst = generate(p);
    INFO("seed " << seed);
    for (const Subroutine* sub : {&kExact, &kGreedy}) {
      const SolveResult red = solve_reduce(inst, *sub);
      const SolveResult lrg = solve_large(inst, *sub);
      for (const SolveResult* r : {&red, &lrg}) {
        const SolveReport& rep = r->report;
        CHECK(verify_solution(inst, r->solution).empty());
        CHECK(rep.cost_total == doctest::Approx(rep.cost_s1 + rep.cost_s2));
        CHECK(rep.chain_slack >= -1e-6 * (1 + rep.cost_total));
        CHECK(rep.ratio_total >= 1 - 1e-6);
      }
      CHECK(same_report(solve_reduce(inst, *sub).report, red.report));
      CHECK(same_report(solve_large(inst, *sub).report, lrg.report));
    }
    const double opt = solve_oracle(inst).cost;
    CHECK(lp_value(inst) <= opt + 1e-6);
    CHECK(solve_reduce(inst, kExact).report.cost_total >= opt - 1e-6);
  }
}

TEST_CASE("report JSON carries the field names") {
  const SolveResult res = solve_reduce(testing::instance_a(), kExact);
  const auto j = nlohmann::json::parse(report_to_json(res.report));
  for (const char* key : {"algo", "cost_s1", "cost_s2", "cost_total", "lp_star", "lp_star_residual",
                          "lp_star_residual_capped", "rho_sub", "ratio_total", "chain_bound", "chain_slack",
                          "wall_times"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["algo"] == "reduce");
  CHECK(j["cost_total"].get<double>() == doctest::Approx(8.0));
  CHECK(j["wall_times"].is_object());
}

TEST_CASE("solution format round trip") {
  const IntegralSolution s = solve_oracle(testing::instance_b());
  std::stringstream buf;
  write_solution(buf, s);
  CHECK(buf.str().starts_with("ftfp-sol 1\n2 2\n"));
  IntegralSolution back = parse_solution(buf);
  back.cost = solution_cost(testing::instance_b(), back);
  CHECK(back.y == s.y);
  CHECK(back.x == s.x);
  std::stringstream bad("ftfp-sol 2\n1 1\n0\n0\n");
  CHECK_THROWS_AS(parse_solution(bad), ParseError);
}

TEST_CASE("decomposition dump") {
  const SolveResult res = solve_reduce(testing::instance_a(), kExact);
  std::ostringstream out;
  write_decomposition(out, *res.decomposition);
  CHECK(out.str() == "ftfp-dec 1\n2 1\nkeep_one_back\n1 0\n1\n0\n1 0\n1\n0\n1\n1\n");
}

TEST_CASE("pipelines on fractional two-level instances") {
  int fractional = 0;
  for (std::uint32_t seed = 0; seed < 80; ++seed) {
    const Instance inst = seed % 2 ? testing::two_level_instance(2 + seed % 3, 2 + (seed / 3) % 3, 5, seed)
                                   : testing::odd_cycle_instance(3 + 2 * (seed / 2 % 2), 1 + 2 * (seed / 4 % 3), seed);
    INFO("seed " << seed);
    REQUIRE(validate(inst).empty());
    const LpSolution lp = solve_lp(build_lp(inst));
    const bool integral = std::all_of(lp.primal.y.begin(), lp.primal.y.end(),
                                      [](double v) { return std::abs(v - std::round(v)) < 1e-6; });
    if (!integral) ++fractional;
    if (inst.num_sites() * (1 + inst.num_clients()) <= 8)
      CHECK(lp.primal.objective == doctest::Approx(testing::lp_by_vertex_enumeration(inst)));

    const double opt = solve_oracle(inst).cost;
    for (const Subroutine* sub : {&kExact, &kGreedy}) {
      for (const SolveResult& r : {solve_reduce(inst, *sub), solve_large(inst, *sub)}) {
        CHECK(verify_solution(inst, r.solution).empty());
        CHECK(r.report.chain_slack >= -1e-6 * (1 + r.report.cost_total));
        CHECK(r.report.cost_total >= opt - 1e-6);
      }
    }
  }
  CHECK(fractional > 0);
}
