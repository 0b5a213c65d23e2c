#include "doctest.h"
#include "ftfp/errors.hpp"
#include "ftfp/lp.hpp"
#include "ftfp/simplex.hpp"
#include "oracles.hpp"

using namespace ftfp;

namespace {

Instance random_instance(std::uint64_t seed, int max_n, int max_m, Demand max_r, Demand min_r = 0) {
  GenParams p;
  p.sites = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(max_n));
  p.clients = 1 + static_cast<int>((seed / 7) % static_cast<std::uint64_t>(max_m));
  p.demand_min = min_r;
  p.demand_max = max_r;
  p.cost_max = 2.0;
  p.seed = seed;
  return generate(p);
}

}  // namespace

TEST_CASE("simplex solves a small textbook program") {
  // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6  -> x = 8/5, y = 6/5.
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {-1, -1};
  lp.add_row({1, 2}, RowSense::kLessEqual, 4);
  lp.add_row({3, 1}, RowSense::kLessEqual, 6);
  const auto res = solve_simplex(lp);
  CHECK(res.primal[0] == doctest::Approx(1.6));
  CHECK(res.primal[1] == doctest::Approx(1.2));
  CHECK(res.objective == doctest::Approx(-2.8));
  // Duals of <= rows in a minimization are non-positive; b'y equals the optimum.
  CHECK(res.dual[0] <= 0);
  CHECK(res.dual[1] <= 0);
  CHECK(4 * res.dual[0] + 6 * res.dual[1] == doctest::Approx(-2.8));
}

TEST_CASE("simplex reports infeasibility") {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.objective = {1};
  lp.add_row({1}, RowSense::kGreaterEqual, 2);
  lp.add_row({1}, RowSense::kLessEqual, 1);
  CHECK_THROWS_AS(solve_simplex(lp), InfeasibleError);
}

TEST_CASE("build_lp shape") {
  const Instance a = testing::instance_a();
  const FtfpProgram prog = build_lp(a);
  CHECK(prog.lp.num_vars == 4);
  CHECK(prog.lp.num_rows() == 3);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& row = prog.lp.rows[prog.linking_row(i, 0)];
    CHECK(row[prog.y_col(i)] == 1);
    CHECK(row[prog.x_col(i, 0)] == -1);
  }
  CHECK(prog.lp.rhs[prog.coverage_row(0)] == 2);

  const FtfpProgram capped = build_lp(a, std::vector<double>{1, 1});
  CHECK(capped.lp.num_rows() == 5);
  CHECK(capped.lp.senses[capped.cap_row(0)] == RowSense::kLessEqual);
  CHECK(capped.lp.rhs[capped.cap_row(1)] == 1);
}

TEST_CASE("every x column sits in one linking row and one coverage row") {
  const Instance inst = random_instance(5, 4, 4, 3);
  const FtfpProgram prog = build_lp(inst);
  for (std::size_t i = 0; i < prog.n; ++i)
    for (std::size_t j = 0; j < prog.m; ++j) {
      int linking = 0, coverage = 0;
      for (std::size_t r = 0; r < prog.lp.num_rows(); ++r) {
        if (prog.lp.rows[r][prog.x_col(i, j)] == 0) continue;
        if (r < prog.n * prog.m) ++linking;
        else ++coverage;
      }
      CHECK(linking == 1);
      CHECK(coverage == 1);
    }
}

TEST_CASE("solve_lp on instance A") {
  const auto sol = solve_lp(build_lp(testing::instance_a()));
  CHECK(sol.primal.objective == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(sol.primal.y[0] == doctest::Approx(2.0));
  CHECK(sol.primal.y[1] == doctest::Approx(0.0));
  CHECK(sol.primal.x(0, 0) == doctest::Approx(2.0));
  CHECK(sol.primal.x(1, 0) == doctest::Approx(0.0));
  CHECK(sol.dual.objective == doctest::Approx(8.0));
}

TEST_CASE("solve_lp on instance B") {
  const auto sol = solve_lp(build_lp(testing::instance_b()));
  CHECK(sol.primal.objective == doctest::Approx(2.0));
  CHECK(sol.primal.y == std::vector<double>{1, 1});
  CHECK(sol.primal.x(0, 0) == doctest::Approx(1.0));
  CHECK(sol.primal.x(1, 1) == doctest::Approx(1.0));
  CHECK(sol.primal.x(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("solve_lp with zero demand") {
  const auto sol = solve_lp(build_lp(uniform_demand_copy(testing::instance_b(), 0)));
  CHECK(sol.primal.objective == 0);
  for (double y : sol.primal.y) CHECK(y == 0);
  for (double x : sol.primal.x.data()) CHECK(x == 0);
}

TEST_CASE("solve_lp is repeatable bit for bit") {
  const Instance inst = random_instance(17, 6, 6, 5);
  const auto a = solve_lp(build_lp(inst));
  const auto b = solve_lp(build_lp(inst));
  CHECK(a.primal.x == b.primal.x);
  CHECK(a.primal.y == b.primal.y);
  CHECK(a.dual.alpha == b.dual.alpha);
  CHECK(a.primal.objective == b.primal.objective);
}

TEST_CASE("solve_lp agrees with vertex enumeration on tiny instances") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400 && checked < 60; ++seed) {
    const Instance inst = random_instance(seed, 3, 3, 4);
    if (inst.num_sites() + inst.num_sites() * inst.num_clients() > 8) continue;
    ++checked;
    const double expect = testing::lp_by_vertex_enumeration(inst);
    CHECK(lp_value(inst) == doctest::Approx(expect).epsilon(1e-9));
    const std::vector<double> caps(inst.num_sites(), static_cast<double>(inst.max_demand()));
    CHECK(lp_value(inst, caps) == doctest::Approx(testing::lp_by_vertex_enumeration(inst, &caps)).epsilon(1e-9));
  }
  CHECK(checked == 60);
}

TEST_CASE("check_duality certifies optimal pairs") {
  const Instance a = testing::instance_a();
  const auto sol = solve_lp(build_lp(a));
  const auto rep = check_duality(sol.primal, sol.dual, a);
  CHECK(rep.ok);
  CHECK(rep.gap <= 1e-6);
  CHECK(rep.violations.empty());
}

TEST_CASE("check_duality reports a perturbed alpha") {
  const Instance a = testing::instance_a();
  auto sol = solve_lp(build_lp(a));
  sol.dual.alpha[0] += 1;
  const auto rep = check_duality(sol.primal, sol.dual, a);
  CHECK_FALSE(rep.ok);
  bool connection = false;
  for (const auto& fam : rep.families) {
    if (fam.family.starts_with("connection")) {
      connection = !fam.ok;
      CHECK(fam.worst < 0);
    }
  }
  CHECK(connection);
}

TEST_CASE("check_duality on zero demand") {
  const Instance z = uniform_demand_copy(testing::instance_a(), 0);
  const auto sol = solve_lp(build_lp(z));
  const auto rep = check_duality(sol.primal, sol.dual, z);
  CHECK(rep.ok);
  CHECK(rep.primal_objective == 0);
  CHECK(rep.dual_objective == 0);
}

TEST_CASE("strong duality across random instances") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = random_instance(seed, 8, 8, 5);
    const auto sol = solve_lp(build_lp(inst));
    const auto rep = check_duality(sol.primal, sol.dual, inst);
    INFO("seed " << seed);
    CHECK(rep.ok);
  }
}

TEST_CASE("capped dual objective matches the capped optimum") {
  const Instance inst = random_instance(3, 5, 5, 4, 1);
  const std::vector<double> caps(inst.num_sites(), static_cast<double>(inst.max_demand()));
  const auto sol = solve_lp(build_lp(inst, caps));
  CHECK(sol.dual.gamma.size() == inst.num_sites());
  CHECK(sol.dual.objective == doctest::Approx(sol.primal.objective).epsilon(1e-7));
}

TEST_CASE("uniform demand scaling") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = random_instance(seed, 5, 5, 3);
    const double unit = lp_value(uniform_demand_copy(inst, 1));
    for (Demand s = 1; s <= 6; ++s) {
      const double scaled = lp_value(uniform_demand_copy(inst, s));
      CHECK(std::abs(scaled - static_cast<double>(s) * unit) <= 1e-6 * (1 + std::abs(scaled)));
    }
  }
}

TEST_CASE("demand monotonicity and caps") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = random_instance(seed, 5, 5, 4);
    Instance more = inst;
    for (auto& r : more.demands) r += static_cast<Demand>(seed % 3);
    CHECK(lp_value(more) >= lp_value(inst) - 1e-9);
    const std::vector<double> caps(inst.num_sites(), static_cast<double>(std::max<Demand>(inst.max_demand(), 1)));
    CHECK(lp_value(inst, caps) >= lp_value(inst) - 1e-9);
  }
}

TEST_CASE("trim_coverage removes surplus from the most expensive sites") {
  const Instance a = testing::instance_a();
  FractionalSolution sol;
  sol.y = {3, 1};
  sol.x = Matrix<double>(2, 1);
  sol.x(0, 0) = 2;
  sol.x(1, 0) = 1;
  sol.objective = 3 * 3 + 10 + 2 + 2;
  CHECK(trim_coverage(sol, a) == 1);
  CHECK(sol.x(1, 0) == 0);
  CHECK(sol.x(0, 0) == 2);
  CHECK(sol.objective == doctest::Approx(3 * 3 + 10 + 2));
}
