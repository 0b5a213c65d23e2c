// ftfp: generate, solve, verify and benchmark fault-tolerant facility placement instances.
//
// Exit codes: 0 ok, 1 verification failure, 2 bad input or flags, 3 search budget exceeded.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ftfp/errors.hpp"
#include "ftfp/instance.hpp"
#include "ftfp/lp.hpp"
#include "ftfp/pipeline.hpp"
#include "ftfp/solvers.hpp"

namespace {

using namespace ftfp;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kBadInput = 2;
constexpr int kBudget = 3;

std::uint64_t node_budget_from_env() {
  const char* env = std::getenv("FTFP_NODE_BUDGET");
  if (!env || !*env) return kDefaultNodeBudget;
  std::uint64_t v = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto res = std::from_chars(env, end, v);
  if (res.ec != std::errc() || res.ptr != end || v == 0) {
    throw PreconditionError(std::string("FTFP_NODE_BUDGET must be a positive integer, got '") + env + "'");
  }
  return v;
}

Instance load_valid_instance(const std::string& path) {
  Instance inst = read_instance_file(path);
  auto v = validate(inst);
  if (!v.empty()) {
    for (const auto& x : v) std::cerr << "invalid instance: " << x.message << '\n';
    throw PreconditionError("instance '" + path + "' failed validation");
  }
  return inst;
}

template <class Fn>
void write_file(const std::string& path, Fn&& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  body(out);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

// ---- gen -------------------------------------------------------------------

struct GenOptions {
  GenParams params;
  std::string out;
};

int cmd_gen(const GenOptions& o) {
  const Instance inst = generate(o.params);
  write_file(o.out, [&](std::ostream& out) { write_instance(out, inst); });
  std::cout << o.out << '\n'
            << "n=" << inst.num_sites() << " m=" << inst.num_clients() << " R=" << inst.min_demand()
            << " P=" << inst.max_demand() << '\n';
  return kOk;
}

// ---- lp --------------------------------------------------------------------

struct LpOptions {
  std::string in;
  std::string caps;
  std::string dump;
};

std::optional<std::vector<double>> parse_caps(const std::string& text, std::size_t n) {
  if (text.empty()) return std::nullopt;
  constexpr std::string_view prefix = "uniform:";
  if (!text.starts_with(prefix)) throw PreconditionError("--caps must look like uniform:K");
  double k = 0;
  const char* first = text.data() + prefix.size();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, k);
  if (res.ec != std::errc() || res.ptr != last || !(k >= 0)) {
    throw PreconditionError("--caps uniform:K needs a non-negative number");
  }
  return std::vector<double>(n, k);
}

int cmd_lp(const LpOptions& o) {
  const Instance inst = load_valid_instance(o.in);
  const LpSolution sol = solve_lp(build_lp(inst, parse_caps(o.caps, inst.num_sites())));
  std::cout << "lp_objective=" << format_real(sol.primal.objective) << '\n';
  if (!o.dump.empty()) {
    write_file(o.dump, [&](std::ostream& out) {
      const std::size_t n = inst.num_sites(), m = inst.num_clients();
      auto row = [&out](auto values) {
        bool first = true;
        for (double v : values) {
          out << (first ? "" : " ") << format_real(v);
          first = false;
        }
        out << '\n';
      };
      out << "ftfp-lp 1\n" << n << ' ' << m << '\n' << format_real(sol.primal.objective) << '\n';
      row(sol.primal.y);
      for (std::size_t i = 0; i < n; ++i) row(sol.primal.x.row(i));
      out << format_real(sol.dual.objective) << '\n';
      row(sol.dual.alpha);
      for (std::size_t i = 0; i < n; ++i) row(sol.dual.beta.row(i));
    });
  }
  return kOk;
}

// ---- solve -----------------------------------------------------------------

struct SolveOptions {
  std::string in;
  std::string algo = "reduce";
  std::string ftfl = "exact";
  std::string out;
  std::string report;
  std::string dump_decomposition;
};

int cmd_solve(const SolveOptions& o) {
  const Algo algo = parse_algo(o.algo);
  const Subroutine sub{parse_subroutine_kind(o.ftfl), node_budget_from_env()};
  const Instance inst = load_valid_instance(o.in);
  const SolveResult res = run_algo(algo, inst, sub);
  write_file(o.out, [&](std::ostream& out) { write_solution(out, res.solution); });
  write_file(o.report, [&](std::ostream& out) { out << report_to_json(res.report) << '\n'; });
  if (!o.dump_decomposition.empty()) {
    if (!res.decomposition) throw PreconditionError("--dump-decomposition needs --algo reduce or large");
    write_file(o.dump_decomposition, [&](std::ostream& out) { write_decomposition(out, *res.decomposition); });
  }
  std::cout << "cost_total=" << format_real(res.report.cost_total)
            << " lp_star=" << format_real(res.report.lp_star)
            << " ratio_total=" << format_real(res.report.ratio_total) << '\n';
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyOptions {
  std::string in;
  std::string sol;
};

int cmd_verify(const VerifyOptions& o) {
  const Instance inst = read_instance_file(o.in);
  IntegralSolution s = read_solution_file(o.sol);
  if (s.x.rows() == inst.num_sites() && s.x.cols() == inst.num_clients()) s.cost = solution_cost(inst, s);
  const auto violations = verify_solution(inst, s);
  if (violations.empty()) {
    std::cout << "ok cost=" << format_real(s.cost) << '\n';
    return kOk;
  }
  for (const auto& v : violations) std::cout << v.kind << ": " << v.message << '\n';
  return kVerifyFailed;
}

// ---- bench -----------------------------------------------------------------

struct BenchOptions {
  int trials = 10;
  GenParams params;
  std::string algo = "reduce";
  std::string ftfl = "exact";
  std::string csv;
  unsigned jobs = 1;
};

struct BenchRow {
  std::uint64_t seed = 0;
  std::size_t n = 0, m = 0;
  Demand big_r = 0, big_p = 0;
  SolveReport report;
  double wall_ms = 0;
};

struct TrialOutcome {
  std::optional<BenchRow> row;
  int code = kOk;
  std::string error;
};

TrialOutcome run_trial(const BenchOptions& o, Algo algo, const Subroutine& sub, int t) {
  TrialOutcome out;
  GenParams p = o.params;
  p.seed = o.params.seed + static_cast<std::uint64_t>(t);
  try {
    const Instance inst = generate(p);
    const SolveResult res = run_algo(algo, inst, sub);
    const SolveReport& r = res.report;
    if (r.chain_slack < -1e-6 * (1 + r.cost_total) || r.ratio_total < 1 - 1e-6) {
      out.code = kVerifyFailed;
      out.error = "seed " + std::to_string(p.seed) + ": cost chain violated (slack " + format_real(r.chain_slack) +
                  ", ratio " + format_real(r.ratio_total) + ")";
      return out;
    }
    double ms = 0;
    for (const auto& [phase, v] : r.wall_times) ms += v;
    out.row = BenchRow{p.seed, inst.num_sites(), inst.num_clients(), inst.min_demand(), inst.max_demand(), r, ms};
  } catch (const ResourceError& e) {
    out.code = kBudget;
    out.error = "seed " + std::to_string(p.seed) + ": " + e.what();
  } catch (const PreconditionError& e) {
    out.code = kBadInput;
    out.error = "seed " + std::to_string(p.seed) + ": " + e.what();
  } catch (const std::exception& e) {
    out.code = kVerifyFailed;
    out.error = "seed " + std::to_string(p.seed) + ": " + e.what();
  }
  return out;
}

int cmd_bench(const BenchOptions& o) {
  const Algo algo = parse_algo(o.algo);
  const Subroutine sub{parse_subroutine_kind(o.ftfl), node_budget_from_env()};
  if (o.trials < 0) throw PreconditionError("--trials must be non-negative");
  generate(o.params);  // reject bad generator flags before any work

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(o.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < o.trials; t = next++) outcomes[static_cast<std::size_t>(t)] = run_trial(o, algo, sub, t);
  };
  std::vector<std::thread> pool;
  const unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(std::max(o.trials, 1))));
  for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  // Trials are indexed by seed, so the file does not depend on scheduling.
  for (const auto& oc : outcomes) {
    if (oc.code != kOk) {
      std::cerr << "bench aborted: " << oc.error << '\n';
      return oc.code;
    }
  }
  double max_ratio = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  write_file(o.csv, [&](std::ostream& out) {
    out << "seed,n,m,R,P,algo,ftfl,lp_star,cost_total,rho_sub,ratio_total,chain_slack,wall_ms\n";
    for (const auto& oc : outcomes) {
      const BenchRow& b = *oc.row;
      const SolveReport& r = b.report;
      out << b.seed << ',' << b.n << ',' << b.m << ',' << b.big_r << ',' << b.big_p << ',' << to_string(algo) << ','
          << to_string(sub.kind) << ',' << format_real(r.lp_star) << ',' << format_real(r.cost_total) << ','
          << format_real(r.rho_sub) << ',' << format_real(r.ratio_total) << ',' << format_real(r.chain_slack) << ','
          << format_real(b.wall_ms) << '\n';
      max_ratio = std::max(max_ratio, r.ratio_total);
      min_slack = std::min(min_slack, r.chain_slack);
    }
  });
  std::cout << "trials=" << o.trials << " max_ratio_total=" << format_real(max_ratio)
            << " min_chain_slack=" << (o.trials ? format_real(min_slack) : std::string("nan")) << '\n';
  return kOk;
}

void add_gen_flags(CLI::App* cmd, GenParams& p, bool with_seed_required) {
  cmd->add_option("--sites", p.sites, "Number of sites")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--clients", p.clients, "Number of clients")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--demand-min", p.demand_min, "Smallest demand")->required()->check(CLI::NonNegativeNumber);
  cmd->add_option("--demand-max", p.demand_max, "Largest demand")->required()->check(CLI::NonNegativeNumber);
  auto* seed = cmd->add_option("--seed", p.seed, "PRNG seed");
  if (with_seed_required) seed->required();
  cmd->add_option("--cost-min", p.cost_min, "Smallest opening cost")->check(CLI::NonNegativeNumber);
  cmd->add_option("--cost-max", p.cost_max, "Largest opening cost")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-tolerant facility placement: LP rounding reductions, exact oracle and verifier"};
  app.require_subcommand(1);
  app.allow_windows_style_options(false);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random Euclidean instance");
  add_gen_flags(gen_cmd, gen.params, true);
  gen_cmd->add_option("--out", gen.out, "Instance file to write")->required();

  LpOptions lp;
  auto* lp_cmd = app.add_subcommand("lp", "Solve the LP relaxation");
  lp_cmd->add_option("--in", lp.in, "Instance file")->required();
  lp_cmd->add_option("--caps", lp.caps, "Per-site facility caps, uniform:K");
  lp_cmd->add_option("--dump", lp.dump, "Write primal and dual values to this file");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run a rounding algorithm or the exact oracle");
  solve_cmd->add_option("--in", solve.in, "Instance file")->required();
  solve_cmd->add_option("--algo", solve.algo, "reduce | large | oracle")
      ->check(CLI::IsMember({"reduce", "large", "oracle"}));
  solve_cmd->add_option("--ftfl", solve.ftfl, "exact | greedy")->check(CLI::IsMember({"exact", "greedy"}));
  solve_cmd->add_option("--out", solve.out, "Solution file to write")->required();
  solve_cmd->add_option("--report", solve.report, "JSON report to write")->required();
  solve_cmd->add_option("--dump-decomposition", solve.dump_decomposition, "Write the rounding decomposition");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a solution against an instance");
  verify_cmd->add_option("--in", verify.in, "Instance file")->required();
  verify_cmd->add_option("--sol", verify.sol, "Solution file")->required();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run seeded trials and write one CSV row per trial");
  bench_cmd->add_option("--trials", bench.trials, "Number of trials")->required()->check(CLI::NonNegativeNumber);
  add_gen_flags(bench_cmd, bench.params, true);
  bench_cmd->add_option("--algo", bench.algo, "reduce | large | oracle")
      ->check(CLI::IsMember({"reduce", "large", "oracle"}));
  bench_cmd->add_option("--ftfl", bench.ftfl, "exact | greedy")->check(CLI::IsMember({"exact", "greedy"}));
  bench_cmd->add_option("--csv", bench.csv, "CSV file to write")->required();
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*lp_cmd) return cmd_lp(lp);
    if (*solve_cmd) return cmd_solve(solve);
    if (*verify_cmd) return cmd_verify(verify);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << " (raise FTFP_NODE_BUDGET or shrink the instance)\n";
    return kBudget;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
