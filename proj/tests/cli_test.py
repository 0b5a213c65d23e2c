"""End-to-end checks of the ftfp command-line tool: exit codes and file formats."""

import csv
import json
import os
import subprocess
import sys
import tempfile
import unittest

FTFP = os.environ.get("FTFP_BIN", "ftfp")

INSTANCE_A = "ftfp 1\n2 1\n3 10\n2\n1\n2\n"
INSTANCE_B = "ftfp 1\n2 2\n1 1\n1 1\n0 2\n2 0\n"


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([FTFP, *args], capture_output=True, text=True, env=full_env)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def write(self, name, text):
        with open(self.path(name), "w") as f:
            f.write(text)
        return self.path(name)

    def test_gen_round_trip_and_determinism(self):
        args = ["gen", "--sites", "2", "--clients", "1", "--demand-min", "2", "--demand-max", "2", "--seed", "7"]
        first = run(*args, "--out", self.path("a.ftfp"))
        self.assertEqual(first.returncode, 0, first.stderr)
        self.assertIn("n=2 m=1 R=2 P=2", first.stdout)
        second = run(*args, "--out", self.path("b.ftfp"))
        self.assertEqual(second.returncode, 0)
        with open(self.path("a.ftfp")) as a, open(self.path("b.ftfp")) as b:
            self.assertEqual(a.read(), b.read())
        solved = run("solve", "--in", self.path("a.ftfp"), "--out", self.path("a.sol"), "--report", self.path("a.json"))
        self.assertEqual(solved.returncode, 0, solved.stderr)

    def test_gen_rejects_inverted_demand_range(self):
        r = run("gen", "--sites", "2", "--clients", "1", "--demand-min", "3", "--demand-max", "1", "--seed", "7",
                "--out", self.path("x.ftfp"))
        self.assertEqual(r.returncode, 2)

    def test_unknown_flag_is_exit_2(self):
        self.assertEqual(run("gen", "--bogus").returncode, 2)
        self.assertEqual(run().returncode, 2)

    def test_lp(self):
        inst = self.write("a.ftfp", INSTANCE_A)
        r = run("lp", "--in", inst, "--dump", self.path("lp.txt"))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout.strip(), "lp_objective=8")
        with open(self.path("lp.txt")) as f:
            self.assertTrue(f.read().startswith("ftfp-lp 1\n2 1\n8\n"))
        capped = run("lp", "--in", inst, "--caps", "uniform:1")
        self.assertEqual(capped.stdout.strip(), "lp_objective=16")
        self.assertEqual(run("lp", "--in", inst, "--caps", "nonsense").returncode, 2)

    def test_solve_reduce_instance_a(self):
        inst = self.write("a.ftfp", INSTANCE_A)
        r = run("solve", "--in", inst, "--algo", "reduce", "--ftfl", "exact", "--out", self.path("a.sol"),
                "--report", self.path("a.json"), "--dump-decomposition", self.path("a.dec"))
        self.assertEqual(r.returncode, 0, r.stderr)
        with open(self.path("a.json")) as f:
            report = json.load(f)
        self.assertEqual(list(report.keys()),
                         ["algo", "cost_s1", "cost_s2", "cost_total", "lp_star", "lp_star_residual",
                          "lp_star_residual_capped", "rho_sub", "ratio_total", "chain_bound", "chain_slack",
                          "wall_times"])
        self.assertAlmostEqual(report["cost_total"], 8.0, places=9)
        self.assertAlmostEqual(report["ratio_total"], 1.0, places=6)
        with open(self.path("a.sol")) as f:
            self.assertEqual(f.read(), "ftfp-sol 1\n2 1\n2 0\n2\n0\n")
        with open(self.path("a.dec")) as f:
            self.assertTrue(f.read().startswith("ftfp-dec 1\n2 1\nkeep_one_back\n"))

    def test_solve_oracle_instance_b(self):
        inst = self.write("b.ftfp", INSTANCE_B)
        r = run("solve", "--in", inst, "--algo", "oracle", "--out", self.path("b.sol"), "--report", self.path("b.json"))
        self.assertEqual(r.returncode, 0, r.stderr)
        with open(self.path("b.json")) as f:
            self.assertAlmostEqual(json.load(f)["cost_total"], 2.0, places=9)

    def test_solve_large_needs_positive_demands(self):
        inst = self.write("z.ftfp", "ftfp 1\n2 2\n1 1\n0 1\n0 2\n2 0\n")
        r = run("solve", "--in", inst, "--algo", "large", "--out", self.path("z.sol"), "--report", self.path("z.json"))
        self.assertEqual(r.returncode, 2)

    def test_solve_unparseable_and_budget(self):
        bad = self.write("bad.ftfp", "ftfp 2\n")
        r = run("solve", "--in", bad, "--out", self.path("x.sol"), "--report", self.path("x.json"))
        self.assertEqual(r.returncode, 2)
        self.assertIn("unsupported version", r.stderr)
        inst = self.write("a.ftfp", INSTANCE_A)
        r = run("solve", "--in", inst, "--algo", "oracle", "--out", self.path("x.sol"), "--report",
                self.path("x.json"), env={"FTFP_NODE_BUDGET": "2"})
        self.assertEqual(r.returncode, 3)

    def test_verify(self):
        inst = self.write("a.ftfp", INSTANCE_A)
        good = self.write("good.sol", "ftfp-sol 1\n2 1\n2 0\n2\n0\n")
        self.assertEqual(run("verify", "--in", inst, "--sol", good).returncode, 0)
        link = self.write("link.sol", "ftfp-sol 1\n2 1\n1 0\n2\n0\n")
        r = run("verify", "--in", inst, "--sol", link)
        self.assertEqual(r.returncode, 1)
        self.assertIn("linking", r.stdout)
        cover = self.write("cover.sol", "ftfp-sol 1\n2 1\n3 0\n3\n0\n")
        r = run("verify", "--in", inst, "--sol", cover)
        self.assertEqual(r.returncode, 1)
        self.assertIn("coverage", r.stdout)
        self.assertEqual(run("verify", "--in", inst, "--sol", self.path("missing.sol")).returncode, 2)

    def test_bench(self):
        common = ["--sites", "4", "--clients", "4", "--demand-min", "1", "--demand-max", "4", "--seed", "1",
                  "--algo", "reduce", "--ftfl", "exact"]
        r = run("bench", "--trials", "50", *common, "--csv", self.path("b.csv"), "--jobs", "3")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("max_ratio_total=", r.stdout)
        with open(self.path("b.csv")) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 50)
        self.assertEqual([int(row["seed"]) for row in rows], list(range(1, 51)))
        for row in rows:
            self.assertGreaterEqual(float(row["chain_slack"]), -1e-6)
            self.assertGreaterEqual(float(row["ratio_total"]), 1 - 1e-6)
        self.assertLessEqual(max(float(row["ratio_total"]) for row in rows), 1.7245)

        again = run("bench", "--trials", "50", *common, "--csv", self.path("c.csv"))
        self.assertEqual(again.returncode, 0)
        with open(self.path("c.csv")) as f:
            rerun = list(csv.DictReader(f))
        strip = lambda rs: [{k: v for k, v in r.items() if k != "wall_ms"} for r in rs]
        self.assertEqual(strip(rows), strip(rerun))

        empty = run("bench", "--trials", "0", *common, "--csv", self.path("e.csv"))
        self.assertEqual(empty.returncode, 0)
        with open(self.path("e.csv")) as f:
            self.assertEqual(f.read(), "seed,n,m,R,P,algo,ftfl,lp_star,cost_total,rho_sub,ratio_total,chain_slack,"
                                       "wall_ms\n")


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0]])
