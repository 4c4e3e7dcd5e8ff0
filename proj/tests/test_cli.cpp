#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sfq/cli/commands.hpp"
#include "sfq/cli/config.hpp"
#include "sfq/error.hpp"
#include "sfq/experiments.hpp"

namespace sfq::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sfq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sfqctl");
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static std::vector<std::string> lines(const std::string& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, GenDbWritesClosedFormU0AndIsIdempotent) {
  ASSERT_EQ(cli({"gen-db", "--db", path("a.db")}), kExitOk) << err_.str();
  const UnitaryDatabase db = load_database(path("a.db"));
  ASSERT_EQ(db.dim(), 3);
  EXPECT_LT(std::abs(db.u0(1, 1) - std::polar(1.0, -0.1 * std::numbers::pi)), 1e-12);
  EXPECT_LT(std::abs(db.u0(2, 2) - std::polar(1.0, -0.196 * std::numbers::pi)), 1e-12);
  EXPECT_LT(std::abs(db.u0(0, 0) - 1.0), 1e-15);

  ASSERT_EQ(cli({"gen-db", "--db", path("b.db")}), kExitOk);
  EXPECT_EQ(slurp(path("a.db")), slurp(path("b.db")));

  ASSERT_EQ(cli({"gen-db", "--db", path("q.db"), "--set", "model.levels=2"}), kExitOk);
  EXPECT_EQ(load_database(path("q.db")).dim(), 2);
}

TEST_F(CliTest, InvalidParamsExitTwoNamingTheInvariant) {
  EXPECT_EQ(cli({"gen-db", "--db", path("x.db"), "--set", "model.tau_ps=3"}), kExitConfigError);
  EXPECT_NE(err_.str().find("tau <= t_c/3"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("x.db")));
  EXPECT_EQ(cli({"gen-db", "--set", "model.bogus=1"}), kExitConfigError);
  EXPECT_EQ(cli({"optimize", "--set", "ga.elitism=70"}), kExitConfigError);
  EXPECT_NE(err_.str().find("elitism"), std::string::npos);
  EXPECT_EQ(cli({"simulate", "--seq", path("missing.seq")}), kExitConfigError);
  EXPECT_EQ(cli({"no-such-command"}), kExitConfigError);
}

TEST_F(CliTest, SimulateSeedAndDriftSequences) {
  ASSERT_EQ(cli({"init-seq", "--seq", path("init.seq")}), kExitOk);
  ASSERT_EQ(cli({"simulate", "--seq", path("init.seq"), "--out", path("sim")}), kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("gate_error 0.0355114"), std::string::npos) << out_.str();
  const auto pops = lines(path("sim/populations_ground.csv"));
  ASSERT_EQ(pops.size(), 2002u);
  EXPECT_EQ(pops[0], "pixel,time_ns,p0,p1,p2");
  EXPECT_TRUE(fs::exists(path("sim/populations_excited.csv")));
  const auto report = lines(path("sim/report.csv"));
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[0], "pixels,pulses,gate_ns,fidelity,gate_error");

  // Drift alone is diagonal; the target's qubit block is off-diagonal.
  {
    std::ofstream f(path("zeros.seq"));
    f << "# pixel_ps=10 gate_ns=0.5\n" << std::string(50, '0') << '\n';
  }
  ASSERT_EQ(cli({"simulate", "--seq", path("zeros.seq"), "--out", path("sim0")}), kExitOk);
  EXPECT_NE(out_.str().find("gate_error 1\n"), std::string::npos) << out_.str();
}

TEST_F(CliTest, SimulateRejectsMalformedAndMismatchedSequences) {
  {
    std::ofstream f(path("bad.seq"));
    f << "# pixel_ps=10 gate_ns=0.04\n01a0\n";
  }
  EXPECT_EQ(cli({"simulate", "--seq", path("bad.seq"), "--out", path("o")}), kExitConfigError);
  EXPECT_NE(err_.str().find("malformed"), std::string::npos);
  {
    std::ofstream f(path("short.seq"));
    f << "# pixel_ps=10 gate_ns=0.04\n0100\n";
  }
  EXPECT_EQ(cli({"simulate", "--seq", path("short.seq"), "--set", "run.gate_ns=20"}),
            kExitConfigError);
  {
    std::ofstream f(path("pix.seq"));
    f << "# pixel_ps=12 gate_ns=0.048\n0100\n";
  }
  EXPECT_EQ(cli({"simulate", "--seq", path("pix.seq")}), kExitConfigError);
}

TEST_F(CliTest, OptimizeZeroBudgetExitsThreeWithOneHistoryRow) {
  ASSERT_EQ(cli({"optimize", "--out", path("run"), "--set", "ga.max_iterations=0"}),
            kExitBudgetExhausted);
  const auto history = lines(path("run/history.csv"));
  ASSERT_EQ(history.size(), 2u);
  EXPECT_EQ(history[0], "generation,best_error,mean_error");
  EXPECT_TRUE(fs::exists(path("run/best.seq")));
  EXPECT_TRUE(fs::exists(path("run/run.meta")));
}

TEST_F(CliTest, OptimizeReachesTargetAndIsReproducible) {
  ASSERT_EQ(cli({"gen-db", "--db", path("u.db")}), kExitOk);
  ASSERT_EQ(cli({"optimize", "--db", path("u.db"), "--out", path("r1"), "--seed", "4"}), kExitOk)
      << err_.str();
  ASSERT_EQ(cli({"optimize", "--db", path("u.db"), "--out", path("r2"), "--seed", "4"}), kExitOk);
  EXPECT_EQ(slurp(path("r1/history.csv")), slurp(path("r2/history.csv")));
  EXPECT_EQ(slurp(path("r1/best.seq")), slurp(path("r2/best.seq")));

  // run.meta is itself a config that regenerates the run.
  ASSERT_EQ(cli({"optimize", "--config", path("r1/run.meta"), "--out", path("r3")}), kExitOk);
  EXPECT_EQ(slurp(path("r1/history.csv")), slurp(path("r3/history.csv")));
  const std::string meta = slurp(path("r1/run.meta"));
  for (const char* key : {"config_hash = ", "seed = 4", "version = v", "wall_time_s = "}) {
    EXPECT_NE(meta.find(key), std::string::npos) << key;
  }

  const PulseSequence best = load_sequence(path("r1/best.seq"));
  EXPECT_GT(best.pulse_count(), 100u);
  ASSERT_EQ(cli({"simulate", "--seq", path("r1/best.seq"), "--out", path("s")}), kExitOk);
  const auto report = lines(path("s/report.csv"));
  const double err = std::stod(report[1].substr(report[1].rfind(',') + 1));
  EXPECT_LT(err, 1e-4);

  // A database built for other parameters is refused.
  ASSERT_EQ(cli({"gen-db", "--db", path("v.db"), "--set", "model.levels=4"}), kExitOk);
  EXPECT_EQ(cli({"optimize", "--db", path("v.db"), "--out", path("r4")}), kExitConfigError);
}

TEST_F(CliTest, SweepWritesOneRowPerGateAndRejectsNonMultiples) {
  EXPECT_EQ(cli({"sweep-qsl", "--gates", "20,7.005", "--out", path("bad")}), kExitConfigError);
  EXPECT_FALSE(fs::exists(path("bad/qsl.csv")));
  ASSERT_EQ(cli({"sweep-qsl", "--gates", "20", "--out", path("qsl")}), kExitOk) << err_.str();
  const auto rows = lines(path("qsl/qsl.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "gate_ns,pixels,best_error,generations");
  std::istringstream row(rows[1]);
  std::string gate, pixels, err;
  std::getline(row, gate, ',');
  std::getline(row, pixels, ',');
  std::getline(row, err, ',');
  EXPECT_EQ(gate, "20");
  EXPECT_EQ(pixels, "2000");
  EXPECT_LT(std::stod(err), 1e-4);
}

TEST_F(CliTest, JitterZeroSigmaRowEqualsNoiselessError) {
  ASSERT_EQ(cli({"init-seq", "--seq", path("init.seq")}), kExitOk);
  ASSERT_EQ(cli({"jitter", "--seq", path("init.seq"), "--sigmas", "0,1", "--mode", "both",
                 "--runs", "50", "--out", path("j")}),
            kExitOk)
      << err_.str();
  const auto rows = lines(path("j/jitter.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "sigma_ps,mode,mean_error,std_error,runs");
  EXPECT_EQ(rows[1].substr(0, 11), "0,external,");
  EXPECT_EQ(rows[3].substr(0, 11), "0,internal,");

  const UnitaryDatabase db = build_database(ModelParams{});
  const PulseSequence seq = load_sequence(path("init.seq"));
  const FidelityKernel kernel(db, TargetGate::pauli_y(3), seq.size());
  std::ostringstream expected;
  expected.precision(17);
  expected << "0,external," << kernel.error(seq.bits()) << ",0,50";
  EXPECT_EQ(rows[1], expected.str());
}

TEST(Config, CanonicalTextRoundTripsExactly) {
  RunConfig c;
  c.model.omega_ghz = 4.7;
  c.model.tau_ps = 1.2;
  c.ga.seed = 123456789012345ULL;
  c.ga.selection = ga::Selection::tournament;
  c.jitter.both_modes = true;
  c.jitter.sigmas_ps = {0.0, 0.05, 3.0};
  c.sweep_gate_ns = {6.0, 20.0};
  std::istringstream in(c.to_text());
  const RunConfig back = parse_config(in);
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_EQ(back.params(), c.params());
  EXPECT_EQ(RunConfig{}.params(), ModelParams{});
}

TEST(Config, UnitsConvertAtTheBoundary) {
  std::istringstream in("[model]\nomega_ghz = 6\nt_c_ps = 6\n[run]\ngate_ns = 12\n");
  const RunConfig c = parse_config(in);
  EXPECT_DOUBLE_EQ(c.params().omega, 2.0 * std::numbers::pi * 6e9);
  EXPECT_DOUBLE_EQ(c.params().t_c, 6e-12);
  EXPECT_DOUBLE_EQ(c.params().tau, 2e-12);
  EXPECT_DOUBLE_EQ(c.gate_time(), 12e-9);
  EXPECT_TRUE(c.gate_set);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  std::istringstream unknown("[ga]\nspeed = 3\n");
  EXPECT_THROW(parse_config(unknown), Error);
  std::istringstream bad_number("[ga]\nmutation_prob = often\n");
  EXPECT_THROW(parse_config(bad_number), Error);
  std::istringstream bad_enum("[ga]\nselection = lottery\n");
  EXPECT_THROW(parse_config(bad_enum), Error);
  std::istringstream meta("[meta]\nanything = goes\n");
  EXPECT_NO_THROW(parse_config(meta));
}

}  // namespace
}  // namespace sfq::cli
