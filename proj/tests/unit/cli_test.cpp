#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "pickdrop/stream_io.hpp"
#include "sidecar.hpp"
#include "test_support.hpp"

namespace pickdrop::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Result& r) { return Json::parse(r.out); }

TEST(Cli, GenerateThenHeavyIsSound) {
  testing::TempDir dir;
  const std::string file = (dir / "s.bin").string();
  const Result g = run({"generate", "--kind", "planted-heavy", "--n", "256", "--m", "4096",
                        "--heavy", "200", "--placement", "random", "--seed", "1", "--out", file,
                        "--json"});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  EXPECT_EQ(json_of(g)["length"], 4096);
  // Not heavy under the 100x rule, see generators_test.
  EXPECT_EQ(json_of(g)["heavy"]["3"], false);

  const Result h = run({"heavy", "--input", file, "--stats", file + ".stats.json", "--json"});
  ASSERT_EQ(h.code, kExitOk) << h.err;
  const Json report = json_of(h);
  EXPECT_EQ(report["schema"], 1);
  EXPECT_EQ(report["command"], "heavy");
  EXPECT_EQ(report["items"], 4096);
  EXPECT_TRUE(report["soundness"]["sound"].get<bool>());
  EXPECT_LE(report["estimate"]["count"].get<std::uint64_t>(),
            report["soundness"]["true_frequency"].get<std::uint64_t>());
}

TEST(Cli, SidecarMatchesStreamOnDisk) {
  testing::TempDir dir;
  const auto file = dir / "z.bin";
  ASSERT_EQ(run({"generate", "--kind", "zipf", "--n", "300", "--m", "2000", "--seed", "7",
                 "--out", file.string()})
                .code,
            kExitOk);
  auto side = read_sidecar(sidecar_path(file));
  ASSERT_TRUE(side);
  side->erase("generator");
  EXPECT_EQ(*side, stats_json(ExactStats(read_stream(file))));
  EXPECT_EQ(sidecar_frequency(*side, 1), ExactStats(read_stream(file)).frequency(1));
}

TEST(Cli, TextOutputRoundTrips) {
  testing::TempDir dir;
  const auto file = dir / "t.txt";
  ASSERT_EQ(run({"generate", "--kind", "all-equal", "--n", "1", "--m", "10", "--out",
                 file.string(), "--text"})
                .code,
            kExitOk);
  const Result h = run({"heavy", "--input", file.string(), "--stats",
                        sidecar_path(file).string(), "--json"});
  ASSERT_EQ(h.code, kExitOk) << h.err;
  EXPECT_EQ(json_of(h)["estimate"]["element"], 1);
  EXPECT_EQ(json_of(h)["soundness"]["true_frequency"], 10);
}

TEST(Cli, KnownLengthAndDoubling) {
  testing::TempDir dir;
  const std::string file = (dir / "p.bin").string();
  ASSERT_EQ(run({"generate", "--kind", "promise-case2", "--n", "256", "--out", file}).code,
            kExitOk);
  const Result known = run({"heavy", "--input", file, "--length", "252", "--json"});
  ASSERT_EQ(known.code, kExitOk) << known.err;
  EXPECT_EQ(json_of(known)["mode"], "known-length");
  EXPECT_EQ(run({"heavy", "--input", file, "--length", "251"}).code, kExitFormat);
  EXPECT_EQ(run({"heavy", "--input", file, "--length", "252", "--doubling"}).code, kExitUsage);
}

TEST(Cli, FkReportsRelativeError) {
  testing::TempDir dir;
  const std::string file = (dir / "f.bin").string();
  ASSERT_EQ(run({"generate", "--kind", "zipf", "--n", "512", "--m", "4000", "--out", file}).code,
            kExitOk);
  const Result r = run({"fk", "--input", file, "--stats", file + ".stats.json", "--trials", "3",
                        "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json report = json_of(r);
  EXPECT_EQ(report["trial_estimates"].size(), 3u);
  EXPECT_TRUE(report.contains("relative_error"));
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir;
  EXPECT_EQ(run({"heavy", "--input", (dir / "missing").string()}).code, kExitIo);
  EXPECT_EQ(run({"heavy", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"generate", "--kind", "nope", "--out", (dir / "x").string()}).code, kExitUsage);

  const auto bad = dir / "bad.txt";
  std::ofstream(bad) << "1\n2\nbanana\n";
  EXPECT_EQ(run({"heavy", "--input", bad.string()}).code, kExitFormat);

  EXPECT_EQ(run({"verify", "oracle", "--rows", "10", "--cols", "10", "--alphabet", "5"}).code,
            kExitGuard);
  EXPECT_EQ(run({"verify", "pairs", "--max-length", "3", "--max-entry", "2"}).code, kExitOk);
}

TEST(Cli, OracleOnExplicitMatrix) {
  const Result r = run({"verify", "oracle", "--matrix", "1,1;1,1", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json report = json_of(r);
  EXPECT_EQ(report["tuples"], 4);
  EXPECT_EQ(report["law"].size(), 3u);
  EXPECT_DOUBLE_EQ(report["total"].get<double>(), 1.0);
}

TEST(Cli, PairsSingleCase) {
  const Result r = run({"verify", "pairs", "--u", "1,2,3", "--w", "3,0,0", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"schema\": 1"), std::string::npos);
}

TEST(Cli, JsonIsDeterministic) {
  testing::TempDir dir;
  const std::string file = (dir / "d.bin").string();
  ASSERT_EQ(run({"generate", "--kind", "planted-heavy", "--n", "128", "--m", "1000", "--heavy",
                 "90", "--out", file})
                .code,
            kExitOk);
  const std::vector<std::string> args{"heavy", "--input", file, "--seed", "5", "--json"};
  const Result a = run(args);
  const Result b = run(args);
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
}  // namespace pickdrop::cli
