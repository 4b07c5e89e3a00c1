#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cvqb/csv.hpp"
#include "cvqb/dynamics.hpp"
#include "json.hpp"

using namespace cvqb;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cvqb");
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp(const std::string& name) { return ::testing::TempDir() + "cvqb_cli_" + name; }

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ls(line);
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    out.push_back(fields);
  }
  return out;
}

}  // namespace

TEST(Simulate, ZeroWindowGolden) {
  const Result r = invoke({"simulate", "--preset", "fig2ab", "--tmax", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "t,e1,e2,ee,ei,r,s,c\n0,4,0,0,0,,0,0\n");

  const Result th = invoke({"simulate", "--preset", "fig3", "--tmax", "0"});
  EXPECT_EQ(th.out, "t,e1,e2,ee,ei,r,s,c\n0,4,0,0,0,,0,0\n");
}

TEST(Simulate, FirstStepsGolden) {
  // decoupled modes: the charger energy stays put and the battery stays empty
  const Result r = invoke({"simulate", "--omega2", "2", "--kl", "0", "--kc", "0", "--coherent-alpha",
                        "1.5", "--tmax", "0.02", "--dt", "0.01"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "t,e1,e2,ee,ei,r,s,c\n0,2.25,0,0,0,,0,0\n0.01,2.25,0,0,0,,0,0\n"
                   "0.02,2.25,0,0,0,,0,0\n");
}

TEST(Simulate, MatchesLibraryPropagation) {
  const Result r = invoke({"simulate", "--preset", "fig3", "--tmax", "2", "--dt", "0.5"});
  ASSERT_EQ(r.code, 0);
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 6u);
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.3, -0.57, 0.7);
  const Trajectory t = propagate({h, 0.0, 0.0, uniform_grid(2.0, 0.5)},
                                 product_state(thermal_mode(4.0), vacuum_mode()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& row = table[i + 1];
    EXPECT_EQ(row[0], format_number(t.times[i]));
    EXPECT_EQ(row[1], format_number(t.obs[i].E1));
    EXPECT_EQ(row[3], format_number(t.obs[i].Ee));
    EXPECT_EQ(row[5], format_number(t.obs[i].R));
    EXPECT_EQ(row[7], format_number(t.obs[i].C));
  }
}

TEST(Simulate, RotatingOnlyRatioAndEntropyColumns) {
  const Result r = invoke({"simulate", "--preset", "fig2ab"});
  ASSERT_EQ(r.code, 0);
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 2002u);
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!table[i][5].empty()) EXPECT_NEAR(std::stod(table[i][5]), 1.0, 1e-8);
    EXPECT_LE(std::abs(std::stod(table[i][6])), 1e-8);
  }
}

TEST(Simulate, ByteIdenticalRerunsAndMetadata) {
  const std::string a = temp("a.csv");
  const std::string b = temp("b.csv");
  ASSERT_EQ(invoke({"simulate", "--preset", "fig3", "--tmax", "5", "-o", a}).code, 0);
  ASSERT_EQ(invoke({"simulate", "--preset", "fig3", "--tmax", "5", "-o", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).find('\r'), std::string::npos);

  const auto meta = nlohmann::json::parse(slurp(a + ".meta.json"));
  EXPECT_EQ(meta["preset"], "fig3");
  EXPECT_EQ(meta["kl"], -0.57);
  EXPECT_EQ(meta["kc"], 0.7);
  EXPECT_EQ(meta["tmax"], 5.0);
  EXPECT_EQ(meta["charger"]["kind"], "thermal");
  EXPECT_EQ(meta["charger"]["n_p"], 4.0);
  EXPECT_EQ(meta["coupling"], "mixed");
  const auto flags = meta["preset_flags"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(flags.begin(), flags.end(), "--thermal-np"), flags.end());
}

TEST(Simulate, UserFlagsOverridePreset) {
  const std::string path = temp("override.csv");
  ASSERT_EQ(invoke({"simulate", "--preset", "fig3", "--coherent-alpha", "1", "--kl", "0.5", "--tmax",
                 "0", "-o", path})
                .code,
            0);
  const auto meta = nlohmann::json::parse(slurp(path + ".meta.json"));
  EXPECT_EQ(meta["charger"]["kind"], "coherent");
  EXPECT_EQ(meta["kl"], 0.5);
  EXPECT_EQ(meta["omega2"], 1.3);
  EXPECT_EQ(slurp(path), "t,e1,e2,ee,ei,r,s,c\n0,1,0,0,0,,0,0\n");
}

TEST(Simulate, EveryPresetRuns) {
  for (const auto& [name, flags] : cli::presets("simulate")) {
    const Result r = invoke({"simulate", "--preset", name, "--tmax", "1"});
    EXPECT_EQ(r.code, 0) << name << ": " << r.err;
  }
  EXPECT_TRUE(cli::presets("analyze").empty());
}

TEST(Simulate, ExitCodes) {
  EXPECT_EQ(invoke({"simulate", "--kl", "1.2", "--coherent-alpha", "1"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--kl", "0.2"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--coherent-alpha", "1", "--thermal-np", "2"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--coherent-alpha", "1", "--bogus"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--thermal-np", "-1"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--thermal-np", "1", "--dt", "0"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--thermal-np", "1", "--method", "euler"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--preset", "nope"}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);

  const Result d = invoke({"simulate", "--kl", "-1.2", "--kc", "1.2", "--omega2", "1", "--thermal-np",
                        "4", "--tmax", "60", "--dt", "0.05", "--extrapolate"});
  EXPECT_EQ(d.code, 2);
  EXPECT_NE(d.err.find("deep-strong-coupling"), std::string::npos) << d.err;
}

TEST(Simulate, NumericMethodAgrees) {
  const auto exact = rows(invoke({"simulate", "--preset", "fig3", "--tmax", "3", "--dt", "0.5"}).out);
  const auto num = rows(invoke({"simulate", "--preset", "fig3", "--tmax", "3", "--dt", "0.5",
                             "--method", "numeric"})
                            .out);
  ASSERT_EQ(exact.size(), num.size());
  for (std::size_t i = 1; i < exact.size(); ++i) {
    for (std::size_t c = 1; c < 5; ++c) {
      EXPECT_NEAR(std::stod(exact[i][c]), std::stod(num[i][c]), 1e-7);
    }
  }
}

TEST(Sweep, SingleCellMatchesSimulate) {
  const Result s = invoke({"sweep", "--kl", "-0.57", "--kc", "0.7", "--np", "4", "--tmax", "20"});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto table = rows(s.out);
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0][0], "kl");

  const auto sim = rows(invoke({"simulate", "--preset", "fig3"}).out);
  double best = -1.0;
  std::string best_t;
  for (std::size_t i = 1; i < sim.size(); ++i) {
    const double v = std::stod(sim[i][3]);
    if (v > best) {
      best = v;
      best_t = sim[i][0];
    }
  }
  EXPECT_EQ(table[1][3], format_number(best));
  EXPECT_EQ(table[1][4], best_t);
  EXPECT_EQ(table[1][7], "1");
}

TEST(Sweep, WorkerCountsAreByteIdentical) {
  const std::vector<std::string> base = {"sweep", "--kl-grid", "-0.6:0.6:4", "--kc-grid",
                                         "-0.6:0.6:3", "--np-grid", "1,4", "--tmax", "5"};
  auto with = [&](const char* w) {
    auto args = base;
    args.push_back("--workers");
    args.push_back(w);
    return invoke(args).out;
  };
  const std::string one = with("1");
  EXPECT_EQ(rows(one).size(), 25u);
  EXPECT_EQ(with("2"), one);
  EXPECT_EQ(with("4"), one);
  EXPECT_EQ(with("0"), one);
}

TEST(Sweep, PresetMetadataAndErrors) {
  const std::string path = temp("fig5.csv");
  ASSERT_EQ(invoke({"sweep", "--preset", "fig5", "--tmax", "5", "-o", path}).code, 0);
  const auto meta = nlohmann::json::parse(slurp(path + ".meta.json"));
  EXPECT_EQ(meta["preset"], "fig5");
  EXPECT_EQ(meta["spec"]["n_p_grid"].size(), 7u);
  EXPECT_EQ(meta["spec"]["tmax"], 5.0);
  EXPECT_EQ(rows(slurp(path)).size(), 8u);

  EXPECT_EQ(invoke({"sweep", "--kl-grid", "0.5,0.1"}).code, 1);
  EXPECT_EQ(invoke({"sweep", "--kl-grid", "-1:1:3"}).code, 1);
  EXPECT_EQ(invoke({"sweep", "--np-grid", "a:b"}).code, 1);
  EXPECT_EQ(invoke({"sweep", "--charger", "squeezed"}).code, 1);
}

TEST(ParseGrid, Forms) {
  EXPECT_EQ(cli::parse_grid("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(cli::parse_grid("1,2,+3"), (std::vector<double>{1, 2, 3}));
  const auto lin = cli::parse_grid("-0.9:0.9:41");
  ASSERT_EQ(lin.size(), 41u);
  EXPECT_EQ(lin.front(), -0.9);
  EXPECT_EQ(lin.back(), 0.9);
  EXPECT_EQ(lin[20], 0.0);
  for (std::size_t i = 0; i < lin.size(); ++i) EXPECT_NEAR(lin[i], -lin[40 - i], 1e-15);
  EXPECT_EQ(cli::parse_grid("1:64:geometric"), (std::vector<double>{1, 2, 4, 8, 16, 32, 64}));
  const auto geo = cli::parse_grid("1:100:geometric:3");
  EXPECT_NEAR(geo[1], 10.0, 1e-12);
  EXPECT_EQ(geo[2], 100.0);
  EXPECT_EQ(cli::parse_grid("2:3:1"), std::vector<double>{2});
  for (const char* bad : {"", "x", "1,,2", "1:2", "2:1:3", "0:1:geometric", "1:2:0", "1:2:2.5",
                          "1:2:3:4"}) {
    EXPECT_THROW((void)cli::parse_grid(bad), std::invalid_argument) << bad;
  }
}

TEST(Analyze, SyntheticCosine) {
  const std::string path = temp("cos.csv");
  {
    std::ofstream f(path, std::ios::binary);
    f << "t,e1,e2,ee,ei,r,s,c\n";
    for (const double t : uniform_grid(100.0, 0.01)) {
      const double v = 2.0 + std::cos(1.234 * t);
      f << format_number(t) << ",0,0," << format_number(v) << ",0,,0,0\n";
    }
  }
  const Result r = invoke({"analyze", path, "--column", "ee", "--count", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["dominant_frequency"].get<double>(), 1.234, 0.005 * 1.234);
  EXPECT_TRUE(j["difference"].is_null());
  EXPECT_EQ(j["samples"], 10001);
}

TEST(Analyze, TrimsUndefinedEndsOfRatioColumn) {
  const std::string path = temp("fig2.csv");
  ASSERT_EQ(invoke({"simulate", "--preset", "fig2ab", "--tmax", "200", "-o", path}).code, 0);
  const Result r = invoke({"analyze", path, "--column", "c"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["dominant_frequency"].get<double>(), 1.6278, 0.01 * 1.6278);
  const Result rr = invoke({"analyze", path, "--column", "r"});
  EXPECT_EQ(rr.code, 0) << rr.err;
}

TEST(Analyze, Errors) {
  const std::string ragged = temp("ragged.csv");
  {
    std::ofstream f(ragged, std::ios::binary);
    f << "t,ee\n0,1\n0.1\n";
  }
  EXPECT_EQ(invoke({"analyze", ragged}).code, 1);

  const std::string junk = temp("junk.csv");
  {
    std::ofstream f(junk, std::ios::binary);
    f << "t,ee\n0,1\n0.1,abc\n";
  }
  EXPECT_EQ(invoke({"analyze", junk}).code, 1);

  const std::string uneven = temp("uneven.csv");
  {
    std::ofstream f(uneven, std::ios::binary);
    f << "t,ee\n";
    for (int i = 0; i < 64; ++i) f << (i < 32 ? 0.1 * i : 0.1 * i + 0.05) << "," << std::sin(i) << "\n";
  }
  const Result u = invoke({"analyze", uneven});
  EXPECT_EQ(u.code, 1);
  EXPECT_NE(u.err.find("uniform"), std::string::npos);

  const std::string gap = temp("gap.csv");
  {
    std::ofstream f(gap, std::ios::binary);
    f << "t,r\n";
    for (int i = 0; i < 64; ++i) f << 0.1 * i << "," << (i == 30 ? "" : "0.5") << "\n";
  }
  EXPECT_EQ(invoke({"analyze", gap, "--column", "r"}).code, 1);

  EXPECT_EQ(invoke({"analyze", temp("missing.csv")}).code, 1);
  EXPECT_EQ(invoke({"analyze", ragged, "--column", "zz"}).code, 1);
  EXPECT_EQ(invoke({"analyze"}).code, 1);
}
