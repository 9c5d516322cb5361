#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using qbackbone::cli::run_cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qbackbone");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qbackbone_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch(name + ".json");
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("simulate with defaults writes 75 bins") {
  const auto dir = scratch("sim_default");
  const auto r = cli({"simulate", "--out", dir.string(), "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto ts = lines(slurp(dir / "timeseries.csv"));
  REQUIRE(ts.size() == 76);
  CHECK(ts[0] == "bin_start_s,pairs_arrived,pairs_stored,pairs_dropped,qubits_delivered,frames_completed");
  CHECK(split(ts[1])[0] == "0");
  CHECK(split(ts[75])[0] == "592");

  std::uint64_t delivered = 0;
  for (std::size_t i = 1; i < ts.size(); ++i) delivered += std::stoull(split(ts[i])[4]);
  const auto summary = lines(slurp(dir / "summary.csv"));
  REQUIRE(summary.size() == 2);
  CHECK(std::stoull(split(summary[1])[7]) == delivered);
  CHECK(split(summary[1])[0] == "3");

  const auto frames = lines(slurp(dir / "frames.csv"));
  CHECK(frames.size() > 1000);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const auto f = split(frames[i]);
    REQUIRE(f.size() == 17);
    const auto n = [&](int k) { return std::stoull(f[k]); };
    CHECK(n(4) == 100000);
    CHECK(n(4) == n(5) + n(13) + n(14) + n(15) + n(16));
  }
  CHECK(fs::exists(dir / "sources.csv"));
  CHECK(fs::exists(dir / "config.json"));
}

TEST_CASE("simulate is deterministic per seed") {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  const auto cfg = write_config("det", R"({"duration_s": 60, "sources": [{"id": "Micius"}, {"id": "fiber-dark"}],
                                          "policy": "best-source", "memory_capacity": 40})");
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", a.string(), "--seed", "9"}).code == 0);
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", b.string(), "--seed", "9"}).code == 0);
  for (const char* f : {"timeseries.csv", "frames.csv", "summary.csv", "sources.csv", "config.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("seed precedence: flag over environment over config") {
  const auto cfg = write_config("seed", R"({"seed": 5, "duration_s": 8})");
  const auto d1 = scratch("seed1"), d2 = scratch("seed2"), d3 = scratch("seed3");
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", d1.string()}).code == 0);
  CHECK(split(lines(slurp(d1 / "summary.csv"))[1])[0] == "5");
  ::setenv("QBACKBONE_SEED", "17", 1);
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", d2.string()}).code == 0);
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", d3.string(), "--seed", "21"}).code == 0);
  ::unsetenv("QBACKBONE_SEED");
  CHECK(split(lines(slurp(d2 / "summary.csv"))[1])[0] == "17");
  CHECK(split(lines(slurp(d3 / "summary.csv"))[1])[0] == "21");
}

TEST_CASE("simulate exit codes") {
  SUBCASE("validation error") {
    const auto cfg = write_config("bad", R"({"memory_capacity": 0})");
    const auto r = cli({"simulate", "--config", cfg.string(), "--out", scratch("bad_out").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("capacity must be") != std::string::npos);
  }
  SUBCASE("parse error") {
    const auto cfg = write_config("syntax", "{ nope");
    CHECK(cli({"simulate", "--config", cfg.string(), "--out", scratch("syn_out").string()}).code == 1);
  }
  SUBCASE("missing config file") {
    CHECK(cli({"simulate", "--config", "/nonexistent/cfg.json", "--out", scratch("x").string()}).code == 2);
  }
  SUBCASE("unwritable output") {
    const auto r = cli({"simulate", "--out", "/dev/null/out", "--seed", "1"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }
  SUBCASE("usage error") {
    CHECK(cli({"simulate"}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
  }
  SUBCASE("unknown policy") {
    CHECK(cli({"simulate", "--out", scratch("p").string(), "--policy", "random"}).code == 1);
  }
}

TEST_CASE("policy and source flags override the config") {
  const auto dir = scratch("policy_flag");
  REQUIRE(cli({"simulate", "--out", dir.string(), "--policy", "satellite-only", "--source", "Micius",
               "--seed", "2"})
              .code == 0);
  const std::string cfg = slurp(dir / "config.json");
  CHECK(cfg.find("\"satellite-only\"") != std::string::npos);
  CHECK(cfg.find("\"Micius\"") != std::string::npos);
  const auto ts = lines(slurp(dir / "timeseries.csv"));
  CHECK(split(ts[1])[1] == "0");  // Micius is below the horizon at t = 0
}

TEST_CASE("sweep rows are ordered by (source, M, seed)") {
  const auto cfg = write_config("sweep", R"({"duration_s": 40,
      "sources": [{"id": "fiber-dark"}, {"id": "fiber-standard"}], "policy": "best-source"})");
  const auto out = scratch("sweep.csv");
  const auto r = cli({"sweep", "--config", cfg.string(), "--memory", "unlimited,100,10",
                      "--seeds-per-point", "3", "--out", out.string(), "--seed", "50"});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 1 + 3 * 3 * 3);
  CHECK(rows[0] == "source,memory_capacity,seed,total_qubits_delivered,pairs_arrived,pairs_dropped,frames");
  const std::vector<std::string> labels{"fiber-dark", "fiber-standard", "best-source"};
  const std::vector<std::string> mems{"10", "100", "unlimited"};
  std::size_t i = 1;
  for (const auto& l : labels) {
    for (const auto& m : mems) {
      for (int s = 0; s < 3; ++s, ++i) {
        const auto f = split(rows[i]);
        CHECK(f[0] == l);
        CHECK(f[1] == m);
        CHECK(f[2] == std::to_string(50 + s));
      }
    }
  }
  // Thread count does not change the output.
  const auto out1 = scratch("sweep1.csv");
  REQUIRE(cli({"sweep", "--config", cfg.string(), "--memory", "unlimited,100,10", "--seeds-per-point", "3",
               "--out", out1.string(), "--seed", "50", "--threads", "1"})
              .code == 0);
  CHECK(slurp(out1) == slurp(out));
}

TEST_CASE("sweep argument errors") {
  CHECK(cli({"sweep", "--memory", "", "--out", scratch("e.csv").string()}).code == 1);
  CHECK(cli({"sweep", "--memory", "0,10", "--out", scratch("e.csv").string()}).code == 1);
  CHECK(cli({"sweep", "--memory", "ten", "--out", scratch("e.csv").string()}).code == 1);
  CHECK(cli({"sweep", "--memory", "10", "--out", "/dev/null/x/sweep.csv"}).code == 2);
}

TEST_CASE("passes table") {
  const auto r = cli({"passes"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  const auto micius = split(rows[1]);
  CHECK(micius[0] == "Micius");
  CHECK(micius[6] == "83");
  const std::map<std::string, double> table{{"Micius", 256.0}, {"Starlink-2007", 326.0}, {"Iridium-126", 416.0}};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    const double single = std::stod(f[8]);
    CHECK(std::abs(single - table.at(f[0])) <= 0.2 * table.at(f[0]));
  }

  const auto none = cli({"passes", "--min-elevation", "90"});
  REQUIRE(none.code == 0);
  for (const auto& row : lines(none.out)) {
    if (row.rfind("satellite", 0) == 0) continue;
    const auto f = split(row);
    CHECK(f[3].empty());
    CHECK(f[5] == "0");
  }
  CHECK(cli({"passes", "--min-elevation", "0"}).code == 1);
}

TEST_CASE("linkbudget profiles") {
  SUBCASE("ground fiber is a single constant row") {
    const auto r = cli({"linkbudget", "--source", "fiber-standard"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "time_s,elev_a_deg,elev_b_deg,range_a_km,range_b_km,eta_a,eta_b,p_coincidence");
    CHECK(std::stod(split(rows[1])[7]) == doctest::Approx(1e-3));
  }
  SUBCASE("Micius transmittance peaks at the peak-elevation sample") {
    const auto r = cli({"linkbudget", "--source", "Micius"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() > 100);
    double best_eta = -1.0, best_elev = -1.0, max_elev = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto f = split(rows[i]);
      const double elev = std::stod(f[1]), eta = std::stod(f[5]);
      if (eta > best_eta) best_eta = eta, best_elev = elev;
      max_elev = std::max(max_elev, elev);
    }
    CHECK(best_elev == max_elev);
  }
  SUBCASE("invisible pass gives a header-only CSV") {
    const auto cfg = write_config("invisible", R"({"sources": [{"id": "Iridium-126",
        "freespace": {"min_elevation_deg": 80}}]})");
    const auto r = cli({"linkbudget", "--config", cfg.string(), "--source", "Iridium-126"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out).size() == 1);
  }
  SUBCASE("unknown source") {
    CHECK(cli({"linkbudget", "--source", "Sputnik"}).code == 1);
  }
}

TEST_CASE("installed binary honours the exit-code contract") {
  const std::string tool = QBACKBONE_TOOL_PATH;
  CHECK(std::system((tool + " passes > /dev/null").c_str()) == 0);
  const int rc = std::system((tool + " simulate --out /dev/null/nowhere 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(rc) == 2);
  const int rc1 = std::system((tool + " sweep --memory '' --out /tmp/x.csv 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(rc1) == 1);
}
