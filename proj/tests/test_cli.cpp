#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "whdet/cli.hpp"

using namespace whdet;
using namespace whdet::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"whdet"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("whdet_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults and a single verify cell") {
  const RunConfig c = parse_config({"verify", "--g", "1.0", "--alpha", "2.0"});
  CHECK(c.command == Command::verify);
  REQUIRE(c.g.size() == 1);
  CHECK(c.g[0] == 1.0);
  CHECK(c.alpha.min == 2.0);
  CHECK(c.alpha.max == 2.0);
  CHECK(c.alpha.steps == 1);
  CHECK(c.n_lhs == 200);
  CHECK(c.n_rhs == 80);
  CHECK(c.tol == 1e-6);
  CHECK(c.format == Format::csv);
  CHECK(c.output_path.empty());
  CHECK_FALSE(c.emit_plot);
}

TEST_CASE("sweep range expands to an inclusive grid") {
  const RunConfig c = parse_config(
      {"sweep", "--g", "1.0", "--alpha", "0.5:4.0:8", "--format", "csv", "--out", "r.csv"});
  CHECK(c.command == Command::sweep);
  CHECK(c.output_path == "r.csv");
  const auto cells = plan(c);
  REQUIRE(cells.size() == 8);
  CHECK(cells.front().second == 0.5);
  CHECK(cells.back().second == 4.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].first == 1.0);
    CHECK(cells[i].second == doctest::Approx(0.5 + 0.5 * static_cast<double>(i)).epsilon(1e-15));
  }
}

TEST_CASE("g list is sorted and the plan is ordered by g then alpha") {
  const RunConfig c = parse_config({"lhs", "--g", "2,0.5,1", "--alpha", "1:2:2"});
  const auto cells = plan(c);
  const std::vector<std::pair<double, double>> expected{
      {0.5, 1.0}, {0.5, 2.0}, {1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {2.0, 2.0}};
  CHECK(cells == expected);
}

TEST_CASE("g = 0 is rejected with the factorization message") {
  try {
    parse_config({"verify", "--g", "0"});
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("Wiener-Hopf factorization fails") != std::string::npos);
  }
  const Outcome o = invoke({"verify", "--g", "0"});
  CHECK(o.status == kExitUsage);
  CHECK(o.err.find("factorization fails") != std::string::npos);
  CHECK(o.out.empty());
}

TEST_CASE("invalid arguments are usage errors") {
  const std::vector<std::vector<std::string>> bad{
      {"frobnicate"},
      {},
      {"verify", "--bogus"},
      {"verify", "--g", "-1"},
      {"verify", "--g", "nan"},
      {"verify", "--g", "1,,2"},
      {"verify", "--g", "abc"},
      {"verify", "--alpha", "0"},
      {"verify", "--alpha", "-2"},
      {"verify", "--alpha", "3:1:4"},
      {"verify", "--alpha", "1:2:0"},
      {"verify", "--alpha", "1:2:1"},
      {"verify", "--alpha", "1:2"},
      {"verify", "--alpha", "inf"},
      {"verify", "--n-lhs", "0"},
      {"verify", "--n-lhs", "100000"},
      {"verify", "--n-rhs", "1"},
      {"verify", "--tol", "0"},
      {"verify", "--tol", "-1e-3"},
      {"verify", "--format", "xml"},
      {"verify", "--workers", "0"},
      {"verify", "--plot"},
  };
  for (const auto& args : bad) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    CAPTURE(joined);
    CHECK_THROWS_AS(parse_config(args), UsageError);
    CHECK(invoke(args).status == kExitUsage);
  }
}

TEST_CASE("config file values, flag overrides and unknown keys") {
  const fs::path dir = scratch_dir("config");
  const fs::path good = dir / "run.ini";
  {
    std::ofstream f(good);
    f << "g=2.0\nalpha=1:3:5\nn-lhs=64\ntol=1e-4\nformat=json\n";
  }
  const RunConfig c = parse_config({"sweep", "--config", good.string(), "--n-lhs", "96"});
  REQUIRE(c.g.size() == 1);
  CHECK(c.g[0] == 2.0);
  CHECK(c.alpha.steps == 5);
  CHECK(c.alpha.min == 1.0);
  CHECK(c.alpha.max == 3.0);
  CHECK(c.n_lhs == 96);
  CHECK(c.tol == 1e-4);
  CHECK(c.format == Format::json);

  const fs::path bad = dir / "bad.ini";
  {
    std::ofstream f(bad);
    f << "g=1.0\ncolour=blue\n";
  }
  CHECK_THROWS_AS(parse_config({"verify", "--config", bad.string()}), UsageError);
  CHECK(invoke({"verify", "--config", bad.string()}).status == kExitUsage);
  CHECK(invoke({"verify", "--config", (dir / "missing.ini").string()}).status == kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("help exits with status 0") {
  const Outcome o = invoke({"--help"});
  CHECK(o.status == kExitOk);
  CHECK(o.out.find("--alpha") != std::string::npos);
}

TEST_CASE("verify at g = 1, alpha = 2 agrees within tol") {
  RunConfig c = parse_config({"verify", "--g", "1.0", "--alpha", "2.0", "--no-timing"});
  const auto rows = compute_rows(c);
  REQUIRE(rows.size() == 1);
  const SweepRow& r = rows[0];
  REQUIRE_FALSE(r.failed());
  REQUIRE(r.lhs);
  REQUIRE(r.rhs);
  REQUIRE(r.rel_disc);
  CHECK(*r.rel_disc < 1e-6);
  CHECK(std::abs(*r.lhs - *r.rhs) <= 1e-6 * std::abs(*r.lhs));
  CHECK(*r.rhs == doctest::Approx(*r.Z * std::exp(*r.c * 2.0) * *r.rhs_det).epsilon(1e-14));
  CHECK(r.n_lhs == std::optional<std::size_t>(200));
  CHECK(r.n_rhs == std::optional<std::size_t>(80));
  CHECK_FALSE(r.ms);

  std::ostringstream out, err;
  CHECK(run(c, out, err) == kExitOk);
  CHECK(err.str().empty());
}

TEST_CASE("sweep determinant decreases in alpha") {
  const RunConfig c = parse_config({"sweep", "--g", "1.0", "--alpha", "0.5:4.0:8", "--no-timing"});
  const auto rows = compute_rows(c);
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].lhs);
    CHECK(*rows[i].lhs > 0.0);
    CHECK(*rows[i].lhs <= 1.0);
    if (i > 0) CHECK(*rows[i].lhs < *rows[i - 1].lhs);
  }
}

TEST_CASE("asym approaches the Hankel determinant") {
  const RunConfig c = parse_config({"asym", "--g", "1.0", "--alpha", "4:10:4", "--no-timing"});
  const auto rows = compute_rows(c);
  REQUIRE(rows.size() == 4);
  double prev_gap = INFINITY;
  for (const SweepRow& r : rows) {
    REQUIRE(r.rhs_det);
    REQUIRE(r.asym);
    CHECK_FALSE(r.lhs);
    const double ratio = (1.0 - *r.rhs_det) / (1.0 - *r.asym);
    const double gap = std::abs(ratio - 1.0);
    CAPTURE(r.alpha);
    CAPTURE(ratio);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
}

TEST_CASE("lhs command leaves the right-hand columns empty") {
  const RunConfig c = parse_config({"lhs", "--g", "1.0", "--alpha", "2", "--no-timing"});
  const auto rows = compute_rows(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lhs);
  CHECK_FALSE(rows[0].rhs);
  CHECK_FALSE(rows[0].rhs_det);
  CHECK_FALSE(rows[0].rel_disc);
  CHECK_FALSE(rows[0].n_rhs);
}

TEST_CASE("csv layout") {
  const Outcome o = invoke({"verify", "--g", "1.0", "--alpha", "2.0", "--no-timing"});
  REQUIRE(o.status == kExitOk);
  const auto lines = lines_of(o.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == kCsvHeader);
  CHECK(o.out.find('\r') == std::string::npos);
  std::vector<std::string> cells;
  std::istringstream row(lines[1]);
  for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
  if (lines[1].back() == ',') cells.emplace_back();
  REQUIRE(cells.size() == 12);
  CHECK(std::stod(cells[0]) == 1.0);
  CHECK(std::stod(cells[1]) == 2.0);
  CHECK(cells[9] == "200");
  CHECK(cells[10] == "80");
  CHECK(cells[11].empty());
}

TEST_CASE("json round trip") {
  RunConfig c = parse_config({"verify", "--g", "0.5,1", "--alpha", "1:2:2", "--format", "json"});
  const auto rows = compute_rows(c);
  REQUIRE(rows.size() == 4);
  std::ostringstream out;
  write_table(rows, Format::json, out);
  CHECK(read_table_json(out.str()) == rows);

  SweepRow failed;
  failed.g = 3.0;
  failed.alpha = 1.0;
  failed.error = "boom";
  std::ostringstream out2;
  write_table({failed}, Format::json, out2);
  CHECK(read_table_json(out2.str()) == std::vector<SweepRow>{failed});

  CHECK_THROWS_AS(read_table_json("{not json"), Error);
  CHECK_THROWS_AS(read_table_json("{}"), Error);
  CHECK_THROWS_AS(read_table_json("[{\"g\": 1}]"), Error);
}

TEST_CASE("table export refuses empty tables and reports the path") {
  std::ostringstream out;
  CHECK_THROWS_AS(write_table({}, Format::csv, out), Error);
  const fs::path dir = scratch_dir("io");
  CHECK_THROWS_AS(emit_table({}, Format::csv, (dir / "empty.csv").string()), Error);

  SweepRow r;
  r.g = 1.0;
  r.alpha = 2.0;
  r.lhs = 0.5;
  const std::string bad = (dir / "no_such_dir" / "t.csv").string();
  try {
    emit_table({r}, Format::csv, bad);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }

  const std::string good = (dir / "t.json").string();
  emit_table({r}, Format::json, good);
  CHECK(read_table_json(slurp(good)) == std::vector<SweepRow>{r});
  fs::remove_all(dir);
}

TEST_CASE("output is deterministic without timing") {
  const fs::path dir = scratch_dir("determinism");
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  const std::string common = "--g=0.5,1,2";
  CHECK(invoke({"sweep", common, "--alpha", "1:3:3", "--no-timing", "--out", a}).status == kExitOk);
  CHECK(invoke({"sweep", common, "--alpha", "1:3:3", "--no-timing", "--out", b, "--workers", "3"})
            .status == kExitOk);
  const std::string sa = slurp(a);
  CHECK_FALSE(sa.empty());
  CHECK(sa == slurp(b));
  fs::remove_all(dir);
}

TEST_CASE("timing column is filled by default") {
  const RunConfig c = parse_config({"lhs", "--g", "1.0", "--alpha", "1"});
  const auto rows = compute_rows(c);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].ms);
  CHECK(*rows[0].ms >= 0.0);
}

TEST_CASE("exit status 1 when the discrepancy exceeds tol") {
  const Outcome o = invoke({"verify", "--g", "1.0", "--alpha", "2.0", "--tol", "1e-20"});
  CHECK(o.status == kExitVerifyFailed);
  CHECK(o.err.find("exceeds tol") != std::string::npos);
  CHECK(lines_of(o.out).size() == 2);
}

TEST_CASE("exit status 3 when a row fails numerically") {
  const Outcome o = invoke({"rhs", "--g", "1e-300", "--alpha", "2.0", "--no-timing"});
  CHECK(o.status == kExitNumerical);
  CHECK_FALSE(o.err.empty());
  const auto lines = lines_of(o.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].rfind("1e-300,2,", 0) == 0);

  const Outcome json = invoke({"rhs", "--g", "1e-300", "--alpha", "2.0", "--format", "json"});
  CHECK(json.status == kExitNumerical);
  const auto rows = read_table_json(json.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].failed());
  CHECK_FALSE(rows[0].rhs);
}

TEST_CASE("plot files") {
  const fs::path dir = scratch_dir("plot");
  const std::string out = (dir / "sweep").string();
  const Outcome o =
      invoke({"sweep", "--g", "1,2", "--alpha", "1:3:3", "--out", out, "--plot", "--no-timing"});
  CHECK(o.status == kExitOk);
  CHECK(fs::exists(out));
  REQUIRE(fs::exists(out + ".dat"));
  REQUIRE(fs::exists(out + ".gp"));
  const std::string gp = slurp(out + ".gp");
  CHECK(gp.find("sweep.dat") != std::string::npos);
  const auto dat = lines_of(slurp(out + ".dat"));
  std::size_t numeric = 0;
  for (const auto& line : dat) {
    if (!line.empty() && line[0] != '#') ++numeric;
  }
  CHECK(numeric == 6);
  fs::remove_all(dir);
}

}
