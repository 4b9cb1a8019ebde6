#include <unistd.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "etalab/io.hpp"
#include "support.hpp"

using namespace etalab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("etalab-test-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("number format") {
    CHECK(io::format_number(1.0) == "1.0");
    CHECK(io::format_number(0.0) == "0.0");
    CHECK(io::format_number(-0.0) == "-0.0");
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(std::log(2.0)) == "0.6931471805599453");
    CHECK(io::format_number(147.0) == "147.0");
    CHECK(io::format_number(1e300) == "1e+300");
    CHECK(io::format_index(1398) == "1398");
  }

  TEST_CASE("csv") {
    io::CsvWriter w({"n", "re", "im"});
    w.row({"1", io::format_number(1.0), io::format_number(0.0)});
    CHECK(w.text() == "n,re,im\n1,1.0,0.0\n");
    CHECK(w.rows() == 1);
    CHECK_ERROR_CODE(w.row({"1"}), InvalidArgument);
    const io::CsvTable t = io::parse_csv(w.text());
    CHECK(t.header.size() == 3);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][1] == "1.0");
    CHECK(t.column("im") == 2);
    CHECK_ERROR_CODE(t.column("nope"), InvalidArgument);
    CHECK_ERROR_CODE(io::parse_csv("a,b\n1\n"), Io);
    CHECK(io::csv_rows_to_json(t) == R"([{"n":1.0,"re":1.0,"im":0.0}])");
  }

  TEST_CASE("json document") {
    const std::string doc = io::json_document(io::schema_name("eta"), R"({"a":1})", R"({"b":[1,2]})");
    CHECK(doc.find(R"("schema": "etalab/eta/v1")") != std::string::npos);
    CHECK(doc.find(R"("config")") < doc.find(R"("data")"));
    CHECK(doc.back() == '\n');
  }

  TEST_CASE("zero table") {
    const auto def = io::default_zero_table();
    REQUIRE(def.size() == 2);
    CHECK(def[0].ordinal == 1);
    CHECK(def[0].t == 14.13472514);
    CHECK(def[1].ordinal == 6);
    CHECK(def[1].t == 37.586178);
    const auto parsed = io::parse_zero_table("ordinal,t\n# comment\n\n2,21.022\n3,25.0109\n");
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[1].t == 25.0109);
    CHECK(io::parse_zero_table("").empty());
    CHECK_ERROR_CODE(io::parse_zero_table("1,20\n2,10\n"), InvalidArgument);
    CHECK_ERROR_CODE(io::parse_zero_table("1;20\n"), InvalidArgument);
    CHECK_ERROR_CODE(io::load_zero_table("/nonexistent/zeros.csv"), Io);
  }

  TEST_CASE("config text") {
    io::RunConfig c;
    io::apply_config_text("# comment\nprecision = 1e-10\ngrid-t-step=0.5\ncache-dir=/tmp/x\nthreads=4\nn-max=1e6\n", c);
    CHECK(c.precision == 1e-10);
    CHECK(c.grid.t_step == 0.5);
    CHECK(c.cache_dir == "/tmp/x");
    CHECK(c.threads == 4);
    CHECK(c.n_max == 1'000'000);
    CHECK_ERROR_CODE(io::apply_config_text("bogus=1\n", c), InvalidArgument);
    CHECK_ERROR_CODE(io::apply_config_text("precision\n", c), InvalidArgument);
    CHECK_ERROR_CODE(io::apply_config_text("window=abc\n", c), InvalidArgument);
  }

  TEST_CASE("config from the environment") {
    const fs::path dir = scratch_dir("env");
    const fs::path file = dir / "run.conf";
    io::write_atomic(file, "epsilon=0.25\nformat=json\n");
    ::setenv(io::kConfigEnvVar, file.c_str(), 1);
    io::RunConfig c;
    io::apply_config_from_env(c);
    CHECK(c.epsilon == 0.25);
    CHECK(c.format == "json");
    ::setenv(io::kConfigEnvVar, (dir / "missing.conf").c_str(), 1);
    CHECK_ERROR_CODE(io::apply_config_from_env(c), Io);
    ::unsetenv(io::kConfigEnvVar);
    fs::remove_all(dir);
  }

  TEST_CASE("atomic writes") {
    const fs::path dir = scratch_dir("atomic");
    const fs::path file = dir / "sub" / "out.txt";
    io::write_atomic(file, "first\n");
    io::write_atomic(file, "second\n");
    CHECK(io::read_file(file) == "second\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(file.parent_path())) ++entries;
    CHECK(entries == 1);
    CHECK_ERROR_CODE(io::write_atomic("/proc/etalab/nope.txt", "x"), Io);
    CHECK_ERROR_CODE(io::read_file(dir / "missing"), Io);
    fs::remove_all(dir);
  }

  TEST_CASE("hash") {
    CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    ScanGrid g;
    const std::string k1 = io::scan_cache_key(io::ScanKind::Conjecture, g, 1e-12);
    CHECK(k1 == io::scan_cache_key(io::ScanKind::Conjecture, g, 1e-12));
    CHECK(k1 != io::scan_cache_key(io::ScanKind::Conjecture, g, 1e-11));
    CHECK(k1 != io::scan_cache_key(io::ScanKind::Monotonicity, g, 1e-12));
    g.t_step = 0.5;
    CHECK(k1 != io::scan_cache_key(io::ScanKind::Conjecture, g, 1e-12));
  }

  TEST_CASE("scan kinds") {
    CHECK(io::parse_scan_kind("extrema") == io::ScanKind::Extrema);
    CHECK(io::to_string(io::ScanKind::Monotonicity) == "monotonicity");
    CHECK_ERROR_CODE(io::parse_scan_kind("other"), InvalidArgument);
  }

  TEST_CASE("scan cache") {
    const fs::path dir = scratch_dir("cache");
    const ScanGrid g{0.0, 0.4, 0.2, 10.0, 14.0, 1.0};
    const io::ScanOutput first = io::run_scan(io::ScanKind::Conjecture, g, 1e-12, 2, dir.string());
    CHECK_FALSE(first.cache_hit);
    CHECK(first.summary.rows == 15);
    CHECK(first.summary.violations == 0);
    const io::ScanOutput second = io::run_scan(io::ScanKind::Conjecture, g, 1e-12, 1, dir.string());
    CHECK(second.cache_hit);
    CHECK(second.csv == first.csv);

    // Corrupt every ratio: the recheck fails and the entry is rebuilt.
    const fs::path file = dir / (first.cache_key + ".csv");
    io::CsvTable t = io::parse_csv(io::read_file(file));
    std::string bad = "alpha,t,ratio,lower,upper,pass_lower,pass_upper,skipped,informational\n";
    for (auto& row : t.rows) {
      row[2] = "0.5";
      for (std::size_t i = 0; i < row.size(); ++i) bad += (i ? "," : "") + row[i];
      bad += "\n";
    }
    io::write_atomic(file, bad);
    const io::ScanOutput third = io::run_scan(io::ScanKind::Conjecture, g, 1e-12, 1, dir.string());
    CHECK_FALSE(third.cache_hit);
    CHECK(third.cache_repaired);
    CHECK(third.csv == first.csv);
    CHECK(io::read_file(file) == first.csv);
    fs::remove_all(dir);
  }

  TEST_CASE("scan summaries") {
    const ScanGrid g{0.0, 0.3, 0.1, 20.0, 21.0, 0.5};
    const io::ScanOutput m = io::run_scan(io::ScanKind::Monotonicity, g, 1e-12, 1);
    CHECK(m.summary.rows == 12);
    CHECK(m.summary.violations == 0);
    const io::CsvTable mt = io::parse_csv(m.csv);
    CHECK(io::verify_scan_row(io::ScanKind::Monotonicity, mt, 5, 1e-12));

    const io::ScanOutput e = io::run_scan(io::ScanKind::Extrema, ScanGrid{0.25, 0.25, 0.1, 10.0, 30.0, 0.05}, 1e-12, 1);
    CHECK(e.summary.extra_json.find("\"one_of_each_per_window\":true") != std::string::npos);
    const io::CsvTable et = io::parse_csv(e.csv);
    CHECK(et.header.back() == "extremum");
    CHECK(io::verify_scan_row(io::ScanKind::Extrema, et, 7, 1e-12));

    io::CsvTable fake;
    fake.header = {"alpha", "t", "ratio", "lower", "upper", "pass_lower", "pass_upper", "skipped", "informational"};
    fake.rows = {{"0.1", "10.0", "2.0", "0.5", "0.9", "1", "0", "0", "0"},
                 {"0.1", "3.0", "2.0", "0.5", "0.9", "1", "0", "0", "1"},
                 {"0.1", "11.0", "0.0", "0.5", "0.9", "0", "0", "1", "0"}};
    const io::ScanSummary s = io::summarize_scan(io::ScanKind::Conjecture, fake);
    CHECK(s.violations == 1);
    CHECK(s.informational == 1);
    CHECK(s.skipped == 1);
    CHECK(s.extra_json.find("\"t\":10.0") != std::string::npos);
  }
}

TEST_SUITE("properties") {
  TEST_CASE("io: numbers round-trip through the CSV format") {
    auto g = testing::rng(18);
    for (int i = 0; i < 2000; ++i) {
      const double x = std::ldexp(testing::uniform(g, -1.0, 1.0), static_cast<int>(g() % 200) - 100);
      const std::string s = io::format_number(x);
      double back = 0.0;
      std::from_chars(s.data(), s.data() + s.size(), back);
      CHECK(back == x);
    }
  }
}
