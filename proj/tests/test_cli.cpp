#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>

#include "etalab/io.hpp"
#include "etalab/series.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace etalab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " ETALAB_BIN " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("etalab-cli-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("eta") {
    const Run a = run("eta --sigma 1 --t 0");
    CHECK(a.code == 0);
    CHECK(a.out.find(",0.6931471805599453,0.0,") != std::string::npos);
    const auto j = json_of(run("eta --sigma 0.404 --t 147 --format json"));
    CHECK(j["schema"] == "etalab/eta/v1");
    CHECK(std::abs(j["data"]["re"].get<double>() - 1.816326) < 5e-7);
    CHECK(std::abs(j["data"]["im"].get<double>() - 0.457761) < 5e-7);
    const auto z = json_of(run("eta --sigma 0.5 --t 14.13472514 --format json"));
    CHECK(z["data"]["abs"].get<double>() < 1e-6);
    CHECK(run("eta --sigma 0.5 --t 2000").code == 2);
    CHECK(run("eta --sigma 0.5 --t 10 --precision 1e-20").code == 64);
    CHECK(run("eta --sigma -1 --t 10").code == 64);
    CHECK(run("eta --bogus").code == 64);
    CHECK(run("zeta --sigma 1 --t 0").code == 64);
    CHECK(run("zeta --sigma 2 --t 0").out.find("1.64493406684822") != std::string::npos);
  }

  TEST_CASE("path export") {
    CHECK(run("path-export --sigma 0.5 --t 7 --n-max 1").out == "n,re,im\n1,1.0,0.0\n");
    const Run r = run("path-export --sigma 0.5 --t 38 --n-max 313 --stride 10");
    CHECK(r.code == 0);
    const io::CsvTable t = io::parse_csv(r.out);
    REQUIRE(t.rows.size() == 33);
    CHECK(t.rows[1][0] == "11");
    const Complex end = partial_sum(313, StripPoint(0.5, 38.0));
    CHECK(t.rows.back()[0] == "313");
    CHECK(std::abs(std::stod(t.rows.back()[1]) - end.real()) < 1e-13);
    CHECK(std::abs(std::stod(t.rows.back()[2]) - end.imag()) < 1e-13);
    CHECK(run("path-export --n-max 0").code == 64);
    CHECK(run("path-export --n-max 20000000").code == 64);
    CHECK(run("path-export --stride 0 --n-max 5").code == 64);
  }

  TEST_CASE("dual path segments are parallel") {
    const io::CsvTable t = io::parse_csv(run("path-export --sigma 0.3 --t 21 --n-max 400 --dual").out);
    REQUIRE(t.rows.size() == 400);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      const Complex a{std::stod(t.rows[i][1]) - std::stod(t.rows[i - 1][1]),
                      std::stod(t.rows[i][2]) - std::stod(t.rows[i - 1][2])};
      const Complex b{std::stod(t.rows[i][3]) - std::stod(t.rows[i - 1][3]),
                      std::stod(t.rows[i][4]) - std::stod(t.rows[i - 1][4])};
      CHECK(std::abs(std::sin(std::arg(a) - std::arg(b))) < 1e-8);
    }
  }

  TEST_CASE("orbit") {
    const auto j = json_of(run("orbit --sigma 0.50567 --t 37.58631"));
    CHECK(j["schema"] == "etalab/orbit/v1");
    CHECK(j["data"]["diagnostics"]["transition_index"] == 1398);
    CHECK(j["data"]["diagnostics"]["n_o"] == 1397);
    CHECK(j["data"]["trace"].size() == 101);
    const Run flat = run("orbit --sigma 0.5 --t 0 --format csv");
    const io::CsvTable t = io::parse_csv(flat.out);
    CHECK(t.rows.at(0).at(t.column("n_o")) == "0");
    const Run spot = run("orbit --sigma 0.5 --t 20 --epsilon 0.5 --format csv");
    CHECK(spot.code == 0);
    const io::CsvTable s = io::parse_csv(spot.out);
    CHECK(s.rows.at(0).at(s.column("m")) == "801");
    CHECK(s.rows.at(0).at(s.column("spot_check_violations")) == "0");
    const io::CsvTable tr = io::parse_csv(run("orbit --sigma 0.50567 --t 37.58631 --format csv --trace").out);
    CHECK(tr.header == std::vector<std::string>{"n", "numerator18"});
    CHECK(run("orbit --sigma 0.50567 --t 37.58631 --ceiling 1500").code == 2);
  }

  TEST_CASE("sandwich") {
    const Run r = run("sandwich --sigma 0.5 --t 20 --count 300 --with-asymptotics --format csv");
    CHECK(r.code == 0);
    const io::CsvTable t = io::parse_csv(r.out);
    REQUIRE(t.rows.size() == 300);
    CHECK(t.rows[0][0] == "802");
    CHECK(t.header.back() == "half_radius_ratio");
    const auto j = json_of(run("sandwich --sigma 0.5 --t 20 --count 10 --with-asymptotics --format json"));
    CHECK(j["data"]["violations"] == 0);
    CHECK(j["data"]["asymptotics"].size() == 8);
  }

  TEST_CASE("ratio") {
    const auto half = json_of(run("ratio --sigma 0.5 --t 30 --n-max 20000"));
    CHECK(std::abs(half["data"]["p"]["abs"].get<double>() - 1.0) < 1e-12);
    CHECK(std::abs(half["data"]["limit"]["abs"].get<double>() - 1.0) < 1e-12);
    const auto a = json_of(run("ratio --sigma 0.404 --t 147 --n-max 200000"));
    CHECK(std::abs(a["data"]["limit"]["abs"].get<double>() - 0.67252) < 1e-3);
    CHECK(a["data"]["envelope"]["violations"] == 0);
    const auto b = json_of(run("ratio --sigma 0.50567 --t 37.58631 --n-max 5000"));
    CHECK(b["data"]["point"]["mirrored_from_input"] == true);
    const auto& ev = b["data"]["zero_events"]["numerator"]["events"];
    REQUIRE(ev.size() == 1);
    CHECK(ev[0]["n"] == 1516);
    CHECK(run("ratio --sigma 1.2 --t 3").code == 64);
  }

  TEST_CASE("scan") {
    const Run flat = run("scan --t-from 10 --t-to 11 --alpha 0");
    CHECK(flat.code == 0);
    const io::CsvTable t = io::parse_csv(flat.out);
    CHECK(t.rows.size() == 5);
    for (const auto& row : t.rows) CHECK(row[t.column("ratio")] == "1.0");

    const fs::path dir = scratch("scan");
    const std::string base = "scan --grid-t-from 7.5 --grid-t-to 20 --grid-t-step 0.5 --cache-dir " + dir.string();
    CHECK(run(base + " --out " + (dir / "a.csv").string()).code == 0);
    CHECK(run(base + " --out " + (dir / "b.csv").string()).code == 0);
    CHECK(io::read_file(dir / "a.csv") == io::read_file(dir / "b.csv"));
    std::size_t cached = 0;
    for (const auto& e : fs::directory_iterator(dir)) cached += e.path().extension() == ".csv";
    CHECK(cached == 3);

    const auto j = json_of(run("scan --which monotonicity --grid-t-from 20 --grid-t-to 21 --format json"));
    CHECK(j["schema"] == "etalab/scan/v1");
    CHECK(j["data"]["summary"]["violations"] == 0);
    CHECK(j["data"]["rows"].size() == 50);
    CHECK(run("scan --grid-t-to 300").code == 64);
    CHECK(run("scan --t-from 10 --t-to 11 --out /proc/etalab/x.csv").code == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("verify zeros") {
    const io::CsvTable d = io::parse_csv(run("verify-zeros").out);
    REQUIRE(d.rows.size() == 2);
    for (const auto& row : d.rows) {
      CHECK(std::stod(row[2]) < 1e-6);
      CHECK(row.back() == "zero");
    }
    const fs::path dir = scratch("zeros");
    io::write_atomic(dir / "z.csv", "ordinal,t\n0,10\n");
    const io::CsvTable nz = io::parse_csv(run("verify-zeros --table " + (dir / "z.csv").string()).out);
    REQUIRE(nz.rows.size() == 1);
    CHECK(std::stod(nz.rows[0][2]) > 1e-3);
    CHECK(nz.rows[0].back() == "not-a-zero");
    io::write_atomic(dir / "empty.csv", "");
    const Run empty = run("verify-zeros --table " + (dir / "empty.csv").string());
    CHECK(empty.code == 0);
    CHECK(io::parse_csv(empty.out).rows.empty());
    CHECK(run("verify-zeros --table " + (dir / "missing.csv").string()).code == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("approx deviation") {
    const Run r = run("approx-deviation");
    CHECK(r.code == 0);
    CHECK(io::parse_csv(r.out).rows.size() == 2);
    CHECK(run("approx-deviation --step 0.01").code == 64);
  }

  TEST_CASE("config file and flag precedence") {
    const fs::path dir = scratch("config");
    io::write_atomic(dir / "run.conf", "format=json\nsigma=0.3\nt=20\n");
    const std::string env = "ETALAB_CONFIG=" + (dir / "run.conf").string();
    const auto j = json_of(run("eta", env));
    CHECK(j["config"]["format"] == "json");
    CHECK(std::abs(j["data"]["re"].get<double>() - 2.1655046703667876) < 1e-12);
    const Run csv = run("eta --format csv --sigma 0.7", env);
    CHECK(csv.out.rfind("sigma,t,", 0) == 0);
    CHECK(csv.out.find("0.7,20.0,") != std::string::npos);
    io::write_atomic(dir / "bad.conf", "nonsense=1\n");
    CHECK(run("eta", "ETALAB_CONFIG=" + (dir / "bad.conf").string()).code == 64);
    CHECK(run("eta", "ETALAB_CONFIG=" + (dir / "none.conf").string()).code == 3);
    fs::remove_all(dir);
  }
}
