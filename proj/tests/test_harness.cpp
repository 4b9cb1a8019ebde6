#include <cmath>
#include <numbers>

#include "etalab/harness.hpp"
#include "support.hpp"

using namespace etalab;

TEST_SUITE("harness") {
  TEST_CASE("grid") {
    ScanGrid g;
    CHECK(g.alphas().size() == 10);
    CHECK(g.ts().size() == 451);
    CHECK(g.cardinality() == 4510);
    CHECK(g.ts().back() <= 120.0);
    CHECK_NOTHROW(g.validate());
    ScanGrid bad = g;
    bad.alpha_to = 0.5;
    CHECK_ERROR_CODE(bad.validate(), InvalidArgument);
    bad = g;
    bad.t_to = 201.0;
    CHECK_ERROR_CODE(bad.validate(), InvalidArgument);
    bad = g;
    bad.t_step = 0.0;
    CHECK_ERROR_CODE(bad.validate(), InvalidArgument);
    bad = g;
    bad.t_from = 0.0;
    CHECK_ERROR_CODE(bad.validate(), InvalidArgument);
    ScanGrid single{0.1, 0.1, 0.05, 10.0, 10.0, 1.0};
    CHECK(single.cardinality() == 1);
  }

  TEST_CASE("single points") {
    const BoundCheckRecord z = conjecture_point(0.0, 50.0);
    CHECK(z.ratio == 1.0);
    CHECK(z.lower == 1.0);
    CHECK(z.upper == 1.0);
    CHECK(z.pass_lower);
    CHECK(z.pass_upper);
    const BoundCheckRecord r = conjecture_point(0.25, 40.0);
    CHECK(r.ratio > r.lower);
    CHECK(r.ratio < r.upper);
    CHECK(r.ratio_error < 1e-10);
    CHECK_FALSE(r.violation());
    CHECK(conjecture_point(0.1, 3.0).informational);
    // Skipped and informational records never count as violations.
    BoundCheckRecord skip;
    skip.skipped = true;
    CHECK_FALSE(skip.violation());
    BoundCheckRecord low = conjecture_point(0.3, 3.0);
    low.pass_upper = false;
    CHECK_FALSE(low.violation());
    BoundCheckRecord bad = r;
    bad.pass_lower = false;
    CHECK(bad.violation());
    // The double nearest the first zero is still certified nonzero.
    CHECK_FALSE(conjecture_point(1e-3, 14.134725141734693790).skipped);
  }

  TEST_CASE("scan order does not depend on the worker count") {
    const ScanGrid g{0.0, 0.45, 0.15, kConjectureMinT, 30.0, 1.5};
    const auto a = scan_conjecture(g, {1, 1e-12});
    const auto b = scan_conjecture(g, {4, 1e-12});
    REQUIRE(a.size() == g.cardinality());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].alpha == b[i].alpha);
      CHECK(a[i].t == b[i].t);
      CHECK(a[i].ratio == b[i].ratio);
    }
    CHECK(a[0].t == a[3].t);
    CHECK(a[0].alpha < a[1].alpha);
    CHECK(violations(a).empty());
  }

  TEST_CASE("section at t = 6 pi / ln 2 stays between the bounds") {
    const double t = 6.0 * std::numbers::pi / std::numbers::ln2;
    for (double a = 0.0; a < 0.5; a += 0.01) {
      const BoundCheckRecord r = conjecture_point(a, t);
      CHECK(r.pass_lower);
      CHECK(r.pass_upper);
      CHECK(r.ratio <= 1.0);
    }
  }

  TEST_CASE("monotonicity") {
    std::vector<double> grid;
    for (int k = 0; k < 50; ++k) grid.push_back(0.01 * k);
    for (const double t : {kConjectureMinT, 100.0}) {
      const MonotonicityReport r = scan_monotonicity(t, grid);
      CHECK(r.strictly_decreasing());
      CHECK_FALSE(r.first_violation.has_value());
      CHECK(r.records.front().p_modulus == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(scan_monotonicity(30.0, {0.2}).strictly_decreasing());
    CHECK_ERROR_CODE(scan_monotonicity(30.0, {0.2, 0.1}), InvalidArgument);
    CHECK_ERROR_CODE(scan_monotonicity(30.0, {0.1, 0.5}), InvalidArgument);
  }

  TEST_CASE("extrema structure") {
    const ExtremaReport flat = extrema_structure(0.0, 10.0, 20.0, 0.01);
    CHECK(flat.extrema.empty());
    const ExtremaReport r = extrema_structure(0.25, 10.0, 60.0, 0.01);
    const double unit = std::numbers::pi / std::numbers::ln2;
    std::vector<double> minima;
    for (const Extremum& e : r.extrema) {
      if (e.is_minimum) {
        minima.push_back(e.t);
        CHECK(std::fmod(std::round(e.nearest_multiple / unit), 2.0) == 0.0);
      } else {
        CHECK(std::fmod(std::round(e.nearest_multiple / unit), 2.0) == 1.0);
      }
    }
    REQUIRE(minima.size() == 5);
    CHECK(minima[0] == doctest::Approx(18.13));
    CHECK(r.max_minimum_distance() < 0.005);
    CHECK(r.windows.size() >= 5);
    CHECK(r.one_of_each_per_window());
    CHECK_ERROR_CODE(extrema_structure(0.25, 10.0, 5.0, 0.01), InvalidArgument);
  }

  TEST_CASE("window helper") {
    const double unit = std::numbers::pi / std::numbers::ln2;
    const auto w = extrema_windows(unit, 5.0 * unit + 1e-9, {classify_extremum(2.0 * unit, 0.5, true)});
    REQUIRE(w.size() == 2);
    CHECK(w[0].from == doctest::Approx(unit));
    CHECK(w[0].minima == 1);
    CHECK(w[0].maxima == 0);
    CHECK(w[1].minima == 0);
    const Extremum mx = classify_extremum(2.9 * unit, 0.9, false);
    CHECK(mx.nearest_multiple == doctest::Approx(3.0 * unit));
  }
}
