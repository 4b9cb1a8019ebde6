// etalab: command-line front end for the eta/zeta partial-sum toolkit.
//
// Exit codes: 0 success, 1 a checked property was violated, 2 a value could
// not be certified to the requested accuracy, 3 file I/O failed, 64 bad
// arguments.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "etalab/asymptotics.hpp"
#include "etalab/harness.hpp"
#include "etalab/io.hpp"
#include "etalab/ratio.hpp"
#include "json.hpp"

namespace {

using namespace etalab;
using io::format_index;
using io::format_number;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitAccuracy = 2;
constexpr int kExitIo = 3;
constexpr int kExitUsage = 64;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::AccuracyUnreachable:
    case ErrorCode::WindowExhausted:
      return kExitAccuracy;
    case ErrorCode::Io:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

struct Context {
  io::RunConfig cfg;
  Index stride = 1;
  bool dual = false;
  bool trace = false;
  Index trace_radius = 50;
  Index count = 5000;
  bool with_asymptotics = false;
  std::string which = "conjecture";
  std::string table;
  double zero_tol = 1e-5;
  std::string kind = "both";
  double step = 1e-4;
  double zero_threshold = 1e-2;
  std::string zero_scale = "relative";
  Index envelope_from = 10'000;
  double envelope_factor = 2.0;

  bool json(bool default_json = false) const {
    if (cfg.format == "json") return true;
    if (cfg.format == "csv") return false;
    return default_json;
  }
  StripPoint point() const { return {cfg.sigma, cfg.t}; }
  ScanOptions scan_options() const { return {cfg.window, cfg.ceiling}; }
};

void emit(const Context& ctx, const std::string& text) {
  if (ctx.cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) {
      throw Error(ErrorCode::Io, "cannot write to stdout");
    }
  } else {
    io::write_atomic(ctx.cfg.out, text);
  }
}

void emit_json(const Context& ctx, std::string_view kind, const ordered_json& data) {
  emit(ctx, io::json_document(io::schema_name(kind), io::config_json(ctx.cfg), data.dump()));
}

ordered_json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

int cmd_value(const Context& ctx, bool is_zeta) {
  const StripPoint s = ctx.point();
  const OracleValue v = is_zeta ? zeta(s, ctx.cfg.precision) : eta(s, ctx.cfg.precision);
  if (ctx.json()) {
    ordered_json data = complex_json(v.value);
    data["abs_error_bound"] = v.abs_error_bound;
    data["terms"] = v.terms;
    data["zero_indistinguishable"] = v.zero_indistinguishable();
    emit_json(ctx, is_zeta ? "zeta" : "eta", data);
  } else {
    io::CsvWriter csv({"sigma", "t", "re", "im", "abs", "abs_error_bound", "zero_indistinguishable"});
    csv.row({format_number(s.sigma()), format_number(s.t()), format_number(v.value.real()),
             format_number(v.value.imag()), format_number(std::abs(v.value)),
             format_number(v.abs_error_bound), v.zero_indistinguishable() ? "1" : "0"});
    emit(ctx, csv.text());
  }
  return kExitOk;
}

int cmd_path_export(const Context& ctx) {
  const Index n_max = ctx.cfg.n_max;
  if (n_max == 0 || n_max > 10'000'000) {
    throw Error(ErrorCode::InvalidArgument, "--n-max must lie in [1, 1e7]");
  }
  if (ctx.stride == 0) {
    throw Error(ErrorCode::InvalidArgument, "--stride must be >= 1");
  }
  const StripPoint s = ctx.point();
  PartialSumStream stream(s);
  std::optional<PartialSumStream> mirror;
  std::vector<std::string> header{"n", "re", "im"};
  if (ctx.dual) {
    mirror.emplace(s.mirrored());
    header.insert(header.end(), {"re_mirror", "im_mirror"});
  }
  io::CsvWriter csv(header);
  for (Index n = 1; n <= n_max; ++n) {
    const Complex z = stream.advance().sum;
    const Complex w = mirror ? mirror->advance().sum : Complex{};
    if ((n - 1) % ctx.stride != 0 && n != n_max) {
      continue;
    }
    std::vector<std::string> cells{format_index(n), format_number(z.real()), format_number(z.imag())};
    if (mirror) {
      cells.push_back(format_number(w.real()));
      cells.push_back(format_number(w.imag()));
    }
    csv.row(cells);
  }
  if (ctx.json()) {
    emit_json(ctx, "path", ordered_json::parse(io::csv_rows_to_json(io::parse_csv(csv.text()))));
  } else {
    emit(ctx, csv.text());
  }
  return kExitOk;
}

ordered_json diagnostics_json(const OrbitDiagnostics& d) {
  return {{"n_threshold", d.n_threshold},       {"n_o", d.n_o},
          {"transition_index", d.n_o + 1},      {"j", d.j},
          {"m", d.m},                           {"epsilon", d.epsilon},
          {"verified_window", d.verified_window}, {"n_o_sign_flips", d.n_o_sign_flips},
          {"j_sign_flips", d.j_sign_flips},     {"multiple_flips", d.multiple_flips()}};
}

int cmd_orbit(const Context& ctx) {
  const StripPoint s = ctx.point();
  const OrbitDiagnostics d = find_m(s, ctx.cfg.epsilon, ctx.scan_options());
  const Index trace_from = std::max(d.n_threshold, d.n_o > ctx.trace_radius ? d.n_o - ctx.trace_radius : 1);
  const Index trace_to = d.n_o + ctx.trace_radius;
  io::CsvWriter trace({"n", "numerator18"});
  for (Index n = trace_from; n <= trace_to; ++n) {
    trace.row({format_index(n), format_number(numerator18(n, s))});
  }
  // Short remainder spot check just past m.
  constexpr Index kSpotCheck = 100;
  std::size_t spot_violations = 0;
  for (const RemainderBound& b : sandwich_report(s, ctx.cfg.epsilon, d.m + 1, d.m + kSpotCheck, d)) {
    spot_violations += !b.holds();
  }
  if (ctx.json(true)) {
    ordered_json data;
    data["sigma"] = s.sigma();
    data["t"] = s.t();
    data["diagnostics"] = diagnostics_json(d);
    data["sandwich_spot_check"] = {{"from", d.m + 1}, {"to", d.m + kSpotCheck}, {"violations", spot_violations}};
    data["trace"] = ordered_json::parse(io::csv_rows_to_json(io::parse_csv(trace.text())));
    emit_json(ctx, "orbit", data);
  } else if (ctx.trace) {
    emit(ctx, trace.text());
  } else {
    io::CsvWriter csv({"sigma", "t", "epsilon", "n_threshold", "n_o", "transition_index", "j", "m",
                       "window", "n_o_sign_flips", "j_sign_flips", "spot_check_violations"});
    csv.row({format_number(s.sigma()), format_number(s.t()), format_number(d.epsilon),
             format_index(d.n_threshold), format_index(d.n_o), format_index(d.n_o + 1), format_index(d.j),
             format_index(d.m), format_index(d.verified_window), format_index(d.n_o_sign_flips),
             format_index(d.j_sign_flips), std::to_string(spot_violations)});
    emit(ctx, csv.text());
  }
  return spot_violations == 0 ? kExitOk : kExitViolation;
}

int cmd_sandwich(const Context& ctx) {
  const StripPoint s = ctx.point();
  if (ctx.count == 0) {
    throw Error(ErrorCode::InvalidArgument, "--count must be >= 1");
  }
  const OrbitDiagnostics d = find_m(s, ctx.cfg.epsilon, ctx.scan_options());
  const auto bounds = sandwich_report(s, ctx.cfg.epsilon, d.m + 1, d.m + ctx.count, d);
  std::vector<std::string> header{"n", "lower", "measured", "upper", "holds"};
  if (ctx.with_asymptotics) {
    header.insert(header.end(), {"dr2_minus_dc2_ratio", "half_radius_ratio"});
  }
  io::CsvWriter csv(header);
  std::size_t violations = 0;
  for (const RemainderBound& b : bounds) {
    violations += !b.holds();
    std::vector<std::string> cells{format_index(b.n), format_number(b.lower), format_number(b.measured),
                                   format_number(b.upper), b.holds() ? "1" : "0"};
    if (ctx.with_asymptotics) {
      cells.push_back(format_number(check_dr2_minus_dc2(b.n, s).ratio));
      cells.push_back(format_number(check_half_radius(b.n, s).ratio));
    }
    csv.row(cells);
  }
  if (ctx.json()) {
    ordered_json data;
    data["diagnostics"] = diagnostics_json(d);
    data["violations"] = violations;
    data["rows"] = ordered_json::parse(io::csv_rows_to_json(io::parse_csv(csv.text())));
    if (ctx.with_asymptotics) {
      // Geometric ladder past m.
      ordered_json ladder = ordered_json::array();
      for (Index n = std::max<Index>(d.m + 1, 10 * std::max<Index>(d.n_o, 1)), k = 0; k < 8; n *= 2, ++k) {
        const AsymptoticRecord a = check_dr2_minus_dc2(n, s);
        const AsymptoticRecord h = check_half_radius(n, s);
        ladder.push_back({{"n", n},
                          {"dr2_minus_dc2", {{"exact", a.exact}, {"leading", a.leading}, {"ratio", a.ratio}}},
                          {"half_radius", {{"exact", h.exact}, {"leading", h.leading}, {"ratio", h.ratio}}}});
      }
      data["asymptotics"] = ladder;
    }
    emit_json(ctx, "sandwich", data);
  } else {
    emit(ctx, csv.text());
  }
  std::cerr << "m=" << d.m << " checked=" << bounds.size() << " violations=" << violations << "\n";
  return violations == 0 ? kExitOk : kExitViolation;
}

ordered_json zero_report_json(const ZeroSumReport& r) {
  ordered_json events = ordered_json::array();
  for (const ZeroSumEvent& e : r.events) {
    events.push_back({{"n", e.n}, {"magnitude", e.magnitude}, {"below_n_o", e.below_n_o}});
  }
  return {{"n_o", r.n_o},
          {"argmin", r.argmin},
          {"min_magnitude", r.min_magnitude},
          {"flagged_count", r.flagged_count()},
          {"events", events}};
}

int cmd_ratio(const Context& ctx) {
  const StripPoint input = ctx.point();
  if (!input.in_critical_strip()) {
    throw Error(ErrorCode::InvalidArgument, "ratio needs 0 < sigma < 1");
  }
  // Points right of the critical line are handled through their mirror.
  const StripPoint s = input.sigma() <= 0.5 ? input : input.mirrored();
  const Index n_max = ctx.cfg.n_max;
  const ThresholdScale scale =
      ctx.zero_scale == "absolute" ? ThresholdScale::Absolute : ThresholdScale::SegmentRelative;
  if (ctx.zero_scale != "absolute" && ctx.zero_scale != "relative") {
    throw Error(ErrorCode::InvalidArgument, "--zero-scale is absolute or relative");
  }
  const LimitEstimate l = limit_estimate(s, n_max);
  const FunctionalRatio p = big_p(s);
  const ZeroSumReport denominator = detect_zero_sums(s, n_max, ctx.zero_threshold, scale, ctx.scan_options());
  const ZeroSumReport numerator =
      detect_zero_sums(s.mirrored(), n_max, ctx.zero_threshold, scale, ctx.scan_options());
  std::optional<EnvelopeBoundReport> bound;
  std::optional<EnvelopeReport> envelope;
  if (n_max > ctx.envelope_from) {
    bound = envelope_bound_check(s, ctx.envelope_from, n_max, ctx.envelope_factor);
    envelope = envelope_diagnostics(s, ctx.envelope_from, n_max);
  }
  const bool violated = (bound && bound->violations > 0) || denominator.flagged_count() > 1 ||
                        numerator.flagged_count() > 1;
  if (ctx.json(true)) {
    ordered_json data;
    data["point"] = {{"sigma", s.sigma()}, {"t", s.t()}, {"mirrored_from_input", !(input == s)}};
    data["limit"] = complex_json(l.value);
    data["limit"]["n_used"] = l.n_used;
    data["limit"]["residual"] = l.residual;
    data["limit"]["zero_flag"] = l.zero_flag;
    data["limit"]["skipped"] = l.skipped;
    data["p"] = complex_json(p.value);
    data["p"]["log_modulus"] = p.log_modulus;
    data["zero_events"] = {{"threshold", ctx.zero_threshold},
                           {"scale", ctx.zero_scale},
                           {"denominator", zero_report_json(denominator)},
                           {"numerator", zero_report_json(numerator)}};
    if (bound) {
      ordered_json runs = ordered_json::object();
      for (const auto& [len, cnt] : envelope->run_lengths) {
        runs[std::to_string(len)] = cnt;
      }
      data["envelope"] = {{"calibration_n", bound->calibration_n},
                          {"calibration_value", bound->calibration_value},
                          {"k", bound->k},
                          {"n_to", bound->n_to},
                          {"max_scaled", bound->max_scaled},
                          {"argmax", bound->argmax},
                          {"violations", bound->violations},
                          {"alternations", envelope->alternations},
                          {"alternation_rate", envelope->alternation_rate},
                          {"run_lengths", runs}};
    }
    emit_json(ctx, "ratio", data);
  } else {
    io::CsvWriter csv({"sigma", "t", "l_re", "l_im", "l_abs", "residual", "p_re", "p_im", "p_abs",
                       "zero_flag", "denominator_flagged", "numerator_flagged", "envelope_k",
                       "envelope_violations"});
    csv.row({format_number(s.sigma()), format_number(s.t()), format_number(l.value.real()),
             format_number(l.value.imag()), format_number(std::abs(l.value)), format_number(l.residual),
             format_number(p.value.real()), format_number(p.value.imag()),
             format_number(std::abs(p.value)), l.zero_flag ? "1" : "0",
             std::to_string(denominator.flagged_count()), std::to_string(numerator.flagged_count()),
             bound ? format_number(bound->k) : "", bound ? std::to_string(bound->violations) : ""});
    emit(ctx, csv.text());
  }
  return violated ? kExitViolation : kExitOk;
}

int cmd_scan(const Context& ctx) {
  const io::ScanKind kind = io::parse_scan_kind(ctx.which);
  const io::ScanOutput out = io::run_scan(kind, ctx.cfg.grid, ctx.cfg.precision, ctx.cfg.threads, ctx.cfg.cache_dir);
  if (ctx.json()) {
    ordered_json data;
    data["which"] = ctx.which;
    data["summary"] = {{"rows", out.summary.rows},
                       {"violations", out.summary.violations},
                       {"skipped", out.summary.skipped},
                       {"informational", out.summary.informational},
                       {"details", ordered_json::parse(out.summary.extra_json)}};
    data["rows"] = ordered_json::parse(io::csv_rows_to_json(io::parse_csv(out.csv)));
    emit_json(ctx, "scan", data);
  } else {
    emit(ctx, out.csv);
  }
  std::cerr << "scan=" << ctx.which << " rows=" << out.summary.rows << " violations=" << out.summary.violations
            << " skipped=" << out.summary.skipped << " cache="
            << (out.cache_hit ? "hit" : out.cache_repaired ? "repaired" : "miss") << " details="
            << out.summary.extra_json << "\n";
  const bool checked = kind != io::ScanKind::Extrema;
  return checked && out.summary.violations > 0 ? kExitViolation : kExitOk;
}

int cmd_verify_zeros(const Context& ctx) {
  const std::vector<io::ZeroEntry> table =
      ctx.table.empty() ? io::default_zero_table() : io::load_zero_table(ctx.table);
  io::CsvWriter csv({"ordinal", "t", "magnitude", "abs_error_bound", "zero_indistinguishable", "verdict"});
  for (const io::ZeroEntry& z : table) {
    const OracleValue v = eta(StripPoint(0.5, z.t), ctx.cfg.precision);
    const double mag = std::abs(v.value);
    csv.row({std::to_string(z.ordinal), format_number(z.t), format_number(mag), format_number(v.abs_error_bound),
             v.zero_indistinguishable() ? "1" : "0", mag < ctx.zero_tol ? "zero" : "not-a-zero"});
  }
  if (ctx.json()) {
    emit_json(ctx, "zeros", ordered_json::parse(io::csv_rows_to_json(io::parse_csv(csv.text()))));
  } else {
    emit(ctx, csv.text());
  }
  return kExitOk;
}

int cmd_approx_deviation(const Context& ctx) {
  std::vector<ApproxKind> kinds;
  if (ctx.kind == "upper" || ctx.kind == "both") kinds.push_back(ApproxKind::Upper);
  if (ctx.kind == "lower" || ctx.kind == "both") kinds.push_back(ApproxKind::Lower);
  if (kinds.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--kind is upper, lower or both");
  }
  io::CsvWriter csv({"kind", "grid_step", "points", "max_deviation", "sigma_at_max", "deviation_at_zero",
                     "deviation_at_half", "direction_violations"});
  std::size_t violations = 0;
  for (const ApproxKind k : kinds) {
    const ApproxDeviationReport r = approx_deviation_scan(k, ctx.step);
    violations += r.direction_violations;
    csv.row({k == ApproxKind::Upper ? "upper" : "lower", format_number(r.grid_step), std::to_string(r.points),
             format_number(r.max_deviation), format_number(r.sigma_at_max), format_number(r.deviation_at_zero),
             format_number(r.deviation_at_half), std::to_string(r.direction_violations)});
  }
  if (ctx.json()) {
    emit_json(ctx, "approx-deviation", ordered_json::parse(io::csv_rows_to_json(io::parse_csv(csv.text()))));
  } else {
    emit(ctx, csv.text());
  }
  return violations == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  try {
    io::apply_config_from_env(ctx.cfg);
  } catch (const Error& e) {
    std::cerr << "etalab: config: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  io::RunConfig& c = ctx.cfg;

  CLI::App app{"Partial sums, remainders and functional-equation ratios of the alternating zeta series"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--sigma", c.sigma, "Real part of s")->capture_default_str();
  app.add_option("--t", c.t, "Imaginary part of s")->capture_default_str();
  app.add_option("--n-max", c.n_max, "Largest index")->capture_default_str();
  app.add_option("--precision", c.precision, "Target absolute error of oracle values")->capture_default_str();
  app.add_option("--epsilon", c.epsilon, "Disk scale for the remainder sandwich")->capture_default_str();
  app.add_option("--window", c.window, "Stable-run length confirming an onset index")->capture_default_str();
  app.add_option("--ceiling", c.ceiling, "Largest index an onset scan may reach")->capture_default_str();
  app.add_option("--format", c.format, "csv, json or auto (per-command default)")
      ->check(CLI::IsMember({"csv", "json", "auto"}))
      ->capture_default_str();
  app.add_option("--out", c.out, "Output file (default stdout)");
  app.add_option("--cache-dir", c.cache_dir, "Scan cache directory");
  app.add_option("--threads", c.threads, "Worker threads for scans")->capture_default_str();

  auto* eta_cmd = app.add_subcommand("eta", "eta(s) with a certified error bound");
  auto* zeta_cmd = app.add_subcommand("zeta", "zeta(s) = eta(s) / (1 - 2^(1-s))");

  auto* path_cmd = app.add_subcommand("path-export", "Partial-sum path as CSV rows n,re,im");
  path_cmd->add_option("--stride", ctx.stride, "Emit every stride-th index")->capture_default_str();
  path_cmd->add_flag("--dual", ctx.dual, "Also emit the path at 1 - conj(s)");

  auto* orbit_cmd = app.add_subcommand("orbit", "Disk-nesting onset n_o, j and m with a numerator trace");
  orbit_cmd->add_flag("--trace", ctx.trace, "CSV mode: print the numerator trace instead of diagnostics");
  orbit_cmd->add_option("--trace-radius", ctx.trace_radius, "Trace indices around n_o")->capture_default_str();

  auto* sandwich_cmd = app.add_subcommand("sandwich", "Remainder bounds for n in (m, m + count]");
  sandwich_cmd->add_option("--count", ctx.count, "Indices to check past m")->capture_default_str();
  sandwich_cmd->add_flag("--with-asymptotics", ctx.with_asymptotics, "Compare against leading-order forms");

  auto* ratio_cmd = app.add_subcommand("ratio", "Limit of S_n(1-s)/S_n(s), P(s), zero events, envelope");
  ratio_cmd->add_option("--zero-threshold", ctx.zero_threshold, "Zero-event threshold")->capture_default_str();
  ratio_cmd->add_option("--zero-scale", ctx.zero_scale, "absolute or relative (times n^-sigma)")
      ->check(CLI::IsMember({"absolute", "relative"}))
      ->capture_default_str();
  ratio_cmd->add_option("--envelope-from", ctx.envelope_from, "Envelope calibration index")->capture_default_str();
  ratio_cmd->add_option("--envelope-factor", ctx.envelope_factor, "K = factor * calibration value")
      ->capture_default_str();

  auto* scan_cmd = app.add_subcommand("scan", "Grid scans over (alpha, t)");
  scan_cmd->add_option("--which", ctx.which, "conjecture, monotonicity or extrema")
      ->check(CLI::IsMember({"conjecture", "monotonicity", "extrema"}))
      ->capture_default_str();
  scan_cmd->add_option("--grid-alpha-from", c.grid.alpha_from)->capture_default_str();
  scan_cmd->add_option("--grid-alpha-to", c.grid.alpha_to)->capture_default_str();
  scan_cmd->add_option("--grid-alpha-step", c.grid.alpha_step)->capture_default_str();
  scan_cmd->add_option("--grid-t-from,--t-from", c.grid.t_from)->capture_default_str();
  scan_cmd->add_option("--grid-t-to,--t-to", c.grid.t_to)->capture_default_str();
  scan_cmd->add_option("--grid-t-step,--t-step", c.grid.t_step)->capture_default_str();
  scan_cmd->add_option_function<double>(
      "--alpha", [&c](double a) { c.grid.alpha_from = c.grid.alpha_to = a; }, "Single alpha value");

  auto* zeros_cmd = app.add_subcommand("verify-zeros", "|eta(1/2 + i t)| at tabulated zeros");
  zeros_cmd->add_option("--table", ctx.table, "CSV file with rows ordinal,t");
  zeros_cmd->add_option("--zero-tol", ctx.zero_tol, "Magnitude below which a row counts as a zero")
      ->capture_default_str();

  auto* approx_cmd = app.add_subcommand("approx-deviation", "Deviation scans of the elementary approximations");
  approx_cmd->add_option("--kind", ctx.kind, "upper, lower or both")
      ->check(CLI::IsMember({"upper", "lower", "both"}))
      ->capture_default_str();
  approx_cmd->add_option("--step", ctx.step, "sigma grid step (<= 1e-4)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*eta_cmd) return cmd_value(ctx, false);
    if (*zeta_cmd) return cmd_value(ctx, true);
    if (*path_cmd) return cmd_path_export(ctx);
    if (*orbit_cmd) return cmd_orbit(ctx);
    if (*sandwich_cmd) return cmd_sandwich(ctx);
    if (*ratio_cmd) return cmd_ratio(ctx);
    if (*scan_cmd) return cmd_scan(ctx);
    if (*zeros_cmd) return cmd_verify_zeros(ctx);
    if (*approx_cmd) return cmd_approx_deviation(ctx);
  } catch (const Error& e) {
    std::cerr << "etalab: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "etalab: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
