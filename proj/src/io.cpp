#include "etalab/io.hpp"

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace etalab::io {

namespace {

using nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) {
      return out;
    }
    start = pos + 1;
  }
}

std::optional<double> try_parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) {
    return std::nullopt;
  }
  if (s.front() == '+') {
    s.remove_prefix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

double parse_double(std::string_view s, std::string_view what) {
  const auto v = try_parse_double(s);
  if (!v) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return *v;
}

std::uint64_t parse_unsigned(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    // Accept integral reals such as 1e6.
    const auto d = try_parse_double(s);
    if (d && *d >= 0.0 && *d == std::floor(*d) && *d < 1.8e19) {
      return static_cast<std::uint64_t>(*d);
    }
    throw Error(ErrorCode::InvalidArgument, "cannot parse " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

ordered_json cell_to_json(const std::string& cell) {
  const auto v = try_parse_double(cell);
  if (v && std::isfinite(*v)) {
    return *v;
  }
  return cell;
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::string conjecture_csv(const ScanGrid& grid, double precision, unsigned threads) {
  CsvWriter csv({"alpha", "t", "ratio", "lower", "upper", "pass_lower", "pass_upper", "skipped",
                 "informational"});
  for (const BoundCheckRecord& r : scan_conjecture(grid, {threads, precision})) {
    csv.row({format_number(r.alpha), format_number(r.t), format_number(r.ratio), format_number(r.lower),
             format_number(r.upper), flag(r.pass_lower), flag(r.pass_upper), flag(r.skipped),
             flag(r.informational)});
  }
  return csv.text();
}

std::string monotonicity_csv(const ScanGrid& grid) {
  grid.validate();
  CsvWriter csv({"t", "alpha", "p_modulus", "decreasing"});
  const std::vector<double> alphas = grid.alphas();
  for (const double t : grid.ts()) {
    const MonotonicityReport report = scan_monotonicity(t, alphas);
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      const bool ok = i == 0 || report.records[i].p_modulus < report.records[i - 1].p_modulus;
      csv.row({format_number(t), format_number(report.records[i].alpha),
               format_number(report.records[i].p_modulus), flag(ok)});
    }
  }
  return csv.text();
}

std::string extrema_csv(const ScanGrid& grid, double precision, unsigned threads) {
  grid.validate();
  CsvWriter csv({"alpha", "t", "ratio", "smoothed", "extremum"});
  for (const double alpha : grid.alphas()) {
    const ExtremaReport report = extrema_structure(alpha, grid.t_from, grid.t_to, grid.t_step, {threads, precision});
    std::set<double> minima;
    std::set<double> maxima;
    for (const Extremum& e : report.extrema) {
      (e.is_minimum ? minima : maxima).insert(e.t);
    }
    for (std::size_t i = 0; i < report.ts.size(); ++i) {
      const double t = report.ts[i];
      const char* kind = minima.count(t) ? "min" : maxima.count(t) ? "max" : "none";
      csv.row({format_number(alpha), format_number(t), format_number(report.ratios[i]),
               format_number(report.smoothed[i]), kind});
    }
  }
  return csv.text();
}

std::string compute_scan(ScanKind kind, const ScanGrid& grid, double precision, unsigned threads) {
  switch (kind) {
    case ScanKind::Conjecture:
      return conjecture_csv(grid, precision, threads);
    case ScanKind::Monotonicity:
      return monotonicity_csv(grid);
    case ScanKind::Extrema:
      return extrema_csv(grid, precision, threads);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scan kind");
}

bool close(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) {
    return a == b;
  }
  return std::abs(a - b) <= 1e-12;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string out(buf, ptr);
  if (std::isfinite(x) && out.find_first_of(".e") == std::string::npos) {
    out += ".0";
  }
  return out;
}

std::string format_index(Index n) { return std::to_string(n); }

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    text_ += (i ? "," : "") + header[i];
  }
  text_ += '\n';
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw Error(ErrorCode::InvalidArgument, "CSV row width does not match the header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) {
      text_ += ',';
    }
    text_ += cells[i];
  }
  text_ += '\n';
  ++rows_;
  return *this;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "CSV has no column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells;
    for (std::string_view cell : split(line, ',')) {
      cells.emplace_back(cell);
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        throw Error(ErrorCode::Io, "malformed CSV row");
      }
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

std::string csv_rows_to_json(const CsvTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[table.header[i]] = cell_to_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump();
}

std::string schema_name(std::string_view kind) {
  return std::string(kSchemaPrefix) + std::string(kind) + "/v1";
}

std::string json_document(std::string_view schema, const std::string& config_json,
                          const std::string& data_json) {
  ordered_json doc;
  doc["schema"] = schema;
  doc["config"] = ordered_json::parse(config_json);
  doc["data"] = ordered_json::parse(data_json);
  return doc.dump(2) + "\n";
}

std::vector<ZeroEntry> default_zero_table() { return {{1, 14.13472514}, {6, 37.586178}}; }

std::vector<ZeroEntry> parse_zero_table(std::string_view text) {
  std::vector<ZeroEntry> out;
  for (std::string_view line : split(text, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 2) {
      throw Error(ErrorCode::InvalidArgument, "zero table rows are 'ordinal,t'");
    }
    if (out.empty() && !try_parse_double(cells[1])) {
      continue;  // header
    }
    ZeroEntry e;
    e.ordinal = static_cast<int>(parse_unsigned(cells[0], "ordinal"));
    e.t = parse_double(cells[1], "t");
    if (!out.empty() && !(e.t > out.back().t)) {
      throw Error(ErrorCode::InvalidArgument, "zero table t values must be strictly increasing");
    }
    out.push_back(e);
  }
  return out;
}

std::vector<ZeroEntry> load_zero_table(const std::filesystem::path& path) {
  return parse_zero_table(read_file(path));
}

void apply_config_text(std::string_view text, RunConfig& c) {
  for (std::string_view line : split(text, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "config line without '=': " + std::string(line));
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "sigma") c.sigma = parse_double(value, key);
    else if (key == "t") c.t = parse_double(value, key);
    else if (key == "alpha") c.alpha = parse_double(value, key);
    else if (key == "n-max") c.n_max = parse_unsigned(value, key);
    else if (key == "precision") c.precision = parse_double(value, key);
    else if (key == "epsilon") c.epsilon = parse_double(value, key);
    else if (key == "window") c.window = parse_unsigned(value, key);
    else if (key == "ceiling") c.ceiling = parse_unsigned(value, key);
    else if (key == "grid-alpha-from") c.grid.alpha_from = parse_double(value, key);
    else if (key == "grid-alpha-to") c.grid.alpha_to = parse_double(value, key);
    else if (key == "grid-alpha-step") c.grid.alpha_step = parse_double(value, key);
    else if (key == "grid-t-from") c.grid.t_from = parse_double(value, key);
    else if (key == "grid-t-to") c.grid.t_to = parse_double(value, key);
    else if (key == "grid-t-step") c.grid.t_step = parse_double(value, key);
    else if (key == "format") c.format = std::string(value);
    else if (key == "out") c.out = std::string(value);
    else if (key == "cache-dir") c.cache_dir = std::string(value);
    else if (key == "threads") c.threads = static_cast<unsigned>(parse_unsigned(value, key));
    else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
}

void apply_config_from_env(RunConfig& config) {
  const char* path = std::getenv(kConfigEnvVar);
  if (path == nullptr || *path == '\0') {
    return;
  }
  apply_config_text(read_file(path), config);
}

std::string config_json(const RunConfig& c) {
  ordered_json j;
  j["precision"] = c.precision;
  j["epsilon"] = c.epsilon;
  j["window"] = c.window;
  j["ceiling"] = c.ceiling;
  j["grid"] = {{"alpha_from", c.grid.alpha_from}, {"alpha_to", c.grid.alpha_to},
               {"alpha_step", c.grid.alpha_step}, {"t_from", c.grid.t_from},
               {"t_to", c.grid.t_to},             {"t_step", c.grid.t_step}};
  j["format"] = c.format;
  return j.dump();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::Io, "cannot read " + path.string());
  }
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::Io, "short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ScanKind parse_scan_kind(std::string_view name) {
  if (name == "conjecture") return ScanKind::Conjecture;
  if (name == "monotonicity") return ScanKind::Monotonicity;
  if (name == "extrema") return ScanKind::Extrema;
  throw Error(ErrorCode::InvalidArgument, "unknown scan '" + std::string(name) + "'");
}

std::string_view to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::Conjecture:
      return "conjecture";
    case ScanKind::Monotonicity:
      return "monotonicity";
    case ScanKind::Extrema:
      return "extrema";
  }
  return "unknown";
}

std::string scan_cache_key(ScanKind kind, const ScanGrid& grid, double precision) {
  std::string canonical = "v1;";
  canonical += to_string(kind);
  for (const double v : {grid.alpha_from, grid.alpha_to, grid.alpha_step, grid.t_from, grid.t_to,
                         grid.t_step, precision}) {
    canonical += ';' + format_number(v);
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return std::string(to_string(kind)) + "-" + hex;
}

ScanSummary summarize_scan(ScanKind kind, const CsvTable& table) {
  ScanSummary s;
  s.rows = table.rows.size();
  if (kind == ScanKind::Conjecture) {
    const std::size_t pl = table.column("pass_lower");
    const std::size_t pu = table.column("pass_upper");
    const std::size_t sk = table.column("skipped");
    const std::size_t inf = table.column("informational");
    ordered_json first = nullptr;
    for (const auto& row : table.rows) {
      const bool skipped = row[sk] == "1";
      const bool informational = row[inf] == "1";
      s.skipped += skipped;
      s.informational += informational;
      if (!skipped && !informational && !(row[pl] == "1" && row[pu] == "1")) {
        if (s.violations++ == 0) {
          first = {{"alpha", cell_to_json(row[table.column("alpha")])}, {"t", cell_to_json(row[table.column("t")])}};
        }
      }
    }
    s.extra_json = ordered_json{{"first_violation", first}}.dump();
  } else if (kind == ScanKind::Monotonicity) {
    const std::size_t dec = table.column("decreasing");
    for (const auto& row : table.rows) {
      s.violations += row[dec] != "1";
    }
  } else {
    const std::size_t ca = table.column("alpha");
    const std::size_t ct = table.column("t");
    const std::size_t cr = table.column("ratio");
    const std::size_t ce = table.column("extremum");
    ordered_json per_alpha = ordered_json::array();
    std::size_t i = 0;
    while (i < table.rows.size()) {
      const std::string alpha = table.rows[i][ca];
      const double t_from = parse_double(table.rows[i][ct], "t");
      double t_to = t_from;
      std::vector<Extremum> extrema;
      for (; i < table.rows.size() && table.rows[i][ca] == alpha; ++i) {
        const auto& row = table.rows[i];
        t_to = parse_double(row[ct], "t");
        if (row[ce] != "none") {
          extrema.push_back(classify_extremum(t_to, parse_double(row[cr], "ratio"), row[ce] == "min"));
        }
      }
      ExtremaReport r;
      r.extrema = extrema;
      r.windows = extrema_windows(t_from, t_to, extrema);
      const auto minima = std::count_if(extrema.begin(), extrema.end(), [](const Extremum& e) { return e.is_minimum; });
      double max_max_distance = 0.0;
      for (const Extremum& e : extrema) {
        if (!e.is_minimum) max_max_distance = std::max(max_max_distance, e.distance);
      }
      per_alpha.push_back({{"alpha", cell_to_json(alpha)},
                           {"minima", minima},
                           {"maxima", static_cast<long>(extrema.size()) - minima},
                           {"max_minimum_distance", r.max_minimum_distance()},
                           {"max_maximum_distance", max_max_distance},
                           {"complete_windows", r.windows.size()},
                           {"one_of_each_per_window", r.one_of_each_per_window()}});
    }
    s.extra_json = ordered_json{{"per_alpha", per_alpha}}.dump();
  }
  return s;
}

bool verify_scan_row(ScanKind kind, const CsvTable& table, std::size_t index, double precision) {
  const auto& row = table.rows.at(index);
  const auto value = [&](std::string_view col) { return parse_double(row[table.column(col)], col); };
  switch (kind) {
    case ScanKind::Conjecture: {
      const BoundCheckRecord r = conjecture_point(value("alpha"), value("t"), precision);
      return close(r.ratio, value("ratio")) && close(r.lower, value("lower")) && close(r.upper, value("upper"));
    }
    case ScanKind::Monotonicity: {
      const double p = std::exp(big_p(StripPoint::from_alpha(value("alpha"), value("t"))).log_modulus);
      return close(p, value("p_modulus"));
    }
    case ScanKind::Extrema: {
      const BoundCheckRecord r = conjecture_point(value("alpha"), value("t"), precision);
      const double ratio = r.skipped ? std::numeric_limits<double>::infinity() : r.ratio;
      return close(ratio, value("ratio"));
    }
  }
  return false;
}

ScanOutput run_scan(ScanKind kind, const ScanGrid& grid, double precision, unsigned threads,
                    const std::string& cache_dir) {
  grid.validate();
  ScanOutput out;
  out.cache_key = scan_cache_key(kind, grid, precision);
  std::filesystem::path cached;
  if (!cache_dir.empty()) {
    cached = std::filesystem::path(cache_dir) / (out.cache_key + ".csv");
    if (std::filesystem::exists(cached)) {
      std::string text = read_file(cached);
      bool ok = false;
      try {
        const CsvTable table = parse_csv(text);
        ok = true;
        if (!table.rows.empty()) {
          std::random_device rd;
          std::mt19937_64 rng(rd());
          ok = verify_scan_row(kind, table, rng() % table.rows.size(), precision);
        }
        if (ok) {
          out.csv = std::move(text);
          out.summary = summarize_scan(kind, table);
          out.cache_hit = true;
          return out;
        }
      } catch (const Error&) {
        ok = false;
      }
      out.cache_repaired = true;
    }
  }
  out.csv = compute_scan(kind, grid, precision, threads);
  out.summary = summarize_scan(kind, parse_csv(out.csv));
  if (!cached.empty()) {
    write_atomic(cached, out.csv);
  }
  return out;
}

}  // namespace etalab::io
