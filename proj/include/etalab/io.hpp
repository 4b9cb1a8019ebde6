#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "etalab/harness.hpp"

namespace etalab::io {

/// Shortest decimal that round-trips to the same double. Integral values
/// keep a trailing ".0" so that every real column reads as a real.
std::string format_number(double x);
std::string format_index(Index n);

/// CSV text with LF line endings and a fixed header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& row(const std::vector<std::string>& cells);
  const std::string& text() const noexcept { return text_; }
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws InvalidArgument if missing
};

CsvTable parse_csv(std::string_view text);

/// Rows as JSON objects; cells that parse as numbers become numbers.
std::string csv_rows_to_json(const CsvTable& table);

/// {"schema": ..., "config": ..., "data": ...} serialised with 2-space
/// indentation and a trailing newline. `config` and `data` are JSON text.
std::string json_document(std::string_view schema, const std::string& config_json,
                          const std::string& data_json);

constexpr std::string_view kSchemaPrefix = "etalab/";
std::string schema_name(std::string_view kind);  // "etalab/<kind>/v1"

struct ZeroEntry {
  int ordinal = 0;
  double t = 0.0;
};

/// The two ordinates shipped by default: ordinals 1 and 6.
std::vector<ZeroEntry> default_zero_table();

/// Lines "ordinal,t"; blank lines, '#' comments and an optional header row
/// are ignored. t must be strictly increasing. Throws Io when unreadable.
std::vector<ZeroEntry> load_zero_table(const std::filesystem::path& path);
std::vector<ZeroEntry> parse_zero_table(std::string_view text);

/// Everything a run can be configured with. Every field has a default; a
/// config file replaces defaults and command-line flags replace both.
struct RunConfig {
  double sigma = 0.5;
  double t = 0.0;
  double alpha = 0.0;
  Index n_max = 1'000'000;
  double precision = 1e-12;
  double epsilon = 0.5;
  Index window = 1000;
  Index ceiling = 10'000'000;
  ScanGrid grid{};
  std::string format = "auto";  // csv, json, or auto (command default)
  std::string out;  // empty: stdout
  std::string cache_dir;  // empty: no cache
  unsigned threads = 1;
};

constexpr const char* kConfigEnvVar = "ETALAB_CONFIG";

/// Flat key=value text. Keys are the long flag names without dashes
/// ("cache-dir", "grid-t-step", ...). Unknown keys throw InvalidArgument.
void apply_config_text(std::string_view text, RunConfig& config);

/// Applies the file named by $ETALAB_CONFIG if set. Throws Io if the file is
/// named but unreadable.
void apply_config_from_env(RunConfig& config);

std::string config_json(const RunConfig& config);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

enum class ScanKind { Conjecture, Monotonicity, Extrema };

ScanKind parse_scan_kind(std::string_view name);
std::string_view to_string(ScanKind kind);

struct ScanSummary {
  std::size_t rows = 0;
  std::size_t violations = 0;  // conjecture failures or monotonicity inversions
  std::size_t skipped = 0;
  std::size_t informational = 0;
  std::string extra_json = "{}";  // kind-specific statistics
};

struct ScanOutput {
  std::string csv;
  ScanSummary summary;
  bool cache_hit = false;
  bool cache_repaired = false;  // hit failed verification and was recomputed
  std::string cache_key;
};

/// Content-addressed key over (kind, grid, precision).
std::string scan_cache_key(ScanKind kind, const ScanGrid& grid, double precision);

/// Runs the scan, or serves it from `cache_dir` after recomputing one row
/// and comparing within 1e-12.
ScanOutput run_scan(ScanKind kind, const ScanGrid& grid, double precision, unsigned threads,
                    const std::string& cache_dir = {});

/// Summary statistics recomputed from scan CSV text.
ScanSummary summarize_scan(ScanKind kind, const CsvTable& table);

/// Recomputes row `index` of a cached scan; true if every value column
/// agrees within 1e-12.
bool verify_scan_row(ScanKind kind, const CsvTable& table, std::size_t index, double precision);

}  // namespace etalab::io
