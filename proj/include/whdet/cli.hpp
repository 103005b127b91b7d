#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "whdet/error.hpp"

/// Command-line driver for the sinh-sine example: identity checks, sweeps,
/// asymptotics and table/plot export.
namespace whdet::cli {

enum class Command { lhs, rhs, verify, asym, sweep };
enum class Format { csv, json };

std::string to_string(Command command);
std::string to_string(Format format);

/// Bad flags, bad config keys or values that fail validation. Exit status 2.
class UsageError : public Error {
public:
  using Error::Error;
};

/// --help was given; what() holds the help text. Exit status 0.
class HelpRequested : public Error {
public:
  using Error::Error;
};

/// min:max:steps, equally spaced and inclusive; a single value has steps = 1.
struct AlphaRange {
  double min = 2.0;
  double max = 2.0;
  std::size_t steps = 1;

  std::vector<double> values() const;
};

struct RunConfig {
  Command command = Command::verify;
  std::vector<double> g{1.0};
  AlphaRange alpha;
  std::size_t n_lhs = 200;
  std::size_t n_rhs = 80;
  double tol = 1e-6;
  std::string output_path;  // empty: standard output
  Format format = Format::csv;
  bool emit_plot = false;
  std::size_t workers = 1;
  /// Fill the ms column. Without it, identical configs give identical bytes.
  bool timing = true;
};

/// Comma-separated list of positive reals.
std::vector<double> parse_g_list(const std::string& text);
/// "a" or "min:max:steps".
AlphaRange parse_alpha(const std::string& text);

/// Flags override values from --config. Throws UsageError.
RunConfig parse_config(int argc, const char* const* argv);
RunConfig parse_config(const std::vector<std::string>& args);

/// Throws UsageError unless the config is runnable.
void validate(const RunConfig& config);

struct SweepRow {
  double g = 0.0;
  double alpha = 0.0;
  std::optional<double> lhs;
  std::optional<double> rhs;
  std::optional<double> Z;
  std::optional<double> c;
  std::optional<double> rhs_det;
  /// 1 - C(g) e^{-2 lambda alpha}, the predicted det(I - L).
  std::optional<double> asym;
  std::optional<double> rel_disc;
  std::optional<std::size_t> n_lhs;
  std::optional<std::size_t> n_rhs;
  std::optional<double> ms;
  /// Set on failed rows; the numeric fields are then absent.
  std::string error;

  bool failed() const { return !error.empty(); }
  bool operator==(const SweepRow&) const = default;
};

/// (g, alpha) pairs ordered by g, then alpha.
std::vector<std::pair<double, double>> plan(const RunConfig& config);

/// All rows of the plan, computed on config.workers threads. Numerical
/// failures are caught per row.
std::vector<SweepRow> compute_rows(const RunConfig& config);

inline constexpr const char* kCsvHeader = "g,alpha,lhs,rhs,Z,c,rhs_det,asym,rel_disc,n_lhs,n_rhs,ms";

void write_table(const std::vector<SweepRow>& rows, Format format, std::ostream& out);
/// Throws Error (with the path) on I/O failure and for empty rows.
void emit_table(const std::vector<SweepRow>& rows, Format format, const std::string& path);
std::vector<SweepRow> read_table_json(const std::string& text);

/// Writes <stem>.dat and <stem>.gp: -ln det against alpha, the line
/// -c alpha - ln Z and the refined curve with C(g).
void emit_plot(const std::vector<SweepRow>& rows, const std::string& stem);

/// 0 success, 1 a verify row exceeded tol, 3 a row failed numerically.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run, mapping UsageError to exit status 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

} // namespace whdet::cli
