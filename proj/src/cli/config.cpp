#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "whdet/cli.hpp"
#include "whdet/quadrature.hpp"
#include "whdet/sinhsine.hpp"

namespace whdet::cli {
namespace {

double parse_real(const std::string& text, const char* what) {
  const std::string trimmed = [&] {
    const auto b = text.find_first_not_of(" \t");
    const auto e = text.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : text.substr(b, e - b + 1);
  }();
  double value = 0.0;
  const char* first = trimmed.data();
  const char* last = first + trimmed.size();
  if (!trimmed.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (trimmed.empty() || ec != std::errc{} || ptr != last) {
    throw UsageError(std::string("invalid ") + what + ": '" + text + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw UsageError(std::string("invalid ") + what + ": '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

const std::map<std::string, Command> kCommands{{"lhs", Command::lhs},
                                               {"rhs", Command::rhs},
                                               {"verify", Command::verify},
                                               {"asym", Command::asym},
                                               {"sweep", Command::sweep}};

const std::map<std::string, Format> kFormats{{"csv", Format::csv}, {"json", Format::json}};

} // namespace

std::string to_string(Command command) {
  for (const auto& [name, value] : kCommands) {
    if (value == command) return name;
  }
  return "?";
}

std::string to_string(Format format) { return format == Format::csv ? "csv" : "json"; }

std::vector<double> AlphaRange::values() const {
  if (steps == 1) return {min};
  std::vector<double> out(steps);
  const double h = (max - min) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) out[i] = min + h * static_cast<double>(i);
  out.back() = max;
  return out;
}

std::vector<double> parse_g_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_real(item, "g"));
  if (out.empty()) throw UsageError("empty g list");
  return out;
}

AlphaRange parse_alpha(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  AlphaRange range;
  if (parts.size() == 1) {
    range.min = range.max = parse_real(parts[0], "alpha");
    range.steps = 1;
  } else if (parts.size() == 3) {
    range.min = parse_real(parts[0], "alpha minimum");
    range.max = parse_real(parts[1], "alpha maximum");
    range.steps = parse_count(parts[2], "alpha step count");
  } else {
    throw UsageError("alpha must be a number or min:max:steps, got '" + text + "'");
  }
  return range;
}

void validate(const RunConfig& config) {
  if (config.g.empty()) throw UsageError("no g values");
  for (double g : config.g) {
    try {
      (void)sinhsine::SinhParams::from_g(g);
    } catch (const AdmissibilityError& e) {
      throw UsageError(e.what());
    }
  }
  const AlphaRange& a = config.alpha;
  if (a.steps == 0) throw UsageError("alpha range needs at least one step");
  if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw UsageError("alpha must be finite");
  if (!(a.min > 0.0)) throw UsageError("alpha must be positive");
  if (a.steps == 1 && a.min != a.max) {
    throw UsageError("alpha range with one step needs min == max");
  }
  if (a.steps > 1 && !(a.min < a.max)) throw UsageError("alpha range needs min < max");
  const std::size_t cap = quad::kMaxRuleSize;
  if (config.n_lhs < 1 || config.n_lhs > cap) {
    throw UsageError("n-lhs must be in [1, " + std::to_string(cap) + "]");
  }
  if (config.n_rhs < 2 || config.n_rhs > cap) {
    throw UsageError("n-rhs must be in [2, " + std::to_string(cap) + "]");
  }
  if (!(config.tol > 0.0) || !std::isfinite(config.tol)) throw UsageError("tol must be positive");
  if (config.workers < 1) throw UsageError("workers must be at least 1");
  if (config.emit_plot && config.output_path.empty()) {
    throw UsageError("--plot needs --out (the plot files are named after it)");
  }
}

RunConfig parse_config(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"whdet"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return parse_config(static_cast<int>(argv.size()), argv.data());
}

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Wiener-Hopf determinants of the sinh-sine kernel"};
  app.name("whdet");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string command;
  std::string g_text = "1";
  std::string alpha_text = "2";
  std::string format_text = "csv";
  RunConfig config;
  bool no_timing = false;

  app.add_option("command", command, "lhs | rhs | verify | asym | sweep")
      ->required()
      ->check(CLI::IsMember({"lhs", "rhs", "verify", "asym", "sweep"}));
  app.add_option("--g", g_text, "g, or a comma-separated list");
  app.add_option("--alpha", alpha_text, "alpha, or min:max:steps");
  app.add_option("--n-lhs", config.n_lhs, "Gauss-Legendre nodes on [0, alpha]");
  app.add_option("--n-rhs", config.n_rhs, "half-line nodes on [alpha, inf)");
  app.add_option("--tol", config.tol, "verification tolerance");
  app.add_option("--format", format_text, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", config.output_path, "output file (default: stdout)");
  app.add_flag("--plot", config.emit_plot, "also write <out>.gp and <out>.dat");
  app.add_option("--workers", config.workers, "rows computed concurrently");
  app.add_flag("--no-timing", no_timing, "leave the ms column empty");
  app.set_config("--config", "", "key=value file with the same keys as the flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  config.command = kCommands.at(command);
  config.format = kFormats.at(format_text);
  config.g = parse_g_list(g_text);
  std::sort(config.g.begin(), config.g.end());
  config.alpha = parse_alpha(alpha_text);
  config.timing = !no_timing;
  validate(config);
  return config;
}

} // namespace whdet::cli
