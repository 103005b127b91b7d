#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "whdet/cli.hpp"

namespace whdet::cli {
namespace {

std::string format_real(const std::optional<double>& v) {
  if (!v) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string format_count(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string{};
}

template <class T>
nlohmann::json to_json_value(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> from_json_value(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw Error(std::string("table row is missing field '") + key + "'");
  const nlohmann::json& v = obj.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

void require_rows(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw Error("refusing to write an empty table");
}

} // namespace

void write_table(const std::vector<SweepRow>& rows, Format format, std::ostream& out) {
  require_rows(rows);
  if (format == Format::csv) {
    out << kCsvHeader << '\n';
    for (const SweepRow& r : rows) {
      out << format_real(r.g) << ',' << format_real(r.alpha) << ',' << format_real(r.lhs) << ','
          << format_real(r.rhs) << ',' << format_real(r.Z) << ',' << format_real(r.c) << ','
          << format_real(r.rhs_det) << ',' << format_real(r.asym) << ','
          << format_real(r.rel_disc) << ',' << format_count(r.n_lhs) << ','
          << format_count(r.n_rhs) << ',' << format_real(r.ms) << '\n';
    }
    return;
  }
  nlohmann::json array = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json obj;
    obj["g"] = r.g;
    obj["alpha"] = r.alpha;
    obj["lhs"] = to_json_value(r.lhs);
    obj["rhs"] = to_json_value(r.rhs);
    obj["Z"] = to_json_value(r.Z);
    obj["c"] = to_json_value(r.c);
    obj["rhs_det"] = to_json_value(r.rhs_det);
    obj["asym"] = to_json_value(r.asym);
    obj["rel_disc"] = to_json_value(r.rel_disc);
    obj["n_lhs"] = to_json_value(r.n_lhs);
    obj["n_rhs"] = to_json_value(r.n_rhs);
    obj["ms"] = to_json_value(r.ms);
    if (r.failed()) obj["error"] = r.error;
    array.push_back(std::move(obj));
  }
  out << array.dump(2) << '\n';
}

void emit_table(const std::vector<SweepRow>& rows, Format format, const std::string& path) {
  require_rows(rows);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  write_table(rows, format, file);
  file.flush();
  if (!file) throw Error("write to '" + path + "' failed");
}

std::vector<SweepRow> read_table_json(const std::string& text) {
  nlohmann::json array;
  try {
    array = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("table is not valid JSON: ") + e.what());
  }
  if (!array.is_array()) throw Error("table JSON must be an array of rows");
  std::vector<SweepRow> rows;
  try {
    for (const nlohmann::json& obj : array) {
      SweepRow r;
      r.g = obj.at("g").get<double>();
      r.alpha = obj.at("alpha").get<double>();
      r.lhs = from_json_value<double>(obj, "lhs");
      r.rhs = from_json_value<double>(obj, "rhs");
      r.Z = from_json_value<double>(obj, "Z");
      r.c = from_json_value<double>(obj, "c");
      r.rhs_det = from_json_value<double>(obj, "rhs_det");
      r.asym = from_json_value<double>(obj, "asym");
      r.rel_disc = from_json_value<double>(obj, "rel_disc");
      r.n_lhs = from_json_value<std::size_t>(obj, "n_lhs");
      r.n_rhs = from_json_value<std::size_t>(obj, "n_rhs");
      r.ms = from_json_value<double>(obj, "ms");
      if (obj.contains("error")) r.error = obj.at("error").get<std::string>();
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed table row: ") + e.what());
  }
  return rows;
}

void emit_plot(const std::vector<SweepRow>& rows, const std::string& stem) {
  const std::string data_path = stem + ".dat";
  const std::string script_path = stem + ".gp";

  // One gnuplot data block per g.
  std::map<double, std::vector<const SweepRow*>> by_g;
  for (const SweepRow& r : rows) {
    if (r.failed() || !r.Z || !r.c) continue;
    if (!r.lhs && !r.rhs) continue;
    by_g[r.g].push_back(&r);
  }
  if (by_g.empty()) throw Error("no rows with determinant values to plot");

  std::ofstream data(data_path, std::ios::binary);
  if (!data) throw Error("cannot open '" + data_path + "' for writing");
  data << "# alpha  -ln(det)  -c*alpha-ln(Z)  refined\n";
  bool first = true;
  for (const auto& [g, block] : by_g) {
    if (!first) data << "\n\n";
    first = false;
    data << "# g = " << format_real(g) << '\n';
    for (const SweepRow* r : block) {
      const double det = r->lhs ? *r->lhs : *r->rhs;
      const double line = -*r->c * r->alpha - std::log(*r->Z);
      const double refined =
          (r->asym && *r->asym > 0.0) ? line - std::log(*r->asym) : std::nan("");
      data << format_real(r->alpha) << ' ' << format_real(-std::log(det)) << ' '
           << format_real(line) << ' ' << format_real(refined) << '\n';
    }
  }
  data.flush();
  if (!data) throw Error("write to '" + data_path + "' failed");

  std::ofstream script(script_path, std::ios::binary);
  if (!script) throw Error("cannot open '" + script_path + "' for writing");
  script << "set xlabel 'alpha'\n"
         << "set ylabel '-ln det(I - K)'\n"
         << "set key left top\n"
         << "set datafile missing 'nan'\n"
         << "plot \\\n";
  std::size_t index = 0;
  for (const auto& [g, block] : by_g) {
    const std::string tag = "g=" + format_real(g);
    script << "  '" << data_path << "' index " << index << " using 1:2 with points title '"
           << tag << " det', \\\n"
           << "  '" << data_path << "' index " << index << " using 1:3 with lines dt 2 title '"
           << tag << " -c alpha - ln Z', \\\n"
           << "  '" << data_path << "' index " << index << " using 1:4 with lines title '" << tag
           << " refined'";
    ++index;
    script << (index < by_g.size() ? ", \\\n" : "\n");
  }
  script << "pause mouse close\n";
  script.flush();
  if (!script) throw Error("write to '" + script_path + "' failed");
}

} // namespace whdet::cli
