#include "admmlab/result_table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace admmlab {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

long long parse_count(const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad integer field '" + text + "'");
  }
  return v;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string to_string(RowSource s) {
  switch (s) {
    case RowSource::Empirical:
      return "empirical";
    case RowSource::Prediction:
      return "prediction";
    case RowSource::Error:
      return "error";
  }
  return "error";
}

RowSource row_source_from_string(const std::string& name) {
  if (name == "empirical") return RowSource::Empirical;
  if (name == "prediction") return RowSource::Prediction;
  if (name == "error") return RowSource::Error;
  throw std::invalid_argument("unknown row source '" + name + "'");
}

std::vector<ResultRow> ResultTable::select(RowSource source) const {
  std::vector<ResultRow> out;
  for (const auto& r : rows) {
    if (r.source == source) out.push_back(r);
  }
  return out;
}

bool ResultTable::has(RowSource source) const {
  for (const auto& r : rows) {
    if (r.source == source) return true;
  }
  return false;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan" || text.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number '" + text + "'");
  }
  return v;
}

void write_csv(std::ostream& out, const ResultTable& table) {
  out << kResultHeader << '\n';
  for (const auto& r : table.rows) {
    out << to_string(r.source) << ',' << r.k << ',' << format_double(r.mse_mean) << ','
        << format_double(r.mse_stderr) << ',' << format_double(r.ser_mean) << ','
        << format_double(r.ser_stderr) << ',' << format_double(r.alpha_star) << ','
        << format_double(r.beta_star) << ',' << r.particles << ',' << r.trials << '\n';
  }
}

ResultTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("result CSV: missing header");
  strip_cr(line);
  if (line != kResultHeader) throw std::invalid_argument("result CSV: unexpected header");
  ResultTable table;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw std::invalid_argument("result CSV: expected 10 fields");
    ResultRow r;
    r.source = row_source_from_string(f[0]);
    r.k = static_cast<int>(parse_count(f[1]));
    r.mse_mean = parse_double(f[2]);
    r.mse_stderr = parse_double(f[3]);
    r.ser_mean = parse_double(f[4]);
    r.ser_stderr = parse_double(f[5]);
    r.alpha_star = parse_double(f[6]);
    r.beta_star = parse_double(f[7]);
    r.particles = parse_count(f[8]);
    r.trials = parse_count(f[9]);
    table.rows.push_back(r);
  }
  return table;
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfRow>& rows) {
  out << kCdfHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.grid_point) << ',' << format_double(r.cdf_empirical)
        << ',' << format_double(r.cdf_predicted) << '\n';
  }
}

std::vector<CdfRow> read_cdf_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("CDF CSV: missing header");
  strip_cr(line);
  if (line != kCdfHeader) throw std::invalid_argument("CDF CSV: unexpected header");
  std::vector<CdfRow> rows;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) throw std::invalid_argument("CDF CSV: expected 4 fields");
    rows.push_back({static_cast<int>(parse_count(f[0])), parse_double(f[1]), parse_double(f[2]),
                    parse_double(f[3])});
  }
  return rows;
}

bool same_values(const ResultTable& a, const ResultTable& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.source != y.source || x.k != y.k || x.particles != y.particles || x.trials != y.trials) {
      return false;
    }
    if (!same(x.mse_mean, y.mse_mean) || !same(x.mse_stderr, y.mse_stderr) ||
        !same(x.ser_mean, y.ser_mean) || !same(x.ser_stderr, y.ser_stderr) ||
        !same(x.alpha_star, y.alpha_star) || !same(x.beta_star, y.beta_star)) {
      return false;
    }
  }
  return true;
}

}  // namespace admmlab
