#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace admmlab {

enum class RowSource { Empirical, Prediction, Error };

std::string to_string(RowSource s);
RowSource row_source_from_string(const std::string& name);

struct ResultRow {
  RowSource source = RowSource::Empirical;
  int k = 0;
  double mse_mean = 0.0;
  double mse_stderr = 0.0;
  double ser_mean = 0.0;
  double ser_stderr = 0.0;
  double alpha_star = 0.0;
  double beta_star = 0.0;
  long long particles = 0;
  long long trials = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  std::vector<ResultRow> select(RowSource source) const;
  bool has(RowSource source) const;
};

struct CdfRow {
  int k = 0;
  double grid_point = 0.0;
  double cdf_empirical = 0.0;
  double cdf_predicted = 0.0;

  friend bool operator==(const CdfRow&, const CdfRow&) = default;
};

inline constexpr const char* kResultHeader =
    "source,k,mse_mean,mse_stderr,ser_mean,ser_stderr,alpha_star,beta_star,particles,trials";
inline constexpr const char* kCdfHeader = "k,grid_point,cdf_empirical,cdf_predicted";

/// Shortest text that parses back to the same double; NaN as "nan".
std::string format_double(double v);
double parse_double(const std::string& text);

void write_csv(std::ostream& out, const ResultTable& table);
ResultTable read_csv(std::istream& in);
void write_cdf_csv(std::ostream& out, const std::vector<CdfRow>& rows);
std::vector<CdfRow> read_cdf_csv(std::istream& in);

/// NaN compares equal to NaN.
bool same_values(const ResultTable& a, const ResultTable& b);

}  // namespace admmlab
