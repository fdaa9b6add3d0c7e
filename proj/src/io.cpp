#include "hdgmm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hdgmm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": cannot parse number '" + s + "'");
  }
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path,
                                               std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (line_no == 1) {
      if (header) *header = fields;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, path, line_no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " fields, got " +
                       std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");
  return rows;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "markdown") return OutputFormat::markdown;
  throw InvalidSpec("unknown output format '" + name + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::string& column_prefix) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  for (Index j = 0; j < m.cols(); ++j)
    out << (j ? "," : "") << column_prefix << (j + 1);
  out << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

void write_vector_csv(const std::string& path, const Vector& v,
                      const std::string& column_name) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << column_name << "\n";
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << "\n";
}

Matrix read_matrix_csv(const std::string& path) {
  const auto rows = read_csv_rows(path, nullptr);
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  check_finite(m, path.c_str());
  return m;
}

Vector read_vector_csv(const std::string& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() != 1)
    throw ParseError(path + ": expected a single column, got " +
                     std::to_string(m.cols()));
  return m.col(0);
}

PanelData read_panel_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_csv_rows(path, &header);
  if (header.size() < 3 || header[0] != "unit" || header[1] != "period" ||
      header[2] != "y")
    throw ParseError(path + ":1: header must start with unit,period,y");
  const Index K = static_cast<Index>(header.size()) - 3;

  // unit -> period -> (y, x...)
  std::map<long, std::map<long, std::vector<double>>> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const long unit = static_cast<long>(row[0]);
    const long period = static_cast<long>(row[1]);
    if (!cells[unit].emplace(period, row).second)
      throw ParseError(path + ":" + std::to_string(i + 2) +
                       ": duplicate (unit, period)");
  }

  const Index n = static_cast<Index>(cells.size());
  const Index T = static_cast<Index>(cells.begin()->second.size());
  PanelData data;
  data.y.resize(n, T);
  data.x.assign(K, Matrix(n, T));

  Index i = 0;
  for (const auto& [unit, periods] : cells) {
    if (static_cast<Index>(periods.size()) != T)
      throw ParseError(path + ": unbalanced panel, unit " +
                       std::to_string(unit) + " has " +
                       std::to_string(periods.size()) + " periods, expected " +
                       std::to_string(T));
    Index t = 0;
    for (const auto& [period, row] : periods) {
      if (period != t + 1)
        throw ParseError(path + ": unit " + std::to_string(unit) +
                         " is missing period " + std::to_string(t + 1));
      data.y(i, t) = row[2];
      for (Index k = 0; k < K; ++k) data.x[k](i, t) = row[3 + k];
      ++t;
    }
    ++i;
  }
  return data;
}

std::string format_summary(const SummaryTable& table, OutputFormat format) {
  const std::pair<const char*, double> measures[] = {
      {"size", table.size},     {"power", table.power},
      {"coverage", table.coverage}, {"length", table.length},
      {"mse", table.mse}};
  std::ostringstream out;
  switch (format) {
    case OutputFormat::csv:
      out << "measure,value\n";
      for (const auto& [name, value] : measures)
        out << name << "," << format_double(value) << "\n";
      out << "# seed=" << table.base_seed << " B=" << table.B
          << " grid_size=" << table.grid_size
          << " max_kkt_gap=" << format_double(table.max_kkt_gap)
          << " max_clime_slack_excess="
          << format_double(table.max_clime_slack_excess)
          << (table.non_canonical_beta ? " non_canonical_beta" : "") << "\n";
      break;
    case OutputFormat::json:
      out << "{\n";
      for (const auto& [name, value] : measures)
        out << "  \"" << name << "\": " << format_double(value) << ",\n";
      out << "  \"seed\": " << table.base_seed << ",\n"
          << "  \"B\": " << table.B << ",\n"
          << "  \"grid_size\": " << table.grid_size << ",\n"
          << "  \"max_kkt_gap\": " << format_double(table.max_kkt_gap)
          << ",\n"
          << "  \"max_clime_slack_excess\": "
          << format_double(table.max_clime_slack_excess) << ",\n"
          << "  \"non_canonical_beta\": "
          << (table.non_canonical_beta ? "true" : "false") << "\n}\n";
      break;
    case OutputFormat::markdown:
      out << "| measure | value |\n|---|---|\n";
      for (const auto& [name, value] : measures)
        out << "| " << name << " | " << format_double(value) << " |\n";
      out << "\nseed=" << table.base_seed << ", B=" << table.B
          << ", grid_size=" << table.grid_size << "\n";
      break;
  }
  return out.str();
}

std::string format_inference(const Vector& beta_hat,
                             const InferenceResult& result,
                             OutputFormat format) {
  std::ostringstream out;
  const Index p = beta_hat.size();
  const char* cols[] = {"j",  "beta_hat", "b_hat",    "se",
                        "t",  "ci_lower", "ci_upper"};
  auto row_values = [&](Index j) {
    return std::vector<double>{result.b_hat(j), result.se(j),
                               result.t_stats(j), result.ci_lower(j),
                               result.ci_upper(j)};
  };
  switch (format) {
    case OutputFormat::csv:
      for (int k = 0; k < 7; ++k) out << (k ? "," : "") << cols[k];
      out << "\n";
      for (Index j = 0; j < p; ++j) {
        out << (j + 1) << "," << format_double(beta_hat(j));
        for (double v : row_values(j)) out << "," << format_double(v);
        out << "\n";
      }
      break;
    case OutputFormat::json:
      out << "[\n";
      for (Index j = 0; j < p; ++j) {
        const auto vals = row_values(j);
        out << "  {\"j\": " << (j + 1)
            << ", \"beta_hat\": " << format_double(beta_hat(j))
            << ", \"b_hat\": " << format_double(vals[0])
            << ", \"se\": " << format_double(vals[1])
            << ", \"t\": " << format_double(vals[2])
            << ", \"ci_lower\": " << format_double(vals[3])
            << ", \"ci_upper\": " << format_double(vals[4]) << "}"
            << (j + 1 < p ? "," : "") << "\n";
      }
      out << "]\n";
      break;
    case OutputFormat::markdown:
      out << "| j | beta_hat | b_hat | se | t | ci_lower | ci_upper |\n"
          << "|---|---|---|---|---|---|---|\n";
      for (Index j = 0; j < p; ++j) {
        out << "| " << (j + 1) << " | " << format_double(beta_hat(j));
        for (double v : row_values(j)) out << " | " << format_double(v);
        out << " |\n";
      }
      break;
  }
  return out.str();
}

}  // namespace hdgmm
