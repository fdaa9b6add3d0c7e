#pragma once

#include <string>
#include <vector>

#include "hdgmm/inference.hpp"
#include "hdgmm/panel.hpp"
#include "hdgmm/simulate.hpp"

namespace hdgmm {

enum class OutputFormat { csv, json, markdown };

OutputFormat parse_format(const std::string& name);

/// CSV with a header row; floats serialized with 17 significant digits so
/// round-trips are lossless. Parse errors carry 1-based line numbers.
void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::string& column_prefix);
void write_vector_csv(const std::string& path, const Vector& v,
                      const std::string& column_name);

Matrix read_matrix_csv(const std::string& path);
Vector read_vector_csv(const std::string& path);

/// Long-format balanced panel: header unit,period,y,x_1..x_K. Periods must
/// be 1..T for every unit.
PanelData read_panel_csv(const std::string& path);

std::string format_summary(const SummaryTable& table, OutputFormat format);

/// Per-coordinate inference table: j, beta_hat, b_hat, se, t, ci bounds.
std::string format_inference(const Vector& beta_hat,
                             const InferenceResult& result,
                             OutputFormat format);

std::string format_double(double v);  // %.17g

}  // namespace hdgmm
