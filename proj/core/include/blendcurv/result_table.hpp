#pragma once

#include <string>
#include <vector>

namespace blendcurv {

struct ResultRow {
  std::string quantity;
  double value = 0.0;
  double error = 0.0;   // non-negative error estimate
  std::string verdict;  // positive | zero | negative | pass | fail | sample
  std::string anchor;   // row family tag
};

struct ResultTable {
  std::vector<ResultRow> rows;
  void add(std::string quantity, double value, double error,
           std::string verdict, std::string anchor);
};

enum class OutputFormat { csv, json };

/// CSV with header `quantity,value,error,verdict,anchor`; values printed
/// with 17 significant digits; newline-terminated rows.
void emit(const ResultTable& table, OutputFormat format,
          const std::string& path);

std::string render(const ResultTable& table, OutputFormat format);

}  // namespace blendcurv
