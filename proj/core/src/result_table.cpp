#include "blendcurv/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace blendcurv {

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void ResultTable::add(std::string quantity, double value, double error,
                      std::string verdict, std::string anchor) {
  if (!std::isfinite(value))
    throw std::invalid_argument("ResultTable: non-finite value for " + quantity);
  if (!(error >= 0.0) || !std::isfinite(error))
    throw std::invalid_argument("ResultTable: bad error estimate for " + quantity);
  for (const std::string* s : {&quantity, &verdict, &anchor})
    if (s->find_first_of(",\n\"") != std::string::npos)
      throw std::invalid_argument("ResultTable: '" + *s +
                                  "' would break the CSV layout");
  rows.push_back(ResultRow{std::move(quantity), value, error, std::move(verdict),
                           std::move(anchor)});
}

std::string render(const ResultTable& table, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::csv) {
    out += "quantity,value,error,verdict,anchor\n";
    for (const auto& r : table.rows) {
      out += r.quantity + "," + num17(r.value) + "," + num17(r.error) + "," +
             r.verdict + "," + r.anchor + "\n";
    }
    return out;
  }
  out += "[\n";
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    out += "  {\"quantity\": \"" + json_escape(r.quantity) +
           "\", \"value\": " + num17(r.value) + ", \"error\": " + num17(r.error) +
           ", \"verdict\": \"" + json_escape(r.verdict) + "\", \"anchor\": \"" +
           json_escape(r.anchor) + "\"}";
    if (i + 1 < table.rows.size()) out += ",";
    out += "\n";
  }
  out += "]\n";
  return out;
}

void emit(const ResultTable& table, OutputFormat format,
          const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
  f << render(table, format);
  f.flush();
  if (!f) throw std::runtime_error("emit: write to '" + path + "' failed");
}

}  // namespace blendcurv
