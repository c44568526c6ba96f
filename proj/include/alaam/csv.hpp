#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "alaam/errors.hpp"

namespace alaam {

// Round-trip exact numeric text; non-finite values become "NA" so that the
// tables stay machine-readable.  Integral values print without an exponent.
inline std::string csv_number(double x) {
  if (!std::isfinite(x)) return "NA";
  char buf[40];
  if (x == std::floor(x) && std::fabs(x) < 1e15)
    std::snprintf(buf, sizeof buf, "%.0f", x);
  else
    std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Comma-delimited writer with LF endings.  Fields are written verbatim; the
// formats used here never contain commas or quotes.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open output file: " + path);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw Error("failed to flush output file");
  }

 private:
  std::ofstream out_;
};

}  // namespace alaam
