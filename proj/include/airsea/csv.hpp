#pragma once

// Small CSV and UTC timestamp utilities shared by the batch pipeline.
// Readers keep 1-based line numbers so schema violations can name the exact
// file, line and column.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace airsea {

// Parse "YYYY-MM-DDTHH:MM:SS" with an optional trailing 'Z' as seconds since
// the Unix epoch, UTC. Throws std::invalid_argument on malformed input.
std::int64_t parse_time_iso8601(const std::string& s);

// Inverse of parse_time_iso8601; always appends 'Z'.
std::string format_time_iso8601(std::int64_t t);

// Shortest decimal form that parses back to exactly x. Emits "inf", "-inf"
// or "nan" for the non-finite values.
std::string format_double(double x);

// Whole CSV file in memory. Lines starting with '#' are skipped, the first
// remaining line is the header. No quoting; fields must not contain commas.
class CsvTable {
 public:
  static CsvTable read_file(const std::string& path);

  const std::string& path() const { return path_; }
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return cells_.size(); }

  bool has_column(const std::string& name) const;
  // Column index; throws ParseError naming the column when absent.
  std::size_t column(const std::string& name) const;

  const std::string& cell(std::size_t row, std::size_t col) const;
  std::size_t line_number(std::size_t row) const { return lines_[row]; }

  // Typed accessors; failures throw ParseError with file, line and column.
  double as_double(std::size_t row, const std::string& col) const;
  std::int64_t as_int(std::size_t row, const std::string& col) const;
  std::int64_t as_time(std::size_t row, const std::string& col) const;

 private:
  std::string path_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<std::size_t> lines_;
  std::size_t header_line_ = 0;

  friend class CsvTableBuilder;
};

// Streams rows out with '\n' line endings; byte-for-byte deterministic for
// identical content.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header,
            const std::vector<std::string>& comments = {});
  void write_row(const std::vector<std::string>& cells);
  void close();  // flushes and throws std::runtime_error on write failure

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace airsea
