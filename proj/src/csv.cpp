#include "airsea/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "airsea/errors.hpp"

namespace airsea {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[m - 1];
}

bool parse_fixed_uint(const std::string& s, std::size_t pos, std::size_t len,
                      unsigned& out) {
  out = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
    out = out * 10 + static_cast<unsigned>(s[i] - '0');
  }
  return true;
}

}  // namespace

std::int64_t parse_time_iso8601(const std::string& s) {
  const auto fail = [&]() {
    throw std::invalid_argument("malformed timestamp '" + s +
                                "', expected YYYY-MM-DDTHH:MM:SS[Z]");
  };
  if (s.size() != 19 && s.size() != 20) fail();
  if (s.size() == 20 && s[19] != 'Z') fail();
  unsigned y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
  if (!parse_fixed_uint(s, 0, 4, y) || s[4] != '-' ||
      !parse_fixed_uint(s, 5, 2, mo) || s[7] != '-' ||
      !parse_fixed_uint(s, 8, 2, d) || s[10] != 'T' ||
      !parse_fixed_uint(s, 11, 2, h) || s[13] != ':' ||
      !parse_fixed_uint(s, 14, 2, mi) || s[16] != ':' ||
      !parse_fixed_uint(s, 17, 2, se))
    fail();
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 ||
      mi > 59 || se > 59)
    fail();
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

std::string format_time_iso8601(std::int64_t t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned mo, d;
  civil_from_days(days, y, mo, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), mo, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>(rem / 60 % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

CsvTable CsvTable::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "", "cannot open file");

  CsvTable t;
  t.path_ = path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (t.header_.empty()) {
      t.header_ = split_line(line);
      t.header_line_ = line_no;
      continue;
    }
    auto cells = split_line(line);
    if (cells.size() != t.header_.size())
      throw ParseError(path, line_no, "",
                       "expected " + std::to_string(t.header_.size()) +
                           " fields, got " + std::to_string(cells.size()));
    t.cells_.push_back(std::move(cells));
    t.lines_.push_back(line_no);
  }
  if (t.header_.empty())
    throw ParseError(path, line_no, "", "missing header line");
  return t;
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header_)
    if (h == name) return true;
  return false;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  throw ParseError(path_, header_line_, name, "column not present");
}

const std::string& CsvTable::cell(std::size_t row, std::size_t col) const {
  return cells_[row][col];
}

double CsvTable::as_double(std::size_t row, const std::string& col) const {
  const std::string& s = cells_[row][column(col)];
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError(path_, lines_[row], col, "not a number: '" + s + "'");
  return v;
}

std::int64_t CsvTable::as_int(std::size_t row, const std::string& col) const {
  const std::string& s = cells_[row][column(col)];
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError(path_, lines_[row], col, "not an integer: '" + s + "'");
  return v;
}

std::int64_t CsvTable::as_time(std::size_t row, const std::string& col) const {
  const std::string& s = cells_[row][column(col)];
  try {
    return parse_time_iso8601(s);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path_, lines_[row], col, e.what());
  }
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::string>& comments)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const auto& c : comments) out_ << "# " << c << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::runtime_error("row width mismatch writing '" + path_ + "'");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw std::runtime_error("write to '" + path_ + "' failed");
  out_.close();
}

}  // namespace airsea
