#include "snmf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace snmf {

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError,
                at_line(line) + "not a number: '" + std::string(field) + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(std::string_view field, std::size_t line, const char* what) {
  field = trim(field);
  Int value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError,
                at_line(line) + "expected " + what + ", got '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

}  // namespace

DataSet read_points(std::istream& in, const PointsFormat& fmt) {
  std::vector<double> coords;
  std::vector<int> labels;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (fmt.has_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (rows == 0) {
      width = fields.size();
      if (fmt.labeled && width < 2) {
        throw Error(ErrorCode::ParseError,
                    at_line(line_no) + "labeled rows need a feature and a label");
      }
    } else if (fields.size() != width) {
      throw Error(ErrorCode::RaggedRows, at_line(line_no) + "expected " + std::to_string(width) +
                                             " fields, got " + std::to_string(fields.size()));
    }
    const std::size_t features = fmt.labeled ? width - 1 : width;
    for (std::size_t c = 0; c < features; ++c) {
      const double v = parse_double(fields[c], line_no);
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFinite, at_line(line_no) + "non-finite coordinate");
      coords.push_back(v);
    }
    if (fmt.labeled) labels.push_back(parse_integer<int>(fields.back(), line_no, "integer label"));
    ++rows;
  }
  const std::size_t features = rows == 0 ? 0 : (fmt.labeled ? width - 1 : width);
  DataSet data{DenseMatrix(rows, features, std::move(coords)), std::nullopt};
  if (fmt.labeled) data.labels = std::move(labels);
  return data;
}

DataSet ingest_points(const std::filesystem::path& path, const PointsFormat& fmt) {
  auto in = open_input(path);
  return read_points(in, fmt);
}

SparseSymMatrix read_adjacency(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  std::size_t declared = 0;
  bool have_header = false;
  std::map<std::pair<std::size_t, std::size_t>, double> entries;
  std::size_t seen = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_ws(line);
    if (!have_header) {
      if (fields.size() != 2)
        throw Error(ErrorCode::ParseError, at_line(line_no) + "header must be 'n nnz'");
      n = parse_integer<std::size_t>(fields[0], line_no, "order n");
      declared = parse_integer<std::size_t>(fields[1], line_no, "entry count");
      have_header = true;
      continue;
    }
    if (fields.size() != 3)
      throw Error(ErrorCode::ParseError, at_line(line_no) + "expected 'i j value'");
    const auto i = parse_integer<std::size_t>(fields[0], line_no, "row index");
    const auto j = parse_integer<std::size_t>(fields[1], line_no, "column index");
    const double v = parse_double(fields[2], line_no);
    if (i >= n || j >= n) {
      throw Error(ErrorCode::IndexOutOfRange,
                  at_line(line_no) + "index out of range for n = " + std::to_string(n));
    }
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFinite, at_line(line_no) + "non-finite weight");
    if (v < 0.0) throw Error(ErrorCode::NegativeWeight, at_line(line_no) + "negative weight");
    ++seen;

    const auto key = std::minmax(i, j);
    const auto [it, inserted] = entries.emplace(key, v);
    if (!inserted && it->second != v) {
      throw Error(ErrorCode::AsymmetricConflict, at_line(line_no) + "entry (" + std::to_string(i) +
                                                     ", " + std::to_string(j) +
                                                     ") conflicts with an earlier value");
    }
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "missing 'n nnz' header");
  if (seen != declared) {
    throw Error(ErrorCode::ParseError, "header declares " + std::to_string(declared) +
                                           " entries, found " + std::to_string(seen));
  }

  std::vector<SparseSymMatrix::Triplet> triplets;
  triplets.reserve(2 * entries.size());
  for (const auto& [key, v] : entries) {
    triplets.push_back({key.first, key.second, v});
    if (key.first != key.second) triplets.push_back({key.second, key.first, v});
  }
  return SparseSymMatrix::from_triplets(n, std::move(triplets));
}

SparseSymMatrix ingest_adjacency(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_adjacency(in);
}

std::string format_labels(std::span<const int> labels) {
  std::string out;
  out.reserve(labels.size() * 3);
  for (int v : labels) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "rename " + tmp.string() + ": " + ec.message());
}

}  // namespace snmf
