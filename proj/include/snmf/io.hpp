#ifndef SNMF_IO_HPP
#define SNMF_IO_HPP

#include <filesystem>
#include <istream>
#include <span>
#include <string>

#include "snmf/graph.hpp"
#include "snmf/linalg.hpp"

namespace snmf {

struct PointsFormat {
  bool labeled = false;     // last column holds an integer gold label
  bool has_header = false;  // skip the first line
};

// Rows of `f1,f2,...,fm[,label]`. Blank lines are ignored. Errors carry the
// 1-based line number.
DataSet read_points(std::istream& in, const PointsFormat& fmt);
DataSet ingest_points(const std::filesystem::path& path, const PointsFormat& fmt);

// Header `n nnz`, then nnz lines `i j value` with 0-based indices. Each entry
// is mirrored to (j, i); an entry given for both orientations with different
// values is an AsymmetricConflict.
SparseSymMatrix read_adjacency(std::istream& in);
SparseSymMatrix ingest_adjacency(const std::filesystem::path& path);

// One integer label per line, no header.
std::string format_labels(std::span<const int> labels);

// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace snmf

#endif  // SNMF_IO_HPP
