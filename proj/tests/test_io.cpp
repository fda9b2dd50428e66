#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "check_error.hpp"
#include "snmf/io.hpp"

using snmf::DenseMatrix;
using snmf::ErrorCode;
using snmf::PointsFormat;

namespace {

snmf::DataSet points(const std::string& text, PointsFormat fmt = {}) {
  std::istringstream in(text);
  return snmf::read_points(in, fmt);
}

snmf::SparseSymMatrix adjacency(const std::string& text) {
  std::istringstream in(text);
  return snmf::read_adjacency(in);
}

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const snmf::Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("read_points: plain, labeled and header") {
  const auto plain = points("0,0\n1,1\n");
  CHECK(plain.points == DenseMatrix{{0, 0}, {1, 1}});
  CHECK_FALSE(plain.labels);

  const auto labeled = points("0,0,0\n1,1,1\n", PointsFormat{true, false});
  CHECK(labeled.points == DenseMatrix{{0, 0}, {1, 1}});
  REQUIRE(labeled.labels);
  CHECK(*labeled.labels == std::vector<int>{0, 1});

  const auto header = points("x,y\n2.5, -1e-3\n\n", PointsFormat{false, true});
  CHECK(header.points == DenseMatrix{{2.5, -1e-3}});
}

TEST_CASE("read_points: errors carry line numbers") {
  CHECK(code_of([] { points("0,0\n1\n"); }) == ErrorCode::RaggedRows);
  CHECK(error_text([] { points("0,0\n1\n"); }).find("line 2") != std::string::npos);
  CHECK(code_of([] { points("0,0\n1,abc\n"); }) == ErrorCode::ParseError);
  CHECK(error_text([] { points("0,0\n0,0\n1,abc\n"); }).find("line 3") != std::string::npos);
  CHECK(code_of([] { points("0,0,x\n", PointsFormat{true, false}); }) == ErrorCode::ParseError);
  CHECK(code_of([] { points("0,inf\n"); }) == ErrorCode::NonFinite);
}

TEST_CASE("read_adjacency: mirroring and validation") {
  const auto a = adjacency("2 1\n0 1 0.5\n");
  CHECK(a.order() == 2);
  CHECK(a.at(0, 1) == 0.5);
  CHECK(a.at(1, 0) == 0.5);

  const auto both = adjacency("3 3\n0 1 0.5\n1 0 0.5\n2 2 1\n");
  CHECK(both.nnz() == 3);
  CHECK(both.at(2, 2) == 1.0);

  CHECK(code_of([] { adjacency("2 1\n0 1 -1\n"); }) == ErrorCode::NegativeWeight);
  CHECK(code_of([] { adjacency("2 2\n0 1 0.5\n1 0 0.6\n"); }) == ErrorCode::AsymmetricConflict);
  CHECK(code_of([] { adjacency("2 1\n0 2 0.5\n"); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([] { adjacency("2 2\n0 1 0.5\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { adjacency("0 1 0.5\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { adjacency(""); }) == ErrorCode::ParseError);
}

TEST_CASE("files: ingest and atomic write round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "snmf_test_io";
  std::filesystem::create_directories(dir);
  snmf::write_file_atomic(dir / "pts.csv", "0,0,1\n3,4,0\n");
  CHECK_FALSE(std::filesystem::exists(dir / "pts.csv.tmp"));
  const auto data = snmf::ingest_points(dir / "pts.csv", PointsFormat{true, false});
  CHECK(data.points == DenseMatrix{{0, 0}, {3, 4}});
  CHECK(*data.labels == std::vector<int>{1, 0});

  snmf::write_file_atomic(dir / "adj.txt", "3 2\n0 1 1\n1 2 2\n");
  CHECK(snmf::ingest_adjacency(dir / "adj.txt").at(2, 1) == 2.0);
  CHECK(code_of([&] { snmf::ingest_points(dir / "missing.csv", {}); }) == ErrorCode::IoError);

  const std::vector<int> labels{2, 0, 1};
  CHECK(snmf::format_labels(labels) == "2\n0\n1\n");
  std::filesystem::remove_all(dir);
}
