#include <doctest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "covsel/error.hpp"
#include "covsel/io.hpp"

using namespace covsel;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const char* name) {
  const fs::path p = fs::path(COVSEL_TEST_TMP) / "io" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Errc parse_error_code(const std::string& text) {
  std::istringstream in(text);
  try {
    io::parse_matrix(in);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("format_double round-trips bit-exactly") {
  std::mt19937_64 rng(91);
  for (int i = 0; i < 20000; ++i) {
    double x = std::bit_cast<double>(rng());
    if (!std::isfinite(x)) continue;
    const std::string s = io::format_double(x);
    std::istringstream in(s);
    const Matrix m = io::parse_matrix(in);
    REQUIRE(m.size() == 1);
    CHECK(std::bit_cast<std::uint64_t>(m(0, 0)) == std::bit_cast<std::uint64_t>(x));
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-2.0) == "-2");
}

TEST_CASE("matrix files round-trip") {
  std::mt19937_64 rng(92);
  std::normal_distribution<double> z(0.0, 1e3);
  Matrix m(7, 4);
  for (double& v : m.values()) v = z(rng);
  m(0, 0) = std::numeric_limits<double>::denorm_min();
  m(0, 1) = -0.0;
  const auto dir = tmp_dir("matrix");
  io::write_matrix(dir / "m.txt", m);
  const Matrix back = io::read_matrix(dir / "m.txt");
  CHECK(back == m);
}

TEST_CASE("parse_matrix: comments, blank lines and errors") {
  std::istringstream in("# header\n1 2\n\n  3\t4  \n");
  CHECK(io::parse_matrix(in) == Matrix::from_rows({{1, 2}, {3, 4}}));
  CHECK(parse_error_code("1 2\n3\n") == Errc::Parse);
  CHECK(parse_error_code("1 x\n") == Errc::Parse);
  CHECK(parse_error_code("1,5 2\n") == Errc::Parse);
  CHECK_THROWS_AS(io::read_matrix("/nonexistent/file.txt"), Error);
}

TEST_CASE("blocks and groups") {
  std::istringstream blocks("# radius pairs\n0.5 0,1 2,0\n1.25 1,2\n");
  const auto b = io::parse_blocks(blocks);
  REQUIRE(b.size() == 2);
  CHECK(b[0].radius == 0.5);
  CHECK(b[0].pairs == std::vector<Edge>{Edge(0, 1), Edge(0, 2)});
  CHECK(b[1].pairs == std::vector<Edge>{Edge(1, 2)});

  std::istringstream diag("1.0 1,1\n");
  CHECK_THROWS_AS(io::parse_blocks(diag), Error);
  std::istringstream empty("1.0\n");
  CHECK_THROWS_AS(io::parse_blocks(empty), Error);
  std::istringstream bad("1.0 1-2\n");
  CHECK_THROWS_AS(io::parse_blocks(bad), Error);

  std::istringstream groups("0 2\n\n1 3 4\n");
  CHECK(io::parse_groups(groups) == std::vector<std::vector<std::size_t>>{{0, 2}, {1, 3, 4}});

  const auto dir = tmp_dir("blocks");
  io::write_blocks(dir / "b.txt", b);
  const auto b2 = io::read_blocks(dir / "b.txt");
  REQUIRE(b2.size() == 2);
  CHECK(b2[0].pairs == b[0].pairs);
  CHECK(b2[1].radius == b[1].radius);
  io::write_groups(dir / "g.txt", {{0, 2}, {1}});
  CHECK(io::read_groups(dir / "g.txt") == std::vector<std::vector<std::size_t>>{{0, 2}, {1}});
}

TEST_CASE("models, labels and edges") {
  const auto dir = tmp_dir("model");
  GaussianModel m;
  m.mean = {1.5, -2.0};
  m.precision.k = Matrix::from_rows({{2.0, 0.5}, {0.5, 1.0}});
  m.precision.edges = {Edge(0, 1)};
  io::write_model(dir / "model.txt", m);
  const auto back = io::read_model(dir / "model.txt");
  CHECK(back.mean == m.mean);
  CHECK(back.precision.k == m.precision.k);

  io::write_labels(dir / "labels.txt", {"a", "b b", "a"});
  CHECK(io::read_labels(dir / "labels.txt") == std::vector<std::string>{"a", "b b", "a"});

  io::write_edges(dir / "edges.txt", m.precision);
  std::ifstream f(dir / "edges.txt");
  std::string line;
  std::getline(f, line);
  CHECK(line == "0 1 0.5");
}
