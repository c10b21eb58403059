#include "covsel/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "covsel/error.hpp"

namespace covsel::io {
namespace {

bool skippable(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '#';
}

double parse_double(std::string_view token, std::size_t line_no) {
  double v = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": not a number: '" + std::string(token) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view token, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": not an index: '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream s(line);
  std::vector<std::string> out;
  std::string t;
  while (s >> t) out.push_back(t);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error(Errc::Io, "cannot format number");
  return std::string(buf, ptr);
}

Matrix parse_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::vector<double> row;
    for (const auto& t : tokens(line)) row.push_back(parse_double(t, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(rows.front().size()) + " columns, got " +
                                   std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

Matrix read_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_matrix(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void format_matrix(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  format_matrix(out, m);
}

std::vector<PairBlock> parse_blocks(std::istream& in) {
  std::vector<PairBlock> blocks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto t = tokens(line);
    PairBlock block;
    block.radius = parse_double(t.front(), line_no);
    for (std::size_t p = 1; p < t.size(); ++p) {
      const auto comma = t[p].find(',');
      if (comma == std::string::npos) {
        throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": pair '" + t[p] + "' is not i,j");
      }
      const std::string_view tok(t[p]);
      block.pairs.emplace_back(parse_index(tok.substr(0, comma), line_no), parse_index(tok.substr(comma + 1), line_no));
      if (block.pairs.back().first == block.pairs.back().second) {
        throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": diagonal pair '" + t[p] + "'");
      }
    }
    if (block.pairs.empty()) throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": block has no pairs");
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<PairBlock> read_blocks(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_blocks(in);
}

void write_blocks(const std::filesystem::path& path, const std::vector<PairBlock>& blocks) {
  auto out = open_out(path);
  for (const auto& b : blocks) {
    out << format_double(b.radius);
    for (const auto& e : b.pairs) out << ' ' << e.first << ',' << e.second;
    out << '\n';
  }
}

std::vector<std::vector<std::size_t>> parse_groups(std::istream& in) {
  std::vector<std::vector<std::size_t>> groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::vector<std::size_t> group;
    for (const auto& t : tokens(line)) group.push_back(parse_index(t, line_no));
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<std::vector<std::size_t>> read_groups(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_groups(in);
}

void write_groups(const std::filesystem::path& path, const std::vector<std::vector<std::size_t>>& groups) {
  auto out = open_out(path);
  for (const auto& g : groups) {
    for (std::size_t p = 0; p < g.size(); ++p) out << (p ? " " : "") << g[p];
    out << '\n';
  }
}

std::vector<std::string> read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    const auto first = line.find_first_not_of(" \t\r");
    const auto last = line.find_last_not_of(" \t\r");
    labels.push_back(line.substr(first, last - first + 1));
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<std::string>& labels) {
  auto out = open_out(path);
  for (const auto& l : labels) out << l << '\n';
}

void write_edges(const std::filesystem::path& path, const PrecisionEstimate& estimate) {
  auto out = open_out(path);
  for (const auto& e : estimate.edges) {
    out << e.first << ' ' << e.second << ' ' << format_double(estimate.k(e.first, e.second)) << '\n';
  }
}

GaussianModel read_model(const std::filesystem::path& path) {
  const Matrix m = read_matrix(path);
  const std::size_t n = m.cols();
  if (m.rows() != n + 1) {
    throw Error(Errc::Parse, path.string() + ": model file needs 1 mean row plus " + std::to_string(n) + " rows");
  }
  GaussianModel model;
  model.mean.assign(m.row(0).begin(), m.row(0).end());
  model.precision.k = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(m.row(i + 1).begin(), m.row(i + 1).end(), model.precision.k.row(i).begin());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (model.precision.k(i, j) != 0.0) model.precision.edges.emplace_back(i, j);
    }
  }
  return model;
}

void write_model(const std::filesystem::path& path, const GaussianModel& model) {
  const std::size_t n = model.n();
  Matrix m(n + 1, n);
  std::copy(model.mean.begin(), model.mean.end(), m.row(0).begin());
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(model.precision.k.row(i).begin(), model.precision.k.row(i).end(), m.row(i + 1).begin());
  }
  write_matrix(path, m);
}

}  // namespace covsel::io
