#pragma once

// Plain-text file formats.
//
//   matrix: one row per line, whitespace-separated dot-decimal numbers;
//           written with 17 significant digits so values round-trip exactly.
//   blocks: one block per line, "radius i1,j1 i2,j2 ..." with 0-based indices.
//   groups: one group per line, space-separated 0-based variable indices.
//   labels: one label per line.
//   edges:  "i j K_ij" per line.
//   model:  a matrix file whose first row is the mean and whose remaining n
//           rows are the precision.
// Blank lines and lines starting with '#' are skipped on input.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "covsel/matrix.hpp"
#include "covsel/model.hpp"
#include "covsel/synth.hpp"

namespace covsel::io {

Matrix parse_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);
void format_matrix(std::ostream& out, const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// Shortest text that parses back to exactly `value` at 17 significant digits.
std::string format_double(double value);

std::vector<PairBlock> parse_blocks(std::istream& in);
std::vector<PairBlock> read_blocks(const std::filesystem::path& path);
void write_blocks(const std::filesystem::path& path, const std::vector<PairBlock>& blocks);

std::vector<std::vector<std::size_t>> parse_groups(std::istream& in);
std::vector<std::vector<std::size_t>> read_groups(const std::filesystem::path& path);
void write_groups(const std::filesystem::path& path,
                  const std::vector<std::vector<std::size_t>>& groups);

std::vector<std::string> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<std::string>& labels);

void write_edges(const std::filesystem::path& path, const PrecisionEstimate& estimate);

GaussianModel read_model(const std::filesystem::path& path);
void write_model(const std::filesystem::path& path, const GaussianModel& model);

}  // namespace covsel::io
