#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace softgpi::csv {

/// Numeric CSV table: one header row of column names, then rows of doubles.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parses CSV text. Blank lines are skipped. Throws FormatError when the
/// header differs from `expected_header` (if non-empty), when a row has the
/// wrong arity, or when a field is not a number.
Table parse(const std::string& text, const std::vector<std::string>& expected_header = {});

/// Reads and parses a file. Throws FileError if it cannot be opened.
Table read(const std::filesystem::path& path,
           const std::vector<std::string>& expected_header = {});

std::vector<std::string> split(const std::string& line, char sep = ',');

}  // namespace softgpi::csv
