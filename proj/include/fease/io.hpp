#pragma once

#include "fease/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fease::io {

/// One parsed CSV record; fields are unquoted and unescaped.
using CsvRow = std::vector<std::string>;

/// RFC-4180-ish CSV: quoted fields, doubled quotes, configurable delimiter.
/// Rows that fail to parse are returned as empty vectors so callers can count
/// them against the malformed-line budget.
std::vector<CsvRow> readCsv(const std::filesystem::path& path, char delimiter = ',');

CsvRow splitCsvLine(const std::string& line, char delimiter = ',');

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& content);

/// Sparse binary matrix as text triplets: header "rows cols nnz", then one
/// "row col" pair per line in row-major order.
void writeTripletMatrix(const std::filesystem::path& path, const SpMatrix& m);
SpMatrix readTripletMatrix(const std::filesystem::path& path);

/// Deterministic 64-bit FNV-1a, hex-encoded; used to fingerprint configs.
std::string fnvHash(const std::string& text);

/// Fixed 6-significant-digit rendering for report output.
std::string formatMetric(double v);

}  // namespace fease::io
