#include "fease/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fease::io {

CsvRow splitCsvLine(const std::string& line, char delimiter) {
    CsvRow fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    if (quoted) return {};  // unterminated quote: malformed
    return fields;
}

std::vector<CsvRow> readCsv(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::vector<CsvRow> rows;
    std::string line;
    while (std::getline(in, line)) rows.push_back(splitCsvLine(line, delimiter));
    return rows;
}

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void writeFile(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << content;
}

void writeTripletMatrix(const std::filesystem::path& path, const SpMatrix& m) {
    std::ostringstream out;
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SpMatrix::InnerIterator it(m, r); it; ++it)
            out << it.row() << ' ' << it.col() << '\n';
    writeFile(path, out.str());
}

SpMatrix readTripletMatrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    Index rows = 0, cols = 0;
    std::size_t nnz = 0;
    if (!(in >> rows >> cols >> nnz))
        throw ConfigError("bad triplet header in " + path.string());
    std::vector<Triplet> trips;
    trips.reserve(nnz);
    Index r = 0, c = 0;
    for (std::size_t i = 0; i < nnz; ++i) {
        if (!(in >> r >> c)) throw ConfigError("truncated triplet file " + path.string());
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw ConfigError("triplet out of range in " + path.string());
        trips.emplace_back(r, c, 1.0);
    }
    SpMatrix m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

std::string fnvHash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string formatMetric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace fease::io
