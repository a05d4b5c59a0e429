#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cfq {

// Shortest round-trip decimal rendering, stable across runs.
std::string format_double(double v);

std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

// One output table: a '#'-prefixed manifest block, a single header line,
// then data rows. write() is byte-deterministic for identical inputs.
class CsvFile {
  public:
    explicit CsvFile(std::string header) : header_(std::move(header)) {}

    void manifest(const std::string& key, const std::string& value);
    void manifest(const std::string& key, double value);
    void row(const std::vector<std::string>& cells);
    void raw_row(std::string line);

    void write(const std::string& path) const;
    std::string render() const;

  private:
    std::string header_;
    std::vector<std::pair<std::string, std::string>> manifest_;
    std::vector<std::string> rows_;
};

} // namespace cfq
