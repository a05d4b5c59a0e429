#include "cfq/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace cfq {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void CsvFile::manifest(const std::string& key, const std::string& value) {
    manifest_.emplace_back(key, value);
}

void CsvFile::manifest(const std::string& key, double value) {
    manifest_.emplace_back(key, format_double(value));
}

void CsvFile::row(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    rows_.push_back(std::move(line));
}

void CsvFile::raw_row(std::string line) { rows_.push_back(std::move(line)); }

std::string CsvFile::render() const {
    std::string out;
    for (const auto& [k, v] : manifest_) {
        out += "# ";
        out += k;
        out += ": ";
        out += v;
        out += '\n';
    }
    out += header_;
    out += '\n';
    for (const auto& r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

void CsvFile::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << render();
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

} // namespace cfq
