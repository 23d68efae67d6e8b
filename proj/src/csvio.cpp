#include "gradfit/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gradfit {

namespace {

std::string format_with(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, x);
  return buf;
}

}  // namespace

std::string format_full(double x) { return format_with("%.17g", x); }

std::string format_short(double x) { return format_with("%.6g", x); }

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& columns,
                     std::uint64_t config_hash, std::uint64_t seed)
    : path_(std::move(path)), columns_(columns), config_hash_(config_hash), seed_(seed) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("row width does not match header");
  }
  rows_.push_back(cells);
}

void CsvWriter::write() const {
  std::ofstream out(path_);
  if (!out) throw std::runtime_error("cannot open " + path_);
  out << "# config_hash=" << hash_hex(config_hash_) << " seed=" << seed_ << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  }
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path_);
}

void write_series(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y, std::uint64_t config_hash,
                  std::uint64_t seed) {
  if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# config_hash=" << hash_hex(config_hash) << " seed=" << seed << "\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_full(x[i]) << " " << format_full(y[i]) << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace gradfit
