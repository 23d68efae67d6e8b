#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gradfit {

/// Round-trip-exact decimal for doubles (17 significant digits).
std::string format_full(double x);
/// Summary-table format (6 significant digits).
std::string format_short(double x);

/// FNV-1a 64-bit, used to stamp output files with a config fingerprint.
std::uint64_t fnv1a_hash(const std::string& text);
std::string hash_hex(std::uint64_t h);

/// CSV writer: one comment line `# config_hash=<hex> seed=<n>`, a header row,
/// then data rows. All numeric cells are preformatted strings.
class CsvWriter {
 public:
  CsvWriter(std::string path, const std::vector<std::string>& columns,
            std::uint64_t config_hash, std::uint64_t seed);
  void add_row(const std::vector<std::string>& cells);
  /// Writes the file; throws std::runtime_error on I/O failure.
  void write() const;

 private:
  std::string path_;
  std::vector<std::string> columns_;
  std::uint64_t config_hash_;
  std::uint64_t seed_;
  std::vector<std::vector<std::string>> rows_;
};

/// Two-column series file (x y per line) for plot data.
void write_series(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y, std::uint64_t config_hash,
                  std::uint64_t seed);

}  // namespace gradfit
