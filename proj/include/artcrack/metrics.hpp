#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace artcrack {

// One row per executed operation. Space is reported as the tree key count
// plus a byte figure estimated from the node-kind census; exact heap
// accounting is platform-dependent. Phase times sum to the total up to
// measurement overhead.
struct MetricsRecord {
  std::size_t query_index = 0;
  std::uint64_t init_ns = 0;
  std::uint64_t art_ns = 0;
  std::uint64_t crack_ns = 0;
  std::uint64_t finish_ns = 0;
  std::uint64_t total_ns = 0;
  std::uint64_t cumulative_ns = 0;
  std::size_t result_size = 0;
  double building_rate = 0.0;
  std::size_t art_key_count = 0;
  std::size_t piece_count = 0;
  std::size_t movements = 0;
  std::size_t art_bytes_estimate = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

extern const char* const kMetricsCsvHeader;

// One header row plus one row per record, stable column order, deterministic
// formatting (doubles carry max_digits10 so a parse round-trips exactly).
void emit_csv(std::span<const MetricsRecord> records, std::ostream& out);
// Throws std::runtime_error when the destination cannot be written.
void emit_csv(std::span<const MetricsRecord> records, const std::string& path);

std::vector<MetricsRecord> parse_csv(std::istream& in);
std::vector<MetricsRecord> parse_csv_file(const std::string& path);

}  // namespace artcrack
