#include "artcrack/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace artcrack {

const char* const kMetricsCsvHeader =
    "query_index,init_ns,art_ns,crack_ns,finish_ns,total_ns,cumulative_ns,"
    "result_size,building_rate,art_key_count,piece_count,movements,art_bytes_estimate";

void emit_csv(std::span<const MetricsRecord> records, std::ostream& out) {
  out << kMetricsCsvHeader << "\n";
  char rate[64];
  for (const MetricsRecord& r : records) {
    std::snprintf(rate, sizeof(rate), "%.17g", r.building_rate);
    out << r.query_index << ',' << r.init_ns << ',' << r.art_ns << ',' << r.crack_ns << ','
        << r.finish_ns << ',' << r.total_ns << ',' << r.cumulative_ns << ',' << r.result_size
        << ',' << rate << ',' << r.art_key_count << ',' << r.piece_count << ',' << r.movements
        << ',' << r.art_bytes_estimate << "\n";
  }
}

void emit_csv(std::span<const MetricsRecord> records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics to " + path);
  emit_csv(records, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<MetricsRecord> parse_csv(std::istream& in) {
  std::vector<MetricsRecord> records;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("metrics CSV is empty");
  if (line != kMetricsCsvHeader) throw std::runtime_error("unexpected metrics CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    MetricsRecord r;
    auto next = [&]() -> std::string {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("truncated metrics CSV row");
      return field;
    };
    r.query_index = std::stoull(next());
    r.init_ns = std::stoull(next());
    r.art_ns = std::stoull(next());
    r.crack_ns = std::stoull(next());
    r.finish_ns = std::stoull(next());
    r.total_ns = std::stoull(next());
    r.cumulative_ns = std::stoull(next());
    r.result_size = std::stoull(next());
    r.building_rate = std::stod(next());
    r.art_key_count = std::stoull(next());
    r.piece_count = std::stoull(next());
    r.movements = std::stoull(next());
    r.art_bytes_estimate = std::stoull(next());
    records.push_back(r);
  }
  return records;
}

std::vector<MetricsRecord> parse_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics CSV: " + path);
  return parse_csv(in);
}

}  // namespace artcrack
