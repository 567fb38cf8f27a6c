#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "artcrack/value_interval.hpp"

namespace artcrack {

enum class DatasetKind { ordered, disordered, even_order };

enum class WorkloadMode {
  random,
  sequential,
  distorted,
  two_way_incremental,
  one_way_incremental,
  ycsb_mix,
};

// Declarative experiment description. The same spec and seed always produce
// byte-identical datasets and operation streams.
struct WorkloadSpec {
  std::size_t n = 100000;
  DatasetKind dataset = DatasetKind::disordered;
  WorkloadMode mode = WorkloadMode::random;
  // Fraction of the domain each query spans; nullopt means fully random
  // bounds.
  std::optional<double> selectivity = 0.001;
  std::size_t query_count = 1000;
  double insert_fraction = 0.0;
  double delete_fraction = 0.0;
  std::uint64_t seed = 1;
  // Optional per-query selectivity breakpoints: from query index i on, use
  // the paired selectivity. Sorted by index.
  std::vector<std::pair<std::size_t, double>> selectivity_schedule;
};

struct Op {
  enum class Kind { query, insert, erase };
  Kind kind = Kind::query;
  value_type lo = 0;
  value_type hi = 0;  // queries only

  friend bool operator==(const Op&, const Op&) = default;
};

value_type domain_min(const WorkloadSpec& spec);
value_type domain_max(const WorkloadSpec& spec);

// ordered: 1..N ascending; disordered: a seeded permutation of 1..N;
// even_order: 2, 4, ..., 2N ascending. Throws when n == 0.
std::vector<value_type> gen_dataset(const WorkloadSpec& spec);

// Operation stream for the spec. Insert values are fresh keys (never a
// previously deleted one), delete values are drawn from the domain. Throws
// std::invalid_argument on unsupported combinations, e.g. an incremental
// mode with random bounds.
std::vector<Op> gen_ops(const WorkloadSpec& spec);

// Plain-text config: one "key = value" per line, '#' starts a comment.
WorkloadSpec parse_workload_config(std::istream& in);
WorkloadSpec load_workload_config(const std::string& path);
void write_workload_config(const WorkloadSpec& spec, std::ostream& out);

const char* to_string(DatasetKind kind);
const char* to_string(WorkloadMode mode);
DatasetKind dataset_kind_from_string(const std::string& name);
WorkloadMode workload_mode_from_string(const std::string& name);

// Deterministic text form of an op stream, one op per line.
std::string format_ops(const std::vector<Op>& ops);

}  // namespace artcrack
