#include "artcrack/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace artcrack {

namespace {

// Uniform draw from [0, n) via 128-bit multiply-shift; deterministic across
// platforms for a given engine state.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

value_type query_width(const WorkloadSpec& spec, double selectivity) {
  const double span = static_cast<double>(domain_max(spec) - domain_min(spec) + 1);
  const auto w = static_cast<value_type>(std::llround(selectivity * span));
  return std::max<value_type>(1, w);
}

double selectivity_at(const WorkloadSpec& spec, std::size_t query_index, double fallback) {
  double sel = fallback;
  for (const auto& [from, s] : spec.selectivity_schedule) {
    if (query_index >= from) sel = s;
  }
  return sel;
}

}  // namespace

value_type domain_min(const WorkloadSpec& spec) {
  return spec.dataset == DatasetKind::even_order ? 2 : 1;
}

value_type domain_max(const WorkloadSpec& spec) {
  return spec.dataset == DatasetKind::even_order ? 2 * static_cast<value_type>(spec.n)
                                                 : static_cast<value_type>(spec.n);
}

std::vector<value_type> gen_dataset(const WorkloadSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("dataset size must be at least 1");
  std::vector<value_type> data(spec.n);
  switch (spec.dataset) {
    case DatasetKind::ordered:
      for (std::size_t i = 0; i < spec.n; ++i) data[i] = static_cast<value_type>(i + 1);
      break;
    case DatasetKind::even_order:
      for (std::size_t i = 0; i < spec.n; ++i) data[i] = static_cast<value_type>(2 * (i + 1));
      break;
    case DatasetKind::disordered: {
      for (std::size_t i = 0; i < spec.n; ++i) data[i] = static_cast<value_type>(i + 1);
      std::mt19937_64 rng(spec.seed);
      for (std::size_t i = spec.n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(bounded(rng, i + 1));
        std::swap(data[i], data[j]);
      }
      break;
    }
  }
  return data;
}

std::vector<Op> gen_ops(const WorkloadSpec& spec) {
  const bool incremental = spec.mode == WorkloadMode::one_way_incremental ||
                           spec.mode == WorkloadMode::two_way_incremental;
  if (incremental && !spec.selectivity.has_value())
    throw std::invalid_argument("incremental modes need a fixed selectivity");
  if (spec.insert_fraction < 0 || spec.delete_fraction < 0 ||
      spec.insert_fraction + spec.delete_fraction > 1.0)
    throw std::invalid_argument("update fractions must be within [0, 1]");

  const value_type dmin = domain_min(spec);
  const value_type dmax = domain_max(spec);
  const value_type span = dmax - dmin + 1;

  double insert_fraction = spec.insert_fraction;
  double delete_fraction = spec.delete_fraction;
  double base_selectivity = spec.selectivity.value_or(0.0);
  if (spec.mode == WorkloadMode::ycsb_mix) {
    // Scan-heavy mix: short range scans with a small share of fresh-key
    // inserts unless the spec overrides the ratios.
    if (insert_fraction == 0.0 && delete_fraction == 0.0) insert_fraction = 0.05;
    if (!spec.selectivity.has_value()) base_selectivity = 0.0005;
  }

  std::mt19937_64 rng(spec.seed + 0x9e3779b97f4a7c15ULL);
  std::vector<Op> ops;
  ops.reserve(spec.query_count);

  // Mode state.
  value_type next_lo = dmin;                       // one-way cursor
  value_type two_lo = 0, two_hi = 0;               // two-way bounds
  bool two_started = false;
  const value_type hot_hi = dmin + std::max<value_type>(1, span / 5) - 1;  // lowest 20%
  std::unordered_set<value_type> deleted_values;   // inserts never reuse these

  std::size_t query_index = 0;
  for (std::size_t i = 0; i < spec.query_count; ++i) {
    const double pick = unit(rng);
    if (pick < insert_fraction) {
      // Fresh key: reusing a deleted value would leave the visible state
      // dependent on flush timing, which none of the replayed engines model.
      value_type v = dmin + bounded(rng, span);
      int guard = 0;
      while (deleted_values.count(v) != 0 && guard++ < 64) v = dmin + bounded(rng, span);
      ops.push_back(Op{Op::Kind::insert, v, 0});
      continue;
    }
    if (pick < insert_fraction + delete_fraction) {
      const value_type v = dmin + bounded(rng, span);
      deleted_values.insert(v);
      ops.push_back(Op{Op::Kind::erase, v, 0});
      continue;
    }

    const double sel = selectivity_at(spec, query_index, base_selectivity);
    value_type lo = dmin;
    value_type hi = dmax;
    switch (spec.mode) {
      case WorkloadMode::random:
      case WorkloadMode::ycsb_mix: {
        if (spec.selectivity.has_value() || spec.mode == WorkloadMode::ycsb_mix) {
          const value_type w = std::min(query_width(spec, sel), span);
          lo = dmin + bounded(rng, span - w + 1);
          hi = lo + w - 1;
        } else {
          value_type a = dmin + bounded(rng, span);
          value_type b = dmin + bounded(rng, span);
          lo = std::min(a, b);
          hi = std::max(a, b);
        }
        break;
      }
      case WorkloadMode::sequential: {
        lo = dmin + static_cast<value_type>(
                        (static_cast<unsigned __int128>(span) * query_index) /
                        std::max<std::size_t>(1, spec.query_count));
        if (lo > dmax) lo = dmax;
        hi = lo + bounded(rng, dmax - lo + 1);
        break;
      }
      case WorkloadMode::distorted: {
        const value_type w = std::min(query_width(spec, sel), span);
        if (unit(rng) < 0.8) {
          lo = dmin + bounded(rng, hot_hi - dmin + 1);
          hi = std::min(lo + w - 1, hot_hi);
        } else {
          lo = dmin + bounded(rng, span - w + 1);
          hi = lo + w - 1;
        }
        break;
      }
      case WorkloadMode::two_way_incremental: {
        const value_type w = std::min(query_width(spec, sel), span);
        const value_type step = std::max<value_type>(1, w / 2);
        if (!two_started) {
          const value_type mid = dmin + span / 2;
          two_lo = mid > dmin + w / 2 ? mid - w / 2 : dmin;
          two_hi = std::min(two_lo + w - 1, dmax);
          two_started = true;
        } else {
          two_lo = two_lo > dmin + step ? two_lo - step : dmin;
          two_hi = two_hi + step < dmax ? two_hi + step : dmax;
        }
        lo = two_lo;
        hi = two_hi;
        break;
      }
      case WorkloadMode::one_way_incremental: {
        const value_type w = std::min(query_width(spec, sel), span);
        if (next_lo > dmax) next_lo = dmin;  // wrap when the domain is used up
        lo = next_lo;
        hi = std::min(lo + w - 1, dmax);
        next_lo = hi + 1;
        break;
      }
    }
    ops.push_back(Op{Op::Kind::query, lo, hi});
    ++query_index;
  }
  return ops;
}

const char* to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::ordered: return "ordered";
    case DatasetKind::disordered: return "disordered";
    case DatasetKind::even_order: return "even_order";
  }
  return "unknown";
}

const char* to_string(WorkloadMode mode) {
  switch (mode) {
    case WorkloadMode::random: return "random";
    case WorkloadMode::sequential: return "sequential";
    case WorkloadMode::distorted: return "distorted";
    case WorkloadMode::two_way_incremental: return "two_way_incremental";
    case WorkloadMode::one_way_incremental: return "one_way_incremental";
    case WorkloadMode::ycsb_mix: return "ycsb_mix";
  }
  return "unknown";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "ordered") return DatasetKind::ordered;
  if (name == "disordered") return DatasetKind::disordered;
  if (name == "even_order") return DatasetKind::even_order;
  throw std::invalid_argument("unknown dataset kind: " + name);
}

WorkloadMode workload_mode_from_string(const std::string& name) {
  if (name == "random") return WorkloadMode::random;
  if (name == "sequential") return WorkloadMode::sequential;
  if (name == "distorted") return WorkloadMode::distorted;
  if (name == "two_way_incremental") return WorkloadMode::two_way_incremental;
  if (name == "one_way_incremental") return WorkloadMode::one_way_incremental;
  if (name == "ycsb_mix") return WorkloadMode::ycsb_mix;
  throw std::invalid_argument("unknown workload mode: " + name);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::size_t, double>> parse_schedule(const std::string& text) {
  std::vector<std::pair<std::size_t, double>> schedule;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto colon = part.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("selectivity_schedule entries look like index:selectivity");
    schedule.emplace_back(std::stoull(part.substr(0, colon)), std::stod(part.substr(colon + 1)));
  }
  std::sort(schedule.begin(), schedule.end());
  return schedule;
}

}  // namespace

WorkloadSpec parse_workload_config(std::istream& in) {
  WorkloadSpec spec;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n") spec.n = std::stoull(value);
      else if (key == "dataset") spec.dataset = dataset_kind_from_string(value);
      else if (key == "mode") spec.mode = workload_mode_from_string(value);
      else if (key == "selectivity")
        spec.selectivity = value == "random" ? std::nullopt : std::optional<double>(std::stod(value));
      else if (key == "queries") spec.query_count = std::stoull(value);
      else if (key == "insert_frac") spec.insert_fraction = std::stod(value);
      else if (key == "delete_frac") spec.delete_fraction = std::stod(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "selectivity_schedule") spec.selectivity_schedule = parse_schedule(value);
      else throw std::invalid_argument("unknown key");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + " (" + key +
                                  "): " + e.what());
    }
  }
  return spec;
}

WorkloadSpec load_workload_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return parse_workload_config(in);
}

void write_workload_config(const WorkloadSpec& spec, std::ostream& out) {
  out << "n = " << spec.n << "\n";
  out << "dataset = " << to_string(spec.dataset) << "\n";
  out << "mode = " << to_string(spec.mode) << "\n";
  if (spec.selectivity.has_value()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", *spec.selectivity);
    out << "selectivity = " << buf << "\n";
  } else {
    out << "selectivity = random\n";
  }
  out << "queries = " << spec.query_count << "\n";
  if (spec.insert_fraction != 0) out << "insert_frac = " << spec.insert_fraction << "\n";
  if (spec.delete_fraction != 0) out << "delete_frac = " << spec.delete_fraction << "\n";
  out << "seed = " << spec.seed << "\n";
  if (!spec.selectivity_schedule.empty()) {
    out << "selectivity_schedule = ";
    for (std::size_t i = 0; i < spec.selectivity_schedule.size(); ++i) {
      if (i) out << ",";
      out << spec.selectivity_schedule[i].first << ":" << spec.selectivity_schedule[i].second;
    }
    out << "\n";
  }
}

std::string format_ops(const std::vector<Op>& ops) {
  std::string out;
  for (const Op& op : ops) {
    switch (op.kind) {
      case Op::Kind::query:
        out += "q " + std::to_string(op.lo) + " " + std::to_string(op.hi) + "\n";
        break;
      case Op::Kind::insert:
        out += "i " + std::to_string(op.lo) + "\n";
        break;
      case Op::Kind::erase:
        out += "d " + std::to_string(op.lo) + "\n";
        break;
    }
  }
  return out;
}

}  // namespace artcrack
