#pragma once

// Seeded multi-type Poisson arrival traces and their line-oriented text form.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mergedpow/model.hpp"
#include "mergedpow/numfmt.hpp"
#include "mergedpow/rng.hpp"

namespace mergedpow {

struct ArrivalEvent {
  double time{0.0};
  std::size_t type{0};  // 0-based type position
  std::size_t sequence_id{0};

  friend bool operator<(const ArrivalEvent& a, const ArrivalEvent& b) {
    return std::tie(a.time, a.sequence_id) < std::tie(b.time, b.sequence_id);
  }
  friend bool operator==(const ArrivalEvent&, const ArrivalEvent&) = default;
};

struct ArrivalTrace {
  std::vector<ArrivalEvent> events;
  double horizon{0.0};
  std::vector<double> rates;
  std::uint64_t seed{0};

  std::size_t type_count() const { return rates.size(); }

  std::vector<std::size_t> counts_per_type() const {
    std::vector<std::size_t> counts(type_count(), 0);
    for (const auto& e : events) ++counts.at(e.type);
    return counts;
  }

  friend bool operator==(const ArrivalTrace&, const ArrivalTrace&) = default;
};

inline void validate_trace(const ArrivalTrace& trace) {
  require(trace.horizon > 0.0, "horizon: must be positive");
  std::vector<bool> seen;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& e = trace.events[i];
    require(e.time > 0.0 && e.time <= trace.horizon, "trace: event time outside (0, horizon]");
    require(e.type < trace.type_count(), "trace: type index out of range");
    if (i > 0) require(trace.events[i - 1] < e, "trace: events must be strictly ordered");
    if (seen.size() <= e.sequence_id) seen.resize(e.sequence_id + 1, false);
    require(!seen[e.sequence_id], "trace: duplicate sequence id");
    seen[e.sequence_id] = true;
  }
}

// Each type draws exponential gaps from its own stream (seed mixed with the
// type position), then the per-type sequences are merged by (time, sequence_id).
// Sequence ids are assigned type-major before the merge.
inline ArrivalTrace generate_trace(const std::vector<double>& rates, double horizon,
                                   std::uint64_t seed) {
  require(horizon > 0.0, "horizon: must be positive");
  for (std::size_t i = 0; i < rates.size(); ++i)
    require(rates[i] >= 0.0, "rates: rate of type " + std::to_string(i + 1) + " is negative");

  ArrivalTrace trace;
  trace.horizon = horizon;
  trace.rates = rates;
  trace.seed = seed;

  std::size_t next_id = 0;
  for (std::size_t type = 0; type < rates.size(); ++type) {
    if (rates[type] == 0.0) continue;
    Rng rng(mix_seed(seed, type));
    double t = 0.0;
    while (true) {
      t += rng.exponential(rates[type]);
      if (t > horizon) break;
      if (t <= 0.0) continue;
      trace.events.push_back({t, type, next_id++});
    }
  }
  std::sort(trace.events.begin(), trace.events.end());
  return trace;
}

// Text form: one "time,type_index" line per event in ascending order, with
// 1-based type indices. Optional leading comment lines carry metadata:
//   # horizon=<seconds>
//   # types=<count>
inline void write_trace(std::ostream& out, const ArrivalTrace& trace) {
  out << "# horizon=" << format_double(trace.horizon) << '\n';
  out << "# types=" << trace.type_count() << '\n';
  for (const auto& e : trace.events) out << format_double(e.time) << ',' << (e.type + 1) << '\n';
}

inline std::string trace_to_string(const ArrivalTrace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

// Parses the text form. Missing metadata is inferred: the horizon defaults to
// the last event time and the type count to the largest index seen.
// `type_count`, when nonzero, overrides the header and bounds the indices.
inline ArrivalTrace read_trace(std::istream& in, std::size_t type_count = 0) {
  ArrivalTrace trace;
  double horizon = 0.0;
  std::size_t header_types = 0;
  std::size_t max_type = 0;
  std::string line;
  std::size_t lineno = 0;
  double prev = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "trace line " + std::to_string(lineno);
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(" \t"));
      const std::string value = line.substr(eq + 1);
      if (key == "horizon") horizon = parse_double(value, where + " horizon");
      if (key == "types") header_types = static_cast<std::size_t>(parse_double(value, where + " types"));
      continue;
    }
    const auto comma = line.find(',');
    require(comma != std::string::npos, where + ": expected 'time,type_index'");
    const double t = parse_double(std::string_view(line).substr(0, comma), where + " time");
    const double idx = parse_double(std::string_view(line).substr(comma + 1), where + " type_index");
    require(idx >= 1.0 && idx == static_cast<double>(static_cast<std::size_t>(idx)),
            where + ": type_index must be a positive integer");
    require(t > 0.0, where + ": time must be positive");
    require(t >= prev, where + ": times must be ascending");
    prev = t;
    const auto type = static_cast<std::size_t>(idx) - 1;
    max_type = std::max(max_type, type + 1);
    trace.events.push_back({t, type, trace.events.size()});
  }
  std::size_t types = type_count ? type_count : (header_types ? header_types : max_type);
  require(max_type <= types, "trace: type_index exceeds the number of types");
  trace.rates.assign(types, 0.0);
  trace.horizon = horizon > 0.0 ? horizon : (trace.events.empty() ? 1.0 : trace.events.back().time);
  validate_trace(trace);
  return trace;
}

inline ArrivalTrace trace_from_string(const std::string& text, std::size_t type_count = 0) {
  std::istringstream is(text);
  return read_trace(is, type_count);
}

// Builds a trace from explicit (time, 0-based type) pairs; handy for fixtures.
inline ArrivalTrace make_trace(const std::vector<std::pair<double, std::size_t>>& arrivals,
                               std::size_t type_count, double horizon) {
  ArrivalTrace trace;
  trace.horizon = horizon;
  trace.rates.assign(type_count, 0.0);
  for (const auto& [t, type] : arrivals) trace.events.push_back({t, type, trace.events.size()});
  std::sort(trace.events.begin(), trace.events.end());
  validate_trace(trace);
  return trace;
}

}  // namespace mergedpow
