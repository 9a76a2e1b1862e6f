#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace rado {

// One iteration of a tracer. `d` is the codimension (toy) or frequency count (Z/p);
// `delta` is the Bohr width, absent for the toy.
struct StepRecord {
  std::size_t step = 0;
  std::string kase;  // "1", "2" (toy); "cd0", "cd1", "cd2" (Z/p)
  std::size_t j = 0;
  std::vector<double> s_row;
  std::size_t d = 0;
  std::optional<double> delta;
  nlohmann::json state;  // tracer-specific measurements

  nlohmann::json to_json() const {
    nlohmann::json out{{"type", "step"}, {"step", step}, {"case", kase}, {"j", j}, {"S", s_row}, {"d", d}};
    out["delta"] = delta ? nlohmann::json(*delta) : nlohmann::json(nullptr);
    out["state"] = state;
    return out;
  }
};

struct TraceOutcome {
  bool flagged = false;
  std::string kind;    // "terminated", or the flag: chain_budget, increment_budget, step_budget, hypothesis, constants
  std::string reason;
  std::size_t j = 0;
  std::uint64_t count = 0;         // Fourier count for class j
  std::uint64_t oracle_count = 0;  // enumeration
  double threshold = 0;            // count lower bound the terminating case promises
  nlohmann::json dump;             // full state when flagged

  nlohmann::json to_json() const {
    nlohmann::json out{{"type", "outcome"}, {"flagged", flagged}, {"kind", kind}};
    if (flagged) {
      out["reason"] = reason;
      out["dump"] = dump;
    } else {
      out["j"] = j;
      out["count"] = count;
      out["oracle_count"] = oracle_count;
      out["threshold"] = threshold;
    }
    return out;
  }
};

struct TraceRecord {
  std::string tracer;  // "toy" or "zp"
  nlohmann::json setup;
  std::vector<StepRecord> steps;
  TraceOutcome outcome;

  bool terminated() const { return !outcome.flagged; }

  // One JSON object per line: setup, steps, outcome.
  std::string to_ndjson() const {
    std::ostringstream os;
    nlohmann::json head{{"type", "setup"}, {"tracer", tracer}};
    head.update(setup);
    os << head.dump() << '\n';
    for (const auto& s : steps) os << s.to_json().dump() << '\n';
    os << outcome.to_json().dump() << '\n';
    return os.str();
  }

  // step,case,j,S-row,d_i,delta_i; the S-row is ';'-joined.
  std::string to_csv() const {
    std::ostringstream os;
    os << "step,case,j,S,d,delta\n";
    for (const auto& s : steps) {
      os << s.step << ',' << s.kase << ',' << s.j << ',';
      for (std::size_t k = 0; k < s.s_row.size(); ++k) os << (k ? ";" : "") << nlohmann::json(s.s_row[k]).dump();
      os << ',' << s.d << ',';
      if (s.delta) os << nlohmann::json(*s.delta).dump();
      os << '\n';
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : steps) st.push_back(s.to_json());
    return {{"tracer", tracer}, {"setup", setup}, {"steps", st}, {"outcome", outcome.to_json()}};
  }
};

// Gains of factor (1+c) starting from 1/(2r) fit below 1 at most this often.
inline std::size_t gain_bound(std::size_t r, double c) {
  return static_cast<std::size_t>(std::ceil(std::log(2.0 * static_cast<double>(r)) / std::log1p(c))) + 1;
}

}  // namespace rado
