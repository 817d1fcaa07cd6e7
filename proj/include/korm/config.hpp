#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "korm/core.hpp"
#include "korm/errors.hpp"

namespace korm {

enum class LogBase { two, natural };

inline const char* to_string(LogBase b) { return b == LogBase::two ? "2" : "natural"; }

inline std::optional<LogBase> parse_log_base(const std::string& s) {
  if (s == "2" || s == "two") return LogBase::two;
  if (s == "natural" || s == "e") return LogBase::natural;
  return std::nullopt;
}

inline double log_of(double n, LogBase base) {
  return base == LogBase::two ? std::log2(n) : std::log(n);
}

struct KormConfig {
  std::size_t k = 2;                 // lower bound on the facility count
  std::uint32_t score_o = 2;         // phases of stagnation before a TCO is resolved
  double gamma = 34.0;
  double beta = 34.0;
  std::size_t chunk_size_num = 500;  // raw points fed to one phase
  std::uint64_t seed = 0;
  Metric metric = Metric::squared_euclidean;
  LogBase log_base = LogBase::two;
  std::uint32_t invocation_factor = 2;
  // Stream length used inside the cost formulas. Defaults to the loaded
  // dataset size; must be supplied for unbounded inputs.
  std::optional<std::size_t> stream_length_hint;
};

inline double constraint1_lhs(double gamma, double beta) {
  return gamma + 4.0 * (1.0 + 4.0 * (beta + gamma));
}

inline double constraint1_rhs(double gamma, double beta) { return gamma * beta; }

class ValidatedConfig;
ValidatedConfig validate_config(const KormConfig& cfg,
                                std::optional<double> approximation_factor);

// Proof-of-validation wrapper: a ValidatedConfig can only be obtained through
// validate_config, so downstream code never re-checks parameter sanity.
class ValidatedConfig {
 public:
  const KormConfig& values() const { return cfg_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend ValidatedConfig validate_config(const KormConfig&, std::optional<double>);
  ValidatedConfig(KormConfig cfg, std::vector<std::string> warnings)
      : cfg_(std::move(cfg)), warnings_(std::move(warnings)) {}

  KormConfig cfg_;
  std::vector<std::string> warnings_;
};

inline ValidatedConfig validate_config(const KormConfig& cfg,
                                       std::optional<double> approximation_factor = std::nullopt) {
  if (cfg.k < 1) throw RangeError("k must be a positive integer");
  if (cfg.score_o < 1) throw RangeError("score threshold O must be a positive integer");
  if (cfg.chunk_size_num < 2) throw RangeError("chunk size Num must be at least 2");
  if (cfg.k >= cfg.chunk_size_num) throw RangeError("k must be smaller than the chunk size Num");
  if (!(cfg.gamma > 0.0)) throw RangeError("gamma must be positive");
  if (!(cfg.beta > 0.0)) throw RangeError("beta must be positive");
  if (cfg.invocation_factor < 1) throw RangeError("invocation factor must be at least 1");
  if (cfg.stream_length_hint && *cfg.stream_length_hint < 2) {
    throw RangeError("stream length hint must be at least 2");
  }

  const double lhs = constraint1_lhs(cfg.gamma, cfg.beta);
  const double rhs = constraint1_rhs(cfg.gamma, cfg.beta);
  if (!(lhs <= rhs)) {
    throw ConstraintError("gamma/beta violate gamma + 4(1 + 4(beta + gamma)) <= gamma*beta: " +
                              std::to_string(lhs) + " > " + std::to_string(rhs),
                          lhs, rhs);
  }

  std::vector<std::string> warnings;
  if (approximation_factor) {
    const double c = *approximation_factor;
    const double needed = 2.0 * c * (1.0 + cfg.gamma) + cfg.gamma;
    if (cfg.beta < needed) {
      warnings.push_back("beta = " + std::to_string(cfg.beta) +
                         " is below 2c(1+gamma)+gamma = " + std::to_string(needed) +
                         " for c = " + std::to_string(c) +
                         "; per-phase progress is not guaranteed by this margin");
    }
  }
  return ValidatedConfig(cfg, std::move(warnings));
}

// --- Per-run derived quantities -------------------------------------------

// Upper bound on the working median count: 4k(1+log n)(1+4(gamma+beta)).
inline double median_bound(std::size_t k, std::size_t n, double gamma, double beta, LogBase base) {
  return 4.0 * static_cast<double>(k) * (1.0 + log_of(static_cast<double>(n), base)) *
         (1.0 + 4.0 * (gamma + beta));
}

// Per-phase cost ceiling: 4L(1+4(gamma+beta)).
inline double cost_ceiling(double lower_bound, double gamma, double beta) {
  return 4.0 * lower_bound * (1.0 + 4.0 * (gamma + beta));
}

// Opening price of one facility in a phase with lower bound L: L/(k(1+log n)).
inline double facility_price(double lower_bound, std::size_t k, std::size_t n, LogBase base) {
  return lower_bound /
         (static_cast<double>(k) * (1.0 + log_of(static_cast<double>(n), base)));
}

// Number of independent ONLINE-FL invocations per phase:
// ceil(invocation_factor * log n), floored at 1.
inline std::size_t invocation_count(std::size_t n, std::uint32_t factor, LogBase base) {
  const double raw = static_cast<double>(factor) * log_of(static_cast<double>(n), base);
  const double up = std::ceil(raw);
  return up < 1.0 ? 1 : static_cast<std::size_t>(up);
}

}  // namespace korm
