// Test-side oracles, independent of the library's internal bookkeeping.
#pragma once

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "korm/core.hpp"
#include "korm/online_fl.hpp"
#include "korm/rng.hpp"

namespace oracles {

// Plain re-implementation of the ONLINE-FL decision rule, mirroring the
// documented draw discipline (no draw for the first point, exactly one
// uniform draw per later point).
struct SimFacility {
  korm::Point location;
  double weight = 0.0;
  std::int64_t source_id = -1;
};

struct SimResult {
  std::vector<SimFacility> facilities;
  double service = 0.0;
  double opening = 0.0;
  std::size_t consumed = 0;
  korm::HaltReason halt = korm::HaltReason::exhausted;
};

inline SimResult simulate_online_fl(std::span<const korm::WeightedItem> items, double f,
                                    korm::RngStream rng, const korm::StopCondition& stop,
                                    korm::Metric metric) {
  SimResult r;
  for (const auto& item : items) {
    if (r.facilities.empty()) {
      r.facilities.push_back({item.location, item.weight, item.carried_id});
      r.opening += f;
      ++r.consumed;
    } else {
      std::size_t best = 0;
      double theta = korm::dist(item.location, r.facilities[0].location, metric);
      for (std::size_t i = 1; i < r.facilities.size(); ++i) {
        const double d = korm::dist(item.location, r.facilities[i].location, metric);
        if (d < theta) {
          theta = d;
          best = i;
        }
      }
      const double p = std::min(theta * item.weight / f, 1.0);
      const double u = rng.next_unit();
      if (u < p) {
        r.facilities.push_back({item.location, item.weight, item.carried_id});
        r.opening += f;
      } else {
        r.facilities[best].weight += item.weight;
        r.service += item.weight * theta;
      }
      ++r.consumed;
    }
    if (r.service + r.opening > stop.max_cost) {
      r.halt = korm::HaltReason::cost_ceiling;
      break;
    }
    if (r.facilities.size() > stop.max_facilities) {
      r.halt = korm::HaltReason::facility_ceiling;
      break;
    }
  }
  return r;
}

// Exhaustive offline facility-location optimum: every non-empty facility
// subset, each point served by its nearest chosen facility.
inline double offline_fl_opt(std::span<const korm::Point> points, double f, korm::Metric metric) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i * n + j] = korm::dist(points[i], points[j], metric);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double cost = f * std::popcount(mask);
    for (std::size_t i = 0; i < n && cost < best; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (1u << j)) nearest = std::min(nearest, d[i * n + j]);
      }
      cost += nearest;
    }
    best = std::min(best, cost);
  }
  return best;
}

// Brute-force K-th nearest neighbor values via full sorts (the library uses
// nth_element), ranked descending with the index tie-break.
inline std::vector<std::pair<std::size_t, double>> brute_dk(std::span<const korm::Point> points,
                                                            std::size_t k, korm::Metric metric) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> ds;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) ds.push_back(korm::dist(points[i], points[j], metric));
    }
    std::sort(ds.begin(), ds.end());
    out.emplace_back(i, ds[k - 1]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  return out;
}

// Unoptimized DB(p,D): counts every neighbor, no early exit.
inline std::vector<std::size_t> brute_db(std::span<const korm::Point> points, double radius,
                                         double fraction, korm::Metric metric) {
  std::vector<std::size_t> out;
  const double threshold = (1.0 - fraction) * static_cast<double>(points.size() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t within = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i && korm::dist(points[i], points[j], metric) <= radius) ++within;
    }
    if (static_cast<double>(within) < threshold) out.push_back(i);
  }
  return out;
}

// Scratch file helper for ingest/CLI tests.
class TempFile {
 public:
  explicit TempFile(const std::string& contents, const std::string& suffix = ".csv") {
    static std::uint64_t counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("korm_test_" + std::to_string(++counter) + "_" + std::to_string(::getpid()) + suffix))
                .string();
    std::ofstream out(path_, std::ios::binary);
    out << contents;
  }
  TempFile(const TempFile&) = delete;
  ~TempFile() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace oracles
