#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "korm/core.hpp"
#include "korm/errors.hpp"
#include "korm/rng.hpp"

namespace korm {

enum class HaltReason { exhausted, cost_ceiling, facility_ceiling };

inline const char* to_string(HaltReason h) {
  switch (h) {
    case HaltReason::exhausted: return "exhausted";
    case HaltReason::cost_ceiling: return "cost-ceiling";
    case HaltReason::facility_ceiling: return "facility-ceiling";
  }
  return "?";
}

struct StopCondition {
  double max_cost = std::numeric_limits<double>::infinity();
  std::size_t max_facilities = std::numeric_limits<std::size_t>::max();
};

// What one consumed point did to the facility set. Kept by callers that may
// need to withdraw the final step (the ceiling-triggering point is re-read by
// the next phase, so its contribution must not stay in the carried solution).
struct StepEffect {
  bool opened = false;
  std::size_t facility = 0;
  double weight = 0.0;
  double service_delta = 0.0;
};

// The facilities opened so far by one ONLINE-FL invocation plus the cost
// ledger: total_cost() == service_cost() + facility_count_cost() always.
// Coordinates are stored facility-major for fast nearest scans.
class FacilitySet {
 public:
  explicit FacilitySet(Metric metric) : metric_(metric) {}

  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  std::size_t dim() const { return dim_; }
  Metric metric() const { return metric_; }

  double service_cost() const { return service_cost_; }
  double facility_count_cost() const { return opening_cost_; }
  double total_cost() const { return service_cost_ + opening_cost_; }
  std::size_t points_consumed() const { return consumed_; }

  double weight(std::size_t i) const { return weights_[i]; }
  std::int64_t source_id(std::size_t i) const { return source_ids_[i]; }
  std::uint64_t created_phase(std::size_t i) const { return created_[i]; }

  std::span<const double> coords(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }

  Point location(std::size_t i) const {
    const auto c = coords(i);
    return Point(std::vector<double>(c.begin(), c.end()));
  }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  struct Nearest {
    std::size_t index;
    double theta;
  };

  // Linear scan; ties resolve to the lowest facility index. Distances are
  // compared on squared values, converting once at the end for the euclidean
  // metric. A facility is abandoned as soon as its partial sum exceeds the
  // best squared distance so far.
  Nearest nearest(const Point& x) const {
    if (x.dim() != dim_) {
      throw DimensionError("facility scan: point dimension " + std::to_string(x.dim()) +
                           " does not match facility dimension " + std::to_string(dim_));
    }
    const double* base = coords_.data();
    const double* q = x.coords.data();
    std::size_t best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    const std::size_t count = size();
    const std::size_t d = dim_;
    for (std::size_t i = 0; i < count; ++i) {
      const double* f = base + i * d;
      double acc = 0.0;
      std::size_t r = 0;
      for (; r + 4 <= d; r += 4) {
        const double d0 = q[r] - f[r];
        const double d1 = q[r + 1] - f[r + 1];
        const double d2 = q[r + 2] - f[r + 2];
        const double d3 = q[r + 3] - f[r + 3];
        acc += d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
        if (acc >= best_sq) break;
      }
      if (acc < best_sq) {
        for (; r < d; ++r) {
          const double diff = q[r] - f[r];
          acc += diff * diff;
        }
        if (acc < best_sq) {
          best_sq = acc;
          best = i;
        }
      }
    }
    return {best, metric_ == Metric::euclidean ? std::sqrt(best_sq) : best_sq};
  }

  // Withdraws the given final step. Only ever applied to the most recent
  // step of a run; points_consumed is left untouched (the point was read).
  void rollback(const StepEffect& e, double facility_cost) {
    if (e.opened) {
      coords_.resize(coords_.size() - dim_);
      weights_.pop_back();
      source_ids_.pop_back();
      created_.pop_back();
      opening_cost_ -= facility_cost;
    } else {
      weights_[e.facility] -= e.weight;
      service_cost_ -= e.service_delta;
    }
  }

 private:
  friend StepEffect online_fl_step(FacilitySet&, const WeightedItem&, double, RngStream&);

  void open(const WeightedItem& item, double facility_cost) {
    if (empty()) {
      dim_ = item.location.dim();
    }
    coords_.insert(coords_.end(), item.location.coords.begin(), item.location.coords.end());
    weights_.push_back(item.weight);
    source_ids_.push_back(item.carried_id);
    created_.push_back(item.created_phase);
    opening_cost_ += facility_cost;
    ++consumed_;
  }

  void assign(std::size_t facility, double weight, double theta) {
    weights_[facility] += weight;
    service_cost_ += assignment_cost(weight, theta);
    ++consumed_;
  }

  Metric metric_;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> weights_;
  std::vector<std::int64_t> source_ids_;
  std::vector<std::uint64_t> created_;
  double service_cost_ = 0.0;
  double opening_cost_ = 0.0;
  std::size_t consumed_ = 0;
};

// One ONLINE-FL step. The first point opens a facility unconditionally (and
// is charged one opening, keeping the cost ledger uniform). Every later point
// draws exactly one uniform variate u and opens a facility at itself iff
// u < min(theta*w/f, 1), where theta is the distance to the nearest open
// facility; otherwise it is assigned there.
inline StepEffect online_fl_step(FacilitySet& state, const WeightedItem& item, double f,
                                 RngStream& rng) {
  if (!(f > 0.0)) throw RangeError("facility cost must be positive");
  if (state.empty()) {
    state.open(item, f);
    return {true, 0, item.weight, 0.0};
  }
  const auto hit = state.nearest(item.location);
  const double p = std::min(hit.theta * item.weight / f, 1.0);
  const double u = rng.next_unit();
  if (u < p) {
    state.open(item, f);
    return {true, state.size() - 1, item.weight, 0.0};
  }
  state.assign(hit.index, item.weight, hit.theta);
  return {false, hit.index, item.weight, assignment_cost(item.weight, hit.theta)};
}

// Point-level convenience for raw arrivals.
inline StepEffect online_fl_step(FacilitySet& state, const Point& x, double w, double f,
                                 RngStream& rng) {
  return online_fl_step(state, WeightedItem{x, w, -1, 0}, f, rng);
}

struct OnlineFlResult {
  FacilitySet set;
  HaltReason halt = HaltReason::exhausted;
  StepEffect last_step{};
  std::size_t last_point = 0;  // index of the final consumed item
};

// One pass over the weighted items, halting the moment the running total cost
// exceeds stop.max_cost or the facility count exceeds stop.max_facilities.
// The triggering point counts as consumed and its effect is still in the set;
// last_step/last_point let the caller withdraw and re-read it.
inline OnlineFlResult online_fl_run(std::span<const WeightedItem> items, double f, RngStream rng,
                                    const StopCondition& stop, Metric metric) {
  OnlineFlResult result{FacilitySet(metric)};
  for (std::size_t i = 0; i < items.size(); ++i) {
    result.last_step = online_fl_step(result.set, items[i], f, rng);
    result.last_point = i;
    if (result.set.total_cost() > stop.max_cost) {
      result.halt = HaltReason::cost_ceiling;
      break;
    }
    if (result.set.size() > stop.max_facilities) {
      result.halt = HaltReason::facility_ceiling;
      break;
    }
  }
  return result;
}

}  // namespace korm
