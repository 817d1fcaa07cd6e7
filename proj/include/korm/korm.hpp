#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "korm/config.hpp"
#include "korm/core.hpp"
#include "korm/errors.hpp"
#include "korm/online_fl.hpp"
#include "korm/rng.hpp"

namespace korm {

// Minimum pairwise distance among the first k+1 stream points, under the
// configured metric. The caller divides by beta to obtain L_1. A zero
// minimum would zero every later facility cost, so it is rejected outright.
inline double set_lb(std::span<const Point> points, std::size_t k, Metric metric) {
  if (points.size() < k + 1) {
    throw InsufficientDataError("set_lb needs k+1 = " + std::to_string(k + 1) +
                                " points, got " + std::to_string(points.size()));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < k + 1; ++i) {
    for (std::size_t j = i + 1; j < k + 1; ++j) {
      best = std::min(best, dist(points[i], points[j], metric));
    }
  }
  if (best == 0.0) {
    throw DegenerateLowerBoundError(
        "closest pair of the first " + std::to_string(k + 1) +
        " points coincides; deduplicate the input or jitter it");
  }
  return best;
}

struct TcoEntry {
  std::uint64_t since = 0;   // phase of the first stagnation in this episode
  std::uint32_t score = 0;   // stagnant phases observed since `since`
};

// Unresolved temporal-candidate-outlier episodes, keyed by median identity.
// An entry exists iff the median stagnated at least once and has neither
// reached its O-phase checkpoint nor been absorbed into another facility.
struct TcoRegistry {
  std::map<std::int64_t, TcoEntry> entries;
};

enum class Verdict { real_outlier, inlier };

inline const char* to_string(Verdict v) {
  return v == Verdict::real_outlier ? "real_outlier" : "inlier";
}

struct OutlierVerdict {
  WeightedMedian median;
  Verdict verdict = Verdict::inlier;
  std::uint64_t decided_phase = 0;
  std::uint32_t score = 0;
};

struct InvocationStats {
  std::size_t consumed = 0;
  double total_cost = 0.0;
  std::size_t facilities = 0;
  HaltReason halt = HaltReason::exhausted;
};

struct PhaseResult {
  std::vector<WeightedMedian> medians;  // winning facility set
  double solution_cost = 0.0;           // excludes a ceiling-triggering step
  double service_cost = 0.0;
  double facility_price = 0.0;
  std::size_t consumed = 0;             // phase-input items, trigger included
  std::size_t raw_consumed = 0;         // consumed beyond the carried medians
  std::size_t read_boundary = 0;        // consumed - 1 (last point withheld)
  HaltReason halt = HaltReason::exhausted;
  std::size_t winner = 0;
  std::vector<InvocationStats> invocations;
};

namespace detail {

inline std::uint64_t substream_id(std::uint64_t phase, std::size_t invocation) {
  return (phase << 32) | static_cast<std::uint64_t>(invocation);
}

}  // namespace detail

// One CLUSTER phase: ceil(invocation_factor * log n) independent ONLINE-FL
// invocations over the phase input, each on its own RNG substream and bounded
// by the phase cost/facility ceilings. The winner is the invocation that
// consumed the most items (ties: lower total cost, then lower index). When
// the winner halted on a ceiling, the triggering step is withdrawn from the
// returned solution so the bounds hold and the point can be re-read.
inline PhaseResult cluster_phase(std::span<const WeightedItem> input, std::size_t carried_count,
                                 double lower_bound, const ValidatedConfig& cfg, std::size_t n,
                                 std::uint64_t phase, std::int64_t& next_median_id) {
  if (input.empty()) throw RangeError("cluster_phase: empty phase input");
  if (!(lower_bound > 0.0)) throw RangeError("cluster_phase: lower bound must be positive");
  const KormConfig& c = cfg.values();

  const double f = facility_price(lower_bound, c.k, n, c.log_base);
  const std::size_t m = invocation_count(n, c.invocation_factor, c.log_base);
  const StopCondition stop{
      cost_ceiling(lower_bound, c.gamma, c.beta),
      static_cast<std::size_t>(median_bound(c.k, n, c.gamma, c.beta, c.log_base)),
  };

  std::vector<OnlineFlResult> runs;
  runs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) runs.emplace_back(FacilitySet(c.metric));

  // The invocations are independent; each index always gets the same
  // substream, so the result is identical under any scheduling.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, m);
  std::atomic<std::size_t> cursor{0};
  auto body = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < m;) {
      runs[i] = online_fl_run(input, f, RngStream(c.seed, detail::substream_id(phase, i)),
                              stop, c.metric);
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
  }

  PhaseResult out;
  out.facility_price = f;
  out.invocations.reserve(m);
  std::size_t win = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = runs[i];
    out.invocations.push_back(
        {r.set.points_consumed(), r.set.total_cost(), r.set.size(), r.halt});
    const auto& b = runs[win];
    if (r.set.points_consumed() > b.set.points_consumed() ||
        (r.set.points_consumed() == b.set.points_consumed() &&
         r.set.total_cost() < b.set.total_cost())) {
      win = i;
    }
  }

  OnlineFlResult& winner = runs[win];
  out.winner = win;
  out.halt = winner.halt;
  out.consumed = winner.set.points_consumed();
  if (out.consumed <= carried_count) {
    throw ProgressError("phase " + std::to_string(phase) +
                        ": winning invocation consumed no points beyond the " +
                        std::to_string(carried_count) + " carried medians");
  }
  out.raw_consumed = out.consumed - carried_count;
  out.read_boundary = out.consumed - 1;

  if (winner.halt != HaltReason::exhausted) {
    winner.set.rollback(winner.last_step, f);
  }
  out.solution_cost = winner.set.total_cost();
  out.service_cost = winner.set.service_cost();

  out.medians.reserve(winner.set.size());
  for (std::size_t i = 0; i < winner.set.size(); ++i) {
    WeightedMedian med;
    const std::int64_t source = winner.set.source_id(i);
    med.id = source >= 0 ? source : next_median_id++;
    med.location = winner.set.location(i);
    med.weight = winner.set.weight(i);
    med.created_phase = winner.set.created_phase(i);
    out.medians.push_back(std::move(med));
  }
  return out;
}

struct TcoEventLog {
  // (id, score after this phase) for every median stagnant this phase.
  std::vector<std::pair<std::int64_t, std::uint32_t>> stagnant;
  // Entries dropped because the median was absorbed into another facility.
  std::vector<std::int64_t> dropped;
};

// Scores the phase outcome. A carried median whose weight did not change is
// stagnant: its episode starts (or continues) and its score increments. A
// median that grew keeps its score untouched. A median absent from the new
// solution merged into a denser region, which ends its episode. Fresh medians
// are not candidates in their creation phase.
inline TcoRegistry update_outlier_scores(const std::map<std::int64_t, double>& prev_weights,
                                         std::vector<WeightedMedian>& medians, TcoRegistry registry,
                                         std::uint64_t phase, TcoEventLog* log = nullptr) {
  std::set<std::int64_t> alive;
  for (const auto& m : medians) alive.insert(m.id);
  for (auto it = registry.entries.begin(); it != registry.entries.end();) {
    if (!alive.contains(it->first)) {
      if (log) log->dropped.push_back(it->first);
      it = registry.entries.erase(it);
    } else {
      ++it;
    }
  }

  for (auto& m : medians) {
    const auto prev = prev_weights.find(m.id);
    if (prev == prev_weights.end()) continue;  // created this phase
    if (m.weight == prev->second) {
      auto [it, fresh] = registry.entries.try_emplace(m.id, TcoEntry{phase, 0});
      it->second.score += 1;
      m.outlier_score = it->second.score;
      m.tco_since_phase = it->second.since;
      if (log) log->stagnant.emplace_back(m.id, it->second.score);
    } else if (auto it = registry.entries.find(m.id); it != registry.entries.end()) {
      m.outlier_score = it->second.score;
      m.tco_since_phase = it->second.since;
    }
  }
  return registry;
}

struct ResolveOutcome {
  std::vector<OutlierVerdict> verdicts;
  TcoRegistry registry;
};

// Resolves every episode that reached its O-phase checkpoint
// (phase - since + 1 == O): score == O means the median stagnated through the
// whole window and is a real outlier; anything less clears it as an inlier.
// Either way the episode ends. Younger episodes are untouched.
inline ResolveOutcome resolve_outliers(const std::vector<WeightedMedian>& medians,
                                       TcoRegistry registry, std::uint64_t phase,
                                       std::uint32_t score_o) {
  std::map<std::int64_t, const WeightedMedian*> by_id;
  for (const auto& m : medians) by_id[m.id] = &m;

  ResolveOutcome out;
  for (auto it = registry.entries.begin(); it != registry.entries.end();) {
    const std::uint64_t window = phase - it->second.since + 1;
    if (window < score_o) {
      ++it;
      continue;
    }
    OutlierVerdict v;
    const auto found = by_id.find(it->first);
    if (found != by_id.end()) {
      v.median = *found->second;
    } else {
      v.median.id = it->first;
    }
    v.median.outlier_score = it->second.score;
    v.median.tco_since_phase = it->second.since;
    v.score = it->second.score;
    v.decided_phase = phase;
    v.verdict = it->second.score == score_o ? Verdict::real_outlier : Verdict::inlier;
    out.verdicts.push_back(std::move(v));
    it = registry.entries.erase(it);
  }
  out.registry = std::move(registry);
  return out;
}

struct PhaseRecord {
  std::uint64_t j = 0;
  double lower_bound = 0.0;
  double facility_price = 0.0;
  std::size_t wm_count = 0;
  double solution_cost = 0.0;
  double service_cost = 0.0;
  std::size_t points_read = 0;
  std::size_t consumed = 0;
  HaltReason halt = HaltReason::exhausted;
  std::vector<std::pair<std::int64_t, std::uint32_t>> tco_stagnant;
  std::vector<std::int64_t> tco_dropped;
  std::vector<OutlierVerdict> verdicts;
  std::vector<InvocationStats> invocations;
};

struct RunResult {
  std::vector<WeightedMedian> medians;  // final working set
  std::vector<OutlierVerdict> real_outliers;
  std::vector<PhaseRecord> phases;
  TcoRegistry pending;                  // episodes open at stream end
  std::set<std::int64_t> cleared_ids;   // medians that survived a checkpoint
  std::size_t n = 0;
  std::size_t points_read_total = 0;
  std::size_t peak_retained = 0;        // medians + phase buffer + registry
  std::size_t registry_at_peak = 0;
  double retained_bound = 0.0;          // Num + median bound + registry at peak
};

// The KORM phase engine. Each phase re-clusters the carried weighted medians
// (heaviest first) together with the next window of at most Num unread raw
// points, scores stagnation, resolves TCO checkpoints, and grows the lower
// bound geometrically: L_{j+1} = beta * L_j from L_1 = set_lb / beta.
//
// Read marking: after a ceiling-halted phase the triggering point stays
// unread and its contribution is withdrawn from the carried set, so the next
// (34x larger) budget re-reads it. A phase that exhausted its input has no
// triggering point; everything it consumed is marked read. This keeps the sum
// of carried weights plus declared outliers exactly equal to the number of
// raw points read, and lets the loop drain the stream.
inline RunResult korm_run(const std::vector<Point>& stream, const ValidatedConfig& cfg) {
  const KormConfig& c = cfg.values();
  if (stream.empty()) throw ShapeError("korm_run: empty stream");
  const std::size_t n = c.stream_length_hint.value_or(stream.size());

  const double lb = set_lb(std::span<const Point>(stream.data(), stream.size()), c.k, c.metric);
  double lower_bound = lb / c.beta;

  RunResult out;
  out.n = n;
  const double wm_bound = median_bound(c.k, n, c.gamma, c.beta, c.log_base);

  std::vector<WeightedMedian> carried;
  TcoRegistry registry;
  std::int64_t next_id = 0;
  std::size_t cursor = 0;
  std::uint64_t j = 1;
  std::size_t stalled_phases = 0;

  while (cursor < stream.size()) {
    const std::size_t take = std::min(c.chunk_size_num, stream.size() - cursor);

    std::sort(carried.begin(), carried.end(), [](const WeightedMedian& a, const WeightedMedian& b) {
      return a.weight > b.weight || (a.weight == b.weight && a.id < b.id);
    });

    std::vector<WeightedItem> input;
    input.reserve(carried.size() + take);
    for (const auto& m : carried) {
      input.push_back({m.location, m.weight, m.id, m.created_phase});
    }
    for (std::size_t r = 0; r < take; ++r) {
      input.push_back({stream[cursor + r], 1.0, -1, j});
    }

    const std::size_t retained = carried.size() + take + registry.entries.size();
    if (retained > out.peak_retained) {
      out.peak_retained = retained;
      out.registry_at_peak = registry.entries.size();
      out.retained_bound =
          static_cast<double>(c.chunk_size_num) + wm_bound + static_cast<double>(registry.entries.size());
    }

    PhaseResult phase = cluster_phase(input, carried.size(), lower_bound, cfg, n, j, next_id);

    const std::size_t new_read =
        phase.halt == HaltReason::exhausted ? phase.raw_consumed : phase.raw_consumed - 1;
    if (new_read == 0) {
      if (++stalled_phases > 64) {
        throw ProgressError("phase " + std::to_string(j) + ": no new point read for " +
                            std::to_string(stalled_phases) + " consecutive phases (" +
                            std::to_string(cursor) + "/" + std::to_string(stream.size()) +
                            " points read, " + std::to_string(out.phases.size()) +
                            " phases completed)");
      }
    } else {
      stalled_phases = 0;
    }

    std::map<std::int64_t, double> prev_weights;
    for (const auto& m : carried) prev_weights.emplace(m.id, m.weight);

    std::vector<WeightedMedian> wm = std::move(phase.medians);
    TcoEventLog events;
    registry = update_outlier_scores(prev_weights, wm, std::move(registry), j, &events);
    ResolveOutcome resolved = resolve_outliers(wm, std::move(registry), j, c.score_o);
    registry = std::move(resolved.registry);

    for (const auto& v : resolved.verdicts) {
      if (v.verdict == Verdict::real_outlier) {
        std::erase_if(wm, [&](const WeightedMedian& m) { return m.id == v.median.id; });
        out.real_outliers.push_back(v);
      } else {
        out.cleared_ids.insert(v.median.id);
      }
    }

    PhaseRecord rec;
    rec.j = j;
    rec.lower_bound = lower_bound;
    rec.facility_price = phase.facility_price;
    rec.wm_count = wm.size();
    rec.solution_cost = phase.solution_cost;
    rec.service_cost = phase.service_cost;
    rec.points_read = new_read;
    rec.consumed = phase.consumed;
    rec.halt = phase.halt;
    rec.tco_stagnant = std::move(events.stagnant);
    rec.tco_dropped = std::move(events.dropped);
    rec.verdicts = std::move(resolved.verdicts);
    rec.invocations = std::move(phase.invocations);
    out.phases.push_back(std::move(rec));

    carried = std::move(wm);
    cursor += new_read;
    out.points_read_total = cursor;
    lower_bound *= c.beta;
    ++j;
  }

  out.medians = std::move(carried);
  out.pending = std::move(registry);
  return out;
}

}  // namespace korm
