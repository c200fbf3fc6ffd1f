#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ilbat/bat.hpp"
#include "ilbat/connectivity.hpp"
#include "ilbat/error.hpp"
#include "ilbat/network.hpp"
#include "ilbat/state_vector.hpp"

namespace ilbat {

/// Neumaier-compensated running sum. Order-sensitive, so a fixed summation
/// order gives bit-identical results.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct EngineOptions {
  std::size_t max_arcs = 30;                     // cap on m for the full BAT pass
  std::size_t max_retained = std::size_t{1} << 26;  // cap on |I|
  unsigned workers = 1;  // >1 splits I across threads (not bit-identical)
};

/// An infeasible vector carried to the next stage with its partition.
struct RetainedVector {
  StateVector vector;
  NodePartition partition;
  double probability = 0.0;  // Pr(vector) on the cumulative network
  std::uint64_t row = 0;     // 1-based row that produced it in its stage

  std::size_t memory_bytes() const noexcept {
    return sizeof(*this) + vector.words().capacity() * sizeof(StateVector::Word) +
           partition.memory_bytes() - sizeof(NodePartition);
  }
};

struct StageResult {
  std::size_t stage = 0;
  std::size_t arc_count = 0;   // cumulative m
  std::size_t node_count = 0;
  double reliability = 0.0;
  // Infeasible vectors found this stage. Equal to |I| except on the final
  // stage, where nothing is retained and zero extensions are never built.
  std::uint64_t infeasible_count = 0;
  std::uint64_t feasible_count = 0;     // vectors folded into R this stage
  std::uint64_t vectors_generated = 0;  // vectors examined this stage
  std::size_t retained_bytes = 0;
  bool final = false;
  double seconds = 0.0;
};

/// One examined vector, in the shape of the step-by-step tables: `parent` is
/// the row that produced the extended vector in the previous stage (the BAT
/// index itself on stage 0), `row` numbers vectors within the stage.
struct TraceRow {
  std::size_t stage;
  std::uint64_t parent;
  std::uint64_t row;
  const StateVector& vector;
  const NodePartition& partition;
  bool connected;
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void begin_stage(std::size_t /*stage*/, const Network& /*net*/) {}
  virtual void record(const TraceRow& row) = 0;
  virtual void end_stage() {}
};

struct EngineState {
  Network network;
  CompensatedSum reliability;
  std::vector<RetainedVector> infeasible;  // I for the current stage
  std::size_t stage = 0;
  bool finished = false;

  double current_reliability() const noexcept { return reliability.value(); }

  /// Σ Pr(X) over the retained vectors.
  double retained_mass() const {
    CompensatedSum s;
    for (const auto& r : infeasible) s.add(r.probability);
    return s.value();
  }

  std::size_t retained_bytes() const {
    std::size_t total = 0;
    for (const auto& r : infeasible) total += r.memory_bytes();
    return total;
  }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

inline void check_retained(std::size_t count, const EngineOptions& options) {
  if (count > options.max_retained)
    throw CapExceeded("more than " + std::to_string(options.max_retained) +
                      " infeasible vectors retained");
}

struct ExtensionBatch {
  std::vector<RetainedVector> retained;
  CompensatedSum reliability;
  std::uint64_t feasible = 0;
  std::uint64_t infeasible = 0;
};

/// Extends I[begin, end) by every sub-BAT vector; `sum` receives the
/// feasible probabilities in enumeration order.
inline void extend_range(std::span<const RetainedVector> previous, std::size_t begin,
                         std::size_t end, const std::vector<StateVector>& ys,
                         const std::vector<double>& y_probability,
                         const BoundIncrement& inc, bool is_final,
                         std::size_t stage, const EngineOptions& options,
                         TraceSink* trace, CompensatedSum& sum, ExtensionBatch& out) {
  const std::uint64_t beta = ys.size();
  for (std::size_t pos = begin; pos < end; ++pos) {
    const RetainedVector& x = previous[pos];
    for (std::size_t b = 0; b < ys.size(); ++b) {
      const std::uint64_t row = pos * beta + b + 1;
      const double pr = x.probability * y_probability[b];
      auto outcome = apply_increment(x.partition, ys[b], inc);
      if (outcome.feasible()) {
        sum.add(pr);
        ++out.feasible;
        if (trace) {
          const auto full = extend_partition(x.partition, ys[b], inc);
          trace->record({stage, x.row, row, convolve(x.vector, ys[b]), full, true});
        }
        continue;
      }
      ++out.infeasible;
      if (trace)
        trace->record({stage, x.row, row, convolve(x.vector, ys[b]),
                       *outcome.partition, false});
      if (is_final) continue;
      out.retained.push_back(
          {convolve(x.vector, ys[b]), std::move(*outcome.partition), pr, row});
      check_retained(out.retained.size(), options);
    }
  }
}

}  // namespace detail

/// Full BAT pass over the original network: feasible vectors are folded
/// into R and dropped, infeasible ones are retained with their partitions.
inline EngineState initial_stage(const Network& net, const EngineOptions& options = {},
                                 TraceSink* trace = nullptr,
                                 StageResult* result = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = net.arc_count();
  if (m > options.max_arcs)
    throw CapExceeded("network has " + std::to_string(m) + " arcs; cap is " +
                      std::to_string(options.max_arcs));

  EngineState state{net, {}, {}, 0, false};
  StageResult stats;
  if (trace) trace->begin_stage(0, net);

  std::uint64_t row = 0;
  auto visit = [&](const StateVector& x) {
    ++row;
    auto partition = partition_nodes(net, x);
    const double pr = vector_probability(x, net);
    const bool connected = partition.connected();
    if (trace) trace->record({0, row, row, x, partition, connected});
    if (connected) {
      state.reliability.add(pr);
      ++stats.feasible_count;
      return;
    }
    state.infeasible.push_back({x, std::move(partition), pr, row});
    detail::check_retained(state.infeasible.size(), options);
  };

  if (m == 0)
    visit(StateVector{});
  else
    for_each_bat_vector(m, /*skip_zero=*/false, visit);

  if (trace) trace->end_stage();
  stats.stage = 0;
  stats.arc_count = m;
  stats.node_count = net.node_count();
  stats.reliability = state.current_reliability();
  stats.infeasible_count = state.infeasible.size();
  stats.vectors_generated = row;
  stats.retained_bytes = state.retained_bytes();
  stats.seconds = detail::seconds_since(start);
  if (result) *result = stats;
  return state;
}

/// Applies one increment: every retained X is extended by every sub-BAT
/// vector Y of the increment (all-zero Y skipped on the final stage).
/// Feasible X ⊗ Y add to R; infeasible ones become the next retained set,
/// except on the final stage where they are dropped.
inline std::pair<EngineState, StageResult> run_increment(
    EngineState state, const IncrementProcess& process, bool is_final,
    const EngineOptions& options = {}, TraceSink* trace = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  if (state.finished)
    throw InvalidIncrement("increment applied after the final stage");

  const BoundIncrement inc = state.network.bind(process);
  const std::vector<StateVector> ys = sub_bat(inc, /*skip_zero=*/is_final);
  std::vector<double> y_probability;
  y_probability.reserve(ys.size());
  for (const auto& y : ys) y_probability.push_back(vector_probability(y, inc));

  state.network = state.network.extend(inc);
  const std::size_t stage = state.stage + 1;
  const std::vector<RetainedVector> previous = std::move(state.infeasible);
  state.infeasible.clear();
  if (trace) trace->begin_stage(stage, state.network);

  std::vector<detail::ExtensionBatch> batches;
  const std::size_t workers =
      trace ? 1
            : std::clamp<std::size_t>(options.workers, 1,
                                      std::max<std::size_t>(previous.size(), 1));
  if (workers == 1) {
    batches.emplace_back();
    detail::extend_range(previous, 0, previous.size(), ys, y_probability, inc,
                         is_final, stage, options, trace, state.reliability,
                         batches.back());
  } else {
    batches.resize(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (previous.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(previous.size(), w * chunk);
      const std::size_t end = std::min(previous.size(), begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        try {
          detail::extend_range(previous, begin, end, ys, y_probability, inc,
                               is_final, stage, options, nullptr,
                               batches[w].reliability, batches[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    // Partial sums merge in worker order.
    for (const auto& batch : batches) state.reliability.add(batch.reliability.value());
  }

  StageResult stats;
  for (auto& batch : batches) {
    stats.feasible_count += batch.feasible;
    stats.infeasible_count += batch.infeasible;
    if (state.infeasible.empty())
      state.infeasible = std::move(batch.retained);
    else
      state.infeasible.insert(state.infeasible.end(),
                              std::make_move_iterator(batch.retained.begin()),
                              std::make_move_iterator(batch.retained.end()));
  }
  detail::check_retained(state.infeasible.size(), options);
  if (trace) trace->end_stage();

  state.stage = stage;
  state.finished = is_final;
  stats.stage = stage;
  stats.arc_count = state.network.arc_count();
  stats.node_count = state.network.node_count();
  stats.reliability = state.current_reliability();
  stats.vectors_generated = static_cast<std::uint64_t>(previous.size()) * ys.size();
  stats.retained_bytes = state.retained_bytes();
  stats.final = is_final;
  stats.seconds = detail::seconds_since(start);
  return {std::move(state), stats};
}

/// Stage 0 followed by each increment in order; the last one is final.
inline std::vector<StageResult> run(const Network& net,
                                    const std::vector<IncrementProcess>& processes,
                                    const EngineOptions& options = {},
                                    TraceSink* trace = nullptr) {
  std::vector<StageResult> results(1);
  EngineState state = initial_stage(net, options, trace, &results[0]);
  if (processes.empty()) results[0].final = true;
  for (std::size_t k = 0; k < processes.size(); ++k) {
    auto [next, stats] = run_increment(std::move(state), processes[k],
                                       k + 1 == processes.size(), options, trace);
    state = std::move(next);
    results.push_back(stats);
  }
  return results;
}

/// 2^{m_λ} for every stage: what a full BAT pass over each cumulative
/// network would examine.
inline std::vector<std::uint64_t> naive_recompute_counts(
    const Network& net, const std::vector<IncrementProcess>& processes) {
  std::vector<std::uint64_t> counts;
  std::size_t m = net.arc_count();
  auto push = [&] {
    if (m > 62)
      throw CapExceeded("2^" + std::to_string(m) + " does not fit in 64 bits");
    counts.push_back(std::uint64_t{1} << m);
  };
  push();
  for (const auto& p : processes) {
    m += p.size();
    push();
  }
  return counts;
}

}  // namespace ilbat
