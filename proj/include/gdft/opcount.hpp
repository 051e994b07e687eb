#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace gdft {

struct OpCounts {
  std::uint64_t cmul = 0;
  std::uint64_t cadd = 0;

  std::uint64_t total() const { return cmul + cadd; }
  OpCounts operator-(const OpCounts& o) const { return {cmul - o.cmul, cadd - o.cadd}; }
  OpCounts& operator+=(const OpCounts& o) {
    cmul += o.cmul;
    cadd += o.cadd;
    return *this;
  }
};

/// Tally of complex multiplications and additions, one unit each, tracked
/// separately. Kernels add in bulk, so concurrent branches accumulate exact
/// sums regardless of thread count.
class OpCounter {
 public:
  void count(std::uint64_t mul, std::uint64_t add) {
    cmul_.fetch_add(mul, std::memory_order_relaxed);
    cadd_.fetch_add(add, std::memory_order_relaxed);
  }
  OpCounts snapshot() const {
    return {cmul_.load(std::memory_order_relaxed), cadd_.load(std::memory_order_relaxed)};
  }
  std::uint64_t cmul() const { return cmul_.load(std::memory_order_relaxed); }
  std::uint64_t cadd() const { return cadd_.load(std::memory_order_relaxed); }
  void reset() {
    cmul_.store(0, std::memory_order_relaxed);
    cadd_.store(0, std::memory_order_relaxed);
  }

 private:
  std::atomic<std::uint64_t> cmul_{0};
  std::atomic<std::uint64_t> cadd_{0};
};

inline void count_ops(OpCounter* c, std::uint64_t mul, std::uint64_t add) {
  if (c) c->count(mul, add);
}

struct TraceEvent {
  std::string stage;
  std::string detail;
  std::uint64_t calls = 0;
  OpCounts ops;
};

/// Per-stage event log; serialized by the CLI --trace flag.
class Trace {
 public:
  void record(std::string stage, std::string detail, std::uint64_t calls, OpCounts ops) {
    std::lock_guard<std::mutex> lock(mu_);
    ev_.push_back({std::move(stage), std::move(detail), calls, ops});
  }
  std::vector<TraceEvent> events() const {
    std::lock_guard<std::mutex> lock(mu_);
    return ev_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<TraceEvent> ev_;
};

inline void trace_event(Trace* t, const char* stage, const std::string& detail,
                        std::uint64_t calls, OpCounts ops) {
  if (t) t->record(stage, detail, calls, ops);
}

}  // namespace gdft
