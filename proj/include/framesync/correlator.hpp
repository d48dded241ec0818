#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "framesync/bitvec.hpp"
#include "framesync/framing.hpp"

namespace framesync {

// 2l-bit window register. Position 0 holds the oldest bit; a step moves the
// left half (positions l..2l-1) into the right half and loads the new word
// into the left half.
struct WindowState {
  BitVec reg;
  explicit WindowState(size_t marker_len) : reg(2 * marker_len) {}
};

void window_step(WindowState& state, const BitVec& word);

// Combinational reference: sums[m] = agreement count between the marker and
// the window bits [m, m+l). The pipelined model below must match this exactly.
std::vector<int> correlate_window(const WindowState& state, const Marker& marker);

// Highest sum and the smallest position attaining it (comparator keeps its
// first input on equality).
std::pair<int, size_t> select_max(const std::vector<int>& sums);

// Adder tree + selector tree latency: 2 * ceil(log2 l) cycles.
size_t pipeline_depth(size_t marker_len);

struct CorrelationOutput {
  int best_sum = 0;      // highest correlation sum in the described window
  size_t best_pos = 0;   // window offset of the marker start (m)
  BitVec window;         // window contents this output describes (delay-buffered)
  long cycle = 0;        // output cycle index
  long window_cycle = 0; // cycle the described window was loaded (cycle - depth)
  bool warmup = true;    // pipeline not yet filled; contents are meaningless
};

// Cycle-accurate model of the correlation module: window register, l parallel
// correlators, selector, and the input delay buffer. Values are computed
// exactly (the adder tree is an exact sum, so popcount-of-XNOR matches it);
// the pipeline is modeled as a depth-long delay on (sums, selector, window).
class PipelinedCorrelator {
 public:
  explicit PipelinedCorrelator(Marker marker);

  CorrelationOutput step(const BitVec& word);
  void reset();

  size_t marker_len() const { return len_; }
  size_t depth() const { return depth_; }

 private:
  struct Slot {
    int sum = 0;
    size_t pos = 0;
    BitVec window;
  };

  size_t len_;
  size_t depth_;
  Marker marker_;
  std::vector<uint64_t> marker_packed_;
  std::vector<uint64_t> window_packed_;  // one guard word beyond 2l bits
  BitVec window_bits_;
  std::vector<Slot> ring_;
  long cycle_ = 0;
};

}  // namespace framesync
