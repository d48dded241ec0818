#include "framesync/correlator.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace framesync {

void window_step(WindowState& state, const BitVec& word) {
  size_t l = state.reg.size() / 2;
  if (word.size() != l)
    throw std::invalid_argument("window_step: word length " + std::to_string(word.size()) +
                                " != marker_len " + std::to_string(l));
  std::memmove(state.reg.data(), state.reg.data() + l, l);
  std::memcpy(state.reg.data() + l, word.data(), l);
}

std::vector<int> correlate_window(const WindowState& state, const Marker& marker) {
  size_t l = marker.size();
  if (state.reg.size() != 2 * l)
    throw std::invalid_argument("correlate_window: window/marker size mismatch");
  std::vector<int> sums(l);
  for (size_t m = 0; m < l; ++m) {
    int same = 0;
    for (size_t i = 0; i < l; ++i) same += (state.reg[m + i] == marker.bits[i]);
    sums[m] = same;
  }
  return sums;
}

std::pair<int, size_t> select_max(const std::vector<int>& sums) {
  if (sums.empty()) throw std::invalid_argument("select_max: empty input");
  int best = sums[0];
  size_t pos = 0;
  for (size_t i = 1; i < sums.size(); ++i) {
    if (sums[i] > best) {
      best = sums[i];
      pos = i;
    }
  }
  return {best, pos};
}

size_t pipeline_depth(size_t marker_len) {
  if (marker_len == 0) throw std::invalid_argument("pipeline_depth: marker_len must be >= 1");
  size_t levels = std::bit_width(marker_len - 1);  // ceil(log2 l), 0 for l == 1
  return 2 * levels;
}

PipelinedCorrelator::PipelinedCorrelator(Marker marker)
    : len_(marker.size()),
      depth_(pipeline_depth(marker.size())),
      marker_(std::move(marker)),
      window_bits_(2 * marker_.size()) {
  if (len_ < 1) throw std::invalid_argument("PipelinedCorrelator: empty marker");
  size_t mwords = (len_ + 63) / 64;
  marker_packed_.assign(mwords, 0);
  for (size_t i = 0; i < len_; ++i)
    if (marker_.bits[i]) marker_packed_[i >> 6] |= 1ull << (i & 63);
  window_packed_.assign((2 * len_ + 63) / 64 + 1, 0);
  ring_.resize(depth_ + 1);
  for (Slot& s : ring_) s.window = BitVec(2 * len_);
}

void PipelinedCorrelator::reset() {
  window_bits_ = BitVec(2 * len_);
  std::memset(window_packed_.data(), 0, window_packed_.size() * sizeof(uint64_t));
  for (Slot& s : ring_) s = Slot{0, 0, BitVec(2 * len_)};
  cycle_ = 0;
}

CorrelationOutput PipelinedCorrelator::step(const BitVec& word) {
  if (word.size() != len_)
    throw std::invalid_argument("PipelinedCorrelator::step: word length mismatch");

  // Window shift: left half to right half, new word into the left half.
  std::memmove(window_bits_.data(), window_bits_.data() + len_, len_);
  std::memcpy(window_bits_.data() + len_, word.data(), len_);

  // Repack. The guard word past 2l bits stays zero so two-word reads below
  // never run off the end.
  size_t full = window_packed_.size() - 1;
  for (size_t j = 0; j < full; ++j) {
    uint64_t w = 0;
    size_t base = 64 * j;
    size_t n = std::min<size_t>(64, 2 * len_ - std::min(base, 2 * len_));
    for (size_t i = 0; i < n; ++i)
      if (window_bits_[base + i]) w |= 1ull << i;
    window_packed_[j] = w;
  }

  // l correlators + selector, computed exactly.
  size_t mwords = marker_packed_.size();
  uint64_t top_mask = (len_ & 63) ? ((1ull << (len_ & 63)) - 1) : ~0ull;
  int best = -1;
  size_t best_pos = 0;
  for (size_t m = 0; m < len_; ++m) {
    int mismatches = 0;
    for (size_t j = 0; j < mwords; ++j) {
      size_t bitpos = m + 64 * j;
      uint64_t chunk = window_packed_[bitpos >> 6] >> (bitpos & 63);
      if (bitpos & 63) chunk |= window_packed_[(bitpos >> 6) + 1] << (64 - (bitpos & 63));
      uint64_t diff = chunk ^ marker_packed_[j];
      if (j + 1 == mwords) diff &= top_mask;
      mismatches += std::popcount(diff);
    }
    int sum = static_cast<int>(len_) - mismatches;
    if (sum > best) {
      best = sum;
      best_pos = m;
    }
  }

  long t = cycle_++;
  size_t ring_n = ring_.size();
  Slot& now = ring_[static_cast<size_t>(t) % ring_n];
  now.sum = best;
  now.pos = best_pos;
  now.window = window_bits_;

  CorrelationOutput out;
  out.cycle = t;
  out.window_cycle = t - static_cast<long>(depth_);
  if (t < static_cast<long>(depth_)) {
    out.warmup = true;
    out.window = BitVec(2 * len_);
    return out;
  }
  const Slot& delayed = ring_[static_cast<size_t>(t - static_cast<long>(depth_)) % ring_n];
  out.warmup = false;
  out.best_sum = delayed.sum;
  out.best_pos = delayed.pos;
  out.window = delayed.window;
  return out;
}

}  // namespace framesync
