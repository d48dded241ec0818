#include "framesync/capture.hpp"

#include <algorithm>
#include <stdexcept>

namespace framesync {

PayloadCapture::PayloadCapture(const SyncParams& params, const FrameSpec& spec,
                               bool detector_enabled_during_capture)
    : params_(params), spec_(spec), detector_enabled_(detector_enabled_during_capture) {
  params_.validate();
  spec_.validate();
}

void PayloadCapture::arm_capture(size_t pos, long refined_window_cycle) {
  const long l = static_cast<long>(params_.marker_len);
  detected_pos_ = pos;
  payload_start_bit_ = refined_window_cycle * l + static_cast<long>(params_.edge_len + pos);
  first_offset_ = (params_.edge_len + pos) % params_.marker_len;
  first_chunk_ = true;
  state_.bits_remaining = spec_.payload_len;
  state_.assembled = BitVec();
  valid_trace_.clear();
}

uint8_t PayloadCapture::consume(const BitVec& window) {
  const size_t l = params_.marker_len;
  size_t off = first_chunk_ ? first_offset_ : 0;
  size_t take = std::min(l - off, state_.bits_remaining);
  for (size_t i = 0; i < take; ++i) state_.assembled.push_back(window[l + off + i]);
  state_.bits_remaining -= take;
  uint8_t code = state_.bits_remaining == 0 ? kValidLast
                 : first_chunk_             ? kValidFirst
                                            : kValidMiddle;
  first_chunk_ = false;
  valid_trace_.push_back(code);
  if (state_.bits_remaining == 0) {
    CaptureRecord rec;
    rec.payload = std::move(state_.assembled);
    rec.detected_pos = detected_pos_;
    rec.trigger_cycle = trigger_cycle_;
    rec.payload_start_bit = payload_start_bit_;
    rec.valid_trace = std::move(valid_trace_);
    rec.complete = true;
    finished_ = std::move(rec);
    state_ = CaptureState{};
    valid_trace_.clear();
    first_chunk_ = true;
  }
  return code;
}

PayloadCapture::StepResult PayloadCapture::step(const CorrelationOutput& out) {
  if (out.warmup)
    throw std::logic_error("PayloadCapture::step: warmup outputs must be ignored by the caller");
  StepResult res;
  const size_t l = params_.marker_len;
  const size_t k = params_.edge_len;

  switch (state_.phase) {
    case CapturePhase::Idle:
      // "Surpasses the threshold" is a strict comparison.
      if (out.best_sum > params_.threshold) {
        state_.pending_pos = out.best_pos;
        state_.pending_sum = out.best_sum;
        pending_window_ = out.window;
        trigger_cycle_ = out.cycle;
        trigger_window_cycle_ = out.window_cycle;
        state_.phase = CapturePhase::Refine;
      }
      break;

    case CapturePhase::Refine: {
      // One-cycle refinement; on a tie the earlier candidate is kept.
      bool adopt_new = out.best_sum > state_.pending_sum;
      size_t m = adopt_new ? out.best_pos : state_.pending_pos;
      long refined_cycle = adopt_new ? out.window_cycle : trigger_window_cycle_;
      arm_capture(m, refined_cycle);
      if (k + m < l) {
        // Payload start (register position l+k+m) is already in the left half
        // of the refined window.
        state_.phase = CapturePhase::Capturing;
        if (adopt_new) {
          res.valid = consume(out.window);
        } else {
          // First chunk comes from the stashed trigger window, the next from
          // the current one.
          uint8_t v = consume(pending_window_);
          if (state_.phase == CapturePhase::Capturing) v = consume(out.window);
          res.valid = v;
        }
      } else {
        // Start position is outside the register; it enters the left half one
        // cycle after the refined window.
        if (adopt_new) {
          state_.phase = CapturePhase::WaitAlign;
        } else {
          state_.phase = CapturePhase::Capturing;
          res.valid = consume(out.window);
        }
      }
      break;
    }

    case CapturePhase::WaitAlign:
      state_.phase = CapturePhase::Capturing;
      res.valid = consume(out.window);
      break;

    case CapturePhase::Capturing:
      if (detector_enabled_ && out.best_sum > params_.threshold) {
        // Correlation module left running: a fresh trigger restarts detection
        // and the partial frame is discarded.
        state_ = CaptureState{};
        valid_trace_.clear();
        first_chunk_ = true;
        state_.pending_pos = out.best_pos;
        state_.pending_sum = out.best_sum;
        pending_window_ = out.window;
        trigger_cycle_ = out.cycle;
        trigger_window_cycle_ = out.window_cycle;
        state_.phase = CapturePhase::Refine;
        break;
      }
      res.valid = consume(out.window);
      break;
  }

  if (finished_) {
    res.record = std::move(finished_);
    finished_.reset();
  }
  return res;
}

std::optional<CaptureRecord> PayloadCapture::flush() {
  if (state_.phase == CapturePhase::Idle) return std::nullopt;
  CaptureRecord rec;
  rec.complete = false;
  rec.trigger_cycle = trigger_cycle_;
  if (state_.phase == CapturePhase::Refine) {
    rec.detected_pos = state_.pending_pos;
    rec.payload_start_bit = trigger_window_cycle_ * static_cast<long>(params_.marker_len) +
                            static_cast<long>(params_.edge_len + state_.pending_pos);
  } else {
    rec.detected_pos = detected_pos_;
    rec.payload_start_bit = payload_start_bit_;
    rec.payload = std::move(state_.assembled);
    rec.valid_trace = std::move(valid_trace_);
  }
  state_ = CaptureState{};
  valid_trace_.clear();
  first_chunk_ = true;
  return rec;
}

std::vector<CaptureRecord> run_receiver(const BitVec& stream, const Marker& marker,
                                        const SyncParams& params, const FrameSpec& spec,
                                        bool detector_enabled_during_capture) {
  if (marker.size() != params.marker_len)
    throw std::invalid_argument("run_receiver: marker length does not match params");
  std::vector<CaptureRecord> records;
  if (stream.empty()) return records;

  WordStream ws = to_words(stream, params.marker_len);
  PipelinedCorrelator corr(marker);
  PayloadCapture cap(params, spec, detector_enabled_during_capture);
  const size_t n_words = ws.words.size();
  const BitVec zero_word(params.marker_len);

  // Extra zero-word steps at the end drain the delay buffer so every real
  // window is emitted.
  for (size_t t = 0; t < n_words + corr.depth(); ++t) {
    const BitVec& word = t < n_words ? ws.words[t] : zero_word;
    CorrelationOutput out = corr.step(word);
    if (out.warmup) continue;
    auto r = cap.step(out);
    if (r.record) records.push_back(std::move(*r.record));
  }
  if (auto partial = cap.flush()) records.push_back(std::move(*partial));
  // A partial capture may have assembled zero-fill bits past the end of the
  // stream; trim it to the bits that were actually received.
  if (!records.empty() && !records.back().complete) {
    CaptureRecord& rec = records.back();
    long avail = static_cast<long>(stream.size()) - rec.payload_start_bit;
    if (avail < 0) avail = 0;
    if (static_cast<long>(rec.payload.size()) > avail)
      rec.payload = rec.payload.slice(0, static_cast<size_t>(avail));
  }
  return records;
}

namespace {

// Serial-domain helpers for the oracle; deliberately naive and separate from
// the windowed/pipelined implementation above.

uint8_t serial_bit(const BitVec& stream, long idx) {
  return (idx >= 0 && idx < static_cast<long>(stream.size())) ? stream[static_cast<size_t>(idx)]
                                                              : 0;
}

// Best correlation over all marker placements in the 2l-bit region a window
// register would hold at window cycle c (register position q = serial bit
// (c-1)*l + q).
std::pair<int, size_t> serial_best(const BitVec& stream, const Marker& marker, long c) {
  const long l = static_cast<long>(marker.size());
  int best = -1;
  size_t best_pos = 0;
  for (long m = 0; m < l; ++m) {
    int same = 0;
    for (long i = 0; i < l; ++i)
      same += (serial_bit(stream, (c - 1) * l + m + i) == marker.bits[static_cast<size_t>(i)]);
    if (same > best) {
      best = same;
      best_pos = static_cast<size_t>(m);
    }
  }
  return {best, best_pos};
}

}  // namespace

std::vector<CaptureRecord> oracle_serial(const BitVec& stream, const Marker& marker,
                                         const SyncParams& params, const FrameSpec& spec) {
  params.validate();
  spec.validate();
  if (marker.size() != params.marker_len)
    throw std::invalid_argument("oracle_serial: marker length does not match params");
  std::vector<CaptureRecord> records;
  if (stream.empty()) return records;

  const long l = static_cast<long>(params.marker_len);
  const long k = static_cast<long>(params.edge_len);
  const long p = static_cast<long>(spec.payload_len);
  long levels = 0;
  while ((1l << levels) < l) ++levels;
  const long latency = 2 * levels;
  const long n_windows = (static_cast<long>(stream.size()) + l - 1) / l;

  long c = 0;
  while (c < n_windows) {
    auto [sum, pos] = serial_best(stream, marker, c);
    if (sum <= params.threshold) {
      ++c;
      continue;
    }
    const long trig_window = c;
    if (c + 1 >= n_windows) {
      // stream ends before the refinement cycle
      CaptureRecord rec;
      rec.complete = false;
      rec.detected_pos = pos;
      rec.trigger_cycle = trig_window + latency;
      rec.payload_start_bit = trig_window * l + k + static_cast<long>(pos);
      records.push_back(std::move(rec));
      break;
    }
    auto [sum2, pos2] = serial_best(stream, marker, c + 1);
    long refined_window = trig_window;
    size_t m = pos;
    if (sum2 > sum) {  // tie keeps the earlier candidate
      refined_window = c + 1;
      m = pos2;
    }
    const long start_bit = refined_window * l + k + static_cast<long>(m);
    const long o = (k + static_cast<long>(m)) % l;
    const long first_window = (k + static_cast<long>(m) < l) ? refined_window : refined_window + 1;

    CaptureRecord rec;
    rec.detected_pos = m;
    rec.trigger_cycle = trig_window + latency;
    rec.payload_start_bit = start_bit;
    long remaining = p;
    bool first = true;
    long w = first_window;
    bool truncated = false;
    while (remaining > 0) {
      if (w > n_windows - 1) {
        truncated = true;
        break;
      }
      long off = first ? o : 0;
      long take = std::min(l - off, remaining);
      for (long i = 0; i < take; ++i) rec.payload.push_back(serial_bit(stream, w * l + off + i));
      remaining -= take;
      rec.valid_trace.push_back(remaining == 0 ? kValidLast : (first ? kValidFirst : kValidMiddle));
      first = false;
      ++w;
    }
    rec.complete = !truncated;
    if (truncated) {
      // drop assembled zero-fill bits past the end of the stream
      long avail = static_cast<long>(stream.size()) - rec.payload_start_bit;
      if (avail < 0) avail = 0;
      if (static_cast<long>(rec.payload.size()) > avail)
        rec.payload = rec.payload.slice(0, static_cast<size_t>(avail));
    }
    records.push_back(std::move(rec));
    if (truncated) break;
    c = w;  // detection resumes on the window after the final capture chunk
  }
  return records;
}

std::vector<GenieDetection> oracle_genie(const BitVec& stream, const Marker& marker,
                                         const SyncParams& params) {
  std::vector<GenieDetection> hits;
  const size_t l = marker.size();
  if (stream.size() < l) return hits;
  for (size_t off = 0; off + l <= stream.size(); ++off) {
    int same = 0;
    for (size_t i = 0; i < l; ++i) same += (stream[off + i] == marker.bits[i]);
    if (same > params.threshold) hits.push_back({off, same});
  }
  return hits;
}

}  // namespace framesync
