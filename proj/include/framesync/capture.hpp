#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "framesync/correlator.hpp"
#include "framesync/framing.hpp"

namespace framesync {

// valid-out codes, one per capture cycle.
inline constexpr uint8_t kValidIdle = 0b00;    // no capture in progress
inline constexpr uint8_t kValidFirst = 0b01;   // first (partial) word of a capture
inline constexpr uint8_t kValidMiddle = 0b10;  // full middle word
inline constexpr uint8_t kValidLast = 0b11;    // final (partial) word

enum class CapturePhase { Idle, Refine, WaitAlign, Capturing };

struct CaptureRecord {
  BitVec payload;
  size_t detected_pos = 0;     // refined marker position m within its window
  long trigger_cycle = 0;      // output cycle at which the threshold was surpassed
  long payload_start_bit = 0;  // serial-stream index of the first payload bit
  std::vector<uint8_t> valid_trace;
  bool complete = true;        // false when the stream ended mid-capture
};

struct CaptureState {
  CapturePhase phase = CapturePhase::Idle;
  size_t pending_pos = 0;
  int pending_sum = 0;
  size_t bits_remaining = 0;
  BitVec assembled;
};

// Payload capture control unit. Consumes one non-warmup CorrelationOutput per
// cycle: threshold trigger, one-cycle refinement, then the n+1-cycle capture
// schedule (l-o, l, ..., l, o bits; n cycles when o == 0).
//
// With detector_enabled_during_capture=false (default) threshold checks are
// suppressed until the capture completes. When enabled, a trigger during
// capture abandons the partial frame and restarts detection, mirroring a
// correlation module left running.
class PayloadCapture {
 public:
  PayloadCapture(const SyncParams& params, const FrameSpec& spec,
                 bool detector_enabled_during_capture = false);

  struct StepResult {
    std::optional<CaptureRecord> record;
    uint8_t valid = kValidIdle;
  };

  StepResult step(const CorrelationOutput& out);

  // Stream ended; returns the in-progress capture flagged incomplete, if any.
  std::optional<CaptureRecord> flush();

  const CaptureState& state() const { return state_; }

 private:
  uint8_t consume(const BitVec& window);
  void arm_capture(size_t pos, long refined_window_cycle);

  SyncParams params_;
  FrameSpec spec_;
  bool detector_enabled_;

  CaptureState state_;
  BitVec pending_window_;
  long trigger_cycle_ = 0;
  long trigger_window_cycle_ = 0;
  size_t detected_pos_ = 0;
  long payload_start_bit_ = 0;
  size_t first_offset_ = 0;  // left-half offset of the first payload bit
  bool first_chunk_ = true;
  std::vector<uint8_t> valid_trace_;
  std::optional<CaptureRecord> finished_;
};

// Feeds the stream word-by-word through the pipelined correlator and the
// capture unit; returns every completed (and trailing incomplete) capture.
std::vector<CaptureRecord> run_receiver(const BitVec& stream, const Marker& marker,
                                        const SyncParams& params, const FrameSpec& spec,
                                        bool detector_enabled_during_capture = false);

// Reference oracle: applies the same decision rules directly to serial-stream
// slices, with no window register, pipeline, or shared receiver code. Must be
// record-for-record identical to run_receiver (default detector setting).
std::vector<CaptureRecord> oracle_serial(const BitVec& stream, const Marker& marker,
                                         const SyncParams& params, const FrameSpec& spec);

// Idealized matched-filter detector: every serial offset whose correlation
// against the marker exceeds the threshold. Diagnostics only.
struct GenieDetection {
  size_t offset = 0;
  int score = 0;
};
std::vector<GenieDetection> oracle_genie(const BitVec& stream, const Marker& marker,
                                         const SyncParams& params);

}  // namespace framesync
