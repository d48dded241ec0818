#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "framesync/capture.hpp"
#include "framesync/channel.hpp"
#include "framesync/framing.hpp"

namespace framesync {

struct ExperimentConfig {
  FrameSpec frame;                 // holds SyncParams and payload length
  std::vector<ChannelSpec> grid;   // one measurement point per entry
  size_t frames_per_point = 2000;
  GapPolicy gaps;                  // default: random filler bits
  uint64_t master_seed = 1;
  size_t batch_frames = 250;       // frames per independent trial batch
  unsigned threads = 0;            // 0 = hardware concurrency
  bool detector_enabled_during_capture = false;
};

enum class FrameScore { Success, Missed, Misaligned };

// Position-based scoring: Success requires a complete capture whose payload
// starts exactly at the ground-truth bit; Missed means no capture overlaps the
// frame at all; anything else is Misaligned.
FrameScore score_frame(const std::vector<CaptureRecord>& captures, size_t truth_start,
                       const FrameSpec& spec);

struct FserPoint {
  std::string channel;   // "identity", "bsc" or "bpsk-awgn"
  double param = 0.0;    // ber or snr_db (0 for identity)
  size_t frames = 0;
  size_t sync_errors = 0;
  double fser = 0.0;
  double ci_low = 0.0;   // Wilson 95% interval on fser
  double ci_high = 0.0;
  size_t missed = 0;      // breakdown (not part of the CSV contract)
  size_t misaligned = 0;
};

std::pair<double, double> wilson_interval_95(size_t errors, size_t n);

std::vector<FserPoint> run_fser_sweep(const ExperimentConfig& config,
                                      std::ostream* log = nullptr);

// CSV with header `channel,param,frames,sync_errors,fser,ci_low,ci_high`,
// UTF-8, LF line endings. Doubles are printed with 17 significant digits so a
// parse reproduces the values exactly.
std::string csv_string(const std::vector<FserPoint>& points);
void emit_csv(const std::vector<FserPoint>& points, const std::string& path);
std::vector<FserPoint> parse_csv(const std::string& text);

}  // namespace framesync
