#include "framesync/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "framesync/rng.hpp"

namespace framesync {

FrameScore score_frame(const std::vector<CaptureRecord>& captures, size_t truth_start,
                       const FrameSpec& spec) {
  const long start = static_cast<long>(truth_start);
  const long p = static_cast<long>(spec.payload_len);
  const long frame_begin = start - static_cast<long>(spec.header_len());
  const long frame_end = start + p;
  bool overlap = false;
  for (const CaptureRecord& rec : captures) {
    if (rec.complete && rec.payload_start_bit == start) return FrameScore::Success;
    long cap_begin = rec.payload_start_bit;
    long cap_end = rec.payload_start_bit +
                   static_cast<long>(rec.payload.size() ? rec.payload.size() : spec.payload_len);
    if (cap_begin < frame_end && cap_end > frame_begin) overlap = true;
  }
  return overlap ? FrameScore::Misaligned : FrameScore::Missed;
}

std::pair<double, double> wilson_interval_95(size_t errors, size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  double nn = static_cast<double>(n);
  double phat = static_cast<double>(errors) / nn;
  double z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double center = (phat + z2 / (2.0 * nn)) / denom;
  double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  // errors == 0 / errors == n hit the exact endpoints; subtraction otherwise
  // leaves ~1e-18 of rounding residue there
  double lo = errors == 0 ? 0.0 : center - half;
  double hi = errors == n ? 1.0 : center + half;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  return {lo, hi};
}

namespace {

struct BatchCounts {
  size_t frames = 0;
  size_t success = 0;
  size_t missed = 0;
  size_t misaligned = 0;
};

BatchCounts run_batch(const ExperimentConfig& config, const Marker& marker,
                      const ChannelSpec& channel, size_t point_idx, size_t batch_idx,
                      size_t n_frames) {
  uint64_t batch_seed = Rng::derive(Rng::derive(config.master_seed, point_idx + 1), batch_idx + 1);
  Rng rng(batch_seed);

  std::vector<BitVec> payloads(n_frames);
  for (BitVec& payload : payloads) {
    payload = BitVec(config.frame.payload_len);
    for (size_t i = 0; i < payload.size(); ++i) payload[i] = rng.next_bit();
  }

  TransmissionTruth truth;
  BitVec stream = build_transmission(config.frame, marker, payloads, config.gaps,
                                     Rng::derive(batch_seed, 1), truth);
  ChannelSpec ch = channel;
  ch.seed = Rng::derive(batch_seed, 2);
  BitVec received = apply_channel(stream, ch);

  std::vector<CaptureRecord> captures =
      run_receiver(received, marker, config.frame.params, config.frame,
                   config.detector_enabled_during_capture);

  BatchCounts counts;
  counts.frames = n_frames;
  for (size_t start : truth.payload_starts) {
    switch (score_frame(captures, start, config.frame)) {
      case FrameScore::Success: ++counts.success; break;
      case FrameScore::Missed: ++counts.missed; break;
      case FrameScore::Misaligned: ++counts.misaligned; break;
    }
  }
  return counts;
}

const char* channel_name(ChannelSpec::Kind kind) {
  switch (kind) {
    case ChannelSpec::Kind::Identity: return "identity";
    case ChannelSpec::Kind::Bsc: return "bsc";
    case ChannelSpec::Kind::BpskAwgn: return "bpsk-awgn";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<FserPoint> run_fser_sweep(const ExperimentConfig& config, std::ostream* log) {
  config.frame.validate();
  if (config.frames_per_point == 0)
    throw std::invalid_argument("frames_per_point must be >= 1");

  Marker marker = gen_marker(config.frame.params.marker_len, Rng::derive(config.master_seed, 0));

  struct Task {
    size_t point;
    size_t batch;
    size_t frames;
  };
  std::vector<Task> tasks;
  size_t batch_frames = config.batch_frames ? config.batch_frames : config.frames_per_point;
  for (size_t pt = 0; pt < config.grid.size(); ++pt) {
    size_t remaining = config.frames_per_point;
    size_t batch = 0;
    while (remaining > 0) {
      size_t n = std::min(batch_frames, remaining);
      tasks.push_back({pt, batch++, n});
      remaining -= n;
    }
  }

  std::vector<BatchCounts> results(tasks.size());
  std::atomic<size_t> next{0};
  unsigned n_threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min<size_t>(n_threads, tasks.size() ? tasks.size() : 1);

  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const Task& task = tasks[i];
      results[i] = run_batch(config, marker, config.grid[task.point], task.point, task.batch,
                             task.frames);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  // Merge in task order: output is independent of thread scheduling.
  std::vector<FserPoint> points(config.grid.size());
  for (size_t pt = 0; pt < config.grid.size(); ++pt) {
    const ChannelSpec& ch = config.grid[pt];
    FserPoint& point = points[pt];
    point.channel = channel_name(ch.kind);
    point.param = ch.kind == ChannelSpec::Kind::Bsc      ? ch.ber
                  : ch.kind == ChannelSpec::Kind::BpskAwgn ? ch.snr_db
                                                           : 0.0;
  }
  for (size_t i = 0; i < tasks.size(); ++i) {
    FserPoint& point = points[tasks[i].point];
    point.frames += results[i].frames;
    point.missed += results[i].missed;
    point.misaligned += results[i].misaligned;
  }
  for (FserPoint& point : points) {
    point.sync_errors = point.missed + point.misaligned;
    point.fser = point.frames ? static_cast<double>(point.sync_errors) /
                                    static_cast<double>(point.frames)
                              : 0.0;
    auto [lo, hi] = wilson_interval_95(point.sync_errors, point.frames);
    point.ci_low = lo;
    point.ci_high = hi;
    if (log)
      *log << point.channel << ' ' << format_double(point.param) << ": fser="
           << format_double(point.fser) << " (" << point.sync_errors << '/' << point.frames
           << ")\n";
  }
  return points;
}

std::string csv_string(const std::vector<FserPoint>& points) {
  std::string out = "channel,param,frames,sync_errors,fser,ci_low,ci_high\n";
  for (const FserPoint& p : points) {
    out += p.channel;
    out += ',' + format_double(p.param);
    out += ',' + std::to_string(p.frames);
    out += ',' + std::to_string(p.sync_errors);
    out += ',' + format_double(p.fser);
    out += ',' + format_double(p.ci_low);
    out += ',' + format_double(p.ci_high);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<FserPoint>& points, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << csv_string(points);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<FserPoint> parse_csv(const std::string& text) {
  std::vector<FserPoint> points;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "channel,param,frames,sync_errors,fser,ci_low,ci_high")
    throw std::runtime_error("unexpected CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    FserPoint p;
    std::getline(ls, p.channel, ',');
    std::getline(ls, field, ',');
    p.param = std::stod(field);
    std::getline(ls, field, ',');
    p.frames = std::stoull(field);
    std::getline(ls, field, ',');
    p.sync_errors = std::stoull(field);
    std::getline(ls, field, ',');
    p.fser = std::stod(field);
    std::getline(ls, field, ',');
    p.ci_low = std::stod(field);
    std::getline(ls, field, ',');
    p.ci_high = std::stod(field);
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace framesync
