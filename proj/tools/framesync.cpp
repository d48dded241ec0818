// Command-line front end: marker generation, framing, deframing and FSER
// sweeps over the bit channels.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "framesync/capture.hpp"
#include "framesync/channel.hpp"
#include "framesync/framing.hpp"
#include "framesync/harness.hpp"
#include "framesync/rng.hpp"

using namespace framesync;

namespace {

BitVec read_bits(const std::string& path, const std::string& format) {
  return format == "packed" ? read_bits_packed(path) : read_bits_text(path);
}

void write_bits(const BitVec& bits, const std::string& path, const std::string& format) {
  if (format == "packed")
    write_bits_packed(bits, path);
  else
    write_bits_text(bits, path);
}

ChannelSpec make_channel(const std::string& name, double ber, double snr_db, uint64_t seed) {
  ChannelSpec spec;
  spec.ber = ber;
  spec.snr_db = snr_db;
  spec.seed = seed;
  if (name == "identity")
    spec.kind = ChannelSpec::Kind::Identity;
  else if (name == "bsc")
    spec.kind = ChannelSpec::Kind::Bsc;
  else if (name == "bpsk-awgn")
    spec.kind = ChannelSpec::Kind::BpskAwgn;
  else
    throw CLI::ValidationError("--channel", "unknown channel '" + name + "'");
  return spec;
}

struct CommonParams {
  size_t marker_len = 123;
  size_t edge_len = 23;
  int threshold = 89;
  size_t payload_len = 12300;
  std::string format = "text";

  void attach(CLI::App* cmd, bool with_payload = true) {
    cmd->add_option("-l,--marker-len", marker_len, "marker length in bits")
        ->capture_default_str();
    cmd->add_option("-k,--edge-len", edge_len, "edge sequence length in bits")
        ->capture_default_str();
    cmd->add_option("-t,--threshold", threshold, "detection threshold (strict greater-than)")
        ->capture_default_str();
    if (with_payload)
      cmd->add_option("-p,--payload-len", payload_len, "payload length in bits")
          ->capture_default_str();
    cmd->add_option("--format", format, "bit file format")
        ->check(CLI::IsMember({"text", "packed"}))
        ->capture_default_str();
  }

  SyncParams sync() const { return SyncParams{marker_len, edge_len, threshold}; }
  FrameSpec frame() const { return FrameSpec{sync(), payload_len}; }
};

int cmd_gen_marker(const CommonParams& common, uint64_t seed, const std::string& out) {
  // only the marker length matters here; gen_marker checks it
  Marker marker = gen_marker(common.marker_len, seed);
  if (out.empty())
    std::cout << marker.bits.to_text() << "\n";
  else
    write_bits(marker.bits, out, common.format);
  return 0;
}

int cmd_frame(const CommonParams& common, const std::string& marker_path,
              const std::string& payload_path, const std::string& out,
              const std::string& channel_name, double ber, double snr_db, uint64_t seed) {
  // framing does not use the threshold; substitute one that always validates
  FrameSpec spec{SyncParams{common.marker_len, common.edge_len,
                            static_cast<int>(common.marker_len)},
                 common.payload_len};
  spec.validate(false);
  Marker marker{read_bits(marker_path, common.format)};
  if (marker.size() != spec.params.marker_len)
    throw std::runtime_error("marker file holds " + std::to_string(marker.size()) +
                             " bits, expected " + std::to_string(spec.params.marker_len));
  BitVec payload = read_bits(payload_path, common.format);
  FrameSpec actual = spec;
  actual.payload_len = payload.size();
  actual.validate(false);
  BitVec frame = build_frame(actual, marker, payload);
  if (channel_name != "identity")
    frame = apply_channel(frame, make_channel(channel_name, ber, snr_db, seed));
  write_bits(frame, out, common.format);
  std::cout << "wrote " << frame.size() << " bits to " << out << "\n";
  return 0;
}

int cmd_deframe(const CommonParams& common, const std::string& marker_path,
                const std::string& stream_path, const std::string& out_prefix,
                const std::string& trace_path, bool detector_enabled) {
  FrameSpec spec = common.frame();
  spec.validate();
  Marker marker{read_bits(marker_path, common.format)};
  if (marker.size() != spec.params.marker_len)
    throw std::runtime_error("marker file holds " + std::to_string(marker.size()) +
                             " bits, expected " + std::to_string(spec.params.marker_len));
  BitVec stream = read_bits(stream_path, common.format);
  auto records = run_receiver(stream, marker, spec.params, spec, detector_enabled);

  std::ofstream index(out_prefix + "index.csv", std::ios::binary);
  index << "file,trigger_cycle,m,payload_start_bit,bits,complete\n";
  for (size_t i = 0; i < records.size(); ++i) {
    std::string name = out_prefix + "payload_" + std::to_string(i) + ".bits";
    write_bits(records[i].payload, name, common.format);
    index << name << "," << records[i].trigger_cycle << "," << records[i].detected_pos << ","
          << records[i].payload_start_bit << "," << records[i].payload.size() << ","
          << (records[i].complete ? 1 : 0) << "\n";
  }
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path, std::ios::binary);
    trace << "capture,step,valid\n";
    for (size_t i = 0; i < records.size(); ++i)
      for (size_t s = 0; s < records[i].valid_trace.size(); ++s)
        trace << i << "," << s << "," << int(records[i].valid_trace[s]) << "\n";
  }
  std::cout << "captured " << records.size() << " frame(s) from " << stream.size()
            << " bits\n";
  return 0;
}

int cmd_fser_sweep(const CommonParams& common, const std::string& channel_name,
                   const std::vector<double>& params, size_t frames, size_t batch,
                   unsigned threads, uint64_t seed, size_t gap_max, const std::string& out,
                   bool quiet) {
  ExperimentConfig config;
  config.frame = common.frame();
  config.frame.validate();
  config.frames_per_point = frames;
  config.batch_frames = batch;
  config.threads = threads;
  config.master_seed = seed;
  config.gaps = GapPolicy{GapPolicy::Fill::RandomBits, 0, gap_max, {}};
  if (params.empty() && channel_name != "identity")
    throw CLI::ValidationError("--points", "at least one channel parameter is required");
  if (channel_name == "identity") {
    config.grid.push_back(make_channel(channel_name, 0, 0, 0));
  } else {
    for (double p : params) {
      ChannelSpec c = make_channel(channel_name, p, p, 0);
      config.grid.push_back(c);
    }
  }
  auto points = run_fser_sweep(config, quiet ? nullptr : &std::cerr);
  std::string csv = csv_string(points);
  if (out.empty()) {
    std::cout << csv;
  } else {
    emit_csv(points, out);
    std::cout << "wrote " << points.size() << " point(s) to " << out << "\n";
  }
  return 0;
}

int cmd_selftest() {
  // quick end-to-end exercise at small sizes plus the default geometry
  Rng rng(7);
  int failures = 0;
  auto check = [&](bool ok, const char* what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what);
    if (!ok) ++failures;
  };

  for (auto [l, k, th] : {std::tuple<size_t, size_t, int>{8, 3, 6}, {32, 6, 28}, {123, 23, 89}}) {
    SyncParams params{l, k, th};
    FrameSpec spec{params, 4 * l};
    Marker marker = gen_marker(l, rng.next_u64());
    BitVec payload(spec.payload_len);
    for (size_t i = 0; i < payload.size(); ++i) payload[i] = rng.next_bit();
    BitVec stream(l + 3);  // unaligned quiet lead-in
    stream.append(build_frame(spec, marker, payload));
    stream.append(BitVec(2 * l));
    auto records = run_receiver(stream, marker, params, spec);
    auto oracle = oracle_serial(stream, marker, params, spec);
    bool ok = !records.empty() && records[0].complete && records[0].payload == payload &&
              records.size() == oracle.size();
    for (size_t i = 0; ok && i < records.size(); ++i)
      ok = records[i].payload == oracle[i].payload &&
           records[i].payload_start_bit == oracle[i].payload_start_bit;
    std::string what = "round trip and oracle agreement at marker length " + std::to_string(l);
    check(ok, what.c_str());
  }

  BitVec s(10000);
  for (size_t i = 0; i < s.size(); ++i) s[i] = rng.next_bit();
  BitVec noisy = apply_channel(s, {ChannelSpec::Kind::Bsc, 0.1, 0, 99});
  size_t flips = 0;
  for (size_t i = 0; i < s.size(); ++i) flips += (s[i] != noisy[i]);
  check(flips > 800 && flips < 1200, "bsc flip rate near nominal");

  check(ber_of_snr(0.0) > 0.078 && ber_of_snr(0.0) < 0.079, "awgn flip probability closed form");

  if (failures == 0) std::printf("selftest passed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation-based frame synchronization toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value file");
  app.allow_config_extras(true);

  CommonParams common;

  auto* gen = app.add_subcommand("gen-marker", "generate a random sync marker");
  uint64_t gen_seed = 1;
  std::string gen_out;
  common.attach(gen, false);
  gen->add_option("--seed", gen_seed, "marker seed")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "output bit file (default: stdout)");

  auto* frame = app.add_subcommand("frame", "build a frame around a payload");
  std::string frame_marker, frame_payload, frame_out = "frame.bits";
  std::string frame_channel = "identity";
  double frame_ber = 0.0, frame_snr = 0.0;
  uint64_t frame_seed = 1;
  common.attach(frame);
  frame->add_option("-m,--marker", frame_marker, "marker bit file")->required();
  frame->add_option("-i,--payload", frame_payload, "payload bit file")->required();
  frame->add_option("-o,--out", frame_out, "output bit file")->capture_default_str();
  frame->add_option("--channel", frame_channel, "noise model: identity, bsc, bpsk-awgn")
      ->capture_default_str();
  frame->add_option("--ber", frame_ber, "bsc flip probability");
  frame->add_option("--snr-db", frame_snr, "bpsk-awgn SNR in dB");
  frame->add_option("--seed", frame_seed, "channel noise seed")->capture_default_str();

  auto* deframe = app.add_subcommand("deframe", "recover payloads from a bit stream");
  std::string de_marker, de_stream, de_prefix = "out_", de_trace;
  bool de_detector = false;
  common.attach(deframe);
  deframe->add_option("-m,--marker", de_marker, "marker bit file")->required();
  deframe->add_option("-i,--stream", de_stream, "received bit stream file")->required();
  deframe->add_option("-o,--out-prefix", de_prefix, "prefix for payload/index files")
      ->capture_default_str();
  deframe->add_option("--trace", de_trace, "write the per-step valid-code trace CSV here");
  deframe->add_flag("--detector-during-capture", de_detector,
                    "keep the detector armed while capturing (restart on retrigger)");

  auto* sweep = app.add_subcommand("fser-sweep", "Monte-Carlo frame sync error rate sweep");
  std::string sw_channel = "bsc", sw_out;
  std::vector<double> sw_points;
  size_t sw_frames = 2000, sw_batch = 250, sw_gap_max = 246;
  unsigned sw_threads = 0;
  uint64_t sw_seed = 1;
  bool sw_quiet = false;
  common.attach(sweep);
  sweep->add_option("--channel", sw_channel, "noise model: identity, bsc, bpsk-awgn")
      ->capture_default_str();
  sweep->add_option("--points", sw_points,
                    "channel parameters, one per point (ber for bsc, SNR dB for bpsk-awgn)");
  sweep->add_option("--frames", sw_frames, "frames per point")->capture_default_str();
  sweep->add_option("--batch", sw_batch, "frames per independent batch")->capture_default_str();
  sweep->add_option("--threads", sw_threads, "worker threads (0 = all cores)")
      ->capture_default_str();
  sweep->add_option("--seed", sw_seed, "master seed")->capture_default_str();
  sweep->add_option("--gap-max", sw_gap_max, "maximum random inter-frame gap in bits")
      ->capture_default_str();
  sweep->add_option("-o,--out", sw_out, "output CSV path (default: stdout)");
  sweep->add_flag("--quiet", sw_quiet, "suppress progress output");

  auto* selftest = app.add_subcommand("selftest", "run a quick built-in functional check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_marker(common, gen_seed, gen_out);
    if (frame->parsed())
      return cmd_frame(common, frame_marker, frame_payload, frame_out, frame_channel, frame_ber,
                       frame_snr, frame_seed);
    if (deframe->parsed())
      return cmd_deframe(common, de_marker, de_stream, de_prefix, de_trace, de_detector);
    if (sweep->parsed())
      return cmd_fser_sweep(common, sw_channel, sw_points, sw_frames, sw_batch, sw_threads,
                            sw_seed, sw_gap_max, sw_out, sw_quiet);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
