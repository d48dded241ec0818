#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>

#include "framesync/capture.hpp"
#include "framesync/channel.hpp"
#include "framesync/correlator.hpp"
#include "framesync/framing.hpp"
#include "framesync/harness.hpp"

namespace py = pybind11;
using namespace framesync;

namespace {

BitVec bitvec_from_object(const py::object& obj) {
  if (py::isinstance<BitVec>(obj)) return obj.cast<BitVec>();
  if (py::isinstance<py::str>(obj)) return BitVec::from_text(obj.cast<std::string>());
  std::vector<uint8_t> bits;
  for (auto item : obj) {
    unsigned v = item.cast<unsigned>();
    if (v > 1) throw std::invalid_argument("bit values must be 0 or 1");
    bits.push_back(static_cast<uint8_t>(v));
  }
  return BitVec(std::move(bits));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Correlation-based frame synchronization: framing, cycle-accurate "
            "receiver model, bit channels, and a Monte-Carlo FSER harness.";

  py::class_<BitVec>(m, "BitVec")
      .def(py::init([](const py::object& obj) { return bitvec_from_object(obj); }),
           py::arg("bits"))
      .def_static("from_text", [](const std::string& s) { return BitVec::from_text(s); })
      .def("to_text", &BitVec::to_text)
      .def("__len__", &BitVec::size)
      .def("__getitem__",
           [](const BitVec& v, size_t i) {
             if (i >= v.size()) throw py::index_error();
             return v[i];
           })
      .def("__eq__", [](const BitVec& a, const BitVec& b) { return a == b; })
      .def("__repr__",
           [](const BitVec& v) {
             std::string text = v.size() <= 64 ? v.to_text() : v.slice(0, 64).to_text() + "...";
             return "BitVec(" + std::to_string(v.size()) + " bits: " + text + ")";
           })
      .def("slice", &BitVec::slice, py::arg("start"), py::arg("len"))
      .def("tolist", [](const BitVec& v) { return v.raw(); });

  py::class_<SyncParams>(m, "SyncParams")
      .def(py::init<>())
      .def(py::init([](size_t l, size_t k, int th) {
             SyncParams p{l, k, th};
             p.validate();
             return p;
           }),
           py::arg("marker_len"), py::arg("edge_len"), py::arg("threshold"))
      .def_readwrite("marker_len", &SyncParams::marker_len)
      .def_readwrite("edge_len", &SyncParams::edge_len)
      .def_readwrite("threshold", &SyncParams::threshold);

  py::class_<FrameSpec>(m, "FrameSpec")
      .def(py::init<>())
      .def(py::init([](const SyncParams& p, size_t payload_len) {
             FrameSpec s{p, payload_len};
             s.validate(false);
             return s;
           }),
           py::arg("params"), py::arg("payload_len"))
      .def_readwrite("params", &FrameSpec::params)
      .def_readwrite("payload_len", &FrameSpec::payload_len)
      .def("header_len", &FrameSpec::header_len)
      .def("frame_len", &FrameSpec::frame_len);

  py::class_<Marker>(m, "Marker")
      .def(py::init([](const py::object& bits) { return Marker{bitvec_from_object(bits)}; }),
           py::arg("bits"))
      .def_readwrite("bits", &Marker::bits)
      .def("__len__", &Marker::size);

  py::enum_<ChannelSpec::Kind>(m, "ChannelKind")
      .value("Identity", ChannelSpec::Kind::Identity)
      .value("Bsc", ChannelSpec::Kind::Bsc)
      .value("BpskAwgn", ChannelSpec::Kind::BpskAwgn);

  py::class_<ChannelSpec>(m, "ChannelSpec")
      .def(py::init<>())
      .def(py::init([](ChannelSpec::Kind kind, double ber, double snr_db, uint64_t seed) {
             return ChannelSpec{kind, ber, snr_db, seed};
           }),
           py::arg("kind"), py::arg("ber") = 0.0, py::arg("snr_db") = 0.0, py::arg("seed") = 0)
      .def_readwrite("kind", &ChannelSpec::kind)
      .def_readwrite("ber", &ChannelSpec::ber)
      .def_readwrite("snr_db", &ChannelSpec::snr_db)
      .def_readwrite("seed", &ChannelSpec::seed);

  py::enum_<GapPolicy::Fill>(m, "GapFill")
      .value("RandomBits", GapPolicy::Fill::RandomBits)
      .value("Zeros", GapPolicy::Fill::Zeros);

  py::class_<GapPolicy>(m, "GapPolicy")
      .def(py::init<>())
      .def(py::init([](GapPolicy::Fill fill, size_t min_len, size_t max_len,
                       std::vector<size_t> explicit_lengths) {
             return GapPolicy{fill, min_len, max_len, std::move(explicit_lengths)};
           }),
           py::arg("fill") = GapPolicy::Fill::RandomBits, py::arg("min_len") = 0,
           py::arg("max_len") = 0, py::arg("explicit_lengths") = std::vector<size_t>{})
      .def_readwrite("fill", &GapPolicy::fill)
      .def_readwrite("min_len", &GapPolicy::min_len)
      .def_readwrite("max_len", &GapPolicy::max_len)
      .def_readwrite("explicit_lengths", &GapPolicy::explicit_lengths);

  py::class_<TransmissionTruth>(m, "TransmissionTruth")
      .def_readonly("payload_starts", &TransmissionTruth::payload_starts)
      .def_readonly("total_bits", &TransmissionTruth::total_bits);

  py::class_<CaptureRecord>(m, "CaptureRecord")
      .def_readonly("payload", &CaptureRecord::payload)
      .def_readonly("detected_pos", &CaptureRecord::detected_pos)
      .def_readonly("trigger_cycle", &CaptureRecord::trigger_cycle)
      .def_readonly("payload_start_bit", &CaptureRecord::payload_start_bit)
      .def_readonly("valid_trace", &CaptureRecord::valid_trace)
      .def_readonly("complete", &CaptureRecord::complete);

  py::class_<FserPoint>(m, "FserPoint")
      .def_readonly("channel", &FserPoint::channel)
      .def_readonly("param", &FserPoint::param)
      .def_readonly("frames", &FserPoint::frames)
      .def_readonly("sync_errors", &FserPoint::sync_errors)
      .def_readonly("fser", &FserPoint::fser)
      .def_readonly("ci_low", &FserPoint::ci_low)
      .def_readonly("ci_high", &FserPoint::ci_high)
      .def_readonly("missed", &FserPoint::missed)
      .def_readonly("misaligned", &FserPoint::misaligned);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("frame", &ExperimentConfig::frame)
      .def_readwrite("grid", &ExperimentConfig::grid)
      .def_readwrite("frames_per_point", &ExperimentConfig::frames_per_point)
      .def_readwrite("gaps", &ExperimentConfig::gaps)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("batch_frames", &ExperimentConfig::batch_frames)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("detector_enabled_during_capture",
                     &ExperimentConfig::detector_enabled_during_capture);

  m.def("hamming_same", &hamming_same, py::arg("a"), py::arg("b"),
        "Count of positions where the two bit vectors agree.");
  m.def("gen_marker", &gen_marker, py::arg("marker_len"), py::arg("seed"));
  m.def("build_header", &build_header, py::arg("marker"), py::arg("edge_len"));
  m.def("build_frame", &build_frame, py::arg("spec"), py::arg("marker"), py::arg("payload"));
  m.def(
      "build_transmission",
      [](const FrameSpec& spec, const Marker& marker, const std::vector<BitVec>& payloads,
         const GapPolicy& gaps, uint64_t seed) {
        TransmissionTruth truth;
        BitVec stream = build_transmission(spec, marker, payloads, gaps, seed, truth);
        return py::make_tuple(stream, truth);
      },
      py::arg("spec"), py::arg("marker"), py::arg("payloads"), py::arg("gaps"), py::arg("seed"),
      "Returns (stream, truth) where truth lists each frame's payload start bit.");
  m.def("apply_channel", &apply_channel, py::arg("stream"), py::arg("spec"));
  m.def("ber_of_snr", &ber_of_snr, py::arg("snr_db"),
        "Hard-decision BPSK flip probability Q(sqrt(2 * 10^(snr_db/10))).");
  m.def("pipeline_depth", &pipeline_depth, py::arg("marker_len"));
  m.def("run_receiver", &run_receiver, py::arg("stream"), py::arg("marker"), py::arg("params"),
        py::arg("spec"), py::arg("detector_enabled_during_capture") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("oracle_serial", &oracle_serial, py::arg("stream"), py::arg("marker"), py::arg("params"),
        py::arg("spec"), py::call_guard<py::gil_scoped_release>());
  m.def("wilson_interval_95", &wilson_interval_95, py::arg("errors"), py::arg("n"));
  m.def(
      "run_fser_sweep",
      [](const ExperimentConfig& config, bool progress) {
        py::gil_scoped_release release;
        return run_fser_sweep(config, progress ? &std::cerr : nullptr);
      },
      py::arg("config"), py::arg("progress") = false);
  m.def("csv_string", &csv_string, py::arg("points"));
}
