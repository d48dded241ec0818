#include "framesync/framing.hpp"

#include <stdexcept>
#include <string>

#include "framesync/rng.hpp"

namespace framesync {

void SyncParams::validate() const {
  if (edge_len == 0) throw std::invalid_argument("edge_len must be >= 1");
  if (marker_len <= 2 * edge_len)
    throw std::invalid_argument("marker_len (" + std::to_string(marker_len) +
                                ") must exceed 2*edge_len (" +
                                std::to_string(2 * edge_len) + ")");
  if (threshold <= 0 || static_cast<size_t>(threshold) > marker_len)
    throw std::invalid_argument("threshold must be in (0, marker_len]");
}

void FrameSpec::validate(bool require_word_multiple) const {
  params.validate();
  if (require_word_multiple) {
    if (payload_len == 0 || payload_len % params.marker_len != 0)
      throw std::invalid_argument("payload_len (" + std::to_string(payload_len) +
                                  ") must be a positive multiple of marker_len (" +
                                  std::to_string(params.marker_len) + ")");
  }
}

Marker gen_marker(size_t marker_len, uint64_t seed) {
  if (marker_len < 3)
    throw std::invalid_argument("marker_len must be >= 3");
  Rng rng(seed);
  Marker m;
  m.bits = BitVec(marker_len);
  for (size_t i = 0; i < marker_len; ++i) m.bits[i] = rng.next_bit();
  return m;
}

BitVec build_header(const Marker& marker, size_t edge_len) {
  size_t l = marker.size();
  if (l <= 2 * edge_len)
    throw std::invalid_argument("build_header: marker length must exceed 2*edge_len");
  BitVec header;
  for (size_t i = 0; i < edge_len; ++i) header.push_back(marker.bits[i] ^ 1);
  header.append(marker.bits);
  for (size_t i = 0; i < edge_len; ++i) header.push_back(marker.bits[l - edge_len + i] ^ 1);
  return header;
}

BitVec build_frame(const FrameSpec& spec, const Marker& marker, const BitVec& payload) {
  spec.validate(false);
  if (marker.size() != spec.params.marker_len)
    throw std::invalid_argument("build_frame: marker length does not match params");
  if (payload.size() != spec.payload_len)
    throw std::invalid_argument("build_frame: payload length " +
                                std::to_string(payload.size()) + " != spec payload_len " +
                                std::to_string(spec.payload_len));
  BitVec frame = build_header(marker, spec.params.edge_len);
  frame.append(payload);
  return frame;
}

BitVec build_transmission(const FrameSpec& spec, const Marker& marker,
                          const std::vector<BitVec>& payloads, const GapPolicy& gaps,
                          uint64_t seed, TransmissionTruth& truth) {
  Rng rng(seed);
  BitVec stream;
  truth.payload_starts.clear();
  for (size_t f = 0; f < payloads.size(); ++f) {
    size_t gap_len;
    if (!gaps.explicit_lengths.empty()) {
      gap_len = gaps.explicit_lengths[f % gaps.explicit_lengths.size()];
    } else if (gaps.max_len > gaps.min_len) {
      gap_len = gaps.min_len + rng.below(gaps.max_len - gaps.min_len + 1);
    } else {
      gap_len = gaps.min_len;
    }
    for (size_t i = 0; i < gap_len; ++i)
      stream.push_back(gaps.fill == GapPolicy::Fill::RandomBits ? rng.next_bit() : 0);
    truth.payload_starts.push_back(stream.size() + spec.header_len());
    stream.append(build_frame(spec, marker, payloads[f]));
  }
  truth.total_bits = stream.size();
  return stream;
}

}  // namespace framesync
