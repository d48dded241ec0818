#pragma once

#include <cstdint>
#include <vector>

#include "framesync/bitvec.hpp"

namespace framesync {

// Synchronization parameters shared by transmitter and receiver.
//   marker_len  - length of the sync marker in bits (must exceed 2*edge_len)
//   edge_len    - length of each inverted edge sequence flanking the marker
//   threshold   - correlation sum that a detection must strictly exceed
struct SyncParams {
  size_t marker_len = 123;
  size_t edge_len = 23;
  int threshold = 89;

  void validate() const;
  // Recommendation only: edge_len should not exceed 20% of marker_len.
  bool edge_len_recommended() const { return edge_len * 5 <= marker_len; }
};

struct FrameSpec {
  SyncParams params;
  size_t payload_len = 12300;

  size_t header_len() const { return params.marker_len + 2 * params.edge_len; }
  size_t frame_len() const { return header_len() + payload_len; }
  // Payload word count n (payload_len = n * marker_len on the capture path).
  size_t payload_words() const { return payload_len / params.marker_len; }

  void validate(bool require_word_multiple = true) const;
};

struct Marker {
  BitVec bits;
  size_t size() const { return bits.size(); }
};

// Uniform random marker, deterministic in the seed.
Marker gen_marker(size_t marker_len, uint64_t seed);

// Header in transmission order: inverted first edge, marker, inverted last
// edge. With b the marker bits, the leading edge is NOT(b[0..k)) and the
// trailing edge is NOT(b[l-k..l)).
BitVec build_header(const Marker& marker, size_t edge_len);

// Full frame in transmission order: header followed by payload.
BitVec build_frame(const FrameSpec& spec, const Marker& marker, const BitVec& payload);

// Filler between frames. When explicit_lengths is non-empty it overrides the
// random range (entry i is the gap before frame i, cycling if short).
struct GapPolicy {
  enum class Fill { RandomBits, Zeros };
  Fill fill = Fill::RandomBits;
  size_t min_len = 0;
  size_t max_len = 0;
  std::vector<size_t> explicit_lengths;
};

struct TransmissionTruth {
  std::vector<size_t> payload_starts;  // serial index of each frame's first payload bit
  size_t total_bits = 0;
};

BitVec build_transmission(const FrameSpec& spec, const Marker& marker,
                          const std::vector<BitVec>& payloads, const GapPolicy& gaps,
                          uint64_t seed, TransmissionTruth& truth);

}  // namespace framesync
