#pragma once

#include <cstdint>

#include "framesync/bitvec.hpp"

namespace framesync {

// Bit-level noise models applied to the transmitted stream.
struct ChannelSpec {
  enum class Kind { Identity, Bsc, BpskAwgn };
  Kind kind = Kind::Identity;
  double ber = 0.0;     // Bsc: independent flip probability, in [0, 0.5]
  double snr_db = 0.0;  // BpskAwgn: Eb/N0 in decibels
  uint64_t seed = 0;
};

// Identity passes the stream through. Bsc flips each bit independently with
// probability ber. BpskAwgn maps bits to +/-1, adds Gaussian noise at the
// given SNR, and hard-slices at zero (equivalent to a BSC with
// ber = Q(sqrt(2*snr_linear))).
BitVec apply_channel(const BitVec& stream, const ChannelSpec& spec);

// Hard-decision BPSK flip probability: Q(sqrt(2 * 10^(snr_db/10))).
double ber_of_snr(double snr_db);

}  // namespace framesync
