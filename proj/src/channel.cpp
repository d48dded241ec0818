#include "framesync/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "framesync/rng.hpp"

namespace framesync {

double ber_of_snr(double snr_db) {
  double snr_linear = std::pow(10.0, snr_db / 10.0);
  // Q(sqrt(2x)) = erfc(sqrt(x)) / 2
  return 0.5 * std::erfc(std::sqrt(snr_linear));
}

BitVec apply_channel(const BitVec& stream, const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelSpec::Kind::Identity:
      return stream;
    case ChannelSpec::Kind::Bsc: {
      if (spec.ber < 0.0 || spec.ber > 0.5)
        throw std::invalid_argument("BSC ber must be in [0, 0.5]");
      Rng rng(spec.seed);
      BitVec out(stream.size());
      for (size_t i = 0; i < stream.size(); ++i)
        out[i] = stream[i] ^ static_cast<uint8_t>(rng.bernoulli(spec.ber));
      return out;
    }
    case ChannelSpec::Kind::BpskAwgn: {
      double snr_linear = std::pow(10.0, spec.snr_db / 10.0);
      double sigma = std::sqrt(1.0 / (2.0 * snr_linear));
      Rng rng(spec.seed);
      BitVec out(stream.size());
      for (size_t i = 0; i < stream.size(); ++i) {
        double symbol = stream[i] ? 1.0 : -1.0;
        double received = symbol + sigma * rng.gaussian();
        out[i] = received > 0.0 ? 1 : 0;
      }
      return out;
    }
  }
  throw std::logic_error("apply_channel: unknown channel kind");
}

}  // namespace framesync
