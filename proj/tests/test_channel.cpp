#include "doctest.h"

#include <cmath>

#include "framesync/channel.hpp"
#include "framesync/rng.hpp"

using namespace framesync;

namespace {

BitVec random_bits(uint64_t seed, size_t n) {
  Rng rng(seed);
  BitVec v(n);
  for (size_t i = 0; i < n; ++i) v[i] = rng.next_bit();
  return v;
}

double flip_rate(const BitVec& a, const BitVec& b) {
  size_t flips = 0;
  for (size_t i = 0; i < a.size(); ++i) flips += (a[i] != b[i]);
  return static_cast<double>(flips) / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("identity channel passes the stream through") {
  BitVec s = random_bits(1, 1000);
  CHECK(apply_channel(s, {ChannelSpec::Kind::Identity, 0, 0, 5}) == s);
}

TEST_CASE("bsc edge rates") {
  BitVec s = random_bits(2, 100000);
  CHECK(apply_channel(s, {ChannelSpec::Kind::Bsc, 0.0, 0, 5}) == s);

  // ber = 0.5: agreement is ~50% within 3 binomial sigma
  BitVec out = apply_channel(s, {ChannelSpec::Kind::Bsc, 0.5, 0, 5});
  double rate = flip_rate(s, out);
  double sigma = std::sqrt(0.25 / static_cast<double>(s.size()));
  CHECK(std::abs(rate - 0.5) < 3 * sigma);

  CHECK_THROWS(apply_channel(s, {ChannelSpec::Kind::Bsc, 0.7, 0, 5}));
}

TEST_CASE("bsc empirical flip rate matches ber") {
  BitVec s = random_bits(3, 200000);
  for (double ber : {0.01, 0.1, 0.3}) {
    BitVec out = apply_channel(s, {ChannelSpec::Kind::Bsc, ber, 0, 11});
    double sigma = std::sqrt(ber * (1 - ber) / static_cast<double>(s.size()));
    CHECK(std::abs(flip_rate(s, out) - ber) < 3 * sigma);
  }
}

TEST_CASE("channels are deterministic in the seed") {
  BitVec s = random_bits(4, 5000);
  ChannelSpec spec{ChannelSpec::Kind::Bsc, 0.1, 0, 77};
  CHECK(apply_channel(s, spec) == apply_channel(s, spec));
  ChannelSpec other = spec;
  other.seed = 78;
  CHECK(apply_channel(s, spec) != apply_channel(s, other));

  ChannelSpec awgn{ChannelSpec::Kind::BpskAwgn, 0, -2.0, 9};
  CHECK(apply_channel(s, awgn) == apply_channel(s, awgn));
}

TEST_CASE("ber_of_snr closed form") {
  // Q(sqrt(2*10^(snr/10))): frozen from 0.5*erfc(sqrt(10^(snr/10)))
  CHECK(ber_of_snr(0.0) == doctest::Approx(0.07864960352514257).epsilon(1e-12));
  CHECK(ber_of_snr(-8.0) == doctest::Approx(0.2867145275814431).epsilon(1e-12));
  CHECK(ber_of_snr(60.0) < 1e-12);  // snr -> +inf drives ber -> 0
  CHECK(ber_of_snr(-100.0) == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("bpsk-awgn empirical flip rate matches the Q-function") {
  BitVec s = random_bits(5, 1000000);
  for (double snr_db : {0.0, 2.0}) {
    BitVec out = apply_channel(s, {ChannelSpec::Kind::BpskAwgn, 0, snr_db, 13});
    double expect = ber_of_snr(snr_db);
    double sigma = std::sqrt(expect * (1 - expect) / static_cast<double>(s.size()));
    CHECK(std::abs(flip_rate(s, out) - expect) < 3 * sigma);
  }
}
