#include "doctest.h"

#include <vector>

#include "framesync/correlator.hpp"
#include "framesync/rng.hpp"

using namespace framesync;

namespace {

BitVec random_bits(Rng& rng, size_t n) {
  BitVec v(n);
  for (size_t i = 0; i < n; ++i) v[i] = rng.next_bit();
  return v;
}

}  // namespace

TEST_CASE("window_step moves the left half right and loads the new word") {
  WindowState w(4);
  BitVec w1 = BitVec::from_text("1011");
  BitVec w2 = BitVec::from_text("0110");
  window_step(w, w1);
  CHECK(w.reg.to_text() == "00001011");
  window_step(w, w2);
  CHECK(w.reg.to_text() == "10110110");
  CHECK_THROWS(window_step(w, BitVec(3)));
}

TEST_CASE("window register tracks a contiguous slice of the serial stream") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    size_t l = 3 + rng.below(14);
    size_t n_words = 3 + rng.below(8);
    BitVec stream = random_bits(rng, l * n_words);
    WindowState w(l);
    WordStream ws = to_words(stream, l);
    for (size_t c = 0; c < n_words; ++c) {
      window_step(w, ws.words[c]);
      if (c == 0) continue;
      // window at cycle c holds serial bits [(c-1)*l, (c+1)*l)
      CHECK(w.reg == stream.slice((c - 1) * l, 2 * l));
    }
  }
}

TEST_CASE("correlate_window matches brute-force slice comparison") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    size_t l = 3 + rng.below(20);
    Marker m{random_bits(rng, l)};
    WindowState w(l);
    w.reg = random_bits(rng, 2 * l);
    std::vector<int> sums = correlate_window(w, m);
    REQUIRE(sums.size() == l);
    for (size_t off = 0; off < l; ++off) {
      CHECK(sums[off] == static_cast<int>(hamming_same(m.bits, w.reg.slice(off, l))));
      CHECK(sums[off] >= 0);
      CHECK(sums[off] <= static_cast<int>(l));
    }
  }
}

TEST_CASE("aligned marker scores l at offset 0") {
  Rng rng(5);
  Marker m{random_bits(rng, 8)};
  WindowState w(8);
  for (size_t i = 0; i < 8; ++i) {
    w.reg[i] = m.bits[i];
    w.reg[8 + i] = m.bits[i] ^ 1;
  }
  std::vector<int> sums = correlate_window(w, m);
  CHECK(sums[0] == 8);
  CHECK(select_max(sums).second == 0);
}

TEST_CASE("figure-style window: marker at offset 4 is detected there") {
  // l=8, k=3, marker 10001110; the window holds the header with the marker
  // starting at register position 4
  Marker m{BitVec::from_text("10001110")};
  BitVec header = build_header(m, 3);  // c(3) b(8) a(3)
  WindowState w(8);
  w.reg = BitVec::from_text("0");  // one filler bit before the header
  w.reg.append(header);
  w.reg.append(BitVec::from_text("1"));  // first payload bit
  REQUIRE(w.reg.size() == 16);
  std::vector<int> sums = correlate_window(w, m);
  auto [best, pos] = select_max(sums);
  CHECK(best == 8);
  CHECK(pos == 4);
}

TEST_CASE("select_max picks the highest sum, lowest index on ties") {
  CHECK(select_max({3, 7, 5}) == std::pair<int, size_t>{7, 1});
  CHECK(select_max({5, 5, 2}) == std::pair<int, size_t>{5, 0});
  CHECK(select_max({1}) == std::pair<int, size_t>{1, 0});
  CHECK_THROWS(select_max({}));
}

TEST_CASE("pipeline depth formula") {
  CHECK(pipeline_depth(8) == 6);
  CHECK(pipeline_depth(16) == 8);
  CHECK(pipeline_depth(123) == 14);  // ceil(log2 123) = 7
  CHECK(pipeline_depth(12) == 8);
}

TEST_CASE("pipelined outputs equal delayed combinational results") {
  Rng rng(47);
  for (size_t l : {5u, 8u, 13u, 16u}) {
    Marker m{random_bits(rng, l)};
    PipelinedCorrelator pipe(m);
    WindowState ref(l);
    size_t depth = pipe.depth();
    std::vector<std::pair<int, size_t>> expected;
    std::vector<BitVec> windows;
    for (size_t t = 0; t < 40; ++t) {
      BitVec word = random_bits(rng, l);
      window_step(ref, word);
      expected.push_back(select_max(correlate_window(ref, m)));
      windows.push_back(ref.reg);
      CorrelationOutput out = pipe.step(word);
      CHECK(out.cycle == static_cast<long>(t));
      if (t < depth) {
        CHECK(out.warmup);
        continue;
      }
      CHECK_FALSE(out.warmup);
      CHECK(out.window_cycle == static_cast<long>(t - depth));
      CHECK(out.best_sum == expected[t - depth].first);
      CHECK(out.best_pos == expected[t - depth].second);
      CHECK(out.window == windows[t - depth]);
    }
  }
}

TEST_CASE("every serial alignment of the marker maps to exactly one full-score output") {
  // sweep a single header across all l start phases; each produces exactly one
  // (cycle, m) pair with the maximum score
  Rng rng(53);
  size_t l = 8, k = 3;
  Marker m{random_bits(rng, l)};
  BitVec header = build_header(m, k);
  for (size_t phase = 0; phase < l; ++phase) {
    BitVec stream(phase);  // leading zeros set the alignment
    stream.append(header);
    stream.append(BitVec(3 * l));
    WordStream ws = to_words(stream, l);
    PipelinedCorrelator pipe(m);
    int full_scores = 0;
    size_t marker_serial_start = phase + k;
    for (size_t t = 0; t < ws.words.size() + pipe.depth(); ++t) {
      BitVec word = t < ws.words.size() ? ws.words[t] : BitVec(l);
      CorrelationOutput out = pipe.step(word);
      if (out.warmup) continue;
      if (out.best_sum == static_cast<int>(l)) {
        ++full_scores;
        // register position q of window cycle c holds serial bit (c-1)*l + q
        CHECK((out.window_cycle - 1) * static_cast<long>(l) + static_cast<long>(out.best_pos) ==
              static_cast<long>(marker_serial_start));
      }
    }
    CHECK(full_scores == 1);
  }
}
