#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace framesync {

// Ordered bit container. Index 0 is the bit transmitted earliest in time;
// every helper in this library follows that convention.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t n, uint8_t fill = 0) : bits_(n, fill & 1) {}
  explicit BitVec(std::vector<uint8_t> bits) : bits_(std::move(bits)) {}

  // Parses '0'/'1' characters; whitespace is ignored. Any other character is
  // rejected with a diagnostic naming its position in the input text.
  static BitVec from_text(std::string_view text);

  std::string to_text() const;

  size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  uint8_t operator[](size_t i) const { return bits_[i]; }
  uint8_t& operator[](size_t i) { return bits_[i]; }
  const uint8_t* data() const { return bits_.data(); }
  uint8_t* data() { return bits_.data(); }

  void push_back(uint8_t bit) { bits_.push_back(bit & 1); }
  void append(const BitVec& other);
  BitVec slice(size_t start, size_t len) const;

  bool operator==(const BitVec&) const = default;

  const std::vector<uint8_t>& raw() const { return bits_; }

 private:
  std::vector<uint8_t> bits_;
};

// Serial stream regrouped into parallel words of word_size bits. Concatenating
// the words (index-0 bit of each word first) and trimming the padded tail
// reconstructs the serial stream exactly.
struct WordStream {
  size_t word_size = 0;
  size_t stream_bits = 0;  // true serial length, before any tail padding
  bool padded = false;     // tail shorter than word_size was zero-padded
  std::vector<BitVec> words;
};

// Count of positions where a and b agree: a.length - HammingDistance(a, b).
size_t hamming_same(const BitVec& a, const BitVec& b);

WordStream to_words(const BitVec& stream, size_t word_size);
BitVec concat_words(const WordStream& ws);  // inverse of to_words, padding dropped

// Text bit files: '0'/'1' characters, whitespace ignored.
BitVec read_bits_text(const std::string& path);
void write_bits_text(const BitVec& bits, const std::string& path);

// Packed bit files: 8-byte little-endian length prefix (in bits), then the
// stream 8 bits per byte, index 0 = least significant bit of byte 0.
BitVec read_bits_packed(const std::string& path);
void write_bits_packed(const BitVec& bits, const std::string& path);

}  // namespace framesync
