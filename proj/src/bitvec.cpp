#include "framesync/bitvec.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace framesync {

BitVec BitVec::from_text(std::string_view text) {
  BitVec out;
  out.bits_.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '0' || c == '1') {
      out.bits_.push_back(static_cast<uint8_t>(c - '0'));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      continue;
    } else {
      throw std::invalid_argument("invalid bit character '" + std::string(1, c) +
                                  "' at position " + std::to_string(i));
    }
  }
  return out;
}

std::string BitVec::to_text() const {
  std::string s;
  s.reserve(bits_.size());
  for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

void BitVec::append(const BitVec& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitVec BitVec::slice(size_t start, size_t len) const {
  if (start + len > bits_.size())
    throw std::out_of_range("slice [" + std::to_string(start) + ", +" +
                            std::to_string(len) + ") exceeds length " +
                            std::to_string(bits_.size()));
  BitVec out;
  out.bits_.assign(bits_.begin() + static_cast<ptrdiff_t>(start),
                   bits_.begin() + static_cast<ptrdiff_t>(start + len));
  return out;
}

size_t hamming_same(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming_same: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  size_t same = 0;
  for (size_t i = 0; i < a.size(); ++i) same += (a[i] == b[i]);
  return same;
}

WordStream to_words(const BitVec& stream, size_t word_size) {
  if (word_size == 0) throw std::invalid_argument("to_words: word_size must be >= 1");
  WordStream ws;
  ws.word_size = word_size;
  ws.stream_bits = stream.size();
  size_t nwords = (stream.size() + word_size - 1) / word_size;
  ws.words.reserve(nwords);
  for (size_t w = 0; w < nwords; ++w) {
    BitVec word(word_size);
    size_t base = w * word_size;
    size_t take = std::min(word_size, stream.size() - base);
    for (size_t i = 0; i < take; ++i) word[i] = stream[base + i];
    if (take < word_size) ws.padded = true;  // tail zero-padded, never dropped
    ws.words.push_back(std::move(word));
  }
  return ws;
}

BitVec concat_words(const WordStream& ws) {
  BitVec out;
  for (const BitVec& w : ws.words) out.append(w);
  return out.slice(0, ws.stream_bits);
}

BitVec read_bits_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return BitVec::from_text(text);
}

void write_bits_text(const BitVec& bits, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << bits.to_text() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

BitVec read_bits_packed(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  uint8_t hdr[8];
  if (!in.read(reinterpret_cast<char*>(hdr), 8))
    throw std::runtime_error("truncated packed bit file: " + path);
  uint64_t nbits = 0;
  for (int i = 7; i >= 0; --i) nbits = (nbits << 8) | hdr[i];
  std::vector<char> bytes((nbits + 7) / 8);
  if (!bytes.empty() && !in.read(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw std::runtime_error("truncated packed bit file: " + path);
  BitVec out(nbits);
  for (uint64_t i = 0; i < nbits; ++i)
    out[i] = (static_cast<uint8_t>(bytes[i >> 3]) >> (i & 7)) & 1;
  return out;
}

void write_bits_packed(const BitVec& bits, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  uint64_t nbits = bits.size();
  uint8_t hdr[8];
  for (int i = 0; i < 8; ++i) hdr[i] = static_cast<uint8_t>(nbits >> (8 * i));
  out.write(reinterpret_cast<const char*>(hdr), 8);
  std::vector<uint8_t> bytes((nbits + 7) / 8, 0);
  for (uint64_t i = 0; i < nbits; ++i)
    if (bits[i]) bytes[i >> 3] |= static_cast<uint8_t>(1u << (i & 7));
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace framesync
