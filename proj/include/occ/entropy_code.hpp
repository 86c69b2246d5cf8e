#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace occ {

// Bits are stored one per byte (0/1); messages stay abstract bit vectors
// inside the simulator and are packed MSB-first only for serialization.
using BitString = std::vector<std::uint8_t>;

struct Message {
    BitString bits;
    std::size_t length() const { return bits.size(); }
};

std::vector<std::uint8_t> pack_msb_first(const BitString& bits);
std::string bits_to_hex(const BitString& bits);

// Shannon codeword length ceil(-log2 p), guarded against float noise in log2.
int shannon_length(double p);

// Prefix-free Shannon code over a generic index set 0..n-1. Zero-probability
// indices are excluded from the support. Construction is deterministic:
// indices sorted by (descending probability, ascending index), lengths
// ceil(-log2 p), canonical codeword assignment. A single-symbol support gets
// a zero-length codeword; the decoder infers the unique symbol.
class Codebook {
  public:
    static Codebook build(std::span<const double> probs);

    std::size_t symbol_count() const { return lengths_.size(); }
    std::size_t support_size() const { return support_.size(); }
    bool in_support(int sym) const;
    // -1 for excluded symbols; 0 only in the singleton-support case.
    int length(int sym) const { return lengths_[static_cast<std::size_t>(sym)]; }
    const BitString& codeword(int sym) const { return words_[static_cast<std::size_t>(sym)]; }
    const std::vector<int>& support() const { return support_; }

    Message encode(int sym) const;
    // Returns (symbol, bits consumed). The bit string must begin with a valid
    // codeword; otherwise the stream is corrupt and decoding throws.
    std::pair<int, std::size_t> decode(const BitString& bits) const;

    double kraft_sum() const;

  private:
    std::vector<int> lengths_;       // per symbol, -1 = excluded
    std::vector<BitString> words_;   // per symbol, empty if excluded
    std::vector<int> support_;       // canonical order (descending p, ascending index)
};

}  // namespace occ
