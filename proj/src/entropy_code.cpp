#include "occ/entropy_code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace occ {

std::vector<std::uint8_t> pack_msb_first(const BitString& bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

std::string bits_to_hex(const BitString& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::uint8_t byte : pack_msb_first(bits)) {
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0xF]);
    }
    return out;
}

int shannon_length(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("shannon_length: p must be > 0");
    if (p >= 1.0) return 0;
    // Exact ceil(-log2 p) for the double's value: smallest k with p >= 2^-k.
    // ldexp and the comparison are exact, so dyadic probabilities get their
    // mathematical length with no float-noise misclassification.
    int k = 1;
    while (std::ldexp(p, k) < 1.0) {
        if (++k > 1100) throw std::invalid_argument("shannon_length: probability underflow");
    }
    return k;
}

Codebook Codebook::build(std::span<const double> probs) {
    const std::size_t n = probs.size();
    Codebook book;
    book.lengths_.assign(n, -1);
    book.words_.assign(n, {});

    std::vector<int> order;
    order.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (probs[i] < 0.0) throw std::invalid_argument("Codebook: negative probability");
        if (probs[i] > 0.0) order.push_back(static_cast<int>(i));
    }
    if (order.empty()) throw std::invalid_argument("Codebook: all-zero distribution");

    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (probs[static_cast<std::size_t>(a)] != probs[static_cast<std::size_t>(b)])
            return probs[static_cast<std::size_t>(a)] > probs[static_cast<std::size_t>(b)];
        return a < b;
    });
    book.support_ = order;

    if (order.size() == 1) {
        book.lengths_[static_cast<std::size_t>(order[0])] = 0;
        return book;
    }

    // Canonical assignment: lengths are nondecreasing in this order, so the
    // running code value (current codeword, left-aligned) never overflows
    // while the Kraft sum stays <= 1.
    BitString code;  // current codeword bits
    bool first = true;
    for (int sym : order) {
        // length 0 can only arise from p == 1.0 next to stray positive mass
        // inside the sum tolerance; a multi-symbol support needs len >= 1.
        const int len = std::max(1, shannon_length(probs[static_cast<std::size_t>(sym)]));
        if (first) {
            code.assign(static_cast<std::size_t>(len), 0);
            first = false;
        } else {
            // Increment the previous codeword as a binary number...
            int i = static_cast<int>(code.size()) - 1;
            for (; i >= 0; --i) {
                if (code[static_cast<std::size_t>(i)] == 0) {
                    code[static_cast<std::size_t>(i)] = 1;
                    break;
                }
                code[static_cast<std::size_t>(i)] = 0;
            }
            if (i < 0) throw std::logic_error("Codebook: canonical code overflow (Kraft > 1)");
            // ...then extend to the new length.
            code.resize(static_cast<std::size_t>(len), 0);
        }
        book.lengths_[static_cast<std::size_t>(sym)] = len;
        book.words_[static_cast<std::size_t>(sym)] = code;
    }
    return book;
}

bool Codebook::in_support(int sym) const {
    return sym >= 0 && static_cast<std::size_t>(sym) < lengths_.size() &&
           lengths_[static_cast<std::size_t>(sym)] >= 0;
}

Message Codebook::encode(int sym) const {
    if (!in_support(sym)) throw std::out_of_range("Codebook::encode: symbol outside support");
    return Message{words_[static_cast<std::size_t>(sym)]};
}

std::pair<int, std::size_t> Codebook::decode(const BitString& bits) const {
    if (support_.size() == 1) return {support_[0], 0};
    for (int sym : support_) {
        const BitString& w = words_[static_cast<std::size_t>(sym)];
        if (w.size() > bits.size()) continue;
        if (std::equal(w.begin(), w.end(), bits.begin())) return {sym, w.size()};
    }
    throw std::runtime_error("Codebook::decode: no codeword matches (corrupt stream)");
}

double Codebook::kraft_sum() const {
    double s = 0.0;
    for (int sym : support_) s += std::exp2(-static_cast<double>(lengths_[static_cast<std::size_t>(sym)]));
    return s;
}

}  // namespace occ
