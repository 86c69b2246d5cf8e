#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace occ {

// Symbols are dense indices 0..|X|-1. kOutage is the reserved sentinel used in
// traces and selections for the outage symbol x_o, which lives outside the
// source alphabet.
using Symbol = std::int32_t;
inline constexpr Symbol kOutage = -1;

struct Alphabet {
    std::int32_t size = 0;

    explicit Alphabet(std::int32_t n);
    bool contains(Symbol x) const { return x >= 0 && x < size; }
};

// Probability vector over a finite alphabet. Validated on construction:
// entries >= 0 and unit sum within 1e-9.
class Distribution {
  public:
    explicit Distribution(std::vector<double> probs);
    static Distribution uniform(std::size_t n);

    double at(Symbol x) const { return p_[static_cast<std::size_t>(x)]; }
    std::size_t size() const { return p_.size(); }
    const std::vector<double>& probs() const { return p_; }

    // Ties broken by smallest index.
    Symbol argmax() const;

    double min_prob() const;
    double entropy_bits() const;

  private:
    std::vector<double> p_;
};

// Bounded per-symbol distortion d : X x X -> [0, d_max] with zero diagonal.
// Outage kind is the 0-1 loss and works for any alphabet size; Matrix kind
// stores an explicit |X| x |X| table.
class DistortionMeasure {
  public:
    enum class Kind { Outage, Matrix };

    static DistortionMeasure outage();
    static DistortionMeasure matrix(std::size_t n, std::vector<double> values, double d_max);

    double operator()(Symbol x, Symbol x_hat) const;
    Kind kind() const { return kind_; }
    double d_max() const { return d_max_; }
    // 0 means "any" (outage kind).
    std::size_t alphabet_size() const { return n_; }

  private:
    DistortionMeasure(Kind k, std::size_t n, std::vector<double> v, double dm)
        : kind_(k), n_(n), values_(std::move(v)), d_max_(dm) {}

    Kind kind_;
    std::size_t n_ = 0;
    std::vector<double> values_;  // row-major, Matrix kind only
    double d_max_ = 1.0;
};

double outage_distortion(Symbol x, Symbol x_hat);

// Builds the normalized-cosine distance table d(x, x') = (1 - cos(phi(x), phi(x'))) / 2.
// Every embedding must have nonzero norm. d_max = 1, zero diagonal, symmetric.
DistortionMeasure cosine_matrix_from_embeddings(const std::vector<std::vector<double>>& embeddings);

// Seeded synthetic embedding table: n unit vectors of the given dimension.
std::vector<std::vector<double>> synthetic_embeddings(std::size_t n, std::size_t dim, std::uint64_t seed);

// File I/O for the external interfaces: embedding tables as a JSON array of
// arrays, symbol streams as u16 little-endian binary or a JSON array.
std::vector<std::vector<double>> load_embeddings_json(const std::string& path);
std::vector<Symbol> load_symbols_u16le(const std::string& path);
std::vector<Symbol> load_symbols_json(const std::string& path);
void save_symbols_u16le(const std::string& path, std::span<const Symbol> symbols);
void save_symbols_json(const std::string& path, std::span<const Symbol> symbols);

}  // namespace occ
