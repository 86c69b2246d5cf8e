#include "occ/types.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "occ/rng.hpp"

namespace occ {

namespace {
constexpr double kSumTol = 1e-9;
}

Alphabet::Alphabet(std::int32_t n) : size(n) {
    if (n < 2) throw std::invalid_argument("Alphabet: size must be >= 2");
}

Distribution::Distribution(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw std::invalid_argument("Distribution: empty probability vector");
    double sum = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0)) throw std::invalid_argument("Distribution: negative or NaN entry");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kSumTol)
        throw std::invalid_argument("Distribution: probabilities sum to " + std::to_string(sum));
}

Distribution Distribution::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Distribution::uniform: n must be > 0");
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Symbol Distribution::argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p_.size(); ++i)
        if (p_[i] > p_[best]) best = i;
    return static_cast<Symbol>(best);
}

double Distribution::min_prob() const {
    double m = p_[0];
    for (double v : p_) m = std::min(m, v);
    return m;
}

double Distribution::entropy_bits() const {
    double h = 0.0;
    for (double v : p_)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

DistortionMeasure DistortionMeasure::outage() {
    return DistortionMeasure(Kind::Outage, 0, {}, 1.0);
}

DistortionMeasure DistortionMeasure::matrix(std::size_t n, std::vector<double> values, double d_max) {
    if (n < 2) throw std::invalid_argument("DistortionMeasure: alphabet size must be >= 2");
    if (values.size() != n * n) throw std::invalid_argument("DistortionMeasure: matrix size mismatch");
    if (!(d_max > 0.0)) throw std::invalid_argument("DistortionMeasure: d_max must be > 0");
    for (std::size_t i = 0; i < n; ++i) {
        double& diag = values[i * n + i];
        if (std::fabs(diag) > 1e-9)
            throw std::invalid_argument("DistortionMeasure: nonzero diagonal entry");
        diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double& v = values[i * n + j];
            if (v < 0.0 && v > -1e-9) v = 0.0;
            if (v > d_max && v < d_max + 1e-9) v = d_max;
            if (v < 0.0 || v > d_max)
                throw std::invalid_argument("DistortionMeasure: entry outside [0, d_max]");
        }
    }
    return DistortionMeasure(Kind::Matrix, n, std::move(values), d_max);
}

double DistortionMeasure::operator()(Symbol x, Symbol x_hat) const {
    if (kind_ == Kind::Outage) return outage_distortion(x, x_hat);
    if (x < 0 || x_hat < 0 || static_cast<std::size_t>(x) >= n_ || static_cast<std::size_t>(x_hat) >= n_)
        throw std::out_of_range("DistortionMeasure: symbol index out of range");
    return values_[static_cast<std::size_t>(x) * n_ + static_cast<std::size_t>(x_hat)];
}

double outage_distortion(Symbol x, Symbol x_hat) {
    return x == x_hat ? 0.0 : 1.0;
}

DistortionMeasure cosine_matrix_from_embeddings(const std::vector<std::vector<double>>& embeddings) {
    const std::size_t n = embeddings.size();
    if (n < 2) throw std::invalid_argument("cosine_matrix_from_embeddings: need at least 2 embeddings");
    const std::size_t dim = embeddings[0].size();
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (embeddings[i].size() != dim)
            throw std::invalid_argument("cosine_matrix_from_embeddings: ragged embedding table");
        double s = 0.0;
        for (double v : embeddings[i]) s += v * v;
        norms[i] = std::sqrt(s);
        if (!(norms[i] > 0.0))
            throw std::invalid_argument("cosine_matrix_from_embeddings: zero-norm embedding");
    }
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += embeddings[i][k] * embeddings[j][k];
            double d = 0.5 * (1.0 - dot / (norms[i] * norms[j]));
            if (d < 0.0) d = 0.0;
            if (d > 1.0) d = 1.0;
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    return DistortionMeasure::matrix(n, std::move(values), 1.0);
}

std::vector<std::vector<double>> synthetic_embeddings(std::size_t n, std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw std::invalid_argument("synthetic_embeddings: dim must be > 0");
    std::mt19937_64 g(derive_seed(seed, 0xE3B));
    std::vector<std::vector<double>> emb(n, std::vector<double>(dim));
    for (auto& v : emb) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& x : v) {
                x = normal01(g);
                norm2 += x * x;
            }
        } while (norm2 <= 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
    }
    return emb;
}

std::vector<std::vector<double>> load_embeddings_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings file: " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_array()) throw std::runtime_error("embeddings file must be a JSON array of arrays");
    std::vector<std::vector<double>> emb;
    emb.reserve(j.size());
    for (const auto& row : j) emb.push_back(row.get<std::vector<double>>());
    return emb;
}

std::vector<Symbol> load_symbols_u16le(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open symbol file: " + path);
    std::vector<Symbol> out;
    unsigned char buf[2];
    while (in.read(reinterpret_cast<char*>(buf), 2))
        out.push_back(static_cast<Symbol>(buf[0] | (buf[1] << 8)));
    if (in.gcount() != 0) throw std::runtime_error("symbol file has odd byte count: " + path);
    return out;
}

std::vector<Symbol> load_symbols_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open symbol file: " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_array()) throw std::runtime_error("symbol file must be a JSON array");
    std::vector<Symbol> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(v.get<Symbol>());
    return out;
}

void save_symbols_u16le(const std::string& path, std::span<const Symbol> symbols) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write symbol file: " + path);
    for (Symbol s : symbols) {
        if (s < 0 || s > 0xFFFF) throw std::runtime_error("symbol out of u16 range");
        const unsigned char buf[2] = {static_cast<unsigned char>(s & 0xFF),
                                      static_cast<unsigned char>((s >> 8) & 0xFF)};
        out.write(reinterpret_cast<const char*>(buf), 2);
    }
}

void save_symbols_json(const std::string& path, std::span<const Symbol> symbols) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write symbol file: " + path);
    nlohmann::json j = nlohmann::json::array();
    for (Symbol s : symbols) j.push_back(s);
    out << j.dump() << "\n";
}

}  // namespace occ
