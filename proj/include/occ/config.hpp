#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "occ/channel.hpp"
#include "occ/types.hpp"

namespace occ {

enum class Scheme { Ocsc, Ocrdc, CaOcsc, CaOcrdc, LlmzipDropout, BlockCsc, BlockCrdc };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);
bool scheme_is_channel_adaptive(Scheme s);
bool scheme_is_sparse_family(Scheme s);

struct MarkovSourceConfig {
    int order = 2;
    double concentration = 0.2;
    int branch = 0;  // 0 = full support per context
    std::uint64_t seed = 1;
};

struct SourceConfig {
    enum class Kind { Markov, File, Concat };
    Kind kind = Kind::Markov;
    MarkovSourceConfig markov;
    std::string path;
    std::string format = "u16le";  // or "json"
    // Concat: per-segment source + length.
    std::vector<std::pair<SourceConfig, long>> segments;
};

struct PredictorTrainConfig {
    enum class Mode { None, Source, File };
    Mode mode = Mode::Source;
    long length = 100000;                      // Source mode
    std::optional<std::uint64_t> seed;         // defaults to a seed derived from the source
    std::string path;                          // File mode
    std::string format = "u16le";
};

struct PredictorConfig {
    enum class Kind { Uniform, Markov, Scripted };
    Kind kind = Kind::Markov;
    int order = 2;
    double alpha = 0.05;
    PredictorTrainConfig train;
    std::string script_path;
    double floor_alpha = 0.0;
    bool adapt = false;  // online count updates during the episode (on reconstructions)
};

struct DistortionConfig {
    enum class Kind { Outage, CosineFile, CosineSynthetic, MatrixFile };
    Kind kind = Kind::Outage;
    std::string path;
    std::size_t dim = 16;      // CosineSynthetic
    std::uint64_t seed = 1;    // CosineSynthetic
};

struct ChannelConfig {
    enum class Kind { ErrorFree, Deterministic, Bernoulli, GilbertElliott };
    Kind kind = Kind::ErrorFree;
    std::vector<std::uint8_t> pattern;
    std::string pattern_path;
    bool wrap = true;
    double e = 0.0;
    std::vector<double> schedule;
    std::string schedule_path;
    double a = 0.0, b = 0.0, e_bad = 0.0, e_good = 0.0;
    std::optional<std::string> initial_state;  // "G" | "B" | unset = stationary
    std::uint64_t seed = 1;
};

struct Assumption3Config {
    double A = 0.0;
    SublinearPsi psi;
};

struct SweepConfig {
    std::vector<double> d_values;
    std::vector<std::uint64_t> seeds;
};

struct BlockSearchConfig {
    double s_min = 1e-4;
    double s_max = 1.0;
    int points = 32;  // geometric grid size; 0 is always prepended
};

struct RunConfig {
    Scheme scheme = Scheme::Ocsc;
    long T = 3000;
    std::uint64_t seed = 1;
    std::int32_t alphabet_size = 64;
    SourceConfig source;
    PredictorConfig predictor;
    DistortionConfig distortion;
    ChannelConfig channel;
    double D = 0.1;
    double eta = 0.1;
    double lambda0 = 0.1;
    std::optional<double> epsilon;   // default min(0.05, D/2) for adaptive schemes
    std::optional<double> fixed_s;   // block schemes
    std::optional<Assumption3Config> assumption3;
    std::optional<SweepConfig> sweep;
    BlockSearchConfig block_search;
    bool trace_bits = false;

    double effective_epsilon() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& c);

// Materialized channel / distortion / predictor builders shared by the
// episode runner and the tools.
Channel build_channel(const RunConfig& c);
DistortionMeasure build_distortion(const RunConfig& c);

// Throws with a descriptive message on contradictory settings (e.g. a plain
// threshold scheme over a channel that can erase, or D <= epsilon for the
// channel-adaptive schemes).
void validate_run_config(const RunConfig& c);

}  // namespace occ
