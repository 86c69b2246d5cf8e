#include "occ/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "occ/rng.hpp"

namespace occ {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

std::vector<std::uint8_t> pattern_from_json(const json& arr) {
    std::vector<std::uint8_t> out;
    for (const auto& v : arr) {
        const int b = v.get<int>();
        if (b != 0 && b != 1) fail("erasure pattern entries must be 0 or 1");
        out.push_back(static_cast<std::uint8_t>(b));
    }
    return out;
}

SourceConfig parse_source(const json& j);

SourceConfig parse_source(const json& j) {
    SourceConfig s;
    const std::string kind = lower(j.value("kind", "markov"));
    if (kind == "markov") {
        s.kind = SourceConfig::Kind::Markov;
        s.markov.order = j.value("order", 2);
        s.markov.concentration = j.value("concentration", 0.2);
        s.markov.branch = j.value("branch", 0);
        s.markov.seed = j.value("seed", std::uint64_t{1});
    } else if (kind == "file") {
        s.kind = SourceConfig::Kind::File;
        s.path = j.at("path").get<std::string>();
        s.format = lower(j.value("format", "u16le"));
        if (s.format != "u16le" && s.format != "json") fail("source format must be u16le or json");
    } else if (kind == "concat") {
        s.kind = SourceConfig::Kind::Concat;
        if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
            fail("concat source needs a non-empty segments array");
        for (const auto& seg : j["segments"]) {
            const long len = seg.at("length").get<long>();
            if (len <= 0) fail("segment length must be > 0");
            s.segments.emplace_back(parse_source(seg), len);
        }
    } else {
        fail("unknown source kind '" + kind + "'");
    }
    return s;
}

json source_to_json(const SourceConfig& s) {
    json j;
    switch (s.kind) {
        case SourceConfig::Kind::Markov:
            j["kind"] = "markov";
            j["order"] = s.markov.order;
            j["concentration"] = s.markov.concentration;
            j["branch"] = s.markov.branch;
            j["seed"] = s.markov.seed;
            break;
        case SourceConfig::Kind::File:
            j["kind"] = "file";
            j["path"] = s.path;
            j["format"] = s.format;
            break;
        case SourceConfig::Kind::Concat: {
            j["kind"] = "concat";
            json segs = json::array();
            for (const auto& [src, len] : s.segments) {
                json seg = source_to_json(src);
                seg["length"] = len;
                segs.push_back(seg);
            }
            j["segments"] = segs;
            break;
        }
    }
    return j;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Ocsc: return "ocsc";
        case Scheme::Ocrdc: return "ocrdc";
        case Scheme::CaOcsc: return "ca-ocsc";
        case Scheme::CaOcrdc: return "ca-ocrdc";
        case Scheme::LlmzipDropout: return "llmzip-dropout";
        case Scheme::BlockCsc: return "block-csc";
        case Scheme::BlockCrdc: return "block-crdc";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    const std::string n = lower(name);
    if (n == "ocsc") return Scheme::Ocsc;
    if (n == "ocrdc") return Scheme::Ocrdc;
    if (n == "ca-ocsc" || n == "caocsc") return Scheme::CaOcsc;
    if (n == "ca-ocrdc" || n == "caocrdc") return Scheme::CaOcrdc;
    if (n == "llmzip-dropout" || n == "llmzipdropout" || n == "dropout") return Scheme::LlmzipDropout;
    if (n == "block-csc" || n == "blockcsc") return Scheme::BlockCsc;
    if (n == "block-crdc" || n == "blockcrdc") return Scheme::BlockCrdc;
    fail("unknown scheme '" + name + "'");
}

bool scheme_is_channel_adaptive(Scheme s) {
    return s == Scheme::CaOcsc || s == Scheme::CaOcrdc;
}

bool scheme_is_sparse_family(Scheme s) {
    return s == Scheme::Ocsc || s == Scheme::CaOcsc || s == Scheme::BlockCsc;
}

double RunConfig::effective_epsilon() const {
    if (epsilon.has_value()) return *epsilon;
    return std::min(0.05, D / 2.0);
}

RunConfig parse_run_config(const json& j) {
    RunConfig c;
    c.scheme = parse_scheme(j.value("scheme", "ocsc"));
    c.T = j.value("T", 3000L);
    c.seed = j.value("seed", std::uint64_t{1});
    c.alphabet_size = j.value("alphabet_size", 64);

    if (j.contains("source")) c.source = parse_source(j["source"]);
    if (c.source.kind == SourceConfig::Kind::Markov && !j.contains("source"))
        c.source.markov.seed = c.seed;

    if (j.contains("predictor")) {
        const json& p = j["predictor"];
        const std::string kind = lower(p.value("kind", "markov"));
        if (kind == "uniform") {
            c.predictor.kind = PredictorConfig::Kind::Uniform;
        } else if (kind == "markov") {
            c.predictor.kind = PredictorConfig::Kind::Markov;
            c.predictor.order = p.value("order", 2);
            c.predictor.alpha = p.value("alpha", 0.05);
            if (p.contains("train")) {
                const json& t = p["train"];
                const std::string mode = lower(t.value("mode", "source"));
                if (mode == "none") c.predictor.train.mode = PredictorTrainConfig::Mode::None;
                else if (mode == "source") c.predictor.train.mode = PredictorTrainConfig::Mode::Source;
                else if (mode == "file") c.predictor.train.mode = PredictorTrainConfig::Mode::File;
                else fail("unknown predictor train mode '" + mode + "'");
                c.predictor.train.length = t.value("length", 100000L);
                if (t.contains("seed")) c.predictor.train.seed = t["seed"].get<std::uint64_t>();
                c.predictor.train.path = t.value("path", "");
                c.predictor.train.format = lower(t.value("format", "u16le"));
            }
        } else if (kind == "scripted") {
            c.predictor.kind = PredictorConfig::Kind::Scripted;
            c.predictor.script_path = p.at("path").get<std::string>();
            c.predictor.floor_alpha = p.value("floor_alpha", 0.0);
        } else {
            fail("unknown predictor kind '" + kind + "'");
        }
        c.predictor.adapt = p.value("adapt", false);
    }

    if (j.contains("distortion")) {
        const json& d = j["distortion"];
        const std::string kind = lower(d.value("kind", "outage"));
        if (kind == "outage") {
            c.distortion.kind = DistortionConfig::Kind::Outage;
        } else if (kind == "cosine") {
            if (d.contains("embeddings")) {
                c.distortion.kind = DistortionConfig::Kind::CosineFile;
                c.distortion.path = d["embeddings"].get<std::string>();
            } else {
                c.distortion.kind = DistortionConfig::Kind::CosineSynthetic;
                c.distortion.dim = d.value("dim", std::size_t{16});
                c.distortion.seed = d.value("seed", std::uint64_t{1});
            }
        } else if (kind == "matrix") {
            c.distortion.kind = DistortionConfig::Kind::MatrixFile;
            c.distortion.path = d.at("path").get<std::string>();
        } else {
            fail("unknown distortion kind '" + kind + "'");
        }
    }

    if (j.contains("channel")) {
        const json& ch = j["channel"];
        const std::string kind = lower(ch.value("kind", "error-free"));
        if (kind == "error-free" || kind == "errorfree" || kind == "ideal") {
            c.channel.kind = ChannelConfig::Kind::ErrorFree;
        } else if (kind == "deterministic" || kind == "pattern") {
            c.channel.kind = ChannelConfig::Kind::Deterministic;
            if (ch.contains("pattern") && ch["pattern"].is_array())
                c.channel.pattern = pattern_from_json(ch["pattern"]);
            else if (ch.contains("path"))
                c.channel.pattern_path = ch["path"].get<std::string>();
            else
                fail("deterministic channel needs a pattern or a path");
            c.channel.wrap = ch.value("wrap", true);
        } else if (kind == "bernoulli") {
            c.channel.kind = ChannelConfig::Kind::Bernoulli;
            if (ch.contains("schedule")) {
                if (ch["schedule"].is_array())
                    c.channel.schedule = ch["schedule"].get<std::vector<double>>();
                else
                    c.channel.schedule_path = ch["schedule"].get<std::string>();
            } else {
                c.channel.e = ch.at("e").get<double>();
            }
            c.channel.wrap = ch.value("wrap", true);
            c.channel.seed = ch.value("seed", std::uint64_t{1});
        } else if (kind == "gilbert-elliott" || kind == "ge") {
            c.channel.kind = ChannelConfig::Kind::GilbertElliott;
            c.channel.a = ch.at("a").get<double>();
            c.channel.b = ch.at("b").get<double>();
            c.channel.e_bad = ch.at("e_b").get<double>();
            c.channel.e_good = ch.at("e_g").get<double>();
            c.channel.seed = ch.value("seed", std::uint64_t{1});
            if (ch.contains("initial")) c.channel.initial_state = ch["initial"].get<std::string>();
        } else {
            fail("unknown channel kind '" + kind + "'");
        }
    }

    const json& h = j.contains("hyper") ? j["hyper"] : j;
    c.D = h.value("D", 0.1);
    c.eta = h.value("eta", 0.1);
    c.lambda0 = h.value("lambda0", 0.1);
    if (h.contains("epsilon") && !h["epsilon"].is_null()) c.epsilon = h["epsilon"].get<double>();
    if (h.contains("fixed_s") && !h["fixed_s"].is_null()) c.fixed_s = h["fixed_s"].get<double>();

    if (j.contains("assumption3")) {
        const json& a3 = j["assumption3"];
        Assumption3Config a;
        a.A = a3.at("A").get<double>();
        a.psi = SublinearPsi::parse(lower(a3.value("psi_family", "constant")), a3.value("psi_c", 0.0));
        c.assumption3 = a;
    }

    if (j.contains("sweep")) {
        SweepConfig sw;
        sw.d_values = j["sweep"].value("d_values", std::vector<double>{});
        sw.seeds = j["sweep"].value("seeds", std::vector<std::uint64_t>{1});
        c.sweep = sw;
    }

    if (j.contains("block_search")) {
        const json& bs = j["block_search"];
        c.block_search.s_min = bs.value("s_min", c.block_search.s_min);
        c.block_search.s_max = bs.value("s_max", c.block_search.s_max);
        c.block_search.points = bs.value("points", c.block_search.points);
    }

    c.trace_bits = j.value("trace_bits", false);
    validate_run_config(c);
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return parse_run_config(j);
}

nlohmann::json run_config_to_json(const RunConfig& c) {
    json j;
    j["scheme"] = scheme_name(c.scheme);
    j["T"] = c.T;
    j["seed"] = c.seed;
    j["alphabet_size"] = c.alphabet_size;
    j["source"] = source_to_json(c.source);

    json p;
    switch (c.predictor.kind) {
        case PredictorConfig::Kind::Uniform: p["kind"] = "uniform"; break;
        case PredictorConfig::Kind::Markov:
            p["kind"] = "markov";
            p["order"] = c.predictor.order;
            p["alpha"] = c.predictor.alpha;
            {
                json t;
                switch (c.predictor.train.mode) {
                    case PredictorTrainConfig::Mode::None: t["mode"] = "none"; break;
                    case PredictorTrainConfig::Mode::Source:
                        t["mode"] = "source";
                        t["length"] = c.predictor.train.length;
                        if (c.predictor.train.seed) t["seed"] = *c.predictor.train.seed;
                        break;
                    case PredictorTrainConfig::Mode::File:
                        t["mode"] = "file";
                        t["path"] = c.predictor.train.path;
                        t["format"] = c.predictor.train.format;
                        break;
                }
                p["train"] = t;
            }
            break;
        case PredictorConfig::Kind::Scripted:
            p["kind"] = "scripted";
            p["path"] = c.predictor.script_path;
            p["floor_alpha"] = c.predictor.floor_alpha;
            break;
    }
    p["adapt"] = c.predictor.adapt;
    j["predictor"] = p;

    json d;
    switch (c.distortion.kind) {
        case DistortionConfig::Kind::Outage: d["kind"] = "outage"; break;
        case DistortionConfig::Kind::CosineFile:
            d["kind"] = "cosine";
            d["embeddings"] = c.distortion.path;
            break;
        case DistortionConfig::Kind::CosineSynthetic:
            d["kind"] = "cosine";
            d["dim"] = c.distortion.dim;
            d["seed"] = c.distortion.seed;
            break;
        case DistortionConfig::Kind::MatrixFile:
            d["kind"] = "matrix";
            d["path"] = c.distortion.path;
            break;
    }
    j["distortion"] = d;

    json ch;
    switch (c.channel.kind) {
        case ChannelConfig::Kind::ErrorFree: ch["kind"] = "error-free"; break;
        case ChannelConfig::Kind::Deterministic:
            ch["kind"] = "deterministic";
            if (!c.channel.pattern_path.empty()) ch["path"] = c.channel.pattern_path;
            else ch["pattern"] = c.channel.pattern;
            ch["wrap"] = c.channel.wrap;
            break;
        case ChannelConfig::Kind::Bernoulli:
            ch["kind"] = "bernoulli";
            if (!c.channel.schedule_path.empty()) ch["schedule"] = c.channel.schedule_path;
            else if (!c.channel.schedule.empty()) ch["schedule"] = c.channel.schedule;
            else ch["e"] = c.channel.e;
            ch["seed"] = c.channel.seed;
            break;
        case ChannelConfig::Kind::GilbertElliott:
            ch["kind"] = "gilbert-elliott";
            ch["a"] = c.channel.a;
            ch["b"] = c.channel.b;
            ch["e_b"] = c.channel.e_bad;
            ch["e_g"] = c.channel.e_good;
            ch["seed"] = c.channel.seed;
            if (c.channel.initial_state) ch["initial"] = *c.channel.initial_state;
            break;
    }
    j["channel"] = ch;

    json h;
    h["D"] = c.D;
    h["eta"] = c.eta;
    h["lambda0"] = c.lambda0;
    if (c.epsilon) h["epsilon"] = *c.epsilon;
    if (c.fixed_s) h["fixed_s"] = *c.fixed_s;
    j["hyper"] = h;

    if (c.assumption3) {
        json a;
        a["A"] = c.assumption3->A;
        a["psi_family"] = c.assumption3->psi.family_name();
        a["psi_c"] = c.assumption3->psi.c;
        j["assumption3"] = a;
    }
    if (c.sweep) {
        j["sweep"] = {{"d_values", c.sweep->d_values}, {"seeds", c.sweep->seeds}};
    }
    j["trace_bits"] = c.trace_bits;
    return j;
}

Channel build_channel(const RunConfig& c) {
    const ChannelConfig& ch = c.channel;
    switch (ch.kind) {
        case ChannelConfig::Kind::ErrorFree:
            return Channel::error_free();
        case ChannelConfig::Kind::Deterministic: {
            std::vector<std::uint8_t> pattern = ch.pattern;
            if (!ch.pattern_path.empty()) {
                for (Symbol s : load_symbols_json(ch.pattern_path)) {
                    if (s != 0 && s != 1) fail("pattern file entries must be 0 or 1");
                    pattern.push_back(static_cast<std::uint8_t>(s));
                }
            }
            return Channel::deterministic(std::move(pattern), ch.wrap);
        }
        case ChannelConfig::Kind::Bernoulli: {
            const std::uint64_t seed = derive_seed(c.seed, ch.seed ^ 0xC4A11ULL);
            if (!ch.schedule_path.empty()) {
                std::vector<double> sched;
                std::ifstream in(ch.schedule_path);
                if (!in) fail("cannot open schedule file: " + ch.schedule_path);
                nlohmann::json j;
                in >> j;
                sched = j.get<std::vector<double>>();
                return Channel::bernoulli_schedule(std::move(sched), ch.wrap, seed);
            }
            if (!ch.schedule.empty())
                return Channel::bernoulli_schedule(ch.schedule, ch.wrap, seed);
            return Channel::bernoulli(ch.e, seed);
        }
        case ChannelConfig::Kind::GilbertElliott: {
            const std::uint64_t seed = derive_seed(c.seed, ch.seed ^ 0x6E11ULL);
            std::optional<GeState> init;
            if (ch.initial_state) {
                const std::string s = lower(*ch.initial_state);
                if (s == "g" || s == "good") init = GeState::Good;
                else if (s == "b" || s == "bad") init = GeState::Bad;
                else if (s != "stationary") fail("gilbert-elliott initial must be G, B or stationary");
            }
            return Channel::gilbert_elliott(ch.a, ch.b, ch.e_bad, ch.e_good, seed, init);
        }
    }
    fail("unreachable channel kind");
}

DistortionMeasure build_distortion(const RunConfig& c) {
    switch (c.distortion.kind) {
        case DistortionConfig::Kind::Outage:
            return DistortionMeasure::outage();
        case DistortionConfig::Kind::CosineFile: {
            auto emb = load_embeddings_json(c.distortion.path);
            if (emb.size() != static_cast<std::size_t>(c.alphabet_size))
                fail("embedding table size does not match the alphabet");
            return cosine_matrix_from_embeddings(emb);
        }
        case DistortionConfig::Kind::CosineSynthetic: {
            auto emb = synthetic_embeddings(static_cast<std::size_t>(c.alphabet_size),
                                            c.distortion.dim, c.distortion.seed);
            return cosine_matrix_from_embeddings(emb);
        }
        case DistortionConfig::Kind::MatrixFile: {
            auto rows = load_embeddings_json(c.distortion.path);
            const std::size_t n = rows.size();
            std::vector<double> flat;
            double d_max = 0.0;
            for (const auto& r : rows) {
                if (r.size() != n) fail("distortion matrix must be square");
                for (double v : r) {
                    flat.push_back(v);
                    d_max = std::max(d_max, v);
                }
            }
            if (n != static_cast<std::size_t>(c.alphabet_size))
                fail("distortion matrix size does not match the alphabet");
            return DistortionMeasure::matrix(n, std::move(flat), d_max > 0 ? d_max : 1.0);
        }
    }
    fail("unreachable distortion kind");
}

void validate_run_config(const RunConfig& c) {
    if (c.T < 1) fail("T must be >= 1");
    if (c.alphabet_size < 2) fail("alphabet_size must be >= 2");
    if (!(c.eta > 0.0)) fail("eta must be > 0");
    if (c.D < 0.0) fail("D must be >= 0");
    if (scheme_is_sparse_family(c.scheme) || c.scheme == Scheme::LlmzipDropout) {
        if (c.D > 1.0) fail("D must be in [0,1] for outage-style schemes");
    }
    if (scheme_is_channel_adaptive(c.scheme)) {
        const double eps = c.effective_epsilon();
        if (!(eps > 0.0)) fail("channel-adaptive schemes require epsilon > 0");
        if (!(c.D - eps > 0.0)) fail("channel-adaptive schemes require D > epsilon");
    }
    bool channel_can_erase = c.channel.kind != ChannelConfig::Kind::ErrorFree;
    if (c.channel.kind == ChannelConfig::Kind::Deterministic && c.channel.pattern_path.empty()) {
        channel_can_erase = false;
        for (auto v : c.channel.pattern) channel_can_erase |= v != 0;
    }
    if (c.channel.kind == ChannelConfig::Kind::Bernoulli && c.channel.schedule_path.empty() &&
        c.channel.schedule.empty() && c.channel.e == 0.0)
        channel_can_erase = false;
    if (channel_can_erase && c.scheme == Scheme::Ocsc)
        fail("plain threshold compression cannot keep the decoder synchronized over an erasing "
             "channel; use scheme ca-ocsc");
    if (channel_can_erase && (c.scheme == Scheme::BlockCsc || c.scheme == Scheme::BlockCrdc))
        fail("block baselines are defined for error-free channels only");
    if ((c.scheme == Scheme::BlockCsc || c.scheme == Scheme::BlockCrdc) && !c.fixed_s &&
        c.block_search.points < 1)
        fail("block schemes need fixed_s or a block_search grid");
    if (c.predictor.kind == PredictorConfig::Kind::Markov) {
        if (!(c.predictor.alpha > 0.0 && c.predictor.alpha <= 1.0))
            fail("predictor alpha must be in (0,1]");
    }
}

}  // namespace occ
