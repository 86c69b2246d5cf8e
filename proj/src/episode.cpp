#include "occ/episode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "occ/ca_controller.hpp"
#include "occ/channel.hpp"
#include "occ/entropy_code.hpp"
#include "occ/harness.hpp"
#include "occ/ocrdc.hpp"
#include "occ/ocsc.hpp"
#include "occ/predictor.hpp"
#include "occ/rng.hpp"
#include "occ/source.hpp"

namespace occ {

namespace {

constexpr double kBoundTol = 1e-9;

Predictor build_predictor(const RunConfig& cfg) {
    switch (cfg.predictor.kind) {
        case PredictorConfig::Kind::Uniform:
            return Predictor::uniform(cfg.alphabet_size);
        case PredictorConfig::Kind::Scripted:
            return Predictor::scripted_from_jsonl(cfg.alphabet_size, cfg.predictor.script_path,
                                                  cfg.predictor.floor_alpha);
        case PredictorConfig::Kind::Markov: {
            Predictor p = Predictor::markov(cfg.alphabet_size, cfg.predictor.order, cfg.predictor.alpha);
            const auto& tr = cfg.predictor.train;
            if (tr.mode == PredictorTrainConfig::Mode::Source) {
                MarkovSourceConfig src = cfg.source.kind == SourceConfig::Kind::Markov
                                             ? cfg.source.markov
                                             : MarkovSourceConfig{};
                if (cfg.source.kind == SourceConfig::Kind::Concat &&
                    cfg.source.segments.front().first.kind == SourceConfig::Kind::Markov)
                    src = cfg.source.segments.front().first.markov;
                // The training stream is a fresh draw from the same process.
                src.seed = tr.seed.value_or(derive_seed(src.seed, 0x7217A1ULL));
                MarkovSource gen(cfg.alphabet_size, src);
                const auto corpus = gen.generate(tr.length);
                p.train(corpus);
            } else if (tr.mode == PredictorTrainConfig::Mode::File) {
                const auto corpus = tr.format == "json" ? load_symbols_json(tr.path)
                                                        : load_symbols_u16le(tr.path);
                p.train(corpus);
            }
            return p;
        }
    }
    throw std::logic_error("build_predictor: unreachable");
}

struct Side {
    Predictor predictor;
    std::vector<Symbol> context;
    ConformalState conf;
    DistortionQueue queue;
    double delta_tgt = 0.0;  // adjustment in force at the current step
    std::mt19937_64 dropout_rng;

    explicit Side(Predictor p) : predictor(std::move(p)) {}
};

}  // namespace

EpisodeSummary run_episode(const RunConfig& cfg_in, const StepSink* sink) {
    RunConfig cfg = cfg_in;
    validate_run_config(cfg);

    const bool is_block = cfg.scheme == Scheme::BlockCsc || cfg.scheme == Scheme::BlockCrdc;
    if (is_block && !cfg.fixed_s) {
        // The block baselines are offline by definition: pick the
        // hindsight-optimal fixed hyperparameter first, then run with it.
        BlockSearchResult r = block_search(cfg);
        if (!r.feasible)
            throw std::runtime_error("block scheme: no feasible grid point for this target");
        cfg.fixed_s = r.s_star;
    }

    const bool sparse = scheme_is_sparse_family(cfg.scheme);
    const bool dropout = cfg.scheme == Scheme::LlmzipDropout;
    const bool adaptive = scheme_is_channel_adaptive(cfg.scheme);
    const bool conformal = cfg.scheme == Scheme::Ocsc || cfg.scheme == Scheme::Ocrdc || adaptive;
    const bool lossless = cfg.scheme == Scheme::Ocrdc && cfg.D == 0.0;

    const DistortionMeasure dm = build_distortion(cfg);
    if ((sparse || dropout) && dm.d_max() > 1.0 + 1e-12)
        throw std::invalid_argument(
            "outage-style schemes need distortions bounded by 1 so the erasure bit dominates "
            "the per-step distortion");

    Channel channel = build_channel(cfg);
    SourceOutput src = materialize_source(cfg.source, cfg.alphabet_size, cfg.T);

    Predictor prototype = build_predictor(cfg);
    if (prototype.alphabet_size() != cfg.alphabet_size)
        throw std::invalid_argument("predictor alphabet does not match the configuration");
    const std::optional<double> L = prototype.assumption_bound_L();
    const double eps = adaptive ? cfg.effective_epsilon() : 0.0;

    Side enc(prototype);
    Side dec(std::move(prototype));
    const std::uint64_t dropout_seed = derive_seed(cfg.seed, 0xD4070ULL);
    enc.dropout_rng.seed(dropout_seed);
    dec.dropout_rng.seed(dropout_seed);

    ConformalState init;
    init.lambda = cfg.lambda0;
    init.lambda0 = cfg.lambda0;
    init.eta = cfg.eta;
    init.target_d = cfg.D;
    init.epsilon = eps;
    enc.conf = dec.conf = init;
    enc.queue.epsilon = dec.queue.epsilon = eps;

    // Per-step assertion levels for the lambda recursions.
    const double inf = std::numeric_limits<double>::infinity();
    const double plain_floor = cfg.scheme == Scheme::Ocsc ? -cfg.eta * (1.0 - cfg.D) : -inf;
    const double plain_ceiling = (cfg.scheme == Scheme::Ocrdc && cfg.D > 0.0 && L)
                                     ? lemma1_bound(*L, cfg.eta, cfg.D, dm.d_max())
                                     : inf;
    const double ca_floor = cfg.scheme == Scheme::CaOcsc ? -cfg.eta * (1.0 - eps) : -inf;
    const double ca_ceiling =
        (cfg.scheme == Scheme::CaOcrdc && L) ? *L / eps + cfg.eta * (dm.d_max() - eps) : inf;

    const CompressorFamily family =
        sparse ? CompressorFamily::Sparse : CompressorFamily::RateDistortion;

    EpisodeSummary sum;
    sum.T = cfg.T;
    sum.seed = cfg.seed;
    sum.lossless_mode = lossless;
    sum.predictor_L = L;
    sum.d_max = dm.d_max();
    sum.source_boundaries = src.boundaries;
    double lambda_min = cfg.lambda0;
    double lambda_max = cfg.lambda0;
    double cum_dist = 0.0;
    double cum_outage = 0.0;
    double ideal_total = 0.0;

    for (long t = 1; t <= cfg.T; ++t) {
        const Symbol x = src.symbols[static_cast<std::size_t>(t - 1)];
        if (x < 0 || x >= cfg.alphabet_size)
            throw std::runtime_error("source symbol outside the alphabet");

        StepRecord rec;
        rec.t = t;
        rec.x = x;

        const Distribution p_enc = enc.predictor.predict({enc.context});
        const Distribution p_dec = dec.predictor.predict({dec.context});

        Message msg;
        Symbol x_tilde = kOutage;
        Symbol x_hat_error_free = 0;  // decoder output had the packet been delivered
        int nonmember = 0;

        // --- encoder: pick the coded symbol and emit the message ---
        if (sparse) {
            double s = 0.0;
            if (cfg.scheme == Scheme::BlockCsc) s = *cfg.fixed_s;
            else if (cfg.D > 0.0) s = enc.conf.hyperparameter();
            // D = 0 keeps s at 0: the lossless corner must keep every
            // positive-probability symbol encodable.
            rec.s = s;
            rec.lambda = cfg.scheme == Scheme::BlockCsc ? 0.0 : enc.conf.lambda;
            if (cfg.D == 0.0 && !(p_enc.at(x) > 0.0))
                throw std::runtime_error(
                    "lossless target with a zero-probability source symbol is infeasible");
            const SparseEncodingPlan plan = build_plan(p_enc, s, cfg.D);
            SparseEncodeResult er = ocsc_encode_step(plan, x);
            msg = std::move(er.message);
            x_tilde = er.x_tilde;
            rec.ideal_bits = er.ideal_bits;
            nonmember = x_tilde == kOutage ? 1 : 0;
            x_hat_error_free = x_tilde == kOutage ? ocsc_outage_reconstruction(p_enc, plan) : x;
        } else if (dropout) {
            const bool skip = uniform01(enc.dropout_rng) < cfg.D;
            rec.s = 0.0;
            rec.lambda = 0.0;
            if (skip) {
                x_tilde = kOutage;
                nonmember = 1;
                x_hat_error_free = ml_fallback(p_enc);
            } else {
                if (!(p_enc.at(x) > 0.0))
                    throw std::runtime_error("dropout baseline: source symbol has zero probability");
                const Codebook book = Codebook::build(p_enc.probs());
                msg = book.encode(x);
                x_tilde = x;
                rec.ideal_bits = -std::log2(p_enc.at(x));
                x_hat_error_free = x;
            }
        } else {
            // Slope family: ocrdc, ca-ocrdc, block-crdc.
            if (cfg.scheme == Scheme::BlockCrdc) {
                rec.s = *cfg.fixed_s;
                rec.lambda = 0.0;
                x_tilde = rd_select(p_enc, x, *cfg.fixed_s, dm);
            } else if (lossless) {
                rec.s = std::numeric_limits<double>::quiet_NaN();
                rec.lambda = enc.conf.lambda;
                x_tilde = x;
            } else {
                rec.s = enc.conf.hyperparameter();
                rec.lambda = enc.conf.lambda;
                x_tilde = rd_select(p_enc, x, rec.s, dm);
            }
            if (!(p_enc.at(x_tilde) > 0.0))
                throw std::runtime_error("selected symbol has zero probability; cannot encode");
            const Codebook book = Codebook::build(p_enc.probs());
            msg = book.encode(x_tilde);
            rec.ideal_bits = -std::log2(p_enc.at(x_tilde));
            nonmember = x_tilde == x ? 0 : 1;
            x_hat_error_free = x_tilde;
        }
        rec.x_tilde = x_tilde;
        rec.b = static_cast<int>(msg.length());
        if (cfg.trace_bits) rec.bits_hex = bits_to_hex(msg.bits);

        // --- channel ---
        const ChannelStep cs = channel.transmit(msg);
        const int E = feedback(cs);
        rec.erased = E;

        // --- decoder, from its own replica state only ---
        Symbol x_hat_dec = 0;
        if (dropout) {
            // Shared-seed stream: consumed once per step on both sides.
            const bool skip = uniform01(dec.dropout_rng) < cfg.D;
            if (skip || cs.erased) {
                x_hat_dec = ml_fallback(p_dec);
            } else {
                const Codebook book = Codebook::build(p_dec.probs());
                x_hat_dec = static_cast<Symbol>(book.decode(cs.delivered.bits).first);
            }
        } else if (cs.erased) {
            x_hat_dec = ml_fallback(p_dec);
        } else if (sparse) {
            double s_dec = 0.0;
            if (cfg.scheme == Scheme::BlockCsc) s_dec = *cfg.fixed_s;
            else if (cfg.D > 0.0) s_dec = dec.conf.hyperparameter();
            const SparseEncodingPlan plan_dec = build_plan(p_dec, s_dec, cfg.D);
            x_hat_dec = ocsc_decode_step(p_dec, plan_dec, cs.delivered.bits);
        } else {
            const Codebook book = Codebook::build(p_dec.probs());
            x_hat_dec = static_cast<Symbol>(book.decode(cs.delivered.bits).first);
        }

        // --- encoder mirror of the reconstruction (needs only the fed-back E) ---
        const Symbol x_hat_enc = cs.erased ? ml_fallback(p_enc) : x_hat_error_free;
        if (x_hat_enc != x_hat_dec) sum.sync_divergences++;

        // --- distortion accounting ---
        rec.d = dm(x, x_hat_dec);
        const Symbol ml_enc = ml_fallback(p_enc);
        if (E == 0) {
            rec.delta_ch = 0.0;
        } else if (sparse) {
            rec.delta_ch = true_channel_distortion(CompressorFamily::Sparse, E, dm, x, x_tilde,
                                                   x_hat_enc, x_hat_error_free, ml_enc);
        } else {
            rec.delta_ch = dm(x, x_hat_enc) - dm(x, x_hat_error_free);
        }
        rec.delta_ch_bound =
            adaptive ? channel_distortion_bound(family, E, dm, x, x_tilde, x_hat_enc)
                     : rec.delta_ch;

        // --- conformal updates (end of step t; effects visible from t+1) ---
        if (cfg.scheme == Scheme::Ocsc) {
            enc.conf = update_lambda_ocsc(enc.conf, nonmember);
            // Decoder replica: over a non-erasing channel, receiving the
            // outage symbol is exactly the set-miss indicator.
            dec.conf = update_lambda_ocsc(dec.conf, x_tilde == kOutage ? 1 : 0);
            if (enc.conf.lambda < plain_floor - kBoundTol)
                throw std::logic_error("lambda fell below the -eta*(1-D) floor");
        } else if (cfg.scheme == Scheme::Ocrdc) {
            enc.conf = update_lambda_ocrdc(enc.conf, dm(x, x_tilde));
            if (enc.conf.lambda > plain_ceiling + kBoundTol)
                throw std::logic_error("lambda exceeded the slope ceiling");
        } else if (adaptive) {
            rec.delta_tgt = enc.delta_tgt;
            const double indicator = sparse ? static_cast<double>(nonmember) : dm(x, x_tilde);
            enc.conf = ca_update_lambda(family, enc.conf, E, indicator, enc.delta_tgt);
            enc.queue = step_queue(enc.queue, rec.delta_ch_bound, enc.delta_tgt);
            enc.delta_tgt = next_adjustment(enc.queue, cfg.D);
            if (cfg.scheme == Scheme::CaOcsc) {
                // Decoder replica: the masked indicator is observable because
                // the outage term is zeroed exactly when the packet is erased.
                const double dec_ind = cs.erased ? 0.0 : (x_tilde == kOutage ? 1.0 : 0.0);
                dec.conf = ca_update_lambda(family, dec.conf, E, dec_ind, dec.delta_tgt);
                dec.queue = step_queue(dec.queue, static_cast<double>(E), dec.delta_tgt);
                dec.delta_tgt = next_adjustment(dec.queue, cfg.D);
                if (enc.conf.lambda < ca_floor - kBoundTol)
                    throw std::logic_error("lambda fell below the channel-adaptive floor");
            } else if (enc.conf.lambda > ca_ceiling + kBoundTol) {
                throw std::logic_error("lambda exceeded the channel-adaptive ceiling");
            }
            rec.q = enc.queue.q();
        }
        if (conformal) {
            lambda_min = std::min(lambda_min, enc.conf.lambda);
            lambda_max = std::max(lambda_max, enc.conf.lambda);
        }

        // --- shared context / optional online adaptation, on reconstructions ---
        if (cfg.predictor.adapt) {
            enc.predictor.online_update({enc.context}, x_hat_enc);
            dec.predictor.online_update({dec.context}, x_hat_dec);
        }
        enc.context.push_back(x_hat_enc);
        dec.context.push_back(x_hat_dec);

        // --- aggregates ---
        sum.total_bits += rec.b;
        ideal_total += rec.ideal_bits;
        cum_dist += rec.d;
        cum_outage += x_hat_dec == x ? 0.0 : 1.0;
        sum.cum_nonmember += nonmember;
        sum.cum_masked_nonmember += (1 - E) * nonmember;
        if (!sparse && !dropout) sum.cum_selected_dist += dm(x, x_tilde);
        sum.cum_delta_ch_bound += rec.delta_ch_bound;
        sum.cum_delta_ch_true += rec.delta_ch;
        sum.cum_delta_tgt += rec.delta_tgt;
        sum.erasure_count += E;
        sum.q_max = std::max(sum.q_max, rec.q);

        if (sink) (*sink)(rec);
    }

    const double T = static_cast<double>(cfg.T);
    sum.rate_bits = static_cast<double>(sum.total_bits) / T;
    sum.ideal_rate_bits = ideal_total / T;
    sum.avg_distortion = cum_dist / T;
    sum.outage_rate = cum_outage / T;
    sum.nonmember_rate = sum.cum_nonmember / T;
    sum.masked_nonmember_rate = sum.cum_masked_nonmember / T;
    sum.lambda_final = conformal ? enc.conf.lambda : 0.0;
    sum.lambda_min = conformal ? lambda_min : 0.0;
    sum.lambda_max = conformal ? lambda_max : 0.0;
    sum.q_final = adaptive ? enc.queue.q() : 0.0;

    sum.verdicts = bounds::verify_all(sum, cfg);
    return sum;
}

}  // namespace occ
