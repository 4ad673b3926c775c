#include "ponzi/encoder.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "ponzi/parser.hpp"
#include "ponzi/rng.hpp"

namespace ponzi {

namespace {

unsigned char kind_tag(SeqItemKind kind) {
    switch (kind) {
        case SeqItemKind::Cls: return 0x01;
        case SeqItemKind::Sep: return 0x02;
        case SeqItemKind::CodeToken: return 0x03;
        case SeqItemKind::DfgNode: return 0x04;
    }
    return 0xff;
}

constexpr unsigned char kPositionTag = 0x05;

std::uint64_t item_hash(unsigned char tag, const void* payload, std::size_t len,
                        std::uint64_t seed) {
    std::uint64_t h = fnv1a64_bytes(&tag, 1);
    h = fnv1a64_bytes(payload, len, h);
    return h ^ seed;
}

}  // namespace

std::vector<double> featurize(const EncoderSequence& seq, const EncoderConfig& cfg) {
    const auto d = static_cast<std::size_t>(cfg.feature_dim);
    std::vector<double> out(d, 0.0);
    const std::uint64_t df = static_cast<std::uint64_t>(cfg.feature_dim);

    for (std::size_t i = 0; i < seq.items.size(); ++i) {
        const SeqItem& item = seq.items[i];
        std::uint64_t h = item_hash(kind_tag(item.kind), item.payload.data(), item.payload.size(),
                                    cfg.hash_seed);
        out[static_cast<std::size_t>(h % df)] += (h >> 63) ? -1.0 : 1.0;

        std::uint64_t bucket = i % static_cast<std::uint64_t>(cfg.position_buckets);
        unsigned char bucket_bytes[8];
        for (int b = 0; b < 8; ++b) bucket_bytes[b] = static_cast<unsigned char>(bucket >> (8 * b));
        std::uint64_t ph = item_hash(kPositionTag, bucket_bytes, 8, cfg.hash_seed);
        out[static_cast<std::size_t>(ph % df)] += (ph >> 63) ? -1.0 : 1.0;
    }

    if (!seq.items.empty()) {
        for (auto& v : out) v /= static_cast<double>(seq.items.size());
    }
    out[d - 1] = 1.0;  // bias feature; keeps non-empty sequences away from zero
    return out;
}

EncoderParams EncoderParams::zeros(const EncoderConfig& cfg) {
    EncoderParams p;
    p.feature_dim = cfg.feature_dim;
    p.hidden_dim = cfg.hidden_dim;
    p.embed_dim = cfg.embed_dim;
    p.w1.assign(static_cast<std::size_t>(cfg.hidden_dim * cfg.feature_dim), 0.0);
    p.b1.assign(static_cast<std::size_t>(cfg.hidden_dim), 0.0);
    p.w2.assign(static_cast<std::size_t>(cfg.embed_dim * cfg.hidden_dim), 0.0);
    p.b2.assign(static_cast<std::size_t>(cfg.embed_dim), 0.0);
    return p;
}

EncoderParams EncoderParams::random_init(const EncoderConfig& cfg, std::uint64_t seed) {
    EncoderParams p = zeros(cfg);
    Rng rng(mix_seed(seed, 0x11));
    double s1 = 1.0 / std::sqrt(static_cast<double>(cfg.feature_dim));
    double s2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_dim));
    for (auto& w : p.w1) w = rng.next_gaussian() * s1;
    for (auto& w : p.w2) w = rng.next_gaussian() * s2;
    return p;
}

EmbeddingVector project(const std::vector<double>& x, const EncoderParams& p) {
    if (static_cast<int>(x.size()) != p.feature_dim)
        throw std::invalid_argument("project: feature vector length does not match params");
    std::vector<double> hidden(static_cast<std::size_t>(p.hidden_dim));
    for (int i = 0; i < p.hidden_dim; ++i) {
        double acc = p.b1[static_cast<std::size_t>(i)];
        const double* row = &p.w1[static_cast<std::size_t>(i) * static_cast<std::size_t>(p.feature_dim)];
        for (int j = 0; j < p.feature_dim; ++j) acc += row[j] * x[static_cast<std::size_t>(j)];
        hidden[static_cast<std::size_t>(i)] = acc > 0.0 ? acc : 0.0;
    }
    EmbeddingVector out(static_cast<std::size_t>(p.embed_dim));
    for (int i = 0; i < p.embed_dim; ++i) {
        double acc = p.b2[static_cast<std::size_t>(i)];
        const double* row = &p.w2[static_cast<std::size_t>(i) * static_cast<std::size_t>(p.hidden_dim)];
        for (int j = 0; j < p.hidden_dim; ++j) acc += row[j] * hidden[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

EncoderGrads EncoderGrads::zeros_like(const EncoderParams& p) {
    EncoderGrads g;
    g.w1.assign(p.w1.size(), 0.0);
    g.b1.assign(p.b1.size(), 0.0);
    g.w2.assign(p.w2.size(), 0.0);
    g.b2.assign(p.b2.size(), 0.0);
    return g;
}

void project_backward(const std::vector<double>& x, const EncoderParams& p,
                      const std::vector<double>& upstream, EncoderGrads& grads) {
    assert(static_cast<int>(upstream.size()) == p.embed_dim);
    // Forward pass to recover pre-activations.
    std::vector<double> pre(static_cast<std::size_t>(p.hidden_dim));
    std::vector<double> hidden(static_cast<std::size_t>(p.hidden_dim));
    for (int i = 0; i < p.hidden_dim; ++i) {
        double acc = p.b1[static_cast<std::size_t>(i)];
        const double* row = &p.w1[static_cast<std::size_t>(i) * static_cast<std::size_t>(p.feature_dim)];
        for (int j = 0; j < p.feature_dim; ++j) acc += row[j] * x[static_cast<std::size_t>(j)];
        pre[static_cast<std::size_t>(i)] = acc;
        hidden[static_cast<std::size_t>(i)] = acc > 0.0 ? acc : 0.0;
    }
    std::vector<double> d_hidden(static_cast<std::size_t>(p.hidden_dim), 0.0);
    for (int i = 0; i < p.embed_dim; ++i) {
        double g = upstream[static_cast<std::size_t>(i)];
        grads.b2[static_cast<std::size_t>(i)] += g;
        double* grow = &grads.w2[static_cast<std::size_t>(i) * static_cast<std::size_t>(p.hidden_dim)];
        const double* row = &p.w2[static_cast<std::size_t>(i) * static_cast<std::size_t>(p.hidden_dim)];
        for (int j = 0; j < p.hidden_dim; ++j) {
            grow[j] += g * hidden[static_cast<std::size_t>(j)];
            d_hidden[static_cast<std::size_t>(j)] += g * row[j];
        }
    }
    for (int i = 0; i < p.hidden_dim; ++i) {
        if (pre[static_cast<std::size_t>(i)] <= 0.0) continue;
        double g = d_hidden[static_cast<std::size_t>(i)];
        grads.b1[static_cast<std::size_t>(i)] += g;
        double* grow = &grads.w1[static_cast<std::size_t>(i) * static_cast<std::size_t>(p.feature_dim)];
        for (int j = 0; j < p.feature_dim; ++j) grow[j] += g * x[static_cast<std::size_t>(j)];
    }
}

EmbeddingVector encode_view(const std::string& source, const EncoderConfig& cfg,
                            const EncoderParams& params) {
    auto tokens = tokenize(source);
    Ast ast = parse(tokens);
    DataFlowGraph dfg = build_dfg(ast);
    EncoderSequence seq = to_encoder_sequence(tokens, dfg);
    return project(featurize(seq, cfg), params);
}

}  // namespace ponzi
