#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ponzi/dfg.hpp"

namespace ponzi {

struct EncoderConfig {
    int feature_dim = 256;
    int hidden_dim = 64;
    int embed_dim = 32;
    std::uint64_t hash_seed = 0x5eed;
    int position_buckets = 16;
};

// Projection head: embed = W2 * relu(W1 * x + b1) + b2. Matrices are
// row-major.
struct EncoderParams {
    int feature_dim = 0, hidden_dim = 0, embed_dim = 0;
    std::vector<double> w1;  // hidden_dim x feature_dim
    std::vector<double> b1;  // hidden_dim
    std::vector<double> w2;  // embed_dim x hidden_dim
    std::vector<double> b2;  // embed_dim

    static EncoderParams zeros(const EncoderConfig& cfg);
    static EncoderParams random_init(const EncoderConfig& cfg, std::uint64_t seed);
};

using EmbeddingVector = std::vector<double>;

// Item hash: FNV-1a over a kind tag byte plus the payload bytes, XORed with
// hash_seed; index = hash mod feature_dim, sign from bit 63. Position hash:
// same scheme over a position tag plus the little-endian bucket index, where
// bucket = item_index mod position_buckets. Contributions are accumulated,
// divided by the item count (mean pooling), and the last coordinate is then
// forced to 1.0 as a bias feature.
std::vector<double> featurize(const EncoderSequence& seq, const EncoderConfig& cfg);

EmbeddingVector project(const std::vector<double>& x, const EncoderParams& p);

// Gradient of the projection head for a given upstream gradient d(loss)/d(embed).
// Accumulates into the grads struct (same shapes as EncoderParams).
struct EncoderGrads {
    std::vector<double> w1, b1, w2, b2;

    static EncoderGrads zeros_like(const EncoderParams& p);
};

void project_backward(const std::vector<double>& x, const EncoderParams& p,
                      const std::vector<double>& upstream, EncoderGrads& grads);

// tokenize -> parse -> build_dfg -> to_encoder_sequence -> featurize -> project.
// Propagates LexError/ParseError.
EmbeddingVector encode_view(const std::string& source, const EncoderConfig& cfg,
                            const EncoderParams& params);

}  // namespace ponzi
