#pragma once

#include <cstdint>
#include <string>

#include "ponzi/augment.hpp"
#include "ponzi/classifier.hpp"
#include "ponzi/contrastive.hpp"
#include "ponzi/encoder.hpp"

namespace ponzi {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Every field maps to one flat config key (and an identically named CLI
// flag). The single global seed drives all derived module seeds.
struct RunConfig {
    std::uint64_t seed = 42;

    AugmentationConfig augment;  // k_min, k_max, fixed_k, rename_prefix
    EncoderConfig encoder;       // feature_dim, hidden_dim, embed_dim, hash_seed, position_buckets
    PretrainConfig pretrain;     // tau, batch_size, pretrain_steps, pretrain_lr
    SelfTrainConfig selftrain;   // theta, lambda1, lambda2, max_iterations, inner_epochs,
                                 // classifier_lr, pseudo_mode

    double train_frac = 0.6;
    double test_frac = 0.2;
    double validation_frac = 0.2;
    double label_fraction = 1.0;

    // Applies "key = value"; throws ConfigError on unknown keys or bad values.
    void apply(const std::string& key, const std::string& value);

    // Cross-field invariants (fraction sum, ranges). Throws ConfigError.
    void validate() const;

    // Canonical sorted key=value rendering; config_hash fingerprints it.
    std::string canonical_text() const;
    std::uint64_t hash() const;
};

// Flat key-value text: one "key = value" per line, '#' comments allowed.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text);

}  // namespace ponzi
