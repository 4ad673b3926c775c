#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ponzi/augment.hpp"
#include "ponzi/encoder.hpp"

namespace ponzi {

class DegenerateBatch : public std::runtime_error {
public:
    explicit DegenerateBatch(const std::string& what) : std::runtime_error(what) {}
};

// One pretraining batch: row i of each array is the embedding of sample i's
// strong / weak / middle view.
struct ContrastiveBatch {
    std::vector<EmbeddingVector> strong, weak, middle;

    int size() const { return static_cast<int>(strong.size()); }
    int dim() const { return strong.empty() ? 0 : static_cast<int>(strong[0].size()); }

    // Throws DegenerateBatch unless N >= 2, shapes agree, and every row is
    // finite and non-zero.
    void validate() const;
};

struct LossReport {
    double loss = 0.0;
    std::vector<double> positive_sims;  // sim(i,i,i) for each sample
    double negative_sim_mean = 0.0;
    long long negative_count = 0;  // N^3 - N
};

struct PretrainConfig {
    double tau = 2.0;
    int batch_size = 8;
    int steps = 500;
    double learning_rate = 1e-2;
    std::uint64_t seed = 0;
};

// Triple-view contrastive loss. All N^3 index triples (m, n, h) are scored
// with the multi-vector cosine; the N diagonal triples are the positives and
// the remaining N^3 - N are the negatives. The denominator sums the
// negatives only and is shared across anchors:
//   loss = -(1/N) sum_i [ sim(i,i,i)/tau - log sum_neg exp(sim/tau) ]
LossReport batch_loss(const ContrastiveBatch& batch, double tau);

struct BatchGradients {
    std::vector<EmbeddingVector> strong, weak, middle;  // same shapes as the batch
};

// Exact gradient of batch_loss w.r.t. every embedding, assembled from
// per-triple dual-number similarity gradients and the softmax weights.
// Throws DegenerateGradient (with the offending triple) if any triple is
// rank-deficient.
BatchGradients batch_loss_grad(const ContrastiveBatch& batch, double tau);

// ---------------------------------------------------------------------------
// Pretraining loop
// ---------------------------------------------------------------------------

struct TraceRow {
    int step = 0;
    double loss = 0.0;
    double pos_sim_mean = 0.0;
    double neg_sim_mean = 0.0;
};

struct PretrainResult {
    EncoderParams params;
    std::vector<TraceRow> trace;
    int skipped_parse = 0;
};

// Self-supervised fit of the projection head on an unlabeled corpus. The
// featurization is frozen: each sample's three views are generated and
// featurized once (they are deterministic under the seed), and plain SGD
// updates the head. Sources that fail to parse are skipped and counted.
// A degenerate batch is re-sampled up to 10 times before aborting.
PretrainResult pretrain(const std::vector<std::string>& corpus, const AugmentationConfig& aug_cfg,
                        const EncoderConfig& enc_cfg, const PretrainConfig& cfg);

}  // namespace ponzi
