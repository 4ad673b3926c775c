#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ponzi/encoder.hpp"

namespace ponzi {

class SingleClassPool : public std::runtime_error {
public:
    SingleClassPool() : std::runtime_error("labeled pool must contain both classes") {}
};

// Two-class linear head over frozen embeddings. Class 1 is "ponzi".
struct ClassifierParams {
    int embed_dim = 0;
    std::vector<double> w;  // 2 x embed_dim, row-major
    std::array<double, 2> b{0.0, 0.0};

    static ClassifierParams zeros(int embed_dim);
};

// Pseudo-label loss flavors. HardLabel is cross-entropy against labels fixed
// at selection time (the default); Entropy is the literal self-entropy of
// the model's prediction, kept for fidelity experiments.
enum class PseudoLossMode { HardLabel, Entropy };

struct SelfTrainConfig {
    double theta = 0.9;  // confidence threshold, in (0.5, 1]
    double lambda1 = 1.0;
    double lambda2 = 0.85;
    int max_iterations = 10;
    int inner_epochs = 200;
    double learning_rate = 0.05;
    std::uint64_t seed = 0;
    PseudoLossMode pseudo_mode = PseudoLossMode::HardLabel;
};

struct PseudoLabelSet {
    std::vector<std::size_t> indices;  // into the unlabeled pool, ascending
    std::vector<int> labels;           // hard labels, aligned with indices
    std::vector<double> confidences;   // every entry >= theta

    bool operator==(const PseudoLabelSet& o) const {
        return indices == o.indices && labels == o.labels;
    }
};

// softmax(W z + b); the pair sums to 1 within 1e-12.
std::array<double, 2> predict_proba(const EmbeddingVector& z, const ClassifierParams& p);

// Sum (not mean) of -log p(y_i | z_i) over the batch; log clamped at 1e-300.
double supervised_loss(const std::vector<EmbeddingVector>& z, const std::vector<int>& y,
                       const ClassifierParams& p);

// S = { i : max(p_i) >= theta }, hard label = argmax.
PseudoLabelSet select_pseudo(const std::vector<std::array<double, 2>>& probas, double theta);

// Cross-entropy of the current predictions against the fixed hard pseudo
// labels, summed over S (HardLabel mode), or the summed prediction entropy
// over S (Entropy mode). Empty S gives 0.
double pseudo_loss(const std::vector<EmbeddingVector>& unlabeled, const PseudoLabelSet& set,
                   const ClassifierParams& p, PseudoLossMode mode = PseudoLossMode::HardLabel);

// lambda1 * supervised + lambda2 * pseudo.
double total_loss(const std::vector<EmbeddingVector>& labeled_z, const std::vector<int>& labeled_y,
                  const std::vector<EmbeddingVector>& unlabeled_z, const PseudoLabelSet& set,
                  const SelfTrainConfig& cfg, const ClassifierParams& p);

struct ClassifierGrads {
    std::vector<double> w;
    std::array<double, 2> b{0.0, 0.0};
};

// Analytic gradient of total_loss w.r.t. W and b.
ClassifierGrads total_loss_grad(const std::vector<EmbeddingVector>& labeled_z,
                                const std::vector<int>& labeled_y,
                                const std::vector<EmbeddingVector>& unlabeled_z,
                                const PseudoLabelSet& set, const SelfTrainConfig& cfg,
                                const ClassifierParams& p);

// Confidence-thresholded self-training. An initial supervised fit is always
// performed; each following iteration predicts the unlabeled pool, selects
// pseudo-labels, and refits (warm start) on lambda1 * L_sup + lambda2 *
// L_pseudo. Stops when the pseudo-label assignment repeats or after
// max_iterations rounds. max_iterations = 0 returns the supervised fit.
// Throws SingleClassPool when the labeled data lacks a class.
ClassifierParams self_train(const std::vector<EmbeddingVector>& labeled_z,
                            const std::vector<int>& labeled_y,
                            const std::vector<EmbeddingVector>& unlabeled_z,
                            const SelfTrainConfig& cfg, int* iterations_out = nullptr);

}  // namespace ponzi
