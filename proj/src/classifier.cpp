#include "ponzi/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace ponzi {

ClassifierParams ClassifierParams::zeros(int embed_dim) {
    ClassifierParams p;
    p.embed_dim = embed_dim;
    p.w.assign(static_cast<std::size_t>(2 * embed_dim), 0.0);
    p.b = {0.0, 0.0};
    return p;
}

std::array<double, 2> predict_proba(const EmbeddingVector& z, const ClassifierParams& p) {
    if (static_cast<int>(z.size()) != p.embed_dim)
        throw std::invalid_argument("predict_proba: embedding dimension mismatch");
    std::array<double, 2> logits = {p.b[0], p.b[1]};
    for (int k = 0; k < 2; ++k) {
        const double* row = &p.w[static_cast<std::size_t>(k) * static_cast<std::size_t>(p.embed_dim)];
        for (int j = 0; j < p.embed_dim; ++j)
            logits[static_cast<std::size_t>(k)] += row[j] * z[static_cast<std::size_t>(j)];
    }
    double m = std::max(logits[0], logits[1]);
    double e0 = std::exp(logits[0] - m);
    double e1 = std::exp(logits[1] - m);
    double sum = e0 + e1;
    return {e0 / sum, e1 / sum};
}

namespace {

double clamped_log(double p) { return std::log(std::max(p, 1e-300)); }

double prediction_entropy(const std::array<double, 2>& p) {
    return -(p[0] * clamped_log(p[0]) + p[1] * clamped_log(p[1]));
}

}  // namespace

double supervised_loss(const std::vector<EmbeddingVector>& z, const std::vector<int>& y,
                       const ClassifierParams& p) {
    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        auto probs = predict_proba(z[i], p);
        loss -= clamped_log(probs[static_cast<std::size_t>(y[i])]);
    }
    return loss;
}

PseudoLabelSet select_pseudo(const std::vector<std::array<double, 2>>& probas, double theta) {
    PseudoLabelSet set;
    for (std::size_t i = 0; i < probas.size(); ++i) {
        double confidence = std::max(probas[i][0], probas[i][1]);
        if (confidence >= theta) {
            set.indices.push_back(i);
            set.labels.push_back(probas[i][1] > probas[i][0] ? 1 : 0);
            set.confidences.push_back(confidence);
        }
    }
    return set;
}

double pseudo_loss(const std::vector<EmbeddingVector>& unlabeled, const PseudoLabelSet& set,
                   const ClassifierParams& p, PseudoLossMode mode) {
    double loss = 0.0;
    for (std::size_t k = 0; k < set.indices.size(); ++k) {
        auto probs = predict_proba(unlabeled[set.indices[k]], p);
        if (mode == PseudoLossMode::HardLabel) {
            loss -= clamped_log(probs[static_cast<std::size_t>(set.labels[k])]);
        } else {
            loss += prediction_entropy(probs);
        }
    }
    return loss;
}

double total_loss(const std::vector<EmbeddingVector>& labeled_z, const std::vector<int>& labeled_y,
                  const std::vector<EmbeddingVector>& unlabeled_z, const PseudoLabelSet& set,
                  const SelfTrainConfig& cfg, const ClassifierParams& p) {
    return cfg.lambda1 * supervised_loss(labeled_z, labeled_y, p) +
           cfg.lambda2 * pseudo_loss(unlabeled_z, set, p, cfg.pseudo_mode);
}

namespace {

// d(loss)/d(logits) for one sample under cross-entropy with a hard label.
std::array<double, 2> ce_logit_grad(const std::array<double, 2>& probs, int label) {
    return {probs[0] - (label == 0 ? 1.0 : 0.0), probs[1] - (label == 1 ? 1.0 : 0.0)};
}

// d(entropy)/d(logits): -p_j (log p_j + H).
std::array<double, 2> entropy_logit_grad(const std::array<double, 2>& probs) {
    double h = prediction_entropy(probs);
    return {-probs[0] * (clamped_log(probs[0]) + h), -probs[1] * (clamped_log(probs[1]) + h)};
}

void accumulate(ClassifierGrads& grads, const EmbeddingVector& z,
                const std::array<double, 2>& logit_grad, double weight, int embed_dim) {
    for (int k = 0; k < 2; ++k) {
        double g = weight * logit_grad[static_cast<std::size_t>(k)];
        grads.b[static_cast<std::size_t>(k)] += g;
        double* row = &grads.w[static_cast<std::size_t>(k) * static_cast<std::size_t>(embed_dim)];
        for (int j = 0; j < embed_dim; ++j) row[j] += g * z[static_cast<std::size_t>(j)];
    }
}

}  // namespace

ClassifierGrads total_loss_grad(const std::vector<EmbeddingVector>& labeled_z,
                                const std::vector<int>& labeled_y,
                                const std::vector<EmbeddingVector>& unlabeled_z,
                                const PseudoLabelSet& set, const SelfTrainConfig& cfg,
                                const ClassifierParams& p) {
    ClassifierGrads grads;
    grads.w.assign(p.w.size(), 0.0);
    for (std::size_t i = 0; i < labeled_z.size(); ++i) {
        auto probs = predict_proba(labeled_z[i], p);
        accumulate(grads, labeled_z[i], ce_logit_grad(probs, labeled_y[i]), cfg.lambda1,
                   p.embed_dim);
    }
    for (std::size_t k = 0; k < set.indices.size(); ++k) {
        const EmbeddingVector& z = unlabeled_z[set.indices[k]];
        auto probs = predict_proba(z, p);
        auto logit_grad = cfg.pseudo_mode == PseudoLossMode::HardLabel
                              ? ce_logit_grad(probs, set.labels[k])
                              : entropy_logit_grad(probs);
        accumulate(grads, z, logit_grad, cfg.lambda2, p.embed_dim);
    }
    return grads;
}

namespace {

void fit(ClassifierParams& params, const std::vector<EmbeddingVector>& labeled_z,
         const std::vector<int>& labeled_y, const std::vector<EmbeddingVector>& unlabeled_z,
         const PseudoLabelSet& set, const SelfTrainConfig& cfg) {
    for (int epoch = 0; epoch < cfg.inner_epochs; ++epoch) {
        ClassifierGrads grads = total_loss_grad(labeled_z, labeled_y, unlabeled_z, set, cfg, params);
        for (std::size_t i = 0; i < params.w.size(); ++i)
            params.w[i] -= cfg.learning_rate * grads.w[i];
        params.b[0] -= cfg.learning_rate * grads.b[0];
        params.b[1] -= cfg.learning_rate * grads.b[1];
    }
}

}  // namespace

ClassifierParams self_train(const std::vector<EmbeddingVector>& labeled_z,
                            const std::vector<int>& labeled_y,
                            const std::vector<EmbeddingVector>& unlabeled_z,
                            const SelfTrainConfig& cfg, int* iterations_out) {
    if (labeled_z.empty()) throw SingleClassPool();
    bool has0 = false, has1 = false;
    for (int y : labeled_y) (y == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw SingleClassPool();

    ClassifierParams params = ClassifierParams::zeros(static_cast<int>(labeled_z[0].size()));
    PseudoLabelSet empty_set;
    fit(params, labeled_z, labeled_y, unlabeled_z, empty_set, cfg);

    std::optional<PseudoLabelSet> previous;
    int iterations = 0;
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        std::vector<std::array<double, 2>> probas;
        probas.reserve(unlabeled_z.size());
        for (const auto& z : unlabeled_z) probas.push_back(predict_proba(z, params));
        PseudoLabelSet set = select_pseudo(probas, cfg.theta);
        if (previous && *previous == set) break;  // assignment stabilized
        previous = set;
        fit(params, labeled_z, labeled_y, unlabeled_z, set, cfg);
        ++iterations;
    }
    if (iterations_out) *iterations_out = iterations;
    return params;
}

}  // namespace ponzi
