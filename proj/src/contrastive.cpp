#include "ponzi/contrastive.hpp"

#include <cmath>

#include "ponzi/equiangle.hpp"
#include "ponzi/rng.hpp"

namespace ponzi {

void ContrastiveBatch::validate() const {
    const int n = size();
    if (n < 2)
        throw DegenerateBatch("batch of size " + std::to_string(n) +
                              ": the N^3 - N negative set is empty below N = 2");
    if (static_cast<int>(weak.size()) != n || static_cast<int>(middle.size()) != n)
        throw DegenerateBatch("view arrays disagree on batch size");
    const int d = dim();
    auto check_rows = [&](const std::vector<EmbeddingVector>& rows, const char* which) {
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != d)
                throw DegenerateBatch(std::string(which) + " row has wrong dimension");
            double norm2 = 0.0;
            for (double x : row) {
                if (!std::isfinite(x)) throw DegenerateBatch("non-finite embedding");
                norm2 += x * x;
            }
            if (norm2 < 1e-24) throw DegenerateBatch("zero embedding row");
        }
    };
    check_rows(strong, "strong");
    check_rows(weak, "weak");
    check_rows(middle, "middle");
}

namespace {

// All N^3 similarities, indexed sims[(m*N + n)*N + h].
std::vector<double> all_similarities(const ContrastiveBatch& batch) {
    const int n = batch.size();
    std::vector<double> sims(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) *
                             static_cast<std::size_t>(n));
    std::size_t idx = 0;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            for (int h = 0; h < n; ++h)
                sims[idx++] = multi_cosine(batch.strong[static_cast<std::size_t>(m)],
                                           batch.weak[static_cast<std::size_t>(w)],
                                           batch.middle[static_cast<std::size_t>(h)]);
    return sims;
}

}  // namespace

LossReport batch_loss(const ContrastiveBatch& batch, double tau) {
    batch.validate();
    if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
    const int n = batch.size();
    std::vector<double> sims = all_similarities(batch);

    LossReport report;
    report.negative_count = static_cast<long long>(n) * n * n - n;

    // log-sum-exp over the negatives, stabilized by the max.
    double max_neg = -1e300;
    double neg_sum = 0.0;
    std::size_t idx = 0;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            for (int h = 0; h < n; ++h, ++idx) {
                if (m == w && w == h) continue;
                max_neg = std::max(max_neg, sims[idx] / tau);
            }
    idx = 0;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            for (int h = 0; h < n; ++h, ++idx) {
                if (m == w && w == h) continue;
                neg_sum += std::exp(sims[idx] / tau - max_neg);
                report.negative_sim_mean += sims[idx];
            }
    report.negative_sim_mean /= static_cast<double>(report.negative_count);
    const double log_denominator = max_neg + std::log(neg_sum);

    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        std::size_t diag = (static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                            static_cast<std::size_t>(i)) *
                               static_cast<std::size_t>(n) +
                           static_cast<std::size_t>(i);
        report.positive_sims.push_back(sims[diag]);
        acc += sims[diag] / tau - log_denominator;
    }
    report.loss = -acc / static_cast<double>(n);
    if (!std::isfinite(report.loss)) throw DegenerateBatch("non-finite contrastive loss");
    return report;
}

BatchGradients batch_loss_grad(const ContrastiveBatch& batch, double tau) {
    batch.validate();
    const int n = batch.size();
    const int d = batch.dim();
    std::vector<double> sims = all_similarities(batch);

    // Softmax weights over the shared negative denominator.
    double max_neg = -1e300;
    std::size_t idx = 0;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            for (int h = 0; h < n; ++h, ++idx)
                if (!(m == w && w == h)) max_neg = std::max(max_neg, sims[idx] / tau);
    double neg_sum = 0.0;
    idx = 0;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            for (int h = 0; h < n; ++h, ++idx)
                if (!(m == w && w == h)) neg_sum += std::exp(sims[idx] / tau - max_neg);

    BatchGradients grads;
    auto zero_rows = [&](std::vector<EmbeddingVector>& rows) {
        rows.assign(static_cast<std::size_t>(n), EmbeddingVector(static_cast<std::size_t>(d), 0.0));
    };
    zero_rows(grads.strong);
    zero_rows(grads.weak);
    zero_rows(grads.middle);

    // d(loss)/d(sim_mwh): -1/(N tau) on the diagonal, softmax weight / tau on
    // the negatives (the denominator is anchor-independent).
    idx = 0;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            for (int h = 0; h < n; ++h, ++idx) {
                double weight;
                if (m == w && w == h) {
                    weight = -1.0 / (static_cast<double>(n) * tau);
                } else {
                    weight = std::exp(sims[idx] / tau - max_neg) / (neg_sum * tau);
                }
                SimilarityGradient g;
                try {
                    g = multi_cosine_grad(batch.strong[static_cast<std::size_t>(m)],
                                          batch.weak[static_cast<std::size_t>(w)],
                                          batch.middle[static_cast<std::size_t>(h)]);
                } catch (const DegenerateGradient&) {
                    throw DegenerateGradient("degenerate similarity at triple (" +
                                             std::to_string(m) + ", " + std::to_string(w) + ", " +
                                             std::to_string(h) + ")");
                }
                for (int k = 0; k < d; ++k) {
                    grads.strong[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] +=
                        weight * g.d_a[static_cast<std::size_t>(k)];
                    grads.weak[static_cast<std::size_t>(w)][static_cast<std::size_t>(k)] +=
                        weight * g.d_b[static_cast<std::size_t>(k)];
                    grads.middle[static_cast<std::size_t>(h)][static_cast<std::size_t>(k)] +=
                        weight * g.d_c[static_cast<std::size_t>(k)];
                }
            }
    return grads;
}

// ---------------------------------------------------------------------------
// Pretraining
// ---------------------------------------------------------------------------

namespace {

struct FeaturizedSample {
    std::vector<double> strong, weak, middle;  // frozen feature vectors
};

}  // namespace

PretrainResult pretrain(const std::vector<std::string>& corpus, const AugmentationConfig& aug_cfg,
                        const EncoderConfig& enc_cfg, const PretrainConfig& cfg) {
    PretrainResult result;

    // Views are deterministic under (seed, sample index), so featurize once.
    std::vector<FeaturizedSample> samples;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        AugmentationConfig per_sample = aug_cfg;
        per_sample.seed = mix_seed(aug_cfg.seed, 0x1000 + i);
        try {
            AugmentedTriple triple = make_views(corpus[i], per_sample);
            auto featurize_view = [&](const AugmentedView& view) {
                auto tokens = tokenize(view.source);
                DataFlowGraph dfg = build_dfg(view.ast);
                return featurize(to_encoder_sequence(tokens, dfg), enc_cfg);
            };
            FeaturizedSample s;
            s.strong = featurize_view(triple.strong);
            s.weak = featurize_view(triple.weak);
            s.middle = featurize_view(triple.medium);
            samples.push_back(std::move(s));
        } catch (const LexError&) {
            ++result.skipped_parse;
        } catch (const ParseError&) {
            ++result.skipped_parse;
        }
    }
    if (static_cast<int>(samples.size()) < cfg.batch_size)
        throw DegenerateBatch("corpus smaller than batch size after parse failures");

    result.params = EncoderParams::random_init(enc_cfg, cfg.seed);

    // Pooled feature vectors share a dominant corpus-wide component (bias
    // coordinate, position hashes, common syntax). Folding its removal into
    // the initial hidden bias, b1 = -W1 mu, starts the fit from centered
    // activations without touching the frozen featurization; encode_view
    // compatibility is exact since b1 is an ordinary parameter.
    {
        const auto dim = static_cast<std::size_t>(enc_cfg.feature_dim);
        std::vector<double> mu(dim, 0.0);
        for (const auto& s : samples) {
            for (const auto* view : {&s.strong, &s.weak, &s.middle})
                for (std::size_t i = 0; i < dim; ++i) mu[i] += (*view)[i];
        }
        for (auto& v : mu) v /= static_cast<double>(3 * samples.size());
        for (int row = 0; row < enc_cfg.hidden_dim; ++row) {
            double acc = 0.0;
            const double* w = &result.params.w1[static_cast<std::size_t>(row) * dim];
            for (std::size_t i = 0; i < dim; ++i) acc += w[i] * mu[i];
            result.params.b1[static_cast<std::size_t>(row)] = -acc;
        }
    }

    Rng rng(mix_seed(cfg.seed, 0x7343));

    auto sample_batch = [&](std::vector<std::size_t>& indices) {
        indices.clear();
        // Partial Fisher-Yates over a fresh index vector.
        std::vector<std::size_t> pool(samples.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
        for (int k = 0; k < cfg.batch_size; ++k) {
            std::size_t j = static_cast<std::size_t>(k) + rng.next_index(pool.size() - static_cast<std::size_t>(k));
            std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
            indices.push_back(pool[static_cast<std::size_t>(k)]);
        }
    };

    std::vector<std::size_t> indices;
    for (int step = 0; step < cfg.steps; ++step) {
        int attempts = 0;
        for (;;) {
            sample_batch(indices);
            ContrastiveBatch batch;
            for (std::size_t i : indices) {
                batch.strong.push_back(project(samples[i].strong, result.params));
                batch.weak.push_back(project(samples[i].weak, result.params));
                batch.middle.push_back(project(samples[i].middle, result.params));
            }
            try {
                LossReport report = batch_loss(batch, cfg.tau);
                BatchGradients grads = batch_loss_grad(batch, cfg.tau);

                EncoderGrads pgrads = EncoderGrads::zeros_like(result.params);
                for (int row = 0; row < batch.size(); ++row) {
                    std::size_t i = indices[static_cast<std::size_t>(row)];
                    project_backward(samples[i].strong, result.params,
                                     grads.strong[static_cast<std::size_t>(row)], pgrads);
                    project_backward(samples[i].weak, result.params,
                                     grads.weak[static_cast<std::size_t>(row)], pgrads);
                    project_backward(samples[i].middle, result.params,
                                     grads.middle[static_cast<std::size_t>(row)], pgrads);
                }
                for (std::size_t k = 0; k < result.params.w1.size(); ++k)
                    result.params.w1[k] -= cfg.learning_rate * pgrads.w1[k];
                for (std::size_t k = 0; k < result.params.b1.size(); ++k)
                    result.params.b1[k] -= cfg.learning_rate * pgrads.b1[k];
                for (std::size_t k = 0; k < result.params.w2.size(); ++k)
                    result.params.w2[k] -= cfg.learning_rate * pgrads.w2[k];
                for (std::size_t k = 0; k < result.params.b2.size(); ++k)
                    result.params.b2[k] -= cfg.learning_rate * pgrads.b2[k];

                double pos_mean = 0.0;
                for (double s : report.positive_sims) pos_mean += s;
                pos_mean /= static_cast<double>(report.positive_sims.size());
                result.trace.push_back({step, report.loss, pos_mean, report.negative_sim_mean});
                break;
            } catch (const DegenerateGradient& e) {
                if (++attempts > 10)
                    throw DegenerateBatch(std::string("10 degenerate batches in a row: ") +
                                          e.what());
            } catch (const DegenerateBatch& e) {
                if (++attempts > 10)
                    throw DegenerateBatch(std::string("10 degenerate batches in a row: ") +
                                          e.what());
            }
        }
    }
    return result;
}

}  // namespace ponzi
