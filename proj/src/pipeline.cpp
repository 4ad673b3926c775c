#include "ponzi/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "ponzi/classifier.hpp"
#include "ponzi/contrastive.hpp"
#include "ponzi/eval.hpp"
#include "ponzi/rng.hpp"

namespace ponzi {

namespace {

// Stream-stage tags for deriving module seeds from the global seed.
constexpr std::uint64_t kSeedAugment = 0x01;
constexpr std::uint64_t kSeedPretrain = 0x02;
constexpr std::uint64_t kSeedSplit = 0x03;
constexpr std::uint64_t kSeedLabels = 0x04;
constexpr std::uint64_t kSeedSelfTrain = 0x05;

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct EncodedPool {
    std::vector<std::size_t> record_index;  // rows map back to these records
    std::vector<EmbeddingVector> embeddings;
    int skipped = 0;
};

EncodedPool encode_records(const std::vector<DatasetRecord>& records,
                           const std::vector<std::size_t>& subset, const ModelFile& model) {
    EncodedPool pool;
    for (std::size_t i : subset) {
        try {
            pool.embeddings.push_back(
                encode_view(records[i].source, model.encoder_config, model.encoder));
            pool.record_index.push_back(i);
        } catch (const LexError&) {
            ++pool.skipped;
        } catch (const ParseError&) {
            ++pool.skipped;
        }
    }
    return pool;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

}  // namespace

SplitIndices split_dataset(std::size_t n, double train_frac, double test_frac,
                           std::uint64_t seed) {
    std::vector<std::size_t> order = all_indices(n);
    Rng rng(mix_seed(seed, kSeedSplit));
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng.next_index(i);
        std::swap(order[i - 1], order[j]);
    }
    SplitIndices split;
    std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n));
    std::size_t n_test = static_cast<std::size_t>(test_frac * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (i < n_train) split.train.push_back(order[i]);
        else if (i < n_train + n_test) split.test.push_back(order[i]);
        else split.validation.push_back(order[i]);
    }
    return split;
}

LabelSubsample subsample_labels(const std::vector<std::size_t>& pool,
                                const std::vector<int>& labels, double fraction,
                                std::uint64_t seed) {
    LabelSubsample out;
    Rng rng(mix_seed(seed, kSeedLabels));
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (labels[i] == cls) members.push_back(i);
        if (members.empty()) continue;
        std::size_t keep = static_cast<std::size_t>(fraction * static_cast<double>(members.size()));
        if (keep < 1) keep = 1;
        // Seeded partial shuffle; the first `keep` stay labeled.
        for (std::size_t i = 0; i < members.size() && i < keep; ++i) {
            std::size_t j = i + rng.next_index(members.size() - i);
            std::swap(members[i], members[j]);
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i < keep) out.labeled.push_back(pool[members[i]]);
            else out.moved_to_unlabeled.push_back(pool[members[i]]);
        }
    }
    std::sort(out.labeled.begin(), out.labeled.end());
    std::sort(out.moved_to_unlabeled.begin(), out.moved_to_unlabeled.end());
    return out;
}

std::uint64_t dataset_fingerprint(const std::vector<DatasetRecord>& records) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& rec : records) {
        h = fnv1a64(rec.idx, h);
        h = fnv1a64("\x1f", h);
        h = fnv1a64(rec.source, h);
        h = fnv1a64("\x1f", h);
        h = fnv1a64(rec.label ? std::to_string(*rec.label) : "-", h);
        h = fnv1a64("\x1e", h);
    }
    return h;
}

int cmd_pretrain(const std::string& corpus_path, const RunConfig& cfg,
                 const std::string& model_path, const std::string& trace_path, std::ostream& log) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::vector<DatasetRecord> records;
    try {
        records = load_dataset(corpus_path);
    } catch (const std::exception& e) {
        log << "data error: " << e.what() << "\n";
        return kExitData;
    }
    std::vector<std::string> sources;
    sources.reserve(records.size());
    for (const auto& r : records) sources.push_back(r.source);

    AugmentationConfig aug = cfg.augment;
    aug.seed = mix_seed(cfg.seed, kSeedAugment);
    PretrainConfig pre = cfg.pretrain;
    pre.seed = mix_seed(cfg.seed, kSeedPretrain);

    PretrainResult result;
    try {
        result = pretrain(sources, aug, cfg.encoder, pre);
    } catch (const DegenerateBatch& e) {
        log << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
    log << "skipped " << result.skipped_parse << " unparseable sources\n";

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path, std::ios::binary);
        if (!trace) {
            log << "data error: cannot write trace file: " << trace_path << "\n";
            return kExitData;
        }
        trace << "step,loss,pos_sim_mean,neg_sim_mean\n";
        for (const auto& row : result.trace)
            trace << row.step << "," << fmt(row.loss) << "," << fmt(row.pos_sim_mean) << ","
                  << fmt(row.neg_sim_mean) << "\n";
    }

    ModelFile model;
    model.encoder_config = cfg.encoder;
    model.global_seed = cfg.seed;
    model.config_hash = cfg.hash();
    model.corpus_hash = dataset_fingerprint(records);
    model.pretrain_steps = static_cast<std::uint64_t>(cfg.pretrain.steps);
    model.encoder = result.params;
    model.classifier = ClassifierParams::zeros(cfg.encoder.embed_dim);
    try {
        save_model(model, model_path);
    } catch (const std::exception& e) {
        log << "data error: " << e.what() << "\n";
        return kExitData;
    }
    log << "model written to " << model_path << "\n";
    return kExitOk;
}

int cmd_train(const std::string& model_path, const std::string& labeled_path,
              const std::string& unlabeled_path, const RunConfig& cfg, std::ostream& log) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    ModelFile model;
    std::vector<DatasetRecord> labeled_records, unlabeled_records;
    try {
        model = load_model(model_path);
        labeled_records = load_dataset(labeled_path);
        if (!unlabeled_path.empty()) unlabeled_records = load_dataset(unlabeled_path);
    } catch (const std::exception& e) {
        log << "data error: " << e.what() << "\n";
        return kExitData;
    }

    try {
        for (const auto& rec : labeled_records)
            if (!rec.label) throw MissingLabel(rec.idx);

        SplitIndices split = split_dataset(labeled_records.size(), cfg.train_frac, cfg.test_frac,
                                           cfg.seed);

        // Embeddings for the training portion.
        EncodedPool train_pool = encode_records(labeled_records, split.train, model);
        if (train_pool.skipped > 0)
            log << "skipped " << train_pool.skipped << " unparseable training sources\n";

        std::vector<int> train_labels;
        for (std::size_t i : train_pool.record_index)
            train_labels.push_back(*labeled_records[i].label);

        LabelSubsample subsample = subsample_labels(all_indices(train_pool.embeddings.size()),
                                                    train_labels, cfg.label_fraction, cfg.seed);

        std::vector<EmbeddingVector> labeled_z;
        std::vector<int> labeled_y;
        for (std::size_t row : subsample.labeled) {
            labeled_z.push_back(train_pool.embeddings[row]);
            labeled_y.push_back(train_labels[row]);
        }
        std::vector<EmbeddingVector> unlabeled_z;
        for (std::size_t row : subsample.moved_to_unlabeled)
            unlabeled_z.push_back(train_pool.embeddings[row]);

        EncodedPool extra = encode_records(unlabeled_records, all_indices(unlabeled_records.size()),
                                           model);
        if (extra.skipped > 0)
            log << "skipped " << extra.skipped << " unparseable unlabeled sources\n";
        for (auto& z : extra.embeddings) unlabeled_z.push_back(std::move(z));

        SelfTrainConfig st = cfg.selftrain;
        st.seed = mix_seed(cfg.seed, kSeedSelfTrain);
        int iterations = 0;
        model.classifier = self_train(labeled_z, labeled_y, unlabeled_z, st, &iterations);
        model.selftrain_iterations = static_cast<std::uint64_t>(iterations);
        log << "self-training stopped after " << iterations << " pseudo-label rounds\n";

        // Validation metrics for a quick read on the fit.
        EncodedPool val_pool = encode_records(labeled_records, split.validation, model);
        if (!val_pool.embeddings.empty()) {
            std::vector<int> preds, truth;
            for (std::size_t row = 0; row < val_pool.embeddings.size(); ++row) {
                auto p = predict_proba(val_pool.embeddings[row], model.classifier);
                preds.push_back(p[1] > p[0] ? 1 : 0);
                truth.push_back(*labeled_records[val_pool.record_index[row]].label);
            }
            Metrics m = metrics(confusion(preds, truth));
            log << "validation: precision=" << (m.precision ? fmt(*m.precision, "%.4f") : "n/a")
                << " recall=" << (m.recall ? fmt(*m.recall, "%.4f") : "n/a")
                << " f1=" << (m.f1 ? fmt(*m.f1, "%.4f") : "n/a") << "\n";
        }

        save_model(model, model_path);
    } catch (const MissingLabel& e) {
        log << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const SingleClassPool& e) {
        log << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DegenerateBatch& e) {
        log << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        log << "data error: " << e.what() << "\n";
        return kExitData;
    }
    log << "model updated at " << model_path << "\n";
    return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& dataset_path,
                const std::string& predictions_path, const std::string& metrics_path,
                const std::optional<RunConfig>& cfg, std::ostream& log) {
    ModelFile model;
    std::vector<DatasetRecord> records;
    try {
        model = load_model(model_path);
        records = load_dataset(dataset_path);
    } catch (const std::exception& e) {
        log << "data error: " << e.what() << "\n";
        return kExitData;
    }
    if (cfg) {
        const EncoderConfig& want = cfg->encoder;
        const EncoderConfig& have = model.encoder_config;
        if (want.feature_dim != have.feature_dim || want.hidden_dim != have.hidden_dim ||
            want.embed_dim != have.embed_dim || want.position_buckets != have.position_buckets ||
            want.hash_seed != have.hash_seed) {
            log << "DimMismatch: model dims (" << have.feature_dim << "," << have.hidden_dim << ","
                << have.embed_dim << ") disagree with config (" << want.feature_dim << ","
                << want.hidden_dim << "," << want.embed_dim << ")\n";
            return kExitData;
        }
    }

    std::ofstream out(predictions_path, std::ios::binary);
    if (!out) {
        log << "data error: cannot write predictions file: " << predictions_path << "\n";
        return kExitData;
    }
    out << "idx,label,probability\n";
    std::vector<int> preds, truth;
    int skipped = 0;
    for (const auto& rec : records) {
        EmbeddingVector z;
        try {
            z = encode_view(rec.source, model.encoder_config, model.encoder);
        } catch (const LexError&) {
            ++skipped;
            continue;
        } catch (const ParseError&) {
            ++skipped;
            continue;
        }
        auto p = predict_proba(z, model.classifier);
        int label = p[1] > p[0] ? 1 : 0;
        out << rec.idx << "," << label << "," << fmt(p[1], "%.6f") << "\n";
        if (rec.label) {
            preds.push_back(label);
            truth.push_back(*rec.label);
        }
    }
    if (skipped > 0) log << "skipped " << skipped << " unparseable sources\n";

    if (!truth.empty()) {
        std::ofstream report(metrics_path, std::ios::binary);
        if (!report) {
            log << "data error: cannot write metrics file: " << metrics_path << "\n";
            return kExitData;
        }
        report << metrics_report_json(confusion(preds, truth));
        log << "metrics written to " << metrics_path << "\n";
    }
    log << "predictions written to " << predictions_path << "\n";
    return kExitOk;
}

int cmd_export_embeddings(const std::string& model_path, const std::string& dataset_path,
                          const std::string& out_path, std::ostream& log) {
    ModelFile model;
    std::vector<DatasetRecord> records;
    try {
        model = load_model(model_path);
        records = load_dataset(dataset_path);
    } catch (const std::exception& e) {
        log << "data error: " << e.what() << "\n";
        return kExitData;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        log << "data error: cannot write embeddings file: " << out_path << "\n";
        return kExitData;
    }
    int skipped = 0;
    for (const auto& rec : records) {
        try {
            EmbeddingVector z = encode_view(rec.source, model.encoder_config, model.encoder);
            out << rec.idx;
            for (double v : z) out << "," << fmt(v);
            out << "\n";
        } catch (const LexError&) {
            ++skipped;
        } catch (const ParseError&) {
            ++skipped;
        }
    }
    if (skipped > 0) log << "skipped " << skipped << " unparseable sources\n";
    log << "embeddings written to " << out_path << "\n";
    return kExitOk;
}

}  // namespace ponzi
