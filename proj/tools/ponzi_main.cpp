// Command-line front end for the smart-Ponzi detection pipeline.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "ponzi/augment.hpp"
#include "ponzi/dfg.hpp"
#include "ponzi/emit.hpp"
#include "ponzi/equiangle.hpp"
#include "ponzi/parser.hpp"
#include "ponzi/pipeline.hpp"
#include "ponzi/synthetic.hpp"

namespace {

using namespace ponzi;

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "seed",          "k_min",          "k_max",          "fixed_k",
        "rename_prefix", "feature_dim",    "hidden_dim",     "embed_dim",
        "hash_seed",     "position_buckets", "tau",          "batch_size",
        "pretrain_steps", "pretrain_lr",   "theta",          "lambda1",
        "lambda2",       "max_iterations", "inner_epochs",   "classifier_lr",
        "pseudo_mode",   "train_frac",     "test_frac",      "validation_frac",
        "label_fraction",
    };
    return keys;
}

// Registers one CLI flag per config key on a subcommand; values collected as
// strings and applied over the config file.
void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& overrides) {
    for (const auto& key : config_keys()) {
        cmd->add_option_function<std::string>(
            "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; });
    }
}

int build_config(const std::string& config_path,
                 const std::map<std::string, std::string>& overrides, RunConfig& cfg) {
    try {
        if (!config_path.empty()) cfg = load_run_config(config_path);
        for (const auto& [key, value] : overrides) cfg.apply(key, value);
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

std::string read_file_or_die(const std::string& path, int& status) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "data error: cannot open " << path << "\n";
        status = kExitData;
        return "";
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    status = kExitOk;
    return buf.str();
}

std::vector<double> parse_vector(const std::string& text, int& status) {
    std::vector<double> out;
    std::istringstream in(text);
    double v;
    while (in >> v) out.push_back(v);
    if (!in.eof() || out.empty()) {
        std::cerr << "usage error: expected a whitespace-separated numeric vector, got \"" << text
                  << "\"\n";
        status = kExitUsage;
        return {};
    }
    status = kExitOk;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smart-Ponzi detection via triple-view contrastive embeddings"};
    app.require_subcommand(1);

    std::string config_path, corpus_path, model_path, dataset_path, out_path, trace_path;
    std::string unlabeled_path, metrics_path, view = "all";
    std::map<std::string, std::string> overrides;
    std::vector<std::string> sim_args;
    int synth_count = 40;
    std::uint64_t synth_seed = 42;
    bool synth_unlabeled = false;

    auto* pre = app.add_subcommand("pretrain", "Fit the encoder on an unlabeled corpus");
    pre->add_option("corpus", corpus_path, "line-delimited dataset")->required();
    pre->add_option("-o,--out", model_path, "output model file")->required();
    pre->add_option("-c,--config", config_path, "config file");
    pre->add_option("--trace", trace_path, "loss trace CSV");
    add_config_flags(pre, overrides);

    auto* train = app.add_subcommand("train", "Self-train the classifier on frozen embeddings");
    train->add_option("model", model_path, "model file (updated in place)")->required();
    train->add_option("labeled", dataset_path, "labeled dataset")->required();
    train->add_option("-u,--unlabeled", unlabeled_path, "extra unlabeled dataset");
    train->add_option("-c,--config", config_path, "config file");
    add_config_flags(train, overrides);

    auto* predict = app.add_subcommand("predict", "Classify a dataset");
    predict->add_option("model", model_path)->required();
    predict->add_option("dataset", dataset_path)->required();
    predict->add_option("-o,--out", out_path, "predictions CSV")->required();
    predict->add_option("--metrics", metrics_path, "metrics report path");
    predict->add_option("-c,--config", config_path, "config file (dims checked against model)");
    add_config_flags(predict, overrides);

    auto* exp = app.add_subcommand("export-embeddings", "Dump per-record embeddings");
    exp->add_option("model", model_path)->required();
    exp->add_option("dataset", dataset_path)->required();
    exp->add_option("-o,--out", out_path, "output CSV")->required();

    auto* aug = app.add_subcommand("augment", "Print the augmented views of a source file");
    aug->add_option("file", dataset_path, ".sol source file")->required();
    aug->add_option("--view", view, "strong | medium | weak | all");
    aug->add_option("--seed", synth_seed, "augmentation seed");

    auto* dfg_cmd = app.add_subcommand("dfg", "Print the data-flow edge list of a source file");
    dfg_cmd->add_option("file", dataset_path, ".sol source file")->required();

    auto* sim = app.add_subcommand("sim", "Equiangular vector and cosine for three vectors");
    sim->add_option("vectors", sim_args, "three whitespace-separated vectors")
        ->expected(3)
        ->required();

    auto* synth = app.add_subcommand("synth", "Generate the bundled synthetic dataset");
    synth->add_option("-o,--out", out_path, "output dataset path")->required();
    synth->add_option("-n,--count", synth_count, "number of contracts");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_flag("--unlabeled", synth_unlabeled, "omit labels (pretraining corpus)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (pre->parsed()) {
        RunConfig cfg;
        if (int status = build_config(config_path, overrides, cfg)) return status;
        return cmd_pretrain(corpus_path, cfg, model_path, trace_path, std::cout);
    }
    if (train->parsed()) {
        RunConfig cfg;
        if (int status = build_config(config_path, overrides, cfg)) return status;
        return cmd_train(model_path, dataset_path, unlabeled_path, cfg, std::cout);
    }
    if (predict->parsed()) {
        std::optional<RunConfig> cfg;
        if (!config_path.empty() || !overrides.empty()) {
            RunConfig built;
            if (int status = build_config(config_path, overrides, built)) return status;
            cfg = built;
        }
        if (metrics_path.empty()) metrics_path = out_path + ".metrics.json";
        return cmd_predict(model_path, dataset_path, out_path, metrics_path, cfg, std::cout);
    }
    if (exp->parsed()) {
        return cmd_export_embeddings(model_path, dataset_path, out_path, std::cout);
    }

    if (aug->parsed()) {
        int status = 0;
        std::string source = read_file_or_die(dataset_path, status);
        if (status) return status;
        try {
            AugmentationConfig cfg;
            cfg.seed = synth_seed;
            AugmentedTriple triple = make_views(source, cfg);
            if (view == "strong" || view == "all")
                std::cout << "=== strong ===\n" << triple.strong.source;
            if (view == "medium" || view == "all")
                std::cout << "=== medium ===\n" << triple.medium.source;
            if (view == "weak" || view == "all") std::cout << "=== weak ===\n" << triple.weak.source;
        } catch (const std::exception& e) {
            std::cerr << "data error: " << e.what() << "\n";
            return kExitData;
        }
        return kExitOk;
    }
    if (dfg_cmd->parsed()) {
        int status = 0;
        std::string source = read_file_or_die(dataset_path, status);
        if (status) return status;
        try {
            Ast ast = parse_source(source);
            std::cout << dfg_to_text(build_dfg(ast));
        } catch (const std::exception& e) {
            std::cerr << "data error: " << e.what() << "\n";
            return kExitData;
        }
        return kExitOk;
    }
    if (sim->parsed()) {
        int status = 0;
        std::vector<std::vector<double>> vecs;
        for (const auto& arg : sim_args) {
            vecs.push_back(parse_vector(arg, status));
            if (status) return status;
        }
        if (vecs[0].size() != vecs[1].size() || vecs[0].size() != vecs[2].size() ||
            vecs[0].size() < 3) {
            std::cerr << "usage error: vectors must share a dimension >= 3\n";
            return kExitUsage;
        }
        try {
            EquiangularSolution sol = solve_equiangular_span(vecs[0], vecs[1], vecs[2], 1.0);
            std::cout << "v =";
            for (double x : sol.v) std::cout << " " << x;
            std::cout << "\ncosine = " << sol.cosine << "\n";
        } catch (const ZeroVectorInput& e) {
            std::cerr << "numeric error: " << e.what() << "\n";
            return kExitNumeric;
        }
        return kExitOk;
    }
    if (synth->parsed()) {
        auto records = make_synthetic_dataset(synth_count, synth_seed);
        if (synth_unlabeled)
            for (auto& rec : records) rec.label.reset();
        try {
            save_dataset(records, out_path);
        } catch (const std::exception& e) {
            std::cerr << "data error: " << e.what() << "\n";
            return kExitData;
        }
        std::cout << "wrote " << records.size() << " records to " << out_path << "\n";
        return kExitOk;
    }
    return kExitUsage;
}
