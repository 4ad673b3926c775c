#include "ponzi/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ponzi/rng.hpp"

namespace ponzi {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

long long to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used, 0);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got \"" + value + "\"");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(value, &used, 0);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an unsigned integer, got \"" + value + "\"");
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got \"" + value + "\"");
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "seed") seed = to_u64(key, value);
    else if (key == "k_min") augment.k_min = static_cast<int>(to_int(key, value));
    else if (key == "k_max") augment.k_max = static_cast<int>(to_int(key, value));
    else if (key == "fixed_k") {
        if (value == "none") augment.fixed_k.reset();
        else augment.fixed_k = static_cast<int>(to_int(key, value));
    } else if (key == "rename_prefix") augment.rename_prefix = value;
    else if (key == "feature_dim") encoder.feature_dim = static_cast<int>(to_int(key, value));
    else if (key == "hidden_dim") encoder.hidden_dim = static_cast<int>(to_int(key, value));
    else if (key == "embed_dim") encoder.embed_dim = static_cast<int>(to_int(key, value));
    else if (key == "hash_seed") encoder.hash_seed = to_u64(key, value);
    else if (key == "position_buckets")
        encoder.position_buckets = static_cast<int>(to_int(key, value));
    else if (key == "tau") pretrain.tau = to_double(key, value);
    else if (key == "batch_size") pretrain.batch_size = static_cast<int>(to_int(key, value));
    else if (key == "pretrain_steps") pretrain.steps = static_cast<int>(to_int(key, value));
    else if (key == "pretrain_lr") pretrain.learning_rate = to_double(key, value);
    else if (key == "theta") selftrain.theta = to_double(key, value);
    else if (key == "lambda1") selftrain.lambda1 = to_double(key, value);
    else if (key == "lambda2") selftrain.lambda2 = to_double(key, value);
    else if (key == "max_iterations")
        selftrain.max_iterations = static_cast<int>(to_int(key, value));
    else if (key == "inner_epochs") selftrain.inner_epochs = static_cast<int>(to_int(key, value));
    else if (key == "classifier_lr") selftrain.learning_rate = to_double(key, value);
    else if (key == "pseudo_mode") {
        if (value == "hard") selftrain.pseudo_mode = PseudoLossMode::HardLabel;
        else if (value == "entropy") selftrain.pseudo_mode = PseudoLossMode::Entropy;
        else throw ConfigError("pseudo_mode: expected \"hard\" or \"entropy\"");
    } else if (key == "train_frac") train_frac = to_double(key, value);
    else if (key == "test_frac") test_frac = to_double(key, value);
    else if (key == "validation_frac") validation_frac = to_double(key, value);
    else if (key == "label_fraction") label_fraction = to_double(key, value);
    else throw ConfigError("unknown config key \"" + key + "\"");
}

void RunConfig::validate() const {
    if (augment.k_min < 2 || augment.k_min > augment.k_max)
        throw ConfigError("k range must satisfy 2 <= k_min <= k_max");
    if (augment.fixed_k && (*augment.fixed_k < augment.k_min || *augment.fixed_k > augment.k_max))
        throw ConfigError("fixed_k must lie in [k_min, k_max]");
    if (encoder.feature_dim < 1 || encoder.hidden_dim < 1 || encoder.embed_dim < 1 ||
        encoder.position_buckets < 1)
        throw ConfigError("encoder dimensions must be >= 1");
    if (encoder.embed_dim < 3)
        throw ConfigError("embed_dim must be >= 3 for the multi-vector similarity");
    if (pretrain.tau <= 0.0) throw ConfigError("tau must be positive");
    if (pretrain.batch_size < 2) throw ConfigError("batch_size must be >= 2");
    if (pretrain.steps < 0 || pretrain.learning_rate <= 0.0)
        throw ConfigError("pretrain steps/learning rate out of range");
    if (!(selftrain.theta > 0.5 && selftrain.theta <= 1.0))
        throw ConfigError("theta must lie in (0.5, 1]");
    if (selftrain.lambda1 < 0.0 || selftrain.lambda2 < 0.0)
        throw ConfigError("lambda1 and lambda2 must be >= 0");
    if (selftrain.max_iterations < 0 || selftrain.inner_epochs < 0 ||
        selftrain.learning_rate <= 0.0)
        throw ConfigError("self-training iteration parameters out of range");
    double sum = train_frac + test_frac + validation_frac;
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
    if (train_frac <= 0.0 || test_frac < 0.0 || validation_frac < 0.0)
        throw ConfigError("split fractions out of range");
    if (!(label_fraction > 0.0 && label_fraction <= 1.0))
        throw ConfigError("label_fraction must lie in (0, 1]");
}

std::string RunConfig::canonical_text() const {
    std::ostringstream out;
    out << "batch_size = " << pretrain.batch_size << "\n";
    out << "classifier_lr = " << fmt_double(selftrain.learning_rate) << "\n";
    out << "embed_dim = " << encoder.embed_dim << "\n";
    out << "feature_dim = " << encoder.feature_dim << "\n";
    out << "fixed_k = " << (augment.fixed_k ? std::to_string(*augment.fixed_k) : "none") << "\n";
    out << "hash_seed = " << encoder.hash_seed << "\n";
    out << "hidden_dim = " << encoder.hidden_dim << "\n";
    out << "inner_epochs = " << selftrain.inner_epochs << "\n";
    out << "k_max = " << augment.k_max << "\n";
    out << "k_min = " << augment.k_min << "\n";
    out << "label_fraction = " << fmt_double(label_fraction) << "\n";
    out << "lambda1 = " << fmt_double(selftrain.lambda1) << "\n";
    out << "lambda2 = " << fmt_double(selftrain.lambda2) << "\n";
    out << "max_iterations = " << selftrain.max_iterations << "\n";
    out << "position_buckets = " << encoder.position_buckets << "\n";
    out << "pretrain_lr = " << fmt_double(pretrain.learning_rate) << "\n";
    out << "pretrain_steps = " << pretrain.steps << "\n";
    out << "pseudo_mode = "
        << (selftrain.pseudo_mode == PseudoLossMode::HardLabel ? "hard" : "entropy") << "\n";
    out << "rename_prefix = " << augment.rename_prefix << "\n";
    out << "seed = " << seed << "\n";
    out << "tau = " << fmt_double(pretrain.tau) << "\n";
    out << "test_frac = " << fmt_double(test_frac) << "\n";
    out << "theta = " << fmt_double(selftrain.theta) << "\n";
    out << "train_frac = " << fmt_double(train_frac) << "\n";
    out << "validation_frac = " << fmt_double(validation_frac) << "\n";
    return out.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical_text()); }

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        cfg.apply(trim(trimmed.substr(0, eq)), trim(trimmed.substr(eq + 1)));
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace ponzi
