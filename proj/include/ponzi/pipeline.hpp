#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ponzi/dataset.hpp"
#include "ponzi/model_io.hpp"
#include "ponzi/run_config.hpp"

namespace ponzi {

// Exit codes shared by the CLI commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

struct SplitIndices {
    std::vector<std::size_t> train, test, validation;
};

// Seeded shuffle, then train/test/validation in that order:
// floor(train_frac*n), floor(test_frac*n), remainder. Disjoint and exhaustive.
SplitIndices split_dataset(std::size_t n, double train_frac, double test_frac,
                           std::uint64_t seed);

struct LabelSubsample {
    std::vector<std::size_t> labeled;             // keeps its label
    std::vector<std::size_t> moved_to_unlabeled;  // label withheld, joins the unlabeled pool
};

// Keeps floor(fraction * class count), at least 1 per class, seeded.
LabelSubsample subsample_labels(const std::vector<std::size_t>& pool,
                                const std::vector<int>& labels, double fraction,
                                std::uint64_t seed);

std::uint64_t dataset_fingerprint(const std::vector<DatasetRecord>& records);

// ---------------------------------------------------------------------------
// Commands. Each returns an exit code and writes human-readable progress to
// the log stream; artifacts are byte-deterministic under a fixed seed.
// ---------------------------------------------------------------------------

int cmd_pretrain(const std::string& corpus_path, const RunConfig& cfg,
                 const std::string& model_path, const std::string& trace_path, std::ostream& log);

int cmd_train(const std::string& model_path, const std::string& labeled_path,
              const std::string& unlabeled_path, const RunConfig& cfg, std::ostream& log);

int cmd_predict(const std::string& model_path, const std::string& dataset_path,
                const std::string& predictions_path, const std::string& metrics_path,
                const std::optional<RunConfig>& cfg, std::ostream& log);

int cmd_export_embeddings(const std::string& model_path, const std::string& dataset_path,
                          const std::string& out_path, std::ostream& log);

}  // namespace ponzi
