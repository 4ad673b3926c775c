#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ponzi/classifier.hpp"
#include "ponzi/encoder.hpp"

namespace ponzi {

class ModelFormatError : public std::runtime_error {
public:
    explicit ModelFormatError(const std::string& what) : std::runtime_error(what) {}
};

class DimMismatch : public std::runtime_error {
public:
    explicit DimMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Versioned binary model file: header (format version, dims, seeds,
// provenance), then the encoder and classifier parameters as little-endian
// 64-bit floats, row-major. Loading then saving is byte-identical.
struct ModelFile {
    static constexpr std::uint32_t kFormatVersion = 1;

    EncoderConfig encoder_config;
    std::uint64_t global_seed = 0;
    std::uint64_t config_hash = 0;
    std::uint64_t corpus_hash = 0;
    std::uint64_t pretrain_steps = 0;
    std::uint64_t selftrain_iterations = 0;
    EncoderParams encoder;
    ClassifierParams classifier;
};

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace ponzi
