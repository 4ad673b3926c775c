#include "ponzi/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace ponzi {

namespace {

constexpr char kMagic[8] = {'P', 'Z', 'M', 'O', 'D', 'E', 'L', '\0'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
    explicit Reader(std::string data) : data_(std::move(data)) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + static_cast<std::size_t>(i)]))
                 << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + static_cast<std::size_t>(i)]))
                 << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    void bytes(char* out, std::size_t n) {
        need(n);
        std::memcpy(out, data_.data() + pos_, n);
        pos_ += n;
    }

    bool exhausted() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > data_.size()) throw ModelFormatError("model file truncated");
    }
    std::string data_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_model(const ModelFile& model, const std::string& path) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, ModelFile::kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(model.encoder_config.feature_dim));
    put_u32(out, static_cast<std::uint32_t>(model.encoder_config.hidden_dim));
    put_u32(out, static_cast<std::uint32_t>(model.encoder_config.embed_dim));
    put_u32(out, static_cast<std::uint32_t>(model.encoder_config.position_buckets));
    put_u64(out, model.encoder_config.hash_seed);
    put_u64(out, model.global_seed);
    put_u64(out, model.config_hash);
    put_u64(out, model.corpus_hash);
    put_u64(out, model.pretrain_steps);
    put_u64(out, model.selftrain_iterations);
    for (double v : model.encoder.w1) put_f64(out, v);
    for (double v : model.encoder.b1) put_f64(out, v);
    for (double v : model.encoder.w2) put_f64(out, v);
    for (double v : model.encoder.b2) put_f64(out, v);
    for (double v : model.classifier.w) put_f64(out, v);
    put_f64(out, model.classifier.b[0]);
    put_f64(out, model.classifier.b[1]);

    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write model file: " + path);
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

ModelFile load_model(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open model file: " + path);
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    Reader in(std::move(data));

    char magic[8];
    in.bytes(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ModelFormatError("bad magic; not a model file");
    std::uint32_t version = in.u32();
    if (version != ModelFile::kFormatVersion)
        throw ModelFormatError("unsupported model format version " + std::to_string(version));

    ModelFile model;
    model.encoder_config.feature_dim = static_cast<int>(in.u32());
    model.encoder_config.hidden_dim = static_cast<int>(in.u32());
    model.encoder_config.embed_dim = static_cast<int>(in.u32());
    model.encoder_config.position_buckets = static_cast<int>(in.u32());
    model.encoder_config.hash_seed = in.u64();
    model.global_seed = in.u64();
    model.config_hash = in.u64();
    model.corpus_hash = in.u64();
    model.pretrain_steps = in.u64();
    model.selftrain_iterations = in.u64();
    if (model.encoder_config.feature_dim < 1 || model.encoder_config.hidden_dim < 1 ||
        model.encoder_config.embed_dim < 1 || model.encoder_config.position_buckets < 1)
        throw ModelFormatError("non-positive dimension in model header");

    model.encoder = EncoderParams::zeros(model.encoder_config);
    for (auto& v : model.encoder.w1) v = in.f64();
    for (auto& v : model.encoder.b1) v = in.f64();
    for (auto& v : model.encoder.w2) v = in.f64();
    for (auto& v : model.encoder.b2) v = in.f64();
    model.classifier = ClassifierParams::zeros(model.encoder_config.embed_dim);
    for (auto& v : model.classifier.w) v = in.f64();
    model.classifier.b[0] = in.f64();
    model.classifier.b[1] = in.f64();
    if (!in.exhausted()) throw ModelFormatError("trailing bytes after model payload");
    return model;
}

}  // namespace ponzi
