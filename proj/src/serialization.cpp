#include "sentiment/serialization.hpp"

#include <bit>
#include <boost/crc.hpp>
#include <cstring>
#include <fstream>

#include "sentiment/csv.hpp"
#include "sentiment/error.hpp"

namespace sentiment {

namespace {

constexpr std::string_view kMagic = "SNTMODEL";

std::uint32_t crc32(std::string_view bytes)
{
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

class Writer {
public:
    void bytes(std::string_view b) { out_.append(b); }

    template <typename T>
    void uint(T value)
    {
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            out_.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
        }
    }

    void number(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

    std::string& str() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}

    std::string_view bytes(std::size_t n)
    {
        if (data_.size() - pos_ < n) {
            throw Error(ErrorCode::CorruptFile, "unexpected end of model file");
        }
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    template <typename T>
    T uint()
    {
        auto b = bytes(sizeof(T));
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            value |= static_cast<T>(static_cast<unsigned char>(b[i])) << (8 * i);
        }
        return value;
    }

    double number() { return std::bit_cast<double>(uint<std::uint64_t>()); }

    std::size_t size(std::size_t limit)
    {
        auto v = uint<std::uint64_t>();
        if (v > limit) {
            throw Error(ErrorCode::CorruptFile, "implausible size field in model file");
        }
        return static_cast<std::size_t>(v);
    }

    bool at_end() const { return pos_ == data_.size(); }

private:
    std::string_view data_;
    std::size_t pos_ = 0;
};

Matrix read_tensor(Reader& in, const Matrix& expected_shape, const std::string& name)
{
    const auto rows = in.size(1u << 30);
    const auto cols = in.size(1u << 30);
    if (rows != expected_shape.rows() || cols != expected_shape.cols()) {
        throw Error(ErrorCode::CorruptFile, "tensor " + name + " has shape "
                                                + std::to_string(rows) + "x"
                                                + std::to_string(cols));
    }
    std::vector<double> data(rows * cols);
    for (double& v : data) {
        v = in.number();
    }
    return Matrix(rows, cols, std::move(data));
}

}  // namespace

std::string serialize_model(const Model& model)
{
    Writer out;
    out.bytes(kMagic);
    out.uint<std::uint32_t>(kModelFormatVersion);

    const auto& cfg = model.config();
    out.uint<std::uint8_t>(static_cast<std::uint8_t>(cfg.variant));
    out.uint<std::uint8_t>(static_cast<std::uint8_t>(cfg.activation));
    for (auto dim : {cfg.seq_len, cfg.embed_dim, cfg.window, cfg.filters, cfg.hidden}) {
        out.uint<std::uint64_t>(dim);
    }

    const auto& tokens = model.vocabulary().tokens();
    out.uint<std::uint64_t>(tokens.size());
    for (const auto& t : tokens) {
        out.uint<std::uint32_t>(static_cast<std::uint32_t>(t.size()));
        out.bytes(t);
    }

    const auto params = model.parameters();
    out.uint<std::uint64_t>(params.size());
    for (const auto* p : params) {
        out.uint<std::uint64_t>(p->rows());
        out.uint<std::uint64_t>(p->cols());
        for (double v : p->values()) {
            out.number(v);
        }
    }
    out.uint<std::uint32_t>(crc32(out.str()));
    return std::move(out.str());
}

Model deserialize_model(std::string_view bytes)
{
    Reader header(bytes);
    if (bytes.size() < kMagic.size() + 4 || header.bytes(kMagic.size()) != kMagic) {
        throw Error(ErrorCode::CorruptFile, "not a model file (bad magic)");
    }
    const auto version = header.uint<std::uint32_t>();
    if (version != kModelFormatVersion) {
        throw Error(ErrorCode::FormatVersionMismatch,
                    "file has format version " + std::to_string(version) + ", expected "
                        + std::to_string(kModelFormatVersion));
    }
    if (bytes.size() < kMagic.size() + 8) {
        throw Error(ErrorCode::CorruptFile, "model file truncated");
    }
    const auto body = bytes.substr(0, bytes.size() - 4);
    Reader trailer(bytes.substr(bytes.size() - 4));
    if (trailer.uint<std::uint32_t>() != crc32(body)) {
        throw Error(ErrorCode::CorruptFile, "checksum mismatch");
    }

    Reader in(body);
    in.bytes(kMagic.size());
    in.uint<std::uint32_t>();

    ModelConfig cfg;
    const auto variant = in.uint<std::uint8_t>();
    const auto activation = in.uint<std::uint8_t>();
    if (variant > 2 || activation > 1) {
        throw Error(ErrorCode::CorruptFile, "unknown variant or activation code");
    }
    cfg.variant = static_cast<Variant>(variant);
    cfg.activation = static_cast<Activation>(activation);
    for (auto* dim : {&cfg.seq_len, &cfg.embed_dim, &cfg.window, &cfg.filters, &cfg.hidden}) {
        *dim = in.size(1u << 24);
    }

    const auto token_count = in.size(bytes.size());
    std::vector<std::string> tokens;
    tokens.reserve(token_count);
    for (std::size_t i = 0; i < token_count; ++i) {
        const auto len = in.uint<std::uint32_t>();
        tokens.emplace_back(in.bytes(len));
    }

    try {
        // Build a correctly shaped skeleton, then overwrite every tensor.
        Model model = build_model(cfg, Vocabulary::from_tokens(std::move(tokens)), Rng(0));
        auto params = model.parameters();
        const auto names = model.parameter_names();
        if (in.size(1024) != params.size()) {
            throw Error(ErrorCode::CorruptFile, "tensor count does not match variant");
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            *params[i] = read_tensor(in, *params[i], names[i]);
        }
        if (!in.at_end()) {
            throw Error(ErrorCode::CorruptFile, "trailing bytes after tensors");
        }
        return model;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptFile) {
            throw;
        }
        throw Error(ErrorCode::CorruptFile, e.what());
    }
}

void save_model(const Model& model, const std::string& path)
{
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::Io, "write to '" + path + "' failed");
    }
}

Model load_model(const std::string& path)
{
    return deserialize_model(csv::read_file(path));
}

}  // namespace sentiment
