#include "sentiment/model.hpp"

#include "sentiment/error.hpp"

namespace sentiment {

std::string_view to_string(Variant v) noexcept
{
    switch (v) {
    case Variant::CnnLstm: return "cnn-lstm";
    case Variant::CnnOnly: return "cnn";
    case Variant::LstmOnly: return "lstm";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view text) noexcept
{
    for (auto v : {Variant::CnnLstm, Variant::CnnOnly, Variant::LstmOnly}) {
        if (text == to_string(v)) {
            return v;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Activation a) noexcept
{
    return a == Activation::Tanh ? "tanh" : "sigmoid";
}

std::optional<Activation> parse_activation(std::string_view text) noexcept
{
    if (text == "tanh") {
        return Activation::Tanh;
    }
    if (text == "sigmoid") {
        return Activation::Sigmoid;
    }
    return std::nullopt;
}

void ModelConfig::validate() const
{
    if (seq_len < 1 || embed_dim < 1 || window < 1 || filters < 1 || hidden < 1) {
        throw Error(ErrorCode::InvalidConfig, "all model dimensions must be at least 1");
    }
    if (window > seq_len) {
        throw Error(ErrorCode::InvalidConfig, "window " + std::to_string(window)
                                                  + " exceeds sequence length "
                                                  + std::to_string(seq_len));
    }
    if (variant != Variant::CnnLstm && variant != Variant::CnnOnly
        && variant != Variant::LstmOnly) {
        throw Error(ErrorCode::InvalidConfig, "unknown variant");
    }
}

Model::Model(ModelConfig config, Vocabulary vocab, EmbeddingLayer embedding,
             std::optional<ConvLayer> conv, std::optional<LstmLayer> lstm, DenseSoftmax dense)
    : config_(config), vocab_(std::move(vocab)), embedding_(std::move(embedding)),
      conv_(std::move(conv)), lstm_(std::move(lstm)), dense_(std::move(dense))
{
    config_.validate();
    const auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
    if (conv_.has_value() != config_.uses_conv() || lstm_.has_value() != config_.uses_lstm()) {
        fail("layers do not match variant " + std::string(to_string(config_.variant)));
    }
    if (embedding_.vocab_size() != vocab_.size() || embedding_.dim() != config_.embed_dim) {
        fail("embedding table does not match vocabulary size and embed_dim");
    }
    if (conv_ && (conv_->filter_count() != config_.filters || conv_->window() != config_.window
                  || conv_->dim() != config_.embed_dim
                  || conv_->activation() != config_.activation)) {
        fail("convolution does not match config");
    }
    if (lstm_) {
        const auto expected_in = conv_ ? config_.filters : config_.embed_dim;
        if (lstm_->hidden_size() != config_.hidden || lstm_->input_size() != expected_in) {
            fail("LSTM does not match config");
        }
    }
    const auto head_in = lstm_ ? config_.hidden : config_.filters;
    if (dense_.input_size() != head_in) {
        fail("dense head does not match config");
    }
}

void Model::check_sequence(const TokenSequence& seq) const
{
    if (seq.length() != config_.seq_len) {
        throw Error(ErrorCode::ShapeMismatch, "sequence of length " + std::to_string(seq.length())
                                                  + " for model with n = "
                                                  + std::to_string(config_.seq_len));
    }
}

Probabilities Model::forward(const TokenSequence& seq) const
{
    check_sequence(seq);
    Matrix x = embedding_.forward(seq);
    if (conv_) {
        x = conv_->forward(x);
    }
    std::vector<double> features = lstm_ ? lstm_->forward(x) : mean_rows(x);
    return dense_.forward(features);
}

Probabilities Model::forward(const TokenSequence& seq, Tape& tape) const
{
    check_sequence(seq);
    Matrix x = embedding_.forward(seq, tape.embedding);
    if (conv_) {
        x = conv_->forward(x, tape.conv);
    }
    std::vector<double> features;
    if (lstm_) {
        features = lstm_->forward(x, tape.lstm);
    } else {
        features = mean_rows(x);
        tape.pooled_rows = x.rows();
    }
    return dense_.forward(features, tape.dense);
}

void Model::backward(Tape& tape, std::span<const double> upstream, std::span<Matrix> grads) const
{
    if (grads.size() != parameters().size()) {
        throw Error(ErrorCode::ShapeMismatch, "model gradient buffers");
    }
    // Slices of grads in parameters() order.
    std::size_t offset = 0;
    const auto take = [&](std::size_t count) {
        auto s = grads.subspan(offset, count);
        offset += count;
        return s;
    };
    auto g_embed = take(1);
    auto g_conv = take(conv_ ? 2 : 0);
    auto g_lstm = take(lstm_ ? 8 : 0);
    auto g_dense = take(2);

    auto d_features = dense_.backward(tape.dense, upstream, g_dense);
    Matrix d_x = lstm_ ? lstm_->backward(tape.lstm, d_features, g_lstm)
                       : mean_rows_backward(d_features, tape.pooled_rows);
    if (conv_) {
        d_x = conv_->backward(tape.conv, d_x, g_conv);
    }
    embedding_.backward(tape.embedding, d_x, g_embed);
}

double Model::loss_and_gradient(std::span<const TokenSequence> sequences,
                                std::span<const Sentiment> labels, std::span<Matrix> grads) const
{
    if (sequences.size() != labels.size() || sequences.empty()) {
        throw Error(ErrorCode::LengthMismatch, "batch needs equal, non-zero numbers of "
                                               "sequences and labels");
    }
    const double scale = 1.0 / static_cast<double>(sequences.size());
    double total = 0.0;
    Tape tape;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        auto probs = forward(sequences[i], tape);
        total += cross_entropy(probs, labels[i]);
        auto upstream = cross_entropy_gradient(probs, labels[i]);
        for (double& g : upstream) {
            g *= scale;
        }
        backward(tape, upstream, grads);
    }
    return total * scale;
}

std::vector<Matrix*> Model::parameters()
{
    std::vector<Matrix*> out = embedding_.parameters();
    const auto append = [&](std::vector<Matrix*> more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    if (conv_) {
        append(conv_->parameters());
    }
    if (lstm_) {
        append(lstm_->parameters());
    }
    append(dense_.parameters());
    return out;
}

std::vector<const Matrix*> Model::parameters() const
{
    std::vector<const Matrix*> out = embedding_.parameters();
    const auto append = [&](std::vector<const Matrix*> more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    if (conv_) {
        append(conv_->parameters());
    }
    if (lstm_) {
        append(lstm_->parameters());
    }
    append(dense_.parameters());
    return out;
}

std::vector<std::string> Model::parameter_names() const
{
    std::vector<std::string> out = EmbeddingLayer::parameter_names();
    const auto append = [&](std::vector<std::string> more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    if (conv_) {
        append(ConvLayer::parameter_names());
    }
    if (lstm_) {
        append(LstmLayer::parameter_names());
    }
    append(DenseSoftmax::parameter_names());
    return out;
}

Gradients Model::zero_gradients() const
{
    Gradients g;
    for (const auto* p : parameters()) {
        g.emplace_back(p->rows(), p->cols());
    }
    return g;
}

std::size_t Model::parameter_count() const
{
    std::size_t total = 0;
    for (const auto* p : parameters()) {
        total += p->size();
    }
    return total;
}

Model build_model(const ModelConfig& config, const Vocabulary& vocab, const Rng& rng)
{
    config.validate();
    Rng embed_rng = rng.split("embedding.table");
    EmbeddingLayer embedding(vocab.size(), config.embed_dim, embed_rng);

    std::optional<ConvLayer> conv;
    if (config.uses_conv()) {
        Rng conv_rng = rng.split("conv.filters");
        conv.emplace(config.filters, config.window, config.embed_dim, config.activation, conv_rng);
    }
    std::optional<LstmLayer> lstm;
    if (config.uses_lstm()) {
        Rng lstm_rng = rng.split("lstm");
        lstm.emplace(conv ? config.filters : config.embed_dim, config.hidden, lstm_rng);
    }
    Rng dense_rng = rng.split("dense.weights");
    DenseSoftmax dense(lstm ? config.hidden : config.filters, dense_rng);

    return Model(config, vocab, std::move(embedding), std::move(conv), std::move(lstm),
                 std::move(dense));
}

}  // namespace sentiment
