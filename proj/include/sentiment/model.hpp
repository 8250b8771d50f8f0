#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentiment/layers.hpp"
#include "sentiment/vocabulary.hpp"

namespace sentiment {

enum class Variant : std::uint8_t { CnnLstm = 0, CnnOnly = 1, LstmOnly = 2 };

std::string_view to_string(Variant v) noexcept;
/// Accepts "cnn-lstm", "cnn" and "lstm".
std::optional<Variant> parse_variant(std::string_view text) noexcept;
std::string_view to_string(Activation a) noexcept;
std::optional<Activation> parse_activation(std::string_view text) noexcept;

struct ModelConfig {
    Variant variant = Variant::CnnLstm;
    std::size_t seq_len = 32;
    std::size_t embed_dim = 64;
    std::size_t window = 3;
    std::size_t filters = 64;
    std::size_t hidden = 64;
    Activation activation = Activation::Tanh;

    /// Throws InvalidConfig for zero dimensions or window > seq_len.
    void validate() const;
    bool uses_conv() const noexcept { return variant != Variant::LstmOnly; }
    bool uses_lstm() const noexcept { return variant != Variant::CnnOnly; }

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// One of the three architectures:
///   CnnLstm:  embedding -> convolution -> LSTM (final state) -> dense softmax
///   CnnOnly:  embedding -> convolution -> mean over positions -> dense softmax
///   LstmOnly: embedding -> LSTM (final state) -> dense softmax
/// There is no pooling between the convolution and the LSTM; the LSTM runs
/// over the n-h+1 window positions with the m filter outputs as features.
class Model {
public:
    struct Tape {
        EmbeddingLayer::Tape embedding;
        ConvLayer::Tape conv;
        LstmLayer::Tape lstm;
        DenseSoftmax::Tape dense;
        std::size_t pooled_rows = 0;
    };

    Model(ModelConfig config, Vocabulary vocab, EmbeddingLayer embedding,
          std::optional<ConvLayer> conv, std::optional<LstmLayer> lstm, DenseSoftmax dense);

    const ModelConfig& config() const noexcept { return config_; }
    const Vocabulary& vocabulary() const noexcept { return vocab_; }
    const EmbeddingLayer& embedding() const noexcept { return embedding_; }
    const std::optional<ConvLayer>& conv() const noexcept { return conv_; }
    const std::optional<LstmLayer>& lstm() const noexcept { return lstm_; }
    const DenseSoftmax& dense() const noexcept { return dense_; }

    Probabilities forward(const TokenSequence& seq) const;
    Probabilities forward(const TokenSequence& seq, Tape& tape) const;
    /// upstream is dLoss/dProbabilities; parameter gradients are added to grads.
    void backward(Tape& tape, std::span<const double> upstream, std::span<Matrix> grads) const;

    /// Mean cross-entropy over the selected examples. Adds the gradient of
    /// that mean to grads.
    double loss_and_gradient(std::span<const TokenSequence> sequences,
                             std::span<const Sentiment> labels, std::span<Matrix> grads) const;

    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;
    std::vector<std::string> parameter_names() const;
    Gradients zero_gradients() const;
    std::size_t parameter_count() const;

private:
    void check_sequence(const TokenSequence& seq) const;

    ModelConfig config_;
    Vocabulary vocab_;
    EmbeddingLayer embedding_;
    std::optional<ConvLayer> conv_;
    std::optional<LstmLayer> lstm_;
    DenseSoftmax dense_;
};

/// Initializes every tensor from its own named stream of rng, so the
/// parameters depend only on the seed and the tensor's name.
Model build_model(const ModelConfig& config, const Vocabulary& vocab, const Rng& rng);

}  // namespace sentiment
