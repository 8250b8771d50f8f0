#pragma once

#include <string>
#include <vector>

#include "sentiment/layers.hpp"
#include "sentiment/model.hpp"
#include "support/gradient_check.hpp"

namespace sentiment::testing {

// Small shapes used by every gradient check.
inline constexpr std::size_t kDim = 4;      // k
inline constexpr std::size_t kSeqLen = 7;   // n
inline constexpr std::size_t kWindow = 3;   // h
inline constexpr std::size_t kFilters = 2;  // m
inline constexpr std::size_t kHidden = 5;   // d_h
inline constexpr std::size_t kVocab = 12;

struct GradientReport {
    std::string tensor;
    double max_error = 0.0;
};

inline TokenSequence random_sequence(Rng& rng, std::size_t n, std::size_t vocab)
{
    TokenSequence seq;
    seq.true_length = 1 + rng.uniform_index(n);
    seq.ids.assign(n, Vocabulary::kPadId);
    for (std::size_t i = 0; i < seq.true_length; ++i) {
        seq.ids[i] = static_cast<TokenId>(1 + rng.uniform_index(vocab - 1));
    }
    return seq;
}

inline std::vector<GradientReport> check_embedding_gradients(std::uint64_t seed)
{
    Rng rng(seed);
    EmbeddingLayer layer(kVocab, kDim, rng);
    TokenSequence seq{{3, 5, 3, 1, 7, 0, 0}, 5};
    Matrix upstream = random_matrix(rng, kSeqLen, kDim);

    EmbeddingLayer::Tape tape;
    layer.forward(seq, tape);
    auto grads = layer.zero_gradients();
    layer.backward(tape, upstream, grads);

    Matrix& table = *layer.parameters()[0];
    auto loss = [&] { return weighted_sum(layer.forward(seq), upstream); };
    return {{"embedding.table", max_gradient_error(table, grads[0], loss)}};
}

inline std::vector<GradientReport> check_conv_gradients(std::uint64_t seed, Activation act)
{
    Rng rng(seed);
    ConvLayer layer(kFilters, kWindow, kDim, act, rng);
    *layer.parameters()[1] = random_matrix(rng, kFilters, 1, 0.5);
    Matrix input = random_matrix(rng, kSeqLen, kDim);
    Matrix upstream = random_matrix(rng, kSeqLen - kWindow + 1, kFilters);

    ConvLayer::Tape tape;
    layer.forward(input, tape);
    auto grads = layer.zero_gradients();
    Matrix d_input = layer.backward(tape, upstream, grads);

    auto loss = [&] { return weighted_sum(layer.forward(input), upstream); };
    std::vector<GradientReport> out;
    const auto names = ConvLayer::parameter_names();
    auto params = layer.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        out.push_back({names[i], max_gradient_error(*params[i], grads[i], loss)});
    }
    out.push_back({"conv.input", max_gradient_error(input, d_input, loss)});
    return out;
}

inline std::vector<GradientReport> check_lstm_gradients(std::uint64_t seed)
{
    Rng rng(seed);
    LstmLayer layer(kFilters, kHidden, rng);
    for (std::size_t g = 4; g < 8; ++g) {
        *layer.parameters()[g] = random_matrix(rng, kHidden, 1, 0.5);
    }
    Matrix input = random_matrix(rng, kSeqLen - kWindow + 1, kFilters);
    Matrix upstream = random_matrix(rng, kHidden, 1);

    LstmLayer::Tape tape;
    layer.forward(input, tape);
    auto grads = layer.zero_gradients();
    Matrix d_input = layer.backward(tape, upstream.values(), grads);

    auto loss = [&] { return weighted_sum(Matrix::column(layer.forward(input)), upstream); };
    std::vector<GradientReport> out;
    const auto names = LstmLayer::parameter_names();
    auto params = layer.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        out.push_back({names[i], max_gradient_error(*params[i], grads[i], loss)});
    }
    out.push_back({"lstm.input", max_gradient_error(input, d_input, loss)});
    return out;
}

inline std::vector<GradientReport> check_dense_gradients(std::uint64_t seed)
{
    Rng rng(seed);
    DenseSoftmax layer(kHidden, rng);
    *layer.parameters()[1] = random_matrix(rng, 3, 1, 0.5);
    Matrix input = random_matrix(rng, kHidden, 1);
    Matrix upstream = random_matrix(rng, 3, 1);

    DenseSoftmax::Tape tape;
    layer.forward(input.values(), tape);
    auto grads = layer.zero_gradients();
    auto d_input = layer.backward(tape, upstream.values(), grads);

    auto loss = [&] {
        auto p = layer.forward(input.values());
        return weighted_sum(Matrix(3, 1, std::vector<double>(p.begin(), p.end())), upstream);
    };
    std::vector<GradientReport> out;
    const auto names = DenseSoftmax::parameter_names();
    auto params = layer.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        out.push_back({names[i], max_gradient_error(*params[i], grads[i], loss)});
    }
    out.push_back({"dense.input", max_gradient_error(input, Matrix::column(d_input), loss)});
    return out;
}

inline std::vector<GradientReport> check_cross_entropy_gradient(std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<GradientReport> out;
    for (std::size_t label = 0; label < 3; ++label) {
        Matrix probs(3, 1, std::vector<double>{0.2 + 0.3 * rng.next_unit(),
                                               0.2 + 0.3 * rng.next_unit(),
                                               0.2 + 0.3 * rng.next_unit()});
        const auto as_probs = [&] {
            return Probabilities{probs(0, 0), probs(1, 0), probs(2, 0)};
        };
        auto g = cross_entropy_gradient(as_probs(), static_cast<Sentiment>(label));
        Matrix analytic(3, 1, std::vector<double>(g.begin(), g.end()));
        auto loss = [&] { return cross_entropy(as_probs(), static_cast<Sentiment>(label)); };
        out.push_back({"cross_entropy[" + std::to_string(label) + "]",
                       max_gradient_error(probs, analytic, loss)});
    }
    return out;
}

inline Vocabulary small_vocabulary(std::size_t size = kVocab)
{
    std::vector<std::string> tokens{"<pad>", "<unk>"};
    for (std::size_t i = 2; i < size; ++i) {
        tokens.push_back("w" + std::to_string(i));
    }
    return Vocabulary::from_tokens(tokens);
}

inline ModelConfig small_config(Variant variant)
{
    ModelConfig cfg;
    cfg.variant = variant;
    cfg.seq_len = kSeqLen;
    cfg.embed_dim = kDim;
    cfg.window = kWindow;
    cfg.filters = kFilters;
    cfg.hidden = kHidden;
    return cfg;
}

/// Mean cross-entropy of a 3-example batch against every model parameter.
inline std::vector<GradientReport> check_model_gradients(Variant variant, std::uint64_t seed)
{
    Rng rng(seed);
    Model model = build_model(small_config(variant), small_vocabulary(), rng.split("model"));
    std::vector<TokenSequence> seqs;
    for (int i = 0; i < 3; ++i) {
        seqs.push_back(random_sequence(rng, kSeqLen, kVocab));
    }
    const std::vector<Sentiment> labels{Sentiment::Negative, Sentiment::Neutral,
                                        Sentiment::Positive};

    auto grads = model.zero_gradients();
    model.loss_and_gradient(seqs, labels, grads);

    auto loss = [&] {
        double total = 0.0;
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            total += cross_entropy(model.forward(seqs[i]), labels[i]);
        }
        return total / static_cast<double>(seqs.size());
    };
    std::vector<GradientReport> out;
    auto params = model.parameters();
    const auto names = model.parameter_names();
    for (std::size_t i = 0; i < params.size(); ++i) {
        out.push_back({names[i], max_gradient_error(*params[i], grads[i], loss)});
    }
    return out;
}

}  // namespace sentiment::testing
