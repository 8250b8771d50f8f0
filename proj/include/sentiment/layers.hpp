#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentiment/corpus.hpp"
#include "sentiment/tensor.hpp"
#include "sentiment/vocabulary.hpp"

namespace sentiment {

enum class Activation : std::uint8_t { Tanh = 0, Sigmoid = 1 };

/// Class probabilities in (Negative, Neutral, Positive) order.
using Probabilities = std::array<double, kNumClasses>;

/// Gradient buffers, one per parameter tensor, in parameters() order.
using Gradients = std::vector<Matrix>;

/// Xavier/Glorot uniform bound sqrt(6 / (fan_in + fan_out)).
double xavier_scale(std::size_t fan_in, std::size_t fan_out) noexcept;

// Every layer follows the same protocol:
//  - forward(input) is pure;
//  - forward(input, tape) additionally records what backward needs;
//  - backward(tape, upstream, grads) adds parameter gradients into grads,
//    returns the gradient with respect to the input and clears the tape.
//    An empty tape raises NoCachedForward.

/// Lookup table mapping token ids to k-dimensional word vectors.
/// Row kPadId is held at zero and never receives gradient.
class EmbeddingLayer {
public:
    struct Tape {
        std::optional<std::vector<TokenId>> ids;
    };

    EmbeddingLayer() = default;
    EmbeddingLayer(std::size_t vocab_size, std::size_t dim, Rng& rng);
    explicit EmbeddingLayer(Matrix table);

    std::size_t vocab_size() const noexcept { return table_.rows(); }
    std::size_t dim() const noexcept { return table_.cols(); }
    const Matrix& table() const noexcept { return table_; }

    /// n x k sentence matrix.
    Matrix forward(const TokenSequence& seq) const;
    Matrix forward(const TokenSequence& seq, Tape& tape) const;
    void backward(Tape& tape, const Matrix& upstream, std::span<Matrix> grads) const;

    std::vector<Matrix*> parameters() { return {&table_}; }
    std::vector<const Matrix*> parameters() const { return {&table_}; }
    static std::vector<std::string> parameter_names() { return {"embedding.table"}; }
    Gradients zero_gradients() const;

private:
    Matrix table_;
};

/// m filters of h consecutive word vectors ("valid" 1-D convolution).
/// Filter j is stored as row j of an m x (h*k) matrix, which matches the
/// row-major layout of an h-row window of the sentence matrix.
class ConvLayer {
public:
    struct Tape {
        std::optional<Matrix> input;
        Matrix output;
    };

    ConvLayer() = default;
    ConvLayer(std::size_t filters, std::size_t window, std::size_t dim, Activation activation,
              Rng& rng);
    ConvLayer(Matrix filters, Matrix bias, std::size_t window, Activation activation);

    std::size_t filter_count() const noexcept { return filters_.rows(); }
    std::size_t window() const noexcept { return window_; }
    std::size_t dim() const noexcept { return window_ == 0 ? 0 : filters_.cols() / window_; }
    Activation activation() const noexcept { return activation_; }
    const Matrix& filters() const noexcept { return filters_; }
    const Matrix& bias() const noexcept { return bias_; }

    static std::size_t output_length(std::size_t n, std::size_t window) noexcept
    {
        return n - window + 1;
    }

    /// (n-h+1) x m: row i holds every filter's feature for window i.
    Matrix forward(const Matrix& sentence) const;
    Matrix forward(const Matrix& sentence, Tape& tape) const;
    Matrix backward(Tape& tape, const Matrix& upstream, std::span<Matrix> grads) const;

    std::vector<Matrix*> parameters() { return {&filters_, &bias_}; }
    std::vector<const Matrix*> parameters() const { return {&filters_, &bias_}; }
    static std::vector<std::string> parameter_names() { return {"conv.filters", "conv.bias"}; }
    Gradients zero_gradients() const;

private:
    Matrix filters_;
    Matrix bias_;
    std::size_t window_ = 0;
    Activation activation_ = Activation::Tanh;
};

/// Single-layer LSTM returning the final hidden state. Each gate has a
/// d_h x (input + d_h) weight acting on [x_t; h_{t-1}].
class LstmLayer {
public:
    enum Gate : std::size_t { Input = 0, Forget = 1, Output = 2, Cell = 3 };

    struct Step {
        std::vector<double> concat;  // [x_t; h_{t-1}]
        std::array<std::vector<double>, 4> gates;
        std::vector<double> cell_prev;
        std::vector<double> cell_tanh;
    };
    struct Tape {
        std::optional<std::vector<Step>> steps;
        std::size_t input_size = 0;
    };

    LstmLayer() = default;
    /// Xavier weights, zero biases except the forget gate, which starts at +1.
    LstmLayer(std::size_t input_size, std::size_t hidden_size, Rng& rng);
    LstmLayer(std::array<Matrix, 4> weights, std::array<Matrix, 4> biases);

    std::size_t input_size() const noexcept
    {
        return weights_[0].cols() - weights_[0].rows();
    }
    std::size_t hidden_size() const noexcept { return weights_[0].rows(); }
    const Matrix& weight(Gate g) const noexcept { return weights_[g]; }
    const Matrix& bias(Gate g) const noexcept { return biases_[g]; }

    /// inputs: T x input_size, one row per time step.
    std::vector<double> forward(const Matrix& inputs) const;
    std::vector<double> forward(const Matrix& inputs, Tape& tape) const;
    Matrix backward(Tape& tape, std::span<const double> upstream, std::span<Matrix> grads) const;

    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;
    static std::vector<std::string> parameter_names();
    Gradients zero_gradients() const;

private:
    std::vector<double> run(const Matrix& inputs, std::vector<Step>* steps) const;

    std::array<Matrix, 4> weights_;
    std::array<Matrix, 4> biases_;
};

/// Fully connected layer followed by a max-shifted softmax over 3 classes.
class DenseSoftmax {
public:
    struct Tape {
        std::optional<std::vector<double>> input;
        Probabilities output{};
    };

    DenseSoftmax() = default;
    DenseSoftmax(std::size_t input_size, Rng& rng);
    DenseSoftmax(Matrix weights, Matrix bias);

    std::size_t input_size() const noexcept { return weights_.cols(); }
    const Matrix& weights() const noexcept { return weights_; }
    const Matrix& bias() const noexcept { return bias_; }

    Probabilities forward(std::span<const double> input) const;
    Probabilities forward(std::span<const double> input, Tape& tape) const;
    /// upstream is dLoss/dProbabilities.
    std::vector<double> backward(Tape& tape, std::span<const double> upstream,
                                 std::span<Matrix> grads) const;

    std::vector<Matrix*> parameters() { return {&weights_, &bias_}; }
    std::vector<const Matrix*> parameters() const { return {&weights_, &bias_}; }
    static std::vector<std::string> parameter_names() { return {"dense.weights", "dense.bias"}; }
    Gradients zero_gradients() const;

private:
    Matrix weights_;
    Matrix bias_;
};

Probabilities softmax(std::span<const double> logits);

inline constexpr double kLogEpsilon = 1e-12;

/// -log(max(p[label], 1e-12))
double cross_entropy(const Probabilities& probs, Sentiment label);
/// dLoss/dProbabilities; zero where the clamp is active.
Probabilities cross_entropy_gradient(const Probabilities& probs, Sentiment label);

/// Mean over rows, used by the convolution-only head.
std::vector<double> mean_rows(const Matrix& m);
/// Gradient of mean_rows: every row receives upstream / rows.
Matrix mean_rows_backward(std::span<const double> upstream, std::size_t rows);

std::size_t argmax(const Probabilities& probs) noexcept;

}  // namespace sentiment
