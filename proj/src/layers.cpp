#include "sentiment/layers.hpp"

#include <algorithm>
#include <cmath>

#include "sentiment/error.hpp"

namespace sentiment {

namespace {

void require_tape(bool present, const char* layer)
{
    if (!present) {
        throw Error(ErrorCode::NoCachedForward, std::string(layer) + " backward without forward");
    }
}

void require_grads(std::span<Matrix> grads, const std::vector<const Matrix*>& params,
                   const char* layer)
{
    bool ok = grads.size() == params.size();
    for (std::size_t i = 0; ok && i < params.size(); ++i) {
        ok = grads[i].same_shape(*params[i]);
    }
    if (!ok) {
        throw Error(ErrorCode::ShapeMismatch, std::string(layer) + " gradient buffers");
    }
}

Gradients zeros_like(const std::vector<const Matrix*>& params)
{
    Gradients g;
    g.reserve(params.size());
    for (const auto* p : params) {
        g.emplace_back(p->rows(), p->cols());
    }
    return g;
}

double activate(Activation a, double x)
{
    return a == Activation::Tanh ? std::tanh(x) : sigmoid(x);
}

// Derivative expressed through the activation's output y.
double activate_derivative(Activation a, double y)
{
    return a == Activation::Tanh ? 1.0 - y * y : y * (1.0 - y);
}

}  // namespace

double xavier_scale(std::size_t fan_in, std::size_t fan_out) noexcept
{
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

// ---------------------------------------------------------------- embedding

EmbeddingLayer::EmbeddingLayer(std::size_t vocab_size, std::size_t dim, Rng& rng)
    : table_(init_uniform(rng, vocab_size, dim, xavier_scale(vocab_size, dim)))
{
    std::fill(table_.row(Vocabulary::kPadId).begin(), table_.row(Vocabulary::kPadId).end(), 0.0);
}

EmbeddingLayer::EmbeddingLayer(Matrix table) : table_(std::move(table))
{
    if (table_.rows() < 2 || table_.cols() < 1) {
        throw Error(ErrorCode::InvalidConfig, "embedding table needs at least 2 rows");
    }
    std::fill(table_.row(Vocabulary::kPadId).begin(), table_.row(Vocabulary::kPadId).end(), 0.0);
}

Matrix EmbeddingLayer::forward(const TokenSequence& seq) const
{
    Matrix out(seq.length(), dim());
    for (std::size_t i = 0; i < seq.length(); ++i) {
        const auto id = seq.ids[i];
        if (id >= vocab_size()) {
            throw Error(ErrorCode::IdOutOfRange, "token id " + std::to_string(id)
                                                     + " with vocabulary of "
                                                     + std::to_string(vocab_size()));
        }
        if (id != Vocabulary::kPadId) {
            std::copy_n(table_.row(id).begin(), dim(), out.row(i).begin());
        }
    }
    return out;
}

Matrix EmbeddingLayer::forward(const TokenSequence& seq, Tape& tape) const
{
    auto out = forward(seq);
    tape.ids = seq.ids;
    return out;
}

void EmbeddingLayer::backward(Tape& tape, const Matrix& upstream, std::span<Matrix> grads) const
{
    require_tape(tape.ids.has_value(), "embedding");
    require_grads(grads, parameters(), "embedding");
    const auto& ids = *tape.ids;
    if (upstream.rows() != ids.size() || upstream.cols() != dim()) {
        throw Error(ErrorCode::ShapeMismatch, "embedding upstream gradient");
    }
    Matrix& g = grads[0];
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == Vocabulary::kPadId) {
            continue;
        }
        auto dst = g.row(ids[i]);
        auto src = upstream.row(i);
        for (std::size_t c = 0; c < dst.size(); ++c) {
            dst[c] += src[c];
        }
    }
    tape.ids.reset();
}

Gradients EmbeddingLayer::zero_gradients() const
{
    return zeros_like(parameters());
}

// ------------------------------------------------------------- convolution

ConvLayer::ConvLayer(std::size_t filters, std::size_t window, std::size_t dim,
                     Activation activation, Rng& rng)
    : ConvLayer(init_uniform(rng, filters, window * dim, xavier_scale(window * dim, filters)),
                Matrix(filters, 1), window, activation)
{}

ConvLayer::ConvLayer(Matrix filters, Matrix bias, std::size_t window, Activation activation)
    : filters_(std::move(filters)), bias_(std::move(bias)), window_(window), activation_(activation)
{
    if (filters_.rows() < 1 || window_ < 1 || filters_.cols() % window_ != 0
        || filters_.cols() == 0) {
        throw Error(ErrorCode::InvalidConfig, "convolution needs m >= 1 filters of h >= 1 rows");
    }
    if (bias_.rows() != filters_.rows() || bias_.cols() != 1) {
        throw Error(ErrorCode::ShapeMismatch, "convolution bias must be m x 1");
    }
}

Matrix ConvLayer::forward(const Matrix& sentence) const
{
    const std::size_t n = sentence.rows();
    const std::size_t k = dim();
    if (sentence.cols() != k) {
        throw Error(ErrorCode::ShapeMismatch, "sentence width " + std::to_string(sentence.cols())
                                                  + " but filters expect " + std::to_string(k));
    }
    if (n < window_) {
        throw Error(ErrorCode::SequenceTooShort, "sequence of " + std::to_string(n)
                                                     + " rows for window "
                                                     + std::to_string(window_));
    }
    const std::size_t steps = output_length(n, window_);
    const std::size_t span_len = window_ * k;
    const std::size_t m = filter_count();
    Matrix out(steps, m);
    const double* base = sentence.values().data();
    for (std::size_t i = 0; i < steps; ++i) {
        const double* window = base + i * k;
        for (std::size_t j = 0; j < m; ++j) {
            auto w = filters_.row(j);
            double acc = bias_(j, 0);
            for (std::size_t e = 0; e < span_len; ++e) {
                acc += w[e] * window[e];
            }
            out(i, j) = activate(activation_, acc);
        }
    }
    return out;
}

Matrix ConvLayer::forward(const Matrix& sentence, Tape& tape) const
{
    auto out = forward(sentence);
    tape.input = sentence;
    tape.output = out;
    return out;
}

Matrix ConvLayer::backward(Tape& tape, const Matrix& upstream, std::span<Matrix> grads) const
{
    require_tape(tape.input.has_value(), "convolution");
    require_grads(grads, parameters(), "convolution");
    const Matrix& input = *tape.input;
    const Matrix& output = tape.output;
    if (!upstream.same_shape(output)) {
        throw Error(ErrorCode::ShapeMismatch, "convolution upstream gradient");
    }
    const std::size_t k = dim();
    const std::size_t span_len = window_ * k;
    const std::size_t m = filter_count();
    Matrix& d_filters = grads[0];
    Matrix& d_bias = grads[1];
    Matrix d_input(input.rows(), input.cols());
    const double* in_base = input.values().data();
    double* d_in_base = d_input.values().data();

    for (std::size_t i = 0; i < output.rows(); ++i) {
        const double* window = in_base + i * k;
        double* d_window = d_in_base + i * k;
        for (std::size_t j = 0; j < m; ++j) {
            const double d_pre = upstream(i, j) * activate_derivative(activation_, output(i, j));
            if (d_pre == 0.0) {
                continue;
            }
            d_bias(j, 0) += d_pre;
            auto dw = d_filters.row(j);
            auto w = filters_.row(j);
            for (std::size_t e = 0; e < span_len; ++e) {
                dw[e] += d_pre * window[e];
                d_window[e] += d_pre * w[e];
            }
        }
    }
    tape.input.reset();
    return d_input;
}

Gradients ConvLayer::zero_gradients() const
{
    return zeros_like(parameters());
}

// -------------------------------------------------------------------- LSTM

LstmLayer::LstmLayer(std::size_t input_size, std::size_t hidden_size, Rng& rng)
{
    if (input_size < 1 || hidden_size < 1) {
        throw Error(ErrorCode::InvalidConfig, "LSTM sizes must be at least 1");
    }
    static constexpr const char* streams[] = {"lstm.w_input", "lstm.w_forget", "lstm.w_output",
                                              "lstm.w_cell"};
    const double scale = xavier_scale(input_size + hidden_size, hidden_size);
    for (std::size_t g = 0; g < 4; ++g) {
        Rng stream = rng.split(streams[g]);
        weights_[g] = init_uniform(stream, hidden_size, input_size + hidden_size, scale);
        biases_[g] = Matrix(hidden_size, 1, g == Forget ? 1.0 : 0.0);
    }
}

LstmLayer::LstmLayer(std::array<Matrix, 4> weights, std::array<Matrix, 4> biases)
    : weights_(std::move(weights)), biases_(std::move(biases))
{
    const auto d = weights_[0].rows();
    const auto cols = weights_[0].cols();
    if (d < 1 || cols <= d) {
        throw Error(ErrorCode::InvalidConfig, "LSTM weights must be d_h x (input + d_h)");
    }
    for (std::size_t g = 0; g < 4; ++g) {
        if (weights_[g].rows() != d || weights_[g].cols() != cols || biases_[g].rows() != d
            || biases_[g].cols() != 1) {
            throw Error(ErrorCode::ShapeMismatch, "LSTM gate shapes disagree");
        }
    }
}

std::vector<double> LstmLayer::run(const Matrix& inputs, std::vector<Step>* steps) const
{
    const std::size_t in = input_size();
    const std::size_t d = hidden_size();
    if (inputs.rows() == 0) {
        throw Error(ErrorCode::EmptySequence, "LSTM input has no time steps");
    }
    if (inputs.cols() != in) {
        throw Error(ErrorCode::ShapeMismatch, "LSTM step width " + std::to_string(inputs.cols())
                                                  + " but layer expects " + std::to_string(in));
    }
    std::vector<double> h(d, 0.0);
    std::vector<double> c(d, 0.0);
    std::vector<double> concat(in + d);
    if (steps) {
        steps->clear();
        steps->reserve(inputs.rows());
    }
    for (std::size_t t = 0; t < inputs.rows(); ++t) {
        auto x = inputs.row(t);
        std::copy(x.begin(), x.end(), concat.begin());
        std::copy(h.begin(), h.end(), concat.begin() + static_cast<long>(in));

        std::array<std::vector<double>, 4> gates;
        for (std::size_t g = 0; g < 4; ++g) {
            gates[g] = matvec(weights_[g], concat);
            for (std::size_t r = 0; r < d; ++r) {
                const double a = gates[g][r] + biases_[g](r, 0);
                gates[g][r] = g == Cell ? std::tanh(a) : sigmoid(a);
            }
        }
        std::vector<double> cell_prev = c;
        std::vector<double> cell_tanh(d);
        for (std::size_t r = 0; r < d; ++r) {
            c[r] = gates[Forget][r] * c[r] + gates[Input][r] * gates[Cell][r];
            cell_tanh[r] = std::tanh(c[r]);
            h[r] = gates[Output][r] * cell_tanh[r];
        }
        if (steps) {
            steps->push_back({concat, std::move(gates), std::move(cell_prev), std::move(cell_tanh)});
        }
    }
    return h;
}

std::vector<double> LstmLayer::forward(const Matrix& inputs) const
{
    return run(inputs, nullptr);
}

std::vector<double> LstmLayer::forward(const Matrix& inputs, Tape& tape) const
{
    std::vector<Step> steps;
    auto h = run(inputs, &steps);
    tape.steps = std::move(steps);
    tape.input_size = input_size();
    return h;
}

Matrix LstmLayer::backward(Tape& tape, std::span<const double> upstream,
                           std::span<Matrix> grads) const
{
    require_tape(tape.steps.has_value(), "LSTM");
    require_grads(grads, parameters(), "LSTM");
    const std::size_t in = input_size();
    const std::size_t d = hidden_size();
    if (upstream.size() != d) {
        throw Error(ErrorCode::ShapeMismatch, "LSTM upstream gradient");
    }
    const auto& steps = *tape.steps;
    Matrix d_inputs(steps.size(), in);

    std::vector<double> dh(upstream.begin(), upstream.end());
    std::vector<double> dc(d, 0.0);
    std::array<std::vector<double>, 4> d_pre;
    for (auto& v : d_pre) {
        v.assign(d, 0.0);
    }
    std::vector<double> d_concat(in + d);

    for (std::size_t t = steps.size(); t-- > 0;) {
        const Step& s = steps[t];
        const auto& ig = s.gates[Input];
        const auto& fg = s.gates[Forget];
        const auto& og = s.gates[Output];
        const auto& cg = s.gates[Cell];
        for (std::size_t r = 0; r < d; ++r) {
            const double tc = s.cell_tanh[r];
            dc[r] += dh[r] * og[r] * (1.0 - tc * tc);
            d_pre[Output][r] = dh[r] * tc * og[r] * (1.0 - og[r]);
            d_pre[Input][r] = dc[r] * cg[r] * ig[r] * (1.0 - ig[r]);
            d_pre[Forget][r] = dc[r] * s.cell_prev[r] * fg[r] * (1.0 - fg[r]);
            d_pre[Cell][r] = dc[r] * ig[r] * (1.0 - cg[r] * cg[r]);
            dc[r] *= fg[r];
        }
        std::fill(d_concat.begin(), d_concat.end(), 0.0);
        for (std::size_t g = 0; g < 4; ++g) {
            outer_add(grads[g], d_pre[g], s.concat);
            auto db = grads[4 + g].values();
            for (std::size_t r = 0; r < d; ++r) {
                db[r] += d_pre[g][r];
            }
            matvec_transposed_add(weights_[g], d_pre[g], d_concat);
        }
        std::copy_n(d_concat.begin(), in, d_inputs.row(t).begin());
        std::copy(d_concat.begin() + static_cast<long>(in), d_concat.end(), dh.begin());
    }
    tape.steps.reset();
    return d_inputs;
}

std::vector<Matrix*> LstmLayer::parameters()
{
    return {&weights_[0], &weights_[1], &weights_[2], &weights_[3],
            &biases_[0],  &biases_[1],  &biases_[2],  &biases_[3]};
}

std::vector<const Matrix*> LstmLayer::parameters() const
{
    return {&weights_[0], &weights_[1], &weights_[2], &weights_[3],
            &biases_[0],  &biases_[1],  &biases_[2],  &biases_[3]};
}

std::vector<std::string> LstmLayer::parameter_names()
{
    return {"lstm.w_input", "lstm.w_forget", "lstm.w_output", "lstm.w_cell",
            "lstm.b_input", "lstm.b_forget", "lstm.b_output", "lstm.b_cell"};
}

Gradients LstmLayer::zero_gradients() const
{
    return zeros_like(parameters());
}

// ------------------------------------------------------------ dense softmax

DenseSoftmax::DenseSoftmax(std::size_t input_size, Rng& rng)
    : DenseSoftmax(init_uniform(rng, kNumClasses, input_size, xavier_scale(input_size, kNumClasses)),
                   Matrix(kNumClasses, 1))
{}

DenseSoftmax::DenseSoftmax(Matrix weights, Matrix bias)
    : weights_(std::move(weights)), bias_(std::move(bias))
{
    if (weights_.rows() != kNumClasses || weights_.cols() < 1 || bias_.rows() != kNumClasses
        || bias_.cols() != 1) {
        throw Error(ErrorCode::ShapeMismatch, "dense head must be 3 x d with a 3 x 1 bias");
    }
}

Probabilities DenseSoftmax::forward(std::span<const double> input) const
{
    auto logits = matvec(weights_, input);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        logits[c] += bias_(c, 0);
    }
    return softmax(logits);
}

Probabilities DenseSoftmax::forward(std::span<const double> input, Tape& tape) const
{
    auto out = forward(input);
    tape.input.emplace(input.begin(), input.end());
    tape.output = out;
    return out;
}

std::vector<double> DenseSoftmax::backward(Tape& tape, std::span<const double> upstream,
                                           std::span<Matrix> grads) const
{
    require_tape(tape.input.has_value(), "dense");
    require_grads(grads, parameters(), "dense");
    if (upstream.size() != kNumClasses) {
        throw Error(ErrorCode::ShapeMismatch, "dense upstream gradient");
    }
    const auto& p = tape.output;
    double dot = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        dot += upstream[c] * p[c];
    }
    std::array<double, kNumClasses> d_logits{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        d_logits[c] = p[c] * (upstream[c] - dot);
    }
    outer_add(grads[0], d_logits, *tape.input);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        grads[1](c, 0) += d_logits[c];
    }
    std::vector<double> d_input(input_size(), 0.0);
    matvec_transposed_add(weights_, d_logits, d_input);
    tape.input.reset();
    return d_input;
}

Gradients DenseSoftmax::zero_gradients() const
{
    return zeros_like(parameters());
}

// ----------------------------------------------------------------- helpers

Probabilities softmax(std::span<const double> logits)
{
    if (logits.size() != kNumClasses) {
        throw Error(ErrorCode::ShapeMismatch, "softmax expects 3 logits");
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    Probabilities p{};
    double sum = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        p[c] = std::exp(logits[c] - top);
        sum += p[c];
    }
    for (double& v : p) {
        v /= sum;
    }
    return p;
}

double cross_entropy(const Probabilities& probs, Sentiment label)
{
    return -std::log(std::max(probs[class_index(label)], kLogEpsilon));
}

Probabilities cross_entropy_gradient(const Probabilities& probs, Sentiment label)
{
    Probabilities g{};
    const double p = probs[class_index(label)];
    if (p > kLogEpsilon) {
        g[class_index(label)] = -1.0 / p;
    }
    return g;
}

std::vector<double> mean_rows(const Matrix& m)
{
    std::vector<double> out(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < out.size(); ++c) {
            out[c] += row[c];
        }
    }
    const double inv = 1.0 / static_cast<double>(m.rows());
    for (double& v : out) {
        v *= inv;
    }
    return out;
}

Matrix mean_rows_backward(std::span<const double> upstream, std::size_t rows)
{
    Matrix out(rows, upstream.size());
    const double inv = 1.0 / static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = out.row(r);
        for (std::size_t c = 0; c < upstream.size(); ++c) {
            row[c] = upstream[c] * inv;
        }
    }
    return out;
}

std::size_t argmax(const Probabilities& probs) noexcept
{
    return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

}  // namespace sentiment
