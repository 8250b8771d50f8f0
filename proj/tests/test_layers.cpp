#include <cmath>

#include "doctest.h"
#include "sentiment/error.hpp"
#include "sentiment/layers.hpp"
#include "support/layer_gradients.hpp"

using namespace sentiment;
using namespace sentiment::testing;

namespace {

constexpr double kGradTolerance = 1e-4;

void require_gradients(const std::vector<GradientReport>& reports)
{
    for (const auto& r : reports) {
        CAPTURE(r.tensor);
        CHECK(r.max_error <= kGradTolerance);
    }
}

bool all_zero(const Matrix& m)
{
    for (double v : m.values()) {
        if (v != 0.0) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("embedding lookup")
{
    Rng rng(1);
    EmbeddingLayer layer(6, 3, rng);
    CHECK(all_zero(layer.forward(TokenSequence{{0, 0, 0}, 0})));

    Matrix twin = layer.forward(TokenSequence{{3, 3}, 2});
    CHECK(twin.row(0)[0] == twin.row(1)[0]);
    CHECK(std::equal(twin.row(0).begin(), twin.row(0).end(), twin.row(1).begin()));

    for (int trial = 0; trial < 20; ++trial) {
        auto seq = random_sequence(rng, 5, 6);
        Matrix out = layer.forward(seq);
        for (std::size_t i = 0; i < seq.length(); ++i) {
            for (std::size_t c = 0; c < 3; ++c) {
                CHECK(out(i, c) == layer.table()(seq.ids[i], c));
            }
        }
    }
    CHECK(all_zero(Matrix(1, 3, std::vector<double>(layer.table().row(0).begin(),
                                                     layer.table().row(0).end()))));
    CHECK_THROWS_AS(layer.forward(TokenSequence{{6}, 1}), Error);
}

TEST_CASE("embedding gradient touches only the rows that occur")
{
    Rng rng(2);
    EmbeddingLayer layer(10, 3, rng);
    TokenSequence seq{{4, 7, 4, 0}, 3};
    EmbeddingLayer::Tape tape;
    layer.forward(seq, tape);
    auto grads = layer.zero_gradients();
    layer.backward(tape, Matrix(4, 3, 1.0), grads);
    for (std::size_t r = 0; r < 10; ++r) {
        const double expected = r == 4 ? 2.0 : (r == 7 ? 1.0 : 0.0);
        for (double v : grads[0].row(r)) {
            CHECK(v == expected);
        }
    }
}

TEST_CASE("convolution output length is n - h + 1")
{
    Rng rng(3);
    ConvLayer layer(4, 3, 5, Activation::Tanh, rng);
    CHECK(layer.forward(Matrix(10, 5)).rows() == 8);
    CHECK(layer.forward(Matrix(10, 5)).cols() == 4);
    CHECK_THROWS_AS(layer.forward(Matrix(2, 5)), Error);
    CHECK_THROWS_AS(layer.forward(Matrix(10, 4)), Error);

    try {
        layer.forward(Matrix(2, 5));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SequenceTooShort);
    }
}

TEST_CASE("zero filters give zero tanh features")
{
    ConvLayer layer(Matrix(2, 6), Matrix(2, 1), 2, Activation::Tanh);
    Rng rng(4);
    CHECK(all_zero(layer.forward(random_matrix(rng, 5, 3))));
}

TEST_CASE("convolution matches a sliding-window oracle")
{
    const std::size_t m = 2, h = 2, k = 3, n = 6;
    for (auto act : {Activation::Tanh, Activation::Sigmoid}) {
        Rng rng(5);
        ConvLayer layer(m, h, k, act, rng);
        *layer.parameters()[1] = random_matrix(rng, m, 1);
        Matrix p = random_matrix(rng, n, k);
        Matrix out = layer.forward(p);
        for (std::size_t i = 0; i + h <= n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                double acc = layer.bias()(j, 0);
                for (std::size_t r = 0; r < h; ++r) {
                    for (std::size_t c = 0; c < k; ++c) {
                        acc += layer.filters()(j, r * k + c) * p(i + r, c);
                    }
                }
                const double want = act == Activation::Tanh ? std::tanh(acc) : 1.0 / (1.0 + std::exp(-acc));
                CHECK(std::abs(out(i, j) - want) <= 1e-12);
            }
        }
    }
}

TEST_CASE("zero LSTM yields a zero state")
{
    std::array<Matrix, 4> w{Matrix(3, 5), Matrix(3, 5), Matrix(3, 5), Matrix(3, 5)};
    std::array<Matrix, 4> b{Matrix(3, 1), Matrix(3, 1), Matrix(3, 1), Matrix(3, 1)};
    LstmLayer layer(w, b);
    Rng rng(6);
    for (double v : layer.forward(random_matrix(rng, 4, 2))) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("single LSTM step matches explicit gate arithmetic")
{
    Rng rng(7);
    const std::size_t in = 3, d = 4;
    LstmLayer layer(in, d, rng);
    for (std::size_t g = 4; g < 8; ++g) {
        *layer.parameters()[g] = random_matrix(rng, d, 1);
    }
    Matrix x = random_matrix(rng, 1, in);
    auto h = layer.forward(x);

    const auto gate = [&](LstmLayer::Gate g, std::size_t r) {
        double a = layer.bias(g)(r, 0);
        for (std::size_t c = 0; c < in; ++c) {
            a += layer.weight(g)(r, c) * x(0, c);
        }
        // h_0 = 0, so the recurrent half of the weights contributes nothing.
        return a;
    };
    const auto sig = [](double a) { return 1.0 / (1.0 + std::exp(-a)); };
    for (std::size_t r = 0; r < d; ++r) {
        const double i = sig(gate(LstmLayer::Input, r));
        const double o = sig(gate(LstmLayer::Output, r));
        const double g = std::tanh(gate(LstmLayer::Cell, r));
        const double c = i * g;
        CHECK(std::abs(h[r] - o * std::tanh(c)) <= 1e-12);
    }
}

TEST_CASE("LSTM outputs lie strictly inside (-1, 1)")
{
    Rng rng(8);
    LstmLayer layer(3, 6, rng);
    for (int trial = 0; trial < 100; ++trial) {
        auto h = layer.forward(random_matrix(rng, 1 + rng.uniform_index(10), 3, 5.0));
        for (double v : h) {
            CHECK(v > -1.0);
            CHECK(v < 1.0);
        }
    }
    CHECK_THROWS_AS(layer.forward(Matrix(0, 3)), Error);
}

TEST_CASE("LSTM forget bias starts at one")
{
    Rng rng(9);
    LstmLayer layer(2, 3, rng);
    for (double v : layer.bias(LstmLayer::Forget).values()) {
        CHECK(v == 1.0);
    }
    for (double v : layer.bias(LstmLayer::Input).values()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("dense softmax")
{
    DenseSoftmax zero(Matrix(3, 4), Matrix(3, 1));
    std::vector<double> h{0.3, -0.2, 0.9, 0.1};
    for (double p : zero.forward(h)) {
        CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
    DenseSoftmax biased(Matrix(3, 4), Matrix(3, 1, std::vector<double>{10.0, 0.0, 0.0}));
    CHECK(argmax(biased.forward(h)) == 0);

    Rng rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        DenseSoftmax layer(4, rng);
        *layer.parameters()[1] = random_matrix(rng, 3, 1, 3.0);
        Matrix x = random_matrix(rng, 4, 1, 3.0);
        auto p = layer.forward(x.values());

        long double z[3];
        long double total = 0;
        for (std::size_t c = 0; c < 3; ++c) {
            z[c] = layer.bias()(c, 0);
            for (std::size_t j = 0; j < 4; ++j) {
                z[c] += static_cast<long double>(layer.weights()(c, j)) * x(j, 0);
            }
            z[c] = std::exp(z[c]);
            total += z[c];
        }
        double sum = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(std::abs(p[c] - static_cast<double>(z[c] / total)) <= 1e-12);
            sum += p[c];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("softmax survives large logits")
{
    auto p = softmax(std::vector<double>{1000.0, -1000.0, 999.0});
    CHECK(std::isfinite(p[0]));
    CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-12);
}

TEST_CASE("cross entropy values")
{
    CHECK(cross_entropy({1.0, 0.0, 0.0}, Sentiment::Negative) == 0.0);
    const Probabilities uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
    for (auto s : {Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive}) {
        CHECK(cross_entropy(uniform, s) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    }
    CHECK(cross_entropy({0.7, 0.2, 0.1}, Sentiment::Neutral)
          == doctest::Approx(1.6094379124341003).epsilon(1e-12));
    CHECK(cross_entropy({1.0, 0.0, 0.0}, Sentiment::Positive)
          == doctest::Approx(-std::log(1e-12)).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central differences")
{
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        require_gradients(check_embedding_gradients(seed));
        require_gradients(check_conv_gradients(seed, Activation::Tanh));
        require_gradients(check_conv_gradients(seed, Activation::Sigmoid));
        require_gradients(check_lstm_gradients(seed));
        require_gradients(check_dense_gradients(seed));
        require_gradients(check_cross_entropy_gradient(seed));
    }
}

TEST_CASE("zero upstream gradient gives zero parameter gradients")
{
    Rng rng(14);
    ConvLayer conv(kFilters, kWindow, kDim, Activation::Tanh, rng);
    LstmLayer lstm(kFilters, kHidden, rng);
    DenseSoftmax dense(kHidden, rng);

    Matrix sentence = random_matrix(rng, kSeqLen, kDim);
    ConvLayer::Tape conv_tape;
    Matrix features = conv.forward(sentence, conv_tape);
    auto conv_grads = conv.zero_gradients();
    conv.backward(conv_tape, Matrix(features.rows(), features.cols()), conv_grads);

    LstmLayer::Tape lstm_tape;
    auto h = lstm.forward(features, lstm_tape);
    auto lstm_grads = lstm.zero_gradients();
    lstm.backward(lstm_tape, std::vector<double>(kHidden, 0.0), lstm_grads);

    DenseSoftmax::Tape dense_tape;
    dense.forward(h, dense_tape);
    auto dense_grads = dense.zero_gradients();
    dense.backward(dense_tape, std::vector<double>(3, 0.0), dense_grads);

    for (const auto* set : {&conv_grads, &lstm_grads, &dense_grads}) {
        for (const auto& g : *set) {
            CHECK(all_zero(g));
        }
    }
}

TEST_CASE("backward without a recorded forward")
{
    Rng rng(15);
    ConvLayer conv(2, 2, 3, Activation::Tanh, rng);
    ConvLayer::Tape tape;
    auto grads = conv.zero_gradients();
    try {
        conv.backward(tape, Matrix(3, 2), grads);
        FAIL("expected NoCachedForward");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoCachedForward);
    }

    conv.forward(Matrix(4, 3), tape);
    conv.backward(tape, Matrix(3, 2), grads);
    CHECK_THROWS_AS(conv.backward(tape, Matrix(3, 2), grads), Error);

    LstmLayer lstm(2, 2, rng);
    LstmLayer::Tape lstm_tape;
    auto lstm_grads = lstm.zero_gradients();
    CHECK_THROWS_AS(lstm.backward(lstm_tape, std::vector<double>(2), lstm_grads), Error);

    EmbeddingLayer embed(4, 2, rng);
    EmbeddingLayer::Tape embed_tape;
    auto embed_grads = embed.zero_gradients();
    CHECK_THROWS_AS(embed.backward(embed_tape, Matrix(1, 2), embed_grads), Error);

    DenseSoftmax dense(2, rng);
    DenseSoftmax::Tape dense_tape;
    auto dense_grads = dense.zero_gradients();
    CHECK_THROWS_AS(dense.backward(dense_tape, std::vector<double>(3), dense_grads), Error);
}

TEST_CASE("forward passes are bitwise repeatable")
{
    Rng rng(16);
    ConvLayer conv(3, 2, 4, Activation::Tanh, rng);
    LstmLayer lstm(3, 5, rng);
    Matrix p = random_matrix(rng, 9, 4);
    CHECK(conv.forward(p) == conv.forward(p));
    auto f = conv.forward(p);
    CHECK(lstm.forward(f) == lstm.forward(f));
}

TEST_CASE("shape law: m(n-h+1) features without pooling")
{
    Rng rng(17);
    for (std::size_t n = 2; n <= 12; ++n) {
        for (std::size_t h = 1; h <= n; ++h) {
            ConvLayer layer(3, h, 2, Activation::Tanh, rng);
            Matrix out = layer.forward(Matrix(n, 2));
            CHECK(out.rows() == n - h + 1);
            CHECK(out.size() == 3 * (n - h + 1));
        }
    }
}
