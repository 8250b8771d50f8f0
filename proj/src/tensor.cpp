#include "sentiment/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sentiment/error.hpp"

namespace sentiment {

namespace {

std::string shape(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data))
{
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::ShapeMismatch, "buffer of " + std::to_string(data_.size())
                                                  + " values for " + std::to_string(rows) + "x"
                                                  + std::to_string(cols) + " matrix");
    }
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::column(std::vector<double> values)
{
    auto n = values.size();
    return Matrix(n, 1, std::move(values));
}

void Matrix::fill(double value) noexcept
{
    std::fill(data_.begin(), data_.end(), value);
}

Matrix matmul(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "matmul " + shape(a) + " by " + shape(b));
    }
    Matrix out(a.rows(), b.cols());
    // i-k-j order keeps the inner loop on contiguous rows of b and out.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            auto b_row = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out_row[j] += aik * b_row[j];
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& a)
{
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = a(i, j);
        }
    }
    return out;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x)
{
    if (a.cols() != x.size()) {
        throw Error(ErrorCode::ShapeMismatch,
                    "matvec " + shape(a) + " by vector of " + std::to_string(x.size()));
    }
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            acc += r[j] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

void matvec_transposed_add(const Matrix& a, std::span<const double> x, std::span<double> y)
{
    if (a.rows() != x.size() || a.cols() != y.size()) {
        throw Error(ErrorCode::ShapeMismatch, "transposed matvec on " + shape(a));
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < r.size(); ++j) {
            y[j] += r[j] * xi;
        }
    }
}

void outer_add(Matrix& a, std::span<const double> x, std::span<const double> y)
{
    if (a.rows() != x.size() || a.cols() != y.size()) {
        throw Error(ErrorCode::ShapeMismatch, "outer product into " + shape(a));
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] += xi * y[j];
        }
    }
}

double sigmoid(double x) noexcept
{
    // Branch on sign so exp() never overflows.
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix elementwise(UnaryOp op, const Matrix& a)
{
    Matrix out = a;
    for (double& v : out.values()) {
        v = op == UnaryOp::Tanh ? std::tanh(v) : sigmoid(v);
    }
    return out;
}

Matrix elementwise(BinaryOp op, const Matrix& a, const Matrix& b)
{
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::ShapeMismatch, "elementwise " + shape(a) + " with " + shape(b));
    }
    Matrix out = a;
    auto rhs = b.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = op == BinaryOp::Add ? dst[i] + rhs[i] : dst[i] * rhs[i];
    }
    return out;
}

std::uint64_t Rng::next_u64() noexcept
{
    ++counter_;
    return mix64(seed_ + counter_ * kGolden);
}

double Rng::next_unit() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept
{
    return lo + (hi - lo) * next_unit();
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) noexcept
{
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t draw = next_u64();
    while (draw >= limit) {
        draw = next_u64();
    }
    return draw % bound;
}

Rng Rng::split(std::uint64_t stream) const noexcept
{
    return Rng(mix64(seed_ ^ mix64(stream + kGolden)));
}

Rng Rng::split(std::string_view name) const noexcept
{
    // FNV-1a of the stream name.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : name) {
        h = (h ^ c) * 0x100000001B3ULL;
    }
    return split(h);
}

Matrix init_uniform(Rng& rng, std::size_t rows, std::size_t cols, double scale)
{
    if (!(scale > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "init scale must be positive");
    }
    Matrix out(rows, cols);
    for (double& v : out.values()) {
        v = rng.uniform(-scale, scale);
    }
    return out;
}

}  // namespace sentiment
