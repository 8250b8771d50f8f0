#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sentiment {

/// Dense row-major matrix of doubles. Vectors are stored as n x 1 matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix column(std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept
    {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    void fill(double value) noexcept;
    bool same_shape(const Matrix& other) const noexcept
    {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

/// y = A x
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
/// y += A^T x
void matvec_transposed_add(const Matrix& a, std::span<const double> x, std::span<double> y);
/// A += x y^T
void outer_add(Matrix& a, std::span<const double> x, std::span<const double> y);

enum class UnaryOp { Tanh, Sigmoid };
enum class BinaryOp { Add, Hadamard };

double sigmoid(double x) noexcept;

Matrix elementwise(UnaryOp op, const Matrix& a);
Matrix elementwise(BinaryOp op, const Matrix& a, const Matrix& b);

/// Deterministic counter-based generator (SplitMix64 over a counter).
///
/// Streams derived with split() are independent of the parent's draw
/// position, so each parameter tensor can own a stream keyed by its name.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 bits of resolution.
    double next_unit() noexcept;
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound) noexcept;

    Rng split(std::uint64_t stream) const noexcept;
    Rng split(std::string_view name) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

Matrix init_uniform(Rng& rng, std::size_t rows, std::size_t cols, double scale);

/// Fisher-Yates shuffle driven by Rng, identical on every platform.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace sentiment
