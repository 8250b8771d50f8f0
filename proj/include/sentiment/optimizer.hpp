#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sentiment/tensor.hpp"

namespace sentiment {

struct AdamSettings {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First and second moment estimates, one pair per parameter tensor.
struct AdamState {
    std::vector<Matrix> first;
    std::vector<Matrix> second;
    std::size_t step = 0;

    static AdamState zeros_like(std::span<Matrix* const> params);
};

/// theta <- theta - lr * g
void sgd_step(std::span<Matrix* const> params, std::span<const Matrix> grads, double lr);

/// m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;
/// theta <- theta - lr * m_hat / (sqrt(v_hat) + eps) with bias-corrected moments.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state,
               double lr, const AdamSettings& settings = {});

}  // namespace sentiment
