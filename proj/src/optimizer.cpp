#include "sentiment/optimizer.hpp"

#include <cmath>

#include "sentiment/error.hpp"

namespace sentiment {

namespace {

void check_shapes(std::span<Matrix* const> params, std::span<const Matrix> grads)
{
    if (params.size() != grads.size()) {
        throw Error(ErrorCode::ShapeMismatch, std::to_string(params.size()) + " parameters but "
                                                  + std::to_string(grads.size()) + " gradients");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i]->same_shape(grads[i])) {
            throw Error(ErrorCode::ShapeMismatch, "gradient " + std::to_string(i)
                                                      + " does not match its parameter");
        }
    }
}

}  // namespace

AdamState AdamState::zeros_like(std::span<Matrix* const> params)
{
    AdamState state;
    for (const auto* p : params) {
        state.first.emplace_back(p->rows(), p->cols());
        state.second.emplace_back(p->rows(), p->cols());
    }
    return state;
}

void sgd_step(std::span<Matrix* const> params, std::span<const Matrix> grads, double lr)
{
    check_shapes(params, grads);
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto theta = params[i]->values();
        auto g = grads[i].values();
        for (std::size_t e = 0; e < theta.size(); ++e) {
            theta[e] -= lr * g[e];
        }
    }
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state,
               double lr, const AdamSettings& settings)
{
    check_shapes(params, grads);
    if (state.first.size() != params.size() || state.second.size() != params.size()) {
        throw Error(ErrorCode::ShapeMismatch, "Adam state does not match parameters");
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correct1 = 1.0 - std::pow(settings.beta1, t);
    const double correct2 = 1.0 - std::pow(settings.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!state.first[i].same_shape(grads[i]) || !state.second[i].same_shape(grads[i])) {
            throw Error(ErrorCode::ShapeMismatch, "Adam moment " + std::to_string(i));
        }
        auto theta = params[i]->values();
        auto g = grads[i].values();
        auto m = state.first[i].values();
        auto v = state.second[i].values();
        for (std::size_t e = 0; e < theta.size(); ++e) {
            m[e] = settings.beta1 * m[e] + (1.0 - settings.beta1) * g[e];
            v[e] = settings.beta2 * v[e] + (1.0 - settings.beta2) * g[e] * g[e];
            const double m_hat = m[e] / correct1;
            const double v_hat = v[e] / correct2;
            theta[e] -= lr * m_hat / (std::sqrt(v_hat) + settings.epsilon);
        }
    }
}

}  // namespace sentiment
