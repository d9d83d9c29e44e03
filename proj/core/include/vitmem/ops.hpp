#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "vitmem/tensor.hpp"

namespace vitmem::ops {

// Forward ops. Each has a hand-derived backward counterpart below; no
// general autodiff graph.

Tensor matmul(const Tensor& a, const Tensor& b);
// Given upstream dC, returns {dA, dB}.
std::pair<Tensor, Tensor> matmul_backward(const Tensor& a, const Tensor& b, const Tensor& dc);

inline constexpr double kLayerNormEps = 1e-6;

// Normalizes the last axis to mean 0 / variance 1, then applies gamma/beta.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  double eps = kLayerNormEps);
struct LayerNormGrads {
    Tensor dx, dgamma, dbeta;
};
LayerNormGrads layer_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& dy,
                                   double eps = kLayerNormEps);

// Row-wise softmax over the last axis, max-subtracted for stability.
Tensor softmax(const Tensor& x);
Tensor softmax_backward(const Tensor& y, const Tensor& dy);

// Exact erf form: x * Phi(x).
Tensor gelu(const Tensor& x);
Tensor gelu_backward(const Tensor& x, const Tensor& dy);

Tensor sigmoid(const Tensor& x);
// Takes the forward output y = sigmoid(x).
Tensor sigmoid_backward(const Tensor& y, const Tensor& dy);

double mse_loss(const Tensor& pred, const Tensor& target);
Tensor mse_loss_backward(const Tensor& pred, const Tensor& target);

// Central-finite-difference gradient checker. `loss` maps the inputs to a
// scalar; `analytic` returns d(loss)/d(input) for every input tensor.
struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t worst_input = 0;   // index into the inputs list
    std::size_t worst_entry = 0;   // flat index within that tensor
};
GradCheckReport grad_check(const std::function<double(const std::vector<Tensor>&)>& loss,
                           const std::function<std::vector<Tensor>(const std::vector<Tensor>&)>& analytic,
                           std::vector<Tensor> inputs, double h = 1e-3);

}  // namespace vitmem::ops
