#include "vitmem/adam.hpp"

#include <cmath>

namespace vitmem::train {

AdamState init_adam(const vit::Parameters& params) {
    return {vit::zeros_like(params), vit::zeros_like(params), 0};
}

void adam_step(vit::Parameters& params, const vit::Parameters& grads, AdamState& state,
               const AdamConfig& cfg) {
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));

    auto ps = params.named_tensors();
    const auto gs = grads.named_tensors();
    auto ms = state.m.named_tensors();
    auto vs = state.v.named_tensors();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        Tensor& p = *ps[i].second;
        const Tensor& g = *gs[i].second;
        if (!g.all_finite()) throw Error("non-finite gradient for tensor " + gs[i].first);
        Tensor& m = *ms[i].second;
        Tensor& v = *vs[i].second;
        for (std::size_t j = 0; j < p.numel(); ++j) {
            m.data[j] = cfg.beta1 * m.data[j] + (1.0 - cfg.beta1) * g.data[j];
            v.data[j] = cfg.beta2 * v.data[j] + (1.0 - cfg.beta2) * g.data[j] * g.data[j];
            const double mhat = m.data[j] / bc1;
            const double vhat = v.data[j] / bc2;
            p.data[j] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.eps);
        }
    }
}

}  // namespace vitmem::train
