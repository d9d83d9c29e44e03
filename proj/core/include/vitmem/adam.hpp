#pragma once

#include <cstdint>

#include "vitmem/vit.hpp"

namespace vitmem::train {

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second moment accumulators mirror the parameter shapes.
struct AdamState {
    vit::Parameters m;
    vit::Parameters v;
    std::uint64_t t = 0;
};

AdamState init_adam(const vit::Parameters& params);

// Standard ADAM with bias correction, in place; t increments by 1.
void adam_step(vit::Parameters& params, const vit::Parameters& grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace vitmem::train
