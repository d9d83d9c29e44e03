#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vitmem/tensor.hpp"

namespace vitmem::vit {

struct ModelConfig {
    std::size_t image_size = 224;
    std::size_t patch_size = 16;
    std::size_t dim = 768;
    std::size_t depth = 12;
    std::size_t heads = 12;
    std::size_t mlp_dim = 3072;

    void validate() const;
    std::size_t num_patches() const { return (image_size / patch_size) * (image_size / patch_size); }
    std::size_t patch_dim() const { return patch_size * patch_size * 3; }
    std::size_t seq_len() const { return num_patches() + 1; }

    static ModelConfig base() { return {}; }
    static ModelConfig tiny() { return {8, 4, 16, 2, 2, 32}; }
};

struct BlockParams {
    Tensor wq, wk, wv, wo;                            // [dim x dim]
    Tensor ln1_gamma, ln1_beta, ln2_gamma, ln2_beta;  // [dim]
    Tensor mlp_w1, mlp_b1, mlp_w2, mlp_b2;            // [dim x mlp], [mlp], [mlp x dim], [dim]
};

// All weights; shapes are fully determined by ModelConfig.
struct Parameters {
    ModelConfig config;
    Tensor patch_proj;  // [patch_dim x dim]
    Tensor pos_embed;   // [seq_len x dim]
    Tensor cls_token;   // [dim]
    std::vector<BlockParams> blocks;
    Tensor ln_f_gamma, ln_f_beta;  // final pre-head norm
    Tensor head_w;                 // [dim]
    Tensor head_b;                 // [1]

    // Stable name -> tensor view, in checkpoint manifest order.
    std::vector<std::pair<std::string, Tensor*>> named_tensors();
    std::vector<std::pair<std::string, const Tensor*>> named_tensors() const;
};

Parameters init_parameters(const ModelConfig& cfg, std::uint64_t seed);
// Same shapes, all zeros; gradient accumulators mirror Parameters.
Parameters zeros_like(const Parameters& p);

std::size_t count_params(const ModelConfig& cfg);

// Non-overlapping patches, row-major patch order, channel-last flattening.
// image is [H x W x 3].
Tensor patchify(const Tensor& image, std::size_t patch_size);

// Scores in (0,1), one per image. Images are [image_size x image_size x 3],
// already pixel-normalized by the caller.
Tensor forward(const Parameters& p, const std::vector<Tensor>& images);

// Class-token representation after the final norm (the trunk readout that
// feeds the head); used for embedding-based dedup.
Tensor class_embedding(const Parameters& p, const Tensor& image);

struct LossGrads {
    double loss = 0.0;
    Parameters grads;
};
// MSE loss against targets [batch] plus d(loss)/d(every parameter).
LossGrads loss_and_gradients(const Parameters& p, const std::vector<Tensor>& images,
                             const Tensor& targets);

}  // namespace vitmem::vit
