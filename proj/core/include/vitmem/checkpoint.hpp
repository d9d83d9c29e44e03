#pragma once

#include <cstdint>
#include <string>

#include "vitmem/vit.hpp"

namespace vitmem::checkpoint {

struct TrainMeta {
    std::uint64_t step = 0;
    std::uint64_t seed = 0;
    // pixel normalization applied before the model, recorded so inference
    // matches training
    double norm_mean = 0.5;
    double norm_std = 0.5;
};

// Checkpoint directory layout:
//   header.txt  - format version, config, metadata, tensor manifest
//                 (name, dtype, shape, byte offset into tensors.bin)
//   tensors.bin - raw little-endian float32 payloads, row-major, in
//                 manifest order
inline constexpr int kFormatVersion = 1;

void save(const vit::Parameters& params, const TrainMeta& meta, const std::string& dir);

struct Loaded {
    vit::Parameters params;
    TrainMeta meta;
};
Loaded load(const std::string& dir);

// Loads trunk tensors from a checkpoint whose config matches `cfg` on all
// non-head shapes; optionally re-initializes the scoring head
// (normal, std 0.02) so a pretrained classifier can be repurposed.
vit::Parameters load_pretrained(const std::string& dir, const vit::ModelConfig& cfg,
                                bool reinit_head, std::uint64_t head_seed = 0);

}  // namespace vitmem::checkpoint
