#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vitmem/image.hpp"

namespace vitmem::augment {

enum class TransformKind {
    HorizontalFlip,
    Sharpen,
    Blur,
    MotionBlur,
    RandomContrast,
    HueSaturationValue,
    Clahe,
    ShiftScaleRotate,
    Perspective,
    OpticalDistortion,
    GridDistortion,
};

const char* kind_name(TransformKind k);
TransformKind kind_from_name(const std::string& name);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct TransformSpec {
    TransformKind kind;
    double probability = 0.7;
    // Parameter ranges keyed by name; each transform documents its keys.
    std::map<std::string, Range> ranges;
};

enum class GateMode { PerTransform, WholePipeline };

struct AugmentSpec {
    std::vector<TransformSpec> transforms;
    std::uint64_t seed = 0;
    GateMode gate = GateMode::PerTransform;
    // Used only in WholePipeline mode: one draw gates the full transform list.
    double pipeline_probability = 0.7;

    // The full 11-transform list with default probabilities and ranges.
    static AugmentSpec defaults(std::uint64_t seed = 0);
};

// RNG stream for one (seed, sample, epoch) triple; augmentation of any
// sample is reproducible in isolation.
std::mt19937_64 derive_rng(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t epoch);

// Applies one transform, drawing its parameters from `rng` within the
// spec'd ranges. Output has the same dimensions and stays in [0,1].
ImageBuffer apply_transform(const TransformSpec& t, const ImageBuffer& img, std::mt19937_64& rng);

ImageBuffer apply_pipeline(const ImageBuffer& img, const AugmentSpec& spec,
                           std::uint64_t sample_index, std::uint64_t epoch = 0);

// As above, also reporting which transforms fired (one flag per list entry).
ImageBuffer apply_pipeline_traced(const ImageBuffer& img, const AugmentSpec& spec,
                                  std::uint64_t sample_index, std::uint64_t epoch,
                                  std::vector<bool>& applied);

// Human-readable key-value serialization (see README for the schema).
std::string to_text(const AugmentSpec& spec);
AugmentSpec from_text(const std::string& text);
void save_spec(const AugmentSpec& spec, const std::string& path);
AugmentSpec load_spec(const std::string& path);

}  // namespace vitmem::augment
