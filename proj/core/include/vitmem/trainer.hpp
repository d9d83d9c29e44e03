#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vitmem/adam.hpp"
#include "vitmem/augment.hpp"
#include "vitmem/checkpoint.hpp"
#include "vitmem/manifest.hpp"
#include "vitmem/metrics.hpp"
#include "vitmem/vit.hpp"

namespace vitmem::train {

struct TrainConfig {
    vit::ModelConfig model;
    std::size_t batch_size = 32;
    std::size_t resize_to = 256;
    std::size_t crop_to = 224;
    AdamConfig adam;
    std::size_t epochs = 1;
    std::uint64_t seed = 0;
    bool freeze_trunk = false;
    augment::AugmentSpec augment = augment::AugmentSpec::defaults();

    void validate() const;
};

// Key-value text config mirroring TrainConfig (see README for keys).
TrainConfig load_train_config(const std::string& path);

struct EpochStats {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
    std::optional<double> val_spearman;
};

struct TrainResult {
    vit::Parameters params;  // best-validation-MSE weights
    checkpoint::TrainMeta meta;
    std::vector<EpochStats> history;
};

// Per batch: load -> resize -> augment -> center-crop -> forward -> MSE ->
// backward -> adam. Unreadable training images are fatal. Validation uses
// the deterministic inference path.
TrainResult train(const TrainConfig& cfg, const data::Manifest& train_manifest,
                  const data::Manifest& val_manifest, vit::Parameters init);

// CSV `epoch,train_mse,val_mse,val_spearman`.
void save_history(const std::vector<EpochStats>& history, const std::string& path);

struct Prediction {
    std::string path;
    std::optional<double> score;  // empty on per-image failure
    std::string error;
};

struct InferenceOptions {
    std::size_t resize_to = 256;
    std::size_t crop_to = 224;
    std::size_t threads = 1;
};

// Deterministic path: resize -> center-crop -> forward, no augmentation.
// Per-image errors are recorded, not thrown; the batch continues.
std::vector<Prediction> predict(const vit::Parameters& params, const checkpoint::TrainMeta& meta,
                                const std::vector<std::string>& image_paths,
                                const InferenceOptions& opts = {});

// Predicts every manifest image (errors fatal here) and scores against the
// behavioral targets.
metrics::MetricsReport evaluate(const vit::Parameters& params, const checkpoint::TrainMeta& meta,
                                const data::Manifest& manifest, const InferenceOptions& opts = {});

}  // namespace vitmem::train
