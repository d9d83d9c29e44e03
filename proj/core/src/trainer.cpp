#include "vitmem/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "vitmem/image.hpp"

namespace vitmem::train {

void TrainConfig::validate() const {
    model.validate();
    if (batch_size < 1) throw Error("batch_size must be >= 1");
    if (crop_to > resize_to) throw Error("crop_to must not exceed resize_to");
    if (crop_to != model.image_size)
        throw Error("crop_to " + std::to_string(crop_to) + " must match model image_size " +
                    std::to_string(model.image_size));
    if (adam.learning_rate < 0) throw Error("learning_rate must be >= 0");
}

TrainConfig load_train_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config " + path);
    TrainConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    bool augment_loaded = false;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "image_size") cfg.model.image_size = std::stoull(val);
        else if (key == "patch_size") cfg.model.patch_size = std::stoull(val);
        else if (key == "dim") cfg.model.dim = std::stoull(val);
        else if (key == "depth") cfg.model.depth = std::stoull(val);
        else if (key == "heads") cfg.model.heads = std::stoull(val);
        else if (key == "mlp_dim") cfg.model.mlp_dim = std::stoull(val);
        else if (key == "batch_size") cfg.batch_size = std::stoull(val);
        else if (key == "resize_to") cfg.resize_to = std::stoull(val);
        else if (key == "crop_to") cfg.crop_to = std::stoull(val);
        else if (key == "learning_rate") cfg.adam.learning_rate = std::stod(val);
        else if (key == "beta1") cfg.adam.beta1 = std::stod(val);
        else if (key == "beta2") cfg.adam.beta2 = std::stod(val);
        else if (key == "adam_eps") cfg.adam.eps = std::stod(val);
        else if (key == "epochs") cfg.epochs = std::stoull(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "freeze_trunk") cfg.freeze_trunk = (val == "true" || val == "1");
        else if (key == "augment_file") {
            cfg.augment = augment::load_spec(val);
            augment_loaded = true;
        } else {
            throw Error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!augment_loaded) cfg.augment = augment::AugmentSpec::defaults(cfg.seed);
    cfg.validate();
    return cfg;
}

namespace {

Tensor to_model_input(const ImageBuffer& img, const checkpoint::TrainMeta& meta) {
    Tensor t({img.height, img.width, 3});
    for (std::size_t i = 0; i < t.numel(); ++i)
        t.data[i] = (img.pixels[i] - meta.norm_mean) / meta.norm_std;
    return t;
}

Tensor inference_input(const std::string& path, std::size_t resize_to, std::size_t crop_to,
                       const checkpoint::TrainMeta& meta) {
    ImageBuffer img = image_io::read(path);
    img = image::resize(img, resize_to, resize_to);
    img = image::center_crop(img, crop_to, crop_to);
    return to_model_input(img, meta);
}

void zero_trunk_grads(vit::Parameters& grads) {
    for (auto& [name, t] : grads.named_tensors()) {
        if (name == "head_w" || name == "head_b") continue;
        std::fill(t->data.begin(), t->data.end(), 0.0);
    }
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const data::Manifest& train_manifest,
                  const data::Manifest& val_manifest, vit::Parameters init) {
    cfg.validate();
    if (train_manifest.size() == 0 || val_manifest.size() == 0)
        throw Error("train/validation manifests must be non-empty");

    checkpoint::TrainMeta meta;
    meta.seed = cfg.seed;

    vit::Parameters params = std::move(init);
    AdamState state = init_adam(params);
    std::mt19937_64 order_rng(cfg.seed);

    TrainResult result;
    result.params = params;
    double best_val_mse = std::numeric_limits<double>::infinity();

    const std::size_t n = train_manifest.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::uint64_t step = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), order_rng);
        double epoch_loss = 0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            std::vector<Tensor> batch;
            Tensor targets({end - start});
            for (std::size_t i = start; i < end; ++i) {
                const data::ImageRecord& rec = train_manifest.records[order[i]];
                ImageBuffer img;
                try {
                    img = image_io::read(rec.path);
                } catch (const Error& e) {
                    throw Error("failed to load training image " + rec.path + ": " + e.what());
                }
                img = image::resize(img, cfg.resize_to, cfg.resize_to);
                img = augment::apply_pipeline(img, cfg.augment, order[i], epoch);
                img = image::center_crop(img, cfg.crop_to, cfg.crop_to);
                batch.push_back(to_model_input(img, meta));
                targets.data[i - start] = rec.score;
            }
            auto lg = vit::loss_and_gradients(params, batch, targets);
            if (!std::isfinite(lg.loss))
                throw Error("non-finite loss at step " + std::to_string(step));
            if (cfg.freeze_trunk) zero_trunk_grads(lg.grads);
            adam_step(params, lg.grads, state, cfg.adam);
            epoch_loss += lg.loss;
            ++batches;
            ++step;
        }

        const auto val = evaluate(params, meta, val_manifest,
                                  {cfg.resize_to, cfg.crop_to, 1});
        EpochStats es;
        es.epoch = epoch;
        es.train_mse = epoch_loss / static_cast<double>(batches);
        es.val_mse = val.mse;
        es.val_spearman = val.spearman_rho;
        result.history.push_back(es);
        if (val.mse < best_val_mse) {
            best_val_mse = val.mse;
            result.params = params;
            meta.step = step;
        }
    }
    result.meta = meta;
    return result;
}

void save_history(const std::vector<EpochStats>& history, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write history " + path);
    f << "epoch,train_mse,val_mse,val_spearman\n";
    f.precision(12);
    for (const auto& e : history) {
        f << e.epoch << ',' << e.train_mse << ',' << e.val_mse << ',';
        if (e.val_spearman) f << *e.val_spearman;
        else f << "NA";
        f << '\n';
    }
}

std::vector<Prediction> predict(const vit::Parameters& params, const checkpoint::TrainMeta& meta,
                                const std::vector<std::string>& image_paths,
                                const InferenceOptions& opts) {
    std::vector<Prediction> out(image_paths.size());
    auto work = [&](std::size_t i) {
        out[i].path = image_paths[i];
        try {
            const Tensor input = inference_input(image_paths[i], opts.resize_to, opts.crop_to, meta);
            out[i].score = vit::forward(params, {input}).data[0];
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, opts.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < image_paths.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < image_paths.size(); i = next++) work(i);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

metrics::MetricsReport evaluate(const vit::Parameters& params, const checkpoint::TrainMeta& meta,
                                const data::Manifest& manifest, const InferenceOptions& opts) {
    if (manifest.size() < 2) throw Error("evaluate requires at least 2 samples");
    std::vector<std::string> paths;
    std::vector<double> targets;
    for (const auto& r : manifest.records) {
        paths.push_back(r.path);
        targets.push_back(r.score);
    }
    const auto preds = predict(params, meta, paths, opts);
    std::vector<double> scores;
    scores.reserve(preds.size());
    for (const auto& p : preds) {
        if (!p.score) throw Error("failed to score " + p.path + ": " + p.error);
        scores.push_back(*p.score);
    }
    return metrics::evaluate_pairs(scores, targets);
}

}  // namespace vitmem::train
