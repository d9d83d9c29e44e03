// Command-line entry point for the memorability toolkit.
// Machine-readable results go to stdout; commentary to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vitmem/checkpoint.hpp"
#include "vitmem/csv.hpp"
#include "vitmem/dedup.hpp"
#include "vitmem/manifest.hpp"
#include "vitmem/metrics.hpp"
#include "vitmem/ops.hpp"
#include "vitmem/semantics.hpp"
#include "vitmem/splits.hpp"
#include "vitmem/trainer.hpp"
#include "vitmem/vit.hpp"

namespace fs = std::filesystem;
using namespace vitmem;

namespace {

// Accepts either a full manifest (id,path,score,source) or a bare
// id,score table, e.g. model predictions.
std::unordered_map<std::string, double> load_scores(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open scores " + path);
    std::string line;
    if (!std::getline(f, line)) throw Error("empty scores file: " + path);
    std::unordered_map<std::string, double> out;
    if (line == "id,path,score,source") {
        for (const auto& r : data::load_manifest(path).records) out[r.id] = r.score;
        return out;
    }
    if (line != "id,score") throw Error("scores header must be 'id,score' or a manifest: " + path);
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = csv::parse_line(line);
        if (fields.size() != 2)
            throw Error(path + ":" + std::to_string(lineno) + ": expected id,score");
        out[fields[0]] = std::stod(fields[1]);
    }
    return out;
}

int cmd_train(const std::string& config_path, const std::string& train_path,
              const std::string& val_path, const std::string& out_dir,
              const std::string& init_ckpt, bool reinit_head) {
    const auto cfg = train::load_train_config(config_path);
    const auto train_m = data::load_manifest(train_path);
    const auto val_m = data::load_manifest(val_path);
    vit::Parameters init =
        init_ckpt.empty() ? vit::init_parameters(cfg.model, cfg.seed)
                          : checkpoint::load_pretrained(init_ckpt, cfg.model, reinit_head, cfg.seed);
    std::cerr << "training on " << train_m.size() << " images, validating on " << val_m.size()
              << "\n";
    const auto result = train::train(cfg, train_m, val_m, init);
    fs::create_directories(out_dir);
    checkpoint::save(result.params, result.meta, (fs::path(out_dir) / "checkpoint").string());
    train::save_history(result.history, (fs::path(out_dir) / "history.csv").string());
    for (const auto& e : result.history) {
        std::cout << e.epoch << ',' << e.train_mse << ',' << e.val_mse << ',';
        if (e.val_spearman) std::cout << *e.val_spearman;
        else std::cout << "NA";
        std::cout << '\n';
    }
    return 0;
}

int cmd_predict(const std::string& model_dir, const std::vector<std::string>& images,
                std::size_t threads) {
    const auto loaded = checkpoint::load(model_dir);
    train::InferenceOptions opts;
    opts.threads = threads;
    if (loaded.params.config.image_size != opts.crop_to) {
        // toy models: resize straight to the model input
        opts.crop_to = loaded.params.config.image_size;
        opts.resize_to = loaded.params.config.image_size;
    }
    const auto preds = train::predict(loaded.params, loaded.meta, images, opts);
    bool any_error = false;
    std::cout.precision(12);
    for (const auto& p : preds) {
        if (p.score) {
            std::cout << p.path << ',' << *p.score << '\n';
        } else {
            std::cerr << "error: " << p.path << ": " << p.error << '\n';
            any_error = true;
        }
    }
    return any_error ? 1 : 0;
}

int cmd_evaluate(const std::string& model_dir, const std::string& manifest_path,
                 std::size_t threads) {
    const auto loaded = checkpoint::load(model_dir);
    const auto manifest = data::load_manifest(manifest_path);
    train::InferenceOptions opts;
    opts.threads = threads;
    if (loaded.params.config.image_size != opts.crop_to) {
        opts.crop_to = loaded.params.config.image_size;
        opts.resize_to = loaded.params.config.image_size;
    }
    const auto report = train::evaluate(loaded.params, loaded.meta, manifest, opts);
    std::cout << "n,mse,spearman,r_squared\n" << report.csv_row() << '\n';
    return 0;
}

int cmd_dedup(const std::vector<std::string>& manifest_paths, const std::string& embeddings_path,
              double threshold, const std::string& out_dir) {
    std::vector<data::Manifest> manifests;
    for (const auto& p : manifest_paths) manifests.push_back(data::load_manifest(p));
    const auto embeddings = data::load_embeddings(embeddings_path);
    const auto result = data::dedup(manifests, embeddings, threshold);
    fs::create_directories(out_dir);
    data::save_report(result.report, (fs::path(out_dir) / "dedup_report.csv").string());
    data::save_manifest(result.cleaned, (fs::path(out_dir) / "cleaned.csv").string());
    std::cout << "pairs," << result.report.pairs.size() << "\nclusters,"
              << result.report.clusters.size() << "\nremoved," << result.report.removed_ids.size()
              << "\nkept," << result.cleaned.size() << '\n';
    return 0;
}

int cmd_split(const std::string& manifest_path, std::size_t test_count, double test_fraction,
              std::size_t n_splits, std::uint64_t seed, const std::string& out_dir) {
    const auto manifest = data::load_manifest(manifest_path);
    data::SplitSpec spec;
    spec.seed = seed;
    spec.n_splits = n_splits;
    if (test_count > 0) spec.test_count = test_count;
    if (test_fraction > 0) spec.test_fraction = test_fraction;
    const auto splits = data::make_splits(manifest, spec);
    data::save_splits(splits, out_dir);
    for (std::size_t i = 0; i < splits.size(); ++i)
        std::cout << "split" << i << ',' << splits[i].train_ids.size() << ','
                  << splits[i].test_ids.size() << '\n';
    return 0;
}

int cmd_kfold(const std::string& manifest_path, std::size_t k, std::size_t repeats,
              std::uint64_t seed, const std::string& out_dir) {
    const auto manifest = data::load_manifest(manifest_path);
    const auto folds = data::kfold(manifest, k, repeats, seed);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < folds.size(); ++i) {
        const std::size_t rep = i / k, fold = i % k;
        const std::string stem = "rep" + std::to_string(rep) + "_fold" + std::to_string(fold);
        std::ofstream tr(fs::path(out_dir) / (stem + "_train.txt"));
        for (const auto& id : folds[i].train_ids) tr << id << '\n';
        std::ofstream va(fs::path(out_dir) / (stem + "_val.txt"));
        for (const auto& id : folds[i].validation_ids) va << id << '\n';
        std::cout << stem << ',' << folds[i].train_ids.size() << ','
                  << folds[i].validation_ids.size() << '\n';
    }
    return 0;
}

int cmd_semantic(const std::string& captions_a, const std::string& scores_a,
                 const std::string& captions_b, const std::string& scores_b, double percentile,
                 const std::string& out_dir, bool plot, const std::string& lexicon_path) {
    const semantics::Lexicon lexicon =
        lexicon_path.empty() ? semantics::Lexicon::builtin() : semantics::Lexicon::load(lexicon_path);
    const auto caps_a = semantics::load_captions(captions_a);
    const auto caps_b = semantics::load_captions(captions_b);
    const auto stats_a =
        semantics::filter_percentile(semantics::noun_stats(caps_a, load_scores(scores_a), lexicon),
                                     percentile);
    const auto stats_b =
        semantics::filter_percentile(semantics::noun_stats(caps_b, load_scores(scores_b), lexicon),
                                     percentile);
    std::cerr << "filtered nouns: a=" << stats_a.size() << " b=" << stats_b.size() << "\n";
    const auto result = semantics::match_and_correlate(stats_a, stats_b);
    fs::create_directories(out_dir);
    semantics::save_noun_csv(result.table, (fs::path(out_dir) / "nouns.csv").string());
    if (plot) semantics::save_noun_svg(result.table, (fs::path(out_dir) / "nouns.svg").string());
    std::cout.precision(12);
    std::cout << "matched,spearman,r_squared\n" << result.table.size() << ',';
    if (result.spearman_rho) std::cout << *result.spearman_rho;
    else std::cout << "NA";
    std::cout << ',';
    if (result.r_squared) std::cout << *result.r_squared;
    else std::cout << "NA";
    std::cout << '\n';
    return 0;
}

int cmd_gradcheck() {
    std::mt19937_64 rng(1234);
    bool ok = true;
    auto line = [&](const std::string& name, double err, double tol) {
        const bool pass = err < tol;
        ok = ok && pass;
        std::cout << name << ',' << err << ',' << (pass ? "pass" : "fail") << '\n';
    };

    {  // matmul
        Tensor a = Tensor::randn({3, 4}, 1.0, rng), b = Tensor::randn({4, 2}, 1.0, rng);
        Tensor w = Tensor::randn({3, 2}, 1.0, rng);  // fixed projection to a scalar
        auto loss = [&](const std::vector<Tensor>& in) {
            const Tensor c = ops::matmul(in[0], in[1]);
            double s = 0;
            for (std::size_t i = 0; i < c.numel(); ++i) s += c.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            auto [da, db] = ops::matmul_backward(in[0], in[1], w);
            return std::vector<Tensor>{da, db};
        };
        line("matmul", ops::grad_check(loss, analytic, {a, b}).max_rel_error, 1e-6);
    }
    {  // layer_norm
        Tensor x = Tensor::randn({4, 8}, 1.0, rng);
        Tensor gamma = Tensor::randn({8}, 1.0, rng), beta = Tensor::randn({8}, 1.0, rng);
        Tensor w = Tensor::randn({4, 8}, 1.0, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            const Tensor y = ops::layer_norm(in[0], in[1], in[2]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            auto g = ops::layer_norm_backward(in[0], in[1], w);
            return std::vector<Tensor>{g.dx, g.dgamma, g.dbeta};
        };
        line("layer_norm", ops::grad_check(loss, analytic, {x, gamma, beta}).max_rel_error, 1e-6);
    }
    {  // softmax
        Tensor x = Tensor::randn({4, 6}, 1.0, rng);
        Tensor w = Tensor::randn({4, 6}, 1.0, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            const Tensor y = ops::softmax(in[0]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::softmax_backward(ops::softmax(in[0]), w)};
        };
        line("softmax", ops::grad_check(loss, analytic, {x}).max_rel_error, 1e-6);
    }
    {  // gelu + sigmoid
        Tensor x = Tensor::randn({16}, 1.0, rng);
        Tensor w = Tensor::randn({16}, 1.0, rng);
        auto gloss = [&](const std::vector<Tensor>& in) {
            const Tensor y = ops::gelu(in[0]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto ganalytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::gelu_backward(in[0], w)};
        };
        // elementwise ops need a smaller step to beat truncation error
        line("gelu", ops::grad_check(gloss, ganalytic, {x}, 1e-5).max_rel_error, 1e-8);
        auto sloss = [&](const std::vector<Tensor>& in) {
            const Tensor y = ops::sigmoid(in[0]);
            double s = 0;
            for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
            return s;
        };
        auto sanalytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::sigmoid_backward(ops::sigmoid(in[0]), w)};
        };
        line("sigmoid", ops::grad_check(sloss, sanalytic, {x}, 1e-5).max_rel_error, 1e-8);
    }
    {  // full tiny model end to end
        const auto cfg = vit::ModelConfig::tiny();
        vit::Parameters p = vit::init_parameters(cfg, 7);
        std::vector<Tensor> images;
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (int i = 0; i < 2; ++i) {
            Tensor img({cfg.image_size, cfg.image_size, 3});
            for (double& v : img.data) v = unit(rng);
            images.push_back(std::move(img));
        }
        Tensor targets({2}, {0.3, 0.8});
        auto named = p.named_tensors();
        double max_err = 0;
        const double h = 1e-3;
        const auto grads = vit::loss_and_gradients(p, images, targets).grads;
        const auto gnamed = grads.named_tensors();
        for (std::size_t t = 0; t < named.size(); ++t) {
            Tensor& pt = *named[t].second;
            for (std::size_t i = 0; i < pt.numel(); ++i) {
                const double orig = pt.data[i];
                pt.data[i] = orig + h;
                const double lp = vit::loss_and_gradients(p, images, targets).loss;
                pt.data[i] = orig - h;
                const double lm = vit::loss_and_gradients(p, images, targets).loss;
                pt.data[i] = orig;
                const double numeric = (lp - lm) / (2 * h);
                const double a = gnamed[t].second->data[i];
                max_err = std::max(max_err, std::abs(a - numeric) / std::max(1.0, std::abs(a)));
            }
        }
        line("tiny_vit_full", max_err, 1e-3);
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"image memorability toolkit"};
    app.require_subcommand(1);

    std::string config_path, train_path, val_path, out_dir, init_ckpt, model_dir, manifest_path;
    std::string embeddings_path, captions_a, captions_b, scores_a, scores_b, lexicon_path;
    std::vector<std::string> images, manifest_paths;
    bool reinit_head = false, plot = false;
    std::size_t threads = 1, test_count = 0, n_splits = 10, k = 5, repeats = 1;
    double threshold = data::kDefaultDedupThreshold, test_fraction = 0, percentile = 85;
    std::uint64_t seed = 0;

    auto* train_cmd = app.add_subcommand("train", "fine-tune a model on a manifest");
    train_cmd->add_option("--config", config_path, "key-value training config")->required();
    train_cmd->add_option("--train", train_path, "training manifest CSV")->required();
    train_cmd->add_option("--val", val_path, "validation manifest CSV")->required();
    train_cmd->add_option("--out", out_dir, "output directory")->required();
    train_cmd->add_option("--init", init_ckpt, "initial checkpoint (pretrained trunk)");
    train_cmd->add_flag("--reinit-head", reinit_head, "re-initialize the scoring head");

    auto* predict_cmd = app.add_subcommand("predict", "score images with a checkpoint");
    predict_cmd->add_option("--model", model_dir, "checkpoint directory")->required();
    predict_cmd->add_option("--images", images, "image paths")->required()->expected(-1);
    predict_cmd->add_option("--threads", threads, "worker threads");

    auto* eval_cmd = app.add_subcommand("evaluate", "score a manifest and report metrics");
    eval_cmd->add_option("--model", model_dir, "checkpoint directory")->required();
    eval_cmd->add_option("--manifest", manifest_path, "manifest CSV with targets")->required();
    eval_cmd->add_option("--threads", threads, "worker threads");

    auto* dedup_cmd = app.add_subcommand("dedup", "near-duplicate detection and removal");
    dedup_cmd->add_option("--manifests", manifest_paths, "manifest CSVs")->required()->expected(-1);
    dedup_cmd->add_option("--embeddings", embeddings_path, "embedding file")->required();
    dedup_cmd->add_option("--threshold", threshold, "cosine similarity threshold");
    dedup_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* split_cmd = app.add_subcommand("split", "generate train/test splits");
    split_cmd->add_option("--manifest", manifest_path, "manifest CSV")->required();
    split_cmd->add_option("--test-count", test_count, "test set size");
    split_cmd->add_option("--test-fraction", test_fraction, "test fraction, e.g. 0.10");
    split_cmd->add_option("--splits", n_splits, "number of splits");
    split_cmd->add_option("--seed", seed, "RNG seed");
    split_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* kfold_cmd = app.add_subcommand("kfold", "repeated k-fold partitions");
    kfold_cmd->add_option("--manifest", manifest_path, "manifest CSV")->required();
    kfold_cmd->add_option("--k", k, "fold count");
    kfold_cmd->add_option("--repeats", repeats, "repeat count");
    kfold_cmd->add_option("--seed", seed, "RNG seed");
    kfold_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* sem_cmd = app.add_subcommand("semantic", "caption-noun memorability analysis");
    sem_cmd->add_option("--captions-a", captions_a, "caption CSV for set A")->required();
    sem_cmd->add_option("--scores-a", scores_a, "scores for set A")->required();
    sem_cmd->add_option("--captions-b", captions_b, "caption CSV for set B")->required();
    sem_cmd->add_option("--scores-b", scores_b, "scores for set B")->required();
    sem_cmd->add_option("--percentile", percentile, "frequency percentile filter");
    sem_cmd->add_option("--lexicon", lexicon_path, "custom noun lexicon file");
    sem_cmd->add_flag("--plot", plot, "also emit an SVG scatter");
    sem_cmd->add_option("--out", out_dir, "output directory")->required();

    app.add_subcommand("gradcheck", "run the gradient verification suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (train_cmd->parsed())
            return cmd_train(config_path, train_path, val_path, out_dir, init_ckpt, reinit_head);
        if (predict_cmd->parsed()) return cmd_predict(model_dir, images, threads);
        if (eval_cmd->parsed()) return cmd_evaluate(model_dir, manifest_path, threads);
        if (dedup_cmd->parsed())
            return cmd_dedup(manifest_paths, embeddings_path, threshold, out_dir);
        if (split_cmd->parsed())
            return cmd_split(manifest_path, test_count, test_fraction, n_splits, seed, out_dir);
        if (kfold_cmd->parsed()) return cmd_kfold(manifest_path, k, repeats, seed, out_dir);
        if (sem_cmd->parsed())
            return cmd_semantic(captions_a, scores_a, captions_b, scores_b, percentile, out_dir,
                                plot, lexicon_path);
        return cmd_gradcheck();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
