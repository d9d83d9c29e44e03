// Acceptance gate: one self-contained check per release criterion, each
// printing a single pass/fail line. Exit code is the number of failures.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vitmem/augment.hpp"
#include "vitmem/checkpoint.hpp"
#include "vitmem/dedup.hpp"
#include "vitmem/image.hpp"
#include "vitmem/manifest.hpp"
#include "vitmem/metrics.hpp"
#include "vitmem/ops.hpp"
#include "vitmem/semantics.hpp"
#include "vitmem/splits.hpp"
#include "vitmem/trainer.hpp"
#include "vitmem/vit.hpp"

using namespace vitmem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", criterion, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void run(int criterion, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
        auto [ok, detail] = fn();
        report(criterion, ok, detail);
    } catch (const std::exception& e) {
        report(criterion, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("vitmem_accept_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    std::string str() const { return path.string(); }
};

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng) {
    Tensor t(std::move(shape));
    std::normal_distribution<double> dist;
    for (double& v : t.data) v = dist(rng);
    return t;
}

ImageBuffer random_image(std::size_t w, std::size_t h, std::mt19937_64& rng) {
    ImageBuffer img(w, h);
    std::uniform_real_distribution<double> u(0, 1);
    for (double& p : img.pixels) p = u(rng);
    return img;
}

ImageBuffer smooth_image(std::size_t w, std::size_t h, std::mt19937_64& rng) {
    return image::resize(random_image(3, 3, rng), w, h);
}

// --- criterion 1: gradient suite ---------------------------------------

double weighted_sum(const Tensor& y, const Tensor& w) {
    double s = 0;
    for (std::size_t i = 0; i < y.numel(); ++i) s += y.data[i] * w.data[i];
    return s;
}

std::pair<bool, std::string> criterion1() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    double worst_op = 0;

    {  // matmul
        Tensor a = random_tensor({3, 4}, rng), b = random_tensor({4, 2}, rng);
        Tensor w = random_tensor({3, 2}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            return weighted_sum(ops::matmul(in[0], in[1]), w);
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            auto [da, db] = ops::matmul_backward(in[0], in[1], w);
            return std::vector<Tensor>{da, db};
        };
        worst_op = std::max(worst_op, ops::grad_check(loss, analytic, {a, b}, 1e-3).max_rel_error);
    }
    {  // layer_norm
        Tensor x = random_tensor({4, 8}, rng), g = random_tensor({8}, rng),
               bta = random_tensor({8}, rng), w = random_tensor({4, 8}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            return weighted_sum(ops::layer_norm(in[0], in[1], in[2]), w);
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            auto gr = ops::layer_norm_backward(in[0], in[1], w);
            return std::vector<Tensor>{gr.dx, gr.dgamma, gr.dbeta};
        };
        worst_op =
            std::max(worst_op, ops::grad_check(loss, analytic, {x, g, bta}, 1e-3).max_rel_error);
    }
    {  // softmax
        Tensor x = random_tensor({4, 6}, rng), w = random_tensor({4, 6}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            return weighted_sum(ops::softmax(in[0]), w);
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::softmax_backward(ops::softmax(in[0]), w)};
        };
        worst_op = std::max(worst_op, ops::grad_check(loss, analytic, {x}, 1e-3).max_rel_error);
    }
    {  // gelu
        Tensor x = random_tensor({16}, rng), w = random_tensor({16}, rng);
        auto loss = [&](const std::vector<Tensor>& in) { return weighted_sum(ops::gelu(in[0]), w); };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::gelu_backward(in[0], w)};
        };
        worst_op = std::max(worst_op, ops::grad_check(loss, analytic, {x}, 1e-3).max_rel_error);
    }
    {  // sigmoid
        Tensor x = random_tensor({16}, rng), w = random_tensor({16}, rng);
        auto loss = [&](const std::vector<Tensor>& in) {
            return weighted_sum(ops::sigmoid(in[0]), w);
        };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::sigmoid_backward(ops::sigmoid(in[0]), w)};
        };
        worst_op = std::max(worst_op, ops::grad_check(loss, analytic, {x}, 1e-3).max_rel_error);
    }
    {  // mse
        Tensor p = random_tensor({12}, rng), t = random_tensor({12}, rng);
        auto loss = [&](const std::vector<Tensor>& in) { return ops::mse_loss(in[0], t); };
        auto analytic = [&](const std::vector<Tensor>& in) {
            return std::vector<Tensor>{ops::mse_loss_backward(in[0], t)};
        };
        worst_op = std::max(worst_op, ops::grad_check(loss, analytic, {p}, 1e-3).max_rel_error);
    }

    // full tiny model: loss gradient w.r.t. every parameter
    const vit::ModelConfig cfg = vit::ModelConfig::tiny();
    vit::Parameters params = vit::init_parameters(cfg, 7);
    std::vector<Tensor> images;
    for (int i = 0; i < 2; ++i) {
        Tensor img({8, 8, 3});
        std::uniform_real_distribution<double> u(-1, 1);
        for (double& v : img.data) v = u(rng);
        images.push_back(img);
    }
    Tensor targets({2}, {0.25, 0.75});
    auto flatten = [](const vit::Parameters& q) {
        std::vector<Tensor> flat;
        for (const auto& [name, t] : q.named_tensors()) flat.push_back(*t);
        return flat;
    };
    auto rebuild = [&](const std::vector<Tensor>& flat) {
        vit::Parameters q = vit::zeros_like(params);
        auto named = q.named_tensors();
        for (std::size_t i = 0; i < named.size(); ++i) *named[i].second = flat[i];
        return q;
    };
    auto loss = [&](const std::vector<Tensor>& flat) {
        return vit::loss_and_gradients(rebuild(flat), images, targets).loss;
    };
    auto analytic = [&](const std::vector<Tensor>& flat) {
        return flatten(vit::loss_and_gradients(rebuild(flat), images, targets).grads);
    };
    const double tiny_err = ops::grad_check(loss, analytic, flatten(params), 1e-3).max_rel_error;

    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "per-op max rel err " << worst_op << " (<1e-4), tiny ViT " << tiny_err << " (<1e-3), "
       << secs << "s (<60s)";
    return {worst_op < 1e-4 && tiny_err < 1e-3 && secs < 60.0, os.str()};
}

// --- criterion 2: overfit harness --------------------------------------

std::pair<bool, std::string> criterion2() {
    const auto t0 = Clock::now();
    TempDir dir("overfit");
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> u(0, 1);

    data::Manifest m;
    for (int i = 0; i < 32; ++i) {
        const std::string id = "img" + std::to_string(i);
        const std::string path = dir.file(id + ".png");
        image_io::write_png(random_image(8, 8, rng), path);
        m.records.push_back({id, path, u(rng), data::Source::Other});
    }

    train::TrainConfig cfg;
    cfg.model = vit::ModelConfig::tiny();
    cfg.batch_size = 32;
    cfg.resize_to = 8;
    cfg.crop_to = 8;
    cfg.adam.learning_rate = 1e-3;
    cfg.epochs = 500;  // one full-batch step per epoch
    cfg.seed = 99;
    cfg.augment = augment::AugmentSpec::defaults(99);
    for (auto& t : cfg.augment.transforms) t.probability = 0.0;

    auto result = train::train(cfg, m, m, vit::init_parameters(cfg.model, 100));
    double best = 1e9;
    std::size_t best_step = 0;
    for (const auto& e : result.history)
        if (e.train_mse < best) {
            best = e.train_mse;
            best_step = e.epoch + 1;
        }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "train MSE " << best << " (<1e-3) by step " << best_step << " of 500, " << secs
       << "s (<120s)";
    return {best < 1e-3 && secs < 120.0, os.str()};
}

// --- criterion 3: metric oracles ---------------------------------------

std::vector<double> oracle_ranks(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            if (v[j] == v[i]) ++equal;
        }
        r[i] = static_cast<double>(less) + (1.0 + static_cast<double>(equal)) / 2.0;
    }
    return r;
}

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::pair<bool, std::string> criterion3() {
    std::mt19937_64 rng(3003);
    double worst = 0;
    std::size_t checked = 0;

    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 2 + rng() % 49;
        const bool with_ties = rep % 2 == 0;
        std::vector<double> x(n), y(n);
        if (with_ties) {
            std::uniform_int_distribution<int> val(0, 7);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = val(rng);
                y[i] = val(rng);
            }
        } else {
            std::uniform_real_distribution<double> u(0, 1);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = u(rng);
                y[i] = u(rng);
            }
        }

        // mse against a plain loop
        double m = 0;
        for (std::size_t i = 0; i < n; ++i) m += (x[i] - y[i]) * (x[i] - y[i]);
        m /= static_cast<double>(n);
        worst = std::max(worst, std::abs(metrics::mse(x, y) - m));

        const bool cx = std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end();
        const bool cy = std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end();
        const auto rho = metrics::spearman(x, y);
        const auto r2 = metrics::r_squared(x, y);
        if (cx || cy) {
            if (rho.has_value() || r2.has_value()) return {false, "undefined flag missed"};
            continue;
        }
        if (!rho.has_value() || !r2.has_value()) return {false, "defined correlation flagged"};
        worst = std::max(worst, std::abs(*rho - oracle_pearson(oracle_ranks(x), oracle_ranks(y))));
        const double pr = oracle_pearson(x, y);
        worst = std::max(worst, std::abs(*r2 - pr * pr));
        ++checked;
    }

    // tie-free inputs against the classical rank-difference formula
    double worst_classical = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 3 + rng() % 30;
        std::vector<double> x(n), y(n);
        std::iota(x.begin(), x.end(), 1.0);
        std::iota(y.begin(), y.end(), 1.0);
        std::shuffle(x.begin(), x.end(), rng);
        std::shuffle(y.begin(), y.end(), rng);
        double d2 = 0;
        for (std::size_t i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
        const double nn = static_cast<double>(n);
        const double classical = 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
        worst_classical = std::max(worst_classical, std::abs(*metrics::spearman(x, y) - classical));
    }

    // fixed fixtures pinned to the classical formula: for y=(2,1,4,3,5)
    // sum d^2 = 4 so rho = 0.8; for y=(2,3,1,4,5) sum d^2 = 6 so rho = 0.7
    const double fixed8 = *metrics::spearman({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5});
    const double fixed7 = *metrics::spearman({1, 2, 3, 4, 5}, {2, 3, 1, 4, 5});
    std::ostringstream os;
    os << checked << " random vectors, worst oracle gap " << std::max(worst, worst_classical)
       << " (<1e-12), spearman fixtures " << fixed8 << "/" << fixed7 << " (=0.8/0.7)";
    return {worst <= 1e-12 && worst_classical <= 1e-12 && std::abs(fixed8 - 0.8) <= 1e-12 &&
                std::abs(fixed7 - 0.7) <= 1e-12,
            os.str()};
}

// --- criterion 4: augmentation suite -----------------------------------

std::pair<bool, std::string> criterion4() {
    std::mt19937_64 rng(4004);

    // flip involution, bit-exact
    ImageBuffer img = random_image(9, 7, rng);
    augment::TransformSpec flip{augment::TransformKind::HorizontalFlip, 1.0, {}};
    std::mt19937_64 trng(1);
    if (augment::apply_transform(flip, augment::apply_transform(flip, img, trng), trng).pixels !=
        img.pixels)
        return {false, "horizontal flip is not an involution"};

    // shape/range preservation across 100 random images x 11 transforms
    const augment::AugmentSpec spec = augment::AugmentSpec::defaults(4);
    for (int i = 0; i < 100; ++i) {
        ImageBuffer im = random_image(12, 12, rng);
        for (const auto& t : spec.transforms) {
            std::mt19937_64 r2(rng());
            ImageBuffer out = augment::apply_transform(t, im, r2);
            if (out.width != im.width || out.height != im.height)
                return {false, "transform changed dimensions"};
            for (double p : out.pixels)
                if (p < 0.0 || p > 1.0) return {false, "transform left [0,1]"};
        }
    }

    // empirical per-transform rate over 10,000 pipeline draws
    ImageBuffer small = random_image(8, 8, rng);
    std::vector<std::size_t> hits(spec.transforms.size(), 0);
    std::vector<bool> applied;
    const std::size_t draws = 10000;
    for (std::size_t i = 0; i < draws; ++i) {
        augment::apply_pipeline_traced(small, spec, i, 0, applied);
        for (std::size_t t = 0; t < applied.size(); ++t)
            if (applied[t]) ++hits[t];
    }
    double lo = 1, hi = 0;
    for (std::size_t h : hits) {
        const double rate = static_cast<double>(h) / static_cast<double>(draws);
        lo = std::min(lo, rate);
        hi = std::max(hi, rate);
    }
    std::ostringstream os;
    os << "involution + 100-image range checks ok, rates in [" << lo << ", " << hi
       << "] (0.7 +/- 0.03)";
    return {lo >= 0.67 && hi <= 0.73, os.str()};
}

// --- criterion 5: dedup ------------------------------------------------

std::pair<bool, std::string> criterion5() {
    TempDir dir("dedup");
    std::mt19937_64 rng(5005);

    // 40 distinct smooth images + 10 planted duplicates (5 exact copies,
    // 5 JPEG re-encodes); embeddings are the raw pixel vectors, exercised
    // through the precomputed-embedding file format
    data::EmbeddingStore store;
    data::Manifest m;
    std::vector<ImageBuffer> base;
    for (int i = 0; i < 40; ++i) {
        ImageBuffer im = smooth_image(12, 12, rng);
        base.push_back(im);
        const std::string id = "orig" + std::to_string(i);
        store.put(id, im.pixels);
        m.records.push_back({id, "/" + id, 0.5, data::Source::Lamem});
    }
    for (int i = 0; i < 5; ++i) {  // exact copies
        const std::string id = "copy" + std::to_string(i);
        store.put(id, base[static_cast<std::size_t>(i)].pixels);
        m.records.push_back({id, "/" + id, 0.5, data::Source::Memcat});
    }
    for (int i = 5; i < 10; ++i) {  // JPEG re-encodes
        const std::string id = "jpeg" + std::to_string(i);
        const std::string path = dir.file(id + ".jpg");
        image_io::write_jpeg(base[static_cast<std::size_t>(i)], path, 95);
        store.put(id, image_io::read(path).pixels);
        m.records.push_back({id, "/" + id, 0.5, data::Source::Memcat});
    }

    data::save_embeddings(store, dir.file("embeddings.csv"));
    const data::EmbeddingStore loaded = data::load_embeddings(dir.file("embeddings.csv"));

    const data::DedupResult r = data::dedup({m}, loaded);

    // ground truth: each planted id pairs with exactly one base image
    std::set<std::pair<std::string, std::string>> want;
    for (int i = 0; i < 5; ++i)
        want.insert({"copy" + std::to_string(i), "orig" + std::to_string(i)});
    for (int i = 5; i < 10; ++i)
        want.insert({"jpeg" + std::to_string(i), "orig" + std::to_string(i)});

    std::set<std::pair<std::string, std::string>> got;
    for (const auto& p : r.report.pairs)
        got.insert({std::min(p.id_a, p.id_b), std::max(p.id_a, p.id_b)});
    const std::size_t true_hits = static_cast<std::size_t>(std::count_if(
        got.begin(), got.end(), [&](const auto& pr) { return want.count(pr) == 1; }));
    const bool recall = true_hits == want.size();           // all planted pairs found
    const bool precision = got.size() == true_hits;        // and nothing else
    const bool removed_ok = r.report.removed_ids.size() == 10 && r.cleaned.size() == 40;

    const data::DedupResult again = data::dedup({r.cleaned}, loaded);
    const bool idempotent = again.report.pairs.empty() && again.report.removed_ids.empty();

    std::ostringstream os;
    os << "recall " << true_hits << "/10, spurious pairs " << (got.size() - true_hits)
       << ", removed " << r.report.removed_ids.size()
       << ", idempotent=" << (idempotent ? "yes" : "no");
    return {recall && precision && removed_ok && idempotent, os.str()};
}

// --- criterion 6: splits -----------------------------------------------

std::pair<bool, std::string> criterion6() {
    data::Manifest m;
    m.records.reserve(68741);
    for (int i = 0; i < 68741; ++i)
        m.records.push_back({"id" + std::to_string(i), "/p", 0.5, data::Source::Lamem});

    data::SplitSpec spec;
    spec.seed = 20240917;
    spec.n_splits = 10;
    spec.test_count = 5000;
    const auto splits = data::make_splits(m, spec);
    if (splits.size() != 10) return {false, "wrong split count"};
    for (const auto& s : splits) {
        if (s.test_ids.size() != 5000 || s.train_ids.size() != 63741)
            return {false, "wrong partition sizes"};
        std::set<std::string> all(s.test_ids.begin(), s.test_ids.end());
        all.insert(s.train_ids.begin(), s.train_ids.end());
        if (all.size() != m.size()) return {false, "split is not a disjoint exhaustive partition"};
    }

    TempDir a("splits_a");
    TempDir b("splits_b");
    data::save_splits(splits, a.str());
    data::save_splits(data::make_splits(m, spec), b.str());
    for (int k = 0; k < 10; ++k)
        for (const char* part : {"train", "test"}) {
            std::ifstream fa(a.file("split" + std::to_string(k) + "_" + part + ".txt"),
                             std::ios::binary);
            std::ifstream fb(b.file("split" + std::to_string(k) + "_" + part + ".txt"),
                             std::ios::binary);
            std::string sa((std::istreambuf_iterator<char>(fa)), {});
            std::string sb((std::istreambuf_iterator<char>(fb)), {});
            if (sa.empty() || sa != sb) return {false, "split files are not byte-identical"};
        }
    return {true, "10 splits of 68,741 records partition exactly (|test|=5000), byte-identical "
                  "under the fixed seed"};
}

// --- criterion 7: semantics --------------------------------------------

std::pair<bool, std::string> criterion7() {
    const std::vector<semantics::CaptionRecord> captions{
        {"i1", "a dog sitting on a couch"}, {"i2", "two dogs playing with a dog"},
        {"i3", "a cat asleep on the couch"}, {"i4", "a dog running"},
        {"i5", "a cat at the beach"},        {"i6", "men walking"},
    };
    const std::unordered_map<std::string, double> scores{
        {"i1", 0.9}, {"i2", 0.5}, {"i3", 0.7}, {"i4", 0.1}, {"i5", 0.3}, {"i6", 0.8}};
    const auto stats = semantics::noun_stats(captions, scores, semantics::Lexicon::builtin());

    // hand-computed expectation
    const std::map<std::string, std::pair<std::size_t, double>> want{
        {"dog", {3, 0.5}}, {"couch", {2, 0.8}}, {"cat", {2, 0.5}},
        {"man", {1, 0.8}}, {"beach", {1, 0.3}}};
    if (stats.size() != want.size()) return {false, "unexpected noun table size"};
    for (const auto& s : stats) {
        const auto it = want.find(s.noun);
        if (it == want.end()) return {false, "unexpected noun " + s.noun};
        if (s.count != it->second.first || std::abs(s.mean_score - it->second.second) > 1e-12)
            return {false, "wrong stats for " + s.noun};
    }

    // conservation: sum of count*mean equals the raw incidence mass
    double lhs = 0;
    for (const auto& s : stats) lhs += static_cast<double>(s.count) * s.mean_score;
    double rhs = 0;
    for (const auto& c : captions)
        rhs += static_cast<double>(
                   semantics::extract_nouns(c.caption, semantics::Lexicon::builtin()).size()) *
               scores.at(c.id);
    if (std::abs(lhs - rhs) > 1e-12) return {false, "conservation identity violated"};

    const auto self = semantics::match_and_correlate(stats, stats);
    const bool perfect = self.spearman_rho && std::abs(*self.spearman_rho - 1.0) <= 1e-12 &&
                         self.r_squared && std::abs(*self.r_squared - 1.0) <= 1e-12;
    if (!perfect) return {false, "self-correlation is not a perfect fit"};
    return {true, "6-caption fixture table exact, conservation holds, self-match rho=1 R2=1"};
}

// --- criterion 8: checkpoints ------------------------------------------

bool roundtrip_bit_exact(const vit::ModelConfig& cfg, std::uint64_t seed, const std::string& tag) {
    TempDir dir("ckpt_" + tag);
    vit::Parameters p = vit::init_parameters(cfg, seed);
    checkpoint::TrainMeta meta;
    meta.step = 5;
    meta.seed = seed;
    checkpoint::save(p, meta, dir.str());
    const checkpoint::Loaded back = checkpoint::load(dir.str());
    auto na = p.named_tensors();
    auto nb = back.params.named_tensors();
    if (na.size() != nb.size()) return false;
    for (std::size_t i = 0; i < na.size(); ++i)
        if (na[i].second->data != nb[i].second->data) return false;
    return back.meta.step == 5 && back.meta.seed == seed;
}

std::pair<bool, std::string> criterion8() {
    const bool tiny_ok = roundtrip_bit_exact(vit::ModelConfig::tiny(), 31, "tiny");
    const bool base_ok = roundtrip_bit_exact(vit::ModelConfig::base(), 37, "base");
    const double published = 86567656.0;
    const double ours = static_cast<double>(vit::count_params(vit::ModelConfig::base()));
    const double gap = std::abs(ours - published) / published;
    std::ostringstream os;
    os << "tiny round trip " << (tiny_ok ? "exact" : "BROKEN") << ", base round trip "
       << (base_ok ? "exact" : "BROKEN") << ", base params " << static_cast<std::size_t>(ours)
       << " vs published 86,567,656 (" << gap * 100 << "% < 1%)";
    return {tiny_ok && base_ok && gap < 0.01, os.str()};
}

}  // namespace

int main() {
    run(1, criterion1);
    run(2, criterion2);
    run(3, criterion3);
    run(4, criterion4);
    run(5, criterion5);
    run(6, criterion6);
    run(7, criterion7);
    run(8, criterion8);
    std::printf("criterion 9: N/A — data-conditional (requires the external corpora; see README)\n");
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all runnable criteria passed\n");
    return failures;
}
