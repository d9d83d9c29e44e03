#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "vitmem/ops.hpp"
#include "vitmem/vit.hpp"

using namespace vitmem;
using vit::ModelConfig;
using vit::Parameters;

namespace {

Tensor random_image_tensor(std::size_t size, std::mt19937_64& rng) {
    Tensor t({size, size, 3});
    std::uniform_real_distribution<double> u(-1, 1);
    for (double& v : t.data) v = u(rng);
    return t;
}

Tensor transpose2(const Tensor& a) {
    Tensor t({a.cols(), a.rows()});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
    return t;
}

// Reference forward pass assembled in the open from the public ops, used
// as an independent oracle for vit::forward.
double reference_score(const Parameters& p, const Tensor& image) {
    const ModelConfig& cfg = p.config;
    const std::size_t d = cfg.dim, t = cfg.seq_len(), dh = d / cfg.heads;

    Tensor patches = vit::patchify(image, cfg.patch_size);
    Tensor tokens = ops::matmul(patches, p.patch_proj);
    Tensor x({t, d});
    for (std::size_t j = 0; j < d; ++j) x.at(0, j) = p.cls_token.data[j];
    for (std::size_t i = 0; i + 1 < t; ++i)
        for (std::size_t j = 0; j < d; ++j) x.at(i + 1, j) = tokens.at(i, j);
    x += p.pos_embed;

    for (const vit::BlockParams& b : p.blocks) {
        Tensor h1 = ops::layer_norm(x, b.ln1_gamma, b.ln1_beta);
        Tensor q = ops::matmul(h1, b.wq);
        Tensor k = ops::matmul(h1, b.wk);
        Tensor v = ops::matmul(h1, b.wv);
        Tensor concat = Tensor::zeros({t, d});
        for (std::size_t hi = 0; hi < cfg.heads; ++hi) {
            Tensor qh({t, dh}), kh({t, dh}), vh({t, dh});
            for (std::size_t i = 0; i < t; ++i)
                for (std::size_t j = 0; j < dh; ++j) {
                    qh.at(i, j) = q.at(i, hi * dh + j);
                    kh.at(i, j) = k.at(i, hi * dh + j);
                    vh.at(i, j) = v.at(i, hi * dh + j);
                }
            Tensor scores = ops::matmul(qh, transpose2(kh));
            const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
            for (double& s : scores.data) s *= scale;
            Tensor attn = ops::softmax(scores);
            Tensor oh = ops::matmul(attn, vh);
            for (std::size_t i = 0; i < t; ++i)
                for (std::size_t j = 0; j < dh; ++j) concat.at(i, hi * dh + j) = oh.at(i, j);
        }
        Tensor x_mid = x + ops::matmul(concat, b.wo);

        Tensor h2 = ops::layer_norm(x_mid, b.ln2_gamma, b.ln2_beta);
        Tensor m1 = ops::matmul(h2, b.mlp_w1);
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < cfg.mlp_dim; ++j) m1.at(i, j) += b.mlp_b1.data[j];
        Tensor m2 = ops::matmul(ops::gelu(m1), b.mlp_w2);
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < d; ++j) m2.at(i, j) += b.mlp_b2.data[j];
        x = x_mid + m2;
    }

    Tensor f = ops::layer_norm(x, p.ln_f_gamma, p.ln_f_beta);
    Tensor logit({1}, {p.head_b.data[0]});
    for (std::size_t j = 0; j < d; ++j) logit.data[0] += f.at(0, j) * p.head_w.data[j];
    return ops::sigmoid(logit).data[0];
}

}  // namespace

TEST_SUITE("vit") {

TEST_CASE("config validation") {
    CHECK_NOTHROW(ModelConfig::base().validate());
    CHECK_NOTHROW(ModelConfig::tiny().validate());

    ModelConfig bad = ModelConfig::tiny();
    bad.patch_size = 3;  // 8 % 3 != 0
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = ModelConfig::tiny();
    bad.heads = 3;  // 16 % 3 != 0
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = ModelConfig::tiny();
    bad.dim = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("patchify shapes") {
    CHECK(ModelConfig::base().num_patches() == 196);
    CHECK(ModelConfig::base().patch_dim() == 768);

    std::mt19937_64 rng(103);
    Tensor img = random_image_tensor(8, rng);
    Tensor patches = vit::patchify(img, 4);
    CHECK(patches.shape == std::vector<std::size_t>{4, 48});
}

TEST_CASE("patchify matches nested-loop oracle") {
    std::mt19937_64 rng(107);
    Tensor img = random_image_tensor(8, rng);
    Tensor patches = vit::patchify(img, 4);
    for (std::size_t py = 0; py < 2; ++py)
        for (std::size_t px = 0; px < 2; ++px)
            for (std::size_t y = 0; y < 4; ++y)
                for (std::size_t x = 0; x < 4; ++x)
                    for (std::size_t c = 0; c < 3; ++c) {
                        const double want =
                            img.data[((py * 4 + y) * 8 + (px * 4 + x)) * 3 + c];
                        const double got =
                            patches.at(py * 2 + px, (y * 4 + x) * 3 + c);
                        REQUIRE(got == want);
                    }
    CHECK_THROWS_AS(vit::patchify(Tensor({8, 8, 3}), 3), DimensionError);
}

TEST_CASE("forward outputs lie strictly in (0,1)") {
    std::mt19937_64 rng(109);
    Parameters p = vit::init_parameters(ModelConfig::tiny(), 1);
    std::vector<Tensor> batch{random_image_tensor(8, rng), random_image_tensor(8, rng)};
    Tensor scores = vit::forward(p, batch);
    REQUIRE(scores.numel() == 2);
    for (double s : scores.data) {
        CHECK(s > 0.0);
        CHECK(s < 1.0);
    }
}

TEST_CASE("zero head gives exactly 0.5") {
    std::mt19937_64 rng(113);
    Parameters p = vit::init_parameters(ModelConfig::tiny(), 2);
    std::fill(p.head_w.data.begin(), p.head_w.data.end(), 0.0);
    p.head_b.data[0] = 0.0;
    Tensor scores = vit::forward(p, {random_image_tensor(8, rng)});
    CHECK(scores.data[0] == 0.5);
}

TEST_CASE("forward matches a step-by-step ops composition") {
    std::mt19937_64 rng(127);
    Parameters p = vit::init_parameters(ModelConfig::tiny(), 3);
    for (int rep = 0; rep < 3; ++rep) {
        Tensor img = random_image_tensor(8, rng);
        const double got = vit::forward(p, {img}).data[0];
        const double want = reference_score(p, img);
        CHECK(std::abs(got - want) <= 1e-12);
    }
}

TEST_CASE("count_params equals enumerate-and-sum") {
    for (ModelConfig cfg : {ModelConfig::tiny(), ModelConfig{16, 4, 8, 1, 2, 12}}) {
        Parameters p = vit::init_parameters(cfg, 0);
        std::size_t total = 0;
        for (const auto& [name, t] : p.named_tensors()) total += t->numel();
        CHECK(vit::count_params(cfg) == total);
    }

    // depth-0 degenerate: embedding stage + final norm + head only
    ModelConfig deg{8, 8, 1, 0, 1, 1};
    CHECK(vit::count_params(deg) == (8 * 8 * 3) * 1  // patch projection
                                        + 2 * 1      // pos embed (1 patch + cls)
                                        + 1           // class token
                                        + 2           // final norm gamma/beta
                                        + 1 + 1);     // head w, b
}

TEST_CASE("base config parameter count is within 1% of the published ViT-Base total") {
    const double published = 86567656.0;
    const double ours = static_cast<double>(vit::count_params(ModelConfig::base()));
    CHECK(std::abs(ours - published) / published < 0.01);
}

TEST_CASE("positional embeddings make patch order matter") {
    std::mt19937_64 rng(131);
    Parameters p = vit::init_parameters(ModelConfig::tiny(), 4);
    Tensor img = random_image_tensor(8, rng);
    // swap the top-left and bottom-right 4x4 patches
    Tensor swapped = img;
    for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t c = 0; c < 3; ++c)
                std::swap(swapped.data[(y * 8 + x) * 3 + c],
                          swapped.data[((y + 4) * 8 + x + 4) * 3 + c]);
    CHECK(vit::forward(p, {img}).data[0] != vit::forward(p, {swapped}).data[0]);
}

TEST_CASE("forward is deterministic") {
    std::mt19937_64 rng(137);
    Parameters p = vit::init_parameters(ModelConfig::tiny(), 5);
    Tensor img = random_image_tensor(8, rng);
    CHECK(vit::forward(p, {img}).data == vit::forward(p, {img}).data);
}

TEST_CASE("non-finite activations report the block index") {
    std::mt19937_64 rng(139);
    Parameters p = vit::init_parameters(ModelConfig::tiny(), 6);
    std::fill(p.blocks[0].mlp_w2.data.begin(), p.blocks[0].mlp_w2.data.end(), 1e308);
    CHECK_THROWS_WITH_AS(vit::forward(p, {random_image_tensor(8, rng)}),
                         doctest::Contains("block 0"), Error);
}

TEST_CASE("loss gradients match finite differences on the tiny model") {
    std::mt19937_64 rng(149);
    ModelConfig cfg{8, 4, 8, 1, 2, 12};  // extra small keeps the check fast
    Parameters p = vit::init_parameters(cfg, 7);
    std::vector<Tensor> images{random_image_tensor(8, rng), random_image_tensor(8, rng)};
    Tensor targets({2}, {0.3, 0.8});

    auto flatten = [](const Parameters& q) {
        std::vector<Tensor> flat;
        for (const auto& [name, t] : q.named_tensors()) flat.push_back(*t);
        return flat;
    };
    auto rebuild = [&](const std::vector<Tensor>& flat) {
        Parameters q = vit::zeros_like(p);
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
    const auto report = ops::grad_check(loss, analytic, flatten(p), 1e-3);
    CHECK(report.max_rel_error < 1e-3);
}

TEST_CASE("class_embedding has model width and feeds the head") {
    std::mt19937_64 rng(151);
    Parameters p = vit::init_parameters(ModelConfig::tiny(), 8);
    Tensor img = random_image_tensor(8, rng);
    Tensor cls = vit::class_embedding(p, img);
    REQUIRE(cls.numel() == p.config.dim);

    double logit = p.head_b.data[0];
    for (std::size_t j = 0; j < cls.numel(); ++j) logit += cls.data[j] * p.head_w.data[j];
    const double score = vit::forward(p, {img}).data[0];
    CHECK(ops::sigmoid(Tensor({1}, {logit})).data[0] == doctest::Approx(score).epsilon(1e-14));
}

}  // TEST_SUITE
