#include "vitmem/vit.hpp"

#include <cmath>

#include "vitmem/ops.hpp"

namespace vitmem::vit {

using ops::gelu;
using ops::gelu_backward;
using ops::layer_norm;
using ops::layer_norm_backward;
using ops::matmul;
using ops::matmul_backward;
using ops::softmax;
using ops::softmax_backward;

void ModelConfig::validate() const {
    if (image_size < 1 || patch_size < 1 || dim < 1 || heads < 1 || mlp_dim < 1)
        throw Error("model config: all fields must be >= 1");
    if (image_size % patch_size != 0)
        throw Error("model config: image_size " + std::to_string(image_size) +
                    " not divisible by patch_size " + std::to_string(patch_size));
    if (dim % heads != 0)
        throw Error("model config: dim " + std::to_string(dim) + " not divisible by heads " +
                    std::to_string(heads));
}

std::vector<std::pair<std::string, Tensor*>> Parameters::named_tensors() {
    std::vector<std::pair<std::string, Tensor*>> out;
    out.emplace_back("patch_proj", &patch_proj);
    out.emplace_back("pos_embed", &pos_embed);
    out.emplace_back("cls_token", &cls_token);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string pre = "block" + std::to_string(i) + ".";
        BlockParams& b = blocks[i];
        out.emplace_back(pre + "ln1_gamma", &b.ln1_gamma);
        out.emplace_back(pre + "ln1_beta", &b.ln1_beta);
        out.emplace_back(pre + "wq", &b.wq);
        out.emplace_back(pre + "wk", &b.wk);
        out.emplace_back(pre + "wv", &b.wv);
        out.emplace_back(pre + "wo", &b.wo);
        out.emplace_back(pre + "ln2_gamma", &b.ln2_gamma);
        out.emplace_back(pre + "ln2_beta", &b.ln2_beta);
        out.emplace_back(pre + "mlp_w1", &b.mlp_w1);
        out.emplace_back(pre + "mlp_b1", &b.mlp_b1);
        out.emplace_back(pre + "mlp_w2", &b.mlp_w2);
        out.emplace_back(pre + "mlp_b2", &b.mlp_b2);
    }
    out.emplace_back("ln_f_gamma", &ln_f_gamma);
    out.emplace_back("ln_f_beta", &ln_f_beta);
    out.emplace_back("head_w", &head_w);
    out.emplace_back("head_b", &head_b);
    return out;
}

std::vector<std::pair<std::string, const Tensor*>> Parameters::named_tensors() const {
    auto mut = const_cast<Parameters*>(this)->named_tensors();
    std::vector<std::pair<std::string, const Tensor*>> out;
    out.reserve(mut.size());
    for (auto& [n, t] : mut) out.emplace_back(n, t);
    return out;
}

Parameters init_parameters(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    const std::size_t d = cfg.dim, pd = cfg.patch_dim(), t = cfg.seq_len(), m = cfg.mlp_dim;
    const double kInitStd = 0.02;
    // Xavier-ish scale for the square projections keeps tiny-model training stable.
    const double wstd = 1.0 / std::sqrt(static_cast<double>(d));

    Parameters p;
    p.config = cfg;
    p.patch_proj = Tensor::randn({pd, d}, 1.0 / std::sqrt(static_cast<double>(pd)), rng);
    p.pos_embed = Tensor::randn({t, d}, kInitStd, rng);
    p.cls_token = Tensor::randn({d}, kInitStd, rng);
    p.blocks.resize(cfg.depth);
    for (auto& b : p.blocks) {
        b.wq = Tensor::randn({d, d}, wstd, rng);
        b.wk = Tensor::randn({d, d}, wstd, rng);
        b.wv = Tensor::randn({d, d}, wstd, rng);
        b.wo = Tensor::randn({d, d}, wstd, rng);
        b.ln1_gamma = Tensor::full({d}, 1.0);
        b.ln1_beta = Tensor::zeros({d});
        b.ln2_gamma = Tensor::full({d}, 1.0);
        b.ln2_beta = Tensor::zeros({d});
        b.mlp_w1 = Tensor::randn({d, m}, wstd, rng);
        b.mlp_b1 = Tensor::zeros({m});
        b.mlp_w2 = Tensor::randn({m, d}, 1.0 / std::sqrt(static_cast<double>(m)), rng);
        b.mlp_b2 = Tensor::zeros({d});
    }
    p.ln_f_gamma = Tensor::full({d}, 1.0);
    p.ln_f_beta = Tensor::zeros({d});
    p.head_w = Tensor::randn({d}, kInitStd, rng);
    p.head_b = Tensor::zeros({1});
    return p;
}

Parameters zeros_like(const Parameters& p) {
    Parameters z;
    z.config = p.config;
    auto src = p.named_tensors();
    z.patch_proj = Tensor::zeros(p.patch_proj.shape);
    z.pos_embed = Tensor::zeros(p.pos_embed.shape);
    z.cls_token = Tensor::zeros(p.cls_token.shape);
    z.blocks.resize(p.blocks.size());
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        const BlockParams& b = p.blocks[i];
        BlockParams& o = z.blocks[i];
        o.wq = Tensor::zeros(b.wq.shape);
        o.wk = Tensor::zeros(b.wk.shape);
        o.wv = Tensor::zeros(b.wv.shape);
        o.wo = Tensor::zeros(b.wo.shape);
        o.ln1_gamma = Tensor::zeros(b.ln1_gamma.shape);
        o.ln1_beta = Tensor::zeros(b.ln1_beta.shape);
        o.ln2_gamma = Tensor::zeros(b.ln2_gamma.shape);
        o.ln2_beta = Tensor::zeros(b.ln2_beta.shape);
        o.mlp_w1 = Tensor::zeros(b.mlp_w1.shape);
        o.mlp_b1 = Tensor::zeros(b.mlp_b1.shape);
        o.mlp_w2 = Tensor::zeros(b.mlp_w2.shape);
        o.mlp_b2 = Tensor::zeros(b.mlp_b2.shape);
    }
    z.ln_f_gamma = Tensor::zeros(p.ln_f_gamma.shape);
    z.ln_f_beta = Tensor::zeros(p.ln_f_beta.shape);
    z.head_w = Tensor::zeros(p.head_w.shape);
    z.head_b = Tensor::zeros(p.head_b.shape);
    return z;
}

std::size_t count_params(const ModelConfig& cfg) {
    cfg.validate();
    const std::size_t d = cfg.dim, pd = cfg.patch_dim(), t = cfg.seq_len(), m = cfg.mlp_dim;
    const std::size_t per_block = 4 * d * d + 4 * d + d * m + m + m * d + d;
    return pd * d + t * d + d + cfg.depth * per_block + 2 * d + d + 1;
}

Tensor patchify(const Tensor& image, std::size_t patch_size) {
    if (image.ndim() != 3 || image.shape[2] != 3)
        throw DimensionError("patchify: expected [HxWx3] image, got " + shape_str(image.shape));
    const std::size_t h = image.shape[0], w = image.shape[1];
    if (h != w || h % patch_size != 0)
        throw DimensionError("patchify: image " + shape_str(image.shape) +
                             " not square or not divisible by patch size " +
                             std::to_string(patch_size));
    const std::size_t grid = h / patch_size;
    const std::size_t pd = patch_size * patch_size * 3;
    Tensor out({grid * grid, pd});
    for (std::size_t py = 0; py < grid; ++py)
        for (std::size_t px = 0; px < grid; ++px) {
            double* dst = &out.data[(py * grid + px) * pd];
            for (std::size_t y = 0; y < patch_size; ++y)
                for (std::size_t x = 0; x < patch_size; ++x)
                    for (std::size_t c = 0; c < 3; ++c)
                        *dst++ = image.data[((py * patch_size + y) * w + px * patch_size + x) * 3 + c];
        }
    return out;
}

namespace {

Tensor transpose(const Tensor& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Tensor t({n, m});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) t.data[j * m + i] = a.data[i * n + j];
    return t;
}

Tensor col_slice(const Tensor& a, std::size_t c0, std::size_t c1) {
    const std::size_t m = a.rows(), n = a.cols(), w = c1 - c0;
    Tensor s({m, w});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < w; ++j) s.data[i * w + j] = a.data[i * n + c0 + j];
    return s;
}

void add_col_slice(Tensor& a, const Tensor& s, std::size_t c0) {
    const std::size_t m = a.rows(), n = a.cols(), w = s.cols();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < w; ++j) a.data[i * n + c0 + j] += s.data[i * w + j];
}

void add_row_vector(Tensor& a, const Tensor& v) {
    const std::size_t m = a.rows(), n = a.cols();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a.data[i * n + j] += v.data[j];
}

// Cached forward intermediates for one image.
struct BlockCache {
    Tensor x_in;          // block input
    Tensor h1;            // ln1 output
    Tensor q, k, v;       // projections
    std::vector<Tensor> attn;  // softmax output per head [T x T]
    Tensor concat;        // concatenated head outputs
    Tensor x_mid;         // after attention residual
    Tensor h2;            // ln2 output
    Tensor m1;            // pre-gelu
    Tensor g;             // gelu output
};

struct ImageCache {
    Tensor patches;  // [N x pd]
    Tensor x0;       // token matrix entering block 0
    std::vector<BlockCache> blocks;
    Tensor x_final;  // after last residual
    Tensor f;        // final layer norm output
    double logit = 0;
    double score = 0;
};

ImageCache forward_one(const Parameters& p, const Tensor& image) {
    const ModelConfig& cfg = p.config;
    const std::size_t d = cfg.dim, t = cfg.seq_len(), heads = cfg.heads, dh = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    ImageCache c;
    c.patches = patchify(image, cfg.patch_size);
    const Tensor tokens = matmul(c.patches, p.patch_proj);  // [N x d]

    Tensor x({t, d});
    for (std::size_t j = 0; j < d; ++j) x.data[j] = p.cls_token.data[j];
    std::copy(tokens.data.begin(), tokens.data.end(), x.data.begin() + d);
    x += p.pos_embed;
    c.x0 = x;

    c.blocks.resize(cfg.depth);
    for (std::size_t bi = 0; bi < cfg.depth; ++bi) {
        const BlockParams& b = p.blocks[bi];
        BlockCache& bc = c.blocks[bi];
        bc.x_in = x;
        bc.h1 = layer_norm(bc.x_in, b.ln1_gamma, b.ln1_beta);
        bc.q = matmul(bc.h1, b.wq);
        bc.k = matmul(bc.h1, b.wk);
        bc.v = matmul(bc.h1, b.wv);
        bc.concat = Tensor({t, d});
        bc.attn.resize(heads);
        for (std::size_t hi = 0; hi < heads; ++hi) {
            const Tensor qh = col_slice(bc.q, hi * dh, (hi + 1) * dh);
            const Tensor kh = col_slice(bc.k, hi * dh, (hi + 1) * dh);
            const Tensor vh = col_slice(bc.v, hi * dh, (hi + 1) * dh);
            Tensor scores = matmul(qh, transpose(kh));
            for (double& s : scores.data) s *= scale;
            bc.attn[hi] = softmax(scores);
            const Tensor oh = matmul(bc.attn[hi], vh);
            add_col_slice(bc.concat, oh, hi * dh);
        }
        const Tensor attn_out = matmul(bc.concat, b.wo);
        bc.x_mid = bc.x_in + attn_out;

        bc.h2 = layer_norm(bc.x_mid, b.ln2_gamma, b.ln2_beta);
        bc.m1 = matmul(bc.h2, b.mlp_w1);
        add_row_vector(bc.m1, b.mlp_b1);
        bc.g = gelu(bc.m1);
        Tensor m2 = matmul(bc.g, b.mlp_w2);
        add_row_vector(m2, b.mlp_b2);
        x = bc.x_mid + m2;
        if (!x.all_finite())
            throw Error("non-finite activation after encoder block " + std::to_string(bi));
    }
    c.x_final = x;
    c.f = layer_norm(c.x_final, p.ln_f_gamma, p.ln_f_beta);
    double logit = p.head_b.data[0];
    for (std::size_t j = 0; j < d; ++j) logit += c.f.data[j] * p.head_w.data[j];
    c.logit = logit;
    c.score = logit >= 0 ? 1.0 / (1.0 + std::exp(-logit))
                         : std::exp(logit) / (1.0 + std::exp(logit));
    return c;
}

// Backpropagates d(loss)/d(score) for one image, accumulating into g.
void backward_one(const Parameters& p, const ImageCache& c, double dscore, Parameters& g) {
    const ModelConfig& cfg = p.config;
    const std::size_t d = cfg.dim, t = cfg.seq_len(), heads = cfg.heads, dh = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    const double dlogit = dscore * c.score * (1.0 - c.score);
    g.head_b.data[0] += dlogit;
    Tensor df({t, d});
    for (std::size_t j = 0; j < d; ++j) {
        g.head_w.data[j] += dlogit * c.f.data[j];
        df.data[j] = dlogit * p.head_w.data[j];  // only the class-token row feeds the head
    }
    auto lnf = layer_norm_backward(c.x_final, p.ln_f_gamma, df);
    g.ln_f_gamma += lnf.dgamma;
    g.ln_f_beta += lnf.dbeta;
    Tensor dx = std::move(lnf.dx);

    for (std::size_t bi = cfg.depth; bi-- > 0;) {
        const BlockParams& b = p.blocks[bi];
        const BlockCache& bc = c.blocks[bi];
        BlockParams& gb = g.blocks[bi];

        // MLP branch: x = x_mid + (gelu(h2 W1 + b1) W2 + b2)
        const Tensor& dm2 = dx;
        auto [dg, dw2] = matmul_backward(bc.g, b.mlp_w2, dm2);
        gb.mlp_w2 += dw2;
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < d; ++j) gb.mlp_b2.data[j] += dm2.data[i * d + j];
        const Tensor dm1 = gelu_backward(bc.m1, dg);
        auto [dh2, dw1] = matmul_backward(bc.h2, b.mlp_w1, dm1);
        gb.mlp_w1 += dw1;
        const std::size_t m = cfg.mlp_dim;
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < m; ++j) gb.mlp_b1.data[j] += dm1.data[i * m + j];
        auto ln2 = layer_norm_backward(bc.x_mid, b.ln2_gamma, dh2);
        gb.ln2_gamma += ln2.dgamma;
        gb.ln2_beta += ln2.dbeta;
        Tensor dx_mid = dx + ln2.dx;  // residual

        // attention branch: x_mid = x_in + concat(heads) Wo
        auto [dconcat, dwo] = matmul_backward(bc.concat, b.wo, dx_mid);
        gb.wo += dwo;
        Tensor dq({t, d}), dk({t, d}), dv({t, d});
        for (std::size_t hi = 0; hi < heads; ++hi) {
            const Tensor qh = col_slice(bc.q, hi * dh, (hi + 1) * dh);
            const Tensor kh = col_slice(bc.k, hi * dh, (hi + 1) * dh);
            const Tensor vh = col_slice(bc.v, hi * dh, (hi + 1) * dh);
            const Tensor doh = col_slice(dconcat, hi * dh, (hi + 1) * dh);
            auto [da, dvh] = matmul_backward(bc.attn[hi], vh, doh);
            Tensor ds = softmax_backward(bc.attn[hi], da);
            for (double& s : ds.data) s *= scale;
            // scores = qh kh^T
            auto [dqh, dkhT] = matmul_backward(qh, transpose(kh), ds);
            add_col_slice(dq, dqh, hi * dh);
            add_col_slice(dk, transpose(dkhT), hi * dh);
            add_col_slice(dv, dvh, hi * dh);
        }
        Tensor dh1({t, d});
        {
            auto [dh1q, dwq] = matmul_backward(bc.h1, b.wq, dq);
            gb.wq += dwq;
            dh1 += dh1q;
            auto [dh1k, dwk] = matmul_backward(bc.h1, b.wk, dk);
            gb.wk += dwk;
            dh1 += dh1k;
            auto [dh1v, dwv] = matmul_backward(bc.h1, b.wv, dv);
            gb.wv += dwv;
            dh1 += dh1v;
        }
        auto ln1 = layer_norm_backward(bc.x_in, b.ln1_gamma, dh1);
        gb.ln1_gamma += ln1.dgamma;
        gb.ln1_beta += ln1.dbeta;
        dx = dx_mid + ln1.dx;  // residual
    }

    // embedding stage: x0 = [cls; patches W] + pos
    g.pos_embed += dx;
    for (std::size_t j = 0; j < d; ++j) g.cls_token.data[j] += dx.data[j];
    Tensor dtokens({t - 1, d});
    std::copy(dx.data.begin() + d, dx.data.end(), dtokens.data.begin());
    auto [dpat, dproj] = matmul_backward(c.patches, p.patch_proj, dtokens);
    (void)dpat;  // image gradients are not needed
    g.patch_proj += dproj;
}

}  // namespace

Tensor forward(const Parameters& p, const std::vector<Tensor>& images) {
    if (images.empty()) throw Error("forward: empty batch");
    Tensor scores({images.size()});
    for (std::size_t i = 0; i < images.size(); ++i) scores.data[i] = forward_one(p, images[i]).score;
    return scores;
}

Tensor class_embedding(const Parameters& p, const Tensor& image) {
    const ImageCache c = forward_one(p, image);
    Tensor cls({p.config.dim});
    std::copy(c.f.data.begin(), c.f.data.begin() + static_cast<std::ptrdiff_t>(p.config.dim),
              cls.data.begin());
    return cls;
}

LossGrads loss_and_gradients(const Parameters& p, const std::vector<Tensor>& images,
                             const Tensor& targets) {
    if (images.size() != targets.numel())
        throw DimensionError("loss_and_gradients: batch size " + std::to_string(images.size()) +
                             " vs targets " + std::to_string(targets.numel()));
    LossGrads out;
    out.grads = zeros_like(p);
    const double n = static_cast<double>(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        const ImageCache c = forward_one(p, images[i]);
        const double diff = c.score - targets.data[i];
        out.loss += diff * diff / n;
        backward_one(p, c, 2.0 * diff / n, out.grads);
    }
    return out;
}

}  // namespace vitmem::vit
