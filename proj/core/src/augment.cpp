#include "vitmem/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vitmem::augment {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct KindEntry {
    TransformKind kind;
    const char* name;
};

constexpr std::array<KindEntry, 11> kKinds = {{
    {TransformKind::HorizontalFlip, "horizontal_flip"},
    {TransformKind::Sharpen, "sharpen"},
    {TransformKind::Blur, "blur"},
    {TransformKind::MotionBlur, "motion_blur"},
    {TransformKind::RandomContrast, "random_contrast"},
    {TransformKind::HueSaturationValue, "hue_saturation_value"},
    {TransformKind::Clahe, "clahe"},
    {TransformKind::ShiftScaleRotate, "shift_scale_rotate"},
    {TransformKind::Perspective, "perspective"},
    {TransformKind::OpticalDistortion, "optical_distortion"},
    {TransformKind::GridDistortion, "grid_distortion"},
}};

double draw(std::mt19937_64& rng, const std::map<std::string, Range>& ranges,
            const std::string& key, double def_lo, double def_hi) {
    Range r{def_lo, def_hi};
    if (auto it = ranges.find(key); it != ranges.end()) r = it->second;
    if (r.lo == r.hi) return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

// --- kernels -------------------------------------------------------------

ImageBuffer convolve(const ImageBuffer& img, const std::vector<double>& kernel, std::size_t k) {
    ImageBuffer out(img.width, img.height);
    const auto half = static_cast<std::ptrdiff_t>(k / 2);
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            for (std::size_t c = 0; c < 3; ++c) {
                double s = 0;
                for (std::size_t ky = 0; ky < k; ++ky)
                    for (std::size_t kx = 0; kx < k; ++kx) {
                        const double sx = static_cast<double>(x) + static_cast<double>(kx) - static_cast<double>(half);
                        const double sy = static_cast<double>(y) + static_cast<double>(ky) - static_cast<double>(half);
                        s += kernel[ky * k + kx] * image::sample_bilinear(img, sx, sy, c);
                    }
                out.at(x, y, c) = s;
            }
    return out;
}

ImageBuffer horizontal_flip(const ImageBuffer& img) {
    ImageBuffer out(img.width, img.height);
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            for (std::size_t c = 0; c < 3; ++c) out.at(x, y, c) = img.at(img.width - 1 - x, y, c);
    return out;
}

ImageBuffer sharpen(const ImageBuffer& img, double alpha, double lightness) {
    // blend of identity and a Laplacian-boosted kernel
    std::vector<double> kern(9, -alpha);
    kern[4] = (1.0 - alpha) + alpha * (8.0 + lightness);
    return convolve(img, kern, 3);
}

ImageBuffer box_blur(const ImageBuffer& img, std::size_t k) {
    std::vector<double> kern(k * k, 1.0 / static_cast<double>(k * k));
    return convolve(img, kern, k);
}

ImageBuffer motion_blur(const ImageBuffer& img, std::size_t k, double angle_deg) {
    // line kernel through the center
    std::vector<double> kern(k * k, 0.0);
    const double cx = (static_cast<double>(k) - 1.0) / 2.0;
    const double dx = std::cos(angle_deg * kPi / 180.0);
    const double dy = std::sin(angle_deg * kPi / 180.0);
    std::size_t count = 0;
    const auto n = static_cast<std::ptrdiff_t>(k);
    for (std::ptrdiff_t t = -(n / 2); t <= n / 2; ++t) {
        const auto ix = static_cast<std::ptrdiff_t>(std::lround(cx + dx * static_cast<double>(t)));
        const auto iy = static_cast<std::ptrdiff_t>(std::lround(cx + dy * static_cast<double>(t)));
        if (ix < 0 || iy < 0 || ix >= n || iy >= n) continue;
        if (kern[static_cast<std::size_t>(iy) * k + static_cast<std::size_t>(ix)] == 0.0) ++count;
        kern[static_cast<std::size_t>(iy) * k + static_cast<std::size_t>(ix)] = 1.0;
    }
    for (double& v : kern) v /= static_cast<double>(count);
    return convolve(img, kern, k);
}

ImageBuffer contrast(const ImageBuffer& img, double factor) {
    ImageBuffer out = img;
    for (double& v : out.pixels) v = 0.5 + (v - 0.5) * factor;
    return out;
}

ImageBuffer hsv_shift(const ImageBuffer& img, double dh, double ds, double dv) {
    ImageBuffer out(img.width, img.height);
    for (std::size_t i = 0; i < img.width * img.height; ++i) {
        double h, s, v;
        image::rgb_to_hsv(img.pixels[i * 3], img.pixels[i * 3 + 1], img.pixels[i * 3 + 2], h, s, v);
        h += dh;
        s = std::clamp(s + ds, 0.0, 1.0);
        v = std::clamp(v + dv, 0.0, 1.0);
        image::hsv_to_rgb(h, s, v, out.pixels[i * 3], out.pixels[i * 3 + 1], out.pixels[i * 3 + 2]);
    }
    return out;
}

// CLAHE on the L channel of Lab, tile grid interpolated bilinearly.
ImageBuffer clahe(const ImageBuffer& img, double clip_limit, std::size_t grid) {
    const std::size_t w = img.width, h = img.height;
    constexpr std::size_t kBins = 256;
    std::vector<double> L(w * h), A(w * h), B(w * h);
    for (std::size_t i = 0; i < w * h; ++i)
        image::rgb_to_lab(img.pixels[i * 3], img.pixels[i * 3 + 1], img.pixels[i * 3 + 2], L[i],
                          A[i], B[i]);

    const std::size_t tw = (w + grid - 1) / grid;
    const std::size_t th = (h + grid - 1) / grid;
    const std::size_t gx = (w + tw - 1) / tw;  // actual tile grid (≤ grid)
    const std::size_t gy = (h + th - 1) / th;

    auto bin_of = [](double l) {
        auto b = static_cast<std::ptrdiff_t>(l / 100.0 * (kBins - 1) + 0.5);
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, kBins - 1));
    };

    // per-tile clipped-CDF lookup tables
    std::vector<std::array<double, kBins>> luts(gx * gy);
    for (std::size_t ty = 0; ty < gy; ++ty)
        for (std::size_t tx = 0; tx < gx; ++tx) {
            const std::size_t x0 = tx * tw, x1 = std::min(w, x0 + tw);
            const std::size_t y0 = ty * th, y1 = std::min(h, y0 + th);
            std::array<double, kBins> hist{};
            const double npix = static_cast<double>((x1 - x0) * (y1 - y0));
            for (std::size_t y = y0; y < y1; ++y)
                for (std::size_t x = x0; x < x1; ++x) hist[bin_of(L[y * w + x])] += 1.0;
            const double clip = std::max(1.0, clip_limit * npix / kBins);
            double excess = 0;
            for (double& hv : hist)
                if (hv > clip) {
                    excess += hv - clip;
                    hv = clip;
                }
            for (double& hv : hist) hv += excess / kBins;
            double cdf = 0;
            auto& lut = luts[ty * gx + tx];
            for (std::size_t b = 0; b < kBins; ++b) {
                cdf += hist[b];
                lut[b] = cdf / npix * 100.0;
            }
        }

    ImageBuffer out(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            // tile-center coordinates for interpolation
            const double fx = (static_cast<double>(x) + 0.5) / static_cast<double>(tw) - 0.5;
            const double fy = (static_cast<double>(y) + 0.5) / static_cast<double>(th) - 0.5;
            const auto tx0 = static_cast<std::ptrdiff_t>(std::floor(fx));
            const auto ty0 = static_cast<std::ptrdiff_t>(std::floor(fy));
            const double ax = fx - static_cast<double>(tx0);
            const double ay = fy - static_cast<double>(ty0);
            auto clampx = [&](std::ptrdiff_t t) {
                return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(t, 0, static_cast<std::ptrdiff_t>(gx) - 1));
            };
            auto clampy = [&](std::ptrdiff_t t) {
                return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(t, 0, static_cast<std::ptrdiff_t>(gy) - 1));
            };
            const std::size_t b = bin_of(L[y * w + x]);
            const double v00 = luts[clampy(ty0) * gx + clampx(tx0)][b];
            const double v10 = luts[clampy(ty0) * gx + clampx(tx0 + 1)][b];
            const double v01 = luts[clampy(ty0 + 1) * gx + clampx(tx0)][b];
            const double v11 = luts[clampy(ty0 + 1) * gx + clampx(tx0 + 1)][b];
            const double l = (1 - ay) * ((1 - ax) * v00 + ax * v10) + ay * ((1 - ax) * v01 + ax * v11);
            const std::size_t i = y * w + x;
            image::lab_to_rgb(l, A[i], B[i], out.pixels[i * 3], out.pixels[i * 3 + 1],
                              out.pixels[i * 3 + 2]);
        }
    return out;
}

// Inverse-maps every destination pixel through `src_of` and samples bilinearly.
template <typename F>
ImageBuffer warp(const ImageBuffer& img, F&& src_of) {
    ImageBuffer out(img.width, img.height);
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x) {
            const auto [sx, sy] = src_of(static_cast<double>(x), static_cast<double>(y));
            for (std::size_t c = 0; c < 3; ++c)
                out.at(x, y, c) = image::sample_bilinear(img, sx, sy, c);
        }
    return out;
}

ImageBuffer shift_scale_rotate(const ImageBuffer& img, double shift_x, double shift_y,
                               double scale, double angle_deg) {
    const double cx = (static_cast<double>(img.width) - 1.0) / 2.0;
    const double cy = (static_cast<double>(img.height) - 1.0) / 2.0;
    const double tx = shift_x * static_cast<double>(img.width);
    const double ty = shift_y * static_cast<double>(img.height);
    const double a = -angle_deg * kPi / 180.0;  // inverse rotation
    const double cosa = std::cos(a), sina = std::sin(a);
    const double inv_s = 1.0 / scale;
    return warp(img, [&](double x, double y) {
        const double dx = x - cx - tx, dy = y - cy - ty;
        return std::pair{cx + inv_s * (cosa * dx - sina * dy), cy + inv_s * (sina * dx + cosa * dy)};
    });
}

// Homography from 4 point correspondences (dst -> src), Gaussian elimination.
std::array<double, 9> homography(const std::array<std::pair<double, double>, 4>& dst,
                                 const std::array<std::pair<double, double>, 4>& src) {
    double m[8][9] = {};
    for (std::size_t i = 0; i < 4; ++i) {
        const double x = dst[i].first, y = dst[i].second;
        const double u = src[i].first, v = src[i].second;
        double* r0 = m[2 * i];
        double* r1 = m[2 * i + 1];
        r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -x * u; r0[7] = -y * u; r0[8] = u;
        r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -x * v; r1[7] = -y * v; r1[8] = v;
    }
    for (std::size_t col = 0; col < 8; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 8; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[piv], m[col]);
        for (std::size_t r = 0; r < 8; ++r) {
            if (r == col || m[r][col] == 0.0) continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < 9; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::array<double, 9> hm;
    for (std::size_t i = 0; i < 8; ++i) hm[i] = m[i][8] / m[i][i];
    hm[8] = 1.0;
    return hm;
}

ImageBuffer perspective(const ImageBuffer& img, double jitter_scale, std::mt19937_64& rng) {
    const double w = static_cast<double>(img.width) - 1.0;
    const double h = static_cast<double>(img.height) - 1.0;
    std::normal_distribution<double> jitter(0.0, jitter_scale);
    const std::array<std::pair<double, double>, 4> dst = {{{0, 0}, {w, 0}, {w, h}, {0, h}}};
    std::array<std::pair<double, double>, 4> src;
    for (std::size_t i = 0; i < 4; ++i)
        src[i] = {dst[i].first + jitter(rng) * w, dst[i].second + jitter(rng) * h};
    const auto hm = homography(dst, src);
    return warp(img, [&](double x, double y) {
        const double d = hm[6] * x + hm[7] * y + hm[8];
        return std::pair{(hm[0] * x + hm[1] * y + hm[2]) / d, (hm[3] * x + hm[4] * y + hm[5]) / d};
    });
}

ImageBuffer optical_distortion(const ImageBuffer& img, double k, double shift_x, double shift_y) {
    const double cx = (static_cast<double>(img.width) - 1.0) / 2.0 +
                      shift_x * static_cast<double>(img.width);
    const double cy = (static_cast<double>(img.height) - 1.0) / 2.0 +
                      shift_y * static_cast<double>(img.height);
    const double norm = std::hypot(static_cast<double>(img.width), static_cast<double>(img.height)) / 2.0;
    return warp(img, [&](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        const double r2 = (dx * dx + dy * dy) / (norm * norm);
        const double f = 1.0 + k * r2;
        return std::pair{cx + dx * f, cy + dy * f};
    });
}

// Per-axis piecewise-linear remap: each of `steps` grid cells stretches by
// an independent random factor, renormalized to preserve the image extent.
std::vector<double> distorted_grid(std::size_t steps, double extent, double lo, double hi,
                                   std::mt19937_64& rng) {
    std::vector<double> widths(steps);
    double total = 0;
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& wv : widths) {
        wv = 1.0 + dist(rng);
        total += wv;
    }
    std::vector<double> bounds(steps + 1, 0.0);
    for (std::size_t i = 0; i < steps; ++i) bounds[i + 1] = bounds[i] + widths[i] / total * extent;
    bounds[steps] = extent;
    return bounds;
}

ImageBuffer grid_distortion(const ImageBuffer& img, std::size_t steps, double lo, double hi,
                            std::mt19937_64& rng) {
    const double w = static_cast<double>(img.width), h = static_cast<double>(img.height);
    const auto bx = distorted_grid(steps, w, lo, hi, rng);
    const auto by = distorted_grid(steps, h, lo, hi, rng);
    auto remap = [steps](double v, double extent, const std::vector<double>& bounds) {
        // dst coordinate v lies in distorted cell i; map back to the uniform grid
        const double cell = extent / static_cast<double>(steps);
        std::size_t i = 0;
        while (i + 1 < steps && v >= bounds[i + 1]) ++i;
        const double t = (v - bounds[i]) / std::max(1e-12, bounds[i + 1] - bounds[i]);
        return (static_cast<double>(i) + t) * cell;
    };
    return warp(img, [&](double x, double y) {
        return std::pair{remap(x, w, bx), remap(y, h, by)};
    });
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

const char* kind_name(TransformKind k) {
    for (const auto& e : kKinds)
        if (e.kind == k) return e.name;
    throw Error("unknown transform kind");
}

TransformKind kind_from_name(const std::string& name) {
    for (const auto& e : kKinds)
        if (name == e.name) return e.kind;
    throw Error("unknown transform: " + name);
}

AugmentSpec AugmentSpec::defaults(std::uint64_t seed) {
    AugmentSpec spec;
    spec.seed = seed;
    auto add = [&](TransformKind k, std::map<std::string, Range> r = {}) {
        spec.transforms.push_back({k, 0.7, std::move(r)});
    };
    add(TransformKind::HorizontalFlip);
    add(TransformKind::Sharpen, {{"alpha", {0.2, 0.5}}, {"lightness", {0.5, 1.0}}});
    add(TransformKind::Blur, {{"kernel", {3, 7}}});
    add(TransformKind::MotionBlur, {{"kernel", {3, 7}}, {"angle", {0, 360}}});
    add(TransformKind::RandomContrast, {{"limit", {-0.2, 0.2}}});
    add(TransformKind::HueSaturationValue,
        {{"hue_shift", {-20, 20}}, {"sat_shift", {-0.12, 0.12}}, {"val_shift", {-0.08, 0.08}}});
    add(TransformKind::Clahe, {{"clip_limit", {1.0, 4.0}}, {"grid", {8, 8}}});
    add(TransformKind::ShiftScaleRotate,
        {{"shift", {-0.0625, 0.0625}}, {"scale", {-0.1, 0.1}}, {"rotate", {-45, 45}}});
    add(TransformKind::Perspective, {{"scale", {0.05, 0.1}}});
    add(TransformKind::OpticalDistortion, {{"distort", {-0.05, 0.05}}, {"shift", {-0.05, 0.05}}});
    add(TransformKind::GridDistortion, {{"steps", {5, 5}}, {"distort", {-0.3, 0.3}}});
    return spec;
}

std::mt19937_64 derive_rng(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t epoch) {
    const std::uint64_t s = splitmix64(splitmix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL) ^
                                       splitmix64(sample_index) ^ splitmix64(epoch * 0x9E3779B9ULL + 1));
    return std::mt19937_64(s);
}

ImageBuffer apply_transform(const TransformSpec& t, const ImageBuffer& img, std::mt19937_64& rng) {
    ImageBuffer out;
    switch (t.kind) {
        case TransformKind::HorizontalFlip:
            return horizontal_flip(img);  // no clamp: involution must be bit-exact
        case TransformKind::Sharpen: {
            const double alpha = draw(rng, t.ranges, "alpha", 0.2, 0.5);
            const double light = draw(rng, t.ranges, "lightness", 0.5, 1.0);
            out = sharpen(img, alpha, light);
            break;
        }
        case TransformKind::Blur: {
            const double kd = draw(rng, t.ranges, "kernel", 3, 7);
            std::size_t k = static_cast<std::size_t>(kd) | 1;  // odd
            out = box_blur(img, std::max<std::size_t>(3, k));
            break;
        }
        case TransformKind::MotionBlur: {
            const double kd = draw(rng, t.ranges, "kernel", 3, 7);
            const double angle = draw(rng, t.ranges, "angle", 0, 360);
            std::size_t k = static_cast<std::size_t>(kd) | 1;
            out = motion_blur(img, std::max<std::size_t>(3, k), angle);
            break;
        }
        case TransformKind::RandomContrast:
            out = contrast(img, 1.0 + draw(rng, t.ranges, "limit", -0.2, 0.2));
            break;
        case TransformKind::HueSaturationValue: {
            const double dh = draw(rng, t.ranges, "hue_shift", -20, 20);
            const double ds = draw(rng, t.ranges, "sat_shift", -0.12, 0.12);
            const double dv = draw(rng, t.ranges, "val_shift", -0.08, 0.08);
            out = hsv_shift(img, dh, ds, dv);
            break;
        }
        case TransformKind::Clahe: {
            const double clip = draw(rng, t.ranges, "clip_limit", 1.0, 4.0);
            const double grid = draw(rng, t.ranges, "grid", 8, 8);
            out = clahe(img, clip, std::max<std::size_t>(1, static_cast<std::size_t>(grid)));
            break;
        }
        case TransformKind::ShiftScaleRotate: {
            const double sx = draw(rng, t.ranges, "shift", -0.0625, 0.0625);
            const double sy = draw(rng, t.ranges, "shift", -0.0625, 0.0625);
            const double sc = 1.0 + draw(rng, t.ranges, "scale", -0.1, 0.1);
            const double rot = draw(rng, t.ranges, "rotate", -45, 45);
            out = shift_scale_rotate(img, sx, sy, sc, rot);
            break;
        }
        case TransformKind::Perspective:
            out = perspective(img, draw(rng, t.ranges, "scale", 0.05, 0.1), rng);
            break;
        case TransformKind::OpticalDistortion: {
            const double k = draw(rng, t.ranges, "distort", -0.05, 0.05);
            const double sx = draw(rng, t.ranges, "shift", -0.05, 0.05);
            const double sy = draw(rng, t.ranges, "shift", -0.05, 0.05);
            out = optical_distortion(img, k, sx, sy);
            break;
        }
        case TransformKind::GridDistortion: {
            const double steps = draw(rng, t.ranges, "steps", 5, 5);
            Range d{-0.3, 0.3};
            if (auto it = t.ranges.find("distort"); it != t.ranges.end()) d = it->second;
            out = grid_distortion(img, std::max<std::size_t>(1, static_cast<std::size_t>(steps)),
                                  d.lo, d.hi, rng);
            break;
        }
    }
    image::clamp01(out);
    return out;
}

ImageBuffer apply_pipeline_traced(const ImageBuffer& img, const AugmentSpec& spec,
                                  std::uint64_t sample_index, std::uint64_t epoch,
                                  std::vector<bool>& applied) {
    std::mt19937_64 rng = derive_rng(spec.seed, sample_index, epoch);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ImageBuffer out = img;
    applied.assign(spec.transforms.size(), false);
    if (spec.gate == GateMode::WholePipeline) {
        if (unit(rng) >= spec.pipeline_probability) return out;
        for (std::size_t i = 0; i < spec.transforms.size(); ++i) {
            applied[i] = true;
            out = apply_transform(spec.transforms[i], out, rng);
        }
        return out;
    }
    for (std::size_t i = 0; i < spec.transforms.size(); ++i) {
        if (unit(rng) < spec.transforms[i].probability) {
            applied[i] = true;
            out = apply_transform(spec.transforms[i], out, rng);
        }
    }
    return out;
}

ImageBuffer apply_pipeline(const ImageBuffer& img, const AugmentSpec& spec,
                           std::uint64_t sample_index, std::uint64_t epoch) {
    std::vector<bool> applied;
    return apply_pipeline_traced(img, spec, sample_index, epoch, applied);
}

// --- serialization -------------------------------------------------------

std::string to_text(const AugmentSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "seed=" << spec.seed << "\n";
    os << "gate=" << (spec.gate == GateMode::PerTransform ? "per_transform" : "whole_pipeline")
       << "\n";
    os << "pipeline_probability=" << spec.pipeline_probability << "\n";
    for (const auto& t : spec.transforms) {
        os << "[transform " << kind_name(t.kind) << "]\n";
        os << "p=" << t.probability << "\n";
        for (const auto& [k, r] : t.ranges) os << k << "=" << r.lo << ":" << r.hi << "\n";
    }
    return os.str();
}

AugmentSpec from_text(const std::string& text) {
    AugmentSpec spec;
    spec.transforms.clear();
    std::istringstream is(text);
    std::string line;
    TransformSpec* cur = nullptr;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.rfind("[transform ", 0) != 0 || line.back() != ']')
                throw Error("augment spec: bad section at line " + std::to_string(lineno));
            const std::string name = line.substr(11, line.size() - 12);
            spec.transforms.push_back({kind_from_name(name), 0.7, {}});
            cur = &spec.transforms.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("augment spec: expected key=value at line " + std::to_string(lineno));
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (!cur) {
            if (key == "seed")
                spec.seed = std::stoull(val);
            else if (key == "gate")
                spec.gate = val == "whole_pipeline" ? GateMode::WholePipeline : GateMode::PerTransform;
            else if (key == "pipeline_probability")
                spec.pipeline_probability = std::stod(val);
            else
                throw Error("augment spec: unknown key '" + key + "' at line " + std::to_string(lineno));
        } else if (key == "p") {
            cur->probability = std::stod(val);
        } else {
            const auto colon = val.find(':');
            if (colon == std::string::npos)
                throw Error("augment spec: range needs lo:hi at line " + std::to_string(lineno));
            cur->ranges[key] = {std::stod(val.substr(0, colon)), std::stod(val.substr(colon + 1))};
        }
    }
    return spec;
}

void save_spec(const AugmentSpec& spec, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << to_text(spec);
}

AugmentSpec load_spec(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return from_text(os.str());
}

}  // namespace vitmem::augment
