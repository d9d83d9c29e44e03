#include "vitmem/image.hpp"

#include <algorithm>
#include <cmath>

namespace vitmem {

ImageBuffer::ImageBuffer(std::size_t w, std::size_t h, double fill)
    : width(w), height(h), pixels(w * h * channels, fill) {
    if (w == 0 || h == 0) throw DimensionError("image dimensions must be positive");
}

namespace image {

// reflect-101: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
static std::ptrdiff_t reflect101(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) return 0;
    const std::ptrdiff_t period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

double sample_bilinear(const ImageBuffer& img, double x, double y, std::size_t c) {
    const double fx = std::floor(x), fy = std::floor(y);
    const double ax = x - fx, ay = y - fy;
    const auto x0 = static_cast<std::ptrdiff_t>(fx);
    const auto y0 = static_cast<std::ptrdiff_t>(fy);
    const auto w = static_cast<std::ptrdiff_t>(img.width);
    const auto h = static_cast<std::ptrdiff_t>(img.height);
    const std::size_t xa = reflect101(x0, w), xb = reflect101(x0 + 1, w);
    const std::size_t ya = reflect101(y0, h), yb = reflect101(y0 + 1, h);
    const double v00 = img.at(xa, ya, c), v10 = img.at(xb, ya, c);
    const double v01 = img.at(xa, yb, c), v11 = img.at(xb, yb, c);
    return (1 - ay) * ((1 - ax) * v00 + ax * v10) + ay * ((1 - ax) * v01 + ax * v11);
}

ImageBuffer resize(const ImageBuffer& img, std::size_t w, std::size_t h) {
    if (w == 0 || h == 0) throw DimensionError("resize target must be positive");
    if (w == img.width && h == img.height) return img;
    ImageBuffer out(w, h);
    const double sx = static_cast<double>(img.width) / static_cast<double>(w);
    const double sy = static_cast<double>(img.height) / static_cast<double>(h);
    for (std::size_t y = 0; y < h; ++y) {
        const double srcy = (static_cast<double>(y) + 0.5) * sy - 0.5;
        for (std::size_t x = 0; x < w; ++x) {
            const double srcx = (static_cast<double>(x) + 0.5) * sx - 0.5;
            for (std::size_t c = 0; c < ImageBuffer::channels; ++c)
                out.at(x, y, c) = sample_bilinear(img, srcx, srcy, c);
        }
    }
    return out;
}

ImageBuffer center_crop(const ImageBuffer& img, std::size_t w, std::size_t h) {
    if (w > img.width || h > img.height)
        throw DimensionError("center_crop: target " + std::to_string(w) + "x" + std::to_string(h) +
                             " exceeds image " + std::to_string(img.width) + "x" +
                             std::to_string(img.height));
    const std::size_t ox = (img.width - w) / 2;
    const std::size_t oy = (img.height - h) / 2;
    ImageBuffer out(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t c = 0; c < ImageBuffer::channels; ++c)
                out.at(x, y, c) = img.at(x + ox, y + oy, c);
    return out;
}

void clamp01(ImageBuffer& img) {
    for (double& v : img.pixels) v = std::clamp(v, 0.0, 1.0);
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx == 0 ? 0 : d / mx;
    if (d == 0) {
        h = 0;
    } else if (mx == r) {
        h = 60.0 * std::fmod((g - b) / d, 6.0);
    } else if (mx == g) {
        h = 60.0 * ((b - r) / d + 2.0);
    } else {
        h = 60.0 * ((r - g) / d + 4.0);
    }
    if (h < 0) h += 360.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    h = std::fmod(h, 360.0);
    if (h < 0) h += 360.0;
    const double c = v * s;
    const double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
    const double m = v - c;
    double rr = 0, gg = 0, bb = 0;
    if (h < 60) {
        rr = c; gg = x;
    } else if (h < 120) {
        rr = x; gg = c;
    } else if (h < 180) {
        gg = c; bb = x;
    } else if (h < 240) {
        gg = x; bb = c;
    } else if (h < 300) {
        rr = x; bb = c;
    } else {
        rr = c; bb = x;
    }
    r = rr + m;
    g = gg + m;
    b = bb + m;
}

// sRGB <-> CIELAB, D65 white point.
static double srgb_to_linear(double u) {
    return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4);
}
static double linear_to_srgb(double u) {
    return u <= 0.0031308 ? u * 12.92 : 1.055 * std::pow(u, 1.0 / 2.4) - 0.055;
}
static double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
}
static double lab_finv(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d ? t * t * t : 3 * d * d * (t - 4.0 / 29.0);
}
constexpr double kXn = 0.95047, kYn = 1.0, kZn = 1.08883;

void rgb_to_lab(double r, double g, double b, double& l, double& a, double& bb) {
    const double rl = srgb_to_linear(r), gl = srgb_to_linear(g), bl = srgb_to_linear(b);
    const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
    const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
    const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
    const double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
    l = 116.0 * fy - 16.0;
    a = 500.0 * (fx - fy);
    bb = 200.0 * (fy - fz);
}

void lab_to_rgb(double l, double a, double bb, double& r, double& g, double& b) {
    const double fy = (l + 16.0) / 116.0;
    const double fx = fy + a / 500.0;
    const double fz = fy - bb / 200.0;
    const double x = kXn * lab_finv(fx), y = kYn * lab_finv(fy), z = kZn * lab_finv(fz);
    const double rl = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    const double gl = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    const double bl = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
    r = std::clamp(linear_to_srgb(rl), 0.0, 1.0);
    g = std::clamp(linear_to_srgb(gl), 0.0, 1.0);
    b = std::clamp(linear_to_srgb(bl), 0.0, 1.0);
}

}  // namespace image
}  // namespace vitmem
