#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vitmem/error.hpp"

namespace vitmem {

// RGB image, row-major HWC, real-valued in [0,1] inside the pipeline.
struct ImageBuffer {
    std::size_t width = 0;
    std::size_t height = 0;
    static constexpr std::size_t channels = 3;
    std::vector<double> pixels;

    ImageBuffer() = default;
    ImageBuffer(std::size_t w, std::size_t h, double fill = 0.0);

    double& at(std::size_t x, std::size_t y, std::size_t c) {
        return pixels[(y * width + x) * channels + c];
    }
    double at(std::size_t x, std::size_t y, std::size_t c) const {
        return pixels[(y * width + x) * channels + c];
    }
};

namespace image {

// Bilinear, pixel centers at half-integers; same-size resize is the identity.
ImageBuffer resize(const ImageBuffer& img, std::size_t w, std::size_t h);

// Offset floor((width-w)/2), floor((height-h)/2).
ImageBuffer center_crop(const ImageBuffer& img, std::size_t w, std::size_t h);

// Bilinear sample at real coordinates with reflect-101 border handling.
double sample_bilinear(const ImageBuffer& img, double x, double y, std::size_t c);

void clamp01(ImageBuffer& img);

// Color conversions used by the photometric transforms.
void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v);
void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b);
void rgb_to_lab(double r, double g, double b, double& l, double& a, double& bb);
void lab_to_rgb(double l, double a, double bb, double& r, double& g, double& b);

}  // namespace image

namespace image_io {

// PNG/JPEG decode and encode; format chosen by file extension.
ImageBuffer read(const std::string& path);
void write_png(const ImageBuffer& img, const std::string& path);
void write_jpeg(const ImageBuffer& img, const std::string& path, int quality = 90);

}  // namespace image_io

}  // namespace vitmem
