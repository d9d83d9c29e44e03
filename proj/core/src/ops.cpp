#include "vitmem/ops.hpp"

#include <algorithm>
#include <cmath>

namespace vitmem::ops {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

std::size_t last_extent(const Tensor& x) {
    if (x.ndim() == 0) throw DimensionError("op requires at least one axis");
    return x.shape.back();
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.ndim() != 2 || b.ndim() != 2 || a.cols() != b.rows())
        throw DimensionError("matmul: incompatible shapes " + shape_str(a.shape) + " and " +
                             shape_str(b.shape));
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Tensor c({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a.data[i * k + p];
            const double* brow = &b.data[p * n];
            double* crow = &c.data[i * n];
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

std::pair<Tensor, Tensor> matmul_backward(const Tensor& a, const Tensor& b, const Tensor& dc) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (dc.rows() != m || dc.cols() != n)
        throw DimensionError("matmul_backward: upstream shape " + shape_str(dc.shape) +
                             " does not match " + shape_str({m, n}));
    // dA = dC * B^T
    Tensor da({m, k});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += dc.data[i * n + j] * b.data[p * n + j];
            da.data[i * k + p] = s;
        }
    // dB = A^T * dC
    Tensor db({k, n});
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t i = 0; i < m; ++i) {
            const double av = a.data[i * k + p];
            for (std::size_t j = 0; j < n; ++j) db.data[p * n + j] += av * dc.data[i * n + j];
        }
    return {std::move(da), std::move(db)};
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
    const std::size_t d = last_extent(x);
    if (gamma.numel() != d || beta.numel() != d)
        throw DimensionError("layer_norm: gamma/beta length must equal last axis " +
                             std::to_string(d));
    Tensor y = x;
    const std::size_t rows = x.numel() / d;
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = &y.data[r * d];
        double mean = 0;
        for (std::size_t j = 0; j < d; ++j) mean += row[j];
        mean /= static_cast<double>(d);
        double var = 0;
        for (std::size_t j = 0; j < d; ++j) var += (row[j] - mean) * (row[j] - mean);
        var /= static_cast<double>(d);
        const double inv = 1.0 / std::sqrt(var + eps);
        for (std::size_t j = 0; j < d; ++j)
            row[j] = (row[j] - mean) * inv * gamma.data[j] + beta.data[j];
    }
    return y;
}

LayerNormGrads layer_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& dy,
                                   double eps) {
    const std::size_t d = last_extent(x);
    LayerNormGrads g{Tensor(x.shape), Tensor({d}), Tensor({d})};
    const std::size_t rows = x.numel() / d;
    std::vector<double> xhat(d);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* xr = &x.data[r * d];
        const double* dyr = &dy.data[r * d];
        double* dxr = &g.dx.data[r * d];
        double mean = 0;
        for (std::size_t j = 0; j < d; ++j) mean += xr[j];
        mean /= static_cast<double>(d);
        double var = 0;
        for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mean) * (xr[j] - mean);
        var /= static_cast<double>(d);
        const double inv = 1.0 / std::sqrt(var + eps);

        double m1 = 0, m2 = 0;  // mean(dxhat), mean(dxhat * xhat)
        for (std::size_t j = 0; j < d; ++j) {
            xhat[j] = (xr[j] - mean) * inv;
            const double dxhat = dyr[j] * gamma.data[j];
            m1 += dxhat;
            m2 += dxhat * xhat[j];
            g.dgamma.data[j] += dyr[j] * xhat[j];
            g.dbeta.data[j] += dyr[j];
        }
        m1 /= static_cast<double>(d);
        m2 /= static_cast<double>(d);
        for (std::size_t j = 0; j < d; ++j)
            dxr[j] = inv * (dyr[j] * gamma.data[j] - m1 - xhat[j] * m2);
    }
    return g;
}

Tensor softmax(const Tensor& x) {
    const std::size_t n = last_extent(x);
    Tensor y = x;
    const std::size_t rows = x.numel() / n;
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = &y.data[r * n];
        const double mx = *std::max_element(row, row + n);
        double sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = std::exp(row[j] - mx);
            sum += row[j];
        }
        for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
    }
    return y;
}

Tensor softmax_backward(const Tensor& y, const Tensor& dy) {
    const std::size_t n = last_extent(y);
    Tensor dx = y;
    const std::size_t rows = y.numel() / n;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* yr = &y.data[r * n];
        const double* dyr = &dy.data[r * n];
        double* dxr = &dx.data[r * n];
        double dot = 0;
        for (std::size_t j = 0; j < n; ++j) dot += yr[j] * dyr[j];
        for (std::size_t j = 0; j < n; ++j) dxr[j] = yr[j] * (dyr[j] - dot);
    }
    return dx;
}

Tensor gelu(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.data) v = v * 0.5 * (1.0 + std::erf(v * kInvSqrt2));
    return y;
}

Tensor gelu_backward(const Tensor& x, const Tensor& dy) {
    Tensor dx = x;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double v = x.data[i];
        const double phi = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
        dx.data[i] = dy.data[i] * (phi + v * pdf);
    }
    return dx;
}

Tensor sigmoid(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.data) {
        // Split on sign so neither branch exponentiates a large positive value.
        if (v >= 0) {
            v = 1.0 / (1.0 + std::exp(-v));
        } else {
            const double e = std::exp(v);
            v = e / (1.0 + e);
        }
    }
    return y;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& dy) {
    Tensor dx = y;
    for (std::size_t i = 0; i < y.data.size(); ++i)
        dx.data[i] = dy.data[i] * y.data[i] * (1.0 - y.data[i]);
    return dx;
}

double mse_loss(const Tensor& pred, const Tensor& target) {
    if (pred.numel() == 0) throw DimensionError("mse_loss: empty input");
    if (!pred.same_shape(target))
        throw DimensionError("mse_loss: shape mismatch " + shape_str(pred.shape) + " vs " +
                             shape_str(target.shape));
    double s = 0;
    for (std::size_t i = 0; i < pred.numel(); ++i) {
        const double d = pred.data[i] - target.data[i];
        s += d * d;
    }
    return s / static_cast<double>(pred.numel());
}

Tensor mse_loss_backward(const Tensor& pred, const Tensor& target) {
    Tensor g = pred;
    const double scale = 2.0 / static_cast<double>(pred.numel());
    for (std::size_t i = 0; i < pred.numel(); ++i)
        g.data[i] = scale * (pred.data[i] - target.data[i]);
    return g;
}

GradCheckReport grad_check(const std::function<double(const std::vector<Tensor>&)>& loss,
                           const std::function<std::vector<Tensor>(const std::vector<Tensor>&)>& analytic,
                           std::vector<Tensor> inputs, double h) {
    const std::vector<Tensor> grads = analytic(inputs);
    if (grads.size() != inputs.size())
        throw DimensionError("grad_check: analytic returned " + std::to_string(grads.size()) +
                             " gradients for " + std::to_string(inputs.size()) + " inputs");
    GradCheckReport report;
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        for (std::size_t i = 0; i < inputs[t].numel(); ++i) {
            const double orig = inputs[t].data[i];
            inputs[t].data[i] = orig + h;
            const double lp = loss(inputs);
            inputs[t].data[i] = orig - h;
            const double lm = loss(inputs);
            inputs[t].data[i] = orig;
            if (!std::isfinite(lp) || !std::isfinite(lm))
                throw Error("grad_check: non-finite loss at input " + std::to_string(t) +
                            " entry " + std::to_string(i));
            const double numeric = (lp - lm) / (2.0 * h);
            const double a = grads[t].data[i];
            const double rel = std::abs(a - numeric) / std::max(1.0, std::abs(a));
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_input = t;
                report.worst_entry = i;
            }
        }
    }
    return report;
}

}  // namespace vitmem::ops
