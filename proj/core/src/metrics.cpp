#include "vitmem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vitmem/error.hpp"

namespace vitmem::metrics {

std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        // positions i..j (0-based) share the mean rank (i+1 + j+1)/2
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

static std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

static void require_paired(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw Error("metric inputs differ in length: " + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()));
    if (x.size() < 2) throw Error("metric requires at least 2 samples, got " + std::to_string(x.size()));
}

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
    require_paired(x, y);
    return pearson(average_ranks(x), average_ranks(y));
}

double mse(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.size() != target.size())
        throw Error("mse inputs differ in length: " + std::to_string(pred.size()) + " vs " +
                    std::to_string(target.size()));
    if (pred.empty()) throw Error("mse: empty input");
    double s = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        s += d * d;
    }
    return s / static_cast<double>(pred.size());
}

std::optional<double> r_squared(const std::vector<double>& x, const std::vector<double>& y) {
    require_paired(x, y);
    const auto r = pearson(x, y);
    if (!r) return std::nullopt;
    return (*r) * (*r);
}

static std::string fmt(const std::optional<double>& v) {
    if (!v) return "NA";
    std::ostringstream os;
    os.precision(12);
    os << *v;
    return os.str();
}

std::string MetricsReport::csv_row() const {
    std::ostringstream os;
    os.precision(12);
    os << n << ',' << mse << ',' << fmt(spearman_rho) << ',' << fmt(r_squared);
    return os.str();
}

MetricsReport evaluate_pairs(const std::vector<double>& pred, const std::vector<double>& target) {
    MetricsReport rep;
    rep.n = pred.size();
    rep.mse = mse(pred, target);
    rep.spearman_rho = spearman(pred, target);
    rep.r_squared = r_squared(pred, target);
    return rep;
}

}  // namespace vitmem::metrics
