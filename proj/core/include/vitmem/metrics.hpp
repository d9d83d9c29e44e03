#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vitmem::metrics {

// Fractional ranks 1..n; ties share the mean of their rank positions.
std::vector<double> average_ranks(const std::vector<double>& v);

// Tie-correct Spearman: Pearson correlation of average ranks.
// nullopt when either input is constant (correlation undefined).
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);

double mse(const std::vector<double>& pred, const std::vector<double>& target);

// Squared Pearson correlation; nullopt on constant input.
std::optional<double> r_squared(const std::vector<double>& x, const std::vector<double>& y);

struct MetricsReport {
    std::size_t n = 0;
    double mse = 0.0;
    std::optional<double> spearman_rho;
    std::optional<double> r_squared;

    // CSV row `n,mse,spearman,r_squared`, `NA` for undefined.
    std::string csv_row() const;
};

MetricsReport evaluate_pairs(const std::vector<double>& pred, const std::vector<double>& target);

}  // namespace vitmem::metrics
