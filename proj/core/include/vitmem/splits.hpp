#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vitmem/manifest.hpp"

namespace vitmem::data {

struct SplitSpec {
    std::uint64_t seed = 0;
    std::size_t n_splits = 10;
    // exactly one of the two must be set
    std::optional<std::size_t> test_count;
    std::optional<double> test_fraction;
};

struct Split {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
};

// Independent uniform test draws per split; disjoint/exhaustive partition,
// deterministic given seed.
std::vector<Split> make_splits(const Manifest& manifest, const SplitSpec& spec);

struct Fold {
    std::vector<std::string> train_ids;
    std::vector<std::string> validation_ids;
};

// `repeats` independent shuffles, each partitioned into k folds with
// balanced remainders.
std::vector<Fold> kfold(const Manifest& manifest, std::size_t k, std::size_t repeats,
                        std::uint64_t seed);

// Writes split{K}_train.txt / split{K}_test.txt (one id per line) under dir.
void save_splits(const std::vector<Split>& splits, const std::string& dir);

}  // namespace vitmem::data
