#include "vitmem/splits.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

namespace vitmem::data {

static std::size_t resolve_test_size(const Manifest& manifest, const SplitSpec& spec) {
    if (spec.test_count.has_value() == spec.test_fraction.has_value())
        throw Error("split spec needs exactly one of test_count or test_fraction");
    const std::size_t n = manifest.size();
    std::size_t test = spec.test_count ? *spec.test_count
                                       : static_cast<std::size_t>(
                                             static_cast<double>(n) * *spec.test_fraction + 0.5);
    if (test == 0 || test >= n)
        throw Error("test size " + std::to_string(test) + " invalid for dataset of " +
                    std::to_string(n));
    return test;
}

std::vector<Split> make_splits(const Manifest& manifest, const SplitSpec& spec) {
    const std::size_t test = resolve_test_size(manifest, spec);
    const std::size_t n = manifest.size();
    std::mt19937_64 rng(spec.seed);
    std::vector<Split> out;
    out.reserve(spec.n_splits);
    for (std::size_t s = 0; s < spec.n_splits; ++s) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        Split sp;
        sp.test_ids.reserve(test);
        sp.train_ids.reserve(n - test);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& id = manifest.records[order[i]].id;
            (i < test ? sp.test_ids : sp.train_ids).push_back(id);
        }
        out.push_back(std::move(sp));
    }
    return out;
}

std::vector<Fold> kfold(const Manifest& manifest, std::size_t k, std::size_t repeats,
                        std::uint64_t seed) {
    const std::size_t n = manifest.size();
    if (k < 2) throw Error("kfold requires k >= 2");
    if (k > n) throw Error("kfold: k=" + std::to_string(k) + " exceeds dataset size " +
                           std::to_string(n));
    std::mt19937_64 rng(seed);
    std::vector<Fold> out;
    out.reserve(k * repeats);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        // first n%k folds get one extra element
        std::size_t start = 0;
        for (std::size_t f = 0; f < k; ++f) {
            const std::size_t size = n / k + (f < n % k ? 1 : 0);
            Fold fold;
            for (std::size_t i = 0; i < n; ++i) {
                const std::string& id = manifest.records[order[i]].id;
                (i >= start && i < start + size ? fold.validation_ids : fold.train_ids).push_back(id);
            }
            start += size;
            out.push_back(std::move(fold));
        }
    }
    return out;
}

void save_splits(const std::vector<Split>& splits, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t s = 0; s < splits.size(); ++s) {
        for (const char* part : {"train", "test"}) {
            const auto path = std::filesystem::path(dir) /
                              ("split" + std::to_string(s) + "_" + part + ".txt");
            std::ofstream f(path);
            if (!f) throw IoError("cannot write " + path.string());
            const auto& ids =
                std::string(part) == "train" ? splits[s].train_ids : splits[s].test_ids;
            for (const auto& id : ids) f << id << '\n';
        }
    }
}

}  // namespace vitmem::data
