#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "vitmem/image.hpp"
#include "vitmem/manifest.hpp"
#include "vitmem/vit.hpp"

namespace vitmem::data {

// Embeddings keyed by record id; either precomputed (loaded from file) or
// derived from a model trunk.
struct EmbeddingStore {
    std::unordered_map<std::string, std::vector<double>> vectors;

    const std::vector<double>& get(const std::string& id) const;
    void put(const std::string& id, std::vector<double> v);  // unit-normalizes
};

// File format: header line `id,dim`, then per-line `id,v1,...,vdim`.
EmbeddingStore load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingStore& store, const std::string& path);

std::vector<double> unit_normalize(std::vector<double> v);
double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Class-token representation of the model trunk, unit-normalized.
std::vector<double> trunk_embedding(const vit::Parameters& params, const ImageBuffer& img);

struct DupPair {
    std::string id_a, id_b;
    double similarity;
    Source source_a, source_b;
};

struct DedupReport {
    std::vector<DupPair> pairs;                       // every pair >= threshold
    std::vector<std::vector<std::string>> clusters;   // connected components, keeper first
    std::vector<std::string> removed_ids;
    std::map<std::pair<Source, Source>, std::size_t> pair_counts;
};

inline constexpr double kDefaultDedupThreshold = 0.98;

struct DedupResult {
    DedupReport report;
    Manifest cleaned;
};

// Within each duplicate cluster the keeper is the record with the highest
// source priority (lamem > memcat > cvpr2011 > figrim > other), ties broken
// by lexicographic id.
DedupResult dedup(const std::vector<Manifest>& manifests, const EmbeddingStore& embeddings,
                  double threshold = kDefaultDedupThreshold);

// CSV `id_a,id_b,similarity,source_a,source_b`, pairs sorted by similarity
// descending for human review.
void save_report(const DedupReport& report, const std::string& path);

}  // namespace vitmem::data
