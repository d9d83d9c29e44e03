#include "vitmem/dedup.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "vitmem/csv.hpp"

namespace vitmem::data {

const std::vector<double>& EmbeddingStore::get(const std::string& id) const {
    const auto it = vectors.find(id);
    if (it == vectors.end()) throw Error("missing embedding for id: " + id);
    return it->second;
}

void EmbeddingStore::put(const std::string& id, std::vector<double> v) {
    vectors[id] = unit_normalize(std::move(v));
}

std::vector<double> unit_normalize(std::vector<double> v) {
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0) throw Error("cannot normalize a zero embedding");
    for (double& x : v) x /= norm;
    return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error("embedding dimension mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

EmbeddingStore load_embeddings(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open embeddings " + path);
    std::string line;
    if (!std::getline(f, line) || line != "id,dim")
        throw Error("embedding file must start with header 'id,dim': " + path);
    EmbeddingStore store;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = csv::parse_line(line);
        if (fields.size() < 2)
            throw Error(path + ":" + std::to_string(lineno) + ": expected id,v1,...,vdim");
        std::vector<double> v(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) v[i - 1] = std::stod(fields[i]);
        store.put(fields[0], std::move(v));
    }
    return store;
}

void save_embeddings(const EmbeddingStore& store, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write embeddings " + path);
    f << "id,dim\n";
    f.precision(17);
    // sorted for reproducible files
    std::vector<const std::string*> ids;
    ids.reserve(store.vectors.size());
    for (const auto& [id, v] : store.vectors) ids.push_back(&id);
    std::sort(ids.begin(), ids.end(), [](const auto* a, const auto* b) { return *a < *b; });
    for (const auto* id : ids) {
        f << csv::quote_field(*id);
        for (double x : store.vectors.at(*id)) f << ',' << x;
        f << '\n';
    }
}

std::vector<double> trunk_embedding(const vit::Parameters& params, const ImageBuffer& img) {
    const std::size_t s = params.config.image_size;
    if (img.width != s || img.height != s)
        throw DimensionError("trunk_embedding: image must be " + std::to_string(s) + "x" +
                             std::to_string(s));
    Tensor t({s, s, 3});
    for (std::size_t i = 0; i < t.numel(); ++i) t.data[i] = (img.pixels[i] - 0.5) / 0.5;
    const Tensor cls = vit::class_embedding(params, t);
    return unit_normalize(std::vector<double>(cls.data.begin(), cls.data.end()));
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

DedupResult dedup(const std::vector<Manifest>& manifests, const EmbeddingStore& embeddings,
                  double threshold) {
    if (threshold <= 0.0 || threshold > 1.0)
        throw Error("dedup threshold must be in (0,1], got " + std::to_string(threshold));

    std::vector<ImageRecord> all;
    for (const auto& m : manifests)
        for (const auto& r : m.records) all.push_back(r);

    DedupResult out;
    if (all.empty()) return out;

    const std::size_t n = all.size();
    std::vector<const std::vector<double>*> vecs(n);
    for (std::size_t i = 0; i < n; ++i) vecs[i] = &embeddings.get(all[i].id);

    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double sim = cosine(*vecs[i], *vecs[j]);
            if (sim >= threshold) {
                out.report.pairs.push_back(
                    {all[i].id, all[j].id, sim, all[i].source, all[j].source});
                out.report.pair_counts[{all[i].source, all[j].source}]++;
                uf.unite(i, j);
            }
        }

    // group components, pick keepers
    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t i = 0; i < n; ++i) comps[uf.find(i)].push_back(i);
    std::vector<bool> removed(n, false);
    for (auto& [root, members] : comps) {
        if (members.size() < 2) continue;
        std::size_t keeper = members[0];
        for (std::size_t i : members) {
            const auto key = std::pair(source_priority(all[i].source), all[i].id);
            const auto best = std::pair(source_priority(all[keeper].source), all[keeper].id);
            if (key < best) keeper = i;
        }
        std::vector<std::string> cluster{all[keeper].id};
        for (std::size_t i : members)
            if (i != keeper) {
                cluster.push_back(all[i].id);
                removed[i] = true;
                out.report.removed_ids.push_back(all[i].id);
            }
        out.report.clusters.push_back(std::move(cluster));
    }

    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) out.cleaned.records.push_back(all[i]);
    return out;
}

void save_report(const DedupReport& report, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write dedup report " + path);
    f << "id_a,id_b,similarity,source_a,source_b\n";
    f.precision(17);
    auto pairs = report.pairs;
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const DupPair& a, const DupPair& b) { return a.similarity > b.similarity; });
    for (const auto& p : pairs)
        f << csv::quote_field(p.id_a) << ',' << csv::quote_field(p.id_b) << ',' << p.similarity
          << ',' << source_name(p.source_a) << ',' << source_name(p.source_b) << '\n';
}

}  // namespace vitmem::data
