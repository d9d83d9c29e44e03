#pragma once

#include <string>
#include <vector>

#include "vitmem/error.hpp"

namespace vitmem::data {

enum class Source { Lamem, Memcat, Cvpr2011, Figrim, Other };

const char* source_name(Source s);
Source source_from_name(const std::string& name);
// Keeper priority inside a duplicate cluster: lower ranks win.
int source_priority(Source s);

struct ImageRecord {
    std::string id;
    std::string path;
    double score = 0.0;  // memorability in [0,1]
    Source source = Source::Other;
};

struct Manifest {
    std::vector<ImageRecord> records;

    std::size_t size() const { return records.size(); }
    const ImageRecord* find(const std::string& id) const;
    void validate() const;  // id uniqueness, score range
};

// CSV with header `id,path,score,source`.
Manifest load_manifest(const std::string& path);
void save_manifest(const Manifest& m, const std::string& path);

// Union with id-collision detection; inputs are assumed deduplicated.
Manifest merge(const std::vector<Manifest>& manifests);

}  // namespace vitmem::data
