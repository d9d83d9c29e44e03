#include "vitmem/manifest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "vitmem/csv.hpp"

namespace vitmem::data {

const char* source_name(Source s) {
    switch (s) {
        case Source::Lamem: return "lamem";
        case Source::Memcat: return "memcat";
        case Source::Cvpr2011: return "cvpr2011";
        case Source::Figrim: return "figrim";
        case Source::Other: return "other";
    }
    throw Error("invalid source tag");
}

Source source_from_name(const std::string& name) {
    if (name == "lamem") return Source::Lamem;
    if (name == "memcat") return Source::Memcat;
    if (name == "cvpr2011") return Source::Cvpr2011;
    if (name == "figrim") return Source::Figrim;
    if (name == "other") return Source::Other;
    throw Error("unknown source tag: " + name);
}

int source_priority(Source s) {
    switch (s) {
        case Source::Lamem: return 0;
        case Source::Memcat: return 1;
        case Source::Cvpr2011: return 2;
        case Source::Figrim: return 3;
        case Source::Other: return 4;
    }
    return 5;
}

const ImageRecord* Manifest::find(const std::string& id) const {
    for (const auto& r : records)
        if (r.id == id) return &r;
    return nullptr;
}

void Manifest::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& r : records) {
        if (!seen.insert(r.id).second) throw Error("duplicate id in manifest: " + r.id);
        if (r.score < 0.0 || r.score > 1.0)
            throw Error("score out of [0,1] for id " + r.id + ": " + std::to_string(r.score));
    }
}

Manifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open manifest " + path);
    std::string line;
    if (!std::getline(f, line)) throw Error("manifest is empty (missing header): " + path);
    if (csv::parse_line(line) != std::vector<std::string>{"id", "path", "score", "source"})
        throw Error("manifest header must be 'id,path,score,source': " + path);
    Manifest m;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = csv::parse_line(line);
        if (fields.size() != 4)
            throw Error(path + ":" + std::to_string(lineno) + ": expected 4 fields, got " +
                        std::to_string(fields.size()));
        ImageRecord r;
        r.id = fields[0];
        r.path = fields[1];
        try {
            r.score = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw Error(path + ":" + std::to_string(lineno) + ": bad score '" + fields[2] + "'");
        }
        if (r.score < 0.0 || r.score > 1.0)
            throw Error(path + ":" + std::to_string(lineno) + ": score " + fields[2] +
                        " outside [0,1]");
        r.source = source_from_name(fields[3]);
        m.records.push_back(std::move(r));
    }
    m.validate();
    return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write manifest " + path);
    f << "id,path,score,source\n";
    f.precision(17);
    for (const auto& r : m.records)
        f << csv::quote_field(r.id) << ',' << csv::quote_field(r.path) << ',' << r.score << ','
          << source_name(r.source) << '\n';
}

Manifest merge(const std::vector<Manifest>& manifests) {
    Manifest out;
    std::unordered_map<std::string, Source> seen;
    for (const auto& m : manifests)
        for (const auto& r : m.records) {
            const auto [it, inserted] = seen.emplace(r.id, r.source);
            if (!inserted)
                throw Error("merge: id '" + r.id + "' appears in both " +
                            source_name(it->second) + " and " + source_name(r.source));
            out.records.push_back(r);
        }
    return out;
}

}  // namespace vitmem::data
