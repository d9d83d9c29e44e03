#include "vitmem/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace vitmem::checkpoint {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian; big-endian hosts need byte swaps");

struct ManifestEntry {
    std::string name;
    std::vector<std::size_t> shape;
    std::uint64_t offset = 0;
};

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<std::size_t> parse_shape(const std::string& s) {
    std::vector<std::size_t> shape;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find('x', pos);
        if (next == std::string::npos) next = s.size();
        shape.push_back(std::stoull(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return shape;
}

std::string shape_to_str(const std::vector<std::size_t>& shape) {
    std::string s;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(shape[i]);
    }
    return s;
}

}  // namespace

void save(const vit::Parameters& params, const TrainMeta& meta, const std::string& dir) {
    fs::create_directories(dir);
    const auto named = params.named_tensors();

    std::ofstream bin(fs::path(dir) / "tensors.bin", std::ios::binary);
    if (!bin) throw IoError("cannot write " + dir + "/tensors.bin");
    std::ostringstream header;
    header << "vitmem-checkpoint " << kFormatVersion << "\n";
    const auto& c = params.config;
    header << "image_size=" << c.image_size << "\npatch_size=" << c.patch_size
           << "\ndim=" << c.dim << "\ndepth=" << c.depth << "\nheads=" << c.heads
           << "\nmlp_dim=" << c.mlp_dim << "\n";
    header << "step=" << meta.step << "\nseed=" << meta.seed << "\n";
    header << "norm_mean=" << meta.norm_mean << "\nnorm_std=" << meta.norm_std << "\n";

    std::uint64_t offset = 0;
    std::vector<float> buf;
    for (const auto& [name, t] : named) {
        header << "tensor " << name << " f32 " << shape_to_str(t->shape) << " " << offset << "\n";
        buf.resize(t->numel());
        for (std::size_t i = 0; i < t->numel(); ++i) buf[i] = static_cast<float>(t->data[i]);
        bin.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
        offset += buf.size() * sizeof(float);
    }
    if (!bin) throw IoError("write failed for " + dir + "/tensors.bin");
    bin.close();

    std::ofstream hf(fs::path(dir) / "header.txt");
    if (!hf) throw IoError("cannot write " + dir + "/header.txt");
    hf << header.str();
}

namespace {

struct ParsedHeader {
    vit::ModelConfig config;
    TrainMeta meta;
    std::vector<ManifestEntry> manifest;
};

ParsedHeader parse_header(const std::string& dir) {
    std::ifstream hf(fs::path(dir) / "header.txt");
    if (!hf) throw IoError("cannot read " + dir + "/header.txt");
    std::string line;
    if (!std::getline(hf, line)) throw IoError("empty checkpoint header in " + dir);
    {
        const auto toks = split_ws(line);
        if (toks.size() != 2 || toks[0] != "vitmem-checkpoint")
            throw Error("not a vitmem checkpoint: " + dir);
        if (std::stoi(toks[1]) != kFormatVersion)
            throw Error("checkpoint format version " + toks[1] + " unsupported (expected " +
                        std::to_string(kFormatVersion) + ")");
    }
    ParsedHeader ph;
    while (std::getline(hf, line)) {
        if (line.empty()) continue;
        if (line.rfind("tensor ", 0) == 0) {
            const auto toks = split_ws(line);
            if (toks.size() != 5 || toks[2] != "f32")
                throw Error("bad tensor manifest line: " + line);
            ph.manifest.push_back({toks[1], parse_shape(toks[3]), std::stoull(toks[4])});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("bad checkpoint header line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        auto& c = ph.config;
        if (key == "image_size") c.image_size = std::stoull(val);
        else if (key == "patch_size") c.patch_size = std::stoull(val);
        else if (key == "dim") c.dim = std::stoull(val);
        else if (key == "depth") c.depth = std::stoull(val);
        else if (key == "heads") c.heads = std::stoull(val);
        else if (key == "mlp_dim") c.mlp_dim = std::stoull(val);
        else if (key == "step") ph.meta.step = std::stoull(val);
        else if (key == "seed") ph.meta.seed = std::stoull(val);
        else if (key == "norm_mean") ph.meta.norm_mean = std::stod(val);
        else if (key == "norm_std") ph.meta.norm_std = std::stod(val);
        else throw Error("unknown checkpoint header key: " + key);
    }
    return ph;
}

Tensor read_tensor(std::ifstream& bin, const ManifestEntry& e, const std::string& dir) {
    Tensor t(e.shape);
    std::vector<float> buf(t.numel());
    bin.seekg(static_cast<std::streamoff>(e.offset));
    bin.read(reinterpret_cast<char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (static_cast<std::size_t>(bin.gcount()) != buf.size() * sizeof(float))
        throw Error("checkpoint tensor '" + e.name + "' truncated in " + dir);
    for (std::size_t i = 0; i < buf.size(); ++i) t.data[i] = static_cast<double>(buf[i]);
    return t;
}

}  // namespace

Loaded load(const std::string& dir) {
    const ParsedHeader ph = parse_header(dir);
    std::ifstream bin(fs::path(dir) / "tensors.bin", std::ios::binary);
    if (!bin) throw IoError("cannot read " + dir + "/tensors.bin");

    Loaded out;
    out.meta = ph.meta;
    out.params = vit::init_parameters(ph.config, 0);
    std::map<std::string, const ManifestEntry*> by_name;
    for (const auto& e : ph.manifest) by_name[e.name] = &e;
    for (auto& [name, t] : out.params.named_tensors()) {
        const auto it = by_name.find(name);
        if (it == by_name.end()) throw Error("checkpoint missing tensor '" + name + "' in " + dir);
        const ManifestEntry& e = *it->second;
        if (e.shape != t->shape)
            throw Error("checkpoint tensor '" + name + "' has shape " + shape_str(e.shape) +
                        ", expected " + shape_str(t->shape));
        *t = read_tensor(bin, e, dir);
    }
    return out;
}

vit::Parameters load_pretrained(const std::string& dir, const vit::ModelConfig& cfg,
                                bool reinit_head, std::uint64_t head_seed) {
    cfg.validate();
    const ParsedHeader ph = parse_header(dir);
    const auto& sc = ph.config;
    if (sc.image_size != cfg.image_size || sc.patch_size != cfg.patch_size || sc.dim != cfg.dim ||
        sc.depth != cfg.depth || sc.heads != cfg.heads || sc.mlp_dim != cfg.mlp_dim)
        throw Error("pretrained checkpoint config does not match requested config");
    Loaded loaded = load(dir);
    if (reinit_head) {
        std::mt19937_64 rng(head_seed);
        loaded.params.head_w = Tensor::randn({cfg.dim}, 0.02, rng);
        loaded.params.head_b = Tensor::zeros({1});
    }
    return std::move(loaded.params);
}

}  // namespace vitmem::checkpoint
