#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "symlab/serialize.hpp"
#include "symlab/version.hpp"

// Experiment manifests: every artifact-producing command records its tool
// version, resolved configuration, input hashes and outputs so a run can be
// replayed and checked byte-for-byte.

namespace symlab {

inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const uint8_t*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("hash_file: cannot open " + path.string());
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[65536];
    while (f.read(buf, sizeof buf) || f.gcount() > 0)
        h = fnv1a64(buf, static_cast<size_t>(f.gcount()), h);
    return h;
}

// Hash of a file, or of a directory's sorted relative paths plus contents.
inline uint64_t hash_path(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw Error("hash_path: no such path: " + path.string());
    if (fs::is_regular_file(path)) return hash_file(path);
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& f : files) {
        const std::string rel = fs::relative(f, path).generic_string();
        h = fnv1a64(rel.data(), rel.size(), h);
        const uint64_t fh = hash_file(f);
        h = fnv1a64(&fh, sizeof fh, h);
    }
    return h;
}

inline std::string hash_hex(uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ExperimentManifest {
    std::string tool_version = kVersion;
    std::string command;
    std::vector<std::string> argv;
    Json config = Json::object();
    Json input_hashes = Json::object();
    std::vector<std::string> outputs;
    double duration_seconds = 0.0;
    uint64_t seed = 0;

    void add_input(const std::string& label, const std::filesystem::path& path) {
        input_hashes[label] = Json{{"path", path.string()}, {"fnv1a64", hash_hex(hash_path(path))}};
    }
};

inline void to_json(Json& j, const ExperimentManifest& m) {
    j = Json{{"tool_version", m.tool_version},
             {"command", m.command},
             {"argv", m.argv},
             {"config", m.config},
             {"input_hashes", m.input_hashes},
             {"outputs", m.outputs},
             {"duration_seconds", m.duration_seconds},
             {"seed", m.seed}};
}

inline void from_json(const Json& j, ExperimentManifest& m) {
    j.at("tool_version").get_to(m.tool_version);
    j.at("command").get_to(m.command);
    j.at("argv").get_to(m.argv);
    m.config = j.at("config");
    m.input_hashes = j.at("input_hashes");
    j.at("outputs").get_to(m.outputs);
    j.at("duration_seconds").get_to(m.duration_seconds);
    j.at("seed").get_to(m.seed);
}

// Write-to-temp-then-rename so readers never observe a partial manifest.
inline void write_manifest_atomic(const ExperimentManifest& m,
                                  const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("write_manifest_atomic: cannot open " + tmp.string());
        const Json j = m;
        out << j.dump(2) << "\n";
        if (!out.good()) throw Error("write_manifest_atomic: write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline ExperimentManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_manifest: cannot open " + path.string());
    Json j;
    in >> j;
    return j.get<ExperimentManifest>();
}

}  // namespace symlab
