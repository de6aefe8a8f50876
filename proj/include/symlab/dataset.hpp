#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "symlab/render.hpp"
#include "symlab/serialize.hpp"
#include "symlab/version.hpp"

namespace symlab {

struct DatasetRecord {
    Pose viewpoint;
    SphericalCoord spherical;
    Image observation;
};

// Rendered observations with their viewpoints, sampled on a fixed-radius
// sphere around the object.
struct Dataset {
    ObjectSpec object;
    uint64_t seed = 0;
    double radius = 0.0;
    int width = 0, height = 0;
    double elevation_lo = 0.0, elevation_hi = 0.0;
    std::vector<DatasetRecord> records;

    size_t size() const { return records.size(); }
};

struct DatasetConfig {
    int count = 2000;
    double radius = 0.0;  // 0 = default 2.5x the object bounding radius
    uint64_t seed = 0;
    int width = 64, height = 64;
    // Elevation band avoiding the degenerate pole views.
    double elevation_lo = -kPi / 3.0;
    double elevation_hi = kPi / 3.0;
};

inline double default_camera_radius(const ObjectSpec& obj) { return 2.5 * obj.bounding_radius(); }

// Viewpoint for record `index`: deterministic substream of the dataset seed,
// so records are independent of generation order.
inline SphericalCoord sample_viewpoint(const DatasetConfig& cfg, const ObjectSpec& obj,
                                       uint64_t index) {
    Rng rng = Rng::stream(cfg.seed, "viewpoint", index);
    SphericalCoord c;
    c.azimuth = rng.uniform(0.0, kTwoPi);
    c.elevation = rng.uniform(cfg.elevation_lo, cfg.elevation_hi);
    c.radius = cfg.radius > 0.0 ? cfg.radius : default_camera_radius(obj);
    return c;
}

inline Dataset generate_dataset(const ObjectSpec& obj, const DatasetConfig& cfg) {
    if (cfg.count < 2) throw Error("generate_dataset: need at least 2 records");
    obj.validate();
    Dataset ds;
    ds.object = obj;
    ds.seed = cfg.seed;
    ds.radius = cfg.radius > 0.0 ? cfg.radius : default_camera_radius(obj);
    ds.width = cfg.width;
    ds.height = cfg.height;
    ds.elevation_lo = cfg.elevation_lo;
    ds.elevation_hi = cfg.elevation_hi;
    ds.records.resize(static_cast<size_t>(cfg.count));
    for (int i = 0; i < cfg.count; ++i) {
        const SphericalCoord c = sample_viewpoint(cfg, obj, static_cast<uint64_t>(i));
        const Pose v = viewpoint_from_spherical(c);
        ds.records[static_cast<size_t>(i)] = {v, c, render(obj, v, cfg.width, cfg.height)};
    }
    return ds;
}

inline Dataset generate_dataset(const ObjectSpec& obj, int count, double radius, uint64_t seed) {
    DatasetConfig cfg;
    cfg.count = count;
    cfg.radius = radius;
    cfg.seed = seed;
    return generate_dataset(obj, cfg);
}

// A training pair: two distinct records plus the action moving the camera
// from the first viewpoint to the second.
struct PairSample {
    size_t index_a = 0, index_b = 0;
    const DatasetRecord* a = nullptr;
    const DatasetRecord* b = nullptr;
    Action action;
};

inline PairSample sample_pair(const Dataset& ds, Rng& rng) {
    if (ds.size() < 2) throw Error("sample_pair: dataset needs at least 2 records");
    const size_t n = ds.size();
    const size_t i = rng.uniform_index(n);
    size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;  // uniform over the remaining indices
    PairSample p;
    p.index_a = i;
    p.index_b = j;
    p.a = &ds.records[i];
    p.b = &ds.records[j];
    p.action = relative_action(ds.records[i].viewpoint, ds.records[j].viewpoint);
    return p;
}

namespace datasetdetail {

inline std::string record_filename(size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "img_%05zu.ppm", index);
    return buf;
}

}  // namespace datasetdetail

// On-disk layout: meta.json + poses.jsonl + one 8-bit PPM per record.
inline void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    Json meta;
    meta["format_version"] = 1;
    meta["tool_version"] = kVersion;
    meta["object"] = to_json(ds.object);
    meta["seed"] = ds.seed;
    meta["radius"] = ds.radius;
    meta["resolution"] = Json{{"width", ds.width}, {"height", ds.height}};
    meta["elevation_band"] = Json::array({ds.elevation_lo, ds.elevation_hi});
    meta["count"] = ds.records.size();
    {
        std::ofstream f(dir / "meta.json");
        if (!f) throw Error("save_dataset: cannot write meta.json in " + dir.string());
        f << meta.dump(2) << "\n";
    }
    std::ofstream poses(dir / "poses.jsonl");
    if (!poses) throw Error("save_dataset: cannot write poses.jsonl in " + dir.string());
    for (size_t i = 0; i < ds.records.size(); ++i) {
        const auto& r = ds.records[i];
        Json line;
        line["index"] = i;
        line["azimuth"] = r.spherical.azimuth;
        line["elevation"] = r.spherical.elevation;
        line["radius"] = r.spherical.radius;
        line["pose"] = to_json(r.viewpoint);
        poses << line.dump() << "\n";
        write_ppm(dir / datasetdetail::record_filename(i), r.observation);
    }
}

inline Dataset load_dataset(const std::filesystem::path& dir) {
    std::ifstream mf(dir / "meta.json");
    if (!mf) throw Error("load_dataset: cannot open " + (dir / "meta.json").string());
    Json meta = Json::parse(mf);
    Dataset ds;
    ds.object = object_from_json(meta.at("object"));
    ds.seed = meta.at("seed").get<uint64_t>();
    ds.radius = meta.at("radius").get<double>();
    ds.width = meta.at("resolution").at("width").get<int>();
    ds.height = meta.at("resolution").at("height").get<int>();
    ds.elevation_lo = meta.at("elevation_band").at(0).get<double>();
    ds.elevation_hi = meta.at("elevation_band").at(1).get<double>();
    const size_t count = meta.at("count").get<size_t>();
    std::ifstream poses(dir / "poses.jsonl");
    if (!poses) throw Error("load_dataset: cannot open " + (dir / "poses.jsonl").string());
    ds.records.resize(count);
    std::string line;
    size_t i = 0;
    while (std::getline(poses, line)) {
        if (line.empty()) continue;
        if (i >= count) throw Error("load_dataset: more pose lines than records");
        Json j = Json::parse(line);
        DatasetRecord& r = ds.records[i];
        r.spherical.azimuth = j.at("azimuth").get<double>();
        r.spherical.elevation = j.at("elevation").get<double>();
        r.spherical.radius = j.at("radius").get<double>();
        r.viewpoint = pose_from_json(j.at("pose"));
        r.observation = read_ppm(dir / datasetdetail::record_filename(i));
        ++i;
    }
    if (i != count) throw Error("load_dataset: pose line count does not match meta count");
    return ds;
}

}  // namespace symlab
