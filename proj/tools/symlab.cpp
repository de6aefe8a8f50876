#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "symlab/manifest.hpp"
#include "symlab/plot.hpp"
#include "symlab/sweep.hpp"

// symlab: dataset generation, free-energy training, beta sweeps, latent
// analysis and grasp planning behind one reproducible command-line tool.

namespace fs = std::filesystem;
using namespace symlab;

namespace {

std::vector<std::string> g_argv;

// Relative output paths resolve under SYMLAB_OUT_ROOT when set.
fs::path resolve_out(const std::string& out) {
    fs::path p(out);
    if (const char* root = std::getenv("SYMLAB_OUT_ROOT"); root && *root && p.is_relative())
        return fs::path(root) / p;
    return p;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw Error("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw Error("empty list: '" + s + "'");
    return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw Error("empty list: '" + s + "'");
    return out;
}

std::vector<int> to_ints(const std::vector<double>& v) {
    std::vector<int> out;
    for (const double x : v) out.push_back(static_cast<int>(x));
    return out;
}

// Flat key-value training config: one `key = value` per line, # comments.
TrainConfig parse_train_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("train config: cannot open " + path.string());
    TrainConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        if (strip(line).empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("train config: line " + std::to_string(lineno) + " has no '='");
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        if (key == "beta") cfg.beta = std::stod(val);
        else if (key == "steps") cfg.steps = std::stoi(val);
        else if (key == "batch") cfg.batch = std::stoi(val);
        else if (key == "learning_rate") cfg.learning_rate = std::stod(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "eval_interval") cfg.eval_interval = std::stoi(val);
        else if (key == "clip_norm") cfg.clip_norm = std::stod(val);
        else if (key == "dataset_dir") cfg.dataset_dir = val;
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "latent_dim") cfg.model.latent_dim = std::stoi(val);
        else if (key == "width") cfg.model.width = std::stoi(val);
        else if (key == "height") cfg.model.height = std::stoi(val);
        else if (key == "channels") cfg.model.channels = to_ints(parse_double_list(val));
        else if (key == "trans_hidden") cfg.model.trans_hidden = std::stoi(val);
        else throw Error("train config: unknown key '" + key + "' on line " +
                         std::to_string(lineno));
    }
    return cfg;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

ExperimentManifest manifest_base(const std::string& command, uint64_t seed) {
    ExperimentManifest m;
    m.command = command;
    m.argv = g_argv;
    m.seed = seed;
    if (const char* threads = std::getenv("SYMLAB_THREADS"))
        m.config["env_threads"] = threads;
    return m;
}

void write_json(const Json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string());
    out << j.dump(2) << "\n";
    if (!out.good()) throw Error("write failed for " + path.string());
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    Json j;
    in >> j;
    return j;
}

std::string checkpoint_object(const Checkpoint& ck) {
    if (ck.manifest.contains("extra") && ck.manifest["extra"].contains("object"))
        return ck.manifest["extra"]["object"].get<std::string>();
    return "";
}

// ---------------------------------------------------------------- commands

void cmd_generate_dataset(const std::string& object, int count, double radius, uint64_t seed,
                          int width, int height, const std::string& out) {
    Stopwatch timer;
    const ObjectSpec& obj = object_by_name(object);
    DatasetConfig dc;
    dc.count = count;
    dc.radius = radius;
    dc.seed = seed;
    dc.width = width;
    dc.height = height;
    const Dataset ds = generate_dataset(obj, dc);
    const fs::path dir = resolve_out(out);
    fs::create_directories(dir);
    save_dataset(ds, dir);

    ExperimentManifest m = manifest_base("generate-dataset", seed);
    m.config["object"] = object;
    m.config["count"] = count;
    m.config["radius"] = ds.radius;
    m.config["seed"] = seed;
    m.config["width"] = width;
    m.config["height"] = height;
    m.outputs = {"meta.json", "poses.jsonl"};
    for (size_t i = 0; i < ds.records.size(); ++i)
        m.outputs.push_back(datasetdetail::record_filename(i));
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, dir / "manifest.json");
    std::cout << "wrote " << ds.records.size() << " observations to " << dir.string() << "\n";
}

void cmd_train(const std::string& config_path) {
    Stopwatch timer;
    TrainConfig cfg = parse_train_config_file(config_path);
    if (cfg.dataset_dir.empty()) throw Error("train: config must set dataset_dir");
    if (cfg.out_dir.empty()) throw Error("train: config must set out_dir");
    cfg.out_dir = resolve_out(cfg.out_dir).string();
    if (!fs::exists(cfg.dataset_dir))
        throw Error("train: dataset path does not exist: " + cfg.dataset_dir);

    train(cfg);

    ExperimentManifest m = manifest_base("train", cfg.seed);
    m.config["train_config"] = cfg;
    m.add_input("config", config_path);
    m.add_input("dataset", cfg.dataset_dir);
    m.outputs = {"checkpoint", "curve.csv"};
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, fs::path(cfg.out_dir) / "manifest.json");
    std::cout << "trained " << cfg.steps << " steps (beta " << cfg.beta << ") -> "
              << cfg.out_dir << "\n";
}

void cmd_sweep(const std::string& object, const std::string& betas_csv, const std::string& out,
               const std::string& dataset_dir, const std::string& config_path, int steps,
               int count, uint64_t seed) {
    Stopwatch timer;
    const ObjectSpec& obj = object_by_name(object);
    const std::vector<double> betas = parse_double_list(betas_csv);

    TrainConfig base;
    if (!config_path.empty()) base = parse_train_config_file(config_path);
    if (steps > 0) base.steps = steps;
    base.seed = seed;

    Dataset ds;
    if (!dataset_dir.empty()) {
        if (!fs::exists(dataset_dir))
            throw Error("sweep: dataset path does not exist: " + dataset_dir);
        ds = load_dataset(dataset_dir);
        base.model.width = ds.width;
        base.model.height = ds.height;
    } else {
        DatasetConfig dc;
        dc.count = count;
        dc.seed = seed;
        dc.width = base.model.width;
        dc.height = base.model.height;
        ds = generate_dataset(obj, dc);
    }

    const fs::path dir = resolve_out(out);
    fs::create_directories(dir);
    const SweepReport rep = beta_sweep(obj, betas, base, ds, dir);

    ExperimentManifest m = manifest_base("sweep", seed);
    m.config["object"] = object;
    m.config["betas"] = betas;
    m.config["base"] = base;
    m.config["dataset_count"] = static_cast<int>(ds.size());
    if (!config_path.empty()) m.add_input("config", config_path);
    if (!dataset_dir.empty()) m.add_input("dataset", dataset_dir);
    m.outputs = {"sweep.json", "sweep.csv"};
    for (const SweepRow& r : rep.rows)
        if (!r.checkpoint_dir.empty()) m.outputs.push_back(r.checkpoint_dir);
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, dir / "manifest.json");

    int failed = 0;
    for (const SweepRow& r : rep.rows) failed += r.failed ? 1 : 0;
    std::cout << "sweep over " << rep.rows.size() << " betas (" << failed << " failed) -> "
              << dir.string() << "\n";
}

void cmd_eval_complexity(const std::string& model_dir, const std::string& dataset_dir,
                         const std::string& out, int pairs, uint64_t seed, bool orbit,
                         bool mean_prior) {
    Stopwatch timer;
    const Checkpoint ck = load_checkpoint(model_dir);
    const Dataset ds = load_dataset(dataset_dir);
    const std::vector<EvalPair> eval_pairs =
        orbit ? orbit_eval_pairs(ds.object, ds, pairs, seed)
              : eval_pairs_from_dataset(ds, pairs, seed);
    ComplexityReport rep = evaluate_complexity(ck.model, eval_pairs, seed, !mean_prior);
    rep.object = ds.object.name;
    if (ck.manifest.contains("extra") && ck.manifest["extra"].contains("beta"))
        rep.beta = ck.manifest["extra"]["beta"].get<double>();

    const fs::path dir = resolve_out(out);
    fs::create_directories(dir);
    write_json(rep, dir / "complexity.json");

    ExperimentManifest m = manifest_base("eval-complexity", seed);
    m.config["pairs"] = pairs;
    m.config["orbit"] = orbit;
    m.config["sampled_prior"] = !mean_prior;
    m.add_input("model", model_dir);
    m.add_input("dataset", dataset_dir);
    m.outputs = {"complexity.json"};
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, dir / "manifest.json");
    std::cout << "median complexity " << rep.median << " over " << rep.pair_count
              << " pairs -> " << dir.string() << "\n";
}

void cmd_eval_symmetry(const std::string& model_dir, const std::string& dataset_dir,
                       const std::string& out, int pairs, uint64_t seed, double threshold,
                       double percentile) {
    Stopwatch timer;
    const Checkpoint ck = load_checkpoint(model_dir);
    const Dataset ds = load_dataset(dataset_dir);

    double used_threshold = threshold;
    if (percentile > 0.0) {
        // Calibrate against ground-truth orbit pairs for this object.
        const auto orbit = orbit_eval_pairs(ds.object, ds, pairs, seed);
        std::vector<double> scores;
        for (const EvalPair& p : orbit)
            scores.push_back(symmetry_score(ck.model, p.a, p.b));
        std::sort(scores.begin(), scores.end());
        const size_t idx = static_cast<size_t>(percentile / 100.0 * (scores.size() - 1));
        used_threshold = scores[idx];
        if (used_threshold <= 0.0)
            throw Error("eval-symmetry: percentile calibration produced a non-positive "
                        "threshold (orbit renders are near-identical); use --threshold");
    }

    const auto eval_pairs = eval_pairs_from_dataset(ds, pairs, seed);
    SymmetryReport rep = symmetry_exploitation(ck.model, eval_pairs, used_threshold);
    rep.object = ds.object.name;
    if (ck.manifest.contains("extra") && ck.manifest["extra"].contains("beta"))
        rep.beta = ck.manifest["extra"]["beta"].get<double>();

    const fs::path dir = resolve_out(out);
    fs::create_directories(dir);
    write_json(rep, dir / "symmetry.json");

    ExperimentManifest m = manifest_base("eval-symmetry", seed);
    m.config["pairs"] = pairs;
    m.config["threshold"] = used_threshold;
    m.config["percentile"] = percentile;
    m.add_input("model", model_dir);
    m.add_input("dataset", dataset_dir);
    m.outputs = {"symmetry.json"};
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, dir / "manifest.json");
    std::cout << "exploitation " << rep.exploitation_pct << "% at threshold "
              << used_threshold << " -> " << dir.string() << "\n";
}

void cmd_pca(const std::string& model_dir, const std::string& dataset_dir,
             const std::string& object, int views, uint64_t seed, const std::string& out) {
    Stopwatch timer;
    const Checkpoint ck = load_checkpoint(model_dir);

    std::vector<Image> obs;
    std::vector<SphericalCoord> coords;
    if (!dataset_dir.empty()) {
        const Dataset ds = load_dataset(dataset_dir);
        for (const auto& r : ds.records) {
            obs.push_back(r.observation);
            coords.push_back(r.spherical);
        }
    } else {
        std::string name = object.empty() ? checkpoint_object(ck) : object;
        if (name.empty())
            throw Error("pca: need --dataset, --object, or a checkpoint that names its object");
        const ObjectSpec& obj = object_by_name(name);
        for (auto& [coord, img] :
             held_out_views(obj, views, default_camera_radius(obj), ck.model.config().width,
                            ck.model.config().height, seed, "pcaviews")) {
            obs.push_back(std::move(img));
            coords.push_back(coord);
        }
    }

    const EigenSpectrum spectrum = pca_spectrum(ck.model, obs);
    const Projection2D projection = project_2d(ck.model, obs, coords);

    const fs::path dir = resolve_out(out);
    fs::create_directories(dir);
    write_json(spectrum, dir / "spectrum.json");
    write_json(projection, dir / "projection.json");

    ExperimentManifest m = manifest_base("pca", seed);
    m.config["views"] = static_cast<int>(obs.size());
    m.add_input("model", model_dir);
    if (!dataset_dir.empty()) m.add_input("dataset", dataset_dir);
    m.outputs = {"spectrum.json", "projection.json"};
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, dir / "manifest.json");
    std::cout << "top-2 explained ratio "
              << (spectrum.explained_ratio.size() >= 2
                      ? spectrum.explained_ratio[0] + spectrum.explained_ratio[1]
                      : 0.0)
              << " -> " << dir.string() << "\n";
}

void cmd_plan_grasp(const std::string& model_dir, const std::string& current_img,
                    const std::string& goal_img, int candidates, int topk,
                    const std::string& mode, uint64_t seed, const std::string& out,
                    const std::string& current_pose_csv, const std::string& goal_pose_csv,
                    double radius_flag, double gamma, bool unit_variance,
                    const std::string& object) {
    Stopwatch timer;
    const Checkpoint ck = load_checkpoint(model_dir);
    const Image cur = read_ppm(current_img);
    const Image goal = read_ppm(goal_img);

    const std::string obj_name = object.empty() ? checkpoint_object(ck) : object;
    double radius = radius_flag;
    if (radius <= 0.0 && !current_pose_csv.empty())
        radius = parse_double_list(current_pose_csv).at(2);
    if (radius <= 0.0 && !obj_name.empty())
        radius = default_camera_radius(object_by_name(obj_name));
    if (radius <= 0.0)
        throw Error("plan-grasp: need --radius, --current-pose, or a checkpoint that names "
                    "its object");

    const auto pose_from_csv = [&](const std::string& csv) {
        const std::vector<double> v = parse_double_list(csv);
        if (v.size() != 3) throw Error("pose must be azimuth,elevation,radius");
        return viewpoint_from_spherical({v[0], v[1], v[2]});
    };
    const Pose current = current_pose_csv.empty()
                             ? viewpoint_from_spherical({0.0, 0.0, radius})
                             : pose_from_csv(current_pose_csv);
    Pose goal_pose;
    const bool has_goal_pose = !goal_pose_csv.empty();
    if (has_goal_pose) goal_pose = pose_from_csv(goal_pose_csv);

    PlannerConfig cfg;
    cfg.candidates = candidates;
    cfg.topk = topk;
    cfg.mode = planner_mode_from_name(mode);
    cfg.gamma = gamma;
    cfg.unit_variance = unit_variance;
    cfg.seed = seed;

    const PlanResult result = plan(ck.model, cur, goal, current, radius, cfg,
                                   has_goal_pose ? &goal_pose : nullptr);

    const fs::path dir = resolve_out(out);
    fs::create_directories(dir);
    write_json(result, dir / "plan.json");
    write_ppm(dir / "plan_sphere.ppm", plot::plot_plan_sphere(result));

    ExperimentManifest m = manifest_base("plan-grasp", seed);
    m.config["candidates"] = candidates;
    m.config["topk"] = topk;
    m.config["mode"] = mode;
    m.config["gamma"] = gamma;
    m.config["unit_variance"] = unit_variance;
    m.config["radius"] = radius;
    m.add_input("model", model_dir);
    m.add_input("current", current_img);
    m.add_input("goal", goal_img);
    m.outputs = {"plan.json", "plan_sphere.ppm"};

    if (has_goal_pose && !obj_name.empty()) {
        const SpreadMetrics spread =
            orbit_spread(result, object_by_name(obj_name), goal_pose);
        write_json(spread, dir / "spread.json");
        m.outputs.push_back("spread.json");
    }
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, dir / "manifest.json");
    std::cout << "best score " << result.ranked.front().score << " over " << candidates
              << " candidates -> " << dir.string() << "\n";
}

void cmd_plot(const std::string& sweep_json, const std::string& spectrum_json,
              const std::string& projection_json, const std::string& plan_json,
              const std::string& out) {
    Stopwatch timer;
    if (sweep_json.empty() && spectrum_json.empty() && projection_json.empty() &&
        plan_json.empty())
        throw CLI::ValidationError("plot", "need at least one of --sweep, --spectrum, "
                                           "--projection, --plan");
    const fs::path dir = resolve_out(out);
    fs::create_directories(dir);

    ExperimentManifest m = manifest_base("plot", 0);
    if (!sweep_json.empty()) {
        const SweepReport rep = read_json(sweep_json).get<SweepReport>();
        std::vector<double> betas, complexity, pct;
        for (const SweepRow& r : rep.rows) {
            betas.push_back(r.beta);
            complexity.push_back(r.median_complexity);
            pct.push_back(r.symmetry_pct);
        }
        write_ppm(dir / "complexity_vs_beta.ppm",
                  plot::plot_metric_vs_beta(betas, complexity, plot::kBlue));
        write_ppm(dir / "exploitation_vs_beta.ppm",
                  plot::plot_metric_vs_beta(betas, pct, plot::kGreen));
        m.add_input("sweep", sweep_json);
        m.outputs.push_back("complexity_vs_beta.ppm");
        m.outputs.push_back("exploitation_vs_beta.ppm");
    }
    if (!spectrum_json.empty()) {
        const EigenSpectrum s = read_json(spectrum_json).get<EigenSpectrum>();
        write_ppm(dir / "eigen_spectrum.ppm", plot::plot_eigen_spectrum(s));
        m.add_input("spectrum", spectrum_json);
        m.outputs.push_back("eigen_spectrum.ppm");
    }
    if (!projection_json.empty()) {
        const Projection2D p = read_json(projection_json).get<Projection2D>();
        write_ppm(dir / "projection.ppm", plot::plot_projection(p));
        m.add_input("projection", projection_json);
        m.outputs.push_back("projection.ppm");
    }
    if (!plan_json.empty()) {
        const PlanResult r = read_json(plan_json).get<PlanResult>();
        write_ppm(dir / "plan_sphere.ppm", plot::plot_plan_sphere(r));
        m.add_input("plan", plan_json);
        m.outputs.push_back("plan_sphere.ppm");
    }
    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, dir / "manifest.json");
    std::cout << "wrote " << m.outputs.size() << " plot(s) -> " << dir.string() << "\n";
}

void cmd_reproduce_figures(const std::string& objects_csv, const std::string& betas_csv,
                           uint64_t seed, const std::string& out, int steps, int count,
                           int resolution, int latent, const std::string& channels_csv,
                           int trans_hidden, int batch) {
    Stopwatch timer;
    const std::vector<std::string> objects = parse_name_list(objects_csv);
    const std::vector<double> betas = parse_double_list(betas_csv);
    const fs::path root = resolve_out(out);
    fs::create_directories(root);

    TrainConfig base;
    base.steps = steps;
    base.batch = batch;
    base.seed = seed;
    base.model.latent_dim = latent;
    base.model.width = base.model.height = resolution;
    base.model.channels = to_ints(parse_double_list(channels_csv));
    base.model.trans_hidden = trans_hidden;
    base.model.validate();

    ExperimentManifest m = manifest_base("reproduce-figures", seed);
    m.config["objects"] = objects;
    m.config["betas"] = betas;
    m.config["base"] = base;
    m.config["dataset_count"] = count;

    for (const std::string& name : objects) {
        const ObjectSpec& obj = object_by_name(name);
        const fs::path dir = root / name;
        fs::create_directories(dir);

        DatasetConfig dc;
        dc.count = count;
        dc.seed = seed;
        dc.width = dc.height = resolution;
        const Dataset ds = generate_dataset(obj, dc);

        const SweepReport rep = beta_sweep(obj, betas, base, ds, dir);

        std::vector<double> bs, complexity, pct;
        for (const SweepRow& r : rep.rows) {
            bs.push_back(r.beta);
            complexity.push_back(r.median_complexity);
            pct.push_back(r.symmetry_pct);
        }
        write_ppm(dir / "complexity_vs_beta.ppm",
                  plot::plot_metric_vs_beta(bs, complexity, plot::kBlue));
        write_ppm(dir / "exploitation_vs_beta.ppm",
                  plot::plot_metric_vs_beta(bs, pct, plot::kGreen));

        // Eigen-spectrum and projection figures come from the mid-beta model.
        int mid = -1;
        const int half = static_cast<int>(rep.rows.size() - 1) / 2;
        for (int off = 0; off < static_cast<int>(rep.rows.size()); ++off)
            for (const int idx : {half - off, half + off})
                if (mid < 0 && idx >= 0 && idx < static_cast<int>(rep.rows.size()) &&
                    !rep.rows[static_cast<size_t>(idx)].failed)
                    mid = idx;
        if (mid < 0) throw Error("reproduce-figures: every training failed for " + name);
        const SweepRow& row = rep.rows[static_cast<size_t>(mid)];
        const Checkpoint ck = load_checkpoint(dir / row.checkpoint_dir);

        std::vector<Image> obs;
        std::vector<SphericalCoord> coords;
        for (auto& [coord, img] : held_out_views(obj, kEvalPairCount, ds.radius, resolution,
                                                 resolution, seed, "pcaviews")) {
            obs.push_back(std::move(img));
            coords.push_back(coord);
        }
        const EigenSpectrum spectrum = pca_spectrum(ck.model, obs);
        const Projection2D projection = project_2d(ck.model, obs, coords);
        write_json(spectrum, dir / "spectrum.json");
        write_json(projection, dir / "projection.json");
        write_ppm(dir / "eigen_spectrum.ppm", plot::plot_eigen_spectrum(spectrum));
        write_ppm(dir / "projection.ppm", plot::plot_projection(projection));

        for (const char* f : {"sweep.json", "sweep.csv", "complexity_vs_beta.ppm",
                              "exploitation_vs_beta.ppm", "eigen_spectrum.ppm",
                              "projection.ppm", "spectrum.json", "projection.json"})
            m.outputs.push_back(name + "/" + f);
        std::cout << name << ": sweep + figures (figure model beta " << row.beta << ")\n";
    }

    m.duration_seconds = timer.seconds();
    write_manifest_atomic(m, root / "manifest.json");
    std::cout << "reproduce-figures -> " << root.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) g_argv.push_back(argv[i]);

    CLI::App app{"symlab: symmetry-exploitation lab for object-centric generative models"};
    app.require_subcommand(1);
    bool deterministic = false;
    app.add_flag("--deterministic", deterministic,
                 "bit-exact replay mode (execution is always single-threaded and "
                 "deterministic; flag recorded in manifests)");

    // generate-dataset
    auto* gen = app.add_subcommand("generate-dataset", "render a viewpoint dataset");
    std::string g_object, g_out;
    int g_count = 2000, g_width = 64, g_height = 64;
    double g_radius = 0.0;
    uint64_t g_seed = 0;
    gen->add_option("--object", g_object, "object name from the catalog")->required();
    gen->add_option("--count", g_count, "number of observations");
    gen->add_option("--radius", g_radius, "camera radius (0 = 2.5x bounding radius)");
    gen->add_option("--seed", g_seed, "rng seed");
    gen->add_option("--width", g_width, "image width");
    gen->add_option("--height", g_height, "image height");
    gen->add_option("--out", g_out, "output directory")->required();
    gen->callback([&] {
        cmd_generate_dataset(g_object, g_count, g_radius, g_seed, g_width, g_height, g_out);
    });

    // train
    auto* tr = app.add_subcommand("train", "train one model from a flat key-value config");
    std::string t_config;
    tr->add_option("--config", t_config, "config file (key = value lines)")->required();
    tr->callback([&] { cmd_train(t_config); });

    // sweep
    auto* sw = app.add_subcommand("sweep", "train one model per beta and report metrics");
    std::string s_object, s_betas, s_out, s_dataset, s_config;
    int s_steps = 0, s_count = 2000;
    uint64_t s_seed = 0;
    sw->add_option("--object", s_object, "object name")->required();
    sw->add_option("--betas", s_betas, "comma-separated ascending betas")->required();
    sw->add_option("--out", s_out, "output directory")->required();
    sw->add_option("--dataset", s_dataset, "existing dataset directory (else generated)");
    sw->add_option("--config", s_config, "base train config file");
    sw->add_option("--steps", s_steps, "override training steps");
    sw->add_option("--count", s_count, "generated dataset size");
    sw->add_option("--seed", s_seed, "rng seed");
    sw->callback([&] {
        cmd_sweep(s_object, s_betas, s_out, s_dataset, s_config, s_steps, s_count, s_seed);
    });

    // eval-complexity
    auto* ec = app.add_subcommand("eval-complexity", "median transition KL over pairs");
    std::string ec_model, ec_dataset, ec_out;
    int ec_pairs = kEvalPairCount;
    uint64_t ec_seed = 0;
    bool ec_orbit = false, ec_mean_prior = false;
    ec->add_option("--model", ec_model, "checkpoint directory")->required();
    ec->add_option("--dataset", ec_dataset, "dataset directory")->required();
    ec->add_option("--out", ec_out, "output directory")->required();
    ec->add_option("--pairs", ec_pairs, "evaluation pair count");
    ec->add_option("--seed", ec_seed, "rng seed");
    ec->add_flag("--orbit", ec_orbit, "use ground-truth symmetry-orbit pairs");
    ec->add_flag("--mean-prior", ec_mean_prior, "transition the posterior mean, not a sample");
    ec->callback([&] {
        cmd_eval_complexity(ec_model, ec_dataset, ec_out, ec_pairs, ec_seed, ec_orbit,
                            ec_mean_prior);
    });

    // eval-symmetry
    auto* es = app.add_subcommand("eval-symmetry", "pairwise-KL symmetry exploitation");
    std::string es_model, es_dataset, es_out;
    int es_pairs = kEvalPairCount;
    uint64_t es_seed = 0;
    double es_threshold = kSymmetryThreshold, es_percentile = 0.0;
    es->add_option("--model", es_model, "checkpoint directory")->required();
    es->add_option("--dataset", es_dataset, "dataset directory")->required();
    es->add_option("--out", es_out, "output directory")->required();
    es->add_option("--pairs", es_pairs, "evaluation pair count");
    es->add_option("--seed", es_seed, "rng seed");
    es->add_option("--threshold", es_threshold, "fixed symmetry threshold");
    es->add_option("--calibrate-percentile", es_percentile,
                   "calibrate the threshold as this percentile of orbit-pair scores");
    es->callback([&] {
        cmd_eval_symmetry(es_model, es_dataset, es_out, es_pairs, es_seed, es_threshold,
                          es_percentile);
    });

    // pca
    auto* pc = app.add_subcommand("pca", "latent eigen-spectrum and 2-D projection");
    std::string p_model, p_dataset, p_object, p_out;
    int p_views = kEvalPairCount;
    uint64_t p_seed = 0;
    pc->add_option("--model", p_model, "checkpoint directory")->required();
    pc->add_option("--out", p_out, "output directory")->required();
    pc->add_option("--dataset", p_dataset, "dataset directory to encode");
    pc->add_option("--object", p_object, "render fresh views of this object instead");
    pc->add_option("--views", p_views, "fresh view count");
    pc->add_option("--seed", p_seed, "rng seed");
    pc->callback([&] { cmd_pca(p_model, p_dataset, p_object, p_views, p_seed, p_out); });

    // plan-grasp
    auto* pg = app.add_subcommand("plan-grasp", "rank viewpoint actions by expected free energy");
    std::string pg_model, pg_current, pg_goal, pg_mode = "neg-log-prob", pg_out;
    std::string pg_current_pose, pg_goal_pose, pg_object;
    int pg_candidates = 900, pg_topk = 10;
    uint64_t pg_seed = 0;
    double pg_radius = 0.0, pg_gamma = 1.0;
    bool pg_unit_variance = false;
    pg->add_option("--model", pg_model, "checkpoint directory")->required();
    pg->add_option("--current", pg_current, "current observation (PPM)")->required();
    pg->add_option("--goal", pg_goal, "goal observation (PPM)")->required();
    pg->add_option("--candidates", pg_candidates, "candidate action count");
    pg->add_option("--topk", pg_topk, "ranked actions to keep");
    pg->add_option("--mode", pg_mode, "neg-log-prob or risk-plus-ambiguity");
    pg->add_option("--seed", pg_seed, "rng seed");
    pg->add_option("--out", pg_out, "output directory")->required();
    pg->add_option("--current-pose", pg_current_pose, "azimuth,elevation,radius of the camera");
    pg->add_option("--goal-pose", pg_goal_pose, "azimuth,elevation,radius of the goal view");
    pg->add_option("--radius", pg_radius, "candidate sphere radius");
    pg->add_option("--gamma", pg_gamma, "softmax temperature (recorded)");
    pg->add_flag("--unit-variance", pg_unit_variance, "score against unit goal variances");
    pg->add_option("--object", pg_object, "object name for orbit-spread metrics");
    pg->callback([&] {
        cmd_plan_grasp(pg_model, pg_current, pg_goal, pg_candidates, pg_topk, pg_mode, pg_seed,
                       pg_out, pg_current_pose, pg_goal_pose, pg_radius, pg_gamma,
                       pg_unit_variance, pg_object);
    });

    // plot
    auto* pl = app.add_subcommand("plot", "render plots from stored JSON artifacts");
    std::string pl_sweep, pl_spectrum, pl_projection, pl_plan, pl_out;
    pl->add_option("--sweep", pl_sweep, "sweep.json");
    pl->add_option("--spectrum", pl_spectrum, "spectrum.json");
    pl->add_option("--projection", pl_projection, "projection.json");
    pl->add_option("--plan", pl_plan, "plan.json");
    pl->add_option("--out", pl_out, "output directory")->required();
    pl->callback([&] { cmd_plot(pl_sweep, pl_spectrum, pl_projection, pl_plan, pl_out); });

    // reproduce-figures
    auto* rf = app.add_subcommand("reproduce-figures",
                                  "sweep + figure set per object, fully seeded");
    std::string rf_objects = "cylinder", rf_betas = "0.25,1,10,100", rf_out;
    std::string rf_channels = "16,32,64,128";
    uint64_t rf_seed = 0;
    int rf_steps = 6000, rf_count = 2000, rf_resolution = 32, rf_latent = 16;
    int rf_trans_hidden = 128, rf_batch = 32;
    rf->add_option("--objects", rf_objects, "comma-separated object names");
    rf->add_option("--betas", rf_betas, "comma-separated ascending betas");
    rf->add_option("--seed", rf_seed, "rng seed");
    rf->add_option("--out", rf_out, "output directory")->required();
    rf->add_option("--steps", rf_steps, "training steps per beta");
    rf->add_option("--count", rf_count, "dataset size per object");
    rf->add_option("--resolution", rf_resolution, "image resolution");
    rf->add_option("--latent", rf_latent, "latent dimension");
    rf->add_option("--channels", rf_channels, "encoder channel progression");
    rf->add_option("--trans-hidden", rf_trans_hidden, "transition hidden width");
    rf->add_option("--batch", rf_batch, "batch size");
    rf->callback([&] {
        cmd_reproduce_figures(rf_objects, rf_betas, rf_seed, rf_out, rf_steps, rf_count,
                              rf_resolution, rf_latent, rf_channels, rf_trans_hidden, rf_batch);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "symlab: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
