#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "symlab/dataset.hpp"
#include "symlab/model.hpp"

// Pair-based free-energy training loop and its artifacts.

namespace symlab {

struct TrainConfig {
    double beta = 1.0;
    int steps = 20000;
    int batch = 32;
    double learning_rate = 1e-3;
    uint64_t seed = 0;
    int eval_interval = 100;
    double clip_norm = 10.0;
    std::string dataset_dir;
    std::string out_dir;  // empty: keep results in memory only
    ModelConfig model;

    void validate() const {
        if (beta < 0.01 || beta > 1000.0) throw Error("TrainConfig: beta outside [0.01, 1000]");
        if (steps < 1) throw Error("TrainConfig: steps must be positive");
        if (batch < 1) throw Error("TrainConfig: batch must be positive");
        if (learning_rate <= 0.0) throw Error("TrainConfig: learning rate must be positive");
        if (eval_interval < 1) throw Error("TrainConfig: eval interval must be positive");
        if (clip_norm <= 0.0) throw Error("TrainConfig: clip norm must be positive");
        model.validate();
    }
};

inline void to_json(Json& j, const TrainConfig& c) {
    j = Json{{"beta", c.beta},
             {"steps", c.steps},
             {"batch", c.batch},
             {"learning_rate", c.learning_rate},
             {"seed", c.seed},
             {"eval_interval", c.eval_interval},
             {"clip_norm", c.clip_norm},
             {"dataset_dir", c.dataset_dir},
             {"out_dir", c.out_dir},
             {"model", c.model}};
}

inline void from_json(const Json& j, TrainConfig& c) {
    j.at("beta").get_to(c.beta);
    j.at("steps").get_to(c.steps);
    j.at("batch").get_to(c.batch);
    j.at("learning_rate").get_to(c.learning_rate);
    j.at("seed").get_to(c.seed);
    j.at("eval_interval").get_to(c.eval_interval);
    if (j.contains("clip_norm")) j.at("clip_norm").get_to(c.clip_norm);
    if (j.contains("dataset_dir")) j.at("dataset_dir").get_to(c.dataset_dir);
    if (j.contains("out_dir")) j.at("out_dir").get_to(c.out_dir);
    if (j.contains("model")) j.at("model").get_to(c.model);
}

struct CurvePoint {
    int step = 0;
    double loss = 0.0, accuracy = 0.0, complexity = 0.0;
};

struct TrainingCurve {
    std::vector<CurvePoint> points;
};

inline void save_curve_csv(const TrainingCurve& curve, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    f << "step,loss,accuracy,complexity\n";
    char buf[160];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\n", p.step, p.loss, p.accuracy,
                      p.complexity);
        f << buf;
    }
}

struct TrainResult {
    Model<float> model;
    TrainingCurve curve;
};

// Assemble a training batch at a given step, fully determined by the seed.
inline PairBatch<float> sample_pair_batch(const Dataset& ds, int batch, uint64_t seed,
                                          uint64_t step) {
    Rng rng = Rng::stream(seed, "pair", step);
    PairBatch<float> pb;
    pb.batch = batch;
    pb.actions.assign(static_cast<size_t>(9) * batch, 0.0f);
    for (int b = 0; b < batch; ++b) {
        const PairSample p = sample_pair(ds, rng);
        append_observation_cr(pb.o_prev, p.a->observation, batch, b);
        append_observation_cr(pb.o_next, p.b->observation, batch, b);
        const Vec9 a9 = p.action.encode();
        for (int r = 0; r < 9; ++r)
            pb.actions[static_cast<size_t>(r) * batch + b] = static_cast<float>(a9[r]);
    }
    return pb;
}

inline TrainResult train_in_memory(const Dataset& ds, const TrainConfig& cfg) {
    cfg.validate();
    if (ds.width != cfg.model.width || ds.height != cfg.model.height)
        throw Error("train: dataset resolution does not match the model");

    TrainResult res{Model<float>(cfg.model), {}};
    Model<float>& m = res.model;
    m.init(cfg.seed);
    auto params = m.params();
    nn::Adam<float> opt;
    opt.lr = cfg.learning_rate;
    opt.attach(params);

    const int D = cfg.model.latent_dim;
    const size_t n = static_cast<size_t>(D) * cfg.batch;
    for (int step = 1; step <= cfg.steps; ++step) {
        const PairBatch<float> pb =
            sample_pair_batch(ds, cfg.batch, cfg.seed, static_cast<uint64_t>(step));
        Rng nrng = Rng::stream(cfg.seed, "noise", static_cast<uint64_t>(step));
        std::vector<float> n1(n), n2(n);
        for (auto& v : n1) v = static_cast<float>(nrng.normal());
        for (auto& v : n2) v = static_cast<float>(nrng.normal());

        m.zero_grad();
        const LossTerms t = m.free_energy(pb, cfg.beta, n1, n2, true);
        if (!std::isfinite(t.loss))
            throw TrainAbortError("training aborted at step " + std::to_string(step) +
                                  ": loss=" + std::to_string(t.loss) +
                                  " accuracy=" + std::to_string(t.accuracy) +
                                  " complexity=" + std::to_string(t.complexity));
        nn::clip_global_norm(params, cfg.clip_norm);
        opt.step(params);

        if (step == 1 || step == cfg.steps || step % cfg.eval_interval == 0)
            res.curve.points.push_back({step, t.loss, t.accuracy, t.complexity});
    }
    return res;
}

// Disk-facing variant: loads the dataset, trains, writes checkpoint + curve.
inline TrainResult train(const TrainConfig& cfg) {
    cfg.validate();
    if (cfg.dataset_dir.empty()) throw Error("train: dataset path not set");
    const Dataset ds = load_dataset(cfg.dataset_dir);
    TrainResult res = train_in_memory(ds, cfg);
    if (!cfg.out_dir.empty()) {
        const std::filesystem::path out(cfg.out_dir);
        std::filesystem::create_directories(out);
        Json extra;
        extra["beta"] = cfg.beta;
        extra["seed"] = cfg.seed;
        extra["object"] = ds.object.name;
        extra["train_config"] = cfg;
        save_checkpoint(res.model, out / "checkpoint", extra);
        save_curve_csv(res.curve, out / "curve.csv");
    }
    return res;
}

}  // namespace symlab
