#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "symlab/analysis.hpp"
#include "symlab/model.hpp"
#include "symlab/objects.hpp"

// Expected-free-energy action selection over Monte-Carlo candidate
// viewpoints, plus symmetry-orbit spread metrics for the selected poses.

namespace symlab {

struct PlannerConfig {
    int candidates = 900;
    int topk = 10;
    double gamma = 1.0;
    enum class Mode { NegLogProb, RiskPlusAmbiguity };
    Mode mode = Mode::NegLogProb;
    bool unit_variance = false;  // score against unit goal variances instead
    uint64_t seed = 0;

    void validate() const {
        if (topk < 1 || candidates < topk)
            throw Error("PlannerConfig: need candidates >= topk >= 1");
        if (gamma < 0.0) throw Error("PlannerConfig: gamma must be non-negative");
    }
};

inline const char* planner_mode_name(PlannerConfig::Mode m) {
    return m == PlannerConfig::Mode::NegLogProb ? "neg-log-prob" : "risk-plus-ambiguity";
}

inline PlannerConfig::Mode planner_mode_from_name(const std::string& s) {
    if (s == "neg-log-prob") return PlannerConfig::Mode::NegLogProb;
    if (s == "risk-plus-ambiguity") return PlannerConfig::Mode::RiskPlusAmbiguity;
    throw Error("unknown planner mode: " + s);
}

struct Candidate {
    Action action;
    Pose target;
    double score = 0.0;
};

struct PlanResult {
    std::vector<Candidate> ranked;  // ascending score, length topk
    Pose current = Pose::identity();
    bool has_goal_pose = false;
    Pose goal_pose = Pose::identity();
    PlannerConfig::Mode mode = PlannerConfig::Mode::NegLogProb;
};

// Candidate viewpoints uniform over the sampling band of the sphere at a
// fixed radius; actions move the camera from `current` to each target.
inline std::vector<Candidate> sample_candidate_actions(const Pose& current, int n, double radius,
                                                       uint64_t seed) {
    if (n < 1) throw Error("sample_candidate_actions: need at least one candidate");
    std::vector<Candidate> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::stream(seed, "cand", static_cast<uint64_t>(i));
        SphericalCoord c;
        c.azimuth = rng.uniform(0.0, kTwoPi);
        c.elevation = rng.uniform(-kPi / 3.0, kPi / 3.0);
        c.radius = radius;
        Candidate cd;
        cd.target = viewpoint_from_spherical(c);
        cd.action = relative_action(current, cd.target);
        out.push_back(cd);
    }
    return out;
}

// -log N(x; mean, diag exp(logvar)) summed over dimensions.
template <typename S>
inline double neg_log_gaussian(const std::vector<S>& x, const GaussianBelief<S>& b) {
    if (x.size() != b.mean.size()) throw ModelIoError("neg_log_gaussian: dimension mismatch");
    double acc = 0.0;
    for (size_t d = 0; d < x.size(); ++d) {
        const double lv = static_cast<double>(b.logvar[d]);
        const double diff = static_cast<double>(x[d]) - static_cast<double>(b.mean[d]);
        acc += 0.5 * (diff * diff * std::exp(-lv) + lv + std::log(2.0 * kPi));
    }
    return acc;
}

// Ambiguity is constant under the fixed-variance likelihood implied by a
// squared-error accuracy term: per-pixel entropy of a unit-variance Gaussian.
inline double ambiguity_constant(const ModelConfig& cfg) {
    const double npix = 3.0 * cfg.width * cfg.height;
    return 0.5 * npix * (std::log(2.0 * kPi) + 1.0);
}

// Score one action: transition the current belief's mean by the action, then
// compare the predicted belief against the goal posterior. Lower is better.
inline double efe_score(const Model<float>& m, const GaussianBelief<float>& current,
                        const Action& action, const GaussianBelief<float>& goal,
                        PlannerConfig::Mode mode, bool unit_variance = false) {
    const GaussianBelief<float> trans = m.transition(current.mean, action);
    GaussianBelief<float> target = goal;
    if (unit_variance) std::fill(target.logvar.begin(), target.logvar.end(), 0.0f);
    if (mode == PlannerConfig::Mode::NegLogProb)
        return neg_log_gaussian(trans.mean, target);
    return static_cast<double>(kl_divergence(trans, target)) + ambiguity_constant(m.config());
}

inline PlanResult plan(const Model<float>& m, const Image& o_current, const Image& o_goal,
                       const Pose& current, double radius, const PlannerConfig& cfg,
                       const Pose* goal_pose = nullptr) {
    cfg.validate();
    const GaussianBelief<float> b_cur = m.encode(o_current);
    const GaussianBelief<float> b_goal = m.encode(o_goal);
    std::vector<Candidate> cands = sample_candidate_actions(current, cfg.candidates, radius,
                                                            cfg.seed);
    for (auto& c : cands)
        c.score = efe_score(m, b_cur, c.action, b_goal, cfg.mode, cfg.unit_variance);

    // Selection, then verification against the exhaustively sorted list.
    std::vector<size_t> order(cands.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto by_score = [&](size_t a, size_t b) {
        return cands[a].score != cands[b].score ? cands[a].score < cands[b].score : a < b;
    };
    std::vector<size_t> selected = order;
    std::nth_element(selected.begin(), selected.begin() + (cfg.topk - 1), selected.end(),
                     by_score);
    selected.resize(static_cast<size_t>(cfg.topk));
    std::sort(selected.begin(), selected.end(), by_score);

    std::sort(order.begin(), order.end(), by_score);
    for (int k = 0; k < cfg.topk; ++k)
        if (selected[static_cast<size_t>(k)] != order[static_cast<size_t>(k)])
            throw Error("plan: top-k selection disagrees with the full sort");

    PlanResult res;
    res.mode = cfg.mode;
    res.current = current;
    if (goal_pose) {
        res.has_goal_pose = true;
        res.goal_pose = *goal_pose;
    }
    for (int k = 0; k < cfg.topk; ++k) res.ranked.push_back(cands[selected[static_cast<size_t>(k)]]);
    return res;
}

// Draw an index from softmax(-gamma * scores). gamma = 0 is uniform.
inline size_t sample_action_softmax(const std::vector<double>& scores, double gamma, Rng& rng) {
    if (scores.empty()) throw Error("sample_action_softmax: no scores");
    if (gamma < 0.0) throw Error("sample_action_softmax: gamma must be non-negative");
    const double smin = *std::min_element(scores.begin(), scores.end());
    std::vector<double> w(scores.size());
    double total = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw Error("sample_action_softmax: non-finite score");
        w[i] = std::exp(-gamma * (scores[i] - smin));
        total += w[i];
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        if (u < acc) return i;
    }
    return w.size() - 1;
}

// Geodesic angle from pose P to the nearest point of the goal's symmetry
// orbit (rotation part only; translations are tied to rotation at fixed
// radius).
inline double orbit_distance(const Pose& p, const Pose& goal, const SymmetryDescriptor& sym) {
    switch (sym.kind) {
        case SymmetryDescriptor::Kind::ContinuousAxial: {
            // Minimize angle(P^T Rz(theta) R_goal) in closed form via the
            // trace of Rz(theta) * M with M = R_goal * P^T.
            const Mat3 M = goal.rotation * p.rotation.transpose();
            const double a = M(0, 0) + M(1, 1);
            const double b = M(0, 1) - M(1, 0);
            const double tr_max = std::sqrt(a * a + b * b) + M(2, 2);
            return std::acos(std::clamp((tr_max - 1.0) / 2.0, -1.0, 1.0));
        }
        case SymmetryDescriptor::Kind::DiscreteCyclic: {
            double best = kPi;
            for (const Pose& g : sym.generators()) {
                const Pose orbit_pose = compose(g, goal);
                best = std::min(best, pose_angular_distance(p, orbit_pose));
            }
            return best;
        }
        case SymmetryDescriptor::Kind::Trivial:
            return pose_angular_distance(p, goal);
    }
    return pose_angular_distance(p, goal);
}

struct SpreadMetrics {
    double mean_orbit_distance = 0.0;
    // 1 - mean resultant length of selected-pose azimuths about the symmetry
    // axis: 0 when all coincide, near 1 for uniform orbit coverage.
    double axial_spread = 0.0;
};

inline void to_json(Json& j, const SpreadMetrics& s) {
    j = Json{{"mean_orbit_distance", s.mean_orbit_distance}, {"axial_spread", s.axial_spread}};
}

inline SpreadMetrics orbit_spread(const PlanResult& result, const ObjectSpec& obj,
                                  const Pose& goal) {
    if (result.ranked.empty()) throw Error("orbit_spread: empty plan");
    SpreadMetrics out;
    double cx = 0.0, sx = 0.0;
    for (const Candidate& c : result.ranked) {
        out.mean_orbit_distance += orbit_distance(c.target, goal, obj.symmetry);
        const SphericalCoord sc = spherical_from_position(c.target.translation, Vec3::Zero());
        cx += std::cos(sc.azimuth);
        sx += std::sin(sc.azimuth);
    }
    const double n = static_cast<double>(result.ranked.size());
    out.mean_orbit_distance /= n;
    out.axial_spread = 1.0 - std::sqrt(cx * cx + sx * sx) / n;
    return out;
}

inline void to_json(Json& j, const PlanResult& r) {
    Json cands = Json::array();
    for (const auto& c : r.ranked) {
        Json e;
        e["score"] = c.score;
        e["target_pose"] = to_json(c.target);
        e["action_translation"] = {c.action.translation.x(), c.action.translation.y(),
                                   c.action.translation.z()};
        Json r6 = Json::array();
        for (int i = 0; i < 6; ++i) r6.push_back(c.action.rotation6d[i]);
        e["action_rotation6d"] = r6;
        cands.push_back(e);
    }
    j = Json{{"mode", planner_mode_name(r.mode)},
             {"current_pose", to_json(r.current)},
             {"ranked", cands}};
    if (r.has_goal_pose) j["goal_pose"] = to_json(r.goal_pose);
}

inline void from_json(const Json& j, PlanResult& r) {
    r.mode = planner_mode_from_name(j.at("mode").get<std::string>());
    r.current = pose_from_json(j.at("current_pose"));
    r.has_goal_pose = j.contains("goal_pose");
    if (r.has_goal_pose) r.goal_pose = pose_from_json(j.at("goal_pose"));
    r.ranked.clear();
    for (const auto& e : j.at("ranked")) {
        Candidate c;
        c.score = e.at("score").get<double>();
        c.target = pose_from_json(e.at("target_pose"));
        for (int i = 0; i < 3; ++i) c.action.translation[i] = e.at("action_translation").at(i);
        for (int i = 0; i < 6; ++i) c.action.rotation6d[i] = e.at("action_rotation6d").at(i);
        r.ranked.push_back(c);
    }
}

}  // namespace symlab
