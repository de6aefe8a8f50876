#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "symlab/dataset.hpp"
#include "symlab/model.hpp"

// Post-training evaluation: model complexity, symmetry exploitation,
// latent eigen-spectrum, collapse detection, reconstruction quality.

namespace symlab {

inline constexpr int kEvalPairCount = 900;
inline constexpr double kSymmetryThreshold = 300.0;
inline constexpr double kCollapseExploitationPct = 99.0;

// Evaluation pair: two observations plus the camera action between them.
struct EvalPair {
    Image a, b;
    Action action;
};

inline std::vector<EvalPair> eval_pairs_from_dataset(const Dataset& ds, int count,
                                                     uint64_t seed) {
    std::vector<EvalPair> out;
    out.reserve(static_cast<size_t>(count));
    Rng rng = Rng::stream(seed, "evalpairs");
    for (int i = 0; i < count; ++i) {
        const PairSample p = sample_pair(ds, rng);
        out.push_back({p.a->observation, p.b->observation, p.action});
    }
    return out;
}

// Pairs related by a ground-truth symmetry: the second view lies on the
// symmetry orbit of the first.
inline std::vector<EvalPair> orbit_eval_pairs(const ObjectSpec& obj, const Dataset& ds,
                                              int count, uint64_t seed) {
    std::vector<EvalPair> out;
    out.reserve(static_cast<size_t>(count));
    Rng rng = Rng::stream(seed, "orbitpairs");
    for (int i = 0; i < count; ++i) {
        const size_t idx = rng.uniform_index(ds.size());
        const DatasetRecord& rec = ds.records[idx];
        Pose g = Pose::identity();
        switch (obj.symmetry.kind) {
            case SymmetryDescriptor::Kind::ContinuousAxial:
                g = axial_rotation(obj.symmetry.axis, rng.uniform(0.0, kTwoPi));
                break;
            case SymmetryDescriptor::Kind::DiscreteCyclic: {
                const auto gens = obj.symmetry.generators();
                g = gens[rng.uniform_index(gens.size())];
                break;
            }
            case SymmetryDescriptor::Kind::Trivial:
                break;
        }
        const Pose vb = compose(g, rec.viewpoint);
        EvalPair p;
        p.a = rec.observation;
        p.b = render(obj, vb, ds.width, ds.height);
        p.action = relative_action(rec.viewpoint, vb);
        out.push_back(std::move(p));
    }
    return out;
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) throw Error("median of empty list");
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct ComplexityReport {
    std::string object;
    double beta = 0.0;
    int pair_count = 0;
    bool sampled_prior = true;
    std::vector<double> values;
    double median = 0.0;
};

inline void to_json(Json& j, const ComplexityReport& r) {
    j = Json{{"object", r.object},        {"beta", r.beta},
             {"pair_count", r.pair_count}, {"sampled_prior", r.sampled_prior},
             {"median", r.median},         {"values", r.values}};
}

// Per pair: prior = transition(latent from encode(o_a), action),
// posterior = encode(o_b), value = KL(posterior || prior).
// The latent fed to the transition is a reparameterized sample by default
// (matching the training path); sampled_prior=false uses the mean.
inline ComplexityReport evaluate_complexity(const Model<float>& m,
                                            const std::vector<EvalPair>& pairs,
                                            uint64_t seed = 0, bool sampled_prior = true) {
    if (pairs.size() < 2) throw Error("evaluate_complexity: need at least 2 pairs");
    ComplexityReport rep;
    rep.pair_count = static_cast<int>(pairs.size());
    rep.sampled_prior = sampled_prior;
    const int D = m.config().latent_dim;
    for (size_t i = 0; i < pairs.size(); ++i) {
        const GaussianBelief<float> ba = m.encode(pairs[i].a);
        std::vector<float> s;
        if (sampled_prior) {
            Rng nrng = Rng::stream(seed, "evalnoise", i);
            std::vector<float> noise(static_cast<size_t>(D));
            for (auto& v : noise) v = static_cast<float>(nrng.normal());
            s = reparameterized_sample(ba, noise);
        } else {
            s = ba.mean;
        }
        const GaussianBelief<float> prior = m.transition(s, pairs[i].action);
        const GaussianBelief<float> posterior = m.encode(pairs[i].b);
        rep.values.push_back(static_cast<double>(kl_divergence(posterior, prior)));
    }
    rep.median = median_of(rep.values);
    return rep;
}

// Latent-space symmetry score for one observation pair:
// KL between the two posterior encodings, a -> b direction.
inline double symmetry_score(const Model<float>& m, const Image& a, const Image& b) {
    return static_cast<double>(kl_divergence(m.encode(a), m.encode(b)));
}

struct SymmetryReport {
    std::string object;
    double beta = 0.0;
    int pair_count = 0;
    double threshold = kSymmetryThreshold;
    std::vector<double> scores_ab, scores_ba;
    double exploitation_pct = 0.0;
};

inline void to_json(Json& j, const SymmetryReport& r) {
    j = Json{{"object", r.object},
             {"beta", r.beta},
             {"pair_count", r.pair_count},
             {"threshold", r.threshold},
             {"exploitation_pct", r.exploitation_pct},
             {"scores_ab", r.scores_ab},
             {"scores_ba", r.scores_ba}};
}

// Percentage of pairs whose a->b score falls below the invariance threshold.
inline SymmetryReport symmetry_exploitation(const Model<float>& m,
                                            const std::vector<EvalPair>& pairs,
                                            double threshold = kSymmetryThreshold) {
    if (threshold <= 0.0) throw Error("symmetry_exploitation: threshold must be positive");
    if (pairs.empty()) throw Error("symmetry_exploitation: no pairs");
    SymmetryReport rep;
    rep.threshold = threshold;
    rep.pair_count = static_cast<int>(pairs.size());
    int below = 0;
    for (const auto& p : pairs) {
        const GaussianBelief<float> qa = m.encode(p.a);
        const GaussianBelief<float> qb = m.encode(p.b);
        const double ab = static_cast<double>(kl_divergence(qa, qb));
        rep.scores_ab.push_back(ab);
        rep.scores_ba.push_back(static_cast<double>(kl_divergence(qb, qa)));
        if (ab < threshold) ++below;
    }
    rep.exploitation_pct = 100.0 * below / static_cast<double>(pairs.size());
    return rep;
}

struct EigenSpectrum {
    std::vector<double> eigenvalues;      // descending
    std::vector<double> explained_ratio;  // sums to 1 when variance > 0
    int observation_count = 0;
    double total_variance = 0.0;
    bool rank_deficient = false;  // fewer observations than latent dims
};

inline void to_json(Json& j, const EigenSpectrum& s) {
    j = Json{{"eigenvalues", s.eigenvalues},
             {"explained_ratio", s.explained_ratio},
             {"observation_count", s.observation_count},
             {"total_variance", s.total_variance},
             {"rank_deficient", s.rank_deficient}};
}

inline void from_json(const Json& j, EigenSpectrum& s) {
    j.at("eigenvalues").get_to(s.eigenvalues);
    j.at("explained_ratio").get_to(s.explained_ratio);
    j.at("observation_count").get_to(s.observation_count);
    j.at("total_variance").get_to(s.total_variance);
    j.at("rank_deficient").get_to(s.rank_deficient);
}

inline Eigen::MatrixXd latent_means(const Model<float>& m, const std::vector<Image>& obs) {
    const int D = m.config().latent_dim;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(obs.size()), D);
    for (size_t i = 0; i < obs.size(); ++i) {
        const GaussianBelief<float> b = m.encode(obs[i]);
        for (int d = 0; d < D; ++d)
            X(static_cast<Eigen::Index>(i), d) = static_cast<double>(b.mean[static_cast<size_t>(d)]);
    }
    return X;
}

inline EigenSpectrum spectrum_of_matrix(Eigen::MatrixXd X) {
    const Eigen::Index n = X.rows(), D = X.cols();
    if (n < 2) throw Error("pca: need at least 2 observations");
    EigenSpectrum s;
    s.observation_count = static_cast<int>(n);
    s.rank_deficient = n < D;
    X.rowwise() -= X.colwise().mean();
    const Eigen::MatrixXd cov = X.transpose() * X / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues().reverse();
    double total = 0.0;
    for (Eigen::Index i = 0; i < D; ++i) {
        if (ev[i] < -1e-8) throw Error("pca: covariance produced a negative eigenvalue");
        ev[i] = std::max(ev[i], 0.0);
        total += ev[i];
        s.eigenvalues.push_back(ev[i]);
    }
    s.total_variance = total;
    for (Eigen::Index i = 0; i < D; ++i)
        s.explained_ratio.push_back(total > 0.0 ? ev[i] / total : 0.0);
    return s;
}

// Eigen-spectrum of the posterior means over a set of observations.
inline EigenSpectrum pca_spectrum(const Model<float>& m, const std::vector<Image>& obs) {
    return spectrum_of_matrix(latent_means(m, obs));
}

struct Projection2D {
    std::vector<std::array<double, 2>> points;
    std::vector<double> azimuth, elevation;  // labels, parallel to points
};

inline void to_json(Json& j, const Projection2D& p) {
    Json pts = Json::array();
    for (const auto& q : p.points) pts.push_back({q[0], q[1]});
    j = Json{{"points", pts}, {"azimuth", p.azimuth}, {"elevation", p.elevation}};
}

inline void from_json(const Json& j, Projection2D& p) {
    p.points.clear();
    for (const auto& q : j.at("points"))
        p.points.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
    j.at("azimuth").get_to(p.azimuth);
    j.at("elevation").get_to(p.elevation);
}

// Posterior means projected on the top-2 principal axes, labeled by viewpoint.
inline Projection2D project_2d(const Model<float>& m, const std::vector<Image>& obs,
                               const std::vector<SphericalCoord>& coords) {
    if (coords.size() != obs.size()) throw Error("project_2d: label count mismatch");
    Eigen::MatrixXd X = latent_means(m, obs);
    X.rowwise() -= X.colwise().mean();
    const Eigen::MatrixXd cov = X.transpose() * X / static_cast<double>(X.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");
    const Eigen::Index D = X.cols();
    Eigen::MatrixXd axes(D, 2);
    axes.col(0) = es.eigenvectors().col(D - 1);
    axes.col(1) = es.eigenvectors().col(D - 2);
    const Eigen::MatrixXd Y = X * axes;
    Projection2D out;
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
        out.points.push_back({Y(i, 0), Y(i, 1)});
        out.azimuth.push_back(coords[static_cast<size_t>(i)].azimuth);
        out.elevation.push_back(coords[static_cast<size_t>(i)].elevation);
    }
    return out;
}

struct CollapseReport {
    bool collapsed = false;
    double total_variance = 0.0;
    double eps_var = 0.0;
    double exploitation_pct = 0.0;
    std::string rationale;
};

inline void to_json(Json& j, const CollapseReport& r) {
    j = Json{{"collapsed", r.collapsed},
             {"total_variance", r.total_variance},
             {"eps_var", r.eps_var},
             {"exploitation_pct", r.exploitation_pct},
             {"rationale", r.rationale}};
}

// Collapse = the latent manifold has (numerically) no variance left while
// (nearly) all pairs count as symmetric.
inline CollapseReport detect_collapse(const EigenSpectrum& spectrum,
                                      const SymmetryReport& symmetry, double eps_var) {
    CollapseReport r;
    r.total_variance = spectrum.total_variance;
    r.eps_var = eps_var;
    r.exploitation_pct = symmetry.exploitation_pct;
    const bool var_dead = spectrum.total_variance < eps_var;
    const bool all_symmetric = symmetry.exploitation_pct >= kCollapseExploitationPct;
    r.collapsed = var_dead && all_symmetric;
    r.rationale = "total_variance=" + std::to_string(spectrum.total_variance) +
                  (var_dead ? " < " : " >= ") + "eps_var=" + std::to_string(eps_var) +
                  ", exploitation=" + std::to_string(symmetry.exploitation_pct) +
                  (all_symmetric ? " >= " : " < ") + std::to_string(kCollapseExploitationPct) + "%";
    return r;
}

// Fresh observations (not from any dataset) for held-out evaluation,
// viewpoints drawn from the same band as dataset generation.
inline std::vector<std::pair<SphericalCoord, Image>> held_out_views(const ObjectSpec& obj,
                                                                    int count, double radius,
                                                                    int width, int height,
                                                                    uint64_t seed,
                                                                    const char* tag = "heldout") {
    std::vector<std::pair<SphericalCoord, Image>> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        Rng rng = Rng::stream(seed, tag, static_cast<uint64_t>(i));
        SphericalCoord c;
        c.azimuth = rng.uniform(0.0, kTwoPi);
        c.elevation = rng.uniform(-kPi / 3.0, kPi / 3.0);
        c.radius = radius;
        out.emplace_back(c, render(obj, viewpoint_from_spherical(c), width, height));
    }
    return out;
}

// Mean per-pixel squared reconstruction error of decode(sample(encode(o)))
// over fresh held-out views.
inline double evaluate_reconstruction(const Model<float>& m, const ObjectSpec& obj,
                                      double radius, int count, uint64_t seed) {
    const auto views = held_out_views(obj, count, radius, m.config().width,
                                      m.config().height, seed);
    const int D = m.config().latent_dim;
    double total = 0.0;
    for (size_t i = 0; i < views.size(); ++i) {
        const Image& o = views[i].second;
        const GaussianBelief<float> b = m.encode(o);
        Rng nrng = Rng::stream(seed, "heldout-noise", i);
        std::vector<float> noise(static_cast<size_t>(D));
        for (auto& v : noise) v = static_cast<float>(nrng.normal());
        const Image rec = m.decode(reparameterized_sample(b, noise));
        total += static_cast<double>(mean_squared_error(rec, o));
    }
    return total / static_cast<double>(views.size());
}

}  // namespace symlab
