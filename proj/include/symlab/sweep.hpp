#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "symlab/analysis.hpp"
#include "symlab/train.hpp"

// Beta-sweep driver: trains one model per beta over a shared dataset and
// assembles per-model latent metrics into a single report.

namespace symlab {

inline constexpr int kSweepReconViews = 64;

struct SweepRow {
    double beta = 0.0;
    bool failed = false;
    std::string error;
    double median_complexity = std::numeric_limits<double>::quiet_NaN();
    double symmetry_pct = std::numeric_limits<double>::quiet_NaN();
    double top2_variance_ratio = std::numeric_limits<double>::quiet_NaN();
    double recon_mse = std::numeric_limits<double>::quiet_NaN();
    double total_variance = std::numeric_limits<double>::quiet_NaN();
    bool collapsed = false;
    std::string collapse_rationale;
    std::string checkpoint_dir;
};

inline void to_json(Json& j, const SweepRow& r) {
    j = Json{{"beta", r.beta},
             {"failed", r.failed},
             {"error", r.error},
             {"median_complexity", r.median_complexity},
             {"symmetry_pct", r.symmetry_pct},
             {"top2_variance_ratio", r.top2_variance_ratio},
             {"recon_mse", r.recon_mse},
             {"total_variance", r.total_variance},
             {"collapsed", r.collapsed},
             {"collapse_rationale", r.collapse_rationale},
             {"checkpoint_dir", r.checkpoint_dir}};
}

// NaN metrics (failed rows) serialize as JSON null.
inline double number_or_nan(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline void from_json(const Json& j, SweepRow& r) {
    j.at("beta").get_to(r.beta);
    j.at("failed").get_to(r.failed);
    j.at("error").get_to(r.error);
    r.median_complexity = number_or_nan(j.at("median_complexity"));
    r.symmetry_pct = number_or_nan(j.at("symmetry_pct"));
    r.top2_variance_ratio = number_or_nan(j.at("top2_variance_ratio"));
    r.recon_mse = number_or_nan(j.at("recon_mse"));
    r.total_variance = number_or_nan(j.at("total_variance"));
    j.at("collapsed").get_to(r.collapsed);
    j.at("collapse_rationale").get_to(r.collapse_rationale);
    j.at("checkpoint_dir").get_to(r.checkpoint_dir);
}

struct SweepReport {
    std::string object;
    uint64_t seed = 0;
    double threshold = kSymmetryThreshold;
    int pair_count = kEvalPairCount;
    double eps_var = 0.0;
    std::vector<SweepRow> rows;
};

inline void to_json(Json& j, const SweepReport& r) {
    j = Json{{"object", r.object},
             {"seed", r.seed},
             {"threshold", r.threshold},
             {"pair_count", r.pair_count},
             {"eps_var", r.eps_var},
             {"rows", r.rows}};
}

inline void from_json(const Json& j, SweepReport& r) {
    j.at("object").get_to(r.object);
    j.at("seed").get_to(r.seed);
    j.at("threshold").get_to(r.threshold);
    j.at("pair_count").get_to(r.pair_count);
    j.at("eps_var").get_to(r.eps_var);
    j.at("rows").get_to(r.rows);
}

inline void save_sweep_csv(const SweepReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("save_sweep_csv: cannot open " + path.string());
    out << "beta,median_complexity,symmetry_pct,top2_variance_ratio,recon_mse\n";
    char buf[192];
    for (const SweepRow& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g\n", r.beta,
                      r.median_complexity, r.symmetry_pct, r.top2_variance_ratio, r.recon_mse);
        out << buf;
    }
    if (!out.good()) throw Error("save_sweep_csv: write failed for " + path.string());
}

// One model per beta, trained on the shared dataset; evaluation pairs and
// held-out views are drawn once from base.seed so rows stay comparable. A
// failed training is recorded in its row and the sweep moves on. eps_var is
// pinned to 1e-4 of the total latent variance at the lowest successful beta.
inline SweepReport beta_sweep(const ObjectSpec& obj, const std::vector<double>& betas,
                              const TrainConfig& base, const Dataset& ds,
                              const std::filesystem::path& out_dir = {}) {
    if (betas.size() < 2) throw Error("beta_sweep: need at least 2 beta values");
    for (size_t i = 1; i < betas.size(); ++i)
        if (betas[i] <= betas[i - 1]) throw Error("beta_sweep: betas must be ascending");

    SweepReport report;
    report.object = obj.name;
    report.seed = base.seed;

    const auto pairs = eval_pairs_from_dataset(ds, kEvalPairCount, base.seed);
    std::vector<Image> pca_views;
    for (const auto& [coord, img] :
         held_out_views(obj, kEvalPairCount, ds.radius, base.model.width, base.model.height,
                        base.seed, "pcaviews"))
        pca_views.push_back(img);

    std::vector<EigenSpectrum> spectra(betas.size());
    std::vector<SymmetryReport> symmetries(betas.size());
    for (size_t i = 0; i < betas.size(); ++i) {
        SweepRow row;
        row.beta = betas[i];
        try {
            TrainConfig cfg = base;
            cfg.beta = betas[i];
            cfg.dataset_dir.clear();
            cfg.out_dir.clear();
            const TrainResult res = train_in_memory(ds, cfg);

            ComplexityReport comp = evaluate_complexity(res.model, pairs, base.seed);
            comp.object = obj.name;
            comp.beta = betas[i];
            row.median_complexity = comp.median;

            SymmetryReport sym = symmetry_exploitation(res.model, pairs, report.threshold);
            sym.object = obj.name;
            sym.beta = betas[i];
            row.symmetry_pct = sym.exploitation_pct;
            symmetries[i] = sym;

            const EigenSpectrum spec = pca_spectrum(res.model, pca_views);
            spectra[i] = spec;
            row.total_variance = spec.total_variance;
            if (spec.eigenvalues.size() >= 2 && spec.total_variance > 0.0)
                row.top2_variance_ratio = spec.explained_ratio[0] + spec.explained_ratio[1];

            row.recon_mse = evaluate_reconstruction(res.model, obj, ds.radius, kSweepReconViews,
                                                    base.seed);

            if (!out_dir.empty()) {
                char tag[64];
                std::snprintf(tag, sizeof tag, "beta_%.9g", betas[i]);
                const std::filesystem::path dir = out_dir / tag;
                std::filesystem::create_directories(dir);
                Json extra;
                extra["object"] = obj.name;
                extra["beta"] = betas[i];
                extra["seed"] = cfg.seed;
                extra["train_config"] = cfg;
                save_checkpoint(res.model, dir, extra);
                save_curve_csv(res.curve, dir / "curve.csv");
                row.checkpoint_dir = tag;
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }

    for (const SweepRow& r : report.rows)
        if (!r.failed) {
            report.eps_var = 1e-4 * r.total_variance;
            break;
        }
    for (size_t i = 0; i < report.rows.size(); ++i) {
        SweepRow& row = report.rows[i];
        if (row.failed) continue;
        const CollapseReport c = detect_collapse(spectra[i], symmetries[i], report.eps_var);
        row.collapsed = c.collapsed;
        row.collapse_rationale = c.rationale;
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const Json j = report;
        std::ofstream out(out_dir / "sweep.json");
        out << j.dump(2) << "\n";
        if (!out.good()) throw Error("beta_sweep: cannot write sweep.json");
        save_sweep_csv(report, out_dir / "sweep.csv");
    }
    return report;
}

struct TrendCheck {
    bool ok = false;
    int complexity_inversions = 0;
    int exploitation_inversions = 0;
    std::string detail;
};

// Checks the central trend over ascending-beta rows up to and including the
// first collapsed row: median complexity non-increasing, exploitation
// non-decreasing. Each series tolerates at most one adjacent inversion, and
// only if it stays within rel_slack of the neighboring values.
inline TrendCheck sweep_trend(const SweepReport& report, double rel_slack = 0.10) {
    std::vector<const SweepRow*> rows;
    for (const SweepRow& r : report.rows) {
        if (r.failed) continue;
        rows.push_back(&r);
        if (r.collapsed) break;
    }
    TrendCheck t;
    if (rows.size() < 2) {
        t.detail = "fewer than 2 usable rows";
        return t;
    }
    bool hard_fail = false;
    std::string detail;
    const auto scan = [&](auto value, bool increasing, int& inversions, const char* label) {
        for (size_t i = 1; i < rows.size(); ++i) {
            const double a = value(*rows[i - 1]);
            const double b = value(*rows[i]);
            const double viol = increasing ? a - b : b - a;
            if (viol <= 0.0) continue;
            const double scale = std::max({std::fabs(a), std::fabs(b), 1e-12});
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s inversion at beta %.9g -> %.9g (%.9g -> %.9g); ",
                          label, rows[i - 1]->beta, rows[i]->beta, a, b);
            detail += buf;
            if (viol <= rel_slack * scale)
                ++inversions;
            else
                hard_fail = true;
        }
    };
    scan([](const SweepRow& r) { return r.median_complexity; }, false,
         t.complexity_inversions, "complexity");
    scan([](const SweepRow& r) { return r.symmetry_pct; }, true,
         t.exploitation_inversions, "exploitation");
    t.ok = !hard_fail && t.complexity_inversions <= 1 && t.exploitation_inversions <= 1;
    t.detail = detail.empty() ? "monotone" : detail;
    return t;
}

}  // namespace symlab
