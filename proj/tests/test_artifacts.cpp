#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "symlab/manifest.hpp"
#include "symlab/plot.hpp"

using namespace symlab;
namespace fs = std::filesystem;

TEST_CASE("fnv1a64 matches reference vectors") {
    CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar", 6) == 0x85944171f73967e8ull);
    CHECK(hash_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
}

TEST_CASE("hash_file and hash_path agree and react to content changes") {
    const fs::path root = fs::temp_directory_path() / "symlab_manifest";
    fs::remove_all(root);
    fs::create_directories(root / "sub");
    std::ofstream(root / "a.txt") << "alpha";
    std::ofstream(root / "sub" / "b.txt") << "beta";

    CHECK(hash_file(root / "a.txt") == fnv1a64("alpha", 5));
    const uint64_t h1 = hash_path(root);
    const uint64_t again = hash_path(root);
    CHECK(h1 == again);

    std::ofstream(root / "a.txt") << "gamma";
    CHECK(hash_path(root) != h1);
    CHECK_THROWS_AS(hash_path(root / "missing"), Error);
    fs::remove_all(root);
}

TEST_CASE("manifest round-trips through atomic write") {
    const fs::path root = fs::temp_directory_path() / "symlab_manifest_io";
    fs::remove_all(root);
    fs::create_directories(root);
    std::ofstream(root / "input.csv") << "1,2,3\n";

    ExperimentManifest m;
    m.command = "sweep";
    m.argv = {"sweep", "--object", "cylinder"};
    m.config = Json{{"beta", 0.25}};
    m.seed = 42;
    m.duration_seconds = 1.5;
    m.outputs = {"sweep.csv"};
    m.add_input("dataset", root / "input.csv");

    write_manifest_atomic(m, root / "manifest.json");
    CHECK(fs::exists(root / "manifest.json"));
    CHECK(!fs::exists(root / "manifest.json.tmp"));

    const ExperimentManifest r = read_manifest(root / "manifest.json");
    CHECK(r.tool_version == kVersion);
    CHECK(r.command == "sweep");
    CHECK(r.argv == m.argv);
    CHECK(r.seed == 42);
    CHECK(r.outputs == m.outputs);
    CHECK(r.config.at("beta") == 0.25);
    CHECK(r.input_hashes.at("dataset").at("fnv1a64") ==
          hash_hex(hash_file(root / "input.csv")));
    fs::remove_all(root);
}

namespace {

bool pixels_in_range(const Image& img) {
    for (const float v : img.pixels)
        if (!(v >= 0.0f && v <= 1.0f)) return false;
    return true;
}

}  // namespace

TEST_CASE("metric-vs-beta plot is deterministic and input-sensitive") {
    const std::vector<double> betas = {0.25, 1.0, 10.0, 100.0};
    const std::vector<double> vals = {120.0, 80.0, 30.0, 5.0};
    const Image a = plot::plot_metric_vs_beta(betas, vals);
    const Image b = plot::plot_metric_vs_beta(betas, vals);
    CHECK(a.width == 640);
    CHECK(a.height == 480);
    CHECK(max_abs_diff(a, b) == 0.0f);
    CHECK(pixels_in_range(a));

    const Image c = plot::plot_metric_vs_beta(betas, {120.0, 90.0, 30.0, 5.0});
    CHECK(max_abs_diff(a, c) > 0.0f);

    // A NaN row (failed training) is skipped, not fatal.
    const Image d = plot::plot_metric_vs_beta(
        betas, {120.0, std::numeric_limits<double>::quiet_NaN(), 30.0, 5.0});
    CHECK(pixels_in_range(d));

    CHECK_THROWS_AS(plot::plot_metric_vs_beta({1.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(plot::plot_metric_vs_beta(
                        {1.0}, {std::numeric_limits<double>::quiet_NaN()}),
                    Error);
    CHECK_THROWS_AS(plot::plot_metric_vs_beta({-1.0, 1.0}, {2.0, 3.0}), Error);
}

TEST_CASE("eigenvalue bar chart renders a spectrum") {
    EigenSpectrum s;
    s.eigenvalues = {5.0, 2.0, 0.5, 0.0};
    s.explained_ratio = {5.0 / 7.5, 2.0 / 7.5, 0.5 / 7.5, 0.0};
    s.total_variance = 7.5;
    const Image img = plot::plot_eigen_spectrum(s);
    CHECK(img.width == 640);
    CHECK(pixels_in_range(img));
    CHECK_THROWS_AS(plot::plot_eigen_spectrum(EigenSpectrum{}), Error);
}

TEST_CASE("projection scatter colors by azimuth") {
    Projection2D p;
    for (int i = 0; i < 40; ++i) {
        const double a = kTwoPi * i / 40.0;
        p.points.push_back({std::cos(a), std::sin(a)});
        p.azimuth.push_back(a);
        p.elevation.push_back(0.1);
    }
    const Image img = plot::plot_projection(p);
    CHECK(pixels_in_range(img));
    const Image img2 = plot::plot_projection(p);
    CHECK(max_abs_diff(img, img2) == 0.0f);
    CHECK_THROWS_AS(plot::plot_projection(Projection2D{}), Error);
}

TEST_CASE("plan sphere chart marks current, candidates and goal") {
    PlanResult r;
    r.current = viewpoint_from_spherical({0.0, 0.0, 2.5});
    for (int i = 0; i < 10; ++i) {
        Candidate c;
        c.target = viewpoint_from_spherical({kTwoPi * i / 10.0, 0.4, 2.5});
        r.ranked.push_back(c);
    }
    const Image without = plot::plot_plan_sphere(r);
    r.has_goal_pose = true;
    r.goal_pose = viewpoint_from_spherical({2.0, -0.3, 2.5});
    const Image with = plot::plot_plan_sphere(r);
    CHECK(pixels_in_range(with));
    CHECK(max_abs_diff(without, with) > 0.0f);
    CHECK_THROWS_AS(plot::plot_plan_sphere(PlanResult{}), Error);
}

TEST_CASE("glyph text rasterizes digits") {
    Image img(64, 16);
    plot::fill(img, plot::kWhite);
    const Image blank = img;
    plot::draw_text(img, 2, 2, "-12.5e+3", plot::kBlack);
    CHECK(max_abs_diff(img, blank) > 0.5f);
}
