// Command-line front end: configuration ingestion, experiment orchestration,
// report emission.  Exit codes: 0 success, 2 invalid config, 3 numerical
// failure.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qc/boundary.hpp"
#include "qc/family.hpp"
#include "qc/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

qc::ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return qc::ExperimentConfig{};
    std::ifstream in(path);
    if (!in) throw qc::InvalidArgument("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return qc::ExperimentConfig::from_json_text(text, path);
}

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw qc::NumericalError("report: cannot write " + p.string());
}

std::vector<double> default_tangent(int k) {
    if (k == 0) return {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    if (k == 1) {
        double n = std::sqrt(1.0 + 0.25 * 0.25 + 0.75 * 0.75);
        return {1.0 / n, -0.25 / n, -0.75 / n};
    }
    // sum-free, pairwise distinct, nonzero components for any k
    std::vector<double> v(k + 2);
    double mean = 0;
    for (int i = 0; i < k + 2; ++i) {
        v[i] = std::pow(1.35, i) + 0.1;
        mean += v[i];
    }
    mean /= (k + 2);
    double norm = 0;
    for (double& x : v) {
        x -= mean;
        norm += x * x;
    }
    for (double& x : v) x /= std::sqrt(norm);
    return v;
}

std::vector<double> dyadic(int lo, int hi) {  // 2^-lo .. 2^-hi
    std::vector<double> v;
    for (int j = lo; j <= hi; ++j) v.push_back(std::pow(2.0, -j));
    return v;
}

struct Runner {
    qc::ExperimentConfig cfg;
    fs::path out;

    json prov() const { return json::parse(qc::provenance_json(cfg)); }

    std::shared_ptr<qc::FuchsianGroup> group(double kappa0) const {
        return std::make_shared<qc::FuchsianGroup>(
            qc::FuchsianGroup::standard_genus2(kappa0));
    }

    std::vector<double> metric_t() const {
        if (!cfg.metric.t.empty()) return cfg.metric.t;
        return std::vector<double>(cfg.metric.k + 2, 0.0);
    }

    int run_entropy() {
        auto g = group(cfg.group.kappa0);
        qc::ConformalMetric m = qc::ConformalMetric::standard(g, cfg.metric.k, metric_t());
        qc::OrbitCensus census =
            qc::orbit_census(m, cfg.entropy.R_max, cfg.entropy.step,
                             cfg.entropy.margin, cfg.threads);
        qc::EntropyEstimate est = qc::entropy_estimate(census);
        write_file(out / "census.csv", census.to_csv());
        json j;
        j["provenance"] = prov();
        j["s"] = est.value;
        j["stderr"] = est.stderr_;
        j["window"] = {est.window_lo, est.window_hi};
        j["diagnostics"] = est.diagnostics;
        write_file(out / "entropy.json", j.dump(2) + "\n");
        return 0;
    }

    int run_hdim() {
        auto g = group(cfg.group.kappa0);
        qc::ConformalMetric m = qc::ConformalMetric::standard(g, cfg.metric.k, metric_t());
        auto variant = cfg.boundary.variant == "gromov"
                           ? qc::VisualVariant::GromovProduct
                           : qc::VisualVariant::GeodesicDistance;
        qc::VisualMetricContext ctx(m, cfg.boundary.T, variant);
        std::vector<double> scales =
            cfg.boundary.scales.empty() ? dyadic(3, 7) : cfg.boundary.scales;
        qc::BoxCountResult bc =
            qc::boxcount_dimension(ctx, cfg.boundary.samples, scales, cfg.seed);
        write_file(out / "boxcount.csv", bc.to_csv());
        json j;
        j["provenance"] = prov();
        j["dimension"] = bc.dimension;
        j["stderr"] = bc.stderr_;
        j["variant"] = cfg.boundary.variant;
        write_file(out / "hdim.json", j.dump(2) + "\n");
        return 0;
    }

    int run_qcheck() {
        auto g = group(cfg.group.kappa0);
        qc::ConformalMetric m = qc::ConformalMetric::standard(g, cfg.metric.k, metric_t());
        qc::VisualMetricContext ctx(m, cfg.boundary.T,
                                    qc::VisualVariant::GeodesicDistance);
        qc::ExpansionBandReport rep = qc::expansion_band_experiment(
            ctx, cfg.qcheck.fit_scales, cfg.qcheck.holdout_scale,
            cfg.qcheck.arcs_per_scale, cfg.qcheck.pairs_per_arc, cfg.qcheck.r0,
            cfg.seed, cfg.qcheck.safety_margin);
        json j;
        j["provenance"] = prov();
        j["r0"] = cfg.qcheck.r0;
        j["band"] = {rep.band_lo, rep.band_hi};
        j["violations"] = rep.holdout_violations;
        j["holdout_fraction_in"] = rep.holdout_fraction_in;
        j["subsets_tested"] = "arcs";
        json scales = json::array();
        for (const auto& st : rep.fit_scales)
            scales.push_back({{"scale", st.scale},
                              {"min", st.min},
                              {"max", st.max},
                              {"count", st.count}});
        j["fit_scales"] = scales;
        j["holdout"] = {{"scale", rep.holdout.scale},
                        {"min", rep.holdout.min},
                        {"max", rep.holdout.max},
                        {"count", rep.holdout.count}};
        write_file(out / "expansion.json", j.dump(2) + "\n");
        return 0;
    }

    int run_family() {
        auto g = group(cfg.family.kappa0);
        qc::ConformalMetric m0 = qc::ConformalMetric::standard(
            g, cfg.family.k, std::vector<double>(cfg.family.k + 2, 0.0));
        qc::CensusKernel kernel(m0, cfg.family.R_max, cfg.family.step,
                                cfg.entropy.margin, cfg.threads, 1e-3);
        qc::FamilyTracker tracker(m0, kernel, cfg.family.tol_F, cfg.family.tol_A);
        std::vector<double> v =
            cfg.family.v.empty() ? default_tangent(cfg.family.k) : cfg.family.v;
        auto pts = tracker.track_level_set(v, cfg.family.steps, cfg.family.step_size);
        std::vector<qc::FamilyPoint> fam(pts.begin() + 1, pts.end());
        if (!fam.empty()) {
            double mid = fam[fam.size() / 2].area;
            fam = tracker.equal_area_slice(fam, mid);
        }
        std::vector<std::pair<std::size_t, std::size_t>> certified;
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (std::size_t j = i + 1; j < fam.size(); ++j) {
                auto cert = qc::nonisometry_certificate(fam[i], fam[j], tracker.eps_box());
                if (cert.outcome == qc::CertificateOutcome::CertifiedNonisometric)
                    certified.push_back({i, j});
            }
        json j = json::parse(qc::family_to_json(fam, certified));
        json wrapped;
        wrapped["provenance"] = prov();
        wrapped["tol_F"] = tracker.tol_F();
        wrapped["eps_box"] = tracker.eps_box();
        wrapped["family"] = j;
        write_file(out / "family.json", wrapped.dump(2) + "\n");
        return 0;
    }

    int run_gap() {
        qc::GapReport rep = qc::gap_bound(cfg.gap.s1, cfg.gap.s2);
        json j = json::parse(rep.to_json());
        j["provenance"] = prov();
        j["epsilon"] = rep.epsilon;
        write_file(out / "gap.json", j.dump(2) + "\n");
        return 0;
    }

    int run_validate() {
        auto results = qc::run_validation_suite(cfg);
        write_file(out / "validate.json", qc::validation_report_json(cfg, results) + "\n");
        bool all = true;
        for (const auto& r : results) {
            std::printf("%-55s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                        r.detail.c_str());
            all = all && r.pass;
        }
        return all ? 0 : 3;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasicircle boundary experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    app.add_option("--config", config_path, "JSON config path");
    app.add_option("--out", out_dir, "output directory");
    auto* sopt = app.add_option("--seed", seed, "RNG seed");
    app.add_option("--threads", threads, "worker threads");

    for (const char* name : {"entropy", "hdim", "qcheck", "family", "gap", "validate"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);
    seed_set = sopt->count() > 0;

    auto t0 = std::chrono::steady_clock::now();
    std::string sub = app.get_subcommands().front()->get_name();

    int rc = 0;
    try {
        Runner R;
        R.cfg = load_config(config_path);
        if (seed_set) R.cfg.seed = seed;
        if (threads > 0) R.cfg.threads = threads;
        if (!out_dir.empty()) R.cfg.out_dir = out_dir;
        R.cfg.validate();
        R.out = R.cfg.out_dir;

        if (sub == "entropy") rc = R.run_entropy();
        else if (sub == "hdim") rc = R.run_hdim();
        else if (sub == "qcheck") rc = R.run_qcheck();
        else if (sub == "family") rc = R.run_family();
        else if (sub == "gap") rc = R.run_gap();
        else if (sub == "validate") rc = R.run_validate();

        // wall-clock provenance goes to a sidecar so reports stay
        // byte-identical under a fixed config + seed
        auto t1 = std::chrono::steady_clock::now();
        json meta;
        meta["subcommand"] = sub;
        meta["elapsed_seconds"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0;
        meta["wall_clock_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
        write_file(fs::path(R.cfg.out_dir) / "run_meta.json", meta.dump(2) + "\n");
    } catch (const qc::InvalidArgument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const qc::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n%s\n", e.what(),
                     e.diagnostics().c_str());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return rc;
}
