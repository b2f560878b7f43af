#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qc {

/// One experiment configuration; defaults mirror the reference setup
/// (genus 2; kappa0 = -2 for families, -1 for boundary/entropy runs).
struct ExperimentConfig {
    int version = 1;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";

    struct Group {
        double kappa0 = -1.0;
    } group;

    struct Metric {
        int k = 0;                  // k+2 bumps
        std::vector<double> t;      // defaults to zeros (k+2)
    } metric;

    struct Entropy {
        double R_max = 12.0;
        double step = 0.25;
        double margin = 2.5;        // enumeration margin, curvature -1 units
        double t_hint = 0.06;
    } entropy;

    struct Boundary {
        double T = 10.0;
        std::string variant = "dhat";  // "dhat" | "gromov"
        std::size_t samples = 100000;
        std::size_t centers = 200;
        std::vector<double> scales;    // boxcount scales; dyadic default
        std::vector<double> reg_radii; // regularity radii; dyadic default
    } boundary;

    struct QCheck {
        std::vector<double> fit_scales = {0.0625, 0.03125, 0.015625};  // 2^-4..2^-6
        double holdout_scale = 0.0078125;                              // 2^-7
        std::size_t arcs_per_scale = 1000;
        std::size_t pairs_per_arc = 8;
        double r0 = 0.125;
        double safety_margin = 0.15;
    } qcheck;

    struct Family {
        double kappa0 = -2.0;
        int k = 0;
        std::vector<double> v;      // tangent; default per k
        int steps = 3;
        double step_size = 1e-5;
        double tol_F = 0.0;         // 0 = auto (2x stderr)
        double tol_A = 1e-4;        // relative
        double R_max = 9.0;
        double step = 0.25;
    } family;

    struct Gap {
        double s1 = 1.0;
        double s2 = 1.4142135623730951;
    } gap;

    /// Canonical serialization (sorted keys, 17 digits) and its FNV-1a hash.
    std::string canonical_json() const;
    std::uint64_t hash() const;

    /// Parse from JSON text; unknown keys rejected; messages carry
    /// line-anchored positions.  Applies defaults for missing fields.
    static ExperimentConfig from_json_text(const std::string& text,
                                           const std::string& filename = "config");

    void validate() const;  // throws InvalidArgument with field paths
};

std::uint64_t fnv1a64(const std::string& s);

/// Report provenance stamp: config hash, seed, version (wall-clock goes to
/// the run_meta sidecar so reports stay byte-identical under fixed seed).
std::string provenance_json(const ExperimentConfig& cfg);

}  // namespace qc
