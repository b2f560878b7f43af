#include "qc/config.hpp"

#include <cstdio>

#include <json.hpp>

#include "qc/errors.hpp"

namespace qc {

using nlohmann::json;

namespace {

int byte_to_line(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

template <typename T>
void read_field(const json& j, const char* key, T& dst, const std::string& path) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(path + "." + key + ": " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw InvalidArgument(path + ": unknown key \"" + it.key() + "\"");
    }
}

}  // namespace

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::string& filename) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(filename + ":" + std::to_string(byte_to_line(text, e.byte)) +
                              ": " + e.what());
    }
    ExperimentConfig c;
    reject_unknown(j, {"version", "seed", "threads", "out", "group", "metric",
                       "entropy", "boundary", "qcheck", "family", "gap"},
                   filename);
    read_field(j, "version", c.version, filename);
    read_field(j, "seed", c.seed, filename);
    read_field(j, "threads", c.threads, filename);
    read_field(j, "out", c.out_dir, filename);
    if (j.contains("group")) {
        const json& g = j["group"];
        reject_unknown(g, {"kappa0"}, filename + ".group");
        read_field(g, "kappa0", c.group.kappa0, filename + ".group");
    }
    if (j.contains("metric")) {
        const json& g = j["metric"];
        reject_unknown(g, {"k", "t"}, filename + ".metric");
        read_field(g, "k", c.metric.k, filename + ".metric");
        read_field(g, "t", c.metric.t, filename + ".metric");
    }
    if (j.contains("entropy")) {
        const json& g = j["entropy"];
        reject_unknown(g, {"R_max", "step", "margin", "t_hint"}, filename + ".entropy");
        read_field(g, "R_max", c.entropy.R_max, filename + ".entropy");
        read_field(g, "step", c.entropy.step, filename + ".entropy");
        read_field(g, "margin", c.entropy.margin, filename + ".entropy");
        read_field(g, "t_hint", c.entropy.t_hint, filename + ".entropy");
    }
    if (j.contains("boundary")) {
        const json& g = j["boundary"];
        reject_unknown(g, {"T", "variant", "samples", "centers", "scales", "reg_radii"},
                       filename + ".boundary");
        read_field(g, "T", c.boundary.T, filename + ".boundary");
        read_field(g, "variant", c.boundary.variant, filename + ".boundary");
        read_field(g, "samples", c.boundary.samples, filename + ".boundary");
        read_field(g, "centers", c.boundary.centers, filename + ".boundary");
        read_field(g, "scales", c.boundary.scales, filename + ".boundary");
        read_field(g, "reg_radii", c.boundary.reg_radii, filename + ".boundary");
    }
    if (j.contains("qcheck")) {
        const json& g = j["qcheck"];
        reject_unknown(g,
                       {"fit_scales", "holdout_scale", "arcs_per_scale", "pairs_per_arc",
                        "r0", "safety_margin"},
                       filename + ".qcheck");
        read_field(g, "fit_scales", c.qcheck.fit_scales, filename + ".qcheck");
        read_field(g, "holdout_scale", c.qcheck.holdout_scale, filename + ".qcheck");
        read_field(g, "arcs_per_scale", c.qcheck.arcs_per_scale, filename + ".qcheck");
        read_field(g, "pairs_per_arc", c.qcheck.pairs_per_arc, filename + ".qcheck");
        read_field(g, "r0", c.qcheck.r0, filename + ".qcheck");
        read_field(g, "safety_margin", c.qcheck.safety_margin, filename + ".qcheck");
    }
    if (j.contains("family")) {
        const json& g = j["family"];
        reject_unknown(g,
                       {"kappa0", "k", "v", "steps", "step_size", "tol_F", "tol_A",
                        "R_max", "step"},
                       filename + ".family");
        read_field(g, "kappa0", c.family.kappa0, filename + ".family");
        read_field(g, "k", c.family.k, filename + ".family");
        read_field(g, "v", c.family.v, filename + ".family");
        read_field(g, "steps", c.family.steps, filename + ".family");
        read_field(g, "step_size", c.family.step_size, filename + ".family");
        read_field(g, "tol_F", c.family.tol_F, filename + ".family");
        read_field(g, "tol_A", c.family.tol_A, filename + ".family");
        read_field(g, "R_max", c.family.R_max, filename + ".family");
        read_field(g, "step", c.family.step, filename + ".family");
    }
    if (j.contains("gap")) {
        const json& g = j["gap"];
        reject_unknown(g, {"s1", "s2"}, filename + ".gap");
        read_field(g, "s1", c.gap.s1, filename + ".gap");
        read_field(g, "s2", c.gap.s2, filename + ".gap");
    }
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw InvalidArgument(msg);
    };
    require(version == 1, "version: only schema version 1 is supported");
    require(threads >= 1, "threads: must be >= 1");
    require(group.kappa0 < 0, "group.kappa0: must be negative");
    require(metric.k >= 0, "metric.k: must be >= 0");
    require(metric.t.empty() || metric.t.size() == static_cast<std::size_t>(metric.k) + 2,
            "metric.t: length must be k + 2");
    require(entropy.R_max > 0 && entropy.R_max <= 14, "entropy.R_max: must be in (0, 14]");
    require(entropy.step > 0, "entropy.step: must be positive");
    require(entropy.margin > 0, "entropy.margin: must be positive");
    require(boundary.T > 0 && boundary.T <= 14, "boundary.T: must be in (0, 14]");
    require(boundary.variant == "dhat" || boundary.variant == "gromov",
            "boundary.variant: must be \"dhat\" or \"gromov\"");
    require(boundary.samples >= 1000, "boundary.samples: must be >= 1000");
    for (double s : qcheck.fit_scales)
        require(s > 0 && s < 0.5, "qcheck.fit_scales: scales must be in (0, 0.5)");
    require(qcheck.holdout_scale > 0, "qcheck.holdout_scale: must be positive");
    require(qcheck.r0 > 0 && qcheck.r0 <= 0.5, "qcheck.r0: must be in (0, 0.5]");
    require(family.kappa0 < 0, "family.kappa0: must be negative");
    require(family.k >= 0, "family.k: must be >= 0");
    require(family.steps >= 0, "family.steps: must be >= 0");
    require(family.step_size > 0, "family.step_size: must be positive");
    require(family.tol_F >= 0, "family.tol_F: must be >= 0");
    require(family.tol_A > 0, "family.tol_A: must be positive");
    require(gap.s1 > 0 && gap.s2 > 0, "gap: dimensions must be positive");
}

std::string ExperimentConfig::canonical_json() const {
    json j;
    j["version"] = version;
    j["seed"] = seed;
    j["threads"] = threads;
    j["out"] = out_dir;
    j["group"]["kappa0"] = group.kappa0;
    j["metric"]["k"] = metric.k;
    j["metric"]["t"] = metric.t;
    j["entropy"] = {{"R_max", entropy.R_max},
                    {"step", entropy.step},
                    {"margin", entropy.margin},
                    {"t_hint", entropy.t_hint}};
    j["boundary"] = {{"T", boundary.T},         {"variant", boundary.variant},
                     {"samples", boundary.samples}, {"centers", boundary.centers},
                     {"scales", boundary.scales},   {"reg_radii", boundary.reg_radii}};
    j["qcheck"] = {{"fit_scales", qcheck.fit_scales},
                   {"holdout_scale", qcheck.holdout_scale},
                   {"arcs_per_scale", qcheck.arcs_per_scale},
                   {"pairs_per_arc", qcheck.pairs_per_arc},
                   {"r0", qcheck.r0},
                   {"safety_margin", qcheck.safety_margin}};
    j["family"] = {{"kappa0", family.kappa0}, {"k", family.k},
                   {"v", family.v},           {"steps", family.steps},
                   {"step_size", family.step_size}, {"tol_F", family.tol_F},
                   {"tol_A", family.tol_A},   {"R_max", family.R_max},
                   {"step", family.step}};
    j["gap"] = {{"s1", gap.s1}, {"s2", gap.s2}};
    return j.dump(2);
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical_json()); }

std::string provenance_json(const ExperimentConfig& cfg) {
    json j;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    j["config_hash"] = buf;
    j["seed"] = cfg.seed;
    j["version"] = "qc 1.0.0";
    return j.dump();
}

}  // namespace qc
