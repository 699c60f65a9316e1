#pragma once

// Resolved configuration of one CLI invocation and its JSON form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hfrac/errors.hpp"
#include "hfrac/estimate_lab.hpp"
#include "hfrac/quadrature.hpp"

namespace hfrac {

using Json = nlohmann::ordered_json;

struct CampaignConfig {
    std::string command;
    std::size_t n = 1;
    std::optional<double> sigma;
    std::optional<double> alpha;
    int k = 0;

    // apply / expand
    std::string op = "Hsigma";  // Hsigma | Hminus | Riesz
    std::string fn = "h2";
    std::string route = "both";  // spectral | pointwise | both
    std::string riesz = "R_i";
    std::vector<int> index{1};
    int degree = 64;
    int nodes = 96;
    std::optional<double> tol;  // route agreement tolerance; default depends on n

    // kernel-eval
    std::string kernel = "F_sigma";  // F_sigma F_minus_sigma F_2k_sigma F_minus2k_sigma F_2k_minus_sigma heat mehler
    double t = 1.0;                  // heat time, or Mehler r
    std::vector<double> x;           // fixed base point; empty tabulates the (x, z) plane for n = 1

    // evaluation grid
    double grid_L = 3.0;
    double grid_h = 0.25;

    QuadratureSpec quad{};

    // verify-lemma
    std::string lemma;
    std::size_t samples = 10000;
    std::size_t coarse = 2000;
    std::size_t polish = 64;
    LabOptions lab{};

    // verify-theorem
    std::string theorem;
    FamilySpec family{};

    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;  // 0: HERMITE_FRAC_THREADS, else hardware

    std::vector<std::string> inputs;  // report
    std::string out;
    std::string format = "json";

    double route_tolerance() const { return tol ? *tol : (n == 1 ? 1e-5 : 1e-4); }
};

inline const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> c = {"expand", "apply", "kernel-eval", "verify-lemma", "verify-theorem",
                                               "report"};
    return c;
}

namespace detail {

inline Json opt_num(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

template <class T>
void take(const Json& j, const char* key, T& dst) {
    if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

inline void take_opt(const Json& j, const char* key, std::optional<double>& dst) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null())
        dst.reset();
    else
        dst = j.at(key).get<double>();
}

}  // namespace detail

inline Json quad_to_json(const QuadratureSpec& q) {
    return Json{{"panels", q.panels},         {"grade_zero", q.grade_zero}, {"grade_one", q.grade_one},
                {"gl_order", q.gl_order},     {"octaves", q.octaves},       {"t_max", q.t_max},
                {"tolerance", q.tolerance},   {"pv_delta", q.pv_delta},     {"pv_tolerance", q.pv_tolerance},
                {"box", q.box},               {"grid_step", q.grid_step},   {"directions", q.directions},
                {"polar_nodes", q.polar_nodes}};
}

inline void quad_from_json(const Json& j, QuadratureSpec& q) {
    using detail::take;
    take(j, "panels", q.panels);
    take(j, "grade_zero", q.grade_zero);
    take(j, "grade_one", q.grade_one);
    take(j, "gl_order", q.gl_order);
    take(j, "octaves", q.octaves);
    take(j, "t_max", q.t_max);
    take(j, "tolerance", q.tolerance);
    take(j, "pv_delta", q.pv_delta);
    take(j, "pv_tolerance", q.pv_tolerance);
    take(j, "box", q.box);
    take(j, "grid_step", q.grid_step);
    take(j, "directions", q.directions);
    take(j, "polar_nodes", q.polar_nodes);
}

inline Json to_json(const CampaignConfig& c) {
    Json lab{{"box", c.lab.box},
             {"r_min", c.lab.r_min},
             {"r_max", c.lab.r_max},
             {"b_radius", c.lab.b_radius},
             {"shell_directions", c.lab.shell_directions},
             {"shell_gl", c.lab.shell_gl},
             {"shell_group", c.lab.shell_group}};
    Json fam{{"size", c.family.size},
             {"L", c.family.L},
             {"h", c.family.h},
             {"degree", c.family.degree},
             {"nodes", c.family.nodes},
             {"near_radius", c.family.holder.near_radius},
             {"far_pairs", c.family.holder.far_pairs}};
    return Json{{"command", c.command},
                {"n", c.n},
                {"sigma", detail::opt_num(c.sigma)},
                {"alpha", detail::opt_num(c.alpha)},
                {"k", c.k},
                {"op", c.op},
                {"fn", c.fn},
                {"route", c.route},
                {"riesz", c.riesz},
                {"index", c.index},
                {"degree", c.degree},
                {"nodes", c.nodes},
                {"tol", detail::opt_num(c.tol)},
                {"kernel", c.kernel},
                {"t", c.t},
                {"x", c.x},
                {"grid_L", c.grid_L},
                {"grid_h", c.grid_h},
                {"quad", quad_to_json(c.quad)},
                {"lemma", c.lemma},
                {"samples", c.samples},
                {"coarse", c.coarse},
                {"polish", c.polish},
                {"lab", lab},
                {"theorem", c.theorem},
                {"family", fam},
                {"seed", c.seed},
                {"threads", c.threads},
                {"inputs", c.inputs},
                {"out", c.out},
                {"format", c.format}};
}

/// Overlays the keys present in j onto c; absent keys keep their current values.
inline void from_json(const Json& j, CampaignConfig& c) {
    using detail::take;
    if (!j.is_object()) throw PreconditionError("config: top level must be a JSON object");
    static const std::vector<std::string> keys = {
        "command", "n",       "sigma", "alpha",  "k",       "op",     "fn",   "route",   "riesz",   "index", "degree",
        "nodes",   "tol",     "kernel", "t",     "x",       "grid_L", "grid_h", "quad",  "lemma",   "samples",
        "coarse",  "polish",  "lab",   "theorem", "family", "seed",   "threads", "inputs", "out",    "format"};
    for (const auto& [key, _] : j.items())
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw PreconditionError("config: unknown key '" + key + "'");
    try {
        take(j, "command", c.command);
        take(j, "n", c.n);
        detail::take_opt(j, "sigma", c.sigma);
        detail::take_opt(j, "alpha", c.alpha);
        take(j, "k", c.k);
        take(j, "op", c.op);
        take(j, "fn", c.fn);
        take(j, "route", c.route);
        take(j, "riesz", c.riesz);
        take(j, "index", c.index);
        take(j, "degree", c.degree);
        take(j, "nodes", c.nodes);
        detail::take_opt(j, "tol", c.tol);
        take(j, "kernel", c.kernel);
        take(j, "t", c.t);
        take(j, "x", c.x);
        take(j, "grid_L", c.grid_L);
        take(j, "grid_h", c.grid_h);
        if (j.contains("quad")) quad_from_json(j.at("quad"), c.quad);
        take(j, "lemma", c.lemma);
        take(j, "samples", c.samples);
        take(j, "coarse", c.coarse);
        take(j, "polish", c.polish);
        if (j.contains("lab")) {
            const Json& l = j.at("lab");
            take(l, "box", c.lab.box);
            take(l, "r_min", c.lab.r_min);
            take(l, "r_max", c.lab.r_max);
            take(l, "b_radius", c.lab.b_radius);
            take(l, "shell_directions", c.lab.shell_directions);
            take(l, "shell_gl", c.lab.shell_gl);
            take(l, "shell_group", c.lab.shell_group);
        }
        take(j, "theorem", c.theorem);
        if (j.contains("family")) {
            const Json& f = j.at("family");
            take(f, "size", c.family.size);
            take(f, "L", c.family.L);
            take(f, "h", c.family.h);
            take(f, "degree", c.family.degree);
            take(f, "nodes", c.family.nodes);
            take(f, "near_radius", c.family.holder.near_radius);
            take(f, "far_pairs", c.family.holder.far_pairs);
        }
        take(j, "seed", c.seed);
        take(j, "threads", c.threads);
        take(j, "inputs", c.inputs);
        take(j, "out", c.out);
        take(j, "format", c.format);
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("config: ") + e.what());
    }
}

inline CampaignConfig config_from_json(const Json& j) {
    CampaignConfig c;
    from_json(j, c);
    return c;
}

/// Checks parameter admissibility that does not depend on the numerics.
inline void validate(const CampaignConfig& c) {
    const auto& cmds = known_commands();
    if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
        throw PreconditionError("unknown command '" + c.command + "'");
    require(c.n >= 1 && c.n <= 3, "n must be 1, 2 or 3");
    require(c.format == "json" || c.format == "csv", "format must be json or csv");
    require(c.grid_L > 0 && c.grid_h > 0, "grid_L and grid_h must be positive");
    require(c.degree >= 0 && c.nodes >= 2, "degree must be >= 0 and nodes >= 2");
    require(c.samples >= 1, "samples must be >= 1");
    require(c.coarse >= 1, "coarse must be >= 1");
    c.quad.validate();
    if (c.command == "apply") {
        require(c.op == "Hsigma" || c.op == "Hminus" || c.op == "Riesz", "op must be Hsigma, Hminus or Riesz");
        require(c.route == "spectral" || c.route == "pointwise" || c.route == "both",
                "route must be spectral, pointwise or both");
        if (c.op != "Riesz") {
            require(c.sigma.has_value(), "apply: --sigma is required");
            if (c.op == "Hsigma")
                require(*c.sigma >= 0 && *c.sigma < 1, "apply: Hsigma needs 0 <= sigma < 1");
            else
                require(*c.sigma >= 0 && *c.sigma <= 1, "apply: Hminus needs 0 <= sigma <= 1");
        }
    }
    if (c.command == "verify-lemma") {
        const auto ids = lemma_ids();
        require(std::find(ids.begin(), ids.end(), c.lemma) != ids.end(),
                "unknown lemma id '" + c.lemma + "' (expected 5.1 .. 5.10)");
    }
    if (c.command == "verify-theorem") {
        parse_schauder_case(c.theorem);
        require(c.alpha.has_value() == c.sigma.has_value(), "verify-theorem: give both --alpha and --sigma, or neither");
        require(c.family.size >= 1, "family size must be >= 1");
    }
    if (c.command == "report") require(!c.inputs.empty(), "report: no input files");
}

// ---------------------------------------------------------------- serialization

/// Decimal text of a double with 17 significant digits; non-finite values become null.
inline std::string num17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

namespace detail {

inline void write_json(std::ostream& os, const Json& j, int indent, int depth) {
    auto pad = [&](int d) { os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' '); };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (const auto& [key, val] : j.items()) {
                if (!first) os << ',';
                first = false;
                pad(depth + 1);
                os << Json(key).dump() << ": ";
                write_json(os, val, indent, depth + 1);
            }
            pad(depth);
            os << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            bool scalars = true;
            for (const auto& v : j) scalars = scalars && !v.is_structured();
            os << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << (scalars ? ", " : ",");
                if (!scalars) pad(depth + 1);
                write_json(os, j[i], indent, depth + 1);
            }
            if (!scalars) pad(depth);
            os << ']';
            return;
        }
        case Json::value_t::number_float: os << num17(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

}  // namespace detail

/// Deterministic JSON text; floating-point numbers carry 17 significant digits.
inline std::string dump17(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::write_json(os, j, indent, 0);
    os << '\n';
    return os.str();
}

}  // namespace hfrac
