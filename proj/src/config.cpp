#include "riesz/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace riesz {

using nlohmann::json;

namespace {

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double need_number(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ConfigError("config field '" + ctx + "': expected a number");
    return j.get<double>();
}

double opt_number(const json& j, const std::string& key, double def, const std::string& ctx) {
    const json* f = find(j, key);
    return f ? need_number(*f, ctx + "." + key) : def;
}

std::uint64_t opt_u64(const json& j, const std::string& key, std::uint64_t def,
                      const std::string& ctx, bool* present = nullptr) {
    const json* f = find(j, key);
    if (present) *present = f != nullptr;
    if (!f) return def;
    if (!f->is_number_unsigned() && !f->is_number_integer())
        throw ConfigError("config field '" + ctx + "." + key + "': expected an integer");
    return f->get<std::uint64_t>();
}

bool opt_bool(const json& j, const std::string& key, bool def, const std::string& ctx) {
    const json* f = find(j, key);
    if (!f) return def;
    if (!f->is_boolean())
        throw ConfigError("config field '" + ctx + "." + key + "': expected a boolean");
    return f->get<bool>();
}

std::vector<double> opt_num_list(const json& j, const std::string& key,
                                 std::vector<double> def, const std::string& ctx) {
    const json* f = find(j, key);
    if (!f) return def;
    if (!f->is_array())
        throw ConfigError("config field '" + ctx + "." + key + "': expected an array");
    std::vector<double> out;
    for (const auto& e : *f) out.push_back(need_number(e, ctx + "." + key + "[]"));
    return out;
}

std::vector<int> opt_int_list(const json& j, const std::string& key, std::vector<int> def,
                              const std::string& ctx) {
    const json* f = find(j, key);
    if (!f) return def;
    if (!f->is_array())
        throw ConfigError("config field '" + ctx + "." + key + "': expected an array");
    std::vector<int> out;
    for (const auto& e : *f) {
        if (!e.is_number_integer())
            throw ConfigError("config field '" + ctx + "." + key + "[]': expected integers");
        out.push_back(e.get<int>());
    }
    return out;
}

PathConfig parse_paths(const json& j, const std::string& ctx, bool* seed_present) {
    PathConfig pc;
    pc.n_paths = static_cast<std::size_t>(opt_u64(j, "n_paths", pc.n_paths, ctx));
    pc.dt = opt_number(j, "dt", pc.dt, ctx);
    pc.horizon = opt_number(j, "horizon", pc.horizon, ctx);
    pc.seed = opt_u64(j, "seed", pc.seed, ctx, seed_present);
    pc.antithetic = opt_bool(j, "antithetic", pc.antithetic, ctx);
    try {
        pc.validate();
    } catch (const std::exception& e) {
        throw ConfigError("config section '" + ctx + "': " + e.what());
    }
    return pc;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    ExperimentConfig cfg;

    // potential family
    const json* pot = find(j, "potential");
    if (!pot) throw ConfigError("config: missing 'potential' section");
    cfg.family.alpha = opt_number(*pot, "alpha", 2.0, "potential");
    if (!(cfg.family.alpha > 0.0) || !(cfg.family.alpha <= 2.0))
        throw ConfigError("config field 'potential.alpha': must satisfy 0 < alpha <= 2");
    cfg.family.m = opt_number(*pot, "m", 1.0, "potential");
    cfg.family.M = opt_number(*pot, "M", cfg.family.m, "potential");
    if (!(cfg.family.m > 0.0) || !(cfg.family.m <= cfg.family.M))
        throw ConfigError("config field 'potential.m/M': need 0 < m <= M");
    std::string rule = "constant";
    if (const json* r = find(*pot, "coefficients")) {
        if (!r->is_string())
            throw ConfigError("config field 'potential.coefficients': expected a string");
        rule = r->get<std::string>();
    }
    bool pot_seed_present = false;
    cfg.family.seed = opt_u64(*pot, "seed", 0, "potential", &pot_seed_present);
    if (rule == "seeded-uniform") {
        cfg.family.seeded = true;
        if (!pot_seed_present)
            throw ConfigError("config field 'potential.seed': required for seeded-uniform");
    } else if (rule == "constant") {
        cfg.family.seeded = false;
        if (cfg.family.m != cfg.family.M)
            throw ConfigError("config: constant coefficient rule requires m == M");
    } else {
        throw ConfigError("config field 'potential.coefficients': unknown rule '" + rule +
                          "'");
    }

    // backend
    bool backend_seed_present = false;
    if (const json* b = find(j, "backend")) {
        std::string type = "grid";
        if (const json* ty = find(*b, "type")) {
            if (!ty->is_string())
                throw ConfigError("config field 'backend.type': expected a string");
            type = ty->get<std::string>();
        }
        if (type == "grid")
            cfg.backend.backend = Backend::grid;
        else if (type == "monte-carlo")
            cfg.backend.backend = Backend::monte_carlo;
        else
            throw ConfigError("config field 'backend.type': unknown backend '" + type + "'");
        if (const json* pj = find(*b, "paths"))
            cfg.backend.paths = parse_paths(*pj, "backend.paths", &backend_seed_present);
        if (const json* gj = find(*b, "grid")) {
            cfg.backend.grid.x_max = opt_number(*gj, "x_max", 0.0, "backend.grid");
            cfg.backend.grid.n_cells = static_cast<int>(
                opt_u64(*gj, "n_cells", static_cast<std::uint64_t>(cfg.backend.grid.n_cells),
                        "backend.grid"));
            cfg.backend.grid.dt_solver = opt_number(*gj, "dt_solver", 0.0, "backend.grid");
            try {
                cfg.backend.grid.validate();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("config section 'backend.grid': ") + e.what());
            }
        }
    }
    if (cfg.backend.backend == Backend::monte_carlo && !backend_seed_present)
        throw ConfigError(
            "config field 'backend.paths.seed': required when the Monte Carlo backend is "
            "selected");

    // transform parameters
    if (const json* r = find(j, "riesz")) {
        cfg.a_values = opt_num_list(*r, "a_values", cfg.a_values, "riesz");
        cfg.l1_a_values = opt_num_list(*r, "l1_a_values", cfg.l1_a_values, "riesz");
        cfg.rp.split_N = opt_number(*r, "split_N", cfg.rp.split_N, "riesz");
        cfg.rp.quad_rel_tol = opt_number(*r, "quad_rel_tol", cfg.rp.quad_rel_tol, "riesz");
        cfg.rp.tail_cutoff = opt_number(*r, "tail_cutoff", cfg.rp.tail_cutoff, "riesz");
        cfg.rp.lower_panels = static_cast<int>(opt_u64(
            *r, "lower_panels", static_cast<std::uint64_t>(cfg.rp.lower_panels), "riesz"));
        cfg.rp.refine_rounds = static_cast<int>(opt_u64(
            *r, "refine_rounds", static_cast<std::uint64_t>(cfg.rp.refine_rounds), "riesz"));
        try {
            cfg.rp.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config section 'riesz': ") + e.what());
        }
        for (double a : cfg.a_values)
            if (!(a > 0.0)) throw ConfigError("config field 'riesz.a_values': entries must be > 0");
        for (double a : cfg.l1_a_values)
            if (!(a > 0.0) || !(a <= 1.0))
                throw ConfigError("config field 'riesz.l1_a_values': entries must be in (0, 1]");
    }
    cfg.N = cfg.rp.split_N;

    if (const json* s = find(j, "sweep")) {
        cfg.sweep_dims = opt_int_list(*s, "dims", cfg.sweep_dims, "sweep");
        cfg.l1_dims = opt_int_list(*s, "l1_dims", cfg.l1_dims, "sweep");
    }
    for (int d : cfg.sweep_dims)
        if (d < 1) throw ConfigError("config field 'sweep.dims': dimensions must be >= 1");
    for (int d : cfg.l1_dims)
        if (d < 1) throw ConfigError("config field 'sweep.l1_dims': dimensions must be >= 1");

    bool reflection_seed_present = false;
    cfg.reflection_paths.dt = 1e-4;
    cfg.reflection_paths.horizon = 0.5;
    if (const json* rj = find(j, "reflection"))
        cfg.reflection_paths = parse_paths(*rj, "reflection", &reflection_seed_present);

    // certificate selection, resolved against the catalog in canonical order
    std::vector<std::string> requested;
    if (const json* cj = find(j, "certificates")) {
        if (!cj->is_array())
            throw ConfigError("config field 'certificates': expected an array of names");
        for (const auto& e : *cj) {
            if (!e.is_string())
                throw ConfigError("config field 'certificates': entries must be strings");
            requested.push_back(e.get<std::string>());
        }
    } else {
        requested = {"all"};
    }
    std::set<std::string> wanted;
    const auto& catalog = list_certificates();
    for (const auto& name : requested) {
        if (name == "all") {
            for (const auto& c : catalog) wanted.insert(c.name);
            continue;
        }
        const bool known = std::any_of(catalog.begin(), catalog.end(),
                                       [&](const CertificateInfo& c) { return c.name == name; });
        if (!known)
            throw ConfigError("config field 'certificates': unknown certificate '" + name +
                              "'");
        wanted.insert(name);
    }
    for (const auto& c : catalog)
        if (wanted.count(c.name)) cfg.certificates.push_back(c.name);

    if (wanted.count("reflection_bound") && !reflection_seed_present)
        throw ConfigError(
            "config field 'reflection.seed': required when reflection_bound is selected");
    if (wanted.count("l1_adjoint_side") && !backend_seed_present)
        throw ConfigError(
            "config field 'backend.paths.seed': required when l1_adjoint_side is selected "
            "(its pointwise checks sample paths)");

    if (const json* o = find(j, "output_dir")) {
        if (!o->is_string()) throw ConfigError("config field 'output_dir': expected a string");
        cfg.output_dir = o->get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace riesz
