#include "riesz/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace riesz {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

ordered_json cert_to_json(const BoundCertificate& cert, const std::string& instance) {
    ordered_json c;
    c["name"] = cert.name;
    if (!instance.empty()) c["instance"] = instance;
    c["passed"] = cert.passed;
    c["vacuous"] = cert.vacuous;
    c["worst_margin"] = cert.worst_margin;
    c["n_nodes"] = cert.n_nodes;
    c["grid"] = cert.grid_desc;
    ordered_json consts;
    for (const auto& [k, v] : cert.fitted_constants) consts[k] = v;
    c["constants"] = consts;
    c["note"] = cert.note;
    return c;
}

void write_rows_csv(const std::filesystem::path& file, const std::vector<SweepRow>& rows) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "d,x_sample_id,value,stat_err,quad_err\n";
    for (const auto& r : rows)
        out << r.d << ',' << r.sample_id << ',' << fmt_g(r.value) << ','
            << fmt_g(r.stat_err) << ',' << fmt_g(r.quad_err) << '\n';
}

std::string a_tag(double a) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "a%.4g", a);
    std::string s = buf;
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

void log_line(std::ostream& log, const BoundCertificate& cert, const std::string& instance) {
    log << (cert.passed ? "[PASS] " : "[FAIL] ") << cert.name;
    if (!instance.empty()) log << " (" << instance << ")";
    if (cert.vacuous) log << " [vacuous]";
    log << "  margin=" << fmt_g(cert.worst_margin);
    if (!cert.note.empty()) log << "  note: " << cert.note;
    log << '\n';
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    std::vector<std::string> selected = cfg.certificates;
    if (!opt.only.empty()) {
        const bool known =
            std::any_of(list_certificates().begin(), list_certificates().end(),
                        [&](const CertificateInfo& c) { return c.name == opt.only; });
        if (!known) throw ConfigError("--only: unknown certificate '" + opt.only + "'");
        selected.clear();
        selected.push_back(opt.only);
    }
    const std::filesystem::path out_dir =
        opt.out_override.empty() ? cfg.output_dir : opt.out_override;
    std::filesystem::create_directories(out_dir);

    ordered_json summary;
    summary["schema"] = "rieszlab-report/1";
    summary["backend"] = cfg.backend.backend == Backend::grid ? "grid" : "monte-carlo";
    summary["alpha"] = cfg.family.alpha;
    summary["certificates"] = ordered_json::array();

    bool all_passed = true;
    auto record = [&](const BoundCertificate& cert, const std::string& instance) {
        summary["certificates"].push_back(cert_to_json(cert, instance));
        log_line(log, cert, instance);
        if (!cert.passed) all_passed = false;
    };

    for (const std::string& name : selected) {
        if (name == "small_time_decay") {
            DecayGrid grid = default_small_time_grid();
            grid.N = cfg.N;
            record(certify_small_time_decay(cfg.family.make(1), grid, cfg.backend), "");
        } else if (name == "small_time_decay_near_origin") {
            DecayGrid grid = default_near_origin_grid();
            grid.N = cfg.N;
            record(
                certify_small_time_decay_near_origin(cfg.family.make(1), grid, cfg.backend),
                "");
        } else if (name == "large_time_decay") {
            const int d = *std::max_element(cfg.sweep_dims.begin(), cfg.sweep_dims.end());
            record(fit_large_time_decay(cfg.family.make(d), d, cfg.backend, cfg.N), "");
        } else if (name == "reflection_bound") {
            record(certify_reflection_bound(cfg.reflection_paths, default_reflection_grid()),
                   "");
        } else if (name == "derivative_identity") {
            record(certify_derivative_identity(cfg.family.make(1), default_derivative_grid(),
                                               cfg.backend.grid),
                   "");
        } else if (name == "power_exp_max_bound") {
            record(certify_xexmax(default_power_exp_max_cases()), "");
        } else if (name == "dimension_sweep") {
            for (double a : cfg.a_values) {
                DimensionSweepSettings st;
                st.family = cfg.family;
                st.dims = cfg.sweep_dims;
                st.a = a;
                st.rp = cfg.rp;
                const SweepReport rep = dimension_sweep(st, cfg.backend);
                write_rows_csv(out_dir / ("dimension_sweep_" + a_tag(a) + ".csv"), rep.rows);
                record(rep.cert, "a=" + fmt_g(a));
            }
        } else if (name == "l1_adjoint_side") {
            for (double a : cfg.l1_a_values) {
                L1SideSettings st;
                st.family = cfg.family;
                st.dims = cfg.l1_dims;
                st.a = a;
                st.rp = cfg.rp;
                st.holder_paths = cfg.backend.paths;
                const SweepReport rep = certify_L1_side(st, cfg.backend);
                write_rows_csv(out_dir / ("l1_adjoint_side_" + a_tag(a) + ".csv"), rep.rows);
                record(rep.cert, "a=" + fmt_g(a));
            }
        } else {
            throw ConfigError("unknown certificate '" + name + "'");
        }
    }

    summary["all_passed"] = all_passed;
    {
        std::ofstream out(out_dir / "summary.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write summary.json");
        out << summary.dump(2) << '\n';
    }
    log << (all_passed ? "all certificates passed\n" : "certificate failures present\n");
    return all_passed ? 0 : 1;
}

int cmd_list(std::ostream& out) {
    for (const auto& c : list_certificates()) {
        out << c.name << '\n';
        out << "    checks:  " << c.statement << '\n';
        out << "    grid:    " << c.default_grid << '\n';
    }
    return 0;
}

}  // namespace riesz
