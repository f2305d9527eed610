// Command-line surface for the library: evaluate determinants and
// correlations, emit transformed kernel tables, run the Fredholm routes, the
// brute-force oracle, the sampler, and the identity suite.
//
// Jobs are JSON configs (see README). Tabular results are CSV, everything
// else is JSON. Exit codes: 0 success, 2 malformed job, 3 numerical
// degeneracy.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfpp/errors.hpp"
#include "pfpp/fredholm.hpp"
#include "pfpp/instances.hpp"
#include "pfpp/kernels.hpp"
#include "pfpp/sampler.hpp"
#include "pfpp/serialization.hpp"
#include "pfpp/transforms.hpp"
#include "pfpp/verify.hpp"

namespace {

using pfpp::Json;
using pfpp::SchemaError;

constexpr const char* kVersion = "pfpp 1.0.0 (job schema 1)";
constexpr uint64_t kDefaultSeed = 20260814;

struct CommonOpts {
    std::string config;
    std::string out;
    std::optional<uint64_t> seed;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "path to the JSON job config")
        ->envname("PFPP_CONFIG");
    cmd->add_option("--out", o.out, "output path (default: stdout)")->envname("PFPP_OUT");
    cmd->add_option("--seed", o.seed, "RNG seed (overrides the config)")
        ->envname("PFPP_SEED");
    cmd->add_option("--threads", o.threads, "OpenMP thread cap (0 = library default)")
        ->envname("PFPP_THREADS");
}

std::string fmt15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write \"" + path + "\"");
    out << text;
}

Json load_config(const CommonOpts& o) {
    if (o.config.empty()) throw SchemaError("--config is required for this command");
    return pfpp::load_json_file(o.config);
}

// Job-level fields accepted everywhere: command echo, seed, output path.
void check_job(const Json& cfg, const std::string& command,
               std::initializer_list<const char*> required,
               std::initializer_list<const char*> optional) {
    std::vector<const char*> opt{"command", "seed", "out"};
    opt.insert(opt.end(), optional.begin(), optional.end());
    if (!cfg.is_object()) throw SchemaError("job config must be a JSON object");
    for (const char* key : required)
        if (!cfg.contains(key))
            throw SchemaError(command + " job: missing field \"" + key + "\"");
    for (const auto& item : cfg.items()) {
        bool known = false;
        for (const char* key : required) known = known || item.key() == key;
        for (const char* key : opt) known = known || item.key() == key;
        if (!known)
            throw SchemaError(command + " job: unknown field \"" + item.key() + "\"");
    }
    if (cfg.contains("command") && cfg.at("command") != command)
        throw SchemaError("job config names command \"" +
                          cfg.at("command").get<std::string>() + "\" but \"" + command +
                          "\" was invoked");
}

uint64_t effective_seed(const CommonOpts& o, const Json& cfg) {
    if (o.seed) return *o.seed;
    if (cfg.contains("seed")) {
        if (!cfg.at("seed").is_number_unsigned())
            throw SchemaError("job seed must be a nonnegative integer");
        return cfg.at("seed").get<uint64_t>();
    }
    return kDefaultSeed;
}

std::string effective_out(const CommonOpts& o, const Json& cfg) {
    if (!o.out.empty()) return o.out;
    if (cfg.contains("out")) return cfg.at("out").get<std::string>();
    return {};
}

std::vector<int> int_vector(const Json& j, const std::string& what) {
    if (!j.is_array()) throw SchemaError(what + " must be an array of integers");
    std::vector<int> v;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw SchemaError(what + " must contain only integers");
        v.push_back(e.get<int>());
    }
    return v;
}

std::vector<double> double_vector(const Json& j, const std::string& what) {
    if (!j.is_array()) throw SchemaError(what + " must be an array of numbers");
    std::vector<double> v;
    for (const auto& e : j) {
        if (!e.is_number()) throw SchemaError(what + " must contain only numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

// Kernel for table-producing jobs: either a tabulated kernel, or an analytic
// family plus the grid to tabulate it on.
pfpp::GridKernel load_grid_kernel(const Json& cfg, const std::string& command) {
    pfpp::KernelSpec spec = pfpp::parse_kernel_spec(cfg.at("kernel"));
    if (spec.grid) {
        if (cfg.contains("grid"))
            throw SchemaError(command + " job: a tabulated kernel already fixes its grid");
        return *spec.grid;
    }
    if (!cfg.contains("grid"))
        throw SchemaError(command + " job: analytic kernels need a \"grid\" to tabulate");
    return pfpp::discretize(*spec.analytic, pfpp::parse_grid_spec(cfg.at("grid")));
}

int cmd_qdet(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "qdet", {"matrix"}, {});
    const pfpp::QMatrix m = cfg.at("matrix").get<pfpp::QMatrix>();
    pfpp::Quaternion value;
    if (m.declared_adjointness() == pfpp::Adjointness::AlmostSelfAdjoint)
        value = pfpp::qdet_recursive(m, m.declared_exceptional_row());
    else
        value = pfpp::Quaternion(pfpp::qdet(m));

    std::string human;
    if (pfpp::is_scalar(value)) {
        human = fmt15(value.q0.real());
        if (std::abs(value.q0.imag()) > 1e-14 * std::max(1.0, std::abs(value.q0.real())))
            human += " + " + fmt15(value.q0.imag()) + "i";
    } else {
        human = Json(value).dump();
    }
    std::cout << human << "\n";
    if (!effective_out(o, cfg).empty())
        write_text(effective_out(o, cfg), Json{{"value", value}}.dump(2) + "\n");
    return 0;
}

int cmd_correlations(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "correlations", {"kernel", "tuples"}, {"grid"});
    const pfpp::KernelSpec spec = pfpp::parse_kernel_spec(cfg.at("kernel"));
    if (!cfg.at("tuples").is_array())
        throw SchemaError("correlations job: tuples must be an array of point tuples");

    std::string csv;
    if (spec.analytic && !cfg.contains("grid")) {
        std::vector<std::vector<double>> tuples;
        for (const auto& row : cfg.at("tuples"))
            tuples.push_back(double_vector(row, "correlation tuple"));
        const std::vector<double> values = pfpp::correlation_batch(*spec.analytic, tuples);
        for (size_t i = 0; i < tuples.size(); ++i) {
            for (double x : tuples[i]) csv += fmt15(x) + ", ";
            csv += fmt15(values[i]) + "\n";
        }
    } else {
        const pfpp::GridKernel t = load_grid_kernel(cfg, "correlations");
        for (const auto& row : cfg.at("tuples")) {
            const std::vector<int> cells = int_vector(row, "correlation tuple");
            for (int c : cells) csv += std::to_string(c) + ", ";
            csv += fmt15(pfpp::grid_correlation(t, cells)) + "\n";
        }
    }
    write_text(effective_out(o, cfg), csv);
    return 0;
}

int cmd_palm(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "palm", {"kernel"}, {"points", "cells", "grid"});
    const pfpp::KernelSpec spec = pfpp::parse_kernel_spec(cfg.at("kernel"));
    pfpp::GridKernel result;
    if (spec.grid) {
        if (!cfg.contains("cells"))
            throw SchemaError("palm job: tabulated kernels reduce at \"cells\" indices");
        const std::vector<int> cells = int_vector(cfg.at("cells"), "palm cells");
        result = pfpp::palm_grid(*spec.grid, cells);
    } else {
        if (!cfg.contains("points") || !cfg.contains("grid"))
            throw SchemaError("palm job: analytic kernels need \"points\" and \"grid\"");
        const std::vector<double> pts = double_vector(cfg.at("points"), "palm points");
        const auto reduced = pfpp::palm(spec.analytic, pts);
        result = pfpp::discretize(*reduced, pfpp::parse_grid_spec(cfg.at("grid")));
    }
    write_text(effective_out(o, cfg), Json(result).dump(2) + "\n");
    return 0;
}

int cmd_kg(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "kg", {"kernel", "g"}, {"grid"});
    const pfpp::GridKernel t = load_grid_kernel(cfg, "kg");
    const std::vector<double> g = double_vector(cfg.at("g"), "kg weights");
    write_text(effective_out(o, cfg), Json(pfpp::kg_transform(t, g)).dump(2) + "\n");
    return 0;
}

int cmd_condition(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "condition", {"kernel", "window", "occupied"}, {"grid"});
    const pfpp::GridKernel t = load_grid_kernel(cfg, "condition");
    const std::vector<int> window = int_vector(cfg.at("window"), "condition window");
    const std::vector<int> occupied = int_vector(cfg.at("occupied"), "occupied cells");
    write_text(effective_out(o, cfg),
               Json(pfpp::conditional_kernel(t, window, occupied)).dump(2) + "\n");
    return 0;
}

int cmd_fredholm(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "fredholm", {"kernel"}, {"g", "grid"});
    const pfpp::GridKernel t = load_grid_kernel(cfg, "fredholm");
    pfpp::FredholmResult r;
    if (cfg.contains("g"))
        r = pfpp::expectation_multiplicative(t, double_vector(cfg.at("g"), "g weights"));
    else
        r = pfpp::fredholm_signed(t);
    const Json out{{"value", Json::array({r.value.real(), r.value.imag()})},
                   {"residual", r.residual},
                   {"steps", r.path_steps}};
    write_text(effective_out(o, cfg), out.dump(2) + "\n");
    return 0;
}

int cmd_oracle(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "oracle", {"kernel"}, {"grid"});
    const pfpp::GridKernel t = load_grid_kernel(cfg, "oracle");
    const pfpp::AtomTable atoms = pfpp::atom_oracle(t);
    const Json out{{"cells", atoms.cells},
                   {"atoms", atoms.prob},
                   {"inclusion", atoms.inclusion},
                   {"total", atoms.total},
                   {"min_atom", atoms.min_atom},
                   {"kernel", pfpp::table_fingerprint(t.table())}};
    write_text(effective_out(o, cfg), out.dump(2) + "\n");
    return 0;
}

int cmd_sample(const CommonOpts& o) {
    const Json cfg = load_config(o);
    check_job(cfg, "sample", {"kernel", "count"}, {"grid"});
    const pfpp::GridKernel t = load_grid_kernel(cfg, "sample");
    const int count = pfpp::int_field(cfg, "sample job", "count");
    const uint64_t seed = effective_seed(o, cfg);
    const pfpp::SampleBatch batch = pfpp::sequential_sample(t, seed, count);

    const Json header{{"seed", seed},
                      {"kernel", pfpp::table_fingerprint(t.table())},
                      {"cells", batch.cells},
                      {"count", count}};
    std::string csv = "# " + header.dump() + "\n";
    for (uint32_t mask : batch.occupancy) {
        for (int i = 0; i < batch.cells; ++i) {
            if (i) csv += ',';
            csv += ((mask >> i) & 1u) ? '1' : '0';
        }
        csv += '\n';
    }
    write_text(effective_out(o, cfg), csv);
    return 0;
}

int cmd_verify(const CommonOpts& o, bool quick) {
    pfpp::VerifyOptions vo;
    vo.quick = quick;
    Json cfg = Json::object();
    if (!o.config.empty()) {
        cfg = pfpp::load_json_file(o.config);
        check_job(cfg, "verify", {}, {"quick"});
        if (cfg.contains("quick")) vo.quick = vo.quick || cfg.at("quick").get<bool>();
    }
    vo.seed = effective_seed(o, cfg);

    const std::vector<pfpp::CheckResult> results = pfpp::run_verification(vo);
    Json summary = Json::array();
    for (const auto& r : results) {
        std::printf("[%2d] %s  %s (max err %.3g, tol %.3g, %.2f s)\n", r.id,
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.max_err, r.tol, r.seconds);
        if (!r.detail.empty()) std::printf("     %s\n", r.detail.c_str());
        summary.push_back(Json{{"id", r.id},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"max_err", r.max_err},
                               {"tol", r.tol},
                               {"seconds", r.seconds},
                               {"detail", r.detail}});
    }
    const bool ok = pfpp::all_passed(results);
    const Json out{{"pass", ok}, {"mode", vo.quick ? "quick" : "full"}, {"checks", summary}};
    const std::string out_path = effective_out(o, cfg);
    if (!out_path.empty())
        write_text(out_path, out.dump(2) + "\n");
    else
        std::cout << out.dump(2) << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pfaffian point process toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts o;
    bool quick = false;

    CLI::App* qdet = app.add_subcommand("qdet", "quaternion determinant of a matrix file");
    CLI::App* correlations =
        app.add_subcommand("correlations", "correlation functions over point tuples (CSV)");
    CLI::App* palm = app.add_subcommand("palm", "kernel reduced at given points");
    CLI::App* kg = app.add_subcommand("kg", "multiplicative-weight kernel transform");
    CLI::App* condition =
        app.add_subcommand("condition", "kernel conditioned on a window occupancy");
    CLI::App* fredholm =
        app.add_subcommand("fredholm", "Fredholm determinant / weighted expectation");
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force law of a finite kernel");
    CLI::App* sample = app.add_subcommand("sample", "draw occupancy samples (CSV)");
    CLI::App* verify = app.add_subcommand("verify", "run the full identity suite");
    verify->add_flag("--quick", quick, "smaller instance counts");
    for (CLI::App* cmd :
         {qdet, correlations, palm, kg, condition, fredholm, oracle, sample, verify})
        add_common(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

#ifdef _OPENMP
    if (o.threads > 0) omp_set_num_threads(o.threads);
#endif

    try {
        if (qdet->parsed()) return cmd_qdet(o);
        if (correlations->parsed()) return cmd_correlations(o);
        if (palm->parsed()) return cmd_palm(o);
        if (kg->parsed()) return cmd_kg(o);
        if (condition->parsed()) return cmd_condition(o);
        if (fredholm->parsed()) return cmd_fredholm(o);
        if (oracle->parsed()) return cmd_oracle(o);
        if (sample->parsed()) return cmd_sample(o);
        if (verify->parsed()) return cmd_verify(o, quick);
    } catch (const pfpp::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pfpp::DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
