#include "otai/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "otai/analysis.hpp"
#include "otai/experiments.hpp"

namespace otai::cli {

namespace {

namespace fs = std::filesystem;
using analysis::FadingKind;
using experiments::DofMode;
using models::ModelKind;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPredicateFailed = 1;
constexpr int kExitComputation = 2;
constexpr int kExitIo = 3;
constexpr int kExitUsage = 64;

// Synthetic gradients draw from streams [kGradStreamTag, m], far away from
// the trial streams [t, ...] used by operator and noise sampling.
constexpr std::uint64_t kGradStreamTag = 0xffffffffffffffffULL;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raw option values shared by all subcommands before merging.
struct RawOptions {
    int d = 0;
    int s = 0;
    int M = 0;
    int trials = 0;
    int threads = 0;
    double sigma_gamma = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::string model;
    std::string fading;
    std::string dof;
    std::string alphas;
    std::string M_grid;
    std::string out;
    std::string grads_file;
    std::string config;
};

/// Fully merged configuration for one run.
struct RunConfig {
    std::string subcommand;
    std::optional<int> d, s, M, trials, threads;
    std::optional<double> sigma_gamma, delta, epsilon;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model, fading, dof, out, grads_file;
    std::optional<std::vector<double>> alphas;
    std::optional<std::vector<int>> M_grid;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

std::vector<double> parse_alphas(const std::string& text) {
    std::vector<double> values;
    for (const std::string& f : split(text, ',')) {
        char* end = nullptr;
        const double x = std::strtod(f.c_str(), &end);
        if (end == f.c_str() || *end != '\0') {
            throw UsageError("--alphas: cannot parse '" + f + "' as a real number");
        }
        values.push_back(x);
    }
    if (values.empty()) throw UsageError("--alphas: empty list");
    return values;
}

std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> values;
    for (const std::string& f : split(text, ',')) {
        try {
            values.push_back(std::stoi(f));
        } catch (const std::exception&) {
            throw UsageError("--M-grid: cannot parse '" + f + "' as an integer");
        }
    }
    if (values.empty()) throw UsageError("--M-grid: empty list");
    return values;
}

/// One mergeable option: its CLI handle plus flag and JSON readers.
struct Field {
    CLI::Option* opt = nullptr;
    std::function<void()> from_flag;
    std::function<void(const json&)> from_json;
};

struct SubcommandOptions {
    CLI::App* app = nullptr;
    RawOptions raw;
    std::map<std::string, Field> fields;

    /// Copies every flag the user actually gave into the run config.
    void apply_flags() const {
        for (const auto& [key, field] : fields) {
            if (field.opt->count() > 0) field.from_flag();
        }
    }

    void merge_config(const json& cfg) const {
        for (const auto& [key, field] : fields) {
            if (field.opt->count() > 0 || !cfg.contains(key)) continue;
            try {
                field.from_json(cfg.at(key));
            } catch (const UsageError&) {
                throw;
            } catch (const std::exception& e) {
                throw UsageError("config key '" + key + "': " + e.what());
            }
        }
    }
};

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("--config: cannot open " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw UsageError("--config: " + path + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("--config: " + path + " must hold a JSON object");
    return cfg;
}

std::optional<std::uint64_t> seed_from_env() {
    const char* env = std::getenv("OTA_INVERSE_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
        throw UsageError(std::string("OTA_INVERSE_SEED is not an unsigned integer: ") + env);
    }
    return static_cast<std::uint64_t>(v);
}

ModelKind parse_model(const std::string& name) {
    if (name == "shared") return ModelKind::SharedA;
    if (name == "per-user" || name == "per_user") return ModelKind::PerUserB;
    throw UsageError("--model must be 'shared' or 'per-user', got '" + name + "'");
}

FadingKind parse_fading(const std::string& name) {
    if (name == "identity") return FadingKind::Identity;
    if (name == "gaussian") return FadingKind::Gaussian;
    throw UsageError("--fading must be 'identity' or 'gaussian', got '" + name + "'");
}

DofMode parse_dof(const std::string& name) {
    if (name == "paper-d" || name == "paper_d") return DofMode::PaperD;
    if (name == "physical-s" || name == "physical_s") return DofMode::PhysicalS;
    throw UsageError("--dof must be 'paper-d' or 'physical-s', got '" + name + "'");
}

/// Resolves the alpha list for M users: a single value broadcasts.
std::vector<double> alphas_for(const RunConfig& cfg, int M) {
    if (!cfg.alphas) return std::vector<double>(static_cast<std::size_t>(M), 1.0);
    const auto& a = *cfg.alphas;
    if (a.size() == 1) return std::vector<double>(static_cast<std::size_t>(M), a.front());
    if (a.size() != static_cast<std::size_t>(M)) {
        throw UsageError("--alphas lists " + std::to_string(a.size()) + " values but M=" +
                         std::to_string(M));
    }
    return a;
}

models::SystemParams params_for(const RunConfig& cfg, int M) {
    models::SystemParams p;
    p.d = cfg.d.value();
    p.s = cfg.s.value();
    p.M = M;
    p.alphas = alphas_for(cfg, M);
    p.sigma_gamma = cfg.sigma_gamma.value_or(0.0);
    p.delta = cfg.delta.value_or(1.0);
    return p;
}

fs::path output_path(const RunConfig& cfg, const std::string& filename) {
    const fs::path dir(cfg.out.value_or("."));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    return dir / filename;
}

/// Aggregates all validation problems into a single usage error.
void validate(const RunConfig& cfg, const std::vector<std::string>& required) {
    std::vector<std::string> problems;
    static const std::map<std::string, std::string> flag_names = {
        {"d", "--d"},       {"s", "--s"},           {"M", "--M"},
        {"epsilon", "--epsilon"}, {"grads_file", "--grads-file"},
    };
    for (const std::string& key : required) {
        const bool present = (key == "d" && cfg.d) || (key == "s" && cfg.s) ||
                             (key == "M" && (cfg.M || cfg.M_grid)) ||
                             (key == "epsilon" && cfg.epsilon);
        if (!present) {
            const auto it = flag_names.find(key);
            std::string flag = it == flag_names.end() ? "--" + key : it->second;
            if (key == "M") flag = "--M or --M-grid";
            problems.push_back("missing required flag " + flag);
        }
    }
    if (cfg.d && *cfg.d < 1) problems.push_back("--d must be >= 1");
    if (cfg.s && *cfg.s < 1) problems.push_back("--s must be >= 1");
    if (cfg.M && *cfg.M < 1) problems.push_back("--M must be >= 1");
    if (cfg.trials && *cfg.trials < 1) problems.push_back("--trials must be >= 1");
    if (cfg.threads && *cfg.threads < 1) problems.push_back("--threads must be >= 1");
    if (cfg.sigma_gamma && !(*cfg.sigma_gamma >= 0.0)) {
        problems.push_back("--sigma-gamma must be >= 0");
    }
    if (cfg.delta && !(*cfg.delta > 0.0)) problems.push_back("--delta must be > 0");
    if (cfg.epsilon && !(*cfg.epsilon > 0.0)) problems.push_back("--epsilon must be > 0");
    if (cfg.alphas) {
        for (double a : *cfg.alphas) {
            if (!(a > 0.0)) {
                problems.push_back("--alphas entries must be > 0");
                break;
            }
        }
    }
    if (cfg.M_grid) {
        const auto& g = *cfg.M_grid;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] < 1 || (i > 0 && g[i] <= g[i - 1])) {
                problems.push_back("--M-grid must be strictly increasing positive integers");
                break;
            }
        }
    }
    if (cfg.model) parse_model(*cfg.model); // throws UsageError on bad value
    if (cfg.fading) parse_fading(*cfg.fading);
    if (cfg.dof) parse_dof(*cfg.dof);
    if (!problems.empty()) {
        std::string msg = "invalid configuration for '" + cfg.subcommand + "':";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw UsageError(msg);
    }
}

std::vector<int> grid_or_default(const RunConfig& cfg, std::vector<int> fallback) {
    if (cfg.M_grid) return *cfg.M_grid;
    if (cfg.M) return {*cfg.M};
    return fallback;
}

// ---------------------------------------------------------------- commands

int cmd_estimate(const RunConfig& cfg) {
    validate(cfg, {"d", "s", "M"});
    const int M = cfg.M ? *cfg.M : cfg.M_grid->front();
    const ModelKind kind = parse_model(cfg.model.value_or("per-user"));
    const auto params = params_for(cfg, M);
    const auto est = analysis::estimate_expected_cond(
        kind, params, parse_fading(cfg.fading.value_or("gaussian")),
        cfg.trials.value_or(200), cfg.seed.value_or(0), cfg.threads.value_or(1));
    experiments::write_estimate_csv(output_path(cfg, "estimate.csv").string(), kind, est, M);
    std::cout << "estimate: model=" << models::to_string(kind) << " d=" << *cfg.d
              << " s=" << *cfg.s << " M=" << M << " trials=" << est.trials
              << " mean=" << experiments::format_float(est.mean)
              << " stderr=" << experiments::format_float(est.stderr_)
              << " infinite=" << est.infinite_count << "\n";
    return kExitOk;
}

int cmd_solvability(const RunConfig& cfg) {
    validate(cfg, {"d", "s"});
    experiments::SweepSpec spec;
    spec.d = *cfg.d;
    spec.s = *cfg.s;
    spec.M_grid = grid_or_default(cfg, {1, 2, 4, 8, 16, 32});
    spec.trials = cfg.trials.value_or(200);
    spec.master_seed = cfg.seed.value_or(0);
    spec.model = parse_model(cfg.model.value_or("per-user"));
    spec.fading = FadingKind::Identity;
    spec.threads = cfg.threads.value_or(1);
    const auto report = experiments::run_solvability_sweep(spec);
    experiments::write_solvability_csv(output_path(cfg, "solvability.csv").string(), report);
    for (const auto& r : report.rows) {
        std::cout << "M=" << r.M << " mean=" << experiments::format_float(r.estimate.mean)
                  << " bound=" << experiments::format_float(r.bound)
                  << (r.satisfied ? " satisfied" : " NOT satisfied") << "\n";
    }
    std::cout << "solvability(" << models::to_string(spec.model) << "): "
              << (report.all_satisfied ? "all grid points satisfied"
                                       : "some grid points not satisfied")
              << "\n";
    return report.all_satisfied ? kExitOk : kExitPredicateFailed;
}

int cmd_security(const RunConfig& cfg) {
    validate(cfg, {"d", "s"});
    const ModelKind kind = parse_model(cfg.model.value_or("per-user"));
    const FadingKind fading = parse_fading(cfg.fading.value_or("gaussian"));
    const std::vector<int> grid = grid_or_default(cfg, {1, 2, 4, 8, 16, 32});
    const int trials = cfg.trials.value_or(200);
    const std::uint64_t seed = cfg.seed.value_or(0);
    const int threads = cfg.threads.value_or(1);
    models::SystemParams proto = params_for(cfg, grid.back());
    const auto report =
        analysis::run_paired_security(kind, proto, grid, trials, seed, threads, fading);
    experiments::write_security_csv(output_path(cfg, "security.csv").string(), report);
    for (const auto& r : report.rows) {
        std::cout << "M=" << r.M << " legit=" << experiments::format_float(r.legit.mean)
                  << " eaves=" << experiments::format_float(r.eaves.mean)
                  << (r.secure ? " secure" : " NOT secure") << "\n";
    }
    std::cout << "security(" << models::to_string(kind) << ", "
              << (fading == FadingKind::Gaussian ? "gaussian" : "identity")
              << " fading): " << (report.all_secure ? "secure at every grid point"
                                                    : "not secure at every grid point")
              << "\n";
    if (!report.all_secure && kind == ModelKind::SharedA && fading == FadingKind::Gaussian) {
        // For the shared model the sufficient condition compares
        // E[cond(H_1,...,H_M)] against (max_m sqrt(a_m)/min_m sqrt(a_m)) *
        // E[cond(A)]^2; the left side shrinks toward 1 as M grows, so it
        // eventually fails no matter the transmit power.
        const auto cond_a = analysis::estimate_expected_cond(
            ModelKind::SharedA, params_for(cfg, 1).with_users(1), FadingKind::Identity, trials,
            seed, threads);
        for (const auto& r : report.rows) {
            if (r.secure) continue;
            const auto cond_h = analysis::estimate_fading_cond(*cfg.s, r.M, trials, seed, threads);
            const bool vic7 = analysis::check_vic7(alphas_for(cfg, r.M), cond_a, cond_h);
            std::cout << "note: at M=" << r.M
                      << " the shared-model sufficient condition (cond of stacked fading vs. "
                         "power ratio times cond(A)^2) "
                      << (vic7 ? "still holds" : "fails") << ": E[cond(H)]="
                      << experiments::format_float(cond_h.mean)
                      << " vs E[cond(A)]^2=" << experiments::format_float(cond_a.mean * cond_a.mean)
                      << "\n";
        }
    }
    return report.all_secure ? kExitOk : kExitPredicateFailed;
}

int cmd_fig1(const RunConfig& cfg) {
    validate(cfg, {});
    experiments::SweepSpec spec;
    spec.d = cfg.d.value_or(100);
    spec.s = cfg.s.value_or(25);
    spec.M_grid = grid_or_default(cfg, {1, 2, 4, 8, 16, 32, 64});
    spec.trials = cfg.trials.value_or(10);
    spec.master_seed = cfg.seed.value_or(0);
    spec.model = ModelKind::PerUserB;
    spec.fading = parse_fading(cfg.fading.value_or("gaussian"));
    spec.threads = cfg.threads.value_or(1);
    const auto rows = experiments::run_fig1(spec);
    experiments::write_fig1_csv(output_path(cfg, "fig1.csv").string(), rows);
    for (const auto& r : rows) {
        std::cout << "M=" << r.M << " legit=" << experiments::format_float(r.legit_mean)
                  << " eaves=" << experiments::format_float(r.eaves_mean) << "\n";
    }
    std::cout << "fig1: wrote " << rows.size() << " rows (d=" << spec.d << ", s=" << spec.s
              << ", trials=" << spec.trials << ")\n";
    return kExitOk;
}

int cmd_concentration(const RunConfig& cfg) {
    validate(cfg, {"d", "s", "epsilon"});
    const int transmissions = cfg.trials.value_or(200);
    const DofMode dof = parse_dof(cfg.dof.value_or("physical-s"));
    const std::uint64_t seed = cfg.seed.value_or(0);
    const int threads = cfg.threads.value_or(1);

    std::vector<int> grid;
    std::optional<models::GradientSet> file_grads;
    if (cfg.grads_file) {
        file_grads = models::GradientSet::from_csv(*cfg.grads_file);
        if (cfg.M_grid) {
            throw UsageError("--grads-file fixes M to the file's row count; --M-grid cannot be "
                             "combined with it");
        }
        if (file_grads->length() != *cfg.d) {
            throw UsageError("--grads-file rows have " + std::to_string(file_grads->length()) +
                             " values but --d is " + std::to_string(*cfg.d));
        }
        if (cfg.M && *cfg.M != file_grads->users()) {
            throw UsageError("--M is " + std::to_string(*cfg.M) + " but --grads-file has " +
                             std::to_string(file_grads->users()) + " rows");
        }
        grid = {file_grads->users()};
    } else {
        grid = grid_or_default(cfg, {1, 2, 4, 8, 16, 32});
    }

    std::vector<experiments::ConcentrationRow> rows;
    for (int M : grid) {
        const auto params = params_for(cfg, M);
        models::GradientSet grads =
            file_grads ? *file_grads
                       : models::GradientSet::gaussian(M, *cfg.d, SeedSpec{seed, {kGradStreamTag}});
        grads.sparsify(params.delta);
        rows.push_back(experiments::run_concentration(params, grads, *cfg.epsilon, transmissions,
                                                      seed, dof, threads));
    }
    experiments::write_concentration_csv(output_path(cfg, "concentration.csv").string(), rows);
    for (const auto& r : rows) {
        std::cout << "M=" << r.M << " z=" << experiments::format_float(r.z)
                  << " empirical=" << experiments::format_float(r.empirical)
                  << " exact=" << experiments::format_float(r.exact)
                  << " bound=" << experiments::format_float(r.bound) << "\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------------ driver

void add_common_options(SubcommandOptions& sc, RunConfig& cfg) {
    auto& raw = sc.raw;
    CLI::App* app = sc.app;

    const auto add_int = [&](const std::string& flag, const std::string& key, int& slot,
                             std::optional<int>& target, const std::string& help) {
        CLI::Option* opt = app->add_option(flag, slot, help);
        sc.fields[key] = {opt, [&target, &slot] { target = slot; },
                          [&target](const json& j) { target = j.get<int>(); }};
    };
    const auto add_double = [&](const std::string& flag, const std::string& key, double& slot,
                                std::optional<double>& target, const std::string& help) {
        CLI::Option* opt = app->add_option(flag, slot, help);
        sc.fields[key] = {opt, [&target, &slot] { target = slot; },
                          [&target](const json& j) { target = j.get<double>(); }};
    };
    const auto add_string = [&](const std::string& flag, const std::string& key,
                                std::string& slot, std::optional<std::string>& target,
                                const std::string& help) {
        CLI::Option* opt = app->add_option(flag, slot, help);
        sc.fields[key] = {opt, [&target, &slot] { target = slot; },
                          [&target](const json& j) { target = j.get<std::string>(); }};
    };

    add_int("--d", "d", raw.d, cfg.d, "parameter-vector length per user");
    add_int("--s", "s", raw.s, cfg.s, "receiver endpoints");
    add_int("--M", "M", raw.M, cfg.M, "number of active users");
    add_int("--trials", "trials", raw.trials, cfg.trials,
            "Monte-Carlo trials (transmissions for 'concentration')");
    add_int("--threads", "threads", raw.threads, cfg.threads,
            "worker threads; results are independent of this value");
    add_double("--sigma-gamma", "sigma_gamma", raw.sigma_gamma, cfg.sigma_gamma,
               "channel-noise standard deviation");
    add_double("--delta", "delta", raw.delta, cfg.delta, "sparsification threshold");
    add_double("--epsilon", "epsilon", raw.epsilon, cfg.epsilon,
               "accuracy threshold for the concentration probability");
    add_string("--model", "model", raw.model, cfg.model, "forward model: shared | per-user");
    add_string("--fading", "fading", raw.fading, cfg.fading,
               "eavesdropper fading: identity | gaussian");
    add_string("--dof", "dof", raw.dof, cfg.dof,
               "chi-square degrees of freedom: paper-d | physical-s");
    add_string("--out", "out", raw.out, cfg.out, "output directory for CSV files");
    add_string("--grads-file", "grads_file", raw.grads_file, cfg.grads_file,
               "CSV with one gradient row per user");

    CLI::Option* seed_opt = app->add_option("--seed", raw.seed, "master seed (64-bit)");
    sc.fields["seed"] = {seed_opt, [&cfg, &raw] { cfg.seed = raw.seed; },
                         [&cfg](const json& j) {
                             if (j.is_string()) {
                                 cfg.seed = std::stoull(j.get<std::string>());
                             } else {
                                 cfg.seed = j.get<std::uint64_t>();
                             }
                         }};

    CLI::Option* alphas_opt =
        app->add_option("--alphas", raw.alphas, "power scalings: single value or comma list");
    sc.fields["alphas"] = {alphas_opt, [&cfg, &raw] { cfg.alphas = parse_alphas(raw.alphas); },
                           [&cfg](const json& j) {
                               if (j.is_number()) {
                                   cfg.alphas = std::vector<double>{j.get<double>()};
                               } else if (j.is_array()) {
                                   cfg.alphas = j.get<std::vector<double>>();
                               } else {
                                   cfg.alphas = parse_alphas(j.get<std::string>());
                               }
                           }};

    CLI::Option* grid_opt =
        app->add_option("--M-grid", raw.M_grid, "comma list of user counts, e.g. 1,2,4,8");
    sc.fields["M_grid"] = {grid_opt, [&cfg, &raw] { cfg.M_grid = parse_grid(raw.M_grid); },
                           [&cfg](const json& j) {
                               if (j.is_array()) {
                                   cfg.M_grid = j.get<std::vector<int>>();
                               } else {
                                   cfg.M_grid = parse_grid(j.get<std::string>());
                               }
                           }};

    app->add_option("--config", raw.config, "JSON config file; flags take precedence");
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Over-the-air FL forward models: condition-number estimation, "
                 "solvability/security predicates and concentration bounds"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::map<std::string, SubcommandOptions> subs;
    for (const std::string& name :
         {"estimate", "solvability", "security", "fig1", "concentration"}) {
        static const std::map<std::string, std::string> descriptions = {
            {"estimate", "Monte-Carlo estimate of E[cond] for one model and user count"},
            {"solvability", "estimates vs. closed-form bounds over an M-grid"},
            {"security", "paired legitimate vs. eavesdropper comparison over an M-grid"},
            {"fig1", "paired per-user sweep with and without fading mismatch"},
            {"concentration", "empirical vs. chi-square approximation probability"},
        };
        SubcommandOptions& sc = subs[name];
        sc.app = app.add_subcommand(name, descriptions.at(name));
        add_common_options(sc, cfg);
    }

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return kExitUsage;
        }

        const std::string name = app.get_subcommands().front()->get_name();
        cfg.subcommand = name;
        SubcommandOptions& sc = subs.at(name);
        sc.apply_flags();
        if (!sc.raw.config.empty()) {
            sc.merge_config(load_config_file(sc.raw.config));
        }
        if (!cfg.seed) cfg.seed = seed_from_env();

        if (name == "estimate") return cmd_estimate(cfg);
        if (name == "solvability") return cmd_solvability(cfg);
        if (name == "security") return cmd_security(cfg);
        if (name == "fig1") return cmd_fig1(cfg);
        return cmd_concentration(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
}

} // namespace otai::cli
