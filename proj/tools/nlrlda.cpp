// Command-line front end: train/predict on CSV data, risk-curve sweeps, and
// the synthetic experiment harness (gamma profiles, Monte Carlo sweeps,
// consistency checks, deterministic limits).
//
// Exit codes: 0 success, 2 input error, 3 degenerate-classifier condition,
// 4 numerical non-convergence.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nlrlda/classifier.hpp"
#include "nlrlda/dataset.hpp"
#include "nlrlda/experiments.hpp"

namespace {

using namespace nlrlda;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNoConvergence = 4;

GammaGrid parse_gamma_grid(const std::string& text) {
    if (text.empty()) return GammaGrid::default_grid();
    GammaGrid grid;
    if (text.find(':') != std::string::npos) {
        double lo = 0, hi = 0;
        int count = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3)
            throw input_error("--gamma-grid expects 'lo:hi:count' or a comma list");
        return GammaGrid::log_spaced(lo, hi, count);
    }
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            grid.values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw input_error("bad gamma value '" + cell + "'");
        }
    }
    grid.validate();
    return grid;
}

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> methods;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) methods.push_back(parse_method(cell));
    if (methods.empty()) throw input_error("--methods must name at least one method");
    return methods;
}

std::vector<Eigen::Index> parse_index_list(const std::string& text, const char* flag) {
    std::vector<Eigen::Index> values;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            values.push_back(static_cast<Eigen::Index>(std::stoll(cell)));
        } catch (const std::exception&) {
            throw input_error(std::string("bad value '") + cell + "' in " + flag);
        }
    }
    if (values.empty()) throw input_error(std::string(flag) + " must list at least one value");
    return values;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    std::vector<int> out;
    for (Eigen::Index v : parse_index_list(text, flag)) out.push_back(static_cast<int>(v));
    return out;
}

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Expand "--config FILE" into flags the named subcommand understands. The
/// file holds flat "key = value" lines mirroring the CLI flags; values given
/// on the command line win, config entries fill the rest.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw io_error("cannot open config file '" + config_path + "'");
    std::vector<std::string> out = args;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw input_error("config file line is not 'key = value': '" + line + "'");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (key.empty()) throw input_error("config file has an empty key");
        const std::string flag = "--" + key;
        bool given = false;
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        if (!given) {
            out.push_back(flag);
            out.push_back(value);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NL-RLDA: regularized linear discriminant analysis with a nonlinear "
                 "precision-matrix estimator"};
    app.require_subcommand(1);

    // Shared state filled by whichever subcommand runs.
    std::string data_path, model_path, out_path, hist_out, dump_data;
    std::string gamma_grid_text, methods_text = "NL,LinearA,LinearB,Bayes";
    std::string n_grid_text, scales_text = "1,2,4";
    std::string variant_text = "appendix", c_convention_text = "ntilde";
    int cov_model = 1;
    long long p = 100, n = 50, n0 = -1, n1 = -1, test_size = 2000;
    double pi0 = 0.5, nu2 = 0.5, gamma = 1.0;
    long long trials = 500, seed = 1;
    int threads = 0;

    auto add_scenario = [&](CLI::App* cmd, bool with_trials) {
        cmd->add_option("--p", p, "feature dimension");
        cmd->add_option("--n", n, "training sample count");
        cmd->add_option("--n0", n0, "class-0 training count (default round(n*pi0))");
        cmd->add_option("--n1", n1, "class-1 training count (default n - n0)");
        cmd->add_option("--pi0", pi0, "class-0 prior");
        cmd->add_option("--nu2", nu2, "squared Mahalanobis distance between class means");
        cmd->add_option("--cov-model", cov_model, "covariance model {1,2,3}")
            ->check(CLI::Range(1, 3));
        cmd->add_option("--seed", seed, "base seed for per-trial streams");
        cmd->add_option("--test-size", test_size, "test samples per trial");
        if (with_trials) cmd->add_option("--trials", trials, "Monte Carlo trials");
    };
    auto add_estimator = [&](CLI::App* cmd) {
        cmd->add_option("--gamma-grid", gamma_grid_text,
                        "comma list of gammas, or lo:hi:count (log-spaced); default 10^(j/2), j=-10..10");
        cmd->add_option("--theorem2-variant", variant_text, "risk-estimator form {appendix,theorem}")
            ->check(CLI::IsMember({"appendix", "theorem"}));
    };
    std::string config_path;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
        cmd->add_option("--config", config_path,
                        "flat key = value file mirroring the flags; CLI overrides");
    };

    CLI::App* cmd_train = app.add_subcommand("train", "fit a model from a CSV dataset");
    cmd_train->add_option("--data", data_path, "training CSV")->required();
    cmd_train->add_option("--model", model_path, "output model file")->required();
    add_estimator(cmd_train);
    add_common(cmd_train);

    CLI::App* cmd_predict = app.add_subcommand("predict", "score a CSV dataset with a saved model");
    cmd_predict->add_option("--data", data_path, "input CSV")->required();
    cmd_predict->add_option("--model", model_path, "model file")->required();
    cmd_predict->add_option("--out", out_path, "prediction CSV (index,score,label)")->required();
    add_common(cmd_predict);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "estimated-risk curve over the gamma grid");
    cmd_sweep->add_option("--data", data_path, "training CSV (omit for synthetic data)");
    cmd_sweep->add_option("--out", out_path, "risk-curve CSV")->required();
    cmd_sweep->add_option("--dump-data", dump_data, "also write the generated dataset as CSV");
    add_scenario(cmd_sweep, false);
    add_estimator(cmd_sweep);
    add_common(cmd_sweep);

    CLI::App* cmd_profile =
        app.add_subcommand("profile", "fixed-gamma test error per method over the grid");
    cmd_profile->add_option("--out", out_path, "curve CSV")->required();
    cmd_profile->add_option("--methods", methods_text, "comma list of NL,LinearA,LinearB,LinearTarget,Bayes");
    add_scenario(cmd_profile, true);
    add_estimator(cmd_profile);
    add_common(cmd_profile);

    CLI::App* cmd_mc =
        app.add_subcommand("montecarlo", "full train+test error versus training size");
    cmd_mc->add_option("--out", out_path, "report CSV")->required();
    cmd_mc->add_option("--methods", methods_text, "comma list of methods");
    cmd_mc->add_option("--n-grid", n_grid_text, "comma list of training sizes (default --n)");
    cmd_mc->add_option("--gamma", gamma, "fixed gamma for the linear methods");
    add_scenario(cmd_mc, true);
    add_estimator(cmd_mc);
    add_common(cmd_mc);

    CLI::App* cmd_cons = app.add_subcommand(
        "consistency", "estimator-vs-oracle deviations at increasing (p, n), fixed ratio");
    cmd_cons->add_option("--out", out_path, "report CSV")->required();
    cmd_cons->add_option("--hist-out", hist_out, "selected-gamma histogram CSV");
    cmd_cons->add_option("--scales", scales_text, "comma list of (p,n) multipliers");
    cmd_cons->add_option("--gamma", gamma, "fixed gamma for the deterministic-limit column");
    cmd_cons->add_option("--c-convention", c_convention_text, "aspect ratio convention {ntilde,n}")
        ->check(CLI::IsMember({"ntilde", "n"}));
    add_scenario(cmd_cons, true);
    add_estimator(cmd_cons);
    add_common(cmd_cons);

    CLI::App* cmd_asym =
        app.add_subcommand("asymptotic", "deterministic error limits over the gamma grid");
    cmd_asym->add_option("--out", out_path, "curve CSV")->required();
    cmd_asym->add_option("--c-convention", c_convention_text, "aspect ratio convention {ntilde,n}")
        ->check(CLI::IsMember({"ntilde", "n"}));
    add_scenario(cmd_asym, false);
    add_estimator(cmd_asym);
    add_common(cmd_asym);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = apply_config_file(args);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    try {
        // CLI11 consumes the argument vector in reverse.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        ExperimentSpec spec;
        spec.scenario.model = static_cast<CovModel>(cov_model);
        spec.scenario.p = p;
        spec.scenario.n = n;
        if (n0 >= 0) spec.scenario.n0 = n0;
        if (n1 >= 0) spec.scenario.n1 = n1;
        spec.scenario.pi0 = pi0;
        spec.scenario.nu_sq = nu2;
        spec.scenario.trials = static_cast<int>(trials);
        spec.scenario.seed = static_cast<std::uint64_t>(seed);
        spec.scenario.test_size = test_size;
        spec.grid = parse_gamma_grid(gamma_grid_text);
        spec.fixed_gamma = gamma;
        spec.variant =
            variant_text == "appendix" ? Theorem2Variant::appendix : Theorem2Variant::theorem;
        spec.c_convention =
            c_convention_text == "ntilde" ? CConvention::ntilde : CConvention::n;
        spec.threads = threads;

        if (*cmd_train) {
            const LabeledDataset data = read_csv(data_path);
            const TrainedModel model = train(data, spec.grid, spec.variant);
            save_model(model, model_path);
            if (model.degenerate_fallback) {
                std::cerr << "warning: every grid point degenerated (D_c <= 0); saved the "
                             "prior-only fallback model\n";
                return kExitDegenerate;
            }
            std::cout << "selected gamma = " << format_double(model.gamma_star) << "\n";
            return kExitOk;
        }

        if (*cmd_predict) {
            const TrainedModel model = load_model(model_path);
            const LabeledDataset data = read_csv(data_path);
            const std::vector<double> scores = predict_scores(model, data.features);
            const std::vector<int> labels = predict(model, data.features);
            std::ofstream out(out_path);
            if (!out) throw io_error("cannot open '" + out_path + "' for writing");
            out << "index,score,label\n";
            for (std::size_t j = 0; j < labels.size(); ++j)
                out << j << ',' << format_double(scores[j]) << ',' << labels[j] << '\n';
            if (!out) throw io_error("write failed for '" + out_path + "'");
            return kExitOk;
        }

        if (*cmd_sweep) {
            LabeledDataset data;
            if (!data_path.empty()) {
                data = read_csv(data_path);
            } else {
                spec.scenario.validate();
                const PopulationModel pop =
                    make_population(spec.scenario.model, spec.scenario.p, spec.scenario.nu_sq);
                RngStream rng(spec.scenario.seed, 0);
                data = sample_gaussian(pop, spec.scenario.train_n0(), spec.scenario.train_n1(), rng);
            }
            if (!dump_data.empty()) write_csv(data, dump_data);
            const TrainedModel model = train(data, spec.grid, spec.variant);
            write_risk_curve_csv(model.risk_curve, spec.spec_hash("sweep"), spec.scenario.seed,
                                 grid_to_string(spec.grid), out_path);
            if (model.degenerate_fallback) {
                std::cerr << "warning: every grid point degenerated (D_c <= 0)\n";
                return kExitDegenerate;
            }
            std::cout << "selected gamma = " << format_double(model.gamma_star) << "\n";
            return kExitOk;
        }

        if (*cmd_profile) {
            spec.methods = parse_methods(methods_text);
            const ErrorReport report = run_gamma_profile(spec);
            write_report_csv(report, out_path, "gamma");
            return kExitOk;
        }

        if (*cmd_mc) {
            spec.methods = parse_methods(methods_text);
            const std::vector<Eigen::Index> n_grid =
                n_grid_text.empty() ? std::vector<Eigen::Index>{spec.scenario.n}
                                    : parse_index_list(n_grid_text, "--n-grid");
            const ErrorReport report = run_montecarlo(spec, n_grid);
            write_report_csv(report, out_path, "n");
            return kExitOk;
        }

        if (*cmd_cons) {
            const std::vector<int> scales = parse_int_list(scales_text, "--scales");
            const ConsistencyReport report = run_consistency_check(spec, scales);
            write_consistency_csv(report, out_path);
            std::string hist_path = hist_out;
            if (hist_path.empty()) {
                std::filesystem::path base(out_path);
                std::filesystem::path stem = base;
                stem.replace_extension();
                hist_path = stem.string() + "_gamma_hist" + base.extension().string();
            }
            write_gamma_hist_csv(report, hist_path);
            return kExitOk;
        }

        if (*cmd_asym) {
            const auto rows = run_asymptotic_curve(spec);
            write_asymptotic_csv(rows, spec.spec_hash("asymptotic"), spec.scenario.seed,
                                 grid_to_string(spec.grid), out_path);
            return kExitOk;
        }
    } catch (const no_convergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const convergence_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const degenerate_d& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
