#include "nlrlda/experiments.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

namespace nlrlda {

std::string method_name(Method m) {
    switch (m) {
        case Method::NL: return "NL";
        case Method::LinearA: return "LinearA";
        case Method::LinearB: return "LinearB";
        case Method::LinearTarget: return "LinearTarget";
        case Method::Bayes: return "Bayes";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::NL, Method::LinearA, Method::LinearB, Method::LinearTarget, Method::Bayes})
        if (method_name(m) == name) return m;
    throw input_error("unknown method '" + name + "'");
}

Eigen::Index ScenarioConfig::train_n0() const {
    if (n0) return *n0;
    return static_cast<Eigen::Index>(std::llround(static_cast<double>(n) * pi0));
}
Eigen::Index ScenarioConfig::train_n1() const { return n1 ? *n1 : n - train_n0(); }
Eigen::Index ScenarioConfig::test_n0() const {
    return static_cast<Eigen::Index>(std::llround(static_cast<double>(test_size) * pi0));
}
Eigen::Index ScenarioConfig::test_n1() const { return test_size - test_n0(); }

void ScenarioConfig::validate() const {
    if (p < 2) throw input_error("p must be >= 2");
    if (!(pi0 > 0.0 && pi0 < 1.0)) throw input_error("pi0 must be in (0,1)");
    if (train_n0() < 2 || train_n1() < 2)
        throw input_error("training class counts must both be >= 2");
    if (trials < 1) throw input_error("trials must be >= 1");
    if (test_size < 2) throw input_error("test_size must be >= 2");
    if (!(nu_sq > 0.0)) throw input_error("nu2 must be positive");
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string grid_to_string(const GammaGrid& grid) {
    std::string s;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        if (i) s += ',';
        s += format_double(grid.values[i]);
    }
    return s;
}

std::uint64_t ExperimentSpec::spec_hash(const std::string& kind) const {
    std::string canon = kind;
    canon += "|model=" + std::to_string(static_cast<int>(scenario.model));
    canon += "|p=" + std::to_string(scenario.p);
    canon += "|n=" + std::to_string(scenario.n);
    canon += "|n0=" + std::to_string(scenario.train_n0());
    canon += "|n1=" + std::to_string(scenario.train_n1());
    canon += "|pi0=" + format_double(scenario.pi0);
    canon += "|nu2=" + format_double(scenario.nu_sq);
    canon += "|trials=" + std::to_string(scenario.trials);
    canon += "|seed=" + std::to_string(scenario.seed);
    canon += "|test=" + std::to_string(scenario.test_size);
    canon += "|methods=";
    for (Method m : methods) canon += method_name(m) + ",";
    canon += "|grid=" + grid_to_string(grid);
    canon += "|gamma=" + format_double(fixed_gamma);
    canon += "|variant=" + std::string(variant == Theorem2Variant::appendix ? "appendix" : "theorem");
    canon += "|c=" + std::string(c_convention == CConvention::ntilde ? "ntilde" : "n");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct TrialErrors {
    std::vector<double> error;     // method-major, then gamma/n index
    std::vector<char> degenerate;  // same layout
};

double classify_error(const std::vector<double>& scores, Eigen::Index test_n0, double tau) {
    Eigen::Index wrong = 0;
    const Eigen::Index total = static_cast<Eigen::Index>(scores.size());
    for (Eigen::Index j = 0; j < total; ++j) {
        const int predicted = scores[static_cast<std::size_t>(j)] > tau ? 0 : 1;
        const int truth = j < test_n0 ? 0 : 1;
        if (predicted != truth) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(total);
}

/// Mean + standard error over the non-degenerate trials, folded in trial order.
ReportRow aggregate(Method m, double key, const std::vector<TrialErrors>& trials, std::size_t slot) {
    ReportRow row;
    row.method = m;
    row.key = key;
    double sum = 0.0;
    int used = 0;
    for (const TrialErrors& t : trials) {
        if (t.degenerate[slot]) {
            ++row.degenerate_trials;
            continue;
        }
        sum += t.error[slot];
        ++used;
    }
    row.trials_used = used;
    row.mean_error = used > 0 ? sum / used : 0.0;
    double ss = 0.0;
    for (const TrialErrors& t : trials) {
        if (t.degenerate[slot]) continue;
        const double d = t.error[slot] - row.mean_error;
        ss += d * d;
    }
    row.std_error = used > 1 ? std::sqrt(ss / (used - 1) / used) : 0.0;
    return row;
}

Eigen::VectorXd ridge_direction(const SymEig& eig, const Eigen::VectorXd& coeff, double gamma,
                                Method method) {
    Eigen::VectorXd f(eig.eigenvalues.size());
    for (Eigen::Index d = 0; d < f.size(); ++d) {
        const double l = eig.eigenvalues(d);
        switch (method) {
            case Method::NL: f(d) = l == 0.0 ? 0.0 : l / ((l + gamma) * (l + gamma)); break;
            case Method::LinearA: f(d) = 1.0 / (gamma * l + 1.0); break;
            case Method::LinearB: f(d) = 1.0 / (l + gamma); break;
            default: throw domain_error("ridge_direction: unsupported method");
        }
    }
    return eig.U * f.cwiseProduct(coeff).eval();
}

}  // namespace

ErrorReport run_gamma_profile(const ExperimentSpec& spec) {
    const auto t_start = std::chrono::steady_clock::now();
    const ScenarioConfig& sc = spec.scenario;
    sc.validate();
    spec.grid.validate();

    const PopulationModel pop = make_population(sc.model, sc.p, sc.nu_sq);
    const Eigen::LLT<Eigen::MatrixXd> pop_llt(pop.Sigma);
    const Eigen::VectorXd bayes_dir = pop_llt.solve(pop.mu0 - pop.mu1);
    const double bayes_offset = 0.5 * (pop.mu0 + pop.mu1).dot(bayes_dir);
    const double bayes_tau = std::log((1.0 - sc.pi0) / sc.pi0);

    const std::size_t n_gamma = spec.grid.values.size();
    const std::size_t n_methods = spec.methods.size();
    std::vector<TrialErrors> trials(static_cast<std::size_t>(sc.trials));

    parallel_for(sc.trials, spec.threads, [&](int t) {
        RngStream rng(sc.seed, static_cast<std::uint64_t>(t));
        const LabeledDataset train_set = sample_gaussian(pop, sc.train_n0(), sc.train_n1(), rng);
        const LabeledDataset test_set = sample_gaussian(pop, sc.test_n0(), sc.test_n1(), rng);
        const ClassStats stats = pooled_covariance(train_set);
        const SymEig eig = sym_eig(stats.S);
        const Eigen::VectorXd m = stats.m0 - stats.m1;
        const Eigen::VectorXd mid = 0.5 * (stats.m0 + stats.m1);
        const Eigen::VectorXd coeff = eig.U.transpose() * m;
        const double tau = stats.tau_hat();

        TrialErrors& out = trials[static_cast<std::size_t>(t)];
        out.error.assign(n_methods * n_gamma, 0.0);
        out.degenerate.assign(n_methods * n_gamma, 0);

        std::vector<double> scores(static_cast<std::size_t>(test_set.size()));
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            const Method method = spec.methods[mi];
            if (method == Method::Bayes) {
                for (Eigen::Index j = 0; j < test_set.size(); ++j)
                    scores[static_cast<std::size_t>(j)] =
                        test_set.features.col(j).dot(bayes_dir) - bayes_offset;
                const double err = classify_error(scores, sc.test_n0(), bayes_tau);
                for (std::size_t gi = 0; gi < n_gamma; ++gi) out.error[mi * n_gamma + gi] = err;
                continue;
            }
            for (std::size_t gi = 0; gi < n_gamma; ++gi) {
                const double gamma = spec.grid.values[gi];
                Eigen::VectorXd w;
                if (method == Method::LinearTarget) {
                    if (!(gamma > 0.0 && gamma < 1.0)) {
                        out.degenerate[mi * n_gamma + gi] = 1;
                        continue;
                    }
                    Eigen::MatrixXd combined = gamma * stats.S;
                    combined.diagonal() += (1.0 - gamma) * stats.S.diagonal();
                    Eigen::LLT<Eigen::MatrixXd> llt(combined);
                    if (llt.info() != Eigen::Success) {
                        out.degenerate[mi * n_gamma + gi] = 1;
                        continue;
                    }
                    w = llt.solve(m);
                } else {
                    w = ridge_direction(eig, coeff, gamma, method);
                }
                if (w.isZero(0.0)) {
                    out.degenerate[mi * n_gamma + gi] = 1;
                    continue;
                }
                const double offset = mid.dot(w);
                for (Eigen::Index j = 0; j < test_set.size(); ++j)
                    scores[static_cast<std::size_t>(j)] = test_set.features.col(j).dot(w) - offset;
                out.error[mi * n_gamma + gi] = classify_error(scores, sc.test_n0(), tau);
            }
        }
    });

    ErrorReport report;
    report.kind = "profile";
    report.spec_hash = spec.spec_hash(report.kind);
    report.seed = sc.seed;
    report.grid_string = grid_to_string(spec.grid);
    for (std::size_t mi = 0; mi < n_methods; ++mi)
        for (std::size_t gi = 0; gi < n_gamma; ++gi)
            report.rows.push_back(
                aggregate(spec.methods[mi], spec.grid.values[gi], trials, mi * n_gamma + gi));
    report.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

ErrorReport run_montecarlo(const ExperimentSpec& spec, const std::vector<Eigen::Index>& n_grid) {
    const auto t_start = std::chrono::steady_clock::now();
    const ScenarioConfig& base = spec.scenario;
    if (n_grid.empty()) throw input_error("montecarlo needs a non-empty n grid");

    const std::size_t n_methods = spec.methods.size();
    const std::size_t n_sizes = n_grid.size();
    std::vector<TrialErrors> trials(static_cast<std::size_t>(base.trials) * n_sizes);

    const PopulationModel pop = make_population(base.model, base.p, base.nu_sq);
    const Eigen::LLT<Eigen::MatrixXd> pop_llt(pop.Sigma);
    const Eigen::VectorXd bayes_dir = pop_llt.solve(pop.mu0 - pop.mu1);
    const double bayes_offset = 0.5 * (pop.mu0 + pop.mu1).dot(bayes_dir);
    const double bayes_tau = std::log((1.0 - base.pi0) / base.pi0);

    parallel_for(static_cast<int>(trials.size()), spec.threads, [&](int idx) {
        const std::size_t si = static_cast<std::size_t>(idx) / static_cast<std::size_t>(base.trials);
        ScenarioConfig sc = base;
        sc.n = n_grid[si];
        sc.n0.reset();
        sc.n1.reset();
        sc.validate();

        RngStream rng(sc.seed, static_cast<std::uint64_t>(idx));
        const LabeledDataset train_set = sample_gaussian(pop, sc.train_n0(), sc.train_n1(), rng);
        const LabeledDataset test_set = sample_gaussian(pop, sc.test_n0(), sc.test_n1(), rng);

        TrialErrors& out = trials[static_cast<std::size_t>(idx)];
        out.error.assign(n_methods, 0.0);
        out.degenerate.assign(n_methods, 0);

        std::vector<double> scores(static_cast<std::size_t>(test_set.size()));
        std::optional<TrainedModel> model;
        std::optional<ClassStats> stats;
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            const Method method = spec.methods[mi];
            if (method == Method::Bayes) {
                for (Eigen::Index j = 0; j < test_set.size(); ++j)
                    scores[static_cast<std::size_t>(j)] =
                        test_set.features.col(j).dot(bayes_dir) - bayes_offset;
                out.error[mi] = classify_error(scores, sc.test_n0(), bayes_tau);
                continue;
            }
            if (method == Method::NL) {
                if (!model) model = train(train_set, spec.grid, spec.variant);
                if (model->degenerate_fallback) {
                    out.degenerate[mi] = 1;
                    continue;
                }
                const std::vector<double> s = predict_scores(*model, test_set.features);
                out.error[mi] = classify_error(s, sc.test_n0(), model->tau_hat);
                continue;
            }
            if (!stats) stats = pooled_covariance(train_set);
            const PrecisionKind kind = method == Method::LinearA   ? PrecisionKind::LinearA
                                       : method == Method::LinearB ? PrecisionKind::LinearB
                                                                   : PrecisionKind::LinearTarget;
            try {
                const PrecisionOperator H = ridge_precision(stats->S, spec.fixed_gamma, kind);
                const Eigen::VectorXd w = H.apply(stats->m0 - stats->m1);
                if (w.isZero(0.0)) {
                    out.degenerate[mi] = 1;
                    continue;
                }
                const double offset = 0.5 * (stats->m0 + stats->m1).dot(w);
                for (Eigen::Index j = 0; j < test_set.size(); ++j)
                    scores[static_cast<std::size_t>(j)] = test_set.features.col(j).dot(w) - offset;
                out.error[mi] = classify_error(scores, sc.test_n0(), stats->tau_hat());
            } catch (const error&) {
                out.degenerate[mi] = 1;
            }
        }
    });

    ErrorReport report;
    report.kind = "montecarlo";
    report.spec_hash = spec.spec_hash(report.kind);
    report.seed = base.seed;
    report.grid_string = grid_to_string(spec.grid);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
        for (std::size_t si = 0; si < n_sizes; ++si) {
            std::vector<TrialErrors> slice(trials.begin() + static_cast<long>(si * base.trials),
                                           trials.begin() + static_cast<long>((si + 1) * base.trials));
            ReportRow row;
            row = aggregate(spec.methods[mi], static_cast<double>(n_grid[si]), slice, mi);
            report.rows.push_back(row);
        }
    }
    report.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

ConsistencyReport run_consistency_check(const ExperimentSpec& spec, const std::vector<int>& scales) {
    const auto t_start = std::chrono::steady_clock::now();
    const ScenarioConfig& base = spec.scenario;
    if (scales.empty()) throw input_error("consistency needs at least one scale");

    struct TrialResult {
        bool degenerate = false;
        double eps_hat = 0.0;
        double eps_oracle = 0.0;
        double eps_holdout = 0.0;
        double err_fixed_gamma = 0.0;
        double gamma_star = 0.0;
    };

    ConsistencyReport report;
    report.spec_hash = spec.spec_hash("consistency");
    report.seed = base.seed;
    report.grid_string = grid_to_string(spec.grid);

    for (std::size_t si = 0; si < scales.size(); ++si) {
        ScenarioConfig sc = base;
        sc.p = base.p * scales[si];
        sc.n = base.n * scales[si];
        sc.n0.reset();
        sc.n1.reset();
        sc.validate();
        const PopulationModel pop = make_population(sc.model, sc.p, sc.nu_sq);

        std::vector<TrialResult> results(static_cast<std::size_t>(sc.trials));
        parallel_for(sc.trials, spec.threads, [&](int t) {
            // Stream index offset keeps scales on disjoint streams.
            RngStream rng(sc.seed, static_cast<std::uint64_t>(si) * 1000003ULL +
                                       static_cast<std::uint64_t>(t));
            const LabeledDataset train_set = sample_gaussian(pop, sc.train_n0(), sc.train_n1(), rng);
            const LabeledDataset test_set = sample_gaussian(pop, sc.test_n0(), sc.test_n1(), rng);
            TrialResult& r = results[static_cast<std::size_t>(t)];
            const TrainedModel model = train(train_set, spec.grid, spec.variant);
            if (model.degenerate_fallback) {
                r.degenerate = true;
                return;
            }
            r.gamma_star = model.gamma_star;
            for (const RiskPoint& pt : model.risk_curve)
                if (!pt.degenerate && pt.gamma == model.gamma_star) r.eps_hat = pt.eps_hat;

            ClassStats stats;
            stats.m0 = model.m0;
            stats.m1 = model.m1;
            stats.n0 = model.n0;
            stats.n1 = model.n1;
            const PrecisionOperator H = model.precision();
            r.eps_oracle = oracle_conditional_error(pop, stats, H).eps;

            const std::vector<double> s = predict_scores(model, test_set.features);
            r.eps_holdout = classify_error(s, sc.test_n0(), model.tau_hat);

            const PrecisionOperator H_fixed = nl_precision(model.eig, RegParam{spec.fixed_gamma});
            const Eigen::VectorXd w = H_fixed.apply(model.m0 - model.m1);
            const double offset = 0.5 * (model.m0 + model.m1).dot(w);
            std::vector<double> sf(static_cast<std::size_t>(test_set.size()));
            for (Eigen::Index j = 0; j < test_set.size(); ++j)
                sf[static_cast<std::size_t>(j)] = test_set.features.col(j).dot(w) - offset;
            r.err_fixed_gamma = classify_error(sf, sc.test_n0(), model.tau_hat);
        });

        ConsistencyRow row;
        row.p = sc.p;
        row.n = sc.n;
        std::vector<std::pair<double, int>> hist;
        for (double g : spec.grid.values) hist.emplace_back(g, 0);
        const double band_lo = std::pow(10.0, 0.5) * (1.0 - 1e-12);
        int in_band = 0;
        for (const TrialResult& r : results) {
            if (r.degenerate) {
                ++row.degenerate_trials;
                continue;
            }
            ++row.trials_used;
            row.mean_abs_dev_oracle += std::abs(r.eps_hat - r.eps_oracle);
            row.mean_abs_dev_holdout += std::abs(r.eps_hat - r.eps_holdout);
            row.mean_eps_hat += r.eps_hat;
            row.mean_eps_oracle += r.eps_oracle;
            row.mean_eps_holdout += r.eps_holdout;
            row.mean_err_fixed_gamma += r.err_fixed_gamma;
            if (r.gamma_star >= band_lo) ++in_band;
            for (auto& [g, count] : hist)
                if (g == r.gamma_star) ++count;
        }
        if (row.trials_used > 0) {
            const double inv = 1.0 / row.trials_used;
            row.mean_abs_dev_oracle *= inv;
            row.mean_abs_dev_holdout *= inv;
            row.mean_eps_hat *= inv;
            row.mean_eps_oracle *= inv;
            row.mean_eps_holdout *= inv;
            row.mean_err_fixed_gamma *= inv;
            row.frac_gamma_in_band = static_cast<double>(in_band) / row.trials_used;
        }
        row.eps_bar_fixed_gamma =
            deterministic_risk(pop, sc.train_n0(), sc.train_n1(), spec.fixed_gamma, spec.c_convention)
                .eps_bar;
        report.rows.push_back(row);
        report.gamma_hist.push_back(std::move(hist));
    }
    report.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

std::vector<DeterministicRisk> run_asymptotic_curve(const ExperimentSpec& spec) {
    const ScenarioConfig& sc = spec.scenario;
    sc.validate();
    spec.grid.validate();
    const PopulationModel pop = make_population(sc.model, sc.p, sc.nu_sq);
    std::vector<DeterministicRisk> rows;
    rows.reserve(spec.grid.values.size());
    for (double gamma : spec.grid.values)
        rows.push_back(
            deterministic_risk(pop, sc.train_n0(), sc.train_n1(), gamma, spec.c_convention));
    return rows;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    return out;
}

void write_header(std::ofstream& out, std::uint64_t spec_hash, std::uint64_t seed,
                  const std::string& grid) {
    out << "# spec_hash=" << std::hex << spec_hash << std::dec << " seed=" << seed
        << " grid=" << grid << "\n";
}

}  // namespace

void write_report_csv(const ErrorReport& report, const std::string& path,
                      const std::string& key_name) {
    auto out = open_out(path);
    write_header(out, report.spec_hash, report.seed, report.grid_string);
    out << "method," << key_name << ",mean_error,std_error,trials,degenerate_trials\n";
    for (const ReportRow& r : report.rows)
        out << method_name(r.method) << ',' << format_double(r.key) << ','
            << format_double(r.mean_error) << ',' << format_double(r.std_error) << ','
            << r.trials_used << ',' << r.degenerate_trials << '\n';
    out << "# wall_clock_s=" << format_double(report.wall_clock_s) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

void write_consistency_csv(const ConsistencyReport& report, const std::string& path) {
    auto out = open_out(path);
    write_header(out, report.spec_hash, report.seed, report.grid_string);
    out << "p,n,trials,degenerate_trials,mean_abs_dev_oracle,mean_abs_dev_holdout,"
           "mean_eps_hat,mean_eps_oracle,mean_eps_holdout,frac_gamma_in_band,"
           "eps_bar_fixed_gamma,mean_err_fixed_gamma\n";
    for (const ConsistencyRow& r : report.rows)
        out << r.p << ',' << r.n << ',' << r.trials_used << ',' << r.degenerate_trials << ','
            << format_double(r.mean_abs_dev_oracle) << ',' << format_double(r.mean_abs_dev_holdout)
            << ',' << format_double(r.mean_eps_hat) << ',' << format_double(r.mean_eps_oracle)
            << ',' << format_double(r.mean_eps_holdout) << ','
            << format_double(r.frac_gamma_in_band) << ',' << format_double(r.eps_bar_fixed_gamma)
            << ',' << format_double(r.mean_err_fixed_gamma) << '\n';
    out << "# wall_clock_s=" << format_double(report.wall_clock_s) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

void write_gamma_hist_csv(const ConsistencyReport& report, const std::string& path) {
    auto out = open_out(path);
    write_header(out, report.spec_hash, report.seed, report.grid_string);
    out << "p,n,gamma,count\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        for (const auto& [gamma, count] : report.gamma_hist[i])
            out << report.rows[i].p << ',' << report.rows[i].n << ',' << format_double(gamma) << ','
                << count << '\n';
    out << "# wall_clock_s=" << format_double(report.wall_clock_s) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

void write_asymptotic_csv(const std::vector<DeterministicRisk>& rows, std::uint64_t spec_hash,
                          std::uint64_t seed, const std::string& grid_string,
                          const std::string& path) {
    auto out = open_out(path);
    write_header(out, spec_hash, seed, grid_string);
    out << "gamma,G_tilde_0,G_tilde_1,D_tilde,eps_bar\n";
    for (const DeterministicRisk& r : rows)
        out << format_double(r.gamma) << ',' << format_double(r.G_tilde_0) << ','
            << format_double(r.G_tilde_1) << ',' << format_double(r.D_tilde) << ','
            << format_double(r.eps_bar) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

void write_risk_curve_csv(const std::vector<RiskPoint>& curve, std::uint64_t spec_hash,
                          std::uint64_t seed, const std::string& grid_string,
                          const std::string& path) {
    auto out = open_out(path);
    write_header(out, spec_hash, seed, grid_string);
    out << "gamma,eps_hat,eps0_hat,eps1_hat,degenerate_flag\n";
    for (const RiskPoint& pt : curve) {
        out << format_double(pt.gamma) << ',';
        if (pt.degenerate)
            out << ",,,1\n";
        else
            out << format_double(pt.eps_hat) << ',' << format_double(pt.eps0_hat) << ','
                << format_double(pt.eps1_hat) << ",0\n";
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace nlrlda
