#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlrlda/asymptotics.hpp"
#include "nlrlda/classifier.hpp"
#include "nlrlda/synth.hpp"

namespace nlrlda {

enum class Method { NL, LinearA, LinearB, LinearTarget, Bayes };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// A synthetic scenario: population shape plus sampling sizes.
struct ScenarioConfig {
    CovModel model = CovModel::model1;
    Eigen::Index p = 100;
    Eigen::Index n = 50;
    std::optional<Eigen::Index> n0;  // default round(n * pi0)
    std::optional<Eigen::Index> n1;
    double pi0 = 0.5;
    double nu_sq = 0.5;
    int trials = 500;
    std::uint64_t seed = 1;
    Eigen::Index test_size = 2000;

    Eigen::Index train_n0() const;
    Eigen::Index train_n1() const;
    Eigen::Index test_n0() const;
    Eigen::Index test_n1() const;
    void validate() const;
};

struct ExperimentSpec {
    ScenarioConfig scenario;
    std::vector<Method> methods = {Method::NL, Method::LinearA, Method::LinearB, Method::Bayes};
    GammaGrid grid = GammaGrid::default_grid();
    double fixed_gamma = 1.0;  // linear methods in full-train runs
    Theorem2Variant variant = Theorem2Variant::appendix;
    CConvention c_convention = CConvention::ntilde;
    int threads = 0;  // 0 -> hardware concurrency

    /// FNV-1a hash over the canonical scenario string; embedded in every report.
    std::uint64_t spec_hash(const std::string& kind) const;
};

/// One (method, gamma) or (method, n) aggregate.
struct ReportRow {
    Method method = Method::NL;
    double key = 0.0;  // gamma for profiles, n for montecarlo sweeps
    double mean_error = 0.0;
    double std_error = 0.0;
    int trials_used = 0;
    int degenerate_trials = 0;
};

struct ErrorReport {
    std::string kind;
    std::uint64_t spec_hash = 0;
    std::uint64_t seed = 0;
    std::string grid_string;
    std::vector<ReportRow> rows;
    double wall_clock_s = 0.0;
};

/// Fixed-gamma evaluation of each method at every grid point: per trial,
/// draw train + test sets, estimate moments once, score the test set per
/// (method, gamma). Degenerate trials (zero score direction) are counted and
/// excluded from the average.
ErrorReport run_gamma_profile(const ExperimentSpec& spec);

/// Full train (gamma selected by the estimated-risk grid search) per trial
/// for the NL method; linear methods use spec.fixed_gamma; Bayes is exact.
/// One row per (method, n) over n_grid.
ErrorReport run_montecarlo(const ExperimentSpec& spec, const std::vector<Eigen::Index>& n_grid);

struct ConsistencyRow {
    Eigen::Index p = 0;
    Eigen::Index n = 0;
    int trials_used = 0;
    int degenerate_trials = 0;
    double mean_abs_dev_oracle = 0.0;   // mean |eps_hat(gamma*) - eps_oracle(gamma*)|
    double mean_abs_dev_holdout = 0.0;  // mean |eps_hat(gamma*) - holdout error|
    double mean_eps_hat = 0.0;
    double mean_eps_oracle = 0.0;
    double mean_eps_holdout = 0.0;
    double frac_gamma_in_band = 0.0;    // selected gamma >= 10^0.5
    double eps_bar_fixed_gamma = 0.0;   // deterministic limit at fixed_gamma
    double mean_err_fixed_gamma = 0.0;  // holdout error of NL at fixed_gamma
};

struct ConsistencyReport {
    std::uint64_t spec_hash = 0;
    std::uint64_t seed = 0;
    std::string grid_string;
    std::vector<ConsistencyRow> rows;
    std::vector<std::vector<std::pair<double, int>>> gamma_hist;  // per row: (gamma, count)
    double wall_clock_s = 0.0;
};

/// Estimator-vs-truth deviations at increasing (p, n) with the ratio fixed.
ConsistencyReport run_consistency_check(const ExperimentSpec& spec,
                                        const std::vector<int>& scales);

/// Deterministic limits over the grid, one row per gamma.
std::vector<DeterministicRisk> run_asymptotic_curve(const ExperimentSpec& spec);

/// CSV writers. Every file starts with "# spec_hash=... seed=... grid=..."
/// and ends with "# wall_clock_s=..." (the one line excluded from
/// byte-identity checks).
void write_report_csv(const ErrorReport& report, const std::string& path, const std::string& key_name);
void write_consistency_csv(const ConsistencyReport& report, const std::string& path);
void write_gamma_hist_csv(const ConsistencyReport& report, const std::string& path);
void write_asymptotic_csv(const std::vector<DeterministicRisk>& rows, std::uint64_t spec_hash,
                          std::uint64_t seed, const std::string& grid_string, const std::string& path);
void write_risk_curve_csv(const std::vector<RiskPoint>& curve, std::uint64_t spec_hash,
                          std::uint64_t seed, const std::string& grid_string, const std::string& path);

/// Deterministic parallel map: body(t) runs for t in [0, count) on a worker
/// pool; results must be written into per-index slots by the body.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

/// Shortest exact decimal for a double (round-trips bit-exactly).
std::string format_double(double v);

std::string grid_to_string(const GammaGrid& grid);

}  // namespace nlrlda
