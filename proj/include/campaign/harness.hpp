#pragma once

#include "campaign/control.hpp"

#include <string>
#include <vector>

namespace campaign {
namespace harness {

struct GenerationParams {
    // Scale rho(A) ~ U(0,1) exactly as printed instead of rho(A)/omega ~ U(0,1).
    // With omega = 0.01 that makes the branching ratio up to 100 and the
    // process explosive; the instance is built with allow_unstable set.
    bool paper_literal_scaling = false;
};

struct SyntheticInstance {
    NetworkModel model;
    ConstraintSet constraints;
    ObjectiveSpec cem;
    ObjectiveSpec mem;
    ObjectiveSpec les;

    const ObjectiveSpec& spec_for(ObjectiveKind k) const;
};

// One instance per the synthetic protocol: mu, a_ij ~ U[0, 0.1] with half the
// influence entries zeroed, B the unit-diagonal support adjacency of A,
// omega = 0.01, A rescaled for stability, caps/budgets/targets as configured.
SyntheticInstance generate_synthetic(Index n, Index M, double T, std::uint64_t seed,
                                     const GenerationParams& params = {});

enum class ExoKind { piecewise, sinusoid, decaying_exponential, quadratic };
ExoKind exo_kind_from_string(const std::string& s);

struct RatePoint {
    double t = 0.0;              // bin midpoint
    double theoretical = 0.0;    // network-averaged rate over the bin
    double empirical_mean = 0.0;
    double empirical_std = 0.0;  // across runs
};

struct RateReport {
    std::vector<RatePoint> points;
    double relative_l2_error = 0.0;
    Index within_3se = 0;  // probe points with |emp - theory| <= 3 std/sqrt(R)
    Index runs = 0;

    std::string to_csv() const;  // t,theoretical,empirical_mean,empirical_std
};

// Simulate R runs under the chosen exogenous drive and compare binned event
// rates against the closed-form mean intensity on probe_count uniform bins.
RateReport validate_rate(const NetworkModel& model, ExoKind kind, double T,
                         Index runs, Index probe_count, std::uint64_t seed,
                         const MatrixBackend& backend);

struct CertificationRow {
    double t = 0.0;
    double residual = 0.0;
};

struct CertificationReport {
    std::vector<CertificationRow> psi_renewal;  // relative renewal-identity residual
    std::vector<CertificationRow> gamma_quadrature;
    std::vector<CertificationRow> upsilon_quadrature;
    double max_psi_residual = 0.0;
    double max_gamma_residual = 0.0;
    double max_upsilon_residual = 0.0;

    std::string to_csv() const;  // check,t,residual
};

// Cross-checks the closed forms against composite-Simpson quadrature on a
// time grid: the renewal identity for Psi and the defining integrals of
// Gamma and Upsilon.
CertificationReport certify_closed_forms(const NetworkModel& model,
                                         const MatrixBackend& backend,
                                         Index grid_points = 50, double t_max = 5.0,
                                         Index simpson_panels = 400);

struct ExperimentConfig {
    std::string name = "campaign";
    ObjectiveKind objective = ObjectiveKind::cem;
    Index n = 100;
    Index M = 6;
    double T = 40.0;
    Index replications = 10;
    std::uint64_t seed = 1;
    ExposureMode mode = ExposureMode::cumulative;
    std::vector<std::string> methods = {"CLL", "OPL", "RND"};
    std::string model_file;  // optional: ingest instead of generating
    GenerationParams generation;

    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json() const;   // canonical echo (sorted keys)
    std::string hash() const;      // FNV-1a of the canonical echo
    void validate() const;
};

struct MethodResult {
    std::string method;
    std::vector<double> values;              // realized objective per replication
    std::vector<std::vector<double>> per_stage;  // [replication][stage]
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    bool failed = false;
    std::string status;
    double seconds = 0.0;  // wall time; reported in the sidecar only
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string config_hash;
    std::vector<MethodResult> methods;

    std::string to_json() const;     // deterministic bytes; excludes timing
    std::string to_csv() const;      // experiment,method,replication,stage,metric,value
    std::string timing_json() const; // sidecar, not part of the hashed report
};

// Build plans for every (method, replication) with common random numbers
// across methods, evaluate realized objectives, aggregate.
ExperimentReport run_campaign_experiment(const ExperimentConfig& config);

struct CascadeChoice {
    int winner = 1;  // 1 or 2
    bool tie = false;
    double cos1 = 0.0;
    double cos2 = 0.0;
};

// Per-stage prediction of which cascade reaches the better objective: the one
// whose exogenous intensity is closer (cosine similarity) to the prescribed
// optimal intervention. Throws std::invalid_argument on zero vectors.
std::vector<CascadeChoice> predict_cascade_pair(const std::vector<Vec>& u_opt,
                                                const std::vector<Vec>& mu_c1,
                                                const std::vector<Vec>& mu_c2);

struct IngestedModel {
    NetworkModel model;
    double T = 0.0;
    Index M = 0;
    std::vector<Vec> stage_mu;  // optional per-stage exogenous intensities
};

// Structured text model files: [meta] keys, then sparse triplet/pair sections
// [A], [mu], [B] and optional [mu_stage k] blocks. Parse errors carry the
// line number and field.
IngestedModel ingest_model(const std::string& path);
void emit_model(const std::string& path, const NetworkModel& model, double T, Index M,
                const std::vector<Vec>& stage_mu = {});

} // namespace harness
} // namespace campaign
