// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "campaign/control.hpp"
#include "campaign/harness.hpp"
#include "campaign/ratesolver.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace campaign;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

NetworkModel random_certification_model(std::uint64_t seed) {
    Rng rng(seed, 0xacc);
    const Index n = 2 + static_cast<Index>(rng.next_u64() % 9);  // n <= 10
    NetworkModel m;
    m.n = n;
    m.omega = rng.uniform(0.5, 2.0);
    m.A = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (rng.uniform01() < 0.6) m.A(i, j) = rng.uniform(0.0, 1.0);
    const double rho =
        Eigen::EigenSolver<Mat>(m.A, false).eigenvalues().cwiseAbs().maxCoeff();
    if (rho > 0) m.A *= rng.uniform(0.2, 0.9) * m.omega / rho;
    m.mu = Vec::Constant(n, 0.2);
    m.B = Mat::Identity(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j && m.A(i, j) > 0) m.B(i, j) = 1.0;
    m.validate();
    return m;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Closed-form certification on 20 random stable models.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_psi = 0.0, worst_gamma = 0.0, worst_upsilon = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const NetworkModel m = random_certification_model(seed);
        const MatrixBackend backend(m);
        const auto rep = harness::certify_closed_forms(m, backend, 10, 4.0, 400);
        worst_psi = std::max(worst_psi, rep.max_psi_residual);
        worst_gamma = std::max(worst_gamma, rep.max_gamma_residual);
        worst_upsilon = std::max(worst_upsilon, rep.max_upsilon_residual);
    }
    const double secs = elapsed_s(t0);
    const bool pass = worst_psi <= 1e-5 && worst_gamma <= 1e-8 &&
                      worst_upsilon <= 1e-8 && secs < 60.0;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "max renewal residual %.2e (<=1e-5), gamma %.2e, upsilon %.2e "
                  "(<=1e-8), %.1f s (<60)",
                  worst_psi, worst_gamma, worst_upsilon, secs);
    report(1, "closed-form certification", pass, detail);
}

// ---------------------------------------------------------------------------
// 2. Rate vs simulation at n = 50 with piecewise-constant controls.
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto inst = harness::generate_synthetic(50, 6, 40.0, 424242);
    const MatrixBackend backend(inst.model);
    const auto r100 =
        harness::validate_rate(inst.model, harness::ExoKind::piecewise, 40.0, 100, 200,
                               31415, backend);
    const auto r5 =
        harness::validate_rate(inst.model, harness::ExoKind::piecewise, 40.0, 5, 200,
                               31415, backend);
    const double secs = elapsed_s(t0);
    const double frac =
        static_cast<double>(r100.within_3se) / static_cast<double>(r100.points.size());
    const bool pass = frac >= 0.95 && r100.relative_l2_error < r5.relative_l2_error &&
                      secs < 300.0;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "%zu/%zu probes within 3 SE (>=95%%), rel L2 %.4f (R=100) < %.4f "
                  "(R=5), %.1f s (<300)",
                  static_cast<std::size_t>(r100.within_3se), r100.points.size(),
                  r100.relative_l2_error, r5.relative_l2_error, secs);
    report(2, "rate vs simulation", pass, detail);
}

// ---------------------------------------------------------------------------
// 3. Thm 2 vs Thm 3 agreement on piecewise-constant input.
void criterion_3() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const NetworkModel m = random_certification_model(100 + seed);
        const MatrixBackend backend(m);
        const double T = 8.0;
        Rng rng(seed, 0x3e3);
        PiecewiseExo exo;
        exo.breakpoints = {0.0, T / 4.0, T / 2.0, 3.0 * T / 4.0};
        for (int k = 0; k < 4; ++k) {
            Vec level(m.n);
            for (Index i = 0; i < m.n; ++i) level(i) = rng.uniform(0.1, 0.8);
            exo.levels.push_back(level);
        }
        auto fn = [&](double t) { return exo.at(std::min(t, T)); };
        for (double t : {0.35 * T, 0.7 * T, T}) {
            const Vec a = ratesolver::eta_piecewise(m, exo, t, backend);
            const Vec b = ratesolver::eta_general(m, fn, t, 1e-3 * T, backend);
            worst = std::max(worst, (a - b).lpNorm<Eigen::Infinity>());
        }
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max discrepancy %.2e (<=1e-6)", worst);
    report(3, "piecewise vs general rate path", worst <= 1e-6, detail);
}

// ---------------------------------------------------------------------------
// 4. Exposure operators vs 5000-run Monte Carlo, both modes, n<=5, M<=4.
void criterion_4() {
    const Index n = 4, M = 4;
    NetworkModel m = random_certification_model(77);
    // Rebuild at the pinned size with a livelier drive.
    {
        Rng rng(513);
        m.n = n;
        m.omega = 1.0;
        m.A = Mat::Zero(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (rng.uniform01() < 0.6) m.A(i, j) = rng.uniform(0.0, 1.0);
        const double rho =
            Eigen::EigenSolver<Mat>(m.A, false).eigenvalues().cwiseAbs().maxCoeff();
        m.A *= 0.6 * m.omega / rho;
        m.mu = Vec::Constant(n, 0.25);
        m.B = Mat::Identity(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (i != j && m.A(i, j) > 0) m.B(i, j) = 1.0;
        m.validate();
    }
    const StageSchedule sched(M, 8.0);
    auto backend = std::make_shared<const MatrixBackend>(m);
    auto ops = std::make_shared<const OperatorTable>(m, sched, backend);
    ConstraintSet cs;
    cs.price.assign(M, Vec::Ones(n));
    cs.budget.assign(M, 1.0);
    cs.cap.assign(M, Vec::Constant(n, 0.5));

    const Index l = 1;
    Rng rng(8819);
    std::vector<Vec> controls(M, Vec::Zero(n));
    for (Index k = l; k < M; ++k)
        for (Index i = 0; i < n; ++i) controls[k](i) = rng.uniform(0.0, 0.4);
    const Vec x_l = Vec::Constant(n, 0.3);

    const Index runs = 5000;
    Mat sums(M - l, n), sqs(M - l, n);
    sums.setZero();
    sqs.setZero();
    for (Index r = 0; r < runs; ++r) {
        const EventSequence seq = hawkes::simulate(m, controls, sched, x_l, sched.tau(l),
                                                   sched.T, Rng(5151).stream(r));
        for (Index k = l; k < M; ++k) {
            const Vec e =
                hawkes::exposure_counts(seq, m.B, sched.tau(k), sched.tau(k + 1));
            sums.row(k - l) += e.transpose();
            sqs.row(k - l) += e.transpose().cwiseProduct(e.transpose());
        }
    }

    Vec u_hat((M - l) * n);
    for (Index k = l; k < M; ++k) u_hat.segment((k - l) * n, n) = controls[k];

    bool pass = true;
    double worst_sigma = 0.0;
    for (ExposureMode mode : {ExposureMode::per_stage, ExposureMode::cumulative}) {
        const auto lem = build_exposure_model(ops, l, cs, mode);
        const Vec predicted = mean_exposure(lem, u_hat, m.mu, x_l);
        for (Index r = 0; r < M - l; ++r)
            for (Index i = 0; i < n; ++i) {
                const Index k_first = mode == ExposureMode::cumulative ? 0 : r;
                double mc = 0.0, var = 0.0;
                for (Index k = k_first; k <= r; ++k) {
                    const double mean_k = sums(k, i) / runs;
                    mc += mean_k;
                    var += sqs(k, i) / runs - mean_k * mean_k;
                }
                const double se = std::sqrt(std::max(var, 1e-12) / runs);
                // Cumulative stages are positively correlated; the summed
                // variance understates them, so the 3SE band uses a factor 2
                // cushion there (6 SE), still a coordinatewise check.
                const double band = (mode == ExposureMode::cumulative ? 6.0 : 3.0) * se;
                const double dev = std::abs(predicted(r * n + i) - mc);
                worst_sigma = std::max(worst_sigma, dev / std::max(se, 1e-300));
                if (dev > band) pass = false;
            }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "worst |predicted - MC| = %.2f SE over both modes (gate 3 SE "
                  "per-stage, 6 SE cumulative)",
                  worst_sigma);
    report(4, "exposure operators vs Monte Carlo", pass, detail);
}

// ---------------------------------------------------------------------------
// 5. Solver optimality vs a brute-force lattice on 25 tiny instances.
struct TinyInstance {
    NetworkModel model;
    StageSchedule schedule;
    ConstraintSet constraints;
    ObjectiveSpec cem, mem, les;
    std::shared_ptr<const OperatorTable> ops;
};

TinyInstance make_tiny(Index n, Index M, std::uint64_t seed) {
    TinyInstance t{.model = {}, .schedule = StageSchedule(M, 2.0 * M)};
    Rng rng(seed, 0x71);
    NetworkModel& m = t.model;
    m.n = n;
    m.omega = 1.0;
    m.A = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (rng.uniform01() < 0.7) m.A(i, j) = rng.uniform(0.0, 1.0);
    const double rho =
        Eigen::EigenSolver<Mat>(m.A, false).eigenvalues().cwiseAbs().maxCoeff();
    if (rho > 0) m.A *= rng.uniform(0.3, 0.8) * m.omega / rho;
    m.mu = Vec(n);
    for (Index i = 0; i < n; ++i) m.mu(i) = rng.uniform(0.05, 0.2);
    m.B = Mat::Identity(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j && m.A(i, j) > 0) m.B(i, j) = 1.0;
    m.validate();

    for (Index k = 0; k < M; ++k) {
        t.constraints.price.push_back(Vec::Ones(n));
        t.constraints.budget.push_back(rng.uniform(0.1, 0.3) * n);
        t.constraints.cap.push_back(Vec::Constant(n, rng.uniform(0.3, 0.7)));
    }
    t.cem.kind = ObjectiveKind::cem;
    t.mem.kind = ObjectiveKind::mem;
    t.les.kind = ObjectiveKind::les;
    for (Index k = 0; k < M; ++k) {
        Vec beta(n), target(n);
        for (Index i = 0; i < n; ++i) {
            beta(i) = rng.uniform(0.5, 2.5);
            target(i) = rng.uniform(0.5, 2.5);
        }
        t.cem.beta.push_back(beta);
        t.les.target.push_back(target);
    }
    auto backend = std::make_shared<const MatrixBackend>(m);
    t.ops = std::make_shared<const OperatorTable>(m, t.schedule, backend);
    return t;
}

double lattice_best(const LinearExposureModel& lem, const ObjectiveSpec& spec,
                    const Vec& mu, const Vec& x_l, Index ppd) {
    const Index d = lem.dim(), n = lem.n();
    std::vector<Index> idx(d, 0);
    const bool maximize = spec.kind != ObjectiveKind::les;
    double best = maximize ? -1e300 : 1e300;
    while (true) {
        Vec u(d);
        for (Index k = 0; k < d; ++k) {
            const Index stage = lem.l + k / n;
            u(k) = lem.constraints.cap[stage](k % n) * static_cast<double>(idx[k]) /
                   static_cast<double>(ppd - 1);
        }
        bool feasible = true;
        for (Index r = 0; r < lem.remaining() && feasible; ++r)
            if (lem.constraints.price[lem.l + r].dot(u.segment(r * n, n)) >
                lem.constraints.budget[lem.l + r] + 1e-12)
                feasible = false;
        if (feasible) {
            const double v = predicted_objective(lem, spec, mu, x_l, u);
            best = maximize ? std::max(best, v) : std::min(best, v);
        }
        Index k = 0;
        for (; k < d; ++k) {
            if (++idx[k] < ppd) break;
            idx[k] = 0;
        }
        if (k == d) break;
    }
    return best;
}

double lattice_cell_slack(const LinearExposureModel& lem, const ObjectiveSpec& spec,
                          Index ppd) {
    const Mat X = lem.X();
    double lipschitz;
    if (spec.kind == ObjectiveKind::les)
        lipschitz = 2.0 * X.norm() * (X.norm() + 10.0);
    else
        lipschitz = X.cwiseAbs().colwise().sum().maxCoeff();
    double cell = 0.0;
    for (Index r = 0; r < lem.remaining(); ++r)
        cell = std::max(cell, lem.constraints.cap[lem.l + r].maxCoeff());
    cell /= static_cast<double>(ppd - 1);
    return lipschitz * cell * std::sqrt(static_cast<double>(lem.dim())) + 1e-9;
}

void criterion_5() {
    bool pass = true;
    std::string why;
    int count = 0;
    const std::pair<Index, Index> shapes[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}};
    for (std::uint64_t seed = 1; seed <= 5 && pass; ++seed) {
        for (const auto& [n, M] : shapes) {
            const TinyInstance t = make_tiny(n, M, 900 + seed);
            const auto lem = build_exposure_model(t.ops, 0, t.constraints,
                                                  ExposureMode::cumulative);
            const Vec x = Vec::Constant(n, 0.1);
            const Index ppd = (n * M <= 2) ? 33 : (n * M <= 4) ? 17 : 9;

            struct Case {
                const char* name;
                SolveReport rep;
                const ObjectiveSpec* spec;
            };
            std::vector<Case> cases;
            cases.push_back({"cem", solve_cem(lem, t.model.mu, x, t.cem.beta), &t.cem});
            cases.push_back({"mem", solve_mem(lem, t.model.mu, x), &t.mem});
            cases.push_back(
                {"les", solve_les(lem, t.model.mu, x, t.les.D, t.les.target), &t.les});
            for (const Case& c : cases) {
                if (!c.rep.success) {
                    pass = false;
                    why = std::string(c.name) + " solver failed";
                    break;
                }
                const bool maximize = c.spec->kind != ObjectiveKind::les;
                const double lattice = lattice_best(lem, *c.spec, t.model.mu, x, ppd);
                const double slack = lattice_cell_slack(lem, *c.spec, ppd);
                const bool dominates = maximize ? c.rep.objective >= lattice - 1e-9
                                                : c.rep.objective <= lattice + 1e-9;
                const bool close = std::abs(c.rep.objective - lattice) <= slack;
                const bool feasible = c.rep.budget_residual <= 1e-9 &&
                                      c.rep.cap_residual <= 1e-9 &&
                                      c.rep.nonneg_residual <= 1e-9;
                const bool certified = c.rep.certificate_residual <= 1e-7;
                if (!(dominates && close && feasible && certified)) {
                    pass = false;
                    char buf[256];
                    std::snprintf(buf, sizeof(buf),
                                  "%s at n=%lld M=%lld seed=%llu: obj %.8f lattice %.8f "
                                  "slack %.2e feas(%d) cert %.1e",
                                  c.name, static_cast<long long>(n),
                                  static_cast<long long>(M),
                                  static_cast<unsigned long long>(seed), c.rep.objective,
                                  lattice, slack, feasible,
                                  c.rep.certificate_residual);
                    why = buf;
                    break;
                }
            }
            ++count;
            if (!pass) break;
        }
    }
    char detail[320];
    if (pass)
        std::snprintf(detail, sizeof(detail),
                      "%d tiny instances x 3 solvers within lattice resolution, "
                      "feasible to 1e-9, certificates <=1e-7",
                      count);
    else
        std::snprintf(detail, sizeof(detail), "%s", why.c_str());
    report(5, "solver optimality vs lattice oracle", pass, detail);
}

// ---------------------------------------------------------------------------
// 6. Model-predicted dominance over every applicable baseline allocation.
void criterion_6() {
    bool pass = true;
    std::string why;
    int checks = 0;
    for (std::uint64_t seed = 1; seed <= 10 && pass; ++seed) {
        const auto inst = harness::generate_synthetic(12, 3, 12.0, 7000 + seed);
        const StageSchedule sched(3, 12.0);
        auto backend = std::make_shared<const MatrixBackend>(inst.model);
        auto ops = std::make_shared<const OperatorTable>(inst.model, sched, backend);
        const auto lem =
            build_exposure_model(ops, 0, inst.constraints, ExposureMode::per_stage);
        const Index n = 12, M = 3;
        const Vec x0 = Vec::Zero(n);

        for (ObjectiveKind kind :
             {ObjectiveKind::cem, ObjectiveKind::mem, ObjectiveKind::les}) {
            const ObjectiveSpec& spec = inst.spec_for(kind);
            const SolveReport opt = solve_objective(lem, spec, inst.model.mu, x0);
            if (!opt.success) {
                pass = false;
                why = "solver failed";
                break;
            }
            const double opt_val =
                predicted_objective(lem, spec, inst.model.mu, x0, opt.u_hat);

            std::vector<baselines::HeuristicKind> kinds = {baselines::HeuristicKind::rnd};
            if (kind == ObjectiveKind::cem) {
                kinds.push_back(baselines::HeuristicKind::prk);
                kinds.push_back(baselines::HeuristicKind::wei);
            } else if (kind == ObjectiveKind::mem) {
                kinds.push_back(baselines::HeuristicKind::wfl);
                kinds.push_back(baselines::HeuristicKind::prp);
            } else {
                kinds.push_back(baselines::HeuristicKind::grd);
                kinds.push_back(baselines::HeuristicKind::rel);
            }

            for (const auto hk : kinds) {
                // Deterministic certainty-equivalent rollout for the heuristic.
                Rng hrng(seed, 0xb0b);
                Vec x = x0;
                Vec prev_expo = Vec::Zero(n);
                Vec u_hat = Vec::Zero(n * M);
                for (Index m = 0; m < M; ++m) {
                    Rng stage_rng = hrng.stream(m);
                    const Vec u = baselines::allocate({hk, 0.85}, inst.model,
                                                      inst.constraints, m, x, prev_expo,
                                                      spec, stage_rng);
                    u_hat.segment(m * n, n) = u;
                    const auto sub = build_exposure_model(ops, m, inst.constraints,
                                                          ExposureMode::per_stage);
                    Vec pad = Vec::Zero(sub.dim());
                    pad.head(n) = u;
                    prev_expo = mean_exposure(sub, pad, inst.model.mu, x).head(n);
                    const Vec drive = inst.model.mu + u;
                    x = ratesolver::psi_action(inst.model, sched.delta(), drive,
                                               *backend) -
                        drive + backend->expm_st(sched.delta(), x);
                }
                const double heur_val =
                    predicted_objective(lem, spec, inst.model.mu, x0, u_hat);
                const bool dominated = kind == ObjectiveKind::les
                                           ? opt_val <= heur_val + 1e-7
                                           : opt_val >= heur_val - 1e-7;
                ++checks;
                if (!dominated) {
                    pass = false;
                    char buf[256];
                    std::snprintf(buf, sizeof(buf),
                                  "%s beaten by %s on seed %llu: %.10f vs %.10f",
                                  to_string(kind), baselines::to_string(hk),
                                  static_cast<unsigned long long>(seed), opt_val,
                                  heur_val);
                    why = buf;
                    break;
                }
            }
            if (!pass) break;
        }
    }
    char detail[320];
    if (pass)
        std::snprintf(detail, sizeof(detail),
                      "%d baseline allocations weakly dominated across 10 instances x 3 "
                      "objectives",
                      checks);
    else
        std::snprintf(detail, sizeof(detail), "%s", why.c_str());
    report(6, "model-predicted dominance", pass, detail);
}

// ---------------------------------------------------------------------------
// 7. Desk-scale campaign ordering with common random numbers.
void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string summary;
    for (ObjectiveKind kind : {ObjectiveKind::cem, ObjectiveKind::mem, ObjectiveKind::les}) {
        harness::ExperimentConfig cfg;
        cfg.name = "acceptance7";
        cfg.objective = kind;
        cfg.n = 100;
        cfg.M = 6;
        cfg.T = 40.0;
        cfg.replications = 10;
        cfg.seed = 2024;
        cfg.mode = ExposureMode::per_stage;
        cfg.methods = {"CLL", "OPL", "RND"};
        if (kind == ObjectiveKind::cem) {
            cfg.methods.push_back("PRK");
            cfg.methods.push_back("WEI");
        } else if (kind == ObjectiveKind::mem) {
            cfg.methods.push_back("WFL");
            cfg.methods.push_back("PRP");
        } else {
            cfg.methods.push_back("GRD");
            cfg.methods.push_back("REL");
        }
        const auto rep = harness::run_campaign_experiment(cfg);

        double cll_mean = 0.0, cll_std = 0.0, opl_mean = 0.0, opl_std = 0.0;
        bool ordered = true;
        std::string order;
        for (const auto& m : rep.methods) {
            if (m.failed) {
                pass = false;
                summary += std::string(" [") + m.method + " failed]";
                continue;
            }
            if (m.method == "CLL") {
                cll_mean = m.mean;
                cll_std = m.stddev;
            }
            if (m.method == "OPL") {
                opl_mean = m.mean;
                opl_std = m.stddev;
            }
            char buf[96];
            std::snprintf(buf, sizeof(buf), " %s=%.4f", m.method.c_str(), m.mean);
            order += buf;
        }
        for (const auto& m : rep.methods)
            if (!m.failed && m.method != "CLL" && cll_mean < m.mean - 1e-9)
                ordered = false;
        const double pooled_se =
            std::sqrt((cll_std * cll_std + opl_std * opl_std) / 10.0);
        const bool non_inferior = cll_mean >= opl_mean - pooled_se;
        if (!(ordered && non_inferior)) pass = false;
        summary += std::string(" ") + to_string(kind) + ":" + order +
                   (ordered ? " [CLL best]" : " [ORDER FAILED]") +
                   (non_inferior ? "" : " [OPL margin FAILED]") + ";";
    }
    const double secs = elapsed_s(t0);
    char detail[512];
    std::snprintf(detail, sizeof(detail), "%s %.0f s", summary.c_str(), secs);
    report(7, "desk-scale campaign ordering (n=100, M=6, T=40, R=10)", pass, detail);
}

// ---------------------------------------------------------------------------
// 8. Determinism: identical config hash => byte-identical reports.
void criterion_8() {
    harness::ExperimentConfig cfg;
    cfg.name = "acceptance8";
    cfg.objective = ObjectiveKind::cem;
    cfg.n = 20;
    cfg.M = 3;
    cfg.T = 12.0;
    cfg.replications = 4;
    cfg.seed = 99;
    cfg.mode = ExposureMode::per_stage;
    cfg.methods = {"CLL", "OPL", "RND", "PRK", "WEI"};
    const auto a = harness::run_campaign_experiment(cfg);
    const auto b = harness::run_campaign_experiment(cfg);
    const bool pass = a.config_hash == b.config_hash && a.to_json() == b.to_json() &&
                      a.to_csv() == b.to_csv();
    report(8, "byte-identical reports under rerun", pass,
           pass ? "config hash " + a.config_hash + ", json+csv bytes equal"
                : "rerun bytes differ");
}

// ---------------------------------------------------------------------------
// 9. Absolute paper margins are declared not reproducible.
void criterion_9() {
    report(9, "absolute margins not reproduced by design", true,
           "the paper's '>=10', '0.1', '10^3' margins depend on unpublished instances; "
           "replaced by criteria 5-7 per the specification");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
