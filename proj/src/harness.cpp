#include "campaign/harness.hpp"

#include "campaign/ratesolver.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace campaign {
namespace harness {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void parallel_for(Index count, const std::function<void(Index)>& fn) {
    const Index workers =
        std::min<Index>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (Index i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<Index> next{0};
    std::vector<std::thread> pool;
    for (Index w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (Index i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace

const ObjectiveSpec& SyntheticInstance::spec_for(ObjectiveKind k) const {
    switch (k) {
        case ObjectiveKind::cem: return cem;
        case ObjectiveKind::mem: return mem;
        case ObjectiveKind::les: return les;
    }
    throw std::logic_error("spec_for: unknown kind");
}

namespace {

// Constraint and objective parameters drawn with the synthetic-protocol
// distributions; also used when the network itself is ingested from a file.
void draw_parameters(SyntheticInstance& inst, Index n, Index M, Rng& rng) {
    Vec alpha(n);
    for (Index i = 0; i < n; ++i) alpha(i) = rng.uniform(0.0, 0.1);

    inst.constraints.price.assign(M, Vec::Ones(n));
    inst.constraints.cap.assign(M, alpha);
    inst.constraints.budget.resize(M);
    for (Index m = 0; m < M; ++m)
        inst.constraints.budget[m] = (static_cast<double>(n) / 10.0) * rng.uniform(0.0, 0.1);

    inst.cem.kind = ObjectiveKind::cem;
    inst.cem.beta.resize(M);
    for (Index m = 0; m < M; ++m) {
        inst.cem.beta[m] = Vec(n);
        for (Index i = 0; i < n; ++i) inst.cem.beta[m](i) = rng.uniform(0.0, 1.0);
    }

    inst.mem.kind = ObjectiveKind::mem;

    inst.les.kind = ObjectiveKind::les;
    inst.les.target.resize(M);
    for (Index m = 0; m < M; ++m) {
        inst.les.target[m] = Vec(n);
        for (Index i = 0; i < n; ++i)
            inst.les.target[m](i) = (static_cast<double>(n) / 10.0) * rng.uniform(0.0, 1.0);
    }
}

} // namespace

SyntheticInstance generate_synthetic(Index n, Index M, double T, std::uint64_t seed,
                                     const GenerationParams& params) {
    if (n < 2) throw std::invalid_argument("generate_synthetic: n must be >= 2");
    Rng rng(seed, /*stream=*/0x5e7);

    SyntheticInstance inst;
    NetworkModel& model = inst.model;
    model.n = n;
    model.omega = 0.01;
    model.mu = Vec(n);
    for (Index i = 0; i < n; ++i) model.mu(i) = rng.uniform(0.0, 0.1);

    Mat raw(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) raw(i, j) = rng.uniform(0.0, 0.1);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (rng.uniform01() < 0.5) raw(i, j) = 0.0;

    // B is the unit-diagonal support adjacency of the influence matrix; the
    // threshold is applied before stability rescaling so the graph does not
    // collapse to the identity when A is shrunk.
    model.B = Mat::Identity(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j && raw(i, j) >= 1e-4) model.B(i, j) = 1.0;

    const double rho_raw =
        Eigen::EigenSolver<Mat>(raw, false).eigenvalues().cwiseAbs().maxCoeff();
    model.A = Mat::Zero(n, n);
    if (rho_raw > 0.0) {
        const double ratio = rng.uniform01();
        const double target = params.paper_literal_scaling ? ratio : ratio * model.omega;
        model.A = raw * (target / rho_raw);
    }
    model.allow_unstable = params.paper_literal_scaling;

    draw_parameters(inst, n, M, rng);
    (void)T;
    model.validate();
    return inst;
}

ExoKind exo_kind_from_string(const std::string& s) {
    if (s == "piecewise") return ExoKind::piecewise;
    if (s == "sinusoid") return ExoKind::sinusoid;
    if (s == "decaying-exponential" || s == "decaying_exponential")
        return ExoKind::decaying_exponential;
    if (s == "quadratic") return ExoKind::quadratic;
    throw std::invalid_argument("unknown exogenous kind: " + s);
}

std::string RateReport::to_csv() const {
    std::string out = "t,theoretical,empirical_mean,empirical_std\n";
    for (const RatePoint& p : points) {
        out += format_double(p.t) + "," + format_double(p.theoretical) + "," +
               format_double(p.empirical_mean) + "," + format_double(p.empirical_std) + "\n";
    }
    return out;
}

RateReport validate_rate(const NetworkModel& model, ExoKind kind, double T,
                         Index runs, Index probe_count, std::uint64_t seed,
                         const MatrixBackend& backend) {
    if (runs < 1 || probe_count < 1)
        throw std::invalid_argument("validate_rate: runs and probe_count must be >= 1");
    const Index n = model.n;
    Rng rng(seed, /*stream=*/0xa7e);

    // The drive is simulated as a piecewise-constant function; smooth kinds
    // are discretized on a grid four times finer than the probe bins.
    PiecewiseExo exo;
    const bool piecewise = kind == ExoKind::piecewise;
    if (piecewise) {
        const Index stages = 5;
        for (Index m = 0; m < stages; ++m) {
            exo.breakpoints.push_back(static_cast<double>(m) * T / stages);
            Vec level(n);
            for (Index i = 0; i < n; ++i) level(i) = model.mu(i) + rng.uniform(0.1, 0.2);
            exo.levels.push_back(level);
        }
    } else {
        Vec phase(n), amp(n);
        for (Index i = 0; i < n; ++i) phase(i) = rng.uniform(0.0, 6.283185307179586);
        for (Index i = 0; i < n; ++i) amp(i) = rng.uniform(0.05, 0.15);
        auto smooth = [&](double t) {
            Vec level(n);
            for (Index i = 0; i < n; ++i) {
                switch (kind) {
                    case ExoKind::sinusoid:
                        level(i) = 0.15 + 0.05 * std::sin(6.283185307179586 * t / T + phase(i));
                        break;
                    case ExoKind::decaying_exponential:
                        level(i) = 0.1 + amp(i) * std::exp(-3.0 * t / T);
                        break;
                    case ExoKind::quadratic:
                        level(i) = 0.1 + 4.0 * amp(i) * (t / T) * (1.0 - t / T);
                        break;
                    default:
                        level(i) = 0.0;
                }
            }
            return level;
        };
        const Index grid = probe_count * 4;
        for (Index g = 0; g < grid; ++g) {
            const double t = static_cast<double>(g) * T / grid;
            exo.breakpoints.push_back(t);
            exo.levels.push_back(smooth(t));
        }
    }
    exo.validate();

    // Simulate with mu = 0 and the exo levels supplied as stage controls.
    NetworkModel sim_model = model;
    sim_model.mu = Vec::Zero(n);
    const Index sim_stages = static_cast<Index>(exo.breakpoints.size());
    StageSchedule sim_schedule(sim_stages, T);
    std::vector<Vec> controls(sim_stages);
    for (Index m = 0; m < sim_stages; ++m) controls[m] = exo.levels[m];

    const double h = T / static_cast<double>(probe_count);
    Mat bin_rates(runs, probe_count);
    bin_rates.setZero();
    for (Index r = 0; r < runs; ++r) {
        const EventSequence seq =
            hawkes::simulate(sim_model, controls, sim_schedule, Vec::Zero(n), 0.0, T,
                             Rng(seed).stream(r));
        for (const Event& e : seq.events) {
            Index b = static_cast<Index>(e.time / h);
            if (b >= probe_count) b = probe_count - 1;
            bin_rates(r, b) += 1.0;
        }
    }
    bin_rates /= static_cast<double>(n) * h;

    RateReport report;
    report.runs = runs;
    double num = 0.0, den = 0.0;
    for (Index b = 0; b < probe_count; ++b) {
        RatePoint p;
        p.t = (b + 0.5) * h;
        const Vec bin_eta =
            ratesolver::eta_piecewise_integral(sim_model, exo, b * h, (b + 1) * h, backend);
        p.theoretical = bin_eta.sum() / (static_cast<double>(n) * h);
        p.empirical_mean = bin_rates.col(b).mean();
        p.empirical_std = runs > 1
            ? std::sqrt((bin_rates.col(b).array() - p.empirical_mean).square().sum() /
                        static_cast<double>(runs - 1))
            : 0.0;
        const double se = runs > 1 ? p.empirical_std / std::sqrt(static_cast<double>(runs))
                                   : std::abs(p.theoretical);
        if (std::abs(p.empirical_mean - p.theoretical) <= 3.0 * se + 1e-12)
            ++report.within_3se;
        num += (p.empirical_mean - p.theoretical) * (p.empirical_mean - p.theoretical);
        den += p.theoretical * p.theoretical;
        report.points.push_back(p);
    }
    report.relative_l2_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    return report;
}

namespace {

// Composite Simpson over [0, t]; f maps abscissa to a matrix.
Mat simpson(const std::function<Mat(double)>& f, double t, Index panels) {
    if (panels % 2 != 0) ++panels;
    const double h = t / static_cast<double>(panels);
    Mat acc = f(0.0) + f(t);
    for (Index j = 1; j < panels; ++j)
        acc += f(j * h) * (j % 2 == 1 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

} // namespace

std::string CertificationReport::to_csv() const {
    std::string out = "check,t,residual\n";
    auto emit = [&out](const char* name, const std::vector<CertificationRow>& rows) {
        for (const CertificationRow& r : rows)
            out += std::string(name) + "," + format_double(r.t) + "," +
                   format_double(r.residual) + "\n";
    };
    emit("psi_renewal", psi_renewal);
    emit("gamma_quadrature", gamma_quadrature);
    emit("upsilon_quadrature", upsilon_quadrature);
    return out;
}

CertificationReport certify_closed_forms(const NetworkModel& model,
                                         const MatrixBackend& backend,
                                         Index grid_points, double t_max,
                                         Index simpson_panels) {
    CertificationReport report;
    const Index n = model.n;
    const Mat I = Mat::Identity(n, n);
    for (Index g = 1; g <= grid_points; ++g) {
        const double t = t_max * static_cast<double>(g) / static_cast<double>(grid_points);

        const Mat psi_t = ratesolver::psi(model, t, backend);
        const Mat conv = simpson(
            [&](double s) {
                return Mat(model.A * std::exp(-model.omega * (t - s)) *
                           ratesolver::psi(model, s, backend));
            },
            t, simpson_panels);
        const double scale = std::max(1.0, psi_t.cwiseAbs().rowwise().sum().maxCoeff());
        const double r_psi =
            (psi_t - I - conv).cwiseAbs().rowwise().sum().maxCoeff() / scale;
        report.psi_renewal.push_back({t, r_psi});
        report.max_psi_residual = std::max(report.max_psi_residual, r_psi);

        const Mat gamma_t = ratesolver::gamma(model, t, backend);
        const Mat gamma_quad = model.B * simpson(
            [&](double s) { return ratesolver::psi(model, s, backend); }, t, simpson_panels);
        const double r_gamma = (gamma_t - gamma_quad).cwiseAbs().maxCoeff();
        report.gamma_quadrature.push_back({t, r_gamma});
        report.max_gamma_residual = std::max(report.max_gamma_residual, r_gamma);

        const Mat ups_t = ratesolver::upsilon(model, t, backend);
        const Mat ups_quad = model.B * simpson(
            [&](double s) { return backend.expm_st_matrix(s); }, t, simpson_panels);
        const double r_ups = (ups_t - ups_quad).cwiseAbs().maxCoeff();
        report.upsilon_quadrature.push_back({t, r_ups});
        report.max_upsilon_residual = std::max(report.max_upsilon_residual, r_ups);
    }
    return report;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (j.contains("objective"))
        cfg.objective = objective_from_string(j.at("objective").get<std::string>());
    if (j.contains("n")) cfg.n = j.at("n").get<Index>();
    if (j.contains("M")) cfg.M = j.at("M").get<Index>();
    if (j.contains("T")) cfg.T = j.at("T").get<double>();
    if (j.contains("replications")) cfg.replications = j.at("replications").get<Index>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mode"))
        cfg.mode = exposure_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("model_file")) cfg.model_file = j.at("model_file").get<std::string>();
    if (j.contains("paper_literal_scaling"))
        cfg.generation.paper_literal_scaling = j.at("paper_literal_scaling").get<bool>();
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;  // std::map keys: canonical sorted order
    j["name"] = name;
    j["objective"] = to_string(objective);
    j["n"] = n;
    j["M"] = M;
    j["T"] = T;
    j["replications"] = replications;
    j["seed"] = seed;
    j["mode"] = to_string(mode);
    j["methods"] = methods;
    j["model_file"] = model_file;
    j["paper_literal_scaling"] = generation.paper_literal_scaling;
    return j.dump();
}

std::string ExperimentConfig::hash() const {
    const std::string text = to_json();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void ExperimentConfig::validate() const {
    if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
    if (methods.empty()) throw std::invalid_argument("config: methods must be non-empty");
    if (M < 1 || T <= 0.0) throw std::invalid_argument("config: need M >= 1 and T > 0");
}

ExperimentReport run_campaign_experiment(const ExperimentConfig& config) {
    config.validate();

    SyntheticInstance inst;
    if (config.model_file.empty()) {
        inst = generate_synthetic(config.n, config.M, config.T, config.seed,
                                  config.generation);
    } else {
        const IngestedModel ingested = ingest_model(config.model_file);
        inst.model = ingested.model;
        Rng rng(config.seed, /*stream=*/0x5e7);
        draw_parameters(inst, inst.model.n, config.M, rng);
        inst.model.validate();
    }
    const ObjectiveSpec& spec = inst.spec_for(config.objective);
    spec.validate(inst.model.n, config.M);

    const StageSchedule schedule(config.M, config.T);
    auto backend = std::make_shared<const MatrixBackend>(inst.model);
    auto ops = std::make_shared<const OperatorTable>(inst.model, schedule, backend);

    struct Task {
        Index method_index;
        Index replication;
    };
    std::vector<Task> tasks;
    for (Index mi = 0; mi < static_cast<Index>(config.methods.size()); ++mi)
        for (Index r = 0; r < config.replications; ++r)
            tasks.push_back({mi, r});

    struct Slot {
        double value = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> per_stage;
        bool failed = false;
        std::string status;
        double seconds = 0.0;
    };
    std::vector<Slot> slots(tasks.size());

    parallel_for(static_cast<Index>(tasks.size()), [&](Index ti) {
        const Task& task = tasks[ti];
        Slot& slot = slots[ti];
        const std::string& method = config.methods[task.method_index];
        const auto start = std::chrono::steady_clock::now();
        try {
            SimulatorSource source(inst.model, schedule, config.seed,
                                   static_cast<std::uint64_t>(task.replication));
            InterventionPlan plan;
            if (method == "CLL") {
                plan = closed_loop_run(ops, spec, inst.constraints, source, config.mode);
            } else if (method == "OPL") {
                plan = open_loop_run(ops, spec, inst.constraints, source, config.mode);
            } else {
                baselines::HeuristicSpec h{baselines::heuristic_from_string(method), 0.85};
                plan = heuristic_run(h, ops, spec, inst.constraints, source, config.mode,
                                     Rng(config.seed, 0xbead).stream(task.replication));
            }
            if (plan.failed) {
                slot.failed = true;
                slot.status = "failed at stage " + std::to_string(plan.failed_stage) +
                              ": " + plan.status;
            } else {
                slot.value = plan.objective_total;
                for (const StageRecord& s : plan.stages)
                    slot.per_stage.push_back(s.objective_stage);
            }
        } catch (const std::exception& err) {
            slot.failed = true;
            slot.status = err.what();
        }
        slot.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    ExperimentReport report;
    report.config = config;
    report.config_hash = config.hash();
    for (Index mi = 0; mi < static_cast<Index>(config.methods.size()); ++mi) {
        MethodResult res;
        res.method = config.methods[mi];
        for (Index r = 0; r < config.replications; ++r) {
            const Slot& slot = slots[mi * config.replications + r];
            res.values.push_back(slot.value);
            res.per_stage.push_back(slot.per_stage);
            res.seconds += slot.seconds;
            if (slot.failed) {
                res.failed = true;
                if (!res.status.empty()) res.status += "; ";
                res.status += "rep " + std::to_string(r) + ": " + slot.status;
            }
        }
        if (!res.failed) {
            const double R = static_cast<double>(res.values.size());
            for (double v : res.values) res.mean += v;
            res.mean /= R;
            if (res.values.size() > 1) {
                double ss = 0.0;
                for (double v : res.values) ss += (v - res.mean) * (v - res.mean);
                res.stddev = std::sqrt(ss / (R - 1.0));
            }
        } else {
            res.mean = std::numeric_limits<double>::quiet_NaN();
            res.stddev = std::numeric_limits<double>::quiet_NaN();
        }
        report.methods.push_back(std::move(res));
    }
    return report;
}

std::string ExperimentReport::to_json() const {
    ordered_json j;
    j["config"] = nlohmann::json::parse(config.to_json());
    j["config_hash"] = config_hash;
    j["methods"] = ordered_json::array();
    for (const MethodResult& m : methods) {
        ordered_json mj;
        mj["method"] = m.method;
        mj["failed"] = m.failed;
        mj["status"] = m.status;
        mj["mean"] = m.mean;
        mj["stddev"] = m.stddev;
        mj["values"] = m.values;
        j["methods"].push_back(std::move(mj));
    }
    return j.dump(2);
}

std::string ExperimentReport::to_csv() const {
    std::string out = "experiment,method,replication,stage,metric,value\n";
    for (const MethodResult& m : methods) {
        for (std::size_t r = 0; r < m.values.size(); ++r) {
            for (std::size_t s = 0; s < m.per_stage[r].size(); ++s)
                out += config.name + "," + m.method + "," + std::to_string(r) + "," +
                       std::to_string(s) + ",objective_stage," +
                       format_double(m.per_stage[r][s]) + "\n";
            out += config.name + "," + m.method + "," + std::to_string(r) +
                   ",-1,objective_total," + format_double(m.values[r]) + "\n";
        }
    }
    return out;
}

std::string ExperimentReport::timing_json() const {
    ordered_json j;
    j["config_hash"] = config_hash;
    j["methods"] = ordered_json::array();
    for (const MethodResult& m : methods)
        j["methods"].push_back({{"method", m.method}, {"seconds", m.seconds}});
    return j.dump(2);
}

std::vector<CascadeChoice> predict_cascade_pair(const std::vector<Vec>& u_opt,
                                                const std::vector<Vec>& mu_c1,
                                                const std::vector<Vec>& mu_c2) {
    if (u_opt.size() != mu_c1.size() || u_opt.size() != mu_c2.size())
        throw std::invalid_argument("predict_cascade_pair: stage counts differ");
    auto cosine = [](const Vec& a, const Vec& b) {
        const double na = a.norm(), nb = b.norm();
        if (na == 0.0 || nb == 0.0)
            throw std::invalid_argument(
                "predict_cascade_pair: cosine similarity undefined for a zero vector");
        return a.dot(b) / (na * nb);
    };
    std::vector<CascadeChoice> out;
    for (std::size_t m = 0; m < u_opt.size(); ++m) {
        CascadeChoice c;
        c.cos1 = cosine(u_opt[m], mu_c1[m]);
        c.cos2 = cosine(u_opt[m], mu_c2[m]);
        if (std::abs(c.cos1 - c.cos2) <= 1e-12) {
            c.winner = 1;
            c.tie = true;
        } else {
            c.winner = c.cos1 > c.cos2 ? 1 : 2;
        }
        out.push_back(c);
    }
    return out;
}

namespace {

struct Cursor {
    std::string path;
    Index line = 0;
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
    }
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

IngestedModel ingest_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open model file");

    Cursor cur{path, 0};
    std::string section;
    Index stage_index = -1;

    Index n = -1, M = 0;
    double omega = 0.0, T = 0.0;
    bool allow_unstable = false;
    std::vector<std::tuple<Index, Index, double, Index>> a_trip, b_trip;  // i, j, v, line
    std::vector<std::tuple<Index, double, Index>> mu_pairs;
    std::vector<std::vector<std::tuple<Index, double, Index>>> stage_pairs;

    std::string rawline;
    while (std::getline(in, rawline)) {
        ++cur.line;
        const std::string line = trim(rawline);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') cur.fail("unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name == "meta" || name == "A" || name == "mu" || name == "B") {
                section = name;
            } else if (name.rfind("mu_stage", 0) == 0) {
                section = "mu_stage";
                try {
                    stage_index = std::stoll(trim(name.substr(8)));
                } catch (...) {
                    cur.fail("bad stage index in section header");
                }
                if (stage_index < 0) cur.fail("stage index must be nonnegative");
                if (static_cast<Index>(stage_pairs.size()) <= stage_index)
                    stage_pairs.resize(stage_index + 1);
            } else {
                cur.fail("unknown section [" + name + "]");
            }
            continue;
        }
        if (section == "meta") {
            const auto eq = line.find('=');
            if (eq == std::string::npos) cur.fail("expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            try {
                if (key == "n") n = std::stoll(val);
                else if (key == "omega") omega = std::stod(val);
                else if (key == "T") T = std::stod(val);
                else if (key == "M") M = std::stoll(val);
                else if (key == "allow_unstable") allow_unstable = std::stoll(val) != 0;
                else cur.fail("unknown meta key '" + key + "'");
            } catch (const std::runtime_error&) {
                throw;
            } catch (...) {
                cur.fail("bad value for meta key '" + key + "'");
            }
        } else if (section == "A" || section == "B") {
            std::istringstream ls(line);
            Index i, j;
            double v;
            if (!(ls >> i >> j >> v)) cur.fail("expected 'i j value' triplet");
            if (v < 0.0) cur.fail("negative entry in [" + section + "]");
            (section == "A" ? a_trip : b_trip).emplace_back(i, j, v, cur.line);
        } else if (section == "mu") {
            std::istringstream ls(line);
            Index i;
            double v;
            if (!(ls >> i >> v)) cur.fail("expected 'i value' pair");
            if (v < 0.0) cur.fail("negative entry in [mu]");
            mu_pairs.emplace_back(i, v, cur.line);
        } else if (section == "mu_stage") {
            std::istringstream ls(line);
            Index i;
            double v;
            if (!(ls >> i >> v)) cur.fail("expected 'i value' pair");
            if (v < 0.0) cur.fail("negative entry in [mu_stage]");
            stage_pairs[stage_index].emplace_back(i, v, cur.line);
        } else {
            cur.fail("data before any section header");
        }
    }

    if (n < 1) throw std::runtime_error(path + ": [meta] must define n >= 1");
    IngestedModel out;
    out.T = T;
    out.M = M;
    NetworkModel& model = out.model;
    model.n = n;
    model.omega = omega;
    model.allow_unstable = allow_unstable;
    model.A = Mat::Zero(n, n);
    model.B = Mat::Zero(n, n);
    model.mu = Vec::Zero(n);

    auto check_index = [&](Index i, Index lineno) {
        if (i < 0 || i >= n)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": index " + std::to_string(i) + " out of range");
    };
    for (const auto& [i, j, v, ln] : a_trip) {
        check_index(i, ln);
        check_index(j, ln);
        model.A(i, j) = v;
    }
    for (const auto& [i, j, v, ln] : b_trip) {
        check_index(i, ln);
        check_index(j, ln);
        model.B(i, j) = v;
    }
    for (const auto& [i, v, ln] : mu_pairs) {
        check_index(i, ln);
        model.mu(i) = v;
    }
    for (const auto& block : stage_pairs) {
        Vec level = Vec::Zero(n);
        for (const auto& [i, v, ln] : block) {
            check_index(i, ln);
            level(i) = v;
        }
        out.stage_mu.push_back(level);
    }

    model.validate();
    return out;
}

void emit_model(const std::string& path, const NetworkModel& model, double T, Index M,
                const std::vector<Vec>& stage_mu) {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error(path + ": cannot open for writing");
    outf << "[meta]\n";
    outf << "n = " << model.n << "\n";
    outf << "omega = " << format_double(model.omega) << "\n";
    outf << "T = " << format_double(T) << "\n";
    outf << "M = " << M << "\n";
    if (model.allow_unstable) outf << "allow_unstable = 1\n";
    outf << "[A]\n";
    for (Index i = 0; i < model.n; ++i)
        for (Index j = 0; j < model.n; ++j)
            if (model.A(i, j) != 0.0)
                outf << i << " " << j << " " << format_double(model.A(i, j)) << "\n";
    outf << "[mu]\n";
    for (Index i = 0; i < model.n; ++i)
        if (model.mu(i) != 0.0) outf << i << " " << format_double(model.mu(i)) << "\n";
    outf << "[B]\n";
    for (Index i = 0; i < model.n; ++i)
        for (Index j = 0; j < model.n; ++j)
            if (model.B(i, j) != 0.0)
                outf << i << " " << j << " " << format_double(model.B(i, j)) << "\n";
    for (std::size_t m = 0; m < stage_mu.size(); ++m) {
        outf << "[mu_stage " << m << "]\n";
        for (Index i = 0; i < model.n; ++i)
            if (stage_mu[m](i) != 0.0)
                outf << i << " " << format_double(stage_mu[m](i)) << "\n";
    }
}

} // namespace harness
} // namespace campaign
