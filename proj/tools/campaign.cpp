#include "campaign/harness.hpp"
#include "campaign/ratesolver.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace campaign;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

harness::ExperimentConfig load_config(const std::string& config_path) {
    if (config_path.empty()) return harness::ExperimentConfig{};
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return harness::ExperimentConfig::from_json_text(ss.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hawkes campaign toolkit: synthetic instances, rate validation, "
                 "multistage campaign benchmarking, cascade-pair prediction"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", mode_flag, methods_flag;
    std::uint64_t seed = 0;
    bool seed_set = false, reps_set = false;
    Index replications = 0;
    app.add_option("--config", config_path, "JSON config file")->capture_default_str();
    app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "override config seed");
    auto* reps_opt = app.add_option("--replications", replications, "override replication count");
    app.add_option("--mode", mode_flag, "exposure mode: cumulative | per-stage");
    app.add_option("--methods", methods_flag, "comma-separated methods, e.g. CLL,OPL,RND");

    auto* cmd_generate = app.add_subcommand("generate", "draw a synthetic instance and write the model file");
    std::string gen_out = "model.txt";
    cmd_generate->add_option("--out", gen_out, "model file name")->capture_default_str();

    auto* cmd_validate = app.add_subcommand("validate-rate", "compare closed-form mean intensity against simulation");
    std::string exo_kind = "piecewise";
    Index runs = 100, probes = 200;
    cmd_validate->add_option("--exo", exo_kind, "piecewise | sinusoid | decaying-exponential | quadratic")
        ->capture_default_str();
    cmd_validate->add_option("--runs", runs, "simulation runs")->capture_default_str();
    cmd_validate->add_option("--probes", probes, "probe bins")->capture_default_str();

    auto* cmd_campaign = app.add_subcommand("campaign", "benchmark CLL against the baselines");

    auto* cmd_predict = app.add_subcommand("predict-pairs", "cascade-pair prediction by cosine similarity");
    std::string c1_path, c2_path;
    cmd_predict->add_option("--cascade1", c1_path, "model file with [mu_stage] blocks")->required();
    cmd_predict->add_option("--cascade2", c2_path, "model file with [mu_stage] blocks")->required();

    auto* cmd_certify = app.add_subcommand("certify", "closed-form vs quadrature cross-checks");
    Index certify_models = 5;
    cmd_certify->add_option("--models", certify_models, "random models to certify")->capture_default_str();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;
    reps_set = reps_opt->count() > 0;

    try {
        harness::ExperimentConfig cfg = load_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (reps_set) cfg.replications = replications;
        if (!mode_flag.empty()) cfg.mode = exposure_mode_from_string(mode_flag);
        if (!methods_flag.empty()) {
            cfg.methods.clear();
            std::stringstream ss(methods_flag);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.methods.push_back(item);
        }
        fs::create_directories(out_dir);

        if (*cmd_generate) {
            const auto inst = harness::generate_synthetic(cfg.n, cfg.M, cfg.T, cfg.seed,
                                                          cfg.generation);
            harness::emit_model((fs::path(out_dir) / gen_out).string(), inst.model, cfg.T,
                                cfg.M);
            std::cout << "wrote " << (fs::path(out_dir) / gen_out).string() << " (n=" << inst.model.n
                      << ", stability ratio " << inst.model.stability_ratio() << ")\n";
        } else if (*cmd_validate) {
            NetworkModel model;
            if (cfg.model_file.empty()) {
                model = harness::generate_synthetic(cfg.n, cfg.M, cfg.T, cfg.seed,
                                                    cfg.generation).model;
            } else {
                model = harness::ingest_model(cfg.model_file).model;
            }
            const MatrixBackend backend(model);
            const auto report = harness::validate_rate(
                model, harness::exo_kind_from_string(exo_kind), cfg.T, runs, probes,
                cfg.seed, backend);
            write_file(fs::path(out_dir) / "rate_validation.csv", report.to_csv());
            std::cout << "probes within 3 standard errors: " << report.within_3se << "/"
                      << report.points.size() << "\n"
                      << "relative L2 error: " << report.relative_l2_error << "\n"
                      << "wrote " << (fs::path(out_dir) / "rate_validation.csv").string() << "\n";
        } else if (*cmd_campaign) {
            const auto report = harness::run_campaign_experiment(cfg);
            write_file(fs::path(out_dir) / "report.json", report.to_json());
            write_file(fs::path(out_dir) / "report.csv", report.to_csv());
            write_file(fs::path(out_dir) / "timing.json", report.timing_json());
            std::cout << "config hash " << report.config_hash << "\n";
            for (const auto& m : report.methods) {
                std::cout << m.method << ": ";
                if (m.failed) std::cout << "FAILED (" << m.status << ")";
                else std::cout << "mean " << m.mean << " std " << m.stddev;
                std::cout << " [" << m.seconds << " s]\n";
            }
            std::cout << "wrote report.json, report.csv, timing.json under " << out_dir << "\n";
        } else if (*cmd_predict) {
            const auto c1 = harness::ingest_model(c1_path);
            const auto c2 = harness::ingest_model(c2_path);
            if (c1.stage_mu.empty() || c2.stage_mu.empty())
                throw std::runtime_error("cascade files need [mu_stage k] blocks");

            // Prescribe the optimal intervention on the shared network with
            // mu = 0, then pick per stage the cascade whose drive is closer.
            NetworkModel model = c1.model;
            model.mu = Vec::Zero(model.n);
            const Index M = static_cast<Index>(c1.stage_mu.size());
            const StageSchedule schedule(M, c1.T > 0 ? c1.T : cfg.T);
            auto backend = std::make_shared<const MatrixBackend>(model);
            auto ops = std::make_shared<const OperatorTable>(model, schedule, backend);

            // Constraint/objective parameters drawn as in the synthetic protocol.
            harness::SyntheticInstance params =
                harness::generate_synthetic(model.n, M, schedule.T, cfg.seed);
            params.model = model;

            CertaintyEquivalentSource source(model, schedule, backend);
            const auto plan = closed_loop_run(ops, params.spec_for(cfg.objective),
                                              params.constraints, source, cfg.mode);
            std::vector<Vec> u_opt;
            for (const auto& s : plan.stages) u_opt.push_back(s.u);
            const auto choices = harness::predict_cascade_pair(u_opt, c1.stage_mu, c2.stage_mu);
            std::string csv = "stage,winner,tie,cos1,cos2\n";
            for (std::size_t m = 0; m < choices.size(); ++m) {
                csv += std::to_string(m) + "," + std::to_string(choices[m].winner) + "," +
                       std::to_string(choices[m].tie ? 1 : 0) + "," +
                       std::to_string(choices[m].cos1) + "," +
                       std::to_string(choices[m].cos2) + "\n";
                std::cout << "stage " << m << ": cascade " << choices[m].winner
                          << (choices[m].tie ? " (tie)" : "") << "\n";
            }
            write_file(fs::path(out_dir) / "predictions.csv", csv);
        } else if (*cmd_certify) {
            std::string csv;
            double worst_psi = 0.0, worst_gamma = 0.0, worst_ups = 0.0;
            for (Index k = 0; k < certify_models; ++k) {
                Rng rng(cfg.seed, 0xce7 + k);
                const Index n = 2 + static_cast<Index>(rng.next_u64() % 7);
                NetworkModel model;
                model.n = n;
                model.omega = rng.uniform(0.5, 2.0);
                model.mu = Vec::Constant(n, 0.1);
                model.A = Mat::Zero(n, n);
                for (Index i = 0; i < n; ++i)
                    for (Index j = 0; j < n; ++j)
                        if (rng.uniform01() < 0.7) model.A(i, j) = rng.uniform(0.0, 1.0);
                const double rho =
                    Eigen::EigenSolver<Mat>(model.A, false).eigenvalues().cwiseAbs().maxCoeff();
                if (rho > 0.0)
                    model.A *= rng.uniform(0.2, 0.9) * model.omega / rho;
                model.B = Mat::Identity(n, n);
                model.validate();
                const MatrixBackend backend(model);
                const auto rep = harness::certify_closed_forms(model, backend, 25, 4.0, 400);
                csv += rep.to_csv();
                worst_psi = std::max(worst_psi, rep.max_psi_residual);
                worst_gamma = std::max(worst_gamma, rep.max_gamma_residual);
                worst_ups = std::max(worst_ups, rep.max_upsilon_residual);
            }
            write_file(fs::path(out_dir) / "certification.csv", csv);
            std::cout << "max psi renewal residual:      " << worst_psi << "\n"
                      << "max gamma quadrature residual: " << worst_gamma << "\n"
                      << "max upsilon quadrature residual: " << worst_ups << "\n"
                      << "wrote " << (fs::path(out_dir) / "certification.csv").string() << "\n";
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
