#include "campaign/harness.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace campaign;
using namespace campaign::harness;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("synthetic generation follows the protocol") {
    const auto inst = generate_synthetic(40, 4, 20.0, 7);
    CHECK(inst.model.omega == 0.01);
    CHECK(inst.model.n == 40);
    CHECK(inst.model.stability_ratio() < 1.0);
    // B is a unit-diagonal 0/1 matrix.
    for (Index i = 0; i < 40; ++i) {
        CHECK(inst.model.B(i, i) == 1.0);
        for (Index j = 0; j < 40; ++j)
            CHECK((inst.model.B(i, j) == 0.0 || inst.model.B(i, j) == 1.0));
    }
    // B marks exactly the support of A off the diagonal.
    for (Index i = 0; i < 40; ++i)
        for (Index j = 0; j < 40; ++j)
            if (i != j) CHECK((inst.model.B(i, j) == 1.0) == (inst.model.A(i, j) > 0.0));
    // constraints and objective parameters are in range
    for (Index m = 0; m < 4; ++m) {
        CHECK(inst.constraints.budget[m] <= 0.1 * 40.0 / 10.0);
        CHECK((inst.constraints.cap[m].array() <= 0.1).all());
        CHECK((inst.cem.beta[m].array() <= 1.0).all());
        CHECK((inst.les.target[m].array() <= 40.0 / 10.0).all());
    }
}

TEST_CASE("influence sparsity is about one half") {
    // Bernoulli(1/2) zeroing over 100 small generations; binomial tolerance.
    Index zeros = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = generate_synthetic(10, 2, 8.0, seed);
        for (Index i = 0; i < 10; ++i)
            for (Index j = 0; j < 10; ++j) {
                zeros += inst.model.A(i, j) == 0.0 ? 1 : 0;
                ++total;
            }
    }
    const double p = static_cast<double>(zeros) / static_cast<double>(total);
    const double se = std::sqrt(0.25 / static_cast<double>(total));
    CHECK(std::abs(p - 0.5) <= 4.0 * se);
}

TEST_CASE("generation is deterministic in the seed") {
    const auto a = generate_synthetic(15, 3, 12.0, 99);
    const auto b = generate_synthetic(15, 3, 12.0, 99);
    CHECK(a.model.A == b.model.A);
    CHECK(a.model.mu == b.model.mu);
    CHECK(a.constraints.budget == b.constraints.budget);
    const auto c = generate_synthetic(15, 3, 12.0, 100);
    CHECK(a.model.A != c.model.A);
}

TEST_CASE("paper-literal scaling yields an explosive instance behind the flag") {
    GenerationParams params;
    params.paper_literal_scaling = true;
    const auto inst = generate_synthetic(10, 2, 8.0, 3, params);
    CHECK(inst.model.allow_unstable);
    CHECK(inst.model.stability_ratio() > 1.0);  // rho ~ U(0,1) vs omega = 0.01
}

TEST_CASE("validate_rate on a Poisson model matches the flat rate") {
    NetworkModel m;
    m.n = 3;
    m.A = Mat::Zero(3, 3);
    m.omega = 1.0;
    m.mu = Vec::Zero(3);  // the drive comes from the exo spec
    m.B = Mat::Identity(3, 3);
    m.validate();
    const MatrixBackend backend(m);
    const auto report = validate_rate(m, ExoKind::piecewise, 10.0, 200, 40, 5, backend);
    CHECK(report.points.size() == 40);
    CHECK(report.within_3se >= 38);  // 95% of 40
    CHECK(report.relative_l2_error < 0.3);
}

TEST_CASE("more runs shrink the validation error") {
    const auto inst = generate_synthetic(5, 2, 20.0, 12);
    const MatrixBackend backend(inst.model);
    int improved = 0;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const auto small = validate_rate(inst.model, ExoKind::piecewise, 20.0, 5, 50,
                                         1000 + rep, backend);
        const auto large = validate_rate(inst.model, ExoKind::piecewise, 20.0, 100, 50,
                                         1000 + rep, backend);
        if (large.relative_l2_error < small.relative_l2_error) ++improved;
    }
    CHECK(improved >= 9);
}

TEST_CASE("smooth exogenous drives validate through the general path") {
    const auto inst = generate_synthetic(4, 2, 10.0, 31);
    const MatrixBackend backend(inst.model);
    for (const ExoKind kind :
         {ExoKind::sinusoid, ExoKind::decaying_exponential, ExoKind::quadratic}) {
        const auto report = validate_rate(inst.model, kind, 10.0, 150, 25, 77, backend);
        CHECK(report.within_3se >= 23);
    }
}

TEST_CASE("certification residuals are far below the gates") {
    const auto inst = generate_synthetic(6, 2, 8.0, 41);
    // The synthetic omega = 0.01 makes a slow kernel; certify on [0, 4].
    const MatrixBackend backend(inst.model);
    const auto rep = certify_closed_forms(inst.model, backend, 10, 4.0, 400);
    CHECK(rep.max_psi_residual <= 1e-5);
    CHECK(rep.max_gamma_residual <= 1e-8);
    CHECK(rep.max_upsilon_residual <= 1e-8);
    CHECK(rep.to_csv().rfind("check,t,residual\n", 0) == 0);
}

TEST_CASE("experiment config round trip, hash, and validation") {
    ExperimentConfig cfg;
    cfg.objective = ObjectiveKind::les;
    cfg.n = 12;
    cfg.M = 2;
    cfg.T = 9.0;
    cfg.replications = 2;
    cfg.seed = 5;
    cfg.mode = ExposureMode::per_stage;
    cfg.methods = {"CLL", "RND"};
    const std::string text = cfg.to_json();
    const ExperimentConfig back = ExperimentConfig::from_json_text(text);
    CHECK(back.to_json() == text);
    CHECK(back.hash() == cfg.hash());

    ExperimentConfig changed = cfg;
    changed.seed = 6;
    CHECK(changed.hash() != cfg.hash());

    ExperimentConfig bad = cfg;
    bad.methods.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("campaign experiment: single method echoes a single run") {
    ExperimentConfig cfg;
    cfg.objective = ObjectiveKind::mem;
    cfg.n = 8;
    cfg.M = 2;
    cfg.T = 8.0;
    cfg.replications = 1;
    cfg.seed = 21;
    cfg.mode = ExposureMode::per_stage;
    cfg.methods = {"CLL"};
    const auto report = run_campaign_experiment(cfg);
    REQUIRE(report.methods.size() == 1);
    CHECK_FALSE(report.methods[0].failed);
    CHECK(report.methods[0].values.size() == 1);
    CHECK(report.methods[0].mean == report.methods[0].values[0]);
    CHECK(report.methods[0].stddev == 0.0);
}

TEST_CASE("seed-matched reruns produce byte-identical reports") {
    ExperimentConfig cfg;
    cfg.objective = ObjectiveKind::cem;
    cfg.n = 8;
    cfg.M = 2;
    cfg.T = 8.0;
    cfg.replications = 3;
    cfg.seed = 33;
    cfg.mode = ExposureMode::per_stage;
    cfg.methods = {"CLL", "RND", "PRK"};
    const auto a = run_campaign_experiment(cfg);
    const auto b = run_campaign_experiment(cfg);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.config_hash == b.config_hash);
}

TEST_CASE("incompatible methods are recorded as failures without aborting") {
    ExperimentConfig cfg;
    cfg.objective = ObjectiveKind::mem;
    cfg.n = 6;
    cfg.M = 2;
    cfg.T = 6.0;
    cfg.replications = 1;
    cfg.seed = 9;
    cfg.mode = ExposureMode::per_stage;
    cfg.methods = {"CLL", "PRK"};  // PRK serves CEM, not MEM
    const auto report = run_campaign_experiment(cfg);
    REQUIRE(report.methods.size() == 2);
    CHECK_FALSE(report.methods[0].failed);
    CHECK(report.methods[1].failed);
    CHECK(report.methods[1].status.find("PRK") != std::string::npos);
}

TEST_CASE("report statistics recompute from the raw values") {
    ExperimentConfig cfg;
    cfg.objective = ObjectiveKind::mem;
    cfg.n = 6;
    cfg.M = 2;
    cfg.T = 6.0;
    cfg.replications = 4;
    cfg.seed = 10;
    cfg.mode = ExposureMode::per_stage;
    cfg.methods = {"RND"};
    const auto report = run_campaign_experiment(cfg);
    const auto& m = report.methods[0];
    double mean = 0.0;
    for (double v : m.values) mean += v;
    mean /= m.values.size();
    double ss = 0.0;
    for (double v : m.values) ss += (v - mean) * (v - mean);
    CHECK(m.mean == doctest::Approx(mean).epsilon(1e-15));
    CHECK(m.stddev == doctest::Approx(std::sqrt(ss / (m.values.size() - 1))).epsilon(1e-12));
}

TEST_CASE("cascade pair prediction") {
    SUBCASE("aligned beats orthogonal") {
        Vec u(2), c1(2), c2(2);
        u << 1.0, 0.0;
        c1 << 2.0, 0.0;
        c2 << 0.0, 3.0;
        const auto choice = predict_cascade_pair({u}, {c1}, {c2});
        REQUIRE(choice.size() == 1);
        CHECK(choice[0].winner == 1);
        CHECK_FALSE(choice[0].tie);
    }
    SUBCASE("cosine similarity is scale invariant") {
        Vec u(3), c1(3), c2(3);
        u << 1.0, 2.0, 0.5;
        c1 << 0.9, 2.2, 0.4;
        c2 << 2.0, 0.1, 1.5;
        const auto base = predict_cascade_pair({u}, {c1}, {c2});
        const auto scaled = predict_cascade_pair({u}, {Vec(7.0 * c1)}, {c2});
        CHECK(base[0].winner == scaled[0].winner);
        CHECK(base[0].cos1 == doctest::Approx(scaled[0].cos1).epsilon(1e-12));
    }
    SUBCASE("random triples match the direct cosine oracle") {
        Rng rng(44);
        for (int trial = 0; trial < 20; ++trial) {
            Vec u(4), c1(4), c2(4);
            for (Index i = 0; i < 4; ++i) {
                u(i) = rng.uniform(0.01, 1.0);
                c1(i) = rng.uniform(0.01, 1.0);
                c2(i) = rng.uniform(0.01, 1.0);
            }
            const auto choice = predict_cascade_pair({u}, {c1}, {c2});
            const double cos1 = u.dot(c1) / (u.norm() * c1.norm());
            const double cos2 = u.dot(c2) / (u.norm() * c2.norm());
            CHECK(choice[0].winner == (cos1 >= cos2 ? 1 : 2));
        }
    }
    SUBCASE("zero vectors are rejected") {
        CHECK_THROWS_AS(
            predict_cascade_pair({Vec::Zero(2)}, {Vec::Ones(2)}, {Vec::Ones(2)}),
            std::invalid_argument);
    }
    SUBCASE("exact ties flag cascade 1") {
        Vec u(2), c(2);
        u << 1.0, 1.0;
        c << 2.0, 2.0;
        const auto choice = predict_cascade_pair({u}, {c}, {c});
        CHECK(choice[0].winner == 1);
        CHECK(choice[0].tie);
    }
}

TEST_CASE("model files round trip") {
    const auto inst = generate_synthetic(9, 3, 12.0, 55);
    const std::string path = temp_path("roundtrip_model.txt");
    std::vector<Vec> stage_mu = {Vec::Constant(9, 0.1), Vec::Constant(9, 0.2)};
    emit_model(path, inst.model, 12.0, 3, stage_mu);
    const IngestedModel back = ingest_model(path);
    CHECK(back.model.n == 9);
    CHECK(back.model.omega == inst.model.omega);
    CHECK((back.model.A - inst.model.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.model.B - inst.model.B).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.model.mu - inst.model.mu).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.T == 12.0);
    CHECK(back.M == 3);
    REQUIRE(back.stage_mu.size() == 2);
    CHECK((back.stage_mu[1] - stage_mu[1]).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("negative influence entries are rejected with their line") {
    const std::string path = temp_path("bad_model.txt");
    {
        std::ofstream f(path);
        f << "[meta]\nn = 2\nomega = 1.0\nT = 4\nM = 1\n[A]\n0 1 -0.5\n";
    }
    CHECK_THROWS_WITH_AS(ingest_model(path), doctest::Contains(":7:"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("omega on the spectrum of A is rejected citing the eigenvalue") {
    const std::string path = temp_path("singular_model.txt");
    {
        std::ofstream f(path);
        // A = [[0.3, 0], [0, 0.1]], omega = 0.3 is an eigenvalue.
        f << "[meta]\nn = 2\nomega = 0.3\nT = 4\nM = 1\nallow_unstable = 1\n"
          << "[A]\n0 0 0.3\n1 1 0.1\n[B]\n0 0 1\n1 1 1\n";
    }
    CHECK_THROWS_WITH_AS(ingest_model(path), doctest::Contains("eigenvalue"),
                         std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("malformed files fail with precise locations") {
    const std::string path = temp_path("malformed_model.txt");
    {
        std::ofstream f(path);
        f << "[meta]\nn = 2\nomega = 1\nT = 4\nM = 1\n[A]\n0 zzz\n";
    }
    CHECK_THROWS_WITH_AS(ingest_model(path), doctest::Contains(":7:"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("csv report has the tidy schema") {
    ExperimentConfig cfg;
    cfg.objective = ObjectiveKind::mem;
    cfg.n = 6;
    cfg.M = 2;
    cfg.T = 6.0;
    cfg.replications = 1;
    cfg.seed = 77;
    cfg.mode = ExposureMode::per_stage;
    cfg.methods = {"RND"};
    const auto report = run_campaign_experiment(cfg);
    const std::string csv = report.to_csv();
    CHECK(csv.rfind("experiment,method,replication,stage,metric,value\n", 0) == 0);
    CHECK(csv.find("objective_total") != std::string::npos);
    CHECK(csv.find("objective_stage") != std::string::npos);
    // timing lives in the sidecar, not the hashed report
    CHECK(report.to_json().find("seconds") == std::string::npos);
    CHECK(report.timing_json().find("seconds") != std::string::npos);
}
