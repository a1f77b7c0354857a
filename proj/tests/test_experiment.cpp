#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "allocsim/experiment.hpp"

using namespace allocsim;

namespace {

ExperimentSpec small_spec(Algorithm alg, int runs) {
    ExperimentSpec spec;
    spec.game = GameConfig::standard(4, 2);
    spec.game.horizon = 400;
    spec.game.seed = 11;
    spec.algorithm = alg;
    spec.runs = runs;
    return spec;
}

}  // namespace

TEST_CASE("aggregates equal the arithmetic means of per-run values") {
    ExperimentSpec spec = small_spec(Algorithm::Canony, 5);
    MetricsReport report = run_experiment(spec);

    std::vector<RunMetrics> runs;
    for (int i = 0; i < spec.runs; ++i) {
        GameConfig cfg = spec.game;
        cfg.seed = spec.game.seed + static_cast<std::uint64_t>(i);
        SimulationOptions options;
        options.algorithm = spec.algorithm;
        Simulation sim(cfg, options);
        runs.push_back(sim.run());
    }
    double jain_sum = 0.0, payoff_sum = 0.0, conv_sum = 0.0;
    for (const RunMetrics& r : runs) {
        jain_sum += *r.jain;
        payoff_sum += r.mean_payoff();
        conv_sum += static_cast<double>(r.convergence_step.value_or(spec.game.horizon));
    }
    CHECK(std::abs(report.jain_mean - jain_sum / spec.runs) <= 1e-12);
    CHECK(std::abs(report.payoff_mean - payoff_sum / spec.runs) <= 1e-12);
    CHECK(std::abs(report.convergence_step_mean - conv_sum / spec.runs) <= 1e-12);
    CHECK(report.runs_aggregated == spec.runs);
}

TEST_CASE("threading does not change the report") {
    for (Algorithm alg : {Algorithm::Canony, Algorithm::Exp3}) {
        ExperimentSpec spec = small_spec(alg, 6);
        spec.collect_series = true;
        spec.threads = 1;
        MetricsReport sequential = run_experiment(spec);
        spec.threads = 3;
        MetricsReport threaded = run_experiment(spec);
        CHECK(sequential.payoff_mean == threaded.payoff_mean);
        CHECK(sequential.payoff_std == threaded.payoff_std);
        CHECK(sequential.jain_mean == threaded.jain_mean);
        CHECK(sequential.convergence_step_mean == threaded.convergence_step_mean);
        CHECK(sequential.utilization_series == threaded.utilization_series);
        CHECK(sequential.collision_series == threaded.collision_series);
    }
}

TEST_CASE("repeated execution is byte-stable") {
    ExperimentSpec spec = small_spec(Algorithm::Exp3, 4);
    spec.collect_series = true;
    MetricsReport a = run_experiment(spec);
    MetricsReport b = run_experiment(spec);
    SummaryRow ra = make_summary_row(spec, a);
    SummaryRow rb = make_summary_row(spec, b);
    CHECK(summary_to_csv({ra}) == summary_to_csv({rb}));
    CHECK(series_to_csv(a) == series_to_csv(b));
}

TEST_CASE("summary csv round trip") {
    ExperimentSpec spec = small_spec(Algorithm::CExp3, 3);
    MetricsReport report = run_experiment(spec);
    SummaryRow row = make_summary_row(spec, report);
    std::vector<SummaryRow> rows{row};
    std::string text = summary_to_csv(rows);

    CHECK(text.rfind("algorithm,R,K,N,p_backoff,delta,t_ind,runs,convergence_step_mean,"
                     "convergence_step_std,jain_mean,payoff_mean,payoff_std,utilization_final\n",
                     0) == 0);

    std::vector<SummaryRow> parsed = parse_summary_csv(text);
    REQUIRE(parsed.size() == 1);
    const SummaryRow& p = parsed[0];
    CHECK(p.algorithm == row.algorithm);
    CHECK(p.n_resources == row.n_resources);
    CHECK(p.context_size == row.context_size);
    CHECK(p.n_agents == row.n_agents);
    CHECK(p.t_ind == row.t_ind);
    CHECK(p.runs == row.runs);
    CHECK(std::abs(p.p_backoff - row.p_backoff) <= 1e-9);
    CHECK(std::abs(p.delta - row.delta) <= 1e-9);
    CHECK(std::abs(p.convergence_step_mean - row.convergence_step_mean) <= 1e-9);
    CHECK(std::abs(p.convergence_step_std - row.convergence_step_std) <= 1e-9);
    CHECK(std::abs(p.jain_mean - row.jain_mean) <= 1e-9);
    CHECK(std::abs(p.payoff_mean - row.payoff_mean) <= 1e-9);
    CHECK(std::abs(p.payoff_std - row.payoff_std) <= 1e-9);
    CHECK(std::abs(p.utilization_final - row.utilization_final) <= 1e-9);
}

TEST_CASE("series csv") {
    MetricsReport empty;
    CHECK(series_to_csv(empty) == "step,utilization_mean,collisions_mean\n");

    ExperimentSpec spec = small_spec(Algorithm::Canony, 2);
    spec.collect_series = true;
    MetricsReport report = run_experiment(spec);
    REQUIRE(report.utilization_series.size() == 400);
    std::string text = series_to_csv(report);
    CHECK(std::count(text.begin(), text.end(), '\n') == 401);
    for (double u : report.utilization_series) {
        CHECK(u >= 0.0);
        CHECK(u <= 1.0);
    }
    // converged convention runs end at full utilization
    CHECK(report.utilization_series.back() == 1.0);
    CHECK(report.collision_series.back() == 0.0);
}

TEST_CASE("json emission carries the same fields") {
    ExperimentSpec spec = small_spec(Algorithm::Canony, 2);
    spec.collect_series = true;
    MetricsReport report = run_experiment(spec);
    SummaryRow row = make_summary_row(spec, report);
    std::string text = summary_to_json({row}, {&report});
    nlohmann::json doc = nlohmann::json::parse(text);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["algorithm"] == "canony");
    CHECK(doc[0]["N"] == 4);
    CHECK(std::abs(doc[0]["jain_mean"].get<double>() - row.jain_mean) <= 1e-12);
    CHECK(doc[0]["utilization_series"].size() == 400);
}

TEST_CASE("preset grids match the published combinations") {
    auto table1 = expand_preset(Preset::Table1);
    CHECK(table1.size() == 20);  // 5 back-off values x 4 sizes
    for (const ExperimentSpec& s : table1) {
        CHECK(s.algorithm == Algorithm::Canony);
        CHECK(s.game.n_agents == s.game.n_resources * s.game.context_size);
        CHECK(s.game.context_size == s.game.n_resources);
        CHECK(s.game.horizon == 1000000);
        CHECK(s.game.discount == 0.99);
        CHECK(s.runs == 128);
    }
    // the exact back-off grid, in order
    CHECK(table1[0].game.backoff_prob == 0.1);
    CHECK(table1[4].game.backoff_prob == 0.25);
    CHECK(table1[8].game.backoff_prob == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-15));
    CHECK(table1[12].game.backoff_prob == 0.75);
    CHECK(table1[16].game.backoff_prob == 0.9);

    auto table2 = expand_preset(Preset::Table2);
    CHECK(table2.size() == 20);  // 5 algorithms x 4 sizes

    auto table3 = expand_preset(Preset::Table3);
    CHECK(table3.size() == 48);  // 2 halves x 6 algorithms x 4 sizes
    int with_t_ind = 0;
    for (const ExperimentSpec& s : table3) {
        if (s.game.indifference_period > 0) {
            ++with_t_ind;
            CHECK(s.game.indifference_period ==
                  static_cast<std::int64_t>(s.game.n_resources) * s.game.n_agents *
                      s.game.context_size);
        }
    }
    CHECK(with_t_ind == 24);

    auto fig1 = expand_preset(Preset::Fig1);
    CHECK(fig1.size() == 5);
    for (const ExperimentSpec& s : fig1) {
        CHECK(s.game.n_resources == 4);
        CHECK(s.game.n_agents == 16);
        CHECK(s.collect_series);
    }

    for (const ExperimentSpec& s : expand_preset(Preset::Fig2))
        CHECK(s.game.n_agents <= 1024);

    PresetFilter filter;
    filter.r_values = {2, 4};
    filter.algorithms = {Algorithm::Canony, Algorithm::Exp3};
    filter.runs = 16;
    filter.horizon = 50000;
    auto narrowed = expand_preset(Preset::Table2, filter);
    CHECK(narrowed.size() == 4);
    for (const ExperimentSpec& s : narrowed) {
        CHECK(s.runs == 16);
        CHECK(s.game.horizon == 50000);
        CHECK((s.game.n_resources == 2 || s.game.n_resources == 4));
    }
}

TEST_CASE("infeasible expert sets are rejected") {
    ExperimentSpec spec = small_spec(Algorithm::Exp4, 1);
    spec.game = GameConfig::standard(64, 8);  // (R+1)^K = 9^8 experts
    spec.game.horizon = 10;
    spec.expert_kind = ExpertSetKind::Full;
    CHECK_THROWS_AS(run_experiment(spec), std::length_error);
}

TEST_CASE("invalid configs are rejected") {
    ExperimentSpec spec = small_spec(Algorithm::Canony, 0);
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
    spec = small_spec(Algorithm::Canony, 2);
    spec.game.backoff_prob = 1.5;
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}
