#include "allocsim/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace allocsim {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

int effective_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct RunArtifact {
    RunMetrics metrics;
    std::vector<std::uint16_t> util_counts;
    std::vector<std::uint16_t> collision_counts;
    std::optional<std::int64_t> constant_from;
};

RunArtifact execute_run(const ExperimentSpec& spec, int run_index) {
    GameConfig cfg = spec.game;
    cfg.seed = spec.game.seed + static_cast<std::uint64_t>(run_index);
    SimulationOptions options;
    options.algorithm = spec.algorithm;
    options.ledger = spec.ledger;
    options.expert_kind = spec.expert_kind;
    options.collect_series = spec.collect_series;
    Simulation sim(cfg, options);
    RunArtifact artifact;
    artifact.metrics = sim.run();
    if (spec.collect_series) {
        artifact.util_counts = sim.utilization_counts();
        artifact.collision_counts = sim.collision_counts();
        artifact.constant_from = sim.series_constant_from();
    }
    return artifact;
}

}  // namespace

MetricsReport run_experiment(const ExperimentSpec& spec) {
    if (spec.runs < 1) throw std::invalid_argument("runs must be >= 1");
    spec.game.validate();

    const std::int64_t T = spec.game.horizon;
    const int threads = std::min(effective_threads(spec.threads), spec.runs);

    std::vector<RunMetrics> all_metrics(static_cast<std::size_t>(spec.runs));
    std::vector<long long> util_sum, collision_sum;
    std::vector<int> full_from;  // runs whose series is implicitly perfect from step s
    if (spec.collect_series) {
        util_sum.assign(static_cast<std::size_t>(T), 0);
        collision_sum.assign(static_cast<std::size_t>(T), 0);
        full_from.assign(static_cast<std::size_t>(T) + 1, 0);
    }

    auto reduce = [&](int run_index, RunArtifact& artifact) {
        all_metrics[static_cast<std::size_t>(run_index)] = std::move(artifact.metrics);
        if (!spec.collect_series) return;
        for (std::size_t t = 0; t < artifact.util_counts.size(); ++t) {
            util_sum[t] += artifact.util_counts[t];
            collision_sum[t] += artifact.collision_counts[t];
        }
        std::int64_t from = artifact.constant_from.value_or(T);
        ++full_from[static_cast<std::size_t>(from)];
    };

    // block-synchronous parallel execution; reduction strictly by run index
    for (int begin = 0; begin < spec.runs; begin += threads) {
        int end = std::min(begin + threads, spec.runs);
        std::vector<RunArtifact> block(static_cast<std::size_t>(end - begin));
        if (threads == 1) {
            block[0] = execute_run(spec, begin);
        } else {
            std::vector<std::thread> pool;
            for (int i = begin; i < end; ++i)
                pool.emplace_back([&spec, &block, i, begin] {
                    block[static_cast<std::size_t>(i - begin)] = execute_run(spec, i);
                });
            for (std::thread& th : pool) th.join();
        }
        for (int i = begin; i < end; ++i) reduce(i, block[static_cast<std::size_t>(i - begin)]);
    }

    MetricsReport report = aggregate_runs(all_metrics, T);
    if (spec.collect_series) {
        report.utilization_series.resize(static_cast<std::size_t>(T));
        report.collision_series.resize(static_cast<std::size_t>(T));
        long long fully_converged = 0;
        const double R = spec.game.n_resources;
        for (std::int64_t t = 0; t < T; ++t) {
            fully_converged += full_from[static_cast<std::size_t>(t)];
            double util = (static_cast<double>(util_sum[static_cast<std::size_t>(t)]) +
                           static_cast<double>(fully_converged) * R) /
                          (static_cast<double>(spec.runs) * R);
            double coll = static_cast<double>(collision_sum[static_cast<std::size_t>(t)]) /
                          static_cast<double>(spec.runs);
            report.utilization_series[static_cast<std::size_t>(t)] = util;
            report.collision_series[static_cast<std::size_t>(t)] = coll;
        }
    }
    return report;
}

SummaryRow make_summary_row(const ExperimentSpec& spec, const MetricsReport& report) {
    SummaryRow row;
    row.algorithm = algorithm_name(spec.algorithm);
    row.n_resources = spec.game.n_resources;
    row.context_size = spec.game.context_size;
    row.n_agents = spec.game.n_agents;
    row.p_backoff = spec.game.backoff_prob;
    row.delta = spec.game.discount;
    row.t_ind = spec.game.indifference_period;
    row.runs = report.runs_aggregated;
    row.convergence_step_mean = report.convergence_step_mean;
    row.convergence_step_std = report.convergence_step_std;
    row.jain_mean = report.jain_mean;
    row.payoff_mean = report.payoff_mean;
    row.payoff_std = report.payoff_std;
    row.utilization_final = report.utilization_final;
    return row;
}

const char* const kSummaryHeader =
    "algorithm,R,K,N,p_backoff,delta,t_ind,runs,convergence_step_mean,convergence_step_std,"
    "jain_mean,payoff_mean,payoff_std,utilization_final";

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << kSummaryHeader << '\n';
    for (const SummaryRow& r : rows) {
        out << r.algorithm << ',' << r.n_resources << ',' << r.context_size << ',' << r.n_agents
            << ',' << format_double(r.p_backoff) << ',' << format_double(r.delta) << ','
            << r.t_ind << ',' << r.runs << ',' << format_double(r.convergence_step_mean) << ','
            << format_double(r.convergence_step_std) << ',' << format_double(r.jain_mean) << ','
            << format_double(r.payoff_mean) << ',' << format_double(r.payoff_std) << ','
            << format_double(r.utilization_final) << '\n';
    }
    return out.str();
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty summary csv");
    if (line != kSummaryHeader) throw std::invalid_argument("unexpected summary header");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        std::vector<std::string> values;
        while (std::getline(fields, field, ',')) values.push_back(field);
        if (values.size() != 14) throw std::invalid_argument("bad summary row: " + line);
        SummaryRow r;
        r.algorithm = values[0];
        r.n_resources = std::stoi(values[1]);
        r.context_size = std::stoi(values[2]);
        r.n_agents = std::stoi(values[3]);
        r.p_backoff = std::stod(values[4]);
        r.delta = std::stod(values[5]);
        r.t_ind = std::stoll(values[6]);
        r.runs = std::stoi(values[7]);
        r.convergence_step_mean = std::stod(values[8]);
        r.convergence_step_std = std::stod(values[9]);
        r.jain_mean = std::stod(values[10]);
        r.payoff_mean = std::stod(values[11]);
        r.payoff_std = std::stod(values[12]);
        r.utilization_final = std::stod(values[13]);
        rows.push_back(r);
    }
    return rows;
}

std::string series_to_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << "step,utilization_mean,collisions_mean\n";
    for (std::size_t t = 0; t < report.utilization_series.size(); ++t)
        out << t << ',' << format_double(report.utilization_series[t]) << ','
            << format_double(report.collision_series[t]) << '\n';
    return out.str();
}

std::string summary_to_json(const std::vector<SummaryRow>& rows,
                            const std::vector<const MetricsReport*>& reports) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SummaryRow& r = rows[i];
        nlohmann::json row{{"algorithm", r.algorithm},
                           {"R", r.n_resources},
                           {"K", r.context_size},
                           {"N", r.n_agents},
                           {"p_backoff", r.p_backoff},
                           {"delta", r.delta},
                           {"t_ind", r.t_ind},
                           {"runs", r.runs},
                           {"convergence_step_mean", r.convergence_step_mean},
                           {"convergence_step_std", r.convergence_step_std},
                           {"jain_mean", r.jain_mean},
                           {"payoff_mean", r.payoff_mean},
                           {"payoff_std", r.payoff_std},
                           {"utilization_final", r.utilization_final}};
        if (i < reports.size() && reports[i] && !reports[i]->utilization_series.empty()) {
            row["utilization_series"] = reports[i]->utilization_series;
            row["collision_series"] = reports[i]->collision_series;
            row["converged_runs"] = reports[i]->converged_runs;
        }
        doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::optional<Preset> preset_from_name(const std::string& name) {
    for (Preset p : {Preset::Table1, Preset::Table2, Preset::Table3, Preset::Fig1, Preset::Fig2,
                     Preset::Fig3})
        if (name == preset_name(p)) return p;
    return std::nullopt;
}

const char* preset_name(Preset preset) {
    switch (preset) {
        case Preset::Table1: return "table1";
        case Preset::Table2: return "table2";
        case Preset::Table3: return "table3";
        case Preset::Fig1: return "fig1";
        case Preset::Fig2: return "fig2";
        case Preset::Fig3: return "fig3";
    }
    return "?";
}

namespace {

const std::vector<double> kBackoffGrid = {0.1, 0.25, 2.0 - 1.4142135623730951, 0.75, 0.9};
const std::vector<int> kTableRs = {2, 4, 8, 16};
const std::vector<Algorithm> kTableAlgorithms = {Algorithm::Canony, Algorithm::Exp3,
                                                 Algorithm::CExp3, Algorithm::Exp4,
                                                 Algorithm::Exp4P};
const std::vector<Algorithm> kPayoffAlgorithms = {Algorithm::Canony, Algorithm::CanonyStar,
                                                  Algorithm::Exp3, Algorithm::CExp3,
                                                  Algorithm::Exp4, Algorithm::Exp4P};

bool keeps(const std::vector<int>& allowed, int value) {
    return allowed.empty() || std::find(allowed.begin(), allowed.end(), value) != allowed.end();
}

bool keeps(const std::vector<Algorithm>& allowed, Algorithm value) {
    return allowed.empty() || std::find(allowed.begin(), allowed.end(), value) != allowed.end();
}

ExperimentSpec base_cell(int r, int k, const PresetFilter& filter) {
    ExperimentSpec spec;
    spec.game = GameConfig::standard(r * k, r);
    spec.game.context_size = k;  // = ceil(N/R) for N = R*K by construction
    spec.game.discount = 0.99;
    spec.game.horizon = filter.horizon.value_or(1'000'000);
    spec.game.seed = filter.seed.value_or(1);
    spec.runs = filter.runs.value_or(128);
    spec.threads = filter.threads.value_or(1);
    return spec;
}

}  // namespace

std::vector<ExperimentSpec> expand_preset(Preset preset, const PresetFilter& filter) {
    std::vector<ExperimentSpec> cells;
    switch (preset) {
        case Preset::Table1:
            for (double p : kBackoffGrid) {
                for (int r : kTableRs) {
                    if (!keeps(filter.r_values, r)) continue;
                    ExperimentSpec spec = base_cell(r, r, filter);
                    spec.algorithm = Algorithm::Canony;
                    spec.game.backoff_prob = p;
                    cells.push_back(spec);
                }
            }
            break;
        case Preset::Table2:
            for (Algorithm a : kTableAlgorithms) {
                if (!keeps(filter.algorithms, a)) continue;
                for (int r : kTableRs) {
                    if (!keeps(filter.r_values, r)) continue;
                    ExperimentSpec spec = base_cell(r, r, filter);
                    spec.algorithm = a;
                    cells.push_back(spec);
                }
            }
            break;
        case Preset::Table3:
            for (bool indifference : {false, true}) {
                for (Algorithm a : kPayoffAlgorithms) {
                    if (!keeps(filter.algorithms, a)) continue;
                    for (int r : kTableRs) {
                        if (!keeps(filter.r_values, r)) continue;
                        ExperimentSpec spec = base_cell(r, r, filter);
                        spec.algorithm = a;
                        if (indifference)
                            spec.game.indifference_period = static_cast<std::int64_t>(r) *
                                                            spec.game.n_agents *
                                                            spec.game.context_size;
                        cells.push_back(spec);
                    }
                }
            }
            break;
        case Preset::Fig1:
            for (Algorithm a : kTableAlgorithms) {
                if (!keeps(filter.algorithms, a)) continue;
                ExperimentSpec spec = base_cell(4, 4, filter);
                spec.algorithm = a;
                spec.collect_series = true;
                cells.push_back(spec);
            }
            break;
        case Preset::Fig2:
            for (int k : {4, 16, 64}) {
                for (int r : {2, 4, 8, 16, 32, 64}) {
                    if (r * k > 1024) continue;  // desk-scale cap
                    if (!keeps(filter.r_values, r)) continue;
                    for (Algorithm a : {Algorithm::Canony, Algorithm::Exp3}) {
                        if (!keeps(filter.algorithms, a)) continue;
                        ExperimentSpec spec = base_cell(r, k, filter);
                        spec.algorithm = a;
                        cells.push_back(spec);
                    }
                }
            }
            break;
        case Preset::Fig3:
            for (int r : {2, 4, 8}) {
                if (!keeps(filter.r_values, r)) continue;
                for (int k : {2, 4, 8, 16, 32, 64, 128}) {
                    if (r * k > 1024) continue;  // desk-scale cap
                    for (Algorithm a : {Algorithm::Canony, Algorithm::Exp3}) {
                        if (!keeps(filter.algorithms, a)) continue;
                        ExperimentSpec spec = base_cell(r, k, filter);
                        spec.algorithm = a;
                        cells.push_back(spec);
                    }
                }
            }
            break;
    }
    return cells;
}

std::vector<SummaryRow> sweep_backoff(const PresetFilter& filter) {
    std::vector<SummaryRow> rows;
    for (const ExperimentSpec& spec : expand_preset(Preset::Table1, filter)) {
        MetricsReport report = run_experiment(spec);
        rows.push_back(make_summary_row(spec, report));
    }
    return rows;
}

}  // namespace allocsim
