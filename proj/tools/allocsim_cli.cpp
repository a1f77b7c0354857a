// Command-line front end: single experiments and the published table/figure
// presets, emitted as CSV or JSON.
//
// Exit codes: 0 success, 2 invalid configuration, 3 infeasible preset.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "allocsim/experiment.hpp"

namespace {

using allocsim::Algorithm;

struct CliOptions {
    std::string algorithm = "canony";
    int agents = 0;
    int resources = 0;
    int contexts = 0;  // 0 = ceil(N/R)
    double backoff = allocsim::default_backoff();
    double collision_cost = -1.0;
    double discount = 0.99;
    std::int64_t horizon = 1'000'000;
    std::int64_t t_ind = 0;
    int runs = 128;
    std::uint64_t seed = 1;
    std::string preset;
    std::string format = "csv";
    std::string out = "results.csv";
    std::string r_values;
    std::string algorithms;
    int threads = 1;
    bool series = false;
    std::string expert_set = "fair";
    std::string ma_mode = "quota-log";
    double ma_commission = 1e-3;
    double ma_cash = 1.0;
    std::int64_t ma_invalidate = 0;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

void apply_config_file(const std::string& path, CliOptions& o) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    auto get = [&doc](const char* key, auto& target) {
        if (doc.contains(key)) target = doc[key].get<std::decay_t<decltype(target)>>();
    };
    get("algorithm", o.algorithm);
    get("agents", o.agents);
    get("resources", o.resources);
    get("contexts", o.contexts);
    get("backoff", o.backoff);
    get("collision-cost", o.collision_cost);
    get("discount", o.discount);
    get("horizon", o.horizon);
    get("t-ind", o.t_ind);
    get("runs", o.runs);
    get("seed", o.seed);
    get("preset", o.preset);
    get("format", o.format);
    get("out", o.out);
    get("r-values", o.r_values);
    get("algorithms", o.algorithms);
    get("threads", o.threads);
    get("series", o.series);
    get("expert-set", o.expert_set);
    get("ma-mode", o.ma_mode);
    get("ma-commission", o.ma_commission);
    get("ma-cash", o.ma_cash);
    get("ma-invalidate", o.ma_invalidate);
}

allocsim::ExpertSetKind parse_expert_set(const std::string& name) {
    if (name == "fair") return allocsim::ExpertSetKind::Fair;
    if (name == "constant") return allocsim::ExpertSetKind::Constant;
    if (name == "full") return allocsim::ExpertSetKind::Full;
    throw std::invalid_argument("unknown expert set: " + name);
}

allocsim::LedgerConfig parse_ledger(const CliOptions& o) {
    allocsim::LedgerConfig ledger;
    if (o.ma_mode == "quota-log")
        ledger.mode = allocsim::LedgerMode::QuotaLog;
    else if (o.ma_mode == "artificial-currency")
        ledger.mode = allocsim::LedgerMode::ArtificialCurrency;
    else
        throw std::invalid_argument("unknown ma mode: " + o.ma_mode);
    ledger.commission = o.ma_commission;
    ledger.initial_cash = o.ma_cash;
    ledger.invalidation_interval = o.ma_invalidate;
    return ledger;
}

std::string series_path(const std::string& out, const allocsim::SummaryRow& row) {
    std::string stem = out;
    std::size_t dot = stem.find_last_of('.');
    std::size_t slash = stem.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        stem = stem.substr(0, dot);
    std::ostringstream path;
    path << stem << "_series_" << row.algorithm << "_R" << row.n_resources << "_K"
         << row.context_size << "_tind" << row.t_ind << ".csv";
    return path.str();
}

int run(const CliOptions& o) {
    using namespace allocsim;

    std::vector<ExperimentSpec> cells;
    if (!o.preset.empty()) {
        std::optional<Preset> preset = preset_from_name(o.preset);
        if (!preset) throw std::invalid_argument("unknown preset: " + o.preset);
        PresetFilter filter;
        for (const std::string& r : split_list(o.r_values)) filter.r_values.push_back(std::stoi(r));
        for (const std::string& a : split_list(o.algorithms)) {
            std::optional<Algorithm> alg = algorithm_from_name(a);
            if (!alg) throw std::invalid_argument("unknown algorithm: " + a);
            filter.algorithms.push_back(*alg);
        }
        filter.runs = o.runs;
        filter.horizon = o.horizon;
        filter.seed = o.seed;
        filter.threads = o.threads;
        cells = expand_preset(*preset, filter);
        if (cells.empty()) throw std::invalid_argument("preset filter selected no cells");
        for (ExperimentSpec& spec : cells) {
            spec.expert_kind = parse_expert_set(o.expert_set);
            spec.ledger = parse_ledger(o);
            if (o.series) spec.collect_series = true;
        }
    } else {
        if (o.agents < 1 || o.resources < 1)
            throw std::invalid_argument("--agents and --resources are required without --preset");
        ExperimentSpec spec;
        spec.game = o.contexts > 0
                        ? GameConfig::with_context_size(o.agents, o.resources, o.contexts)
                        : GameConfig::standard(o.agents, o.resources);
        spec.game.backoff_prob = o.backoff;
        spec.game.collision_cost = o.collision_cost;
        spec.game.discount = o.discount;
        spec.game.horizon = o.horizon;
        spec.game.indifference_period = o.t_ind;
        spec.game.seed = o.seed;
        std::optional<Algorithm> alg = algorithm_from_name(o.algorithm);
        if (!alg) throw std::invalid_argument("unknown algorithm: " + o.algorithm);
        spec.algorithm = *alg;
        spec.runs = o.runs;
        spec.threads = o.threads;
        spec.collect_series = o.series;
        spec.expert_kind = parse_expert_set(o.expert_set);
        spec.ledger = parse_ledger(o);
        cells.push_back(spec);
    }

    std::vector<SummaryRow> rows;
    std::vector<MetricsReport> reports;
    reports.reserve(cells.size());
    for (const ExperimentSpec& spec : cells) {
        MetricsReport report = run_experiment(spec);
        rows.push_back(make_summary_row(spec, report));
        reports.push_back(std::move(report));
    }

    if (o.format == "csv") {
        write_file(o.out, summary_to_csv(rows));
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (!reports[i].utilization_series.empty())
                write_file(series_path(o.out, rows[i]), series_to_csv(reports[i]));
    } else if (o.format == "json") {
        std::vector<const MetricsReport*> refs;
        for (const MetricsReport& r : reports) refs.push_back(&r);
        write_file(o.out, summary_to_json(rows, refs));
    } else {
        throw std::invalid_argument("unknown format: " + o.format);
    }
    std::cout << "wrote " << o.out << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CliOptions o;

    // config file first; flags override its values
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        try {
            if (arg == "--config" && i + 1 < argc)
                apply_config_file(argv[i + 1], o);
            else if (arg.rfind("--config=", 0) == 0)
                apply_config_file(arg.substr(9), o);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"Repeated allocation game simulator"};
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--algorithm", o.algorithm,
                   "canony | canony-star | exp3 | cexp3 | exp4 | exp4p");
    app.add_option("--agents", o.agents, "number of agents N");
    app.add_option("--resources", o.resources, "number of resources R");
    app.add_option("--contexts", o.contexts, "context space size K (default ceil(N/R))");
    app.add_option("--backoff", o.backoff, "back-off probability p");
    app.add_option("--collision-cost", o.collision_cost, "collision payoff zeta (< 0)");
    app.add_option("--discount", o.discount, "discount factor delta");
    app.add_option("--horizon", o.horizon, "time steps T");
    app.add_option("--t-ind", o.t_ind, "indifference period (steps with undiscounted payoff)");
    app.add_option("--runs", o.runs, "independent runs, seeded seed+i");
    app.add_option("--seed", o.seed, "base seed");
    app.add_option("--preset", o.preset, "table1 | table2 | table3 | fig1 | fig2 | fig3");
    app.add_option("--format", o.format, "csv | json");
    app.add_option("--out", o.out, "output path");
    app.add_option("--r-values", o.r_values, "preset filter: comma list of R values");
    app.add_option("--algorithms", o.algorithms, "preset filter: comma list of algorithms");
    app.add_option("--threads", o.threads, "parallel runs (0 = hardware)");
    app.add_flag("--series", o.series, "emit per-step utilization/collision series");
    app.add_option("--expert-set", o.expert_set, "fair | constant | full");
    app.add_option("--ma-mode", o.ma_mode, "quota-log | artificial-currency");
    app.add_option("--ma-commission", o.ma_commission, "currency commission xi");
    app.add_option("--ma-cash", o.ma_cash, "initial artificial cash m");
    app.add_option("--ma-invalidate", o.ma_invalidate, "reissue currency every I episodes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run(o);
    } catch (const std::length_error& e) {
        std::cerr << "infeasible preset: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
