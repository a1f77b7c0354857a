#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "allocsim/metrics.hpp"
#include "allocsim/simulation.hpp"

namespace allocsim {

enum class OutputFormat { Csv, Json };

struct ExperimentSpec {
    GameConfig game;
    Algorithm algorithm = Algorithm::Canony;
    int runs = 128;
    bool collect_series = false;
    ExpertSetKind expert_kind = ExpertSetKind::Fair;
    LedgerConfig ledger;
    int threads = 1;  // 0 = hardware concurrency
};

/// Executes `runs` independent instances seeded seed+i and aggregates them.
/// Runs may execute in parallel; the reduction is ordered by run index and
/// the series sums are integer, so the output does not depend on threading.
MetricsReport run_experiment(const ExperimentSpec& spec);

/// One emitted row: an (algorithm, grid point) pair with its aggregates.
struct SummaryRow {
    std::string algorithm;
    int n_resources = 0;
    int context_size = 0;
    int n_agents = 0;
    double p_backoff = 0.0;
    double delta = 0.0;
    std::int64_t t_ind = 0;
    int runs = 0;
    double convergence_step_mean = 0.0;
    double convergence_step_std = 0.0;
    double jain_mean = 0.0;
    double payoff_mean = 0.0;
    double payoff_std = 0.0;
    double utilization_final = 0.0;
};

SummaryRow make_summary_row(const ExperimentSpec& spec, const MetricsReport& report);

extern const char* const kSummaryHeader;

std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

/// Time-series file: `step,utilization_mean,collisions_mean`, one row per step.
std::string series_to_csv(const MetricsReport& report);

std::string summary_to_json(const std::vector<SummaryRow>& rows,
                            const std::vector<const MetricsReport*>& reports);

void write_file(const std::string& path, const std::string& content);

enum class Preset { Table1, Table2, Table3, Fig1, Fig2, Fig3 };

std::optional<Preset> preset_from_name(const std::string& name);
const char* preset_name(Preset preset);

/// Optional narrowing of a preset grid for desk-scale runs. Empty vectors
/// keep the full published grid.
struct PresetFilter {
    std::vector<int> r_values;
    std::vector<Algorithm> algorithms;
    std::optional<int> runs;
    std::optional<std::int64_t> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

/// Expands a preset into its experiment cells: the exact published
/// (R, K, N = R*K) grids, back-off values, horizon 1e6 and delta 0.99.
std::vector<ExperimentSpec> expand_preset(Preset preset, const PresetFilter& filter = {});

/// Mean payoff per (back-off probability, R) cell of the courtesy sweep.
std::vector<SummaryRow> sweep_backoff(const PresetFilter& filter = {});

}  // namespace allocsim
