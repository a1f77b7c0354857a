#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "allocsim/game.hpp"

namespace allocsim {

/// Jain fairness index (sum x)^2 / (N * sum x^2); 1 iff all entries equal.
/// Empty allocation (all zero) has no defined value.
std::optional<double> jain_index(const std::vector<double>& x);

/// Fraction of resources with exactly one admitted accessor.
double utilization(const StepOutcome& outcome);

/// Discount weight of step t (0-based): 1 for t < t_ind, delta^(t - t_ind) after.
double discount_weight(std::int64_t t, double delta, std::int64_t t_ind);

/// sum_t w_t * u_t over a payoff series.
double discounted_payoff(const std::vector<double>& payoffs, double delta, std::int64_t t_ind);

struct ConvergenceGoal {
    bool full = true;      // full: one whole episode with utilization 1 and no collisions
    double fraction = 0.9; // otherwise: trailing K-step mean utilization >= fraction
    static ConvergenceGoal full_efficiency() { return {true, 1.0}; }
    static ConvergenceGoal fraction_of(double f) { return {false, f}; }
};

/// First step satisfying the goal over an episode-aligned trace, or nullopt.
/// For the full goal this is the start step of the first perfect episode.
std::optional<std::int64_t> detect_convergence(const std::vector<StepOutcome>& trace,
                                               int context_size, ConvergenceGoal goal);

/// Streaming counterpart of detect_convergence for the full-efficiency goal.
class FullConvergenceTracker {
public:
    explicit FullConvergenceTracker(int context_size, int n_resources)
        : context_size_(context_size), n_resources_(n_resources) {}

    void observe(std::int64_t time, int singly_accessed, int colliding);
    std::optional<std::int64_t> convergence_step() const { return step_; }

private:
    int context_size_;
    int n_resources_;
    bool episode_perfect_ = true;
    std::optional<std::int64_t> step_;
};

/// Streaming tracker for the trailing-window fraction goal.
class FractionConvergenceTracker {
public:
    FractionConvergenceTracker(int context_size, int n_resources, double fraction)
        : window_(static_cast<std::size_t>(context_size), 0),
          threshold_(fraction * n_resources * context_size),
          n_resources_(n_resources) {}

    void observe(std::int64_t time, int singly_accessed);
    std::optional<std::int64_t> convergence_step() const { return step_; }

private:
    std::vector<int> window_;  // ring buffer of per-step singly-accessed counts
    double threshold_;
    int n_resources_;
    long long window_sum_ = 0;
    std::int64_t seen_ = 0;
    std::optional<std::int64_t> step_;
};

/// Metrics of a single simulation run.
struct RunMetrics {
    std::vector<long long> success_counts;        // per agent, over the horizon
    std::vector<double> discounted_payoffs;       // per agent (monitor cost included if charged)
    std::optional<std::int64_t> convergence_step; // per the run's goal
    std::optional<double> jain;
    double utilization_final = 0.0;               // trailing-episode mean at the horizon
    double mean_payoff() const;                   // across agents
};

/// Aggregate over runs of one experiment cell.
struct MetricsReport {
    int runs_aggregated = 0;
    double convergence_step_mean = 0.0;  // censored at the horizon for non-converged runs
    double convergence_step_std = 0.0;
    int converged_runs = 0;
    double jain_mean = 0.0;
    double jain_std = 0.0;
    double payoff_mean = 0.0;  // per-agent average payoff, averaged over runs
    double payoff_std = 0.0;
    double utilization_final = 0.0;
    std::vector<double> utilization_series;  // per-step means, empty unless collected
    std::vector<double> collision_series;
};

/// Sequential reduction of per-run metrics, ordered by run index.
MetricsReport aggregate_runs(const std::vector<RunMetrics>& runs, std::int64_t horizon);

}  // namespace allocsim
