#include "allocsim/metrics.hpp"

#include <cmath>

namespace allocsim {

std::optional<double> jain_index(const std::vector<double>& x) {
    double sum = 0.0, sumsq = 0.0;
    for (double v : x) {
        sum += v;
        sumsq += v * v;
    }
    if (sumsq == 0.0) return std::nullopt;
    double n = static_cast<double>(x.size());
    return (sum * sum) / (n * sumsq);
}

double utilization(const StepOutcome& outcome) {
    int n_resources = static_cast<int>(outcome.accessor_count.size()) - 1;
    return static_cast<double>(outcome.singly_accessed()) / n_resources;
}

double discount_weight(std::int64_t t, double delta, std::int64_t t_ind) {
    if (t < t_ind) return 1.0;
    return std::pow(delta, static_cast<double>(t - t_ind));
}

double discounted_payoff(const std::vector<double>& payoffs, double delta, std::int64_t t_ind) {
    double total = 0.0;
    double w = 1.0;
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(payoffs.size()); ++t) {
        if (t >= t_ind) {
            if (t > t_ind) w *= delta;
            total += w * payoffs[static_cast<std::size_t>(t)];
        } else {
            total += payoffs[static_cast<std::size_t>(t)];
        }
    }
    return total;
}

std::optional<std::int64_t> detect_convergence(const std::vector<StepOutcome>& trace,
                                               int context_size, ConvergenceGoal goal) {
    if (trace.empty()) return std::nullopt;
    int n_resources = static_cast<int>(trace.front().accessor_count.size()) - 1;
    if (goal.full) {
        FullConvergenceTracker tracker(context_size, n_resources);
        for (const StepOutcome& s : trace)
            tracker.observe(s.time, s.singly_accessed(), s.colliding_resources());
        return tracker.convergence_step();
    }
    FractionConvergenceTracker tracker(context_size, n_resources, goal.fraction);
    for (const StepOutcome& s : trace) tracker.observe(s.time, s.singly_accessed());
    return tracker.convergence_step();
}

void FullConvergenceTracker::observe(std::int64_t time, int singly_accessed, int colliding) {
    if (step_) return;
    if (singly_accessed != n_resources_ || colliding != 0) episode_perfect_ = false;
    if ((time + 1) % context_size_ == 0) {  // episode boundary
        if (episode_perfect_) step_ = time + 1 - context_size_;
        episode_perfect_ = true;
    }
}

void FractionConvergenceTracker::observe(std::int64_t time, int singly_accessed) {
    if (step_) return;
    std::size_t slot = static_cast<std::size_t>(seen_ % static_cast<std::int64_t>(window_.size()));
    window_sum_ += singly_accessed - window_[slot];
    window_[slot] = singly_accessed;
    ++seen_;
    if (seen_ >= static_cast<std::int64_t>(window_.size()) &&
        static_cast<double>(window_sum_) >= threshold_)
        step_ = time;
}

double RunMetrics::mean_payoff() const {
    if (discounted_payoffs.empty()) return 0.0;
    double sum = 0.0;
    for (double v : discounted_payoffs) sum += v;
    return sum / static_cast<double>(discounted_payoffs.size());
}

namespace {

struct MeanStd {
    double mean = 0.0, stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd ms;
    if (values.empty()) return ms;
    double sum = 0.0;
    for (double v : values) sum += v;
    ms.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - ms.mean) * (v - ms.mean);
    ms.stddev = std::sqrt(var / static_cast<double>(values.size()));
    return ms;
}

}  // namespace

MetricsReport aggregate_runs(const std::vector<RunMetrics>& runs, std::int64_t horizon) {
    MetricsReport report;
    report.runs_aggregated = static_cast<int>(runs.size());
    std::vector<double> conv, jain, payoff, util;
    for (const RunMetrics& r : runs) {
        conv.push_back(static_cast<double>(r.convergence_step.value_or(horizon)));
        if (r.convergence_step) ++report.converged_runs;
        if (r.jain) jain.push_back(*r.jain);
        payoff.push_back(r.mean_payoff());
        util.push_back(r.utilization_final);
    }
    MeanStd c = mean_std(conv), j = mean_std(jain), p = mean_std(payoff), u = mean_std(util);
    report.convergence_step_mean = c.mean;
    report.convergence_step_std = c.stddev;
    report.jain_mean = j.mean;
    report.jain_std = j.stddev;
    report.payoff_mean = p.mean;
    report.payoff_std = p.stddev;
    report.utilization_final = u.mean;
    return report;
}

}  // namespace allocsim
