#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "allocsim/agent.hpp"
#include "allocsim/bandits.hpp"
#include "allocsim/convention.hpp"
#include "allocsim/game.hpp"
#include "allocsim/metrics.hpp"
#include "allocsim/monitor.hpp"

namespace allocsim {

enum class Algorithm { Canony, CanonyStar, Exp3, CExp3, Exp4, Exp4P };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);
bool is_bandit(Algorithm a);

enum class ExpertSetKind { Fair, Constant, Full };

struct SimulationOptions {
    Algorithm algorithm = Algorithm::Canony;
    LedgerConfig ledger;
    ExpertSetKind expert_kind = ExpertSetKind::Fair;
    bool collect_series = false;
    bool allow_fast_forward = true;  // analytic continuation after full convergence
    /// Convergence goal; defaults to full efficiency for convention agents and
    /// the 90% trailing-window goal for bandits.
    std::optional<ConvergenceGoal> goal;
};

/// One seeded game instance: N agents, the monitoring authority, and the
/// sequential step loop. Instances share no mutable state.
class Simulation {
public:
    Simulation(GameConfig config, SimulationOptions options = {});

    using TraceSink = std::function<void(const StepOutcome&)>;
    /// Streams every StepOutcome; forces the plain step loop.
    void set_trace_sink(TraceSink sink) { trace_sink_ = std::move(sink); }

    RunMetrics run();

    // Per-step series (valid after run() when collect_series is set). Steps at
    // and beyond series_constant_from() are implicit: utilization R-of-R,
    // zero collisions.
    const std::vector<std::uint16_t>& utilization_counts() const { return util_counts_; }
    const std::vector<std::uint16_t>& collision_counts() const { return collision_counts_; }
    std::optional<std::int64_t> series_constant_from() const { return series_constant_from_; }

    const MonitoringAuthority& authority() const { return *authority_; }
    const Agent& agent(int i) const { return *agents_[static_cast<std::size_t>(i)]; }

private:
    void build_agents();
    ConvergenceGoal effective_goal() const;
    void fast_forward(std::int64_t from_step, std::vector<double>& payoffs,
                      std::vector<long long>& successes);

    GameConfig config_;
    SimulationOptions options_;
    std::vector<std::unique_ptr<Agent>> agents_;
    std::unique_ptr<MonitoringAuthority> authority_;
    TraceSink trace_sink_;
    std::vector<std::uint16_t> util_counts_;
    std::vector<std::uint16_t> collision_counts_;
    std::optional<std::int64_t> series_constant_from_;
};

/// Sum of step weights w(eK + offset) over full episodes e in [e_begin, e_end),
/// where w(t) = 1 below t_ind and delta^(t - t_ind) after. Closed form used by
/// the fast-forward accounting.
double episode_weight_sum(std::int64_t e_begin, std::int64_t e_end, int offset, int context_size,
                          double delta, std::int64_t t_ind);

}  // namespace allocsim
