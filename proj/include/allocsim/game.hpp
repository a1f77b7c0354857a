#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace allocsim {

/// One of Yield or Access(r), r in [1, R].
class Action {
public:
    constexpr Action() : id_(0) {}

    static constexpr Action yield() { return Action(); }
    static constexpr Action access(int resource_id) { return Action(resource_id); }

    constexpr bool is_yield() const { return id_ == 0; }
    constexpr bool is_access() const { return id_ > 0; }
    constexpr int resource() const { return id_; }  // valid only when is_access()

    friend constexpr bool operator==(Action a, Action b) { return a.id_ == b.id_; }
    friend constexpr bool operator!=(Action a, Action b) { return a.id_ != b.id_; }

private:
    explicit constexpr Action(int id) : id_(id) {}
    std::int32_t id_;
};

/// Static parameters of one repeated allocation game instance.
struct GameConfig {
    int n_agents = 0;                 // N
    int n_resources = 0;              // R
    int context_size = 0;             // K
    double collision_cost = -1.0;     // zeta < 0
    double discount = 0.99;           // delta in (0,1)
    double backoff_prob = 0.0;        // p in (0,1), set by default_backoff() below
    std::int64_t horizon = 1'000'000; // T
    std::int64_t indifference_period = 0;  // T_ind, 0 = none
    std::uint64_t seed = 1;
    bool default_context_size = true; // K == ceil(N/R)

    // K = ceil(N/R)
    static GameConfig standard(int n_agents, int n_resources);
    // any K >= 1; flagged as non-default when K != ceil(N/R)
    static GameConfig with_context_size(int n_agents, int n_resources, int context_size);

    void validate() const;  // throws std::invalid_argument
};

/// p* = 2 - sqrt(2), the high-congestion optimum. Declared here so agent and
/// experiment code share one constant; derivation lives in theory.hpp.
double default_backoff();

/// Public periodic signal in [1, K]: (time mod K) + 1.
int context_signal(std::int64_t time, int context_size);

/// Payoff of one agent given its action and the number of admitted accessors
/// (including itself) on its target resource: 0 / 1 / zeta.
double payoff(Action action, int accessor_count_on_target, double collision_cost);

/// Per-agent record inside a StepOutcome.
struct AgentOutcome {
    Action action;                 // as declared by the agent
    bool admitted = true;          // false: access demoted to a monitor observation
    double payoff = 0.0;
    std::optional<int> monitored;  // resource observed while yielding or demoted
    bool monitored_free = false;

    std::optional<int> observed_free() const {
        if (monitored && monitored_free) return monitored;
        return std::nullopt;
    }
};

/// Full record of a resolved time step.
struct StepOutcome {
    std::int64_t time = 0;
    int context = 1;
    std::vector<AgentOutcome> agents;
    std::vector<int> accessor_count;  // indexed by resource id, [0] unused

    int singly_accessed() const;      // resources with exactly one admitted accessor
    int colliding_resources() const;  // resources with two or more
};

/// Declared action plus the resource the agent monitors when it yields
/// (0 = none; idle agents neither access nor monitor).
struct Move {
    Action action;
    int monitor = 0;
};

/// Resolves one simultaneous step: accessor counts over admitted accesses,
/// payoffs per the three-case rule, occupancy observations for yielding and
/// demoted agents. A resource is free iff its admitted accessor count is 0.
StepOutcome resolve_step(const std::vector<Move>& moves,
                         const std::vector<bool>& admissions,
                         std::int64_t time, int context,
                         int n_resources, double collision_cost);

}  // namespace allocsim
