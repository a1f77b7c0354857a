#include "allocsim/game.hpp"

#include <cmath>

namespace allocsim {

double default_backoff() { return 2.0 - std::sqrt(2.0); }

GameConfig GameConfig::standard(int n_agents, int n_resources) {
    GameConfig cfg;
    cfg.n_agents = n_agents;
    cfg.n_resources = n_resources;
    if (n_resources > 0) cfg.context_size = (n_agents + n_resources - 1) / n_resources;
    cfg.backoff_prob = default_backoff();
    cfg.default_context_size = true;
    return cfg;
}

GameConfig GameConfig::with_context_size(int n_agents, int n_resources, int context_size) {
    GameConfig cfg = standard(n_agents, n_resources);
    cfg.default_context_size = (context_size == cfg.context_size);
    cfg.context_size = context_size;
    return cfg;
}

void GameConfig::validate() const {
    if (n_agents < 1) throw std::invalid_argument("n_agents must be positive");
    if (n_resources < 1) throw std::invalid_argument("n_resources must be positive");
    if (context_size < 1) throw std::invalid_argument("context_size must be positive");
    if (!(collision_cost < 0.0)) throw std::invalid_argument("collision_cost must be negative");
    if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("discount must be in (0,1)");
    if (!(backoff_prob > 0.0 && backoff_prob < 1.0)) throw std::invalid_argument("backoff_prob must be in (0,1)");
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
    if (indifference_period < 0) throw std::invalid_argument("indifference_period must be non-negative");
}

int context_signal(std::int64_t time, int context_size) {
    if (time < 0 || context_size < 1) throw std::invalid_argument("context_signal: bad arguments");
    return static_cast<int>(time % context_size) + 1;
}

double payoff(Action action, int accessor_count_on_target, double collision_cost) {
    if (action.is_yield()) return 0.0;
    if (accessor_count_on_target < 1)
        throw std::logic_error("payoff: access action with zero accessors on target");
    return accessor_count_on_target == 1 ? 1.0 : collision_cost;
}

int StepOutcome::singly_accessed() const {
    int n = 0;
    for (std::size_t r = 1; r < accessor_count.size(); ++r)
        if (accessor_count[r] == 1) ++n;
    return n;
}

int StepOutcome::colliding_resources() const {
    int n = 0;
    for (std::size_t r = 1; r < accessor_count.size(); ++r)
        if (accessor_count[r] >= 2) ++n;
    return n;
}

StepOutcome resolve_step(const std::vector<Move>& moves,
                         const std::vector<bool>& admissions,
                         std::int64_t time, int context,
                         int n_resources, double collision_cost) {
    if (moves.size() != admissions.size())
        throw std::invalid_argument("resolve_step: moves/admissions length mismatch");

    StepOutcome out;
    out.time = time;
    out.context = context;
    out.accessor_count.assign(static_cast<std::size_t>(n_resources) + 1, 0);
    out.agents.resize(moves.size());

    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (moves[i].action.is_access() && admissions[i])
            ++out.accessor_count[static_cast<std::size_t>(moves[i].action.resource())];
    }

    for (std::size_t i = 0; i < moves.size(); ++i) {
        AgentOutcome& a = out.agents[i];
        a.action = moves[i].action;
        if (moves[i].action.is_access()) {
            a.admitted = admissions[i];
            int r = moves[i].action.resource();
            if (a.admitted) {
                a.payoff = payoff(moves[i].action, out.accessor_count[static_cast<std::size_t>(r)],
                                  collision_cost);
            } else {
                // demoted to a monitor observation of the attempted resource
                a.payoff = 0.0;
                a.monitored = r;
                a.monitored_free = out.accessor_count[static_cast<std::size_t>(r)] == 0;
            }
        } else {
            a.payoff = 0.0;
            if (moves[i].monitor > 0) {
                a.monitored = moves[i].monitor;
                a.monitored_free =
                    out.accessor_count[static_cast<std::size_t>(moves[i].monitor)] == 0;
            }
        }
    }
    return out;
}

}  // namespace allocsim
