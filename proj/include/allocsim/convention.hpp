#pragma once

#include <vector>

#include "allocsim/agent.hpp"
#include "allocsim/game.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

/// Courteous convention agent: a strategy table over contexts, probabilistic
/// back-off on collision, claim of observed-free resources, and a per-episode
/// access flag that self-enforces the one-success-per-episode quota.
class ConventionAgent : public Agent {
public:
    ConventionAgent(int context_size, int n_resources, double backoff_prob, Rng rng);

    Move choose(int context) override;
    void on_feedback(int context, const Feedback& feedback) override;
    void on_episode_end() override;

    const std::vector<Action>& strategy() const { return strategy_; }
    void set_strategy_entry(int context, Action a) { strategy_[index(context)] = a; }
    bool accessed() const { return accessed_; }

private:
    std::size_t index(int context) const { return static_cast<std::size_t>(context - 1); }

    std::vector<Action> strategy_;  // g: context -> Action
    bool accessed_ = false;
    double backoff_prob_;
    int n_resources_;
    Rng rng_;
};

}  // namespace allocsim
