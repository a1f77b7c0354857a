#include "allocsim/convention.hpp"

#include <stdexcept>

namespace allocsim {

ConventionAgent::ConventionAgent(int context_size, int n_resources, double backoff_prob, Rng rng)
    : backoff_prob_(backoff_prob), n_resources_(n_resources), rng_(rng) {
    // initialized uniformly at random over the R+1 actions {Y, A_1..A_R}
    strategy_.resize(static_cast<std::size_t>(context_size));
    for (Action& a : strategy_) {
        int pick = static_cast<int>(rng_.uniform_below(static_cast<std::uint32_t>(n_resources + 1)));
        a = pick == 0 ? Action::yield() : Action::access(pick);
    }
}

Move ConventionAgent::choose(int context) {
    Action g = strategy_[index(context)];
    if (g.is_access()) {
        if (!accessed_) return {g, 0};
        return {Action::yield(), 0};  // idle: neither accesses nor monitors
    }
    // yield and monitor a uniformly random resource
    int r = static_cast<int>(rng_.uniform_below(static_cast<std::uint32_t>(n_resources_))) + 1;
    return {Action::yield(), r};
}

void ConventionAgent::on_feedback(int context, const Feedback& feedback) {
    Action g = strategy_[index(context)];
    switch (feedback.kind) {
        case FeedbackKind::AccessSuccess:
            if (!g.is_access()) throw std::logic_error("success reported for a yield action");
            accessed_ = true;
            break;
        case FeedbackKind::AccessCollision:
            if (!g.is_access()) throw std::logic_error("collision reported for a yield action");
            if (rng_.bernoulli(backoff_prob_)) strategy_[index(context)] = Action::yield();
            break;
        case FeedbackKind::MonitorObservation:
        case FeedbackKind::AccessDenied:
            if (feedback.observed_free)
                strategy_[index(context)] = Action::access(feedback.resource);
            break;
        case FeedbackKind::None:
            break;
    }
}

void ConventionAgent::on_episode_end() { accessed_ = false; }

}  // namespace allocsim
