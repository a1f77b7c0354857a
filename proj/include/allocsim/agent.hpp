#pragma once

#include "allocsim/game.hpp"

namespace allocsim {

enum class FeedbackKind {
    None,             // idle step, nothing observed
    AccessSuccess,    // admitted, sole accessor
    AccessCollision,  // admitted, two or more accessors
    AccessDenied,     // quota-denied, demoted to a monitor observation
    MonitorObservation,
};

struct Feedback {
    FeedbackKind kind = FeedbackKind::None;
    int resource = 0;           // accessed or observed resource
    bool observed_free = false; // valid for AccessDenied / MonitorObservation
};

/// One player of the repeated allocation game. Each agent owns its RNG stream,
/// so implementations are instance-confined and runs parallelize cleanly.
class Agent {
public:
    virtual ~Agent() = default;
    virtual Move choose(int context) = 0;
    virtual void on_feedback(int context, const Feedback& feedback) = 0;
    virtual void on_episode_end() {}
};

}  // namespace allocsim
