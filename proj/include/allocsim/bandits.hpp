#pragma once

#include <cstdint>
#include <vector>

#include "allocsim/agent.hpp"
#include "allocsim/game.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

/// Affine map of the game payoff {zeta, 0, 1} onto [0,1]: (u - zeta)/(1 - zeta).
/// Exponential-weights updates require bounded non-negative rewards.
/// Throws if the payoff is not one of the three admissible values.
double map_reward_unit(double payoff, double collision_cost);

// Input-parameter formulas of the underlying algorithms (external-source
// constants, chosen optimal for a known horizon):
//   EXP3   gamma = min(1, sqrt(A ln A / ((e-1) T)))
//   EXP4   gamma = min(1, sqrt(A ln M / ((e-1) T)))
//   EXP4.P p_min = min(sqrt(ln M / (A T)), 1/A), confidence bonus
//          b = sqrt(ln(M / failure_prob) / (A T)) with failure_prob = 0.05.
double exp3_gamma(int arm_count, std::int64_t horizon);
double exp4_gamma(int arm_count, int expert_count, std::int64_t horizon);
double exp4p_pmin(int arm_count, int expert_count, std::int64_t horizon);
double exp4p_bonus(int arm_count, int expert_count, std::int64_t horizon,
                   double failure_prob = 0.05);

/// Deterministic maps context -> Action used as expert advice.
struct ExpertSet {
    int context_size = 1;
    int n_resources = 1;
    std::vector<std::vector<Action>> advice;  // advice[expert][context-1]

    int size() const { return static_cast<int>(advice.size()); }

    /// R*K single-slot experts: expert (r,k) plays Access(r) at context k and
    /// yields elsewhere. Their disjoint union across agents is the efficient
    /// fair correlated equilibrium the convention converges to.
    static ExpertSet fair(int n_resources, int context_size);

    /// R+1 context-blind experts, one per arm.
    static ExpertSet constant(int n_resources, int context_size);

    /// All (R+1)^K deterministic maps. Throws std::length_error when the
    /// count exceeds max_experts; the unrestricted set is intractable for
    /// large instances.
    static ExpertSet full(int n_resources, int context_size, std::int64_t max_experts = 100000);
};

/// Exponential-weights core over the R+1 arms {Y, A_1..A_R}.
class Exp3Core {
public:
    Exp3Core(int arm_count, double gamma);

    int sample(Rng& rng);
    void update(int arm, double reward01);

    int arm_count() const { return static_cast<int>(weights_.size()); }
    double gamma() const { return gamma_; }
    double probability(int arm) const;
    std::vector<double> probabilities() const;

private:
    void renormalize();

    std::vector<double> weights_;
    double weight_sum_;
    double gamma_;
};

/// Exponential weights over experts; covers both the plain variant and the
/// high-probability variant with its per-expert confidence bonus.
class Exp4Core {
public:
    enum class Flavor { Plain, HighProbability };

    Exp4Core(ExpertSet experts, Flavor flavor, std::int64_t horizon);

    int sample(int context, Rng& rng);
    void update(int context, int arm, double reward01);

    int arm_count() const { return experts_.n_resources + 1; }
    int expert_count() const { return experts_.size(); }
    double uniform_mixing() const { return mixing_; }  // gamma, resp. A * p_min
    double probability(int context, int arm) const;
    std::vector<double> probabilities(int context) const;
    const std::vector<double>& expert_weights() const { return weights_; }

private:
    void renormalize();
    int advised_arm(int expert, int context) const;

    ExpertSet experts_;
    Flavor flavor_;
    std::vector<double> weights_;
    double weight_sum_;
    double mixing_;  // total uniform-exploration mass
    double pmin_ = 0.0;
    double bonus_ = 0.0;
};

/// Arm index convention: 0 = Yield, r = Access(r).
Action arm_to_action(int arm);
int action_to_arm(Action action);

/// EXP3 bandit player; with one core per context value it is CEXP3.
class Exp3Agent : public Agent {
public:
    /// contextual=false: single instance tuned for the full horizon.
    /// contextual=true: one instance per context, each tuned for ceil(T/K) pulls.
    Exp3Agent(int n_resources, int context_size, bool contextual, std::int64_t horizon,
              double collision_cost, Rng rng);

    Move choose(int context) override;
    void on_feedback(int context, const Feedback& feedback) override;
    void set_denied_signal(DeniedSignal s) { denied_ = s; }

    const Exp3Core& core(int context) const;

private:
    std::vector<Exp3Core> cores_;
    double collision_cost_;
    DeniedSignal denied_ = DeniedSignal::Counterfactual;
    int last_arm_ = 0;
    Rng rng_;
};

/// EXP4 / EXP4.P bandit player over a fixed expert set.
class Exp4Agent : public Agent {
public:
    Exp4Agent(ExpertSet experts, Exp4Core::Flavor flavor, std::int64_t horizon,
              double collision_cost, Rng rng);

    Move choose(int context) override;
    void on_feedback(int context, const Feedback& feedback) override;
    void set_denied_signal(DeniedSignal s) { denied_ = s; }

    const Exp4Core& core() const { return core_; }

private:
    Exp4Core core_;
    double collision_cost_;
    DeniedSignal denied_ = DeniedSignal::Counterfactual;
    int last_arm_ = 0;
    Rng rng_;
};

/// What a quota-denied bandit feeds its weight update.
enum class DeniedSignal {
    Counterfactual,  // occupancy as the payoff an admitted access would earn
    Zero,            // treat the demoted attempt like a yield (payoff 0)
    Silent,          // no update at all
};

/// Game payoff implied by a step's feedback. Quota-denied attempts earn
/// nothing but still learn from the occupancy signal: had the agent been
/// admitted, a free resource meant success and an occupied one a collision,
/// so that counterfactual payoff drives the weight update.
double learning_payoff(const Feedback& feedback, double collision_cost,
                       DeniedSignal denied = DeniedSignal::Counterfactual);

}  // namespace allocsim
