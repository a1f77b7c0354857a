#include "allocsim/bandits.hpp"

#include <cmath>
#include <stdexcept>

namespace allocsim {

namespace {
constexpr double kEulerMinusOne = 1.7182818284590452;
constexpr double kWeightFloor = 1e-300;
}  // namespace

double map_reward_unit(double payoff, double collision_cost) {
    if (payoff != 0.0 && payoff != 1.0 && payoff != collision_cost)
        throw std::invalid_argument("reward outside {collision_cost, 0, 1}");
    return (payoff - collision_cost) / (1.0 - collision_cost);
}

double exp3_gamma(int arm_count, std::int64_t horizon) {
    double a = static_cast<double>(arm_count);
    double t = static_cast<double>(horizon);
    return std::min(1.0, std::sqrt(a * std::log(a) / (kEulerMinusOne * t)));
}

double exp4_gamma(int arm_count, int expert_count, std::int64_t horizon) {
    double a = static_cast<double>(arm_count);
    double m = static_cast<double>(expert_count);
    double t = static_cast<double>(horizon);
    return std::min(1.0, std::sqrt(a * std::log(m) / (kEulerMinusOne * t)));
}

double exp4p_pmin(int arm_count, int expert_count, std::int64_t horizon) {
    double a = static_cast<double>(arm_count);
    double m = static_cast<double>(expert_count);
    double t = static_cast<double>(horizon);
    return std::min(std::sqrt(std::log(m) / (a * t)), 1.0 / a);
}

double exp4p_bonus(int arm_count, int expert_count, std::int64_t horizon, double failure_prob) {
    double a = static_cast<double>(arm_count);
    double m = static_cast<double>(expert_count);
    double t = static_cast<double>(horizon);
    return std::sqrt(std::log(m / failure_prob) / (a * t));
}

ExpertSet ExpertSet::fair(int n_resources, int context_size) {
    ExpertSet set;
    set.context_size = context_size;
    set.n_resources = n_resources;
    for (int r = 1; r <= n_resources; ++r) {
        for (int k = 1; k <= context_size; ++k) {
            std::vector<Action> schedule(static_cast<std::size_t>(context_size), Action::yield());
            schedule[static_cast<std::size_t>(k - 1)] = Action::access(r);
            set.advice.push_back(std::move(schedule));
        }
    }
    return set;
}

ExpertSet ExpertSet::constant(int n_resources, int context_size) {
    ExpertSet set;
    set.context_size = context_size;
    set.n_resources = n_resources;
    for (int arm = 0; arm <= n_resources; ++arm)
        set.advice.emplace_back(static_cast<std::size_t>(context_size), arm_to_action(arm));
    return set;
}

ExpertSet ExpertSet::full(int n_resources, int context_size, std::int64_t max_experts) {
    double count = std::pow(static_cast<double>(n_resources + 1), context_size);
    if (count > static_cast<double>(max_experts))
        throw std::length_error("full expert set too large");
    ExpertSet set;
    set.context_size = context_size;
    set.n_resources = n_resources;
    std::int64_t total = static_cast<std::int64_t>(std::llround(count));
    for (std::int64_t code = 0; code < total; ++code) {
        std::vector<Action> schedule(static_cast<std::size_t>(context_size));
        std::int64_t c = code;
        for (int k = 0; k < context_size; ++k) {
            schedule[static_cast<std::size_t>(k)] = arm_to_action(static_cast<int>(c % (n_resources + 1)));
            c /= n_resources + 1;
        }
        set.advice.push_back(std::move(schedule));
    }
    return set;
}

Action arm_to_action(int arm) { return arm == 0 ? Action::yield() : Action::access(arm); }

int action_to_arm(Action action) { return action.is_yield() ? 0 : action.resource(); }

Exp3Core::Exp3Core(int arm_count, double gamma)
    : weights_(static_cast<std::size_t>(arm_count), 1.0),
      weight_sum_(static_cast<double>(arm_count)),
      gamma_(gamma) {
    if (arm_count < 1) throw std::invalid_argument("arm_count must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0,1]");
}

double Exp3Core::probability(int arm) const {
    return (1.0 - gamma_) * weights_[static_cast<std::size_t>(arm)] / weight_sum_ +
           gamma_ / static_cast<double>(arm_count());
}

std::vector<double> Exp3Core::probabilities() const {
    std::vector<double> p(weights_.size());
    for (int i = 0; i < arm_count(); ++i) p[static_cast<std::size_t>(i)] = probability(i);
    return p;
}

int Exp3Core::sample(Rng& rng) {
    // composition sampling of the mixture: uniform with probability gamma,
    // weight-proportional otherwise
    if (gamma_ > 0.0 && rng.bernoulli(gamma_))
        return static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(arm_count())));
    return static_cast<int>(rng.weighted_pick(weights_, weight_sum_));
}

void Exp3Core::update(int arm, double reward01) {
    if (!(reward01 >= 0.0 && reward01 <= 1.0))
        throw std::invalid_argument("reward01 outside [0,1]");
    double estimated = reward01 / probability(arm);
    weights_[static_cast<std::size_t>(arm)] *=
        std::exp(gamma_ * estimated / static_cast<double>(arm_count()));
    renormalize();
}

void Exp3Core::renormalize() {
    double max_w = 0.0;
    for (double w : weights_) max_w = std::max(max_w, w);
    weight_sum_ = 0.0;
    for (double& w : weights_) {
        w = std::max(w / max_w, kWeightFloor);
        weight_sum_ += w;
    }
}

Exp4Core::Exp4Core(ExpertSet experts, Flavor flavor, std::int64_t horizon)
    : experts_(std::move(experts)),
      flavor_(flavor),
      weights_(static_cast<std::size_t>(experts_.size()), 1.0),
      weight_sum_(static_cast<double>(experts_.size())) {
    if (experts_.size() < 1) throw std::invalid_argument("expert set is empty");
    if (flavor_ == Flavor::Plain) {
        mixing_ = exp4_gamma(arm_count(), expert_count(), horizon);
    } else {
        pmin_ = exp4p_pmin(arm_count(), expert_count(), horizon);
        bonus_ = exp4p_bonus(arm_count(), expert_count(), horizon);
        mixing_ = pmin_ * static_cast<double>(arm_count());
    }
}

int Exp4Core::advised_arm(int expert, int context) const {
    return action_to_arm(
        experts_.advice[static_cast<std::size_t>(expert)][static_cast<std::size_t>(context - 1)]);
}

double Exp4Core::probability(int context, int arm) const {
    double mass = 0.0;
    for (int j = 0; j < expert_count(); ++j)
        if (advised_arm(j, context) == arm) mass += weights_[static_cast<std::size_t>(j)];
    return (1.0 - mixing_) * mass / weight_sum_ + mixing_ / static_cast<double>(arm_count());
}

std::vector<double> Exp4Core::probabilities(int context) const {
    std::vector<double> p(static_cast<std::size_t>(arm_count()), 0.0);
    for (int j = 0; j < expert_count(); ++j)
        p[static_cast<std::size_t>(advised_arm(j, context))] += weights_[static_cast<std::size_t>(j)];
    for (double& v : p) v = (1.0 - mixing_) * v / weight_sum_ + mixing_ / static_cast<double>(arm_count());
    return p;
}

int Exp4Core::sample(int context, Rng& rng) {
    // deterministic advice: sampling an expert then playing its advice draws
    // from the advice-weighted arm distribution
    if (mixing_ > 0.0 && rng.bernoulli(mixing_))
        return static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(arm_count())));
    std::size_t expert = rng.weighted_pick(weights_, weight_sum_);
    return advised_arm(static_cast<int>(expert), context);
}

void Exp4Core::update(int context, int arm, double reward01) {
    if (!(reward01 >= 0.0 && reward01 <= 1.0))
        throw std::invalid_argument("reward01 outside [0,1]");
    if (flavor_ == Flavor::Plain) {
        double estimated = reward01 / probability(context, arm);
        double factor =
            std::exp(mixing_ * estimated / static_cast<double>(arm_count()));
        for (int j = 0; j < expert_count(); ++j)
            if (advised_arm(j, context) == arm) weights_[static_cast<std::size_t>(j)] *= factor;
    } else {
        std::vector<double> arm_prob = probabilities(context);
        double estimated = reward01 / arm_prob[static_cast<std::size_t>(arm)];
        // per-arm factor: experts advising `a` share exp((pmin/2)(y_hat + b/p_a))
        std::vector<double> factor(arm_prob.size());
        for (std::size_t a = 0; a < arm_prob.size(); ++a) {
            double y_hat = (static_cast<int>(a) == arm) ? estimated : 0.0;
            factor[a] = std::exp(0.5 * pmin_ * (y_hat + bonus_ / arm_prob[a]));
        }
        for (int j = 0; j < expert_count(); ++j)
            weights_[static_cast<std::size_t>(j)] *=
                factor[static_cast<std::size_t>(advised_arm(j, context))];
    }
    renormalize();
}

void Exp4Core::renormalize() {
    double max_w = 0.0;
    for (double w : weights_) max_w = std::max(max_w, w);
    weight_sum_ = 0.0;
    for (double& w : weights_) {
        w = std::max(w / max_w, kWeightFloor);
        weight_sum_ += w;
    }
}

double learning_payoff(const Feedback& feedback, double collision_cost) {
    switch (feedback.kind) {
        case FeedbackKind::AccessSuccess:
            return 1.0;
        case FeedbackKind::AccessCollision:
            return collision_cost;
        case FeedbackKind::AccessDenied:
        case FeedbackKind::MonitorObservation:
            return feedback.observed_free ? 1.0 : collision_cost;
        case FeedbackKind::None:
            return 0.0;
    }
    return 0.0;
}

Exp3Agent::Exp3Agent(int n_resources, int context_size, bool contextual, std::int64_t horizon,
                     double collision_cost, Rng rng)
    : collision_cost_(collision_cost), rng_(rng) {
    int arms = n_resources + 1;
    if (contextual) {
        std::int64_t per_context = (horizon + context_size - 1) / context_size;
        double gamma = exp3_gamma(arms, std::max<std::int64_t>(per_context, 1));
        for (int k = 0; k < context_size; ++k) cores_.emplace_back(arms, gamma);
    } else {
        cores_.emplace_back(arms, exp3_gamma(arms, horizon));
    }
}

const Exp3Core& Exp3Agent::core(int context) const {
    return cores_.size() == 1 ? cores_[0] : cores_[static_cast<std::size_t>(context - 1)];
}

Move Exp3Agent::choose(int context) {
    Exp3Core& c = cores_.size() == 1 ? cores_[0] : cores_[static_cast<std::size_t>(context - 1)];
    last_arm_ = c.sample(rng_);
    return {arm_to_action(last_arm_), 0};
}

void Exp3Agent::on_feedback(int context, const Feedback& feedback) {
    Exp3Core& c = cores_.size() == 1 ? cores_[0] : cores_[static_cast<std::size_t>(context - 1)];
    c.update(last_arm_, map_reward_unit(learning_payoff(feedback, collision_cost_), collision_cost_));
}

Exp4Agent::Exp4Agent(ExpertSet experts, Exp4Core::Flavor flavor, std::int64_t horizon,
                     double collision_cost, Rng rng)
    : core_(std::move(experts), flavor, horizon), collision_cost_(collision_cost), rng_(rng) {}

Move Exp4Agent::choose(int context) {
    last_arm_ = core_.sample(context, rng_);
    return {arm_to_action(last_arm_), 0};
}

void Exp4Agent::on_feedback(int context, const Feedback& feedback) {
    core_.update(context, last_arm_,
                 map_reward_unit(learning_payoff(feedback, collision_cost_), collision_cost_));
}

}  // namespace allocsim
