#include "allocsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace allocsim {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Canony: return "canony";
        case Algorithm::CanonyStar: return "canony-star";
        case Algorithm::Exp3: return "exp3";
        case Algorithm::CExp3: return "cexp3";
        case Algorithm::Exp4: return "exp4";
        case Algorithm::Exp4P: return "exp4p";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    for (Algorithm a : {Algorithm::Canony, Algorithm::CanonyStar, Algorithm::Exp3,
                        Algorithm::CExp3, Algorithm::Exp4, Algorithm::Exp4P})
        if (name == algorithm_name(a)) return a;
    return std::nullopt;
}

bool is_bandit(Algorithm a) {
    return a != Algorithm::Canony && a != Algorithm::CanonyStar;
}

Simulation::Simulation(GameConfig config, SimulationOptions options)
    : config_(config), options_(options) {
    config_.validate();
    authority_ = std::make_unique<MonitoringAuthority>(config_.n_agents, config_.n_resources,
                                                       options_.ledger);
    build_agents();
}

void Simulation::build_agents() {
    int R = config_.n_resources;
    int K = config_.context_size;
    agents_.reserve(static_cast<std::size_t>(config_.n_agents));
    ExpertSet experts;
    if (options_.algorithm == Algorithm::Exp4 || options_.algorithm == Algorithm::Exp4P) {
        switch (options_.expert_kind) {
            case ExpertSetKind::Fair: experts = ExpertSet::fair(R, K); break;
            case ExpertSetKind::Constant: experts = ExpertSet::constant(R, K); break;
            case ExpertSetKind::Full: experts = ExpertSet::full(R, K); break;
        }
    }
    for (int i = 0; i < config_.n_agents; ++i) {
        Rng rng(config_.seed, static_cast<std::uint64_t>(i));
        switch (options_.algorithm) {
            case Algorithm::Canony:
            case Algorithm::CanonyStar:
                agents_.push_back(
                    std::make_unique<ConventionAgent>(K, R, config_.backoff_prob, rng));
                break;
            case Algorithm::Exp3:
                agents_.push_back(std::make_unique<Exp3Agent>(R, K, false, config_.horizon,
                                                              config_.collision_cost, rng));
                break;
            case Algorithm::CExp3:
                agents_.push_back(std::make_unique<Exp3Agent>(R, K, true, config_.horizon,
                                                              config_.collision_cost, rng));
                break;
            case Algorithm::Exp4:
                agents_.push_back(std::make_unique<Exp4Agent>(
                    experts, Exp4Core::Flavor::Plain, config_.horizon, config_.collision_cost, rng));
                break;
            case Algorithm::Exp4P:
                agents_.push_back(std::make_unique<Exp4Agent>(experts,
                                                              Exp4Core::Flavor::HighProbability,
                                                              config_.horizon,
                                                              config_.collision_cost, rng));
                break;
        }
    }
}

ConvergenceGoal Simulation::effective_goal() const {
    if (options_.goal) return *options_.goal;
    return is_bandit(options_.algorithm) ? ConvergenceGoal::fraction_of(0.9)
                                         : ConvergenceGoal::full_efficiency();
}

RunMetrics Simulation::run() {
    const int N = config_.n_agents;
    const int R = config_.n_resources;
    const int K = config_.context_size;
    const std::int64_t T = config_.horizon;
    const std::int64_t t_ind = config_.indifference_period;
    const double zeta = config_.collision_cost;
    const bool charge_monitor = options_.algorithm == Algorithm::CanonyStar;
    const ConvergenceGoal goal = effective_goal();
    const bool want_full_tracker = goal.full || !is_bandit(options_.algorithm);

    std::vector<double> payoffs(static_cast<std::size_t>(N), 0.0);
    std::vector<long long> successes(static_cast<std::size_t>(N), 0);
    std::vector<Move> moves(static_cast<std::size_t>(N));
    std::vector<bool> admissions(static_cast<std::size_t>(N), true);
    std::vector<int> counts(static_cast<std::size_t>(R) + 1, 0);

    FullConvergenceTracker full_tracker(K, R);
    FractionConvergenceTracker fraction_tracker(K, R, goal.fraction);

    // trailing-episode utilization window
    std::vector<int> util_window(static_cast<std::size_t>(K), 0);
    long long util_window_sum = 0;

    if (options_.collect_series) {
        util_counts_.reserve(static_cast<std::size_t>(std::min<std::int64_t>(T, 1 << 20)));
        collision_counts_.reserve(util_counts_.capacity());
    }

    const bool can_fast_forward = options_.allow_fast_forward && !trace_sink_ &&
                                  !is_bandit(options_.algorithm);

    RunMetrics metrics;
    metrics.success_counts.assign(static_cast<std::size_t>(N), 0);
    metrics.discounted_payoffs.assign(static_cast<std::size_t>(N), 0.0);

    double w = 1.0;  // discount weight of the current step
    std::int64_t steps_done = T;

    for (std::int64_t t = 0; t < T; ++t) {
        const int k = context_signal(t, K);

        for (int i = 0; i < N; ++i)
            moves[static_cast<std::size_t>(i)] = agents_[static_cast<std::size_t>(i)]->choose(k);

        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < N; ++i) {
            const Move& m = moves[static_cast<std::size_t>(i)];
            bool adm = true;
            if (m.action.is_access()) {
                adm = authority_->admit(i, m.action);
                if (adm) ++counts[static_cast<std::size_t>(m.action.resource())];
            }
            admissions[static_cast<std::size_t>(i)] = adm;
        }

        int singly = 0, colliding = 0;
        for (int r = 1; r <= R; ++r) {
            if (counts[static_cast<std::size_t>(r)] == 1) ++singly;
            else if (counts[static_cast<std::size_t>(r)] >= 2) ++colliding;
        }

        for (int i = 0; i < N; ++i) {
            const Move& m = moves[static_cast<std::size_t>(i)];
            Feedback fb;
            double pay = 0.0;
            bool monitored = false;
            if (m.action.is_access()) {
                int r = m.action.resource();
                if (admissions[static_cast<std::size_t>(i)]) {
                    bool success = counts[static_cast<std::size_t>(r)] == 1;
                    authority_->record(i, r, success);
                    fb.kind = success ? FeedbackKind::AccessSuccess : FeedbackKind::AccessCollision;
                    fb.resource = r;
                    pay = success ? 1.0 : zeta;
                    if (success) ++successes[static_cast<std::size_t>(i)];
                } else {
                    fb.kind = FeedbackKind::AccessDenied;
                    fb.resource = r;
                    fb.observed_free = counts[static_cast<std::size_t>(r)] == 0;
                    monitored = true;
                }
            } else if (m.monitor > 0) {
                fb.kind = FeedbackKind::MonitorObservation;
                fb.resource = m.monitor;
                fb.observed_free = counts[static_cast<std::size_t>(m.monitor)] == 0;
                monitored = true;
            }
            if (w != 0.0) {
                double u = pay;
                if (charge_monitor && monitored) u += zeta;
                if (u != 0.0) payoffs[static_cast<std::size_t>(i)] += w * u;
            }
            agents_[static_cast<std::size_t>(i)]->on_feedback(k, fb);
        }

        if (options_.collect_series) {
            util_counts_.push_back(static_cast<std::uint16_t>(singly));
            collision_counts_.push_back(static_cast<std::uint16_t>(colliding));
        }

        std::size_t slot = static_cast<std::size_t>(t % K);
        util_window_sum += singly - util_window[slot];
        util_window[slot] = singly;

        if (want_full_tracker) full_tracker.observe(t, singly, colliding);
        if (!goal.full) fraction_tracker.observe(t, singly);

        if (trace_sink_) {
            StepOutcome out;
            out.time = t;
            out.context = k;
            out.accessor_count = counts;
            out.agents.resize(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i) {
                AgentOutcome& a = out.agents[static_cast<std::size_t>(i)];
                const Move& m = moves[static_cast<std::size_t>(i)];
                a.action = m.action;
                a.admitted = admissions[static_cast<std::size_t>(i)];
                if (m.action.is_access() && !a.admitted) {
                    a.monitored = m.action.resource();
                    a.monitored_free = counts[static_cast<std::size_t>(m.action.resource())] == 0;
                    a.payoff = 0.0;
                } else if (m.action.is_access()) {
                    a.payoff = counts[static_cast<std::size_t>(m.action.resource())] == 1 ? 1.0 : zeta;
                } else if (m.monitor > 0) {
                    a.monitored = m.monitor;
                    a.monitored_free = counts[static_cast<std::size_t>(m.monitor)] == 0;
                }
            }
            trace_sink_(out);
        }

        if (t >= t_ind) {
            w *= config_.discount;
            if (w < 1e-320) w = 0.0;
        }

        if ((t + 1) % K == 0) {
            for (auto& agent : agents_) agent->on_episode_end();
            authority_->end_episode();
            if (can_fast_forward && full_tracker.convergence_step()) {
                steps_done = t + 1;
                break;
            }
        }
    }

    metrics.discounted_payoffs = payoffs;
    metrics.success_counts = successes;
    metrics.convergence_step =
        goal.full ? full_tracker.convergence_step() : fraction_tracker.convergence_step();

    if (steps_done < T) {
        series_constant_from_ = steps_done;
        fast_forward(steps_done, metrics.discounted_payoffs, metrics.success_counts);
        metrics.utilization_final = 1.0;
    } else {
        std::int64_t window = std::min<std::int64_t>(K, T);
        long long sum = 0;
        if (window == K) {
            sum = util_window_sum;
        } else {
            for (std::int64_t j = 0; j < window; ++j)
                sum += util_window[static_cast<std::size_t>(j)];
        }
        metrics.utilization_final =
            static_cast<double>(sum) / (static_cast<double>(window) * R);
    }

    std::vector<double> alloc(metrics.success_counts.begin(), metrics.success_counts.end());
    metrics.jain = jain_index(alloc);
    return metrics;
}

double episode_weight_sum(std::int64_t e_begin, std::int64_t e_end, int offset, int context_size,
                          double delta, std::int64_t t_ind) {
    if (e_begin >= e_end) return 0.0;
    std::int64_t e_threshold = 0;  // first episode with step weight below 1
    if (t_ind > offset) e_threshold = (t_ind - offset + context_size - 1) / context_size;
    std::int64_t ones = std::clamp(e_threshold, e_begin, e_end) - e_begin;
    double total = static_cast<double>(ones);
    std::int64_t e_geo = std::max(e_begin, e_threshold);
    if (e_geo < e_end) {
        double q = std::pow(delta, context_size);
        double first_exponent = static_cast<double>(e_geo * context_size + offset - t_ind);
        double first = std::pow(delta, first_exponent);
        double n_terms = static_cast<double>(e_end - e_geo);
        total += first * (1.0 - std::pow(q, n_terms)) / (1.0 - q);
    }
    return total;
}

void Simulation::fast_forward(std::int64_t from_step, std::vector<double>& payoffs,
                              std::vector<long long>& successes) {
    const int K = config_.context_size;
    const std::int64_t T = config_.horizon;
    const std::int64_t t_ind = config_.indifference_period;
    const double delta = config_.discount;
    const double zeta = config_.collision_cost;
    const bool charge_monitor = options_.algorithm == Algorithm::CanonyStar;

    const std::int64_t e_begin = from_step / K;
    const std::int64_t e_end = T / K;              // full episodes
    const std::int64_t remainder = T - e_end * K;  // trailing partial episode

    auto step_weight = [&](std::int64_t t) {
        if (t < t_ind) return 1.0;
        return std::pow(delta, static_cast<double>(t - t_ind));
    };

    for (int i = 0; i < config_.n_agents; ++i) {
        // In the converged state the strategy table is fixed: the agent
        // succeeds at its first access entry each episode and monitors at
        // every yield entry (always observing an occupied resource).
        const auto* agent = dynamic_cast<const ConventionAgent*>(agents_[static_cast<std::size_t>(i)].get());
        if (!agent) throw std::logic_error("fast_forward requires convention agents");
        const std::vector<Action>& g = agent->strategy();
        int success_offset = -1;
        double contribution = 0.0;
        for (int c = 0; c < K; ++c) {
            if (g[static_cast<std::size_t>(c)].is_access()) {
                if (success_offset < 0) success_offset = c;
            } else if (charge_monitor) {
                contribution += zeta * episode_weight_sum(e_begin, e_end, c, K, delta, t_ind);
                if (c < remainder) contribution += zeta * step_weight(e_end * K + c);
            }
        }
        if (success_offset >= 0) {
            contribution += episode_weight_sum(e_begin, e_end, success_offset, K, delta, t_ind);
            successes[static_cast<std::size_t>(i)] += e_end - e_begin;
            if (success_offset < remainder) {
                contribution += step_weight(e_end * K + success_offset);
                ++successes[static_cast<std::size_t>(i)];
            }
        }
        payoffs[static_cast<std::size_t>(i)] += contribution;
    }
}

}  // namespace allocsim
