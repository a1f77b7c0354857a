#include "allocsim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "allocsim/simulation.hpp"

namespace allocsim {

namespace {

// C(i,j) p^(i-j) (1-p)^j via log-gamma, stable for state spaces in the thousands
double thinning_probability(int i, int j, double p) {
    double log_choose = std::lgamma(i + 1.0) - std::lgamma(j + 1.0) - std::lgamma(i - j + 1.0);
    return std::exp(log_choose + (i - j) * std::log(p) + j * std::log1p(-p));
}

void check_spec(const DTMCSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("DTMC population must be positive");
    if (!(spec.p > 0.0 && spec.p < 1.0)) throw std::invalid_argument("p must be in (0,1)");
}

bool is_absorbing_pair(const std::vector<int>& target) {
    for (int s : target)
        if (s != 0 && s != 1) return false;
    return !target.empty();
}

}  // namespace

std::vector<std::vector<double>> build_chain(const DTMCSpec& spec) {
    check_spec(spec);
    int n = spec.n;
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    if (spec.variant == DTMCSpec::Variant::XChain)
        m[0][static_cast<std::size_t>(n)] = 1.0;  // restart
    else
        m[0][0] = 1.0;  // absorbing
    m[1][1] = 1.0;      // absorbing in both variants
    for (int i = 2; i <= n; ++i)
        for (int j = 0; j <= i; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                thinning_probability(i, j, spec.p);
    return m;
}

std::vector<double> hitting_probability(const DTMCSpec& spec, const std::vector<int>& target) {
    check_spec(spec);
    if (spec.variant != DTMCSpec::Variant::YChain)
        throw std::invalid_argument("hitting_probability expects the Y-chain");
    if (!is_absorbing_pair(target))
        throw std::invalid_argument("target must be a subset of the absorbing states {0,1}");

    std::vector<double> h(static_cast<std::size_t>(spec.n) + 1, 0.0);
    for (int s : target) h[static_cast<std::size_t>(s)] = 1.0;
    for (int i = 2; i <= spec.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < i; ++j)
            acc += thinning_probability(i, j, spec.p) * h[static_cast<std::size_t>(j)];
        double self = thinning_probability(i, i, spec.p);
        if (!(self < 1.0)) throw std::runtime_error("singular hitting-probability system");
        h[static_cast<std::size_t>(i)] = acc / (1.0 - self);
    }
    return h;
}

std::vector<double> hitting_time(const DTMCSpec& spec, const std::vector<int>& target) {
    check_spec(spec);
    if (spec.variant != DTMCSpec::Variant::XChain)
        throw std::invalid_argument("hitting_time expects the X-chain");
    std::vector<int> sorted = target;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<int>{0, 1})
        throw std::invalid_argument("hitting_time expects target {0,1}");

    std::vector<double> k(static_cast<std::size_t>(spec.n) + 1, 0.0);
    for (int i = 2; i <= spec.n; ++i) {
        double acc = 1.0;
        for (int j = 2; j < i; ++j)
            acc += thinning_probability(i, j, spec.p) * k[static_cast<std::size_t>(j)];
        double self = thinning_probability(i, i, spec.p);
        k[static_cast<std::size_t>(i)] = acc / (1.0 - self);
    }
    return k;
}

double hitting_probability_floor(double p) { return 2.0 * (1.0 - p) / (2.0 - p); }

double convergence_bound(const BoundParams& params) {
    double n = static_cast<double>(params.n_agents);
    double r = static_cast<double>(params.n_resources);
    double k = static_cast<double>(params.context_size);
    double p = params.backoff;
    return (k * std::log(k) + 2.0 * k) * r * (2.0 - p) / (2.0 * (1.0 - p)) *
           (std::log(n) / p + r);
}

double backoff_objective(double p) { return (2.0 - p) / (2.0 * (1.0 - p) * p); }

double optimal_backoff() { return 2.0 - std::sqrt(2.0); }

SpePayoffBounds spe_payoff_ratio(const BoundParams& params) {
    double delta = params.discount;
    double k = static_cast<double>(params.context_size);
    double e = params.expected_convergence;
    double zeta = params.collision_cost;
    SpePayoffBounds b;
    b.ratio_lower = zeta * (1.0 - std::pow(delta, e * k)) + std::pow(delta, e);
    b.best_response_upper = 1.0 / (1.0 - std::pow(delta, k));
    b.courteous_lower = b.ratio_lower * b.best_response_upper;
    return b;
}

DeltaForEpsilon delta_for_epsilon(const BoundParams& params, double grid_step) {
    if (!(params.epsilon > 0.0 && params.epsilon <= 1.0))
        throw std::invalid_argument("epsilon must be in (0,1]");
    double threshold = 1.0 - params.epsilon;
    auto ratio = [&](double delta) {
        BoundParams q = params;
        q.discount = delta;
        return spe_payoff_ratio(q).ratio_lower;
    };
    std::int64_t lo = 1, hi = static_cast<std::int64_t>(std::llround(1.0 / grid_step)) - 1;
    DeltaForEpsilon result;
    if (ratio(static_cast<double>(hi) * grid_step) < threshold) {
        result.delta0 = static_cast<double>(hi) * grid_step;
        result.at_grid_limit = true;
        return result;
    }
    // ratio is monotone increasing in delta
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (ratio(static_cast<double>(mid) * grid_step) >= threshold)
            hi = mid;
        else
            lo = mid + 1;
    }
    result.delta0 = static_cast<double>(lo) * grid_step;
    return result;
}

IndifferenceTail indifference_tail(const BoundParams& params, int runs, std::uint64_t seed,
                                   double scale) {
    IndifferenceTail tail;
    double n = static_cast<double>(params.n_agents);
    double r = static_cast<double>(params.n_resources);
    double k = static_cast<double>(params.context_size);
    tail.t_ind = static_cast<std::int64_t>(std::llround(scale * r * n * k));
    tail.theoretical_tail =
        (std::log(std::ceil(n / r)) + 1.0) * (std::log(n) + r) / n;

    int failures = 0;
    for (int i = 0; i < runs; ++i) {
        GameConfig cfg = GameConfig::with_context_size(params.n_agents, params.n_resources,
                                                       params.context_size);
        cfg.backoff_prob = params.backoff;
        cfg.collision_cost = params.collision_cost;
        cfg.discount = params.discount;
        cfg.horizon = tail.t_ind;
        cfg.indifference_period = tail.t_ind;
        cfg.seed = seed + static_cast<std::uint64_t>(i);
        Simulation sim(cfg, SimulationOptions{});
        RunMetrics m = sim.run();
        if (!m.convergence_step) ++failures;
    }
    tail.empirical_tail = runs > 0 ? static_cast<double>(failures) / runs : 0.0;
    return tail;
}

}  // namespace allocsim
