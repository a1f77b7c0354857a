#pragma once

#include <cstdint>
#include <vector>

#include "allocsim/game.hpp"

namespace allocsim {

/// Back-off dynamics of a single contested resource as a DTMC on {0..N}:
/// state = number of agents still competing. Rows i > 1 are binomial
/// thinning (each competitor independently stays with probability 1-p).
/// X-chain: state 1 absorbing, state 0 restarts to N.
/// Y-chain: states 0 and 1 both absorbing.
struct DTMCSpec {
    enum class Variant { XChain, YChain };
    Variant variant = Variant::XChain;
    int n = 1;        // population size N; state space {0..N}
    double p = 0.5;   // back-off probability
};

/// (n+1) x (n+1) row-stochastic transition matrix.
std::vector<std::vector<double>> build_chain(const DTMCSpec& spec);

/// Hitting probabilities of a target subset of the absorbing states {0,1} for
/// the Y-chain: the minimal non-negative solution of h_i = sum_j p_ij h_j with
/// h = 1 on the target and 0 on the other absorbing state. The binomial rows
/// are lower triangular, so the system solves by forward substitution.
std::vector<double> hitting_probability(const DTMCSpec& spec, const std::vector<int>& target);

/// Expected hitting times of A = {0,1} for the X-chain:
/// k_i = 1 + sum_{j not in A} p_ij k_j, k = 0 on A.
std::vector<double> hitting_time(const DTMCSpec& spec, const std::vector<int>& target);

/// Tight lower bound of the Y-chain hitting probability of {1}: 2(1-p)/(2-p).
double hitting_probability_floor(double p);

/// Parameters of the closed-form bounds.
struct BoundParams {
    int n_agents = 1;       // N
    int n_resources = 1;    // R
    int context_size = 1;   // K
    double backoff = 0.5;   // p
    double discount = 0.99; // delta
    double collision_cost = -1.0;  // zeta
    double expected_convergence = 1.0;  // E(X), in steps, from simulation
    double epsilon = 0.1;
};

/// Expected-convergence-steps bound, constant 1 and natural logarithms:
/// (K ln K + 2K) * R * (2-p)/(2(1-p)) * ((1/p) ln N + R).
double convergence_bound(const BoundParams& params);

/// The p-dependent factor of the bound in high congestion: (2-p)/(2(1-p)p).
double backoff_objective(double p);

/// p* = 2 - sqrt(2), the argmin of backoff_objective on (0,1).
double optimal_backoff();

struct SpePayoffBounds {
    double ratio_lower;         // zeta (1 - delta^(E K)) + delta^E
    double best_response_upper; // 1 / (1 - delta^K)
    double courteous_lower;     // (zeta (1 - delta^(E K)) + delta^E) / (1 - delta^K)
};

/// Payoff bounds of the courteous strategy against the quota-respecting
/// best response, and their ratio lower bound.
SpePayoffBounds spe_payoff_ratio(const BoundParams& params);

struct DeltaForEpsilon {
    double delta0 = 0.0;
    bool at_grid_limit = false;  // even delta = 1 - grid_step misses the target
};

/// Smallest grid discount delta0 with ratio_lower >= 1 - epsilon; the ratio is
/// monotone increasing in delta, so it holds for every delta in [delta0, 1).
DeltaForEpsilon delta_for_epsilon(const BoundParams& params, double grid_step = 1e-6);

struct IndifferenceTail {
    std::int64_t t_ind = 0;
    double empirical_tail = 0.0;   // fraction of runs not fully converged by t_ind
    double theoretical_tail = 0.0; // (ln ceil(N/R) + 1)(ln N + R) / N
};

/// Monte Carlo estimate of Pr[not converged within T_ind = scale * R N K] for
/// an all-convention population, alongside the bound's tail expression.
IndifferenceTail indifference_tail(const BoundParams& params, int runs, std::uint64_t seed,
                                   double scale = 1.0);

}  // namespace allocsim
