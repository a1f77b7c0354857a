#include "allocsim/monitor.hpp"

#include <algorithm>
#include <stdexcept>

namespace allocsim {

MonitoringAuthority::MonitoringAuthority(int n_agents, int n_resources, LedgerConfig config)
    : config_(config),
      episode_success_(static_cast<std::size_t>(n_agents), false),
      episode_success_count_(static_cast<std::size_t>(n_agents), 0),
      balances_(static_cast<std::size_t>(n_agents), config.initial_cash),
      fees_(static_cast<std::size_t>(n_resources) + 1, config.initial_cash) {}

std::size_t MonitoringAuthority::check(int agent) const {
    if (agent < 0 || agent >= static_cast<int>(episode_success_.size()))
        throw std::out_of_range("unknown agent id");
    return static_cast<std::size_t>(agent);
}

bool MonitoringAuthority::admit(int agent, Action action) const {
    if (!action.is_access()) throw std::invalid_argument("admit: action is not an access");
    std::size_t n = check(agent);
    if (config_.mode == LedgerMode::QuotaLog) return !episode_success_[n];
    return balances_[n] >= fees_[static_cast<std::size_t>(action.resource())];
}

void MonitoringAuthority::record(int agent, int resource, bool success) {
    std::size_t n = check(agent);
    if (config_.mode == LedgerMode::QuotaLog && episode_success_[n])
        throw std::logic_error("record without prior admit: quota already used this episode");
    if (config_.mode == LedgerMode::ArtificialCurrency) {
        double f = fees_[static_cast<std::size_t>(resource)];
        if (balances_[n] < f)
            throw std::logic_error("record without prior admit: balance below the fee");
        // Charge and reimburse as two separate operations so that an agent in
        // the balance == fee steady state lands exactly on (1-xi)*fee, the
        // value the episode fee decay will produce.
        balances_[n] -= f;
        balances_[n] += success ? (1.0 - config_.commission) * f : f;
    }
    if (success) {
        episode_success_[n] = true;
        ++episode_success_count_[n];
        max_successes_in_episode_ = std::max(max_successes_in_episode_, episode_success_count_[n]);
    }
}

void MonitoringAuthority::end_episode() {
    std::fill(episode_success_.begin(), episode_success_.end(), false);
    std::fill(episode_success_count_.begin(), episode_success_count_.end(), 0);
    ++episodes_;
    if (config_.mode == LedgerMode::ArtificialCurrency) {
        for (std::size_t r = 1; r < fees_.size(); ++r) fees_[r] *= 1.0 - config_.commission;
        if (config_.invalidation_interval > 0 && episodes_ % config_.invalidation_interval == 0) {
            std::fill(balances_.begin(), balances_.end(), config_.initial_cash);
            std::fill(fees_.begin() + 1, fees_.end(), config_.initial_cash);
        }
    }
}

}  // namespace allocsim
