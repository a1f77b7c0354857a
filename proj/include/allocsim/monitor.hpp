#pragma once

#include <cstdint>
#include <vector>

#include "allocsim/game.hpp"

namespace allocsim {

enum class LedgerMode { QuotaLog, ArtificialCurrency };

struct LedgerConfig {
    LedgerMode mode = LedgerMode::QuotaLog;
    double initial_cash = 1.0;          // m, also the initial per-resource fee
    double commission = 1e-3;           // xi, small positive
    std::int64_t invalidation_interval = 0;  // I episodes, 0 = never reissue
};

/// Monitoring-authority ledger. Tracks successful accesses per episode and
/// decides admissions; in currency mode it implements the fee/commission
/// scheme (charge f_r, reimburse (1-xi) f_r on success, full f_r on
/// collision, decay all fees by (1-xi) each episode).
class MonitoringAuthority {
public:
    MonitoringAuthority(int n_agents, int n_resources, LedgerConfig config = {});

    /// True iff the access attempt is within quota.
    bool admit(int agent, Action action) const;

    /// Records the outcome of an admitted access.
    void record(int agent, int resource, bool success);

    void end_episode();

    bool episode_success(int agent) const { return episode_success_[check(agent)]; }
    double balance(int agent) const { return balances_[check(agent)]; }
    double fee(int resource) const { return fees_[static_cast<std::size_t>(resource)]; }
    std::int64_t episodes_completed() const { return episodes_; }

    /// Audit: largest number of successes any agent recorded within a single
    /// episode, over the ledger's whole lifetime. Quota compliance <=> 1.
    int max_successes_in_episode() const { return max_successes_in_episode_; }

private:
    std::size_t check(int agent) const;

    LedgerConfig config_;
    std::vector<bool> episode_success_;
    std::vector<int> episode_success_count_;
    std::vector<double> balances_;
    std::vector<double> fees_;  // indexed by resource id, [0] unused
    std::int64_t episodes_ = 0;
    int max_successes_in_episode_ = 0;
};

}  // namespace allocsim
