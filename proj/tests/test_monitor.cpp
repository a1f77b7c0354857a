#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "allocsim/monitor.hpp"

using namespace allocsim;

TEST_CASE("quota-log admissions") {
    MonitoringAuthority ma(3, 2);
    CHECK(ma.admit(0, Action::access(1)));  // fresh agent
    ma.record(0, 1, true);
    CHECK_FALSE(ma.admit(0, Action::access(1)));  // quota used
    CHECK_FALSE(ma.admit(0, Action::access(2)));  // on any resource
    CHECK(ma.admit(1, Action::access(1)));

    // collisions do not consume the quota
    ma.record(1, 1, false);
    CHECK(ma.admit(1, Action::access(1)));

    ma.end_episode();
    CHECK(ma.admit(0, Action::access(1)));
    CHECK_FALSE(ma.episode_success(0));

    CHECK_THROWS_AS(ma.admit(7, Action::access(1)), std::out_of_range);
    CHECK_THROWS_AS(ma.admit(0, Action::yield()), std::invalid_argument);
}

TEST_CASE("quota-log rejects a second success in one episode") {
    MonitoringAuthority ma(1, 1);
    ma.record(0, 1, true);
    CHECK(ma.max_successes_in_episode() == 1);
    CHECK_THROWS_AS(ma.record(0, 1, true), std::logic_error);
}

TEST_CASE("currency mode: success charges the commission") {
    LedgerConfig cfg;
    cfg.mode = LedgerMode::ArtificialCurrency;
    cfg.initial_cash = 1.0;
    cfg.commission = 0.01;
    MonitoringAuthority ma(2, 2, cfg);

    CHECK(ma.admit(0, Action::access(1)));
    ma.record(0, 1, true);
    CHECK(ma.balance(0) == doctest::Approx(0.99).epsilon(1e-15));
    // after a success the balance is below every current fee
    CHECK_FALSE(ma.admit(0, Action::access(1)));
    CHECK_FALSE(ma.admit(0, Action::access(2)));

    // collision reimburses in full so the agent can retry
    CHECK(ma.admit(1, Action::access(2)));
    ma.record(1, 2, false);
    CHECK(ma.balance(1) == 1.0);
    CHECK(ma.admit(1, Action::access(2)));
}

TEST_CASE("currency mode: fee decay re-enables exactly one success per episode") {
    LedgerConfig cfg;
    cfg.mode = LedgerMode::ArtificialCurrency;
    cfg.commission = 1e-3;
    MonitoringAuthority ma(1, 2, cfg);

    for (int episode = 0; episode < 50; ++episode) {
        CHECK(ma.admit(0, Action::access(1)));
        ma.record(0, 1, false);  // a collision first
        CHECK(ma.admit(0, Action::access(1)));
        ma.record(0, 1, true);
        CHECK_FALSE(ma.admit(0, Action::access(1)));
        CHECK_FALSE(ma.admit(0, Action::access(2)));
        ma.end_episode();
    }
    CHECK(ma.fee(1) == doctest::Approx(std::pow(1.0 - 1e-3, 50)).epsilon(1e-12));
}

TEST_CASE("fees decay by (1 - xi) per episode; halving takes ln(2)/xi episodes") {
    LedgerConfig cfg;
    cfg.mode = LedgerMode::ArtificialCurrency;
    cfg.commission = 0.01;
    MonitoringAuthority ma(1, 2, cfg);
    ma.end_episode();
    CHECK(ma.fee(1) == doctest::Approx(0.99).epsilon(1e-15));
    CHECK(ma.fee(2) == doctest::Approx(0.99).epsilon(1e-15));

    // smallest t with (1-xi)^t <= 1/2, xi = 1e-3: solved numerically -> 693
    double xi = 1e-3;
    int t = 0;
    double fee = 1.0;
    while (fee > 0.5) {
        fee *= 1.0 - xi;
        ++t;
    }
    CHECK(t == 693);
    CHECK(std::abs(t - std::log(2.0) / xi) < 1.0);

    // episodes to afford two accesses grows without bound as xi -> 0
    double previous = 0.0;
    for (double x : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        double episodes = std::log(2.0) / x;
        CHECK(episodes > previous);
        previous = episodes;
    }
}

TEST_CASE("currency invalidation reissues balances and fees") {
    LedgerConfig cfg;
    cfg.mode = LedgerMode::ArtificialCurrency;
    cfg.commission = 0.05;
    cfg.invalidation_interval = 3;
    MonitoringAuthority ma(1, 1, cfg);
    ma.record(0, 1, true);
    ma.end_episode();
    ma.end_episode();
    CHECK(ma.fee(1) < 1.0);
    ma.end_episode();  // third episode: reissue
    CHECK(ma.fee(1) == 1.0);
    CHECK(ma.balance(0) == 1.0);
}

TEST_CASE("currency record below fee is a contract violation") {
    LedgerConfig cfg;
    cfg.mode = LedgerMode::ArtificialCurrency;
    MonitoringAuthority ma(1, 1, cfg);
    ma.record(0, 1, true);
    CHECK_THROWS_AS(ma.record(0, 1, true), std::logic_error);
}
