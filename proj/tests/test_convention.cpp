#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "allocsim/convention.hpp"

using namespace allocsim;

TEST_CASE("strategy initialization is uniform over the R+1 actions") {
    // frequency of Yield over many draws within 3 sigma of 1/(R+1)
    const int r_count = 4;
    const int draws = 100000;
    int yields = 0;
    for (int i = 0; i < draws; ++i) {
        ConventionAgent agent(1, r_count, 0.5, Rng(11, static_cast<std::uint64_t>(i)));
        if (agent.strategy()[0].is_yield()) ++yields;
    }
    double q = 1.0 / (r_count + 1);
    double sigma = std::sqrt(q * (1.0 - q) / draws);
    CHECK(std::abs(static_cast<double>(yields) / draws - q) <= 3.0 * sigma);

    // K=1, R=1: both actions possible
    bool saw_yield = false, saw_access = false;
    for (int i = 0; i < 64; ++i) {
        ConventionAgent agent(1, 1, 0.5, Rng(5, static_cast<std::uint64_t>(i)));
        (agent.strategy()[0].is_yield() ? saw_yield : saw_access) = true;
    }
    CHECK(saw_yield);
    CHECK(saw_access);

    ConventionAgent wide(4, 4, 0.5, Rng(1, 2));
    CHECK(wide.strategy().size() == 4);
    CHECK_FALSE(wide.accessed());
}

TEST_CASE("choose follows the strategy table and the accessed flag") {
    ConventionAgent agent(3, 4, 0.5, Rng(3, 0));
    agent.set_strategy_entry(2, Action::access(3));

    Move m = agent.choose(2);
    CHECK(m.action == Action::access(3));
    CHECK(m.monitor == 0);

    // banked success: neither accesses nor monitors
    agent.on_feedback(2, {FeedbackKind::AccessSuccess, 3, false});
    CHECK(agent.accessed());
    Move idle = agent.choose(2);
    CHECK(idle.action.is_yield());
    CHECK(idle.monitor == 0);

    // yield entry: monitors a uniformly random resource
    agent.set_strategy_entry(1, Action::yield());
    for (int i = 0; i < 50; ++i) {
        Move y = agent.choose(1);
        CHECK(y.action.is_yield());
        CHECK(y.monitor >= 1);
        CHECK(y.monitor <= 4);
    }
}

TEST_CASE("update on feedback") {
    SUBCASE("collision with p = 1 backs off deterministically") {
        ConventionAgent agent(2, 2, 0.999999999, Rng(4, 0));
        agent.set_strategy_entry(1, Action::access(2));
        agent.on_feedback(1, {FeedbackKind::AccessCollision, 2, false});
        CHECK(agent.strategy()[0].is_yield());
    }
    SUBCASE("success banks the episode and keeps the entry") {
        ConventionAgent agent(2, 2, 0.5, Rng(4, 1));
        agent.set_strategy_entry(1, Action::access(2));
        agent.on_feedback(1, {FeedbackKind::AccessSuccess, 2, false});
        CHECK(agent.accessed());
        CHECK(agent.strategy()[0] == Action::access(2));
    }
    SUBCASE("free observation claims the resource") {
        ConventionAgent agent(2, 3, 0.5, Rng(4, 2));
        agent.set_strategy_entry(2, Action::yield());
        agent.on_feedback(2, {FeedbackKind::MonitorObservation, 3, true});
        CHECK(agent.strategy()[1] == Action::access(3));
    }
    SUBCASE("occupied observation changes nothing") {
        ConventionAgent agent(2, 3, 0.5, Rng(4, 3));
        agent.set_strategy_entry(2, Action::yield());
        agent.on_feedback(2, {FeedbackKind::MonitorObservation, 3, false});
        CHECK(agent.strategy()[1].is_yield());
    }
    SUBCASE("inconsistent outcome is rejected") {
        ConventionAgent agent(2, 2, 0.5, Rng(4, 4));
        agent.set_strategy_entry(1, Action::yield());
        CHECK_THROWS_AS(agent.on_feedback(1, {FeedbackKind::AccessSuccess, 1, false}),
                        std::logic_error);
    }
}

TEST_CASE("episode end resets only the accessed flag") {
    ConventionAgent agent(3, 2, 0.5, Rng(6, 0));
    std::vector<Action> before = agent.strategy();
    agent.set_strategy_entry(1, Action::access(1));
    before = agent.strategy();
    agent.on_feedback(1, {FeedbackKind::AccessSuccess, 1, false});
    CHECK(agent.accessed());
    agent.on_episode_end();
    CHECK_FALSE(agent.accessed());
    CHECK(agent.strategy() == before);
    agent.on_episode_end();  // idempotent
    CHECK_FALSE(agent.accessed());
    CHECK(agent.strategy() == before);
}

TEST_CASE("back-off acceptance frequency matches p") {
    const double p = 2.0 - std::sqrt(2.0);
    const int trials = 100000;
    int backed_off = 0;
    ConventionAgent agent(1, 2, p, Rng(12, 0));
    for (int i = 0; i < trials; ++i) {
        agent.set_strategy_entry(1, Action::access(1));
        agent.on_feedback(1, {FeedbackKind::AccessCollision, 1, false});
        if (agent.strategy()[0].is_yield()) ++backed_off;
    }
    double sigma = std::sqrt(p * (1.0 - p) / trials);
    CHECK(std::abs(static_cast<double>(backed_off) / trials - p) <= 3.0 * sigma);
}

TEST_CASE("back-off is the only access-to-yield transition and claiming the only reverse") {
    // drive an agent with random feedback and track transitions
    Rng driver(99);
    ConventionAgent agent(4, 3, 0.5, Rng(13, 0));
    for (int step = 0; step < 20000; ++step) {
        int context = 1 + static_cast<int>(driver.uniform_below(4));
        Action before = agent.strategy()[static_cast<std::size_t>(context - 1)];
        Move m = agent.choose(context);
        Feedback fb;
        if (m.action.is_access()) {
            fb.kind = driver.bernoulli(0.5) ? FeedbackKind::AccessSuccess
                                            : FeedbackKind::AccessCollision;
            fb.resource = m.action.resource();
        } else if (m.monitor > 0) {
            fb.kind = FeedbackKind::MonitorObservation;
            fb.resource = m.monitor;
            fb.observed_free = driver.bernoulli(0.3);
        }
        agent.on_feedback(context, fb);
        Action after = agent.strategy()[static_cast<std::size_t>(context - 1)];
        if (before.is_access() && after.is_yield())
            CHECK(fb.kind == FeedbackKind::AccessCollision);
        if (before.is_yield() && after.is_access()) {
            CHECK(fb.kind == FeedbackKind::MonitorObservation);
            CHECK(fb.observed_free);
            CHECK(after.resource() == fb.resource);
        }
        if ((step + 1) % 4 == 0) agent.on_episode_end();
    }
}
