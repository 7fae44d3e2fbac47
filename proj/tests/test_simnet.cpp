#include "doctest.h"

#include "bftcup/simnet.hpp"

using namespace bftcup;

namespace {

Network
make(Tick gst, Tick delta, PreGstRule rule = {}, std::uint64_t seed = 1)
{
    Network net(DelayPolicy{gst, delta, std::move(rule)}, seed);
    for (ProcessId p = 1; p <= 4; ++p)
    {
        net.register_process(p);
    }
    return net;
}

Envelope
next_envelope(Network& net)
{
    auto ev = net.step();
    REQUIRE(ev);
    REQUIRE(std::holds_alternative<Envelope>(ev->what));
    return std::get<Envelope>(ev->what);
}

} // namespace

TEST_CASE("empty queue")
{
    auto net = make(0, 10);
    CHECK_FALSE(net.step());
    CHECK(net.idle());
}

TEST_CASE("post-GST delays are bounded by delta")
{
    auto net = make(0, 7);
    for (int i = 0; i < 200; ++i)
    {
        net.send(1, 2, GetPDs{});
    }
    for (int i = 0; i < 200; ++i)
    {
        auto env = next_envelope(net);
        CHECK(env.deliverTime >= env.sendTime + 1);
        CHECK(env.deliverTime <= env.sendTime + 7);
    }
    CHECK(net.sent() == 200);
    CHECK(net.delivered() == 200);
}

TEST_CASE("pre-GST delays follow the rule")
{
    auto net = make(1000, 10, [](ProcessId, ProcessId, Tick, Rng&) { return Tick{250}; });
    net.send(1, 2, GetPDs{});
    auto env = next_envelope(net);
    CHECK(env.deliverTime == 250);
    CHECK(net.now() == 250);
}

TEST_CASE("cluster partition")
{
    auto rule = cluster_partition({{1, 2}, {3, 4}}, 500, 2);
    Rng rng(1);
    CHECK(rule(1, 2, 0, rng) == 2);
    CHECK(rule(3, 4, 0, rng) == 2);
    CHECK(rule(1, 3, 0, rng) == 500);
    CHECK(rule(1, 9, 0, rng) == 500);
}

TEST_CASE("equal times are delivered in insertion order")
{
    auto net = make(1000, 10, [](ProcessId, ProcessId, Tick, Rng&) { return Tick{5}; });
    net.send(1, 2, DecidedVal{"a"});
    net.send(1, 2, DecidedVal{"b"});
    net.send(3, 2, DecidedVal{"c"});
    CHECK(std::get<DecidedVal>(next_envelope(net).payload).val == "a");
    CHECK(std::get<DecidedVal>(next_envelope(net).payload).val == "b");
    CHECK(std::get<DecidedVal>(next_envelope(net).payload).val == "c");
    CHECK_FALSE(net.step());
}

TEST_CASE("timers")
{
    auto net = make(0, 10);
    auto a = net.set_timer(1, 5, 42);
    auto b = net.set_timer(2, 3, 7);
    net.cancel_timer(b);
    net.cancel_timer(999);
    auto ev = net.step();
    REQUIRE(ev);
    CHECK(ev->time == 5);
    auto fire = std::get<TimerFire>(ev->what);
    CHECK(fire.id == a);
    CHECK(fire.tag == 42);
    CHECK_FALSE(net.step());
    CHECK_THROWS_AS(net.set_timer(1, 0, 0), InvalidArgument);

    SUBCASE("periodic re-arming")
    {
        auto periodic = make(0, 10);
        periodic.set_timer(1, 4, 0);
        std::vector<Tick> fired;
        while (fired.size() < 3)
        {
            auto e = periodic.step();
            REQUIRE(e);
            fired.push_back(e->time);
            periodic.set_timer(1, 4, 0);
        }
        CHECK(fired == std::vector<Tick>{4, 8, 12});
    }
}

TEST_CASE("unknown endpoints")
{
    auto net = make(0, 10);
    CHECK_THROWS_AS(net.send(1, 9, GetPDs{}), InvalidArgument);
    CHECK_THROWS_AS(net.send(9, 1, GetPDs{}), InvalidArgument);
}

TEST_CASE("crashed endpoints")
{
    auto net = make(0, 10);
    net.send(1, 2, GetPDs{});
    net.send(1, 3, GetPDs{});
    net.crash(3);
    net.set_timer(3, 1, 0);
    auto env = next_envelope(net);
    CHECK(env.to == 2);
    CHECK_FALSE(net.step());
    CHECK(net.dropped() == 1);
}

TEST_CASE("trace digest is a function of the seed")
{
    auto run = [](std::uint64_t seed) {
        auto net = make(50, 10, uniform_delay(1, 100), seed);
        for (ProcessId p = 1; p <= 4; ++p)
        {
            for (ProcessId q = 1; q <= 4; ++q)
            {
                net.send(p, q, GetPDs{});
            }
        }
        while (net.step())
        {
        }
        return net.trace().digest();
    };
    CHECK(run(3) == run(3));
    CHECK(run(3) != run(4));
}
