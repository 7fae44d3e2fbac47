#include "doctest.h"

#include "bftcup/generator.hpp"
#include "bftcup/graph_io.hpp"
#include "bftcup/kgraph.hpp"
#include "support/brute_force.hpp"

using namespace bftcup;

namespace {

// Literal reading of the core conditions: every y in [0, |P|-1] and every
// non-empty outside set T, with P =>(<=y) T taken as "not every member of P
// has more than y disjoint paths to every member of T".
std::vector<CoreEntry>
brute_cores(KnowledgeGraph const& g)
{
    std::vector<ProcessId> ids(g.vertices().begin(), g.vertices().end());
    auto const n = ids.size();
    std::vector<CoreEntry> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    {
        ProcessSet P, outside;
        for (std::size_t i = 0; i < n; ++i)
        {
            (mask >> i & 1 ? P : outside).insert(ids[i]);
        }
        auto k = oracle::brute_kappa(g, P);
        std::vector<std::size_t> ys;
        for (std::size_t y = 0; y + 1 <= P.size(); ++y)
        {
            if (k < y + 1)
            {
                continue;
            }
            std::vector<ProcessId> out_ids(outside.begin(), outside.end());
            bool ok = true;
            for (std::uint32_t tmask = 1; ok && tmask < (1u << out_ids.size()); ++tmask)
            {
                bool allAbove = true;
                for (std::size_t j = 0; j < out_ids.size() && allAbove; ++j)
                {
                    if (!(tmask >> j & 1))
                    {
                        continue;
                    }
                    for (auto p : P)
                    {
                        if (oracle::brute_disjoint_paths(g, p, out_ids[j]) <= y)
                        {
                            allAbove = false;
                            break;
                        }
                    }
                }
                ok = !allAbove;
            }
            if (ok)
            {
                ys.push_back(y);
            }
        }
        if (!ys.empty())
        {
            out.push_back(CoreEntry{P, ys.front(), ys.back()});
        }
    }
    std::sort(out.begin(), out.end(), [](auto const& a, auto const& b) { return a.core < b.core; });
    return out;
}

} // namespace

TEST_CASE("graph construction rejects malformed input")
{
    CHECK_THROWS_AS(KnowledgeGraph({1, 2}, {{1, 1}}), InvalidArgument);
    CHECK_THROWS_AS(KnowledgeGraph({1, 2}, {{1, 3}}), InvalidArgument);
    auto g = KnowledgeGraph({1, 2, 5}, {{1, 2}, {2, 5}});
    CHECK(g.size() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(2, 5));
    CHECK_FALSE(g.has_edge(5, 2));
}

TEST_CASE("disjoint_paths")
{
    SUBCASE("complete digraph on 4 vertices")
    {
        auto k4 = graphs::complete(4);
        for (ProcessId s = 1; s <= 4; ++s)
        {
            for (ProcessId t = 1; t <= 4; ++t)
            {
                if (s != t)
                {
                    CHECK(disjoint_paths(k4, s, t) == 3);
                }
            }
        }
    }
    SUBCASE("chain")
    {
        CHECK(disjoint_paths(graphs::chain(3), 1, 3) == 1);
        CHECK(disjoint_paths(graphs::chain(3), 3, 1) == 0);
    }
    SUBCASE("errors")
    {
        auto g = graphs::chain(3);
        CHECK_THROWS_AS(disjoint_paths(g, 1, 1), InvalidArgument);
        CHECK_THROWS_AS(disjoint_paths(g, 1, 9), InvalidArgument);
    }
    SUBCASE("matches the exhaustive path-family oracle")
    {
        Rng rng(7);
        for (int round = 0; round < 60; ++round)
        {
            auto n = 2 + rng.below(7);
            auto g = oracle::random_digraph(n, 0.2 + 0.6 * static_cast<double>(rng.below(100)) / 100, rng);
            for (auto s : g.vertices())
            {
                for (auto t : g.vertices())
                {
                    if (s != t)
                    {
                        REQUIRE(disjoint_paths(g, s, t) == oracle::brute_disjoint_paths(g, s, t));
                    }
                }
            }
        }
    }
}

TEST_CASE("kappa")
{
    CHECK(kappa(KnowledgeGraph({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}}), {1, 2, 3}) == 1);
    CHECK(kappa(graphs::complete(4), {1, 2, 3, 4}) == 3);
    CHECK(kappa(graphs::complete(4), {2}) == 0);
    CHECK(kappa(graphs::complete(4), {}) == 0);
    CHECK(kappa(graphs::complete(4), {1, 2, 3}) == 2);
    CHECK_THROWS_AS(kappa(graphs::complete(4), {1, 9}), InvalidArgument);

    Rng rng(11);
    for (int round = 0; round < 40; ++round)
    {
        auto g = oracle::random_digraph(2 + rng.below(6), 0.6, rng);
        ProcessSet S;
        for (auto v : g.vertices())
        {
            if (rng.chance(0.7))
            {
                S.insert(v);
            }
        }
        auto k = kappa(g, S);
        CHECK(k == oracle::brute_kappa(g, S));
        if (S.size() >= 2)
        {
            CHECK(k <= S.size() - 1);
        }
    }
}

TEST_CASE("implies_k")
{
    CHECK(implies_k(graphs::complete(5), {1, 2}, {3}, 4));
    CHECK_FALSE(implies_k(graphs::complete(5), {1, 2}, {3}, 5));
    CHECK_FALSE(implies_k(graphs::chain(3), {1}, {3}, 2));
    CHECK(implies_k(graphs::chain(3), {1}, {3}, 1));
    CHECK_THROWS_AS(implies_k(graphs::chain(3), {1}, {1, 3}, 1), InvalidArgument);
    CHECK_THROWS_AS(implies_k(graphs::chain(3), {}, {3}, 1), InvalidArgument);
}

TEST_CASE("monotonicity under edge addition")
{
    Rng rng(23);
    for (int round = 0; round < 40; ++round)
    {
        auto g = oracle::random_digraph(3 + rng.below(5), 0.4, rng);
        std::vector<ProcessId> ids(g.vertices().begin(), g.vertices().end());
        auto a = rng.pick(ids), b = rng.pick(ids);
        if (a == b)
        {
            continue;
        }
        auto h = g.with_edge(a, b);
        for (auto s : ids)
        {
            for (auto t : ids)
            {
                if (s != t)
                {
                    CHECK(disjoint_paths(h, s, t) >= disjoint_paths(g, s, t));
                }
            }
        }
        ProcessSet all(ids.begin(), ids.end());
        CHECK(kappa(h, all) >= kappa(g, all));
        for (std::size_t k = 1; k <= 3; ++k)
        {
            if (implies_k(g, {ids[0]}, {ids[1]}, k))
            {
                CHECK(implies_k(h, {ids[0]}, {ids[1]}, k));
            }
        }
    }
}

TEST_CASE("condense")
{
    SUBCASE("cycle")
    {
        auto c = condense(KnowledgeGraph({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}}));
        CHECK(c.components.size() == 1);
        CHECK(c.sinkComponents.size() == 1);
    }
    SUBCASE("chain")
    {
        auto c = condense(graphs::chain(3));
        CHECK(c.components.size() == 3);
        REQUIRE(c.sinkComponents.size() == 1);
        CHECK(c.components[c.sinkComponents[0]] == ProcessSet{3});
    }
    SUBCASE("sink with a Byzantine member, full graph and safe subgraph")
    {
        auto g = graphs::byzantine_sink_member();
        REQUIRE(is_k_osr(safe_subgraph(g, {4}), 2).verdict);
        auto full = condense(g);
        REQUIRE(full.sinkComponents.size() == 1);
        CHECK(full.components[full.sinkComponents[0]] == ProcessSet{1, 2, 3, 4});
        auto safe = condense(safe_subgraph(g, {4}));
        CHECK(safe.components[safe.sinkComponents[0]] == ProcessSet{1, 2, 3});
    }
    SUBCASE("soundness on random graphs")
    {
        Rng rng(5);
        for (int round = 0; round < 50; ++round)
        {
            auto g = oracle::random_digraph(1 + rng.below(9), 0.25, rng);
            auto c = condense(g);
            ProcessSet seen;
            std::size_t total = 0;
            for (auto const& comp : c.components)
            {
                total += comp.size();
                seen.insert(comp.begin(), comp.end());
            }
            CHECK(total == g.size());
            CHECK(seen == g.vertices());
            // Contracting components gives a DAG: its own condensation is all
            // singletons.
            std::map<ProcessId, ProcessSet> dag;
            for (std::size_t i = 0; i < c.components.size(); ++i)
            {
                dag[static_cast<ProcessId>(i)];
            }
            for (auto const& [a, b] : c.dagEdges)
            {
                CHECK(a != b);
                dag[static_cast<ProcessId>(a)].insert(static_cast<ProcessId>(b));
            }
            auto again = condense(KnowledgeGraph::from_adjacency(dag));
            CHECK(again.components.size() == c.components.size());
            for (std::size_t i = 0; i < c.components.size(); ++i)
            {
                bool hasOut = std::any_of(c.dagEdges.begin(), c.dagEdges.end(),
                                          [i](auto const& e) { return e.first == i; });
                bool listed = std::count(c.sinkComponents.begin(), c.sinkComponents.end(), i) == 1;
                CHECK(hasOut != listed);
            }
        }
    }
}

TEST_CASE("safe_subgraph")
{
    auto k4 = graphs::complete(4);
    CHECK(safe_subgraph(k4, {}) == k4);
    CHECK(safe_subgraph(k4, {1, 2, 3, 4}).empty());
    CHECK(safe_subgraph(k4, {4}) == graphs::complete(3));
    Rng rng(3);
    for (int round = 0; round < 20; ++round)
    {
        auto g = oracle::random_digraph(6, 0.4, rng);
        ProcessSet F{static_cast<ProcessId>(1 + rng.below(6)), static_cast<ProcessId>(1 + rng.below(6))};
        CHECK(safe_subgraph(safe_subgraph(g, F), F) == safe_subgraph(g, F));
    }
}

TEST_CASE("is_k_osr")
{
    CHECK(is_k_osr(graphs::complete(4), 2).verdict);

    auto chain = is_k_osr(graphs::chain(3), 1);
    CHECK_FALSE(chain.verdict);
    CHECK(chain.failedClause == FailedClause::SinkConnectivity);
    REQUIRE(chain.witness);
    CHECK(chain.witness->vertices == ProcessSet{3});

    auto ab = graphs::two_cores();
    CHECK(is_k_osr(ab, 1).verdict);
    CHECK(is_k_osr(ab, 1).sink == ProcessSet{6, 7, 8});
    auto ab2 = is_k_osr(ab, 2);
    CHECK_FALSE(ab2.verdict);
    CHECK(ab2.failedClause == FailedClause::NonsinkPaths);
    CHECK(ab2.witness->pair.has_value());

    auto split = is_k_osr(KnowledgeGraph({1, 2, 3}, {{1, 2}}), 1);
    CHECK(split.failedClause == FailedClause::NotConnected);
    CHECK(split.witness->vertices == ProcessSet{3});

    auto twoSinks = is_k_osr(KnowledgeGraph({1, 2, 3}, {{1, 2}, {1, 3}}), 1);
    CHECK(twoSinks.failedClause == FailedClause::MultipleSinks);
    CHECK(twoSinks.witness->vertices == ProcessSet{2, 3});

    CHECK(is_k_osr(KnowledgeGraph(), 1).failedClause == FailedClause::NotConnected);
    CHECK_THROWS_AS(is_k_osr(graphs::complete(3), 0), InvalidArgument);
}

TEST_CASE("enumerate_cores")
{
    auto k4 = enumerate_cores(graphs::complete(4));
    REQUIRE(k4.size() == 1);
    CHECK(k4[0].core == ProcessSet{1, 2, 3, 4});
    CHECK(k4[0].yMin == 0);
    // Every y up to kappa-1 qualifies: the "exactly one y" reading fails here.
    CHECK(k4[0].yMax == 2);

    CHECK(enumerate_cores(graphs::chain(3)).empty());

    auto ab = enumerate_cores(graphs::two_cores());
    REQUIRE(ab.size() == 2);
    CHECK(ab[0].core == ProcessSet{1, 2, 3});
    CHECK(ab[0].yMin == 1);
    CHECK(ab[1].core == ProcessSet{6, 7, 8});
    CHECK(ab[1].yMin == 0);

    // Linking the triangles folds everything into one sink, which always
    // qualifies with y = 0; the triangles remain cores at y = 1.
    auto linked = enumerate_cores(graphs::two_cores_linked());
    CHECK(std::any_of(linked.begin(), linked.end(), [](auto const& e) {
        return e.core.size() == 8 && e.yMin == 0;
    }));
    CHECK(std::any_of(linked.begin(), linked.end(), [](auto const& e) {
        return e.core == ProcessSet{1, 2, 3} && e.yMin == 1;
    }));

    CHECK_THROWS_AS(enumerate_cores(graphs::complete(17)), SizeLimitError);
    CHECK_NOTHROW(enumerate_cores(graphs::chain(17), 20));

    SUBCASE("matches the literal subset-quantifier oracle")
    {
        Rng rng(99);
        for (int round = 0; round < 25; ++round)
        {
            auto g = oracle::random_digraph(2 + rng.below(5), 0.55, rng);
            CHECK(enumerate_cores(g) == brute_cores(g));
        }
    }
}

TEST_CASE("is_extended_k_osr")
{
    auto [k4, k4core] = is_extended_k_osr(graphs::complete(4), 2);
    CHECK(k4.verdict);
    REQUIRE(k4core);
    CHECK(k4core->core == ProcessSet{1, 2, 3, 4});
    CHECK(k4core->y == 0);

    auto [ab, abcore] = is_extended_k_osr(graphs::two_cores(), 1);
    CHECK_FALSE(ab.verdict);
    CHECK(ab.failedClause == FailedClause::CoreNotUnique);
    CHECK_FALSE(abcore);

    auto [linked, lcore] = is_extended_k_osr(graphs::two_cores_linked(), 1);
    CHECK_FALSE(linked.verdict);
    CHECK(linked.failedClause == FailedClause::CoreNotUnique);

    SUBCASE("verdict agrees with the enumeration")
    {
        Rng rng(17);
        for (int round = 0; round < 40; ++round)
        {
            auto g = oracle::random_digraph(3 + rng.below(5), 0.6, rng);
            auto [r, cert] = is_extended_k_osr(g, 1);
            auto base = is_k_osr(g, 1);
            if (!base.verdict)
            {
                CHECK_FALSE(r.verdict);
                continue;
            }
            auto cores = enumerate_cores(g);
            bool expected = cores.size() == 1 && is_subset(cores[0].core, base.sink);
            CHECK(r.verdict == expected);
        }
    }
}

TEST_CASE("check_bft_cup")
{
    CHECK(check_bft_cup(graphs::complete(4), {4}, 1).verdict);
    CHECK(check_bft_cup(graphs::byzantine_sink_member(), {4}, 1).verdict);

    auto bridged = check_bft_cup(graphs::bridged_clusters(), {4}, 1);
    CHECK_FALSE(bridged.verdict);
    CHECK(bridged.failedClause == FailedClause::NotConnected);

    CHECK(check_bft_cup(graphs::two_cores(), {}, 0).verdict);
    CHECK_THROWS_AS(check_bft_cup(graphs::complete(4), {3, 4}, 1), InvalidArgument);

    // Sink of two correct processes is too small for f = 1.
    auto small = check_bft_cup(graphs::complete(3), {3}, 1);
    CHECK_FALSE(small.verdict);

    SUBCASE("f = 0 reduces to 1-OSR with a non-empty sink")
    {
        Rng rng(31);
        for (int round = 0; round < 30; ++round)
        {
            auto g = oracle::random_digraph(2 + rng.below(6), 0.5, rng);
            CHECK(check_bft_cup(g, {}, 0).verdict == is_k_osr(g, 1).verdict);
        }
    }
}

TEST_CASE("check_bft_cupft")
{
    ProcessSet F{6, 7};
    auto ok = check_bft_cupft(graphs::complete(7), F, 2);
    CHECK(ok.verdict);
    REQUIRE(ok.core);
    CHECK(ok.core->core == ProcessSet{1, 2, 3, 4, 5});

    auto ab = check_bft_cupft(graphs::two_cores(), {}, 0);
    CHECK_FALSE(ab.verdict);
    CHECK(ab.failedClause == FailedClause::CoreNotUnique);
    CHECK_THROWS_AS(check_bft_cupft(graphs::complete(4), {3, 4}, 1), InvalidArgument);
}

TEST_CASE("graph text format")
{
    auto g = graphs::two_cores();
    auto text = format_graph(g);
    CHECK(text.substr(0, 9) == "1: 2 3 4\n");
    CHECK(parse_graph(text) == g);
    CHECK(parse_graph("# comment\n\n10: 20\n20:  10 , 30\n") ==
          KnowledgeGraph({10, 20, 30}, {{10, 20}, {20, 10}, {20, 30}}));
    CHECK_THROWS_AS(parse_graph("1 2 3"), ParseError);
    CHECK_THROWS_AS(parse_graph("1: 1"), ParseError);
    CHECK_THROWS_AS(parse_graph("1: x"), ParseError);
    CHECK_THROWS_AS(parse_graph("1: 2\n1: 3"), ParseError);
    CHECK(parse_id_list("1,2, 5") == ProcessSet{1, 2, 5});
}
