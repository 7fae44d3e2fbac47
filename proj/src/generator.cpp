#include "bftcup/generator.hpp"

#include "bftcup/rng.hpp"

#include <algorithm>
#include <sstream>

namespace bftcup {

std::string
to_string(GraphModel m)
{
    switch (m)
    {
    case GraphModel::Cup:
        return "cup";
    case GraphModel::Cupft:
        return "cupft";
    case GraphModel::CupOnly:
        return "cup-only";
    }
    return "unknown";
}

GraphModel
parse_graph_model(std::string const& s)
{
    if (s == "cup")
    {
        return GraphModel::Cup;
    }
    if (s == "cupft")
    {
        return GraphModel::Cupft;
    }
    if (s == "cup-only")
    {
        return GraphModel::CupOnly;
    }
    throw InvalidArgument("unknown graph model '" + s + "'");
}

namespace graphs {

KnowledgeGraph
complete(ProcessSet const& ids)
{
    std::vector<Edge> edges;
    for (auto a : ids)
    {
        for (auto b : ids)
        {
            if (a != b)
            {
                edges.emplace_back(a, b);
            }
        }
    }
    return KnowledgeGraph(ids, edges);
}

KnowledgeGraph
complete(std::size_t n)
{
    ProcessSet ids;
    for (ProcessId i = 1; i <= n; ++i)
    {
        ids.insert(i);
    }
    return complete(ids);
}

KnowledgeGraph
chain(std::size_t n)
{
    ProcessSet ids;
    std::vector<Edge> edges;
    for (ProcessId i = 1; i <= n; ++i)
    {
        ids.insert(i);
        if (i > 1)
        {
            edges.emplace_back(i - 1, i);
        }
    }
    return KnowledgeGraph(ids, edges);
}

KnowledgeGraph
byzantine_sink_member()
{
    return KnowledgeGraph::from_adjacency({
        {1, {2, 3, 4}},
        {2, {1, 3, 4}},
        {3, {1, 2, 4}},
        {4, {1, 2, 3}},
    });
}

KnowledgeGraph
bridged_clusters()
{
    return KnowledgeGraph::from_adjacency({
        {1, {2, 3, 4}},
        {2, {1, 3, 4}},
        {3, {1, 2, 4}},
        {4, {1, 2, 3, 5, 6, 7, 8}},
        {5, {4, 6, 7, 8}},
        {6, {4, 5, 7, 8}},
        {7, {4, 5, 6, 8}},
        {8, {4, 5, 6, 7}},
    });
}

KnowledgeGraph
two_cores()
{
    return KnowledgeGraph::from_adjacency({
        {1, {2, 3, 4}},
        {2, {1, 3}},
        {3, {1, 2}},
        {4, {5}},
        {5, {6, 7, 8}},
        {6, {7, 8}},
        {7, {6, 8}},
        {8, {6, 7}},
    });
}

KnowledgeGraph
two_cores_linked()
{
    return two_cores().with_edge(6, 3);
}

} // namespace graphs

namespace {

struct Draft
{
    ProcessSet vertices;
    std::set<Edge> edges;

    void add(ProcessId a, ProcessId b)
    {
        if (a != b)
        {
            edges.emplace(a, b);
        }
    }

    KnowledgeGraph build() const
    {
        return KnowledgeGraph(vertices, std::vector<Edge>(edges.begin(), edges.end()));
    }
};

std::vector<ProcessId>
draw_ids(std::size_t n, Rng& rng)
{
    // Ids are unique but deliberately not consecutive.
    ProcessSet ids;
    while (ids.size() < n)
    {
        ids.insert(static_cast<ProcessId>(rng.between(1, 3 * n)));
    }
    std::vector<ProcessId> out(ids.begin(), ids.end());
    rng.shuffle(out);
    return out;
}

std::vector<ProcessId>
sample(std::vector<ProcessId> pool, std::size_t k, Rng& rng)
{
    rng.shuffle(pool);
    pool.resize(std::min(k, pool.size()));
    return pool;
}

void
thin_sink(Draft& d, std::vector<ProcessId> const& sink, std::size_t f, double p, Rng& rng)
{
    if (p <= 0.0)
    {
        return;
    }
    std::vector<Edge> candidates;
    for (auto a : sink)
    {
        for (auto b : sink)
        {
            if (a != b)
            {
                candidates.emplace_back(a, b);
            }
        }
    }
    rng.shuffle(candidates);
    ProcessSet sinkSet(sink.begin(), sink.end());
    for (auto const& e : candidates)
    {
        if (!rng.chance(p))
        {
            continue;
        }
        d.edges.erase(e);
        if (kappa(d.build().induced(sinkSet), sinkSet) < f + 1)
        {
            d.edges.insert(e);
        }
    }
}

// Adds edges out of every spurious core of the safe subgraph until only
// `keep` remains. Returns false when that does not converge.
bool
break_spurious_cores(Draft& d, ProcessSet const& faulty, ProcessSet const& keep, Rng& rng)
{
    for (std::size_t round = 0; round < 4 * d.vertices.size(); ++round)
    {
        auto safe = safe_subgraph(d.build(), faulty);
        auto cores = enumerate_cores(safe);
        std::vector<ProcessSet> spurious;
        for (auto const& e : cores)
        {
            if (e.core != keep)
            {
                spurious.push_back(e.core);
            }
        }
        if (spurious.empty())
        {
            return true;
        }
        auto const& p = spurious.front();
        std::vector<ProcessId> from(p.begin(), p.end());
        auto targets = set_difference(keep, p);
        if (targets.empty())
        {
            return false;
        }
        std::vector<ProcessId> to(targets.begin(), targets.end());
        d.add(rng.pick(from), rng.pick(to));
    }
    return false;
}

GeneratedGraph
attempt(GeneratorParams const& params, Rng& rng)
{
    auto const n = params.n;
    auto const f = params.f;
    auto ids = draw_ids(n, rng);
    Draft d;
    d.vertices.insert(ids.begin(), ids.end());

    auto take = [&ids](std::size_t& cursor, std::size_t count) {
        std::vector<ProcessId> out(ids.begin() + cursor, ids.begin() + cursor + count);
        cursor += count;
        return out;
    };
    std::size_t cursor = 0;
    auto sink = take(cursor, 2 * f + 1);
    auto faulty = take(cursor, f);
    std::vector<ProcessId> cluster;
    if (params.model == GraphModel::CupOnly)
    {
        cluster = take(cursor, f + 3);
    }
    auto nonsink = take(cursor, n - cursor);

    // Correct sink: complete, optionally thinned.
    for (auto a : sink)
    {
        for (auto b : sink)
        {
            d.add(a, b);
        }
    }
    thin_sink(d, sink, f, params.sinkThinning, rng);

    // Byzantine processes are known by every correct sink member and claim
    // to know the sink plus a random selection of everyone else.
    for (auto b : faulty)
    {
        for (auto c : sink)
        {
            d.add(c, b);
            d.add(b, c);
        }
        for (auto v : ids)
        {
            if (rng.chance(params.extraEdgeDensity))
            {
                d.add(b, v);
            }
        }
    }

    // Spurious core for the cup-only model: a complete cluster whose f+1
    // exits land on distinct sink members.
    if (!cluster.empty())
    {
        for (auto a : cluster)
        {
            for (auto b : cluster)
            {
                d.add(a, b);
            }
        }
        auto exits = sample(sink, f + 1, rng);
        for (std::size_t i = 0; i < exits.size(); ++i)
        {
            d.add(cluster[i], exits[i]);
        }
    }

    // Non-sink vertices: f+1 direct edges into the sink, optional extra
    // edges only towards earlier non-sink vertices, so non-sink members
    // never form a cycle among themselves.
    for (std::size_t i = 0; i < nonsink.size(); ++i)
    {
        for (auto target : sample(sink, f + 1, rng))
        {
            d.add(nonsink[i], target);
        }
        for (std::size_t j = 0; j < i; ++j)
        {
            if (rng.chance(params.extraEdgeDensity))
            {
                d.add(nonsink[i], nonsink[j]);
            }
        }
        for (auto b : faulty)
        {
            if (rng.chance(params.extraEdgeDensity))
            {
                d.add(nonsink[i], b);
            }
        }
    }

    ProcessSet faultySet(faulty.begin(), faulty.end());
    ProcessSet sinkSet(sink.begin(), sink.end());
    if (params.model == GraphModel::Cupft &&
        !break_spurious_cores(d, faultySet, sinkSet, rng))
    {
        throw GenerationFailure("spurious cores did not converge");
    }

    GeneratedGraph out{d.build(), faultySet, f, sinkSet};
    return out;
}

bool
accepted(GeneratedGraph const& g, GraphModel model)
{
    switch (model)
    {
    case GraphModel::Cup:
        return check_bft_cup(g.graph, g.faulty, g.f).verdict;
    case GraphModel::Cupft:
        return check_bft_cupft(g.graph, g.faulty, g.f).verdict;
    case GraphModel::CupOnly:
    {
        if (!check_bft_cup(g.graph, g.faulty, g.f).verdict)
        {
            return false;
        }
        auto [r, cert] = is_extended_k_osr(safe_subgraph(g.graph, g.faulty), g.f + 1);
        return !r.verdict && r.failedClause == FailedClause::CoreNotUnique;
    }
    }
    return false;
}

} // namespace

GeneratedGraph
generate(GeneratorParams const& params, std::uint64_t seed)
{
    std::size_t minimum = params.model == GraphModel::CupOnly ? 4 * params.f + 4
                                                              : 3 * params.f + 1;
    if (params.n < minimum)
    {
        throw InvalidArgument("generate: model " + to_string(params.model) + " with f=" +
                              std::to_string(params.f) + " needs n >= " +
                              std::to_string(minimum));
    }
    Rng rng(seed);
    std::ostringstream diagnostics;
    for (std::size_t attemptNo = 0; attemptNo < params.maxRetries; ++attemptNo)
    {
        try
        {
            auto g = attempt(params, rng);
            if (accepted(g, params.model))
            {
                return g;
            }
            diagnostics << " attempt " << attemptNo << ": post-validation rejected;";
        }
        catch (GenerationFailure const& e)
        {
            diagnostics << " attempt " << attemptNo << ": " << e.what() << ';';
        }
    }
    throw GenerationFailure("generate: retries exhausted for n=" + std::to_string(params.n) +
                            " f=" + std::to_string(params.f) + " model=" +
                            to_string(params.model) + ";" + diagnostics.str());
}

} // namespace bftcup
