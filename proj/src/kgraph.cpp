#include "bftcup/kgraph.hpp"

#include "bftcup/connectivity.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace bftcup {

std::string
to_string(ProcessSet const& s)
{
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (auto v : s)
    {
        out << (first ? "" : ",") << v;
        first = false;
    }
    out << '}';
    return out.str();
}

ProcessSet
set_union(ProcessSet const& a, ProcessSet const& b)
{
    ProcessSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

ProcessSet
set_difference(ProcessSet const& a, ProcessSet const& b)
{
    ProcessSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
    return out;
}

ProcessSet
set_intersection(ProcessSet const& a, ProcessSet const& b)
{
    ProcessSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.end()));
    return out;
}

////////////////////////////////////////////////////////////////////////////////
// KnowledgeGraph
////////////////////////////////////////////////////////////////////////////////

KnowledgeGraph::KnowledgeGraph(ProcessSet vertices, std::vector<Edge> const& edges)
    : mVertices(std::move(vertices))
{
    for (auto v : mVertices)
    {
        mAdj[v];
    }
    for (auto const& [from, to] : edges)
    {
        if (from == to)
        {
            throw InvalidArgument("self-loop on vertex " + std::to_string(from));
        }
        if (!contains(from) || !contains(to))
        {
            throw InvalidArgument("edge (" + std::to_string(from) + "," +
                                  std::to_string(to) + ") has an unknown endpoint");
        }
        mAdj[from].insert(to);
    }
}

KnowledgeGraph
KnowledgeGraph::from_adjacency(std::map<ProcessId, ProcessSet> const& adj)
{
    ProcessSet vertices;
    std::vector<Edge> edges;
    for (auto const& [v, succ] : adj)
    {
        vertices.insert(v);
        for (auto w : succ)
        {
            vertices.insert(w);
            edges.emplace_back(v, w);
        }
    }
    return KnowledgeGraph(std::move(vertices), edges);
}

ProcessSet const&
KnowledgeGraph::successors(ProcessId v) const
{
    auto it = mAdj.find(v);
    if (it == mAdj.end())
    {
        throw InvalidArgument("vertex " + std::to_string(v) + " not in graph");
    }
    return it->second;
}

bool
KnowledgeGraph::has_edge(ProcessId from, ProcessId to) const
{
    auto it = mAdj.find(from);
    return it != mAdj.end() && it->second.count(to) != 0;
}

std::size_t
KnowledgeGraph::edge_count() const
{
    std::size_t total = 0;
    for (auto const& [v, succ] : mAdj)
    {
        total += succ.size();
    }
    return total;
}

std::vector<Edge>
KnowledgeGraph::edges() const
{
    std::vector<Edge> out;
    for (auto const& [v, succ] : mAdj)
    {
        for (auto w : succ)
        {
            out.emplace_back(v, w);
        }
    }
    return out;
}

KnowledgeGraph
KnowledgeGraph::induced(ProcessSet const& keep) const
{
    ProcessSet vertices = set_intersection(mVertices, keep);
    std::vector<Edge> kept;
    for (auto const& [from, to] : edges())
    {
        if (vertices.count(from) && vertices.count(to))
        {
            kept.emplace_back(from, to);
        }
    }
    return KnowledgeGraph(std::move(vertices), kept);
}

KnowledgeGraph
KnowledgeGraph::with_edge(ProcessId from, ProcessId to) const
{
    auto all = edges();
    all.emplace_back(from, to);
    return KnowledgeGraph(mVertices, all);
}

KnowledgeGraph
KnowledgeGraph::without_edge(ProcessId from, ProcessId to) const
{
    auto all = edges();
    std::erase(all, Edge{from, to});
    return KnowledgeGraph(mVertices, all);
}

////////////////////////////////////////////////////////////////////////////////
// Reports
////////////////////////////////////////////////////////////////////////////////

std::string
to_string(FailedClause c)
{
    switch (c)
    {
    case FailedClause::None:
        return "none";
    case FailedClause::NotConnected:
        return "not-connected";
    case FailedClause::MultipleSinks:
        return "multiple-sinks";
    case FailedClause::SinkConnectivity:
        return "sink-connectivity";
    case FailedClause::NonsinkPaths:
        return "nonsink-paths";
    case FailedClause::SinkSize:
        return "sink-size";
    case FailedClause::CoreMissing:
        return "core-missing";
    case FailedClause::CoreNotUnique:
        return "core-not-unique";
    case FailedClause::CoreSize:
        return "core-size";
    }
    return "unknown";
}

ValidationReport
ValidationReport::fail(FailedClause c, Witness w)
{
    ValidationReport r;
    r.verdict = false;
    r.failedClause = c;
    r.witness = std::move(w);
    return r;
}

////////////////////////////////////////////////////////////////////////////////
// Path counting
////////////////////////////////////////////////////////////////////////////////

std::size_t
disjoint_paths(KnowledgeGraph const& g, ProcessId s, ProcessId t)
{
    if (s == t)
    {
        throw InvalidArgument("disjoint_paths: source equals target");
    }
    Connectivity c(g);
    return c.paths(c.index_of(s), c.index_of(t));
}

std::size_t
kappa(KnowledgeGraph const& g, ProcessSet const& S)
{
    if (!is_subset(S, g.vertices()))
    {
        throw InvalidArgument("kappa: set is not a subset of the vertices");
    }
    Connectivity c(g);
    std::vector<std::size_t> members;
    for (auto v : S)
    {
        members.push_back(c.index_of(v));
    }
    return c.kappa_of(members);
}

bool
implies_k(KnowledgeGraph const& g, ProcessSet const& A, ProcessSet const& B, std::size_t k)
{
    if (A.empty() || B.empty())
    {
        throw InvalidArgument("implies_k: empty set");
    }
    if (!set_intersection(A, B).empty())
    {
        throw InvalidArgument("implies_k: sets overlap");
    }
    if (!is_subset(A, g.vertices()) || !is_subset(B, g.vertices()))
    {
        throw InvalidArgument("implies_k: sets are not subsets of the vertices");
    }
    Connectivity c(g);
    std::vector<char> all(c.n(), 1);
    for (auto a : A)
    {
        for (auto b : B)
        {
            if (c.paths_within(all, c.index_of(a), c.index_of(b), k) < k)
            {
                return false;
            }
        }
    }
    return true;
}

////////////////////////////////////////////////////////////////////////////////
// Condensation (iterative Tarjan)
////////////////////////////////////////////////////////////////////////////////

Condensation
condense(KnowledgeGraph const& g)
{
    Connectivity c(g);
    auto const n = c.n();
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t u = 0; u < n; ++u)
    {
        for (std::size_t v = 0; v < n; ++v)
        {
            if (c.has_edge(u, v))
            {
                out[u].push_back(v);
            }
        }
    }

    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kNone), low(n, 0), comp(n, kNone);
    std::vector<char> onStack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> sccs;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root)
    {
        if (index[root] != kNone)
        {
            continue;
        }
        // Frames of (vertex, next successor position).
        std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        onStack[root] = 1;
        while (!frames.empty())
        {
            auto& [u, pos] = frames.back();
            if (pos < out[u].size())
            {
                auto w = out[u][pos++];
                if (index[w] == kNone)
                {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    onStack[w] = 1;
                    frames.emplace_back(w, 0);
                }
                else if (onStack[w])
                {
                    low[u] = std::min(low[u], index[w]);
                }
                continue;
            }
            if (low[u] == index[u])
            {
                std::vector<std::size_t> scc;
                std::size_t w;
                do
                {
                    w = stack.back();
                    stack.pop_back();
                    onStack[w] = 0;
                    scc.push_back(w);
                } while (w != u);
                sccs.push_back(std::move(scc));
            }
            auto finished = u;
            frames.pop_back();
            if (!frames.empty())
            {
                auto parent = frames.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
        }
    }

    // Deterministic order: components sorted by their smallest member.
    for (auto& scc : sccs)
    {
        std::sort(scc.begin(), scc.end());
    }
    std::sort(sccs.begin(), sccs.end(),
              [](auto const& a, auto const& b) { return a.front() < b.front(); });

    Condensation result;
    for (std::size_t i = 0; i < sccs.size(); ++i)
    {
        ProcessSet members;
        for (auto v : sccs[i])
        {
            comp[v] = i;
            members.insert(c.id_at(v));
        }
        result.components.push_back(std::move(members));
    }
    std::set<std::pair<std::size_t, std::size_t>> dag;
    for (std::size_t u = 0; u < n; ++u)
    {
        for (auto v : out[u])
        {
            if (comp[u] != comp[v])
            {
                dag.emplace(comp[u], comp[v]);
            }
        }
    }
    result.dagEdges.assign(dag.begin(), dag.end());
    std::vector<char> hasOut(sccs.size(), 0);
    for (auto const& [from, to] : dag)
    {
        hasOut[from] = 1;
    }
    for (std::size_t i = 0; i < sccs.size(); ++i)
    {
        if (!hasOut[i])
        {
            result.sinkComponents.push_back(i);
        }
    }
    return result;
}

KnowledgeGraph
safe_subgraph(KnowledgeGraph const& g, ProcessSet const& faulty)
{
    return g.induced(set_difference(g.vertices(), faulty));
}

////////////////////////////////////////////////////////////////////////////////
// Validators
////////////////////////////////////////////////////////////////////////////////

namespace {

ProcessSet
undirected_unreached(KnowledgeGraph const& g)
{
    std::map<ProcessId, ProcessSet> undirected;
    for (auto const& [a, b] : g.edges())
    {
        undirected[a].insert(b);
        undirected[b].insert(a);
    }
    ProcessSet seen{*g.vertices().begin()};
    std::vector<ProcessId> todo{*g.vertices().begin()};
    while (!todo.empty())
    {
        auto v = todo.back();
        todo.pop_back();
        for (auto w : undirected[v])
        {
            if (seen.insert(w).second)
            {
                todo.push_back(w);
            }
        }
    }
    return set_difference(g.vertices(), seen);
}

} // namespace

bool
undirected_connected(KnowledgeGraph const& g)
{
    return !g.empty() && undirected_unreached(g).empty();
}

ValidationReport
is_k_osr(KnowledgeGraph const& g, std::size_t k)
{
    if (k < 1)
    {
        throw InvalidArgument("is_k_osr: k must be at least 1");
    }
    if (g.empty())
    {
        return ValidationReport::fail(FailedClause::NotConnected, Witness{});
    }
    if (!undirected_connected(g))
    {
        return ValidationReport::fail(FailedClause::NotConnected,
                                      Witness{undirected_unreached(g), std::nullopt});
    }

    auto cond = condense(g);
    if (cond.sinkComponents.size() != 1)
    {
        Witness w;
        for (auto idx : cond.sinkComponents)
        {
            w.vertices.insert(*cond.components[idx].begin());
        }
        return ValidationReport::fail(FailedClause::MultipleSinks, w);
    }
    ProcessSet const& sink = cond.components[cond.sinkComponents.front()];

    Connectivity c(g);
    std::vector<char> inSink(c.n(), 0);
    for (auto v : sink)
    {
        inSink[c.index_of(v)] = 1;
    }

    if (sink.size() < 2)
    {
        auto r = ValidationReport::fail(FailedClause::SinkConnectivity,
                                        Witness{sink, std::nullopt});
        r.sink = sink;
        return r;
    }
    for (auto s : sink)
    {
        for (auto t : sink)
        {
            if (s == t)
            {
                continue;
            }
            if (c.paths_within(inSink, c.index_of(s), c.index_of(t), k) < k)
            {
                auto r = ValidationReport::fail(FailedClause::SinkConnectivity,
                                                Witness{sink, std::make_pair(s, t)});
                r.sink = sink;
                return r;
            }
        }
    }

    std::vector<char> all(c.n(), 1);
    for (auto v : g.vertices())
    {
        if (sink.count(v))
        {
            continue;
        }
        for (auto t : sink)
        {
            if (c.paths_within(all, c.index_of(v), c.index_of(t), k) < k)
            {
                auto r = ValidationReport::fail(FailedClause::NonsinkPaths,
                                                Witness{{v, t}, std::make_pair(v, t)});
                r.sink = sink;
                return r;
            }
        }
    }

    auto r = ValidationReport::pass();
    r.sink = sink;
    return r;
}

std::vector<CoreEntry>
enumerate_cores(KnowledgeGraph const& g, std::size_t enumerationCap)
{
    if (g.size() > enumerationCap || g.size() > 63)
    {
        throw SizeLimitError("enumerate_cores: " + std::to_string(g.size()) +
                             " vertices exceed the enumeration cap of " +
                             std::to_string(std::min<std::size_t>(enumerationCap, 63)));
    }
    Connectivity c(g);
    auto const n = c.n();
    // All-pairs path counts over the full graph; the outside-vertex clause
    // only ever looks at these.
    std::vector<std::vector<std::size_t>> dp(n, std::vector<std::size_t>(n, 0));
    for (std::size_t s = 0; s < n; ++s)
    {
        for (std::size_t t = 0; t < n; ++t)
        {
            if (s != t)
            {
                dp[s][t] = c.paths(s, t);
            }
        }
    }

    std::vector<CoreEntry> out;
    VertexMask const full = n == 0 ? 0 : (VertexMask{1} << n) - 1;
    for (VertexMask mask = 1; mask <= full && full != 0; ++mask)
    {
        auto members = c.members_of(mask);
        if (members.size() < 2)
        {
            continue;
        }
        // Least y such that every outside vertex has some member with at
        // most y disjoint paths to it.
        std::size_t yNeed = 0;
        for (std::size_t t = 0; t < n && yNeed + 2 <= members.size(); ++t)
        {
            if (mask >> t & 1)
            {
                continue;
            }
            std::size_t lowest = kUnlimited;
            for (auto p : members)
            {
                lowest = std::min(lowest, dp[p][t]);
            }
            yNeed = std::max(yNeed, lowest);
        }
        if (yNeed + 2 > members.size())
        {
            continue;
        }
        if (c.kappa_of(members, yNeed + 1) < yNeed + 1)
        {
            continue;
        }
        auto exact = c.kappa_of(members);
        ProcessSet core;
        for (auto m : members)
        {
            core.insert(c.id_at(m));
        }
        out.push_back(CoreEntry{std::move(core), yNeed, exact - 1});
    }
    std::sort(out.begin(), out.end(),
              [](auto const& a, auto const& b) { return a.core < b.core; });
    return out;
}

std::pair<ValidationReport, std::optional<CoreCertificate>>
is_extended_k_osr(KnowledgeGraph const& g, std::size_t k, std::size_t enumerationCap)
{
    auto report = is_k_osr(g, k);
    if (!report.verdict)
    {
        return {report, std::nullopt};
    }
    auto sink = report.sink;
    auto cores = enumerate_cores(g, enumerationCap);
    if (cores.empty())
    {
        auto r = ValidationReport::fail(FailedClause::CoreMissing, Witness{sink, std::nullopt});
        r.sink = sink;
        return {r, std::nullopt};
    }
    if (cores.size() > 1)
    {
        Witness w;
        for (auto const& e : cores)
        {
            w.vertices.insert(e.core.begin(), e.core.end());
        }
        auto r = ValidationReport::fail(FailedClause::CoreNotUnique, w);
        r.sink = sink;
        return {r, std::nullopt};
    }
    auto const& only = cores.front();
    if (!is_subset(only.core, sink))
    {
        auto r = ValidationReport::fail(FailedClause::CoreMissing,
                                        Witness{only.core, std::nullopt});
        r.sink = sink;
        return {r, std::nullopt};
    }
    report.core = CoreCertificate{only.core, only.yMin};
    return {report, report.core};
}

ValidationReport
check_bft_cup(KnowledgeGraph const& g, ProcessSet const& faulty, std::size_t f)
{
    if (faulty.size() > f)
    {
        throw InvalidArgument("check_bft_cup: more faulty processes than f");
    }
    auto safe = safe_subgraph(g, faulty);
    auto report = is_k_osr(safe, f + 1);
    if (!report.verdict)
    {
        return report;
    }
    if (report.sink.size() < 2 * f + 1)
    {
        auto r = ValidationReport::fail(FailedClause::SinkSize, Witness{report.sink, std::nullopt});
        r.sink = report.sink;
        return r;
    }
    return report;
}

ValidationReport
check_bft_cupft(KnowledgeGraph const& g, ProcessSet const& faulty, std::size_t f,
                std::size_t enumerationCap)
{
    if (faulty.size() > f)
    {
        throw InvalidArgument("check_bft_cupft: more faulty processes than f");
    }
    auto safe = safe_subgraph(g, faulty);
    auto [report, cert] = is_extended_k_osr(safe, f + 1, enumerationCap);
    if (!report.verdict)
    {
        return report;
    }
    if (report.sink.size() < 2 * f + 1)
    {
        auto r = ValidationReport::fail(FailedClause::SinkSize, Witness{report.sink, std::nullopt});
        r.sink = report.sink;
        return r;
    }
    if (cert->core.size() < 2 * f + 1)
    {
        auto r = ValidationReport::fail(FailedClause::CoreSize, Witness{cert->core, std::nullopt});
        r.sink = report.sink;
        return r;
    }
    return report;
}

} // namespace bftcup
