#include "bftcup/connectivity.hpp"

#include <algorithm>
#include <queue>

namespace bftcup {

namespace {

// Unit-capacity residual network for the vertex-split graph.
class SplitFlow
{
public:
    explicit SplitFlow(std::size_t nodes) : mHead(nodes, -1) {}

    void
    add_arc(std::size_t from, std::size_t to)
    {
        mArcs.push_back({to, 1, mHead[from]});
        mHead[from] = static_cast<int>(mArcs.size()) - 1;
        mArcs.push_back({from, 0, mHead[to]});
        mHead[to] = static_cast<int>(mArcs.size()) - 1;
    }

    std::size_t
    max_flow(std::size_t source, std::size_t sink, std::size_t limit)
    {
        std::size_t flow = 0;
        std::vector<int> via(mHead.size());
        while (flow < limit)
        {
            std::fill(via.begin(), via.end(), -1);
            std::queue<std::size_t> q;
            q.push(source);
            via[source] = -2;
            while (!q.empty() && via[sink] == -1)
            {
                auto u = q.front();
                q.pop();
                for (int a = mHead[u]; a != -1; a = mArcs[a].next)
                {
                    auto const& arc = mArcs[a];
                    if (arc.cap > 0 && via[arc.to] == -1)
                    {
                        via[arc.to] = a;
                        q.push(arc.to);
                    }
                }
            }
            if (via[sink] == -1)
            {
                break;
            }
            for (auto v = sink; v != source;)
            {
                int a = via[v];
                mArcs[a].cap -= 1;
                mArcs[a ^ 1].cap += 1;
                v = mArcs[a ^ 1].to;
            }
            ++flow;
        }
        return flow;
    }

private:
    struct Arc
    {
        std::size_t to;
        int cap;
        int next;
    };
    std::vector<int> mHead;
    std::vector<Arc> mArcs;
};

} // namespace

Connectivity::Connectivity(KnowledgeGraph const& g)
    : mIds(g.vertices().begin(), g.vertices().end())
{
    auto const n = mIds.size();
    mOut.resize(n);
    mAdj.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (auto succ : g.successors(mIds[i]))
        {
            auto j = index_of(succ);
            mOut[i].push_back(j);
            mAdj[i][j] = 1;
        }
    }
    mMemo.assign(n * n, kUnlimited);
}

std::size_t
Connectivity::index_of(ProcessId v) const
{
    auto it = std::lower_bound(mIds.begin(), mIds.end(), v);
    if (it == mIds.end() || *it != v)
    {
        throw InvalidArgument("vertex " + std::to_string(v) + " not in graph");
    }
    return static_cast<std::size_t>(it - mIds.begin());
}

bool
Connectivity::has_edge(std::size_t from, std::size_t to) const
{
    return mAdj[from][to] != 0;
}

std::size_t
Connectivity::paths(std::size_t s, std::size_t t)
{
    auto& slot = mMemo[s * n() + t];
    if (slot == kUnlimited)
    {
        slot = paths_within(std::vector<char>(n(), 1), s, t);
    }
    return slot;
}

std::size_t
Connectivity::paths_within(std::vector<char> const& allowed, std::size_t s,
                           std::size_t t, std::size_t limit) const
{
    if (s == t)
    {
        throw InvalidArgument("disjoint paths need distinct endpoints");
    }
    if (!allowed[s] || !allowed[t] || limit == 0)
    {
        return 0;
    }
    // Vertex v splits into in(v) = 2v and out(v) = 2v + 1.
    SplitFlow net(2 * n());
    for (std::size_t v = 0; v < n(); ++v)
    {
        if (!allowed[v])
        {
            continue;
        }
        if (v != s && v != t)
        {
            net.add_arc(2 * v, 2 * v + 1);
        }
        if (v == t)
        {
            continue;
        }
        for (auto w : mOut[v])
        {
            if (allowed[w] && w != s)
            {
                net.add_arc(2 * v + 1, 2 * w);
            }
        }
    }
    return net.max_flow(2 * s + 1, 2 * t, limit);
}

std::size_t
Connectivity::kappa_of(std::vector<std::size_t> const& members, std::size_t need) const
{
    if (members.size() <= 1)
    {
        return 0;
    }
    std::vector<char> allowed(n(), 0);
    for (auto m : members)
    {
        allowed[m] = 1;
    }
    // Cheap bound first: kappa never exceeds any in- or out-degree.
    std::size_t best = members.size() - 1;
    for (auto u : members)
    {
        std::size_t out = 0, in = 0;
        for (auto v : members)
        {
            out += mAdj[u][v];
            in += mAdj[v][u];
        }
        best = std::min({best, out, in});
    }
    if (best < need && need != kUnlimited)
    {
        return best;
    }
    for (auto s : members)
    {
        for (auto t : members)
        {
            if (s == t)
            {
                continue;
            }
            best = std::min(best, paths_within(allowed, s, t, best));
            if (need != kUnlimited && best < need)
            {
                return best;
            }
            if (best == 0)
            {
                return 0;
            }
        }
    }
    return best;
}

std::vector<std::size_t>
Connectivity::members_of(VertexMask m) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n(); ++i)
    {
        if (m >> i & 1)
        {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<char>
Connectivity::allowed_of(VertexMask m) const
{
    std::vector<char> out(n(), 0);
    for (std::size_t i = 0; i < n(); ++i)
    {
        out[i] = static_cast<char>(m >> i & 1);
    }
    return out;
}

} // namespace bftcup
