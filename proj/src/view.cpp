#include "bftcup/view.hpp"

#include "bftcup/connectivity.hpp"

#include <algorithm>

namespace bftcup {

LocalView::LocalView(ProcessId self, ProcessSet pdSelf, SignedPD own)
    : mSelf(self), mPdSelf(std::move(pdSelf))
{
    mSKnown = mPdSelf;
    mSKnown.insert(mSelf);
    mSReceived.insert(mSelf);
    mSPD.insert(std::move(own));
}

bool
LocalView::merge(ProcessId from, std::set<SignedPD> const& pds, SigningAuthority const& authority)
{
    bool guard = std::any_of(pds.begin(), pds.end(), [&](SignedPD const& r) {
        return r.owner == from && verify_pd(authority, r);
    });
    if (!guard)
    {
        return false;
    }
    bool grew = false;
    for (auto const& r : pds)
    {
        if (mSPD.contains(r) || !verify_pd(authority, r))
        {
            continue;
        }
        mSPD.insert(r);
        mSKnown.insert(r.pd.begin(), r.pd.end());
        mSReceived.insert(r.owner);
        grew = true;
    }
    return grew;
}

KnowledgeGraph
LocalView::graph() const
{
    std::vector<Edge> edges;
    for (auto const& r : mSPD)
    {
        for (auto v : r.pd)
        {
            edges.emplace_back(r.owner, v);
        }
    }
    for (auto v : mPdSelf)
    {
        edges.emplace_back(mSelf, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return KnowledgeGraph(set_union(mSKnown, mSReceived), edges);
}

namespace {

// Shared search state: the local graph, its flow engine, and the received
// vertices as engine indices in increasing id order.
struct Search
{
    explicit Search(LocalView const& view) : graph(view.graph()), conn(graph)
    {
        for (auto v : view.s_received())
        {
            received.push_back(conn.index_of(v));
        }
    }

    // For each outside vertex t, the minimum over r in R of paths(r, t).
    std::vector<std::pair<std::size_t, std::size_t>> reach(std::vector<std::size_t> const& r)
    {
        std::vector<char> inR(conn.n(), 0);
        for (auto i : r)
        {
            inR[i] = 1;
        }
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t t = 0; t < conn.n(); ++t)
        {
            if (inR[t])
            {
                continue;
            }
            std::size_t least = kUnlimited;
            for (auto s : r)
            {
                least = std::min(least, conn.paths(s, t));
                if (least == 0)
                {
                    break;
                }
            }
            out.emplace_back(t, least);
        }
        return out;
    }

    ProcessSet ids(std::vector<std::size_t> const& idx) const
    {
        ProcessSet out;
        for (auto i : idx)
        {
            out.insert(conn.id_at(i));
        }
        return out;
    }

    // Visits subsets of `received` by decreasing size, lexicographic within
    // a size, until `visit` returns true.
    template <class F>
    void for_each_candidate(F&& visit)
    {
        auto const m = received.size();
        for (std::size_t size = m; size >= 1; --size)
        {
            std::vector<std::size_t> pick(size);
            for (std::size_t i = 0; i < size; ++i)
            {
                pick[i] = i;
            }
            while (true)
            {
                std::vector<std::size_t> r(size);
                for (std::size_t i = 0; i < size; ++i)
                {
                    r[i] = received[pick[i]];
                }
                if (visit(r))
                {
                    return;
                }
                std::size_t i = size;
                while (i > 0 && pick[i - 1] == m - size + i - 1)
                {
                    --i;
                }
                if (i == 0)
                {
                    break;
                }
                ++pick[i - 1];
                for (std::size_t j = i; j < size; ++j)
                {
                    pick[j] = pick[j - 1] + 1;
                }
            }
        }
    }

    KnowledgeGraph graph;
    Connectivity conn;
    std::vector<std::size_t> received;
};

} // namespace

std::optional<Acceptance>
sink_check(LocalView const& view, std::size_t f)
{
    Search search(view);
    std::optional<Acceptance> found;
    search.for_each_candidate([&](std::vector<std::size_t> const& r) {
        if (r.size() < f + 2)
        {
            return false;
        }
        std::vector<std::size_t> kStar;
        for (auto const& [t, least] : search.reach(r))
        {
            if (least > f)
            {
                kStar.push_back(t);
            }
        }
        if (kStar.size() > f || search.conn.kappa_of(r, f + 1) < f + 1)
        {
            return false;
        }
        found = Acceptance{search.ids(r), search.ids(kStar), std::nullopt};
        return true;
    });
    return found;
}

std::optional<Acceptance>
core_check(LocalView const& view)
{
    Search search(view);
    std::optional<Acceptance> best;
    search.for_each_candidate([&](std::vector<std::size_t> const& r) {
        // Smallest y with |{t : least(t) > y}| <= y; it only grows as y
        // shrinks, so scan upwards.
        auto reach = search.reach(r);
        std::size_t y = 0;
        while (true)
        {
            auto above = std::count_if(reach.begin(), reach.end(),
                                       [y](auto const& p) { return p.second > y; });
            if (static_cast<std::size_t>(above) <= y)
            {
                break;
            }
            ++y;
        }
        if (y + 2 > r.size())
        {
            return false;
        }
        if (best && *best->y <= y)
        {
            return false;
        }
        if (search.conn.kappa_of(r, y + 1) < y + 1)
        {
            return false;
        }
        std::vector<std::size_t> kStar;
        for (auto const& [t, least] : reach)
        {
            if (least > y)
            {
                kStar.push_back(t);
            }
        }
        best = Acceptance{search.ids(r), search.ids(kStar), y};
        return y == 0;
    });
    return best;
}

} // namespace bftcup
