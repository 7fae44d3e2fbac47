#pragma once

// Index-based max-flow engine behind the kgraph operations and the protocol's
// local-view checks. Vertex i of the engine is the i-th smallest id.

#include "bftcup/kgraph.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace bftcup {

using VertexMask = std::uint64_t;

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

class Connectivity
{
public:
    explicit Connectivity(KnowledgeGraph const& g);

    std::size_t n() const { return mIds.size(); }
    std::vector<ProcessId> const& ids() const { return mIds; }

    /// Throws InvalidArgument for ids not in the graph.
    std::size_t index_of(ProcessId v) const;
    ProcessId id_at(std::size_t i) const { return mIds[i]; }

    bool has_edge(std::size_t from, std::size_t to) const;

    /// Disjoint paths s -> t over the whole graph, memoized.
    std::size_t paths(std::size_t s, std::size_t t);

    /// Disjoint paths s -> t using only vertices whose flag in `allowed` is
    /// set; counting stops once `limit` paths are found.
    std::size_t paths_within(std::vector<char> const& allowed, std::size_t s,
                             std::size_t t, std::size_t limit = kUnlimited) const;

    /// kappa of the induced subgraph on `members`. When `need` is given the
    /// search stops at the first pair below it and returns that pair's count,
    /// so the result is exact whenever it is below `need`.
    std::size_t kappa_of(std::vector<std::size_t> const& members,
                         std::size_t need = kUnlimited) const;

    // Mask helpers; only valid for n() <= 64.
    std::vector<std::size_t> members_of(VertexMask m) const;
    std::vector<char> allowed_of(VertexMask m) const;

private:
    std::vector<ProcessId> mIds;
    std::vector<std::vector<std::size_t>> mOut;
    std::vector<std::vector<char>> mAdj;
    std::vector<std::size_t> mMemo;
};

} // namespace bftcup
