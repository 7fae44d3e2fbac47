#pragma once

// Knowledge connectivity graphs and the connectivity mathematics that the
// feasibility conditions are phrased in: vertex-disjoint path counts, strong
// connectivity, SCC condensation, safe subgraphs and the (extended) k-OSR
// validators.

#include "bftcup/types.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bftcup {

using Edge = std::pair<ProcessId, ProcessId>;

/// Directed graph of process ids. An edge (i, j) means "i initially knows j".
/// Immutable once constructed; every analysis is a pure function of it.
class KnowledgeGraph
{
public:
    KnowledgeGraph() = default;

    /// Throws InvalidArgument on self-loops or edges with unknown endpoints.
    KnowledgeGraph(ProcessSet vertices, std::vector<Edge> const& edges);

    /// Every key is a vertex; successors not present as keys are added as
    /// vertices without outgoing edges.
    static KnowledgeGraph from_adjacency(std::map<ProcessId, ProcessSet> const& adj);

    ProcessSet const& vertices() const { return mVertices; }
    std::size_t size() const { return mVertices.size(); }
    bool empty() const { return mVertices.empty(); }
    bool contains(ProcessId v) const { return mVertices.count(v) != 0; }

    /// Throws InvalidArgument for unknown vertices.
    ProcessSet const& successors(ProcessId v) const;
    bool has_edge(ProcessId from, ProcessId to) const;
    std::size_t edge_count() const;
    std::vector<Edge> edges() const;

    KnowledgeGraph induced(ProcessSet const& keep) const;
    KnowledgeGraph with_edge(ProcessId from, ProcessId to) const;
    KnowledgeGraph without_edge(ProcessId from, ProcessId to) const;

    bool operator==(KnowledgeGraph const& other) const = default;

private:
    ProcessSet mVertices;
    std::map<ProcessId, ProcessSet> mAdj;
};

struct Condensation
{
    std::vector<ProcessSet> components;
    std::vector<std::pair<std::size_t, std::size_t>> dagEdges;
    std::vector<std::size_t> sinkComponents;
};

enum class FailedClause
{
    None,
    NotConnected,
    MultipleSinks,
    SinkConnectivity,
    NonsinkPaths,
    SinkSize,
    CoreMissing,
    CoreNotUnique,
    CoreSize,
};

std::string to_string(FailedClause c);

struct Witness
{
    ProcessSet vertices;
    std::optional<std::pair<ProcessId, ProcessId>> pair;
};

/// A core set together with the minimal y for which it qualifies.
struct CoreCertificate
{
    ProcessSet core;
    std::size_t y = 0;

    bool operator==(CoreCertificate const&) const = default;
};

struct ValidationReport
{
    bool verdict = true;
    FailedClause failedClause = FailedClause::None;
    std::optional<Witness> witness;

    // Filled in whenever a unique sink (resp. a unique core) exists.
    ProcessSet sink;
    std::optional<CoreCertificate> core;

    static ValidationReport pass() { return {}; }
    static ValidationReport fail(FailedClause c, Witness w);
};

/// One entry of the exhaustive core enumeration. Every y in [yMin, yMax]
/// qualifies, so the "exactly one y" reading can be checked against it.
struct CoreEntry
{
    ProcessSet core;
    std::size_t yMin = 0;
    std::size_t yMax = 0;

    bool operator==(CoreEntry const&) const = default;
};

inline constexpr std::size_t kDefaultEnumerationCap = 16;

class SizeLimitError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Maximum number of internally vertex-disjoint directed paths from s to t.
/// A direct edge counts as one path.
std::size_t disjoint_paths(KnowledgeGraph const& g, ProcessId s, ProcessId t);

/// Strong connectivity of the subgraph induced by S; 0 when |S| <= 1.
std::size_t kappa(KnowledgeGraph const& g, ProcessSet const& S);

/// True iff every a in A has at least k disjoint paths (in all of g) to
/// every b in B.
bool implies_k(KnowledgeGraph const& g, ProcessSet const& A, ProcessSet const& B,
               std::size_t k);

Condensation condense(KnowledgeGraph const& g);

KnowledgeGraph safe_subgraph(KnowledgeGraph const& g, ProcessSet const& faulty);

bool undirected_connected(KnowledgeGraph const& g);

ValidationReport is_k_osr(KnowledgeGraph const& g, std::size_t k);

std::pair<ValidationReport, std::optional<CoreCertificate>>
is_extended_k_osr(KnowledgeGraph const& g, std::size_t k,
                  std::size_t enumerationCap = kDefaultEnumerationCap);

/// All sets P with kappa(P) >= y+1 such that every vertex outside P is
/// reached by at most y disjoint paths from some member of P.
std::vector<CoreEntry> enumerate_cores(KnowledgeGraph const& g,
                                       std::size_t enumerationCap = kDefaultEnumerationCap);

ValidationReport check_bft_cup(KnowledgeGraph const& g, ProcessSet const& faulty,
                               std::size_t f);

ValidationReport check_bft_cupft(KnowledgeGraph const& g, ProcessSet const& faulty,
                                 std::size_t f,
                                 std::size_t enumerationCap = kDefaultEnumerationCap);

} // namespace bftcup
