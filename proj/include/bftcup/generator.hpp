#pragma once

// Constructive synthesis of knowledge graphs with a prescribed feasibility
// class, plus the small hand-built graphs used throughout the tests.

#include "bftcup/kgraph.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bftcup {

enum class GraphModel
{
    Cup,     // passes check_bft_cup
    Cupft,   // passes check_bft_cupft
    CupOnly, // passes check_bft_cup, two disjoint self-sufficient cores
};

std::string to_string(GraphModel m);
GraphModel parse_graph_model(std::string const& s);

struct GeneratorParams
{
    std::size_t n = 7;
    std::size_t f = 1;
    GraphModel model = GraphModel::Cupft;
    // Probability of each optional extra edge among non-sink vertices.
    double extraEdgeDensity = 0.3;
    // Probability of attempting to drop each edge of the correct sink; an
    // edge is only dropped when the sink stays (f+1)-strongly connected.
    double sinkThinning = 0.0;
    std::size_t maxRetries = 50;
};

struct GeneratedGraph
{
    KnowledgeGraph graph;
    ProcessSet faulty;
    std::size_t f = 0;
    // Ground truth of the construction (correct members only).
    ProcessSet correctSink;
};

class GenerationFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

GeneratedGraph generate(GeneratorParams const& params, std::uint64_t seed);

namespace graphs {

KnowledgeGraph complete(ProcessSet const& ids);
KnowledgeGraph complete(std::size_t n); // ids 1..n
KnowledgeGraph chain(std::size_t n);    // 1 -> 2 -> ... -> n

/// Correct processes 1, 2, 3 know each other and process 4; 4 (Byzantine)
/// knows 1, 2, 3. Safe subgraph is the triangle {1,2,3}.
KnowledgeGraph byzantine_sink_member();

/// Clusters {1,2,3} and {5,6,7,8} that learn about each other only through
/// process 4.
KnowledgeGraph bridged_clusters();

/// Eight correct processes: triangle {1,2,3} leaves through the single edge
/// 1 -> 4, 4 -> 5, and 5 knows the sink triangle {6,7,8}. Both triangles
/// qualify as cores; the graph is 1-OSR but not 2-OSR.
KnowledgeGraph two_cores();

/// two_cores() plus the edge 6 -> 3, which folds every vertex into one sink.
KnowledgeGraph two_cores_linked();

} // namespace graphs

} // namespace bftcup
