#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsplit/qubo.hpp"

namespace qsplit {

/// Undirected simple graph with sorted adjacency lists. Self-loops are
/// rejected; duplicate edges are ignored.
class Graph {
  public:
    Graph() = default;
    explicit Graph(std::size_t num_nodes);

    void add_edge(std::size_t u, std::size_t v);
    bool has_edge(std::size_t u, std::size_t v) const;

    std::size_t num_nodes() const { return adjacency_.size(); }
    std::size_t num_edges() const { return num_edges_; }
    std::size_t degree(std::size_t u) const { return adjacency_[u].size(); }
    const std::vector<std::uint32_t>& neighbors(std::size_t u) const { return adjacency_[u]; }

    bool operator==(const Graph& other) const = default;

  private:
    std::vector<std::vector<std::uint32_t>> adjacency_;
    std::size_t num_edges_ = 0;
};

using ProblemGraph = Graph;

struct ChimeraSpec {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t shore = 0;
};

/// Target topology: the graph plus the grid descriptor it was generated from.
struct HardwareGraph {
    Graph graph;
    ChimeraSpec topology;
};

/// Map from problem node to its chain of hardware nodes (sorted).
struct Embedding {
    std::vector<std::vector<std::uint32_t>> chains;

    std::size_t total_nodes() const;
    std::size_t max_chain() const;
};

struct EmbeddingStats {
    std::size_t total_nodes = 0;
    std::size_t max_chain = 0;
    double elapsed_s = 0.0;
};

struct EmbeddingViolation {
    enum class Kind {
        empty_chain,   // a: problem node
        bad_node,      // a: problem node, b: hardware node
        overlap,       // a, b: problem nodes sharing a hardware node
        disconnected,  // a: problem node with a disconnected chain
        missing_edge,  // a, b: problem edge with no hardware edge between chains
    };
    Kind kind;
    std::size_t a = 0;
    std::size_t b = 0;

    std::string describe() const;
};

struct VerifyResult {
    bool valid = true;
    std::vector<EmbeddingViolation> violations;
};

/// Grid of complete-bipartite K_{shore,shore} cells; corresponding
/// left-shore nodes join vertically adjacent cells and right-shore nodes
/// horizontally adjacent ones. 2 * shore * rows * cols nodes.
HardwareGraph chimera_graph(std::size_t rows, std::size_t cols, std::size_t shore);

ProblemGraph clique_graph(std::size_t n);

/// Problem graph of a QUBO: one edge per off-diagonal entry.
ProblemGraph problem_graph_from_qubo(const QuboMatrix& q);

/// Chain-growth embedding heuristic. Problem nodes are placed in descending
/// degree order by routing usage-penalized shortest paths toward the chains
/// of already-placed neighbors; nodes may be shared temporarily, with the
/// sharing penalty doubling every rip-up-and-reroute pass until the chains
/// are disjoint or the pass/time budget runs out. Deterministic per seed;
/// returns nullopt on failure.
std::optional<Embedding> find_embedding(const ProblemGraph& problem, const HardwareGraph& hardware,
                                        std::uint64_t seed, double timeout_seconds = 10.0,
                                        std::size_t max_passes = 64);

/// Check the three embedding invariants (disjoint chains, connected chains,
/// every problem edge realized); violations are reported, not thrown.
VerifyResult verify_embedding(const ProblemGraph& problem, const HardwareGraph& hardware,
                              const Embedding& embedding);

EmbeddingStats embedding_stats(const Embedding& embedding, double elapsed_seconds);

/// Graph text format: `g <num_nodes>` then `<u> <v>` edge lines, 0-based,
/// u < v. Comments start with '#'.
std::string serialize_graph_file(const Graph& g);
Graph parse_graph_file(std::string_view text);

/// JSON object mapping problem node (as string key) to its sorted chain.
std::string embedding_to_json(const Embedding& embedding);

}  // namespace qsplit
