#include "qsplit/embed.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "json.hpp"
#include "qsplit/seeds.hpp"

namespace qsplit {

Graph::Graph(std::size_t num_nodes) : adjacency_(num_nodes) {}

void Graph::add_edge(std::size_t u, std::size_t v) {
    if (u == v) throw ParameterError("self-loops are not allowed");
    if (u >= num_nodes() || v >= num_nodes())
        throw DimensionError("edge endpoint out of range");
    auto& adj_u = adjacency_[u];
    auto it = std::lower_bound(adj_u.begin(), adj_u.end(), static_cast<std::uint32_t>(v));
    if (it != adj_u.end() && *it == v) return;  // duplicate edge
    adj_u.insert(it, static_cast<std::uint32_t>(v));
    auto& adj_v = adjacency_[v];
    adj_v.insert(std::lower_bound(adj_v.begin(), adj_v.end(), static_cast<std::uint32_t>(u)),
                 static_cast<std::uint32_t>(u));
    ++num_edges_;
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
    if (u >= num_nodes() || v >= num_nodes()) return false;
    const auto& adj = adjacency_[u];
    return std::binary_search(adj.begin(), adj.end(), static_cast<std::uint32_t>(v));
}

std::size_t Embedding::total_nodes() const {
    std::size_t total = 0;
    for (const auto& chain : chains) total += chain.size();
    return total;
}

std::size_t Embedding::max_chain() const {
    std::size_t best = 0;
    for (const auto& chain : chains) best = std::max(best, chain.size());
    return best;
}

std::string EmbeddingViolation::describe() const {
    switch (kind) {
        case Kind::empty_chain:
            return "problem node " + std::to_string(a) + " has an empty chain";
        case Kind::bad_node:
            return "problem node " + std::to_string(a) + " references invalid hardware node " +
                   std::to_string(b);
        case Kind::overlap:
            return "chains of problem nodes " + std::to_string(a) + " and " + std::to_string(b) +
                   " share hardware nodes";
        case Kind::disconnected:
            return "chain of problem node " + std::to_string(a) + " is not connected";
        case Kind::missing_edge:
            return "problem edge (" + std::to_string(a) + ", " + std::to_string(b) +
                   ") has no hardware edge between chains";
    }
    return "unknown violation";
}

HardwareGraph chimera_graph(std::size_t rows, std::size_t cols, std::size_t shore) {
    if (rows == 0 || cols == 0 || shore == 0)
        throw ParameterError("chimera dimensions must be positive");
    HardwareGraph hw;
    hw.topology = {rows, cols, shore};
    hw.graph = Graph(2 * shore * rows * cols);
    auto node = [&](std::size_t r, std::size_t c, std::size_t side, std::size_t k) {
        return ((r * cols + c) * 2 + side) * shore + k;
    };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t a = 0; a < shore; ++a) {
                for (std::size_t b = 0; b < shore; ++b)
                    hw.graph.add_edge(node(r, c, 0, a), node(r, c, 1, b));
                // left shore couples vertically, right shore horizontally
                if (r + 1 < rows) hw.graph.add_edge(node(r, c, 0, a), node(r + 1, c, 0, a));
                if (c + 1 < cols) hw.graph.add_edge(node(r, c, 1, a), node(r, c + 1, 1, a));
            }
        }
    }
    return hw;
}

ProblemGraph clique_graph(std::size_t n) {
    if (n == 0) throw ParameterError("clique needs at least one node");
    Graph g(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

ProblemGraph problem_graph_from_qubo(const QuboMatrix& q) {
    Graph g(q.size());
    for (const auto& [key, coeff] : q.entries())
        if (key.first != key.second) g.add_edge(key.first, key.second);
    return g;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Router {
    const Graph& hw;
    std::vector<std::uint32_t> usage;   // chains currently covering each node
    std::vector<double> jitter;        // per-pass random tie-break, in [0, 1e-6)
    double penalty_exponent = 1.0;     // doubles every pass

    double node_cost(std::size_t w) const {
        if (usage[w] == 0) return 1.0 + jitter[w];
        double exponent = std::min(penalty_exponent * usage[w], 60.0);
        return std::exp2(exponent) + jitter[w];
    }

    // Multi-source Dijkstra from a chain; dist includes the entered node's
    // cost, sources are free.
    void shortest_from(const std::vector<std::uint32_t>& sources, std::vector<double>& dist,
                       std::vector<std::int64_t>& parent) const {
        dist.assign(hw.num_nodes(), kInf);
        parent.assign(hw.num_nodes(), -1);
        using Item = std::pair<double, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        for (std::uint32_t s : sources) {
            dist[s] = 0.0;
            queue.push({0.0, s});
        }
        while (!queue.empty()) {
            auto [d, x] = queue.top();
            queue.pop();
            if (d > dist[x]) continue;
            for (std::uint32_t w : hw.neighbors(x)) {
                double cand = d + node_cost(w);
                if (cand < dist[w]) {
                    dist[w] = cand;
                    parent[w] = x;
                    queue.push({cand, w});
                }
            }
        }
    }
};

}  // namespace

std::optional<Embedding> find_embedding(const ProblemGraph& problem, const HardwareGraph& hardware,
                                        std::uint64_t seed, double timeout_seconds,
                                        std::size_t max_passes) {
    const std::size_t n = problem.num_nodes();
    const std::size_t h = hardware.graph.num_nodes();
    if (n == 0) return Embedding{};
    if (n > h) return std::nullopt;  // disjoint non-empty chains cannot fit

    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_seconds));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    SplitMix64 rng(seed);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (problem.degree(a) != problem.degree(b)) return problem.degree(a) > problem.degree(b);
        return a < b;
    });
    Router router{hardware.graph};
    router.usage.assign(h, 0);
    router.jitter.assign(h, 0.0);

    Embedding embedding;
    embedding.chains.assign(n, {});
    std::vector<double> dist;
    std::vector<std::int64_t> parent;
    std::vector<char> is_source(h);
    std::vector<char> in_target(h, 0);
    std::vector<std::vector<double>> neighbor_dist;
    std::vector<std::vector<std::int64_t>> neighbor_parent;

    // a round that stops shrinking its overlap count is stuck in a local
    // trap (typically one chain walled in by another); restart it from
    // scratch with fresh tie-breaks rather than burn the remaining budget
    constexpr std::size_t kStallLimit = 8;
    std::size_t round_start = 0;
    std::size_t best_shared = h + 1;
    std::size_t stall = 0;

    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        router.penalty_exponent =
            static_cast<double>(std::min<std::size_t>(pass - round_start + 1, 50));
        for (std::size_t i = 0; i < h; ++i) router.jitter[i] = rng.next_double() * 1e-6;

        for (std::size_t u : order) {
            if (std::chrono::steady_clock::now() > deadline) return std::nullopt;

            for (std::uint32_t w : embedding.chains[u]) --router.usage[w];
            embedding.chains[u].clear();

            std::vector<std::size_t> placed;
            for (std::uint32_t v : problem.neighbors(u))
                if (!embedding.chains[v].empty()) placed.push_back(v);

            if (placed.empty()) {
                // free placement: cheapest node wins
                std::size_t root = 0;
                double best = kInf;
                for (std::size_t w = 0; w < h; ++w) {
                    double cost = router.node_cost(w);
                    if (cost < best) {
                        best = cost;
                        root = w;
                    }
                }
                embedding.chains[u] = {static_cast<std::uint32_t>(root)};
                ++router.usage[root];
                continue;
            }

            neighbor_dist.assign(placed.size(), {});
            neighbor_parent.assign(placed.size(), {});
            std::fill(is_source.begin(), is_source.end(), 0);
            for (std::size_t p = 0; p < placed.size(); ++p) {
                router.shortest_from(embedding.chains[placed[p]], neighbor_dist[p],
                                     neighbor_parent[p]);
                for (std::uint32_t s : embedding.chains[placed[p]]) is_source[s] = 1;
            }

            // root minimizing the summed routing cost, counting its own cost once
            std::size_t root = h;
            double best_score = kInf;
            for (std::size_t w = 0; w < h; ++w) {
                if (is_source[w]) continue;
                double total = -static_cast<double>(placed.size() - 1) * router.node_cost(w);
                bool reachable = true;
                for (std::size_t p = 0; p < placed.size(); ++p) {
                    if (neighbor_dist[p][w] == kInf) {
                        reachable = false;
                        break;
                    }
                    total += neighbor_dist[p][w];
                }
                if (reachable && total < best_score) {
                    best_score = total;
                    root = w;
                }
            }
            if (root == h) return std::nullopt;  // hardware too fragmented

            // walk each routing tree back from the root; a branch is complete
            // only once it reaches that neighbor's own chain, not just any
            // placed chain
            std::set<std::uint32_t> chain{static_cast<std::uint32_t>(root)};
            for (std::size_t p = 0; p < placed.size(); ++p) {
                for (std::uint32_t s : embedding.chains[placed[p]]) in_target[s] = 1;
                std::int64_t walk = static_cast<std::int64_t>(root);
                while (walk >= 0 && !in_target[walk]) {
                    chain.insert(static_cast<std::uint32_t>(walk));
                    walk = neighbor_parent[p][walk];
                }
                for (std::uint32_t s : embedding.chains[placed[p]]) in_target[s] = 0;
            }
            embedding.chains[u].assign(chain.begin(), chain.end());
            for (std::uint32_t w : embedding.chains[u]) ++router.usage[w];
        }

        std::size_t shared = 0;
        for (std::uint32_t c : router.usage)
            if (c > 1) ++shared;
        if (shared == 0 && verify_embedding(problem, hardware, embedding).valid)
            return embedding;

        if (shared < best_shared) {
            best_shared = shared;
            stall = 0;
        } else if (++stall >= kStallLimit && pass + 1 < max_passes) {
            for (auto& chain : embedding.chains) chain.clear();
            std::fill(router.usage.begin(), router.usage.end(), 0);
            round_start = pass + 1;
            best_shared = h + 1;
            stall = 0;
        }
    }
    return std::nullopt;
}

VerifyResult verify_embedding(const ProblemGraph& problem, const HardwareGraph& hardware,
                              const Embedding& embedding) {
    VerifyResult result;
    auto report = [&](EmbeddingViolation::Kind kind, std::size_t a, std::size_t b = 0) {
        result.valid = false;
        result.violations.push_back({kind, a, b});
    };

    const std::size_t h = hardware.graph.num_nodes();
    if (embedding.chains.size() != problem.num_nodes()) {
        report(EmbeddingViolation::Kind::empty_chain, embedding.chains.size());
        return result;
    }

    std::vector<std::int64_t> owner(h, -1);
    for (std::size_t u = 0; u < embedding.chains.size(); ++u) {
        const auto& chain = embedding.chains[u];
        if (chain.empty()) {
            report(EmbeddingViolation::Kind::empty_chain, u);
            continue;
        }
        bool nodes_ok = true;
        for (std::uint32_t w : chain) {
            if (w >= h) {
                report(EmbeddingViolation::Kind::bad_node, u, w);
                nodes_ok = false;
                continue;
            }
            if (owner[w] >= 0 && static_cast<std::size_t>(owner[w]) != u)
                report(EmbeddingViolation::Kind::overlap, static_cast<std::size_t>(owner[w]), u);
            owner[w] = static_cast<std::int64_t>(u);
        }
        if (!nodes_ok) continue;

        // connectivity by BFS within the chain
        std::set<std::uint32_t> members(chain.begin(), chain.end());
        std::vector<std::uint32_t> frontier{chain.front()};
        std::set<std::uint32_t> seen{chain.front()};
        while (!frontier.empty()) {
            std::uint32_t x = frontier.back();
            frontier.pop_back();
            for (std::uint32_t w : hardware.graph.neighbors(x)) {
                if (members.count(w) && !seen.count(w)) {
                    seen.insert(w);
                    frontier.push_back(w);
                }
            }
        }
        if (seen.size() != members.size())
            report(EmbeddingViolation::Kind::disconnected, u);
    }

    for (std::size_t u = 0; u < problem.num_nodes(); ++u) {
        for (std::uint32_t v : problem.neighbors(u)) {
            if (v <= u) continue;
            if (embedding.chains[u].empty() || embedding.chains[v].empty()) continue;
            bool linked = false;
            for (std::uint32_t a : embedding.chains[u]) {
                if (a >= h) continue;
                for (std::uint32_t b : embedding.chains[v]) {
                    if (hardware.graph.has_edge(a, b)) {
                        linked = true;
                        break;
                    }
                }
                if (linked) break;
            }
            if (!linked) report(EmbeddingViolation::Kind::missing_edge, u, v);
        }
    }
    return result;
}

EmbeddingStats embedding_stats(const Embedding& embedding, double elapsed_seconds) {
    return {embedding.total_nodes(), embedding.max_chain(), elapsed_seconds};
}

std::string serialize_graph_file(const Graph& g) {
    std::string out = "g " + std::to_string(g.num_nodes()) + "\n";
    for (std::size_t u = 0; u < g.num_nodes(); ++u)
        for (std::uint32_t v : g.neighbors(u))
            if (v > u) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

Graph parse_graph_file(std::string_view text) {
    Graph g;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::vector<std::string_view> fields;
        std::size_t fpos = 0;
        while (fpos < line.size()) {
            while (fpos < line.size() && (line[fpos] == ' ' || line[fpos] == '\t')) ++fpos;
            std::size_t start = fpos;
            while (fpos < line.size() && line[fpos] != ' ' && line[fpos] != '\t') ++fpos;
            if (fpos > start) fields.push_back(line.substr(start, fpos - start));
        }
        if (fields.empty() || fields[0].front() == '#') continue;

        auto parse_index = [&](std::string_view field) {
            std::size_t value = 0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size())
                throw ParseError("malformed index '" + std::string(field) + "'", line_no);
            return value;
        };

        if (!have_header) {
            if (fields[0] != "g" || fields.size() != 2)
                throw ParseError("expected header 'g <num_nodes>'", line_no);
            g = Graph(parse_index(fields[1]));
            have_header = true;
        } else {
            if (fields.size() != 2) throw ParseError("expected edge '<u> <v>'", line_no);
            std::size_t u = parse_index(fields[0]);
            std::size_t v = parse_index(fields[1]);
            if (u >= v) throw ParseError("edge must satisfy u < v", line_no);
            if (v >= g.num_nodes()) throw ParseError("edge endpoint out of range", line_no);
            g.add_edge(u, v);
        }
    }
    if (!have_header) throw ParseError("missing header 'g <num_nodes>'", line_no);
    return g;
}

std::string embedding_to_json(const Embedding& embedding) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t u = 0; u < embedding.chains.size(); ++u) {
        std::vector<std::uint32_t> chain = embedding.chains[u];
        std::sort(chain.begin(), chain.end());
        j[std::to_string(u)] = chain;
    }
    return j.dump(2) + "\n";
}

}  // namespace qsplit
