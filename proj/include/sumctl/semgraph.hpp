#pragma once

#include "sumctl/corpus.hpp"
#include "sumctl/error.hpp"
#include "sumctl/textproc.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sumctl {

enum class NodeKind { entity, keyword, sentence };

inline constexpr std::string_view to_string(NodeKind k) noexcept
{
    switch (k) {
    case NodeKind::entity: return "entity";
    case NodeKind::keyword: return "keyword";
    case NodeKind::sentence: return "sentence";
    }
    return "";
}

struct Node {
    std::string surface;
    NodeKind kind = NodeKind::keyword;
    double salience = 0.0;
    std::size_t first_offset = 0; // byte offset of first occurrence, for tie-breaking

    bool is_content() const noexcept { return kind != NodeKind::sentence; }
};

struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    double weight = 0.0;
};

struct GraphOptions {
    std::size_t keyword_cap = 20;
    double damping = 0.85;
    double tolerance = 1e-8;
    int max_iterations = 200;
};

/// Entity/keyword/sentence graph of one document. Content nodes carry
/// normalized salience; sentence nodes carry the sum over their content.
class SemanticGraph {
public:
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    TextType source_type = TextType::unknown;

    /// Sentence node index -> content node indices it contains. Filled by build_semantic_graph.
    std::map<std::size_t, std::vector<std::size_t>> membership;

    std::size_t add_node(Node n)
    {
        nodes.push_back(std::move(n));
        return nodes.size() - 1;
    }

    void add_edge(std::size_t a, std::size_t b, double w)
    {
        if (a == b) throw ValidationError("self-loop in semantic graph");
        if (a >= nodes.size() || b >= nodes.size()) throw ValidationError("edge endpoint out of range");
        if (!(w > 0.0)) throw ValidationError("edge weight must be positive");
        if (a > b) std::swap(a, b);
        for (const auto& e : edges) {
            if (e.a == a && e.b == b) throw ValidationError("duplicate edge in semantic graph");
        }
        edges.push_back({a, b, w});
    }

    std::vector<std::size_t> content_indices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].is_content()) out.push_back(i);
        }
        return out;
    }

    std::vector<std::size_t> sentence_indices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].kind == NodeKind::sentence) out.push_back(i);
        }
        return out;
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["source_type"] = std::string(to_string(source_type));
        auto& ns = j["nodes"] = nlohmann::ordered_json::array();
        for (const auto& n : nodes) {
            ns.push_back({{"surface", n.surface}, {"kind", std::string(to_string(n.kind))}, {"salience", n.salience}});
        }
        auto& es = j["edges"] = nlohmann::ordered_json::array();
        for (const auto& e : edges) es.push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});
        return j;
    }
};

/// Damped power iteration over the row-normalized content-node adjacency:
/// s <- (1-d)/n + d W^T s until the L1 change drops below `tol`. Isolated
/// nodes keep only the teleport mass. Results are normalized to sum 1 over
/// content nodes; sentence nodes receive the sum over their members.
inline SemanticGraph rank_salience(SemanticGraph graph, double damping = 0.85, double tol = 1e-8, int max_iter = 200)
{
    const auto content = graph.content_indices();
    const std::size_t n = content.size();
    std::vector<std::size_t> local(graph.nodes.size(), SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) local[content[i]] = i;

    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    std::vector<double> out_weight(n, 0.0);
    for (const auto& e : graph.edges) {
        const auto a = local[e.a];
        const auto b = local[e.b];
        if (a == SIZE_MAX || b == SIZE_MAX) continue;
        adj[a].emplace_back(b, e.weight);
        adj[b].emplace_back(a, e.weight);
        out_weight[a] += e.weight;
        out_weight[b] += e.weight;
    }

    std::vector<double> s(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    if (n > 0) {
        const double teleport = (1.0 - damping) / static_cast<double>(n);
        std::vector<double> next(n);
        double residual = 0.0;
        bool converged = false;
        for (int it = 0; it < max_iter; ++it) {
            std::fill(next.begin(), next.end(), teleport);
            for (std::size_t u = 0; u < n; ++u) {
                if (out_weight[u] == 0.0) continue;
                const double share = damping * s[u] / out_weight[u];
                for (auto [v, w] : adj[u]) next[v] += share * w;
            }
            residual = 0.0;
            for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - s[i]);
            s.swap(next);
            if (residual < tol) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ConvergenceError(max_iter, residual);
        double total = 0.0;
        for (double x : s) total += x;
        for (double& x : s) x /= total;
    }

    for (std::size_t i = 0; i < n; ++i) graph.nodes[content[i]].salience = s[i];
    for (auto& node : graph.nodes) {
        if (node.kind == NodeKind::sentence) node.salience = 0.0;
    }
    for (const auto& [sent, members] : graph.membership) {
        double sum = 0.0;
        for (auto m : members) sum += graph.nodes[m].salience;
        graph.nodes[sent].salience = sum;
    }
    return graph;
}

inline SemanticGraph rank_salience(SemanticGraph graph, const GraphOptions& opts)
{
    return rank_salience(std::move(graph), opts.damping, opts.tolerance, opts.max_iterations);
}

/// f_sem: entities, the top TF-IDF keywords that are not already covered by an
/// entity, and one node per sentence. Content nodes that share a sentence are
/// linked with weight = number of shared sentences; sentences link to their
/// content (weight 1) and to their neighbours (weight 0.5).
inline SemanticGraph build_semantic_graph(const Document& doc, const TermWeights& tfidf,
                                          const GraphOptions& opts = {},
                                          const StopwordList& stopwords = StopwordList::defaults())
{
    const auto sentences = split_sentences(doc.text);
    if (sentences.empty()) throw ValidationError("cannot build a semantic graph from empty text ('" + doc.id + "')");

    SemanticGraph g;
    g.source_type = doc.text_type;

    const auto mentions = extract_entities(sentences, stopwords);
    std::map<std::string, std::size_t> entity_node;
    std::vector<std::set<std::size_t>> contains(sentences.size());
    std::set<std::string> entity_tokens;
    for (const auto& m : mentions) {
        auto [it, inserted] = entity_node.try_emplace(m.surface, g.nodes.size());
        if (inserted) {
            const auto& s = sentences[m.sentence_index];
            g.add_node({m.surface, NodeKind::entity, 0.0, s.span.begin + s.text.find(m.surface)});
            for (const auto& t : normalized_tokens(m.surface)) entity_tokens.insert(t);
        }
        contains[m.sentence_index].insert(it->second);
    }

    // keyword candidates: first occurrence of every weighted term
    std::map<std::string, std::size_t> first_seen;
    for (const auto& s : sentences) {
        for (const auto& t : s.tokens) {
            if (!t.is_punct()) first_seen.try_emplace(t.normalized, t.span.begin);
        }
    }
    std::vector<std::pair<std::string, double>> candidates;
    for (const auto& [term, pos] : first_seen) {
        const double w = tfidf.weight(term);
        if (w > 0.0 && !entity_tokens.contains(term)) candidates.emplace_back(term, w);
    }
    std::sort(candidates.begin(), candidates.end(), [&](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        if (first_seen[x.first] != first_seen[y.first]) return first_seen[x.first] < first_seen[y.first];
        return x.first < y.first;
    });
    if (candidates.size() > opts.keyword_cap) candidates.resize(opts.keyword_cap);
    // keep keyword nodes in document order so node order does not depend on float ties
    std::sort(candidates.begin(), candidates.end(),
              [&](const auto& x, const auto& y) { return first_seen[x.first] < first_seen[y.first]; });
    std::map<std::string, std::size_t> keyword_node;
    for (const auto& [term, w] : candidates) {
        keyword_node.emplace(term, g.add_node({term, NodeKind::keyword, 0.0, first_seen[term]}));
    }
    for (const auto& s : sentences) {
        for (const auto& t : s.tokens) {
            auto it = keyword_node.find(t.normalized);
            if (it != keyword_node.end()) contains[s.index].insert(it->second);
        }
    }

    // content-content co-occurrence
    std::map<std::pair<std::size_t, std::size_t>, double> co;
    for (const auto& members : contains) {
        for (auto a = members.begin(); a != members.end(); ++a) {
            for (auto b = std::next(a); b != members.end(); ++b) co[{*a, *b}] += 1.0;
        }
    }
    for (const auto& [ab, w] : co) g.add_edge(ab.first, ab.second, w);

    std::vector<std::size_t> sentence_node;
    for (const auto& s : sentences) {
        sentence_node.push_back(g.add_node({"S" + std::to_string(s.index), NodeKind::sentence, 0.0, s.span.begin}));
    }
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        for (auto c : contains[i]) g.add_edge(sentence_node[i], c, 1.0);
        g.membership[sentence_node[i]] = {contains[i].begin(), contains[i].end()};
        if (i + 1 < sentences.size()) g.add_edge(sentence_node[i], sentence_node[i + 1], 0.5);
    }
    return rank_salience(std::move(g), opts);
}

struct RankedSurface {
    std::string surface;
    double salience = 0.0;
};

/// The k most salient content nodes; ties go to the earlier first occurrence,
/// then to the lexicographically smaller surface.
inline std::vector<RankedSurface> top_content(const SemanticGraph& graph, std::size_t k)
{
    auto content = graph.content_indices();
    // salience is compared on a 1e-12 grid so float noise cannot reorder ties
    auto key = [&](std::size_t i) { return std::llround(graph.nodes[i].salience * 1e12); };
    std::sort(content.begin(), content.end(), [&](std::size_t x, std::size_t y) {
        const auto kx = key(x);
        const auto ky = key(y);
        if (kx != ky) return kx > ky;
        if (graph.nodes[x].first_offset != graph.nodes[y].first_offset)
            return graph.nodes[x].first_offset < graph.nodes[y].first_offset;
        return graph.nodes[x].surface < graph.nodes[y].surface;
    });
    if (content.size() > k) content.resize(k);
    std::vector<RankedSurface> out;
    for (auto i : content) out.push_back({graph.nodes[i].surface, graph.nodes[i].salience});
    return out;
}

} // namespace sumctl
