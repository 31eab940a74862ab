// Eigen precedes httplib, whose resolv.h defines _res.
#include <Eigen/Dense>

#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace sumctl;

namespace {

SemanticGraph content_graph(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges)
{
    SemanticGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_node({std::string(1, static_cast<char>('a' + i)), NodeKind::keyword, 0.0, i});
    for (auto [a, b, w] : edges) g.add_edge(a, b, w);
    return g;
}

/// Fixed point of the damped update via a dense eigenvector solve, scaled to sum 1.
Eigen::VectorXd dense_salience(const SemanticGraph& g, double d)
{
    const auto n = static_cast<Eigen::Index>(g.nodes.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges) {
        a(static_cast<Eigen::Index>(e.a), static_cast<Eigen::Index>(e.b)) += e.weight;
        a(static_cast<Eigen::Index>(e.b), static_cast<Eigen::Index>(e.a)) += e.weight;
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double rs = a.row(i).sum();
        if (rs > 0) w.row(i) = a.row(i) / rs;
    }
    // s -> (1-d)/n + d W^T s lifted to homogeneous coordinates; its fixed point is the eigenvalue-1 eigenvector
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = d * w.transpose();
    m.topRightCorner(n, 1).setConstant((1.0 - d) / static_cast<double>(n));
    m(n, n) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i <= n; ++i)
        if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
    const Eigen::VectorXd v = es.eigenvectors().col(best).real().head(n);
    return v / v.sum();
}

} // namespace

TEST_CASE("single content node has salience 1")
{
    const auto g = rank_salience(content_graph(1, {}));
    CHECK(g.nodes[0].salience == 1.0);
}

TEST_CASE("symmetric pair splits salience evenly")
{
    const auto g = rank_salience(content_graph(2, {{0, 1, 1.0}}));
    CHECK(g.nodes[0].salience == 0.5);
    CHECK(g.nodes[1].salience == 0.5);

    const auto top = top_content(g, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0].surface == "a");
    CHECK(top_content(g, 0).empty());
}

TEST_CASE("chain a-b-c-d ranks interior nodes above endpoints")
{
    const auto g = rank_salience(content_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}));
    const auto oracle = dense_salience(g, 0.85);
    for (std::size_t i = 0; i < 4; ++i) CHECK(g.nodes[i].salience == Catch::Approx(oracle[static_cast<Eigen::Index>(i)]).margin(1e-9));
    CHECK(g.nodes[1].salience > g.nodes[0].salience);
    CHECK(g.nodes[2].salience > g.nodes[3].salience);

    const auto top = top_content(g, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].surface == "b");
    CHECK(top[1].surface == "c");
    CHECK(top[2].surface == "a");
}

TEST_CASE("power iteration agrees with a dense linear solve on random graphs")
{
    detail::Stream rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(9);
        std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (rng.uniform() < 0.4) edges.emplace_back(a, b, 0.5 + 3.0 * rng.uniform());
        const auto g = rank_salience(content_graph(n, edges), 0.85, 1e-12, 1000);

        // (I - d W^T) s = (1-d)/n, then scale to sum 1
        const auto N = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(N, N);
        Eigen::VectorXd deg = Eigen::VectorXd::Zero(N);
        for (auto [a, b, wt] : edges) {
            w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = wt;
            w(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = wt;
        }
        for (Eigen::Index i = 0; i < N; ++i) {
            deg[i] = w.row(i).sum();
            if (deg[i] > 0) w.row(i) /= deg[i];
        }
        const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(N, N) - 0.85 * w.transpose();
        Eigen::VectorXd s = lhs.partialPivLu().solve(Eigen::VectorXd::Constant(N, 0.15 / static_cast<double>(n)));
        s /= s.sum();
        for (Eigen::Index i = 0; i < N; ++i) CHECK(g.nodes[static_cast<std::size_t>(i)].salience == Catch::Approx(s[i]).margin(1e-9));
    }
}

TEST_CASE("rank_salience reports non-convergence")
{
    CHECK_THROWS_AS(rank_salience(content_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 5.0}}), 0.85, 1e-15, 2), ConvergenceError);
}

TEST_CASE("graph construction matches a hand-built one-sentence graph")
{
    // "Paris" opens no sentence here, so the capitalization rule keeps it
    const auto doc = Document::make("p", "The summit is in Paris.", std::nullopt, TextType::news);
    const TermWeights tfidf({{"summit", 0.5}});
    const auto g = build_semantic_graph(doc, tfidf);
    REQUIRE(g.nodes.size() == 3);
    CHECK(g.nodes[0].surface == "Paris");
    CHECK(g.nodes[0].kind == NodeKind::entity);
    CHECK(g.nodes[1].surface == "summit");
    CHECK(g.nodes[1].kind == NodeKind::keyword);
    CHECK(g.nodes[2].kind == NodeKind::sentence);

    std::set<std::tuple<std::string, std::string, double>> edges;
    for (const auto& e : g.edges) {
        auto x = g.nodes[e.a].surface, y = g.nodes[e.b].surface;
        if (x > y) std::swap(x, y);
        edges.emplace(x, y, e.weight);
    }
    CHECK(edges == std::set<std::tuple<std::string, std::string, double>>{
                       {"Paris", "summit", 1.0}, {"Paris", "S0", 1.0}, {"S0", "summit", 1.0}});
    CHECK(g.nodes[0].salience == 0.5);
    CHECK(g.nodes[2].salience == 1.0);
    CHECK(g.source_type == TextType::news);
}

TEST_CASE("all-stopword document yields sentence nodes only")
{
    const auto doc = Document::make("s", "It is what it is. And so it was.", std::nullopt, TextType::blog);
    const auto g = testing::graph_of(doc);
    CHECK(g.content_indices().empty());
    CHECK(g.sentence_indices().size() == 2);
    CHECK(top_content(g, 5).empty());
}

TEST_CASE("an entity shared by two sentences is the most salient")
{
    const auto doc = Document::make("e", "Rivers flooded near Ashby overnight. Farmers said Ashby roads closed early.",
                                    std::nullopt, TextType::news);
    const auto g = testing::graph_of(doc);
    const auto top = top_content(g, 1);
    REQUIRE_FALSE(top.empty());
    CHECK(top[0].surface == "Ashby");
    for (auto i : g.content_indices()) {
        if (g.nodes[i].surface != "Ashby") CHECK(g.nodes[i].salience < top[0].salience);
    }
}

TEST_CASE("graph invariants on the mini-corpus")
{
    const auto tfidf = tfidf_weights(testing::minicorpus());
    for (const auto& doc : testing::minicorpus().documents()) {
        const auto g = build_semantic_graph(doc, tfidf.at(doc.id));
        double sum = 0.0;
        std::size_t keywords = 0;
        for (auto i : g.content_indices()) {
            CHECK(g.nodes[i].salience >= 0.0);
            sum += g.nodes[i].salience;
            keywords += g.nodes[i].kind == NodeKind::keyword;
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-9));
        CHECK(keywords <= 20);
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& e : g.edges) {
            CHECK(e.a != e.b);
            CHECK(e.weight > 0.0);
            CHECK(seen.emplace(e.a, e.b).second);
        }
        CHECK(g.sentence_indices().size() == split_sentences(doc.text).size());
        // sentence salience is the sum of its members
        for (const auto& [sent, members] : g.membership) {
            double s = 0.0;
            for (auto m : members) s += g.nodes[m].salience;
            CHECK(g.nodes[sent].salience == Catch::Approx(s).margin(1e-12));
        }
    }
}

TEST_CASE("graph building is deterministic and respects the keyword cap")
{
    const auto& doc = testing::minicorpus().documents()[5];
    CHECK(testing::graph_of(doc).to_json().dump() == testing::graph_of(doc).to_json().dump());

    GraphOptions small;
    small.keyword_cap = 3;
    const auto g = testing::graph_of(doc, small);
    std::size_t keywords = 0;
    for (const auto& n : g.nodes) keywords += n.kind == NodeKind::keyword;
    CHECK(keywords == 3);
}

TEST_CASE("add_edge rejects malformed edges")
{
    auto g = content_graph(3, {{0, 1, 1.0}});
    CHECK_THROWS_AS(g.add_edge(1, 1, 1.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge(1, 0, 2.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge(0, 2, 0.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge(0, 7, 1.0), ValidationError);
    CHECK_THROWS_AS(build_semantic_graph(Document::make("x", "   ", std::nullopt, TextType::news), TermWeights{}),
                    ValidationError);
}

TEST_CASE("dense eigenvector oracle on small graphs with isolated nodes")
{
    const auto g = rank_salience(content_graph(5, {{0, 1, 1.0}, {1, 2, 2.0}}));
    const auto oracle = dense_salience(g, 0.85);
    for (std::size_t i = 0; i < 5; ++i) CHECK(g.nodes[i].salience == Catch::Approx(oracle[static_cast<Eigen::Index>(i)]).margin(1e-7));
    CHECK(g.nodes[3].salience == g.nodes[4].salience);
}
