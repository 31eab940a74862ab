#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace sumctl;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace {

const SemanticGraph& news_graph()
{
    static const SemanticGraph g = [] {
        const auto& store = testing::minicorpus();
        return build_semantic_graph(*store.find("syn-news-01"), tfidf_weights(store).at("syn-news-01"));
    }();
    return g;
}

PromptConfig config(TemplateId t, int budget, int level, TextType style = TextType::news)
{
    PromptConfig c;
    c.template_id = t;
    c.length_budget = budget;
    c.abstraction_level = level;
    c.style_tag = style;
    return c;
}

} // namespace

TEST_CASE("render_prompt honours the instruction and abstraction level")
{
    const auto p = render_prompt(config(TemplateId::concise, 60, 5), news_graph());
    CHECK_THAT(p.text, StartsWith("Summarize briefly:"));
    CHECK_THAT(p.text, ContainsSubstring("1 abstract sentence."));
    CHECK_THAT(p.text, ContainsSubstring("Style: news."));
    CHECK(p.target_sentences == 1);
    CHECK(p.token_count <= 60);
    CHECK(p.token_count == tokenize(p.text).size());
    CHECK_FALSE(p.keywords.empty());

    CHECK(render_prompt(config(TemplateId::detailed, 30, 1), news_graph()).target_sentences == 5);
    CHECK_THAT(render_prompt(config(TemplateId::structured, 30, 2), news_graph()).text, StartsWith("List key points:"));
}

TEST_CASE("render_prompt at budget 10 has no room for keywords")
{
    const auto p = render_prompt(config(TemplateId::concise, 10, 3), news_graph());
    CHECK(p.keywords.empty());
    CHECK(p.config.keyword_count == 0);
    CHECK(p.token_count <= 10);
    CHECK(p.text == "Summarize briefly: 3 balanced sentences.");
}

TEST_CASE("render_prompt keywords follow salience and fill greedily")
{
    const auto top = top_content(news_graph(), 100);
    std::size_t prev = 0;
    for (int budget : kLengthGrid) {
        const auto p = render_prompt(config(TemplateId::concise, budget, 3), news_graph());
        CHECK(p.token_count <= static_cast<std::size_t>(budget));
        CHECK(p.config.keyword_count == static_cast<int>(p.keywords.size()));
        REQUIRE(p.keywords.size() <= top.size());
        for (std::size_t i = 0; i < p.keywords.size(); ++i) CHECK(p.keywords[i] == top[i].surface);
        CHECK(p.keywords.size() >= prev);
        prev = p.keywords.size();
        if (p.keywords.size() < top.size()) {
            // the next keyword would not have fit
            auto with_next = p.keywords;
            with_next.push_back(top[p.keywords.size()].surface);
            std::string focus = "Focus: ";
            for (std::size_t i = 0; i < with_next.size(); ++i) focus += (i ? ", " : "") + with_next[i];
            const auto head = p.text.substr(0, p.text.find(" Focus:"));
            CHECK(tokenize(head + " " + focus + ".").size() > static_cast<std::size_t>(budget));
        }
    }
}

TEST_CASE("render_prompt is deterministic and validates its budget")
{
    const auto c = config(TemplateId::structured, 40, 2, TextType::blog);
    CHECK(render_prompt(c, news_graph()).text == render_prompt(c, news_graph()).text);
    CHECK_THROWS_WITH(render_prompt(config(TemplateId::concise, 7, 3), news_graph()),
                      ContainsSubstring("budget below minimum"));
    CHECK_THROWS_AS(render_prompt(config(TemplateId::concise, 30, 6), news_graph()), ValidationError);
    CHECK_THROWS_AS(render_prompt(config(TemplateId::concise, 30, 0), news_graph()), ValidationError);
}

TEST_CASE("style clause names the text type")
{
    CHECK(style_clause(TextType::academic) == "Style: academic.");
    CHECK(style_clause(TextType::unknown) == "Style: general.");
}

TEST_CASE("templates load from a directory")
{
    const auto bundled = TemplateSet::from_directory(std::filesystem::path(SUMCTL_RESOURCE_DIR) / "templates");
    const TemplateSet builtin;
    for (auto t : kAllTemplates) CHECK(bundled.text(t) == builtin.text(t));

    testing::TempDir dir;
    testing::write_file(dir / "concise.txt", "Be short. {abstraction} {keywords}\n");
    const auto custom = TemplateSet::from_directory(dir.path());
    CHECK(custom.text(TemplateId::concise) == "Be short. {abstraction} {keywords}");
    CHECK(custom.text(TemplateId::detailed) == builtin.text(TemplateId::detailed));
    const auto p = render_prompt(config(TemplateId::concise, 20, 4), news_graph(), custom);
    CHECK_THAT(p.text, StartsWith("Be short. 2 condensed sentences."));
    CHECK_THAT(p.text, !ContainsSubstring("Style:"));
}

TEST_CASE("score_prompt perfect prompt scores zero")
{
    const auto doc = Document::make("s", "The summit is in Paris. Leaders met at the summit.", std::nullopt, TextType::news);
    const auto g = testing::graph_of(doc);
    const auto p = render_prompt(config(TemplateId::concise, 60, 3), g);
    REQUIRE(p.keywords.size() == g.content_indices().size());
    const auto s = score_prompt(p, g, 3, {}, 60);
    CHECK(s.l_semantic == 0.0);
    CHECK(s.l_abstract == 0.0);
    CHECK(s.l_contextual == 0.0);
    CHECK(s.total == 0.0);
}

TEST_CASE("score_prompt worst-case components")
{
    const auto p = render_prompt(config(TemplateId::concise, 10, 1, TextType::blog), news_graph());
    REQUIRE(p.keywords.empty());
    const ObjectiveWeights w{0.5, 0.3, 0.2};
    const auto s = score_prompt(p, news_graph(), 5, w, 10);
    CHECK(s.l_semantic == 1.0);
    CHECK(s.l_abstract == 1.0);
    CHECK(s.l_contextual == 0.5);
    CHECK(s.total == Catch::Approx(w.lambda1 + w.lambda2 + 0.5 * w.lambda3).margin(1e-15));
}

TEST_CASE("score_prompt components stay in range and total is the weighted sum")
{
    for (int budget : kLengthGrid) {
        for (int level = 1; level <= 5; ++level) {
            const auto p = render_prompt(config(TemplateId::detailed, budget, level), news_graph());
            const auto s = score_prompt(p, news_graph(), 3, {}, budget);
            for (double x : {s.l_semantic, s.l_abstract, s.l_contextual}) {
                CHECK(x >= 0.0);
                CHECK(x <= 1.0);
            }
            CHECK(s.total == s.recompute());
        }
    }
    // more room never loses semantic coverage
    const auto lo = score_prompt(render_prompt(config(TemplateId::concise, 20, 3), news_graph()), news_graph(), 3, {}, 20);
    const auto hi = score_prompt(render_prompt(config(TemplateId::concise, 50, 3), news_graph()), news_graph(), 3, {}, 50);
    CHECK(hi.l_semantic <= lo.l_semantic);
}

TEST_CASE("score_prompt budget overrun counts against context")
{
    const auto p = render_prompt(config(TemplateId::concise, 30, 3), news_graph());
    const auto budget = static_cast<int>(p.token_count) / 2;
    const auto s = score_prompt(p, news_graph(), 3, {}, budget);
    const double over = (static_cast<double>(p.token_count) - budget) / budget;
    CHECK(s.l_contextual == Catch::Approx(0.5 * std::min(1.0, over)));
}

TEST_CASE("objective arithmetic")
{
    const auto s = PromptScore::combine(0.4, 0.25, 0.5, {0.5, 0.3, 0.2});
    CHECK(s.total == Catch::Approx(0.375).margin(1e-15));
    CHECK_THROWS_AS(ObjectiveWeights({0.5, 0.5, 0.5}).validate(), ValidationError);
    CHECK_THROWS_AS(ObjectiveWeights({1.2, -0.2, 0.0}).validate(), ValidationError);
    const auto n = ObjectiveWeights::normalized(2, 1, 1);
    CHECK(n.lambda1 == 0.5);
    CHECK(n.lambda2 == 0.25);
    CHECK_THROWS_AS(ObjectiveWeights::normalized(0, 0, 0), ValidationError);
    CHECK_THROWS_AS(score_prompt(Prompt{}, news_graph(), 6, {}, 30), ValidationError);
}

TEST_CASE("enumerate_configs counts, orders and deduplicates")
{
    PromptGrid one;
    one.templates = {TemplateId::concise};
    one.budgets = {30};
    one.levels = {3};
    CHECK(enumerate_configs(one).size() == 1);

    const auto all = enumerate_configs(PromptGrid{});
    CHECK(all.size() == 90);
    CHECK(std::is_sorted(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); }));
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());

    PromptGrid dup;
    dup.templates = {TemplateId::structured, TemplateId::concise, TemplateId::concise};
    dup.budgets = {40, 20, 40};
    dup.levels = {1, 1};
    const auto d = enumerate_configs(dup);
    CHECK(d.size() == 4);
    CHECK(d.front().template_id == TemplateId::concise);
    CHECK(d.front().length_budget == 20);

    PromptGrid empty;
    empty.levels.clear();
    CHECK_THROWS_AS(enumerate_configs(empty), ValidationError);
}
