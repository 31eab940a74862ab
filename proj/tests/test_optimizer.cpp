#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace sumctl;

namespace {

std::vector<PromptConfig> arms(std::size_t n)
{
    std::vector<PromptConfig> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i].length_budget = 10 * static_cast<int>(i + 1);
    return out;
}

PolicyState with_values(std::vector<double> values, double eps)
{
    auto s = PolicyState::fresh(arms(values.size()), 10, 1, eps, eps);
    s.values = std::move(values);
    return s;
}

GeneratedSummary summary(std::string text)
{
    GeneratedSummary g;
    g.text = std::move(text);
    return g;
}

} // namespace

TEST_CASE("reward of a perfect summary")
{
    CHECK(reward(summary("the cat sat on the mat"), "the cat sat on the mat", {}) == Catch::Approx(0.8).margin(1e-15));
}

TEST_CASE("reward of a disjoint summary clips TER at 1")
{
    const auto gen = summary("alpha beta gamma delta");
    const auto m = metrics::evaluate_pair(gen.text, "one two three four");
    CHECK(m.rouge_l.f1 == 0.0);
    CHECK(m.bleu == 0.0);
    CHECK(m.ter >= 1.0);
    CHECK(reward(gen, "one two three four", {}) == Catch::Approx(-0.2).margin(1e-15));
}

TEST_CASE("reward from published metric values")
{
    metrics::MetricReport m;
    m.rouge_l = metrics::PRF{0.46, 0.46, 0.46};
    m.bleu = 0.45;
    m.ter = 0.38;
    CHECK(reward_from(m, {}) == Catch::Approx(0.289).margin(1e-12));
    CHECK_THROWS_AS(reward(summary("x"), "", {}), ValidationError);
    CHECK_THROWS_AS(reward(summary("x"), "x", {0.5, 0.5, 0.5}), ValidationError);
}

TEST_CASE("select_arm")
{
    const auto single = PolicyState::fresh(arms(1), 50, 3);
    for (std::size_t step = 0; step < 50; ++step) CHECK(select_arm(single, step) == 0);

    const auto greedy = with_values({0.1, 0.9, 0.3}, 0.0);
    for (std::size_t step = 0; step < 10; ++step) CHECK(select_arm(greedy, step) == 1);

    // ties go to the lowest index
    CHECK(select_arm(with_values({0.5, 0.5}, 0.0), 0) == 0);
    CHECK_THROWS_AS(select_arm(single, 50), ValidationError);
    CHECK_THROWS_AS(select_arm(PolicyState::fresh({}, 5, 0), 0), ValidationError);
}

TEST_CASE("select_arm with epsilon 1 is uniform")
{
    auto s = PolicyState::fresh(arms(4), 100000, 2024, 1.0, 1.0);
    std::array<std::size_t, 4> freq{};
    for (std::size_t step = 0; step < 100000; ++step) ++freq[select_arm(s, step)];
    for (auto f : freq) CHECK(static_cast<double>(f) / 100000.0 == Catch::Approx(0.25).margin(0.01));
}

TEST_CASE("select_arm is a pure function of state and step")
{
    const auto s = PolicyState::fresh(arms(5), 200, 77, 0.5, 0.5);
    for (std::size_t step = 0; step < 200; ++step) CHECK(select_arm(s, step) == select_arm(s, step));
}

TEST_CASE("epsilon decays linearly")
{
    const auto s = PolicyState::fresh(arms(2), 1000, 0, 0.3, 0.05);
    CHECK(s.epsilon(0) == 0.3);
    CHECK(s.epsilon(999) == Catch::Approx(0.05).margin(1e-15));
    CHECK(s.epsilon(500) < s.epsilon(100));
    CHECK(s.epsilon(999 / 3) == Catch::Approx(0.3 - 0.25 * (333.0 / 999.0)));
}

TEST_CASE("update keeps an incremental mean")
{
    auto s = PolicyState::fresh(arms(2), 10, 0);
    s = update(s, 0, 0.6);
    CHECK(s.values[0] == 0.6);
    CHECK(s.counts[0] == 1);

    auto t = PolicyState::fresh(arms(1), 10, 0);
    t = update(update(t, 0, 0.2), 0, 0.4);
    CHECK(t.values[0] == Catch::Approx(0.3).margin(1e-15));

    CHECK_THROWS_AS(update(s, 5, 0.1), ValidationError);
    CHECK_THROWS_AS(update(s, 0, std::nan("")), ValidationError);
}

TEST_CASE("update converges to the mean of seeded rewards")
{
    detail::Stream rng(31337);
    auto s = PolicyState::fresh(arms(1), 10, 0);
    // uniform on [0.2, 0.8): mean 0.5, sd 0.6/sqrt(12)
    for (int i = 0; i < 1000; ++i) s = update(std::move(s), 0, 0.2 + 0.6 * rng.uniform());
    const double se = 0.6 / std::sqrt(12.0) / std::sqrt(1000.0);
    CHECK(std::abs(s.values[0] - 0.5) <= 3 * se);
    CHECK(s.total_pulls() == 1000);
}

TEST_CASE("multi_task_loss")
{
    auto pulled = [](std::string id, double mean) {
        auto s = PolicyState::fresh(arms(1), 10, 0);
        s = update(s, 0, mean);
        return TaskPolicy{std::move(id), s};
    };
    CHECK(multi_task_loss({pulled("a", 0.8)}, {{"a", TextType::news, 1.0, 3}}) == Catch::Approx(0.2).margin(1e-15));

    const std::vector<TaskSpec> two{{"a", TextType::news, 0.5, 3}, {"b", TextType::blog, 0.5, 3}};
    CHECK(multi_task_loss({pulled("a", 0.8), pulled("b", 0.6)}, two) == 0.3);

    const std::vector<TaskPolicy> fresh{{"a", PolicyState::fresh(arms(2), 5, 0)}, {"b", PolicyState::fresh(arms(2), 5, 0)}};
    CHECK(multi_task_loss(fresh, two) == 1.0);

    // mean rewards outside [0, 1] are clipped
    CHECK(multi_task_loss({pulled("a", -0.2), pulled("b", 1.0)}, two) == 0.5);
    CHECK_THROWS_AS(multi_task_loss({pulled("a", 0.5)}, two), ValidationError);
}

TEST_CASE("task validation")
{
    CHECK_THROWS_AS(validate_tasks({}), ValidationError);
    CHECK_THROWS_AS(validate_tasks({{"a", TextType::news, 0.6, 3}}), ValidationError);
    CHECK_THROWS_AS(validate_tasks({{"a", TextType::news, 0.5, 3}, {"a", TextType::blog, 0.5, 3}}), ValidationError);
    CHECK_THROWS_AS(validate_tasks({{"a", TextType::news, 1.0, 7}}), ValidationError);
    CHECK_NOTHROW(validate_tasks({{"a", TextType::news, 0.25, 1}, {"b", TextType::blog, 0.75, 5}}));
}

TEST_CASE("run_episodes single episode")
{
    CorpusStore store;
    store.add(Document::make("d", "Harlow Energy will build a station. It opens soon.", std::string("Harlow Energy will build a station."),
                             TextType::news));
    OptimizerOptions opts;
    opts.grid.templates = {TemplateId::concise};
    opts.grid.budgets = {30};
    opts.grid.levels = {5};
    SurrogateBackend backend;
    const auto res = run_episodes(store, {{"t", TextType::news, 1.0, 5}}, backend, 1, 9, opts);
    REQUIRE(res.trace.size() == 1);
    REQUIRE(res.policies.size() == 1);
    CHECK(res.policies[0].state.counts == std::vector<std::size_t>{1});
    CHECK(res.trace[0].doc_id == "d");
    CHECK(res.trace[0].reward == res.policies[0].state.values[0]);
}

TEST_CASE("run_episodes determinism")
{
    const auto& store = testing::minicorpus();
    SurrogateBackend backend;
    const std::vector<TaskSpec> tasks{{"news", TextType::news, 0.5, 3}, {"blog", TextType::blog, 0.5, 2}};
    auto signature = [](const EpisodeResult& r) {
        std::string s;
        for (const auto& row : r.trace) s += row.task_id + "/" + row.doc_id + "/" + std::to_string(row.arm) + ";";
        return s;
    };
    const auto a = run_episodes(store, tasks, backend, 60, 1);
    const auto b = run_episodes(store, tasks, backend, 60, 1);
    const auto c = run_episodes(store, tasks, backend, 60, 2);
    CHECK(signature(a) == signature(b));
    CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
    CHECK(signature(a) != signature(c));
    REQUIRE(a.trace.size() == 120);
    CHECK(a.trace.front().task_id == "news");
    CHECK(a.trace.back().task_id == "blog");

    // every task only sees documents of its own type
    for (const auto& row : a.trace) CHECK(store.find(row.doc_id)->text_type == (row.task_id == "news" ? TextType::news : TextType::blog));
    for (const auto& p : a.policies) CHECK(p.state.total_pulls() == 60);
    const double loss = multi_task_loss(a.policies, tasks);
    CHECK(loss >= 0.0);
    CHECK(loss <= 1.0);
}

TEST_CASE("run_episodes rejects tasks without documents")
{
    CorpusStore store;
    store.add(Document::make("d", "Only news here.", std::string("news"), TextType::news));
    SurrogateBackend backend;
    CHECK_THROWS_AS(run_episodes(store, {{"b", TextType::blog, 1.0, 3}}, backend, 5, 0), ValidationError);
    CHECK_THROWS_AS(run_episodes(store, {{"n", TextType::news, 1.0, 3}}, backend, 0, 0), ValidationError);
}

TEST_CASE("policy snapshot serializes every arm")
{
    auto s = PolicyState::fresh(arms(3), 10, 4);
    s = update(s, 2, 0.7);
    const auto j = s.to_json();
    REQUIRE(j["arms"].size() == 3);
    CHECK(j["arms"][2]["count"] == 1);
    CHECK(j["arms"][2]["value"] == 0.7);
    CHECK(j["horizon"] == 10);
}
