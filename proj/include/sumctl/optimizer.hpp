#pragma once

#include "sumctl/backend.hpp"
#include "sumctl/corpus.hpp"
#include "sumctl/detail/random.hpp"
#include "sumctl/error.hpp"
#include "sumctl/metrics.hpp"
#include "sumctl/prompt.hpp"
#include "sumctl/semgraph.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace sumctl {

struct RewardWeights {
    double w_rouge_l = 0.5;
    double w_bleu = 0.3;
    double w_ter = 0.2;

    void validate() const
    {
        if (w_rouge_l < 0 || w_bleu < 0 || w_ter < 0) throw ValidationError("reward weights must be nonnegative");
        if (std::abs(w_rouge_l + w_bleu + w_ter - 1.0) > 1e-9) throw ValidationError("reward weights must sum to 1");
    }
};

/// R = w_l * ROUGE-L F1 + w_b * BLEU - w_t * min(TER, 1)
inline double reward_from(const metrics::MetricReport& m, const RewardWeights& w)
{
    return w.w_rouge_l * m.rouge_l.f1 + w.w_bleu * m.bleu - w.w_ter * std::min(m.ter, 1.0);
}

inline double reward(const GeneratedSummary& gen, const std::string& reference, const RewardWeights& weights)
{
    weights.validate();
    if (reference.empty()) throw ValidationError("reward needs a nonempty reference");
    return reward_from(metrics::evaluate_pair(gen.text, reference), weights);
}

// ---------------------------------------------------------------------------
// Epsilon-greedy policy

struct PolicyState {
    std::vector<PromptConfig> arms;
    std::vector<std::size_t> counts;
    std::vector<double> values; // incremental mean reward per arm
    double epsilon_start = 0.3;
    double epsilon_end = 0.05;
    std::size_t horizon = 1;
    std::uint64_t rng_seed = 0;

    static PolicyState fresh(std::vector<PromptConfig> arms, std::size_t horizon, std::uint64_t seed,
                             double eps_start = 0.3, double eps_end = 0.05)
    {
        PolicyState s;
        s.counts.assign(arms.size(), 0);
        s.values.assign(arms.size(), 0.0);
        s.arms = std::move(arms);
        s.horizon = horizon;
        s.rng_seed = seed;
        s.epsilon_start = eps_start;
        s.epsilon_end = eps_end;
        return s;
    }

    std::size_t total_pulls() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

    /// Linear decay from epsilon_start at step 0 to epsilon_end at step horizon-1.
    double epsilon(std::size_t step) const
    {
        const double span = static_cast<double>(std::max<std::size_t>(1, horizon - 1));
        return epsilon_start + (epsilon_end - epsilon_start) * static_cast<double>(step) / span;
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        auto& arr = j["arms"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < arms.size(); ++i) {
            arr.push_back({{"template", std::string(to_string(arms[i].template_id))},
                           {"length_budget", arms[i].length_budget},
                           {"abstraction_level", arms[i].abstraction_level},
                           {"style", std::string(to_string(arms[i].style_tag))},
                           {"count", counts[i]},
                           {"value", values[i]}});
        }
        j["epsilon_start"] = epsilon_start;
        j["epsilon_end"] = epsilon_end;
        j["horizon"] = horizon;
        j["rng_seed"] = rng_seed;
        return j;
    }
};

/// Explore with probability epsilon(step), otherwise exploit the highest value
/// (lowest index on ties). Draws are keyed on (rng_seed, step), so the choice
/// is a pure function of the state and the step.
inline std::size_t select_arm(const PolicyState& state, std::size_t step)
{
    if (state.arms.empty()) throw ValidationError("policy has no arms");
    if (step >= state.horizon) throw ValidationError("step beyond policy horizon");
    detail::Stream rng(detail::mix(state.rng_seed, step));
    if (rng.uniform() < state.epsilon(step)) return rng.below(state.arms.size());
    return static_cast<std::size_t>(std::max_element(state.values.begin(), state.values.end()) - state.values.begin());
}

inline PolicyState update(PolicyState state, std::size_t arm, double r)
{
    if (arm >= state.arms.size()) throw ValidationError("arm index out of range");
    if (!std::isfinite(r)) throw ValidationError("reward must be finite");
    state.counts[arm] += 1;
    state.values[arm] += (r - state.values[arm]) / static_cast<double>(state.counts[arm]);
    return state;
}

// ---------------------------------------------------------------------------
// Episodes

struct TaskSpec {
    std::string task_id;
    TextType text_type = TextType::news;
    double lambda_k = 1.0;
    int target_abstraction = 3;
};

inline void validate_tasks(const std::vector<TaskSpec>& tasks)
{
    if (tasks.empty()) throw ValidationError("at least one task is required");
    double sum = 0.0;
    std::set<std::string> ids;
    for (const auto& t : tasks) {
        if (t.task_id.empty()) throw ValidationError("task id must be nonempty");
        if (!ids.insert(t.task_id).second) throw ValidationError("duplicate task id '" + t.task_id + "'");
        if (t.lambda_k < 0) throw ValidationError("task weight must be nonnegative ('" + t.task_id + "')");
        if (t.target_abstraction < 1 || t.target_abstraction > 5)
            throw ValidationError("task target abstraction must be in 1..5 ('" + t.task_id + "')");
        sum += t.lambda_k;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("task weights must sum to 1");
}

struct OptimizerOptions {
    PromptGrid grid; // style axis is replaced by each task's text type
    RewardWeights reward_weights;
    ObjectiveWeights objective_weights;
    double epsilon_start = 0.3;
    double epsilon_end = 0.05;
    GraphOptions graph;
    TemplateSet templates;
    int max_output_tokens = 256;
};

struct TraceRow {
    std::size_t episode = 0;
    std::string task_id;
    std::string doc_id;
    std::size_t arm = 0;
    PromptConfig config;
    double prompt_score_total = 0.0;
    metrics::MetricReport report;
    double reward = 0.0;
};

struct TaskPolicy {
    std::string task_id;
    PolicyState state;
};

struct EpisodeResult {
    std::vector<TaskPolicy> policies; // in task order
    std::vector<TraceRow> trace;      // task order, then episode order
};

/// Runs `episodes` bandit rounds per task. Each task owns its policy over the
/// prompt grid restricted to its text type and a stream seeded with
/// seed ^ hash(task_id); tasks run concurrently.
inline EpisodeResult run_episodes(const CorpusStore& corpus, const std::vector<TaskSpec>& tasks,
                                  const Backend& backend, std::size_t episodes, std::uint64_t seed,
                                  const OptimizerOptions& opts = {})
{
    if (episodes < 1) throw ValidationError("episodes must be >= 1");
    validate_tasks(tasks);
    opts.reward_weights.validate();
    opts.objective_weights.validate();

    std::vector<std::vector<const Document*>> task_docs;
    for (const auto& t : tasks) {
        std::vector<const Document*> docs;
        for (const auto* d : corpus.of_type(t.text_type)) {
            if (d->reference && !d->reference->empty()) docs.push_back(d);
        }
        if (docs.empty()) throw ValidationError("task '" + t.task_id + "' matches no documents with a reference");
        task_docs.push_back(std::move(docs));
    }
    const auto tfidf = tfidf_weights(corpus);

    auto run_task = [&](std::size_t ti) {
        const auto& task = tasks[ti];
        const std::uint64_t task_seed = seed ^ detail::fnv1a(task.task_id);
        PromptGrid grid = opts.grid;
        grid.styles = {task.text_type};
        auto state = PolicyState::fresh(enumerate_configs(grid), episodes, task_seed, opts.epsilon_start, opts.epsilon_end);

        auto docs = task_docs[ti];
        // seeded visiting order, then round-robin
        detail::Stream shuffle(detail::mix(task_seed, 0x5eedULL));
        for (std::size_t i = docs.size(); i > 1; --i) std::swap(docs[i - 1], docs[shuffle.below(i)]);
        std::map<std::string, SemanticGraph> graphs;
        for (const auto* d : docs) graphs.emplace(d->id, build_semantic_graph(*d, tfidf.at(d->id), opts.graph));

        std::vector<TraceRow> rows;
        rows.reserve(episodes);
        for (std::size_t e = 0; e < episodes; ++e) {
            const Document& doc = *docs[e % docs.size()];
            const auto& graph = graphs.at(doc.id);
            const std::size_t arm = select_arm(state, e);
            const auto prompt = render_prompt(state.arms[arm], graph, opts.templates);
            const auto score = score_prompt(prompt, graph, task.target_abstraction, opts.objective_weights,
                                            state.arms[arm].length_budget);
            GenerationRequest req{prompt, doc.text, opts.max_output_tokens, 0.0};
            const auto gen = backend.generate(req, graph);
            const auto report = metrics::evaluate_pair(gen.text, *doc.reference);
            const double r = reward_from(report, opts.reward_weights);
            state = update(std::move(state), arm, r);
            rows.push_back({e, task.task_id, doc.id, arm, state.arms[arm], score.total, report, r});
        }
        return std::pair(TaskPolicy{task.task_id, std::move(state)}, std::move(rows));
    };

    std::vector<std::future<std::pair<TaskPolicy, std::vector<TraceRow>>>> futures;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) futures.push_back(std::async(std::launch::async, run_task, ti));
    EpisodeResult result;
    for (auto& f : futures) {
        auto [policy, rows] = f.get();
        result.policies.push_back(std::move(policy));
        result.trace.insert(result.trace.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
    return result;
}

/// L_total = sum_k lambda_k * (1 - clip(mean reward of task k, 0, 1)); a task
/// that was never pulled contributes its full weight.
inline double multi_task_loss(const std::vector<TaskPolicy>& states, const std::vector<TaskSpec>& tasks)
{
    validate_tasks(tasks);
    double total = 0.0;
    for (const auto& t : tasks) {
        auto it = std::find_if(states.begin(), states.end(), [&](const auto& p) { return p.task_id == t.task_id; });
        if (it == states.end()) throw ValidationError("no policy state for task '" + t.task_id + "'");
        const auto& s = it->state;
        const auto pulls = s.total_pulls();
        double loss = 1.0;
        if (pulls > 0) {
            double sum = 0.0;
            for (std::size_t i = 0; i < s.arms.size(); ++i) sum += static_cast<double>(s.counts[i]) * s.values[i];
            loss = 1.0 - std::clamp(sum / static_cast<double>(pulls), 0.0, 1.0);
        }
        total += t.lambda_k * loss;
    }
    return total;
}

} // namespace sumctl
