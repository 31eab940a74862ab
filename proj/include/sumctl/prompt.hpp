#pragma once

#include "sumctl/corpus.hpp"
#include "sumctl/error.hpp"
#include "sumctl/semgraph.hpp"
#include "sumctl/textproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sumctl {

enum class TemplateId { concise, detailed, structured };

inline constexpr std::array kAllTemplates = {TemplateId::concise, TemplateId::detailed, TemplateId::structured};
inline constexpr std::array kLengthGrid = {10, 20, 30, 40, 50, 60};

inline constexpr std::string_view to_string(TemplateId t) noexcept
{
    switch (t) {
    case TemplateId::concise: return "concise";
    case TemplateId::detailed: return "detailed";
    case TemplateId::structured: return "structured";
    }
    return "";
}

inline std::optional<TemplateId> parse_template_id(std::string_view s) noexcept
{
    for (auto t : kAllTemplates) {
        if (s == to_string(t)) return t;
    }
    return std::nullopt;
}

struct PromptConfig {
    TemplateId template_id = TemplateId::concise;
    int length_budget = 30;
    int abstraction_level = 3; // 1 = most detailed, 5 = most abstract
    int keyword_count = 64;    // cap on embedded keywords; a rendered prompt records how many fit
    TextType style_tag = TextType::news;

    void validate() const
    {
        if (length_budget < 1) throw ValidationError("length_budget must be positive");
        if (abstraction_level < 1 || abstraction_level > 5) throw ValidationError("abstraction_level must be in 1..5");
        if (keyword_count < 0) throw ValidationError("keyword_count must be >= 0");
    }

    auto key() const { return std::tuple(template_id, length_budget, abstraction_level, style_tag); }
    bool operator==(const PromptConfig&) const = default;
};

inline std::string describe(const PromptConfig& c)
{
    return std::string(to_string(c.template_id)) + "/len" + std::to_string(c.length_budget) + "/lvl" +
           std::to_string(c.abstraction_level) + "/" + std::string(to_string(c.style_tag));
}

struct Prompt {
    std::string text;
    std::size_t token_count = 0;
    PromptConfig config;
    std::vector<std::string> keywords;
    int target_sentences = 0;
};

// ---------------------------------------------------------------------------
// Templates

/// Template text per TemplateId. Literal text is the instruction clause;
/// `{abstraction}`, `{style}` and `{keywords}` are filled at render time.
class TemplateSet {
public:
    TemplateSet()
        : texts_{"Summarize briefly: {abstraction} {style} {keywords}",
                 "Summarize in detail: {abstraction} {style} {keywords}",
                 "List key points: {abstraction} {style} {keywords}"}
    {
    }

    const std::string& text(TemplateId t) const { return texts_[static_cast<std::size_t>(t)]; }
    void set(TemplateId t, std::string text) { texts_[static_cast<std::size_t>(t)] = std::move(text); }

    /// Reads `<dir>/<template>.txt` for every template present; missing files keep the default.
    static TemplateSet from_directory(const std::filesystem::path& dir)
    {
        TemplateSet set;
        for (auto t : kAllTemplates) {
            const auto path = dir / (std::string(to_string(t)) + ".txt");
            if (!std::filesystem::exists(path)) continue;
            std::string text = detail::read_file(path);
            while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
            set.set(t, std::move(text));
        }
        return set;
    }

private:
    std::array<std::string, 3> texts_;
};

/// Level -> sentence count (base - level) and the compression word used in the directive.
struct AbstractionMapping {
    int base = 6;
    std::array<std::string_view, 5> phrases{"detailed", "specific", "balanced", "condensed", "abstract"};

    int target_sentences(int level) const { return std::max(1, base - level); }

    std::string directive(int level) const
    {
        const int n = target_sentences(level);
        return std::to_string(n) + " " + std::string(phrases[static_cast<std::size_t>(level - 1)]) +
               (n == 1 ? " sentence." : " sentences.");
    }
};

inline std::string style_clause(TextType t)
{
    return "Style: " + std::string(t == TextType::unknown ? "general" : to_string(t)) + ".";
}

inline constexpr int kMinimumBudget = 8;

namespace detail {

inline std::string fill_template(std::string_view tmpl, std::string_view abstraction, std::string_view style,
                                 const std::vector<std::string>& keywords)
{
    std::string kw;
    if (!keywords.empty()) {
        kw = "Focus: ";
        for (std::size_t i = 0; i < keywords.size(); ++i) {
            if (i) kw += ", ";
            kw += keywords[i];
        }
        kw += ".";
    }
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            const auto close = tmpl.find('}', i);
            if (close != std::string_view::npos) {
                const auto name = tmpl.substr(i + 1, close - i - 1);
                if (name == "abstraction") {
                    out += abstraction;
                } else if (name == "style") {
                    out += style;
                } else if (name == "keywords") {
                    out += kw;
                } else {
                    out.append(tmpl.substr(i, close - i + 1));
                }
                i = close + 1;
                continue;
            }
        }
        out.push_back(tmpl[i++]);
    }
    // collapse the gaps left by empty placeholders
    std::string collapsed;
    for (char c : out) {
        if (c == ' ' && (collapsed.empty() || collapsed.back() == ' ')) continue;
        collapsed.push_back(c);
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    return collapsed;
}

} // namespace detail

/// Fills the template in priority order: instruction and abstraction directive
/// (mandatory), style clause, then top-salience keywords appended greedily
/// until the next one would exceed the token budget.
inline Prompt render_prompt(const PromptConfig& config, const SemanticGraph& graph,
                            const TemplateSet& templates = {}, const AbstractionMapping& mapping = {})
{
    config.validate();
    const auto& tmpl = templates.text(config.template_id);
    const auto budget = static_cast<std::size_t>(config.length_budget);
    const std::string abstraction = mapping.directive(config.abstraction_level);
    auto count = [](const std::string& s) { return tokenize(s).size(); };

    std::string text = detail::fill_template(tmpl, abstraction, "", {});
    if (config.length_budget < kMinimumBudget || count(text) > budget) {
        throw ValidationError("budget below minimum: " + std::to_string(config.length_budget) + " tokens");
    }
    std::string style = style_clause(config.style_tag);
    if (count(detail::fill_template(tmpl, abstraction, style, {})) > budget) style.clear();

    std::vector<std::string> keywords;
    const bool has_slot = tmpl.find("{keywords}") != std::string::npos;
    if (has_slot) {
        for (const auto& cand : top_content(graph, static_cast<std::size_t>(config.keyword_count))) {
            keywords.push_back(cand.surface);
            if (count(detail::fill_template(tmpl, abstraction, style, keywords)) > budget) {
                keywords.pop_back();
                break;
            }
        }
    }
    Prompt p;
    p.text = detail::fill_template(tmpl, abstraction, style, keywords);
    p.token_count = count(p.text);
    p.config = config;
    p.config.keyword_count = static_cast<int>(keywords.size());
    p.keywords = std::move(keywords);
    p.target_sentences = mapping.target_sentences(config.abstraction_level);
    return p;
}

// ---------------------------------------------------------------------------
// Objective

struct ObjectiveWeights {
    double lambda1 = 0.5; // semantic
    double lambda2 = 0.3; // abstraction
    double lambda3 = 0.2; // context

    void validate() const
    {
        if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0) throw ValidationError("objective weights must be nonnegative");
        if (std::abs(lambda1 + lambda2 + lambda3 - 1.0) > 1e-9) throw ValidationError("objective weights must sum to 1");
    }

    /// Rescales arbitrary nonnegative weights to sum 1.
    static ObjectiveWeights normalized(double a, double b, double c)
    {
        const double s = a + b + c;
        if (!(s > 0)) throw ValidationError("objective weights must have a positive sum");
        ObjectiveWeights w{a / s, b / s, c / s};
        w.validate();
        return w;
    }
};

struct PromptScore {
    double l_semantic = 0.0;
    double l_abstract = 0.0;
    double l_contextual = 0.0;
    double total = 0.0;
    ObjectiveWeights weights;

    double recompute() const
    {
        return weights.lambda1 * l_semantic + weights.lambda2 * l_abstract + weights.lambda3 * l_contextual;
    }

    static PromptScore combine(double sem, double abs, double ctx, const ObjectiveWeights& w)
    {
        PromptScore s{sem, abs, ctx, 0.0, w};
        s.total = s.recompute();
        return s;
    }
};

inline constexpr std::size_t kSemanticTopM = 10;

/// Loss to be minimized, each component in [0, 1]:
///  semantic    1 - covered salience / salience of the top-10 content nodes
///  abstract    |target level - configured level| / 4
///  contextual  half budget overrun ratio (capped at 1), half style mismatch
inline PromptScore score_prompt(const Prompt& prompt, const SemanticGraph& graph, int target_abstraction,
                                const ObjectiveWeights& weights, int budget)
{
    weights.validate();
    if (target_abstraction < 1 || target_abstraction > 5) throw ValidationError("target abstraction must be in 1..5");
    if (budget < 1) throw ValidationError("budget must be positive");

    double sem = 1.0;
    const auto top = top_content(graph, kSemanticTopM);
    double top_mass = 0.0;
    for (const auto& t : top) top_mass += t.salience;
    if (!top.empty() && top_mass > 0.0) {
        const std::set<std::string> kw(prompt.keywords.begin(), prompt.keywords.end());
        double covered = 0.0;
        for (const auto& n : graph.nodes) {
            if (n.is_content() && kw.contains(n.surface)) covered += n.salience;
        }
        sem = std::clamp(1.0 - covered / top_mass, 0.0, 1.0);
    }
    const double abs = std::abs(target_abstraction - prompt.config.abstraction_level) / 4.0;
    const double over = std::max(0.0, static_cast<double>(prompt.token_count) - budget) / budget;
    const double ctx = 0.5 * std::min(1.0, over) + 0.5 * (prompt.config.style_tag != graph.source_type ? 1.0 : 0.0);
    return PromptScore::combine(sem, abs, ctx, weights);
}

// ---------------------------------------------------------------------------
// Arm space

struct PromptGrid {
    std::vector<TemplateId> templates{kAllTemplates.begin(), kAllTemplates.end()};
    std::vector<int> budgets{kLengthGrid.begin(), kLengthGrid.end()};
    std::vector<int> levels{1, 2, 3, 4, 5};
    std::vector<TextType> styles{TextType::news};
};

/// Cartesian product (template, budget, level, style) in lexicographic order;
/// duplicate axis values are dropped first.
inline std::vector<PromptConfig> enumerate_configs(const PromptGrid& grid)
{
    auto dedup = [](auto v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const auto templates = dedup(grid.templates);
    const auto budgets = dedup(grid.budgets);
    const auto levels = dedup(grid.levels);
    const auto styles = dedup(grid.styles);
    if (templates.empty() || budgets.empty() || levels.empty() || styles.empty()) {
        throw ValidationError("every prompt grid axis needs at least one value");
    }
    std::vector<PromptConfig> out;
    for (auto t : templates) {
        for (auto b : budgets) {
            for (auto l : levels) {
                for (auto s : styles) {
                    PromptConfig c;
                    c.template_id = t;
                    c.length_budget = b;
                    c.abstraction_level = l;
                    c.style_tag = s;
                    c.validate();
                    out.push_back(c);
                }
            }
        }
    }
    return out;
}

} // namespace sumctl
