#pragma once

#include "sumctl/corpus.hpp"
#include "sumctl/detail/utf8.hpp"
#include "sumctl/error.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sumctl {

struct ByteSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool operator==(const ByteSpan&) const = default;
};

struct Token {
    std::string surface;
    std::string normalized; // lowercase alphanumerics; empty for punctuation
    ByteSpan span;

    bool is_punct() const noexcept { return normalized.empty(); }
};

struct Sentence {
    std::size_t index = 0;
    std::vector<Token> tokens; // spans are document offsets
    ByteSpan span;
    std::string text;
};

enum class EntityKind { capitalized_span, acronym, number_unit };

inline constexpr std::string_view to_string(EntityKind k) noexcept
{
    switch (k) {
    case EntityKind::capitalized_span: return "capitalized_span";
    case EntityKind::acronym: return "acronym";
    case EntityKind::number_unit: return "number_unit";
    }
    return "";
}

struct EntityMention {
    std::string surface;
    std::size_t sentence_index = 0;
    EntityKind kind = EntityKind::capitalized_span;
};

// ---------------------------------------------------------------------------
// Stopwords

inline constexpr std::string_view kDefaultStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are", "as",
    "at", "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could",
    "did", "do", "does", "doing", "down", "during", "each", "even", "ever", "every", "few", "for", "from",
    "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
    "how", "however", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "last", "least", "less",
    "like", "made", "make", "many", "may", "me", "might", "more", "most", "much", "must", "my", "myself",
    "never", "new", "no", "nor", "not", "now", "of", "off", "often", "on", "once", "one", "only", "or", "other",
    "our", "ours", "ourselves", "out", "over", "own", "per", "quite", "rather", "really", "said", "same", "say",
    "says", "see", "seen", "several", "shall", "she", "should", "since", "so", "some", "still", "such", "than",
    "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
    "though", "through", "thus", "to", "too", "two", "under", "until", "up", "upon", "us", "very", "was", "we",
    "well", "were", "what", "when", "where", "whether", "which", "while", "who", "whom", "whose", "why", "will",
    "with", "within", "without", "would", "yet", "you", "your", "yours", "yourself", "yourselves", "across",
    "almost", "already", "although", "among", "another", "around", "away", "back", "become", "became", "either",
    "else", "enough", "first", "get", "gets", "got", "go", "goes", "going", "i.e", "e.g", "let", "lot", "put",
    "s", "t", "take", "way", "went", "whatever", "whenever", "wherever", "onto", "toward", "towards",
};

class StopwordList {
public:
    StopwordList()
    {
        for (auto w : kDefaultStopwords) words_.emplace(w);
    }

    explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// One word per line; blank lines and `#` comments ignored.
    static StopwordList from_file(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open stopword list " + path.string());
        std::unordered_set<std::string> words;
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            words.insert(line);
        }
        return StopwordList(std::move(words));
    }

    static const StopwordList& defaults()
    {
        static const StopwordList list;
        return list;
    }

    bool contains(std::string_view normalized) const { return words_.contains(std::string(normalized)); }
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// ---------------------------------------------------------------------------
// Tokenization

namespace detail {

inline std::string normalize_core(std::string_view surface)
{
    std::string out;
    for (const auto& cp : decode(surface)) {
        if (is_alnum(cp.value)) append(out, to_lower(cp.value));
    }
    return out;
}

// "U.S", "e.g", "Ph.D": dotted runs of 1-3 letter segments keep their final period.
inline bool is_dotted_abbreviation_core(std::string_view core)
{
    if (core.find('.') == std::string_view::npos) return false;
    std::size_t seg = 0;
    for (char c : core) {
        if (c == '.') {
            if (seg == 0 || seg > 3) return false;
            seg = 0;
        } else if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) {
            ++seg;
        } else {
            return false;
        }
    }
    return seg >= 1 && seg <= 3;
}

inline void push_token(std::vector<Token>& out, std::string_view text, std::size_t begin, std::size_t end)
{
    Token t;
    t.surface = std::string(text.substr(begin, end - begin));
    t.normalized = normalize_core(t.surface);
    t.span = {begin, end};
    out.push_back(std::move(t));
}

} // namespace detail

/// Whitespace split, then leading/trailing punctuation peeled off one character
/// per token. Interior punctuation stays ("don't", "3.5"); a trailing period
/// stays on dotted abbreviations ("U.S.").
inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    for (auto [off, len] : detail::whitespace_pieces(text)) {
        const auto piece = text.substr(off, len);
        const auto cps = detail::decode(piece);
        std::size_t lo = 0;
        std::size_t hi = cps.size();
        while (lo < hi && detail::is_punct(cps[lo].value)) ++lo;
        std::size_t core_hi = hi;
        while (core_hi > lo && detail::is_punct(cps[core_hi - 1].value)) {
            if (cps[core_hi - 1].value == U'.') {
                const std::size_t b = cps[lo].offset;
                const std::size_t e = cps[core_hi - 1].offset;
                if (detail::is_dotted_abbreviation_core(piece.substr(b, e - b))) break;
            }
            --core_hi;
        }
        for (std::size_t i = 0; i < lo; ++i) {
            detail::push_token(out, text, off + cps[i].offset, off + cps[i].offset + cps[i].length);
        }
        if (lo < core_hi) {
            const std::size_t b = off + cps[lo].offset;
            const std::size_t e = off + cps[core_hi - 1].offset + cps[core_hi - 1].length;
            detail::push_token(out, text, b, e);
        }
        for (std::size_t i = std::max(core_hi, lo); i < hi; ++i) {
            detail::push_token(out, text, off + cps[i].offset, off + cps[i].offset + cps[i].length);
        }
    }
    return out;
}

/// Normalized, punctuation-free token stream; the unit every metric works on.
inline std::vector<std::string> normalized_tokens(std::string_view text)
{
    std::vector<std::string> out;
    for (auto& t : tokenize(text)) {
        if (!t.is_punct()) out.push_back(std::move(t.normalized));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sentence segmentation

inline const std::vector<std::string>& default_abbreviations()
{
    static const std::vector<std::string> list = {
        "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "u.s.", "u.k.", "e.g.", "i.e.", "etc.", "vs.",
        "inc.", "ltd.", "co.", "corp.", "no.", "gen.", "sen.", "rep.", "gov.", "lt.", "col.", "sgt.", "capt.",
        "jan.", "feb.", "aug.", "sept.", "oct.", "nov.", "dec.", "approx.", "fig.", "al.", "p.m.", "a.m."};
    return list;
}

namespace detail {

inline bool is_closer(char32_t c) noexcept
{
    return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x201D || c == 0x2019;
}

inline bool is_opener(char32_t c) noexcept
{
    return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == 0x201C || c == 0x2018;
}

inline std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

} // namespace detail

/// Breaks after `.`, `!` or `?` (plus closing quotes/brackets) when the next
/// non-space character is an uppercase letter (after optional opening quotes),
/// or at end of text. Abbreviations and single-letter initials never end a sentence.
inline std::vector<Sentence> split_sentences(std::string_view text,
                                             const std::vector<std::string>& abbreviations = default_abbreviations())
{
    const auto cps = detail::decode(text);
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t start = 0;
    std::size_t i = 0;

    auto word_before = [&](std::size_t idx) {
        // the whitespace-delimited word ending at cps[idx], opening punctuation stripped
        std::size_t b = idx;
        while (b > 0 && !detail::is_space(cps[b - 1].value)) --b;
        while (b < idx && detail::is_punct(cps[b].value) && cps[b].value != U'.') ++b;
        return std::string_view(text).substr(cps[b].offset, cps[idx].offset + 1 - cps[b].offset);
    };

    while (i < cps.size()) {
        const char32_t c = cps[i].value;
        if (c != U'.' && c != U'!' && c != U'?') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < cps.size() && (cps[j + 1].value == U'.' || cps[j + 1].value == U'!' || cps[j + 1].value == U'?'))
            ++j;
        const std::size_t last_terminator = j;
        while (j + 1 < cps.size() && detail::is_closer(cps[j + 1].value)) ++j;
        std::size_t k = j + 1;
        bool saw_space = false;
        while (k < cps.size() && detail::is_space(cps[k].value)) {
            ++k;
            saw_space = true;
        }
        bool boundary = false;
        if (k == cps.size()) {
            boundary = true;
        } else if (saw_space) {
            std::size_t m = k;
            while (m < cps.size() && detail::is_opener(cps[m].value)) ++m;
            boundary = m < cps.size() && detail::is_upper(cps[m].value);
        }
        if (boundary && cps[i].value == U'.' && last_terminator == i) {
            const auto word = word_before(i);
            const auto lw = detail::ascii_lower(word);
            if (std::find(abbreviations.begin(), abbreviations.end(), lw) != abbreviations.end()) boundary = false;
            // single-letter initial such as "J."
            if (word.size() == 2 && detail::is_ascii_upper(static_cast<unsigned char>(word[0]))) boundary = false;
        }
        if (boundary) {
            ranges.emplace_back(start, cps[j].offset + cps[j].length);
            start = k < cps.size() ? cps[k].offset : text.size();
        }
        i = j + 1;
    }
    if (start < text.size()) ranges.emplace_back(start, text.size());

    std::vector<Sentence> out;
    const auto all_tokens = tokenize(text);
    std::size_t t = 0;
    for (auto [b, e] : ranges) {
        // trim surrounding whitespace
        const auto inner = detail::whitespace_pieces(text.substr(b, e - b));
        if (inner.empty()) continue;
        const std::size_t sb = b + inner.front().first;
        const std::size_t se = b + inner.back().first + inner.back().second;
        Sentence s;
        s.index = out.size();
        s.span = {sb, se};
        s.text = std::string(text.substr(sb, se - sb));
        while (t < all_tokens.size() && all_tokens[t].span.begin < sb) ++t;
        while (t < all_tokens.size() && all_tokens[t].span.end <= se) s.tokens.push_back(all_tokens[t++]);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Entities

namespace detail {

inline bool starts_upper(std::string_view s)
{
    const auto cps = decode(s);
    return !cps.empty() && is_upper(cps.front().value);
}

inline std::size_t letter_count(std::string_view s) { return normalize_core(s).size(); }

inline bool is_all_caps(std::string_view s)
{
    std::size_t letters = 0;
    for (const auto& cp : decode(s)) {
        if (is_lower(cp.value)) return false;
        if (is_upper(cp.value)) ++letters;
    }
    return letters >= 2;
}

inline bool is_number(std::string_view s)
{
    if (s.empty() || !(s.front() >= '0' && s.front() <= '9')) return false;
    for (char c : s) {
        if (!((c >= '0' && c <= '9') || c == ',' || c == '.')) return false;
    }
    return s.back() >= '0' && s.back() <= '9';
}

inline bool is_unit(const Token& t)
{
    static const std::set<std::string, std::less<>> units = {
        "percent", "million", "billion", "trillion", "thousand", "hundred", "km", "kilometers", "kilometres",
        "miles", "kg", "kilograms", "tonnes", "tons", "pounds", "dollars", "euros", "yuan", "years", "months",
        "weeks", "days", "hours", "minutes", "seconds", "people", "degrees", "meters", "metres", "feet", "acres",
        "hectares", "participants", "patients", "students", "samples", "users", "votes", "seats", "mw", "gw"};
    return t.surface == "%" || units.contains(t.normalized);
}

} // namespace detail

/// Rule-based mentions: capitalized runs (sentence-initial runs only when
/// multi-token or ALL-CAPS), 2-6 letter ALL-CAPS acronyms, and number+unit pairs.
inline std::vector<EntityMention> extract_entities(std::span<const Sentence> sentences,
                                                   const StopwordList& stopwords = StopwordList::defaults())
{
    std::vector<EntityMention> out;
    std::set<std::pair<std::string, std::size_t>> seen;
    auto emit = [&](const Sentence& s, std::size_t first, std::size_t last, EntityKind kind) {
        const std::size_t b = s.tokens[first].span.begin - s.span.begin;
        const std::size_t e = s.tokens[last].span.end - s.span.begin;
        std::string surface = s.text.substr(b, e - b);
        if (seen.emplace(surface, s.index).second) out.push_back({std::move(surface), s.index, kind});
    };

    for (const auto& s : sentences) {
        const auto& toks = s.tokens;
        std::size_t first_word = 0;
        while (first_word < toks.size() && toks[first_word].is_punct()) ++first_word;

        std::size_t i = 0;
        while (i < toks.size()) {
            // number followed by a unit word
            if (detail::is_number(toks[i].surface) && i + 1 < toks.size() && detail::is_unit(toks[i + 1])) {
                emit(s, i, i + 1, EntityKind::number_unit);
                i += 2;
                continue;
            }
            if (toks[i].is_punct() || !detail::starts_upper(toks[i].surface)) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < toks.size() && !toks[j + 1].is_punct() && detail::starts_upper(toks[j + 1].surface)) ++j;
            const bool at_start = i == first_word;
            std::size_t b = i;
            // drop leading function words ("The Senate" -> "Senate"); acronyms are never dropped
            while (b <= j && stopwords.contains(toks[b].normalized) && !detail::is_all_caps(toks[b].surface)) ++b;
            if (b <= j) {
                const bool single = b == j;
                const bool trimmed = b != i;
                const bool caps = single && detail::is_all_caps(toks[b].surface);
                if (!at_start || trimmed || !single || caps) {
                    const auto letters = detail::letter_count(toks[b].surface);
                    const auto kind = caps && letters >= 2 && letters <= 6 ? EntityKind::acronym
                                                                            : EntityKind::capitalized_span;
                    emit(s, b, j, kind);
                }
            }
            i = j + 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// TF-IDF

/// Per-document term weights; absent terms weigh 0.
class TermWeights {
public:
    TermWeights() = default;
    explicit TermWeights(std::unordered_map<std::string, double> w) : weights_(std::move(w)) {}

    double weight(std::string_view term) const
    {
        auto it = weights_.find(std::string(term));
        return it == weights_.end() ? 0.0 : it->second;
    }

    const std::unordered_map<std::string, double>& all() const noexcept { return weights_; }

private:
    std::unordered_map<std::string, double> weights_;
};

/// Corpus document frequencies; lets documents outside the corpus (noisy copies) be weighted.
struct DocumentFrequencies {
    std::size_t documents = 0;
    std::unordered_map<std::string, std::size_t> df;

    double idf(std::string_view term) const
    {
        auto it = df.find(std::string(term));
        const double d = it == df.end() ? 0.0 : static_cast<double>(it->second);
        return std::log((1.0 + static_cast<double>(documents)) / (1.0 + d)) + 1.0;
    }

    static DocumentFrequencies of(std::span<const Document> docs)
    {
        DocumentFrequencies f;
        f.documents = docs.size();
        for (const auto& d : docs) {
            const auto toks = normalized_tokens(d.text);
            for (const auto& term : std::set<std::string>(toks.begin(), toks.end())) ++f.df[term];
        }
        return f;
    }
};

inline TermWeights term_weights(std::string_view text, const DocumentFrequencies& freqs,
                                const StopwordList& stopwords = StopwordList::defaults())
{
    const auto toks = normalized_tokens(text);
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& t : toks) ++counts[t];
    std::unordered_map<std::string, double> w;
    for (const auto& [term, n] : counts) {
        if (stopwords.contains(term)) continue;
        const double tf = static_cast<double>(n) / static_cast<double>(toks.size());
        w.emplace(term, tf * freqs.idf(term));
    }
    return TermWeights(std::move(w));
}

/// tf = count / document tokens, idf = ln((1 + N) / (1 + df)) + 1; stopwords weigh 0.
inline std::map<std::string, TermWeights> tfidf_weights(const CorpusStore& corpus,
                                                        const StopwordList& stopwords = StopwordList::defaults())
{
    if (corpus.empty()) throw ValidationError("tf-idf needs a nonempty corpus");
    const auto freqs = DocumentFrequencies::of(corpus.documents());
    std::map<std::string, TermWeights> out;
    for (const auto& d : corpus.documents()) out.emplace(d.id, term_weights(d.text, freqs, stopwords));
    return out;
}

} // namespace sumctl
