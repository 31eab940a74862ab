#pragma once

#include "sumctl/error.hpp"
#include "sumctl/textproc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// All metrics compare normalized token streams: lowercased, punctuation tokens dropped.

namespace sumctl::metrics {

using TokenSeq = std::span<const std::string>;

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    static PRF from(double p, double r)
    {
        return {p, r, p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0};
    }
};

struct MetricReport {
    std::map<int, PRF> rouge_n; // keyed by N (1 and 2)
    PRF rouge_l;
    double bleu = 0.0;
    double ter = 0.0;
};

namespace detail {

inline std::map<std::vector<std::string>, std::size_t> ngram_counts(TokenSeq toks, std::size_t n)
{
    std::map<std::vector<std::string>, std::size_t> out;
    if (toks.size() < n) return out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) ++out[{toks.begin() + i, toks.begin() + i + n}];
    return out;
}

/// (clipped matches, hypothesis n-gram total)
inline std::pair<std::size_t, std::size_t> clipped_overlap(TokenSeq hyp, TokenSeq ref, std::size_t n)
{
    const auto h = ngram_counts(hyp, n);
    const auto r = ngram_counts(ref, n);
    std::size_t matches = 0;
    for (const auto& [gram, c] : h) {
        auto it = r.find(gram);
        if (it != r.end()) matches += std::min(c, it->second);
    }
    const std::size_t total = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    return {matches, total};
}

} // namespace detail

// ---------------------------------------------------------------------------
// ROUGE

inline PRF rouge_n(TokenSeq hyp, TokenSeq ref, int n)
{
    if (n < 1) throw ValidationError("rouge_n requires n >= 1");
    const auto un = static_cast<std::size_t>(n);
    if (hyp.size() < un || ref.size() < un) return {};
    const auto [matches, hyp_total] = detail::clipped_overlap(hyp, ref, un);
    const std::size_t ref_total = ref.size() - un + 1;
    return PRF::from(static_cast<double>(matches) / static_cast<double>(hyp_total),
                     static_cast<double>(matches) / static_cast<double>(ref_total));
}

inline PRF rouge_n(std::string_view hyp, std::string_view ref, int n)
{
    return rouge_n(normalized_tokens(hyp), normalized_tokens(ref), n);
}

/// Standard O(|a||b|) dynamic program, two rolling rows.
inline std::size_t lcs_length(TokenSeq a, TokenSeq b)
{
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline PRF rouge_l(TokenSeq hyp, TokenSeq ref)
{
    if (hyp.empty() || ref.empty()) return {};
    const auto l = static_cast<double>(lcs_length(hyp, ref));
    return PRF::from(l / static_cast<double>(hyp.size()), l / static_cast<double>(ref.size()));
}

inline PRF rouge_l(std::string_view hyp, std::string_view ref)
{
    return rouge_l(normalized_tokens(hyp), normalized_tokens(ref));
}

// ---------------------------------------------------------------------------
// BLEU

/// Sentence BLEU: geometric mean of modified precisions p1..p_max_n, add-one
/// smoothing on numerator and denominator for n >= 2, times the brevity penalty.
inline double bleu(TokenSeq hyp, TokenSeq ref, int max_n = 4)
{
    if (max_n < 1) throw ValidationError("bleu requires max_n >= 1");
    if (hyp.empty()) return 0.0;
    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto [matches, total] = detail::clipped_overlap(hyp, ref, static_cast<std::size_t>(n));
        double p = 0.0;
        if (n == 1) {
            p = static_cast<double>(matches) / static_cast<double>(total);
        } else {
            p = (static_cast<double>(matches) + 1.0) / (static_cast<double>(total) + 1.0);
        }
        if (p == 0.0) return 0.0;
        log_sum += std::log(p);
    }
    const double h = static_cast<double>(hyp.size());
    const double r = static_cast<double>(ref.size());
    const double bp = h >= r ? 1.0 : std::exp(1.0 - r / h);
    return bp * std::exp(log_sum / static_cast<double>(max_n));
}

inline double bleu(std::string_view hyp, std::string_view ref, int max_n = 4)
{
    return bleu(normalized_tokens(hyp), normalized_tokens(ref), max_n);
}

// ---------------------------------------------------------------------------
// TER

/// Word-level Levenshtein distance (unit-cost insert, delete, substitute).
inline std::size_t edit_distance(TokenSeq a, TokenSeq b)
{
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

struct TerOptions {
    bool allow_shifts = true;
    std::size_t max_shift_size = 10;
    std::size_t max_shift_distance = 50;
};

namespace detail {

/// For each reference position, the hypothesis position aligned to it by a
/// minimum-cost edit path (match or substitution), or SIZE_MAX.
inline std::vector<std::size_t> ref_alignment(TokenSeq hyp, TokenSeq ref)
{
    const std::size_t H = hyp.size();
    const std::size_t R = ref.size();
    std::vector<std::size_t> d((H + 1) * (R + 1));
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (R + 1) + j]; };
    for (std::size_t i = 0; i <= H; ++i) at(i, 0) = i;
    for (std::size_t j = 0; j <= R; ++j) at(0, j) = j;
    for (std::size_t i = 1; i <= H; ++i) {
        for (std::size_t j = 1; j <= R; ++j) {
            at(i, j) = std::min({at(i - 1, j) + 1, at(i, j - 1) + 1, at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1)});
        }
    }
    std::vector<std::size_t> align(R, SIZE_MAX);
    std::size_t i = H, j = R;
    while (i > 0 && j > 0) {
        const std::size_t diag = at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
        if (at(i, j) == diag) {
            align[j - 1] = i - 1;
            --i;
            --j;
        } else if (at(i, j) == at(i - 1, j) + 1) {
            --i;
        } else {
            --j;
        }
    }
    return align;
}

inline std::vector<std::string> shifted(TokenSeq hyp, std::size_t start, std::size_t len, std::size_t dest)
{
    // dest is an insertion point in the sequence with the span removed
    std::vector<std::string> rest;
    rest.reserve(hyp.size());
    rest.insert(rest.end(), hyp.begin(), hyp.begin() + start);
    rest.insert(rest.end(), hyp.begin() + start + len, hyp.end());
    std::vector<std::string> out;
    out.reserve(hyp.size());
    out.insert(out.end(), rest.begin(), rest.begin() + dest);
    out.insert(out.end(), hyp.begin() + start, hyp.begin() + start + len);
    out.insert(out.end(), rest.begin() + dest, rest.end());
    return out;
}

} // namespace detail

/// Number of edits (with block shifts counted as one edit each) found by the
/// greedy shift search: apply the shift with the largest net reduction of the
/// remaining edit distance while one exists, then add that distance.
inline std::size_t ter_edits(TokenSeq hyp_in, TokenSeq ref, const TerOptions& opts = {})
{
    std::vector<std::string> hyp(hyp_in.begin(), hyp_in.end());
    std::size_t current = edit_distance(hyp, ref);
    std::size_t shifts = 0;
    if (!opts.allow_shifts) return current;

    while (current > 0) {
        const auto align = detail::ref_alignment(hyp, ref);
        std::size_t best_cost = current;
        std::vector<std::string> best;
        for (std::size_t start = 0; start < hyp.size(); ++start) {
            for (std::size_t len = 1; len <= opts.max_shift_size && start + len <= hyp.size(); ++len) {
                for (std::size_t rj = 0; rj + len <= ref.size(); ++rj) {
                    if (!std::equal(hyp.begin() + start, hyp.begin() + start + len, ref.begin() + rj)) continue;
                    // already sitting on a matching alignment
                    if (align[rj] == start) continue;
                    // candidate insertion points next to the hypothesis words aligned around ref[rj]
                    std::vector<std::size_t> targets;
                    if (rj == 0) targets.push_back(0);
                    if (rj > 0 && align[rj - 1] != SIZE_MAX) targets.push_back(align[rj - 1] + 1);
                    if (align[rj] != SIZE_MAX) targets.push_back(align[rj]);
                    if (rj + len == ref.size()) targets.push_back(hyp.size());
                    for (std::size_t t : targets) {
                        // convert to an insertion point in the sequence without the span
                        if (t > start && t < start + len) continue;
                        const std::size_t dest = t >= start + len ? t - len : t;
                        if (dest == start) continue;
                        const std::size_t dist = dest > start ? dest - start : start - dest;
                        if (dist > opts.max_shift_distance) continue;
                        auto cand = detail::shifted(hyp, start, len, dest);
                        const std::size_t cost = edit_distance(cand, ref) + 1;
                        if (cost < best_cost) {
                            best_cost = cost;
                            best = std::move(cand);
                        }
                    }
                }
            }
        }
        if (best.empty()) break;
        hyp = std::move(best);
        ++shifts;
        current = best_cost - 1;
    }
    return shifts + current;
}

/// Edits per reference word. Empty reference: 0 for an empty hypothesis,
/// otherwise the hypothesis length.
inline double ter(TokenSeq hyp, TokenSeq ref, const TerOptions& opts = {})
{
    if (ref.empty()) return static_cast<double>(hyp.size());
    return static_cast<double>(ter_edits(hyp, ref, opts)) / static_cast<double>(ref.size());
}

inline double ter(std::string_view hyp, std::string_view ref, const TerOptions& opts = {})
{
    return ter(normalized_tokens(hyp), normalized_tokens(ref), opts);
}

inline MetricReport evaluate_pair(std::string_view hyp, std::string_view ref)
{
    const auto h = normalized_tokens(hyp);
    const auto r = normalized_tokens(ref);
    MetricReport m;
    m.rouge_n[1] = rouge_n(h, r, 1);
    m.rouge_n[2] = rouge_n(h, r, 2);
    m.rouge_l = rouge_l(h, r);
    m.bleu = bleu(h, r);
    m.ter = ter(h, r);
    return m;
}

} // namespace sumctl::metrics
