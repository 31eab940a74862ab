#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <deque>
#include <functional>

using namespace sumctl;
using namespace sumctl::metrics;
using Seq = std::vector<std::string>;

namespace {

Seq words(std::string_view s) { return normalized_tokens(s); }

/// Longest common subsequence by trying every subsequence of `a`.
std::size_t brute_lcs(const Seq& a, const Seq& b)
{
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
        Seq sub;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (mask & (1u << i)) sub.push_back(a[i]);
        if (sub.size() <= best) continue;
        std::size_t j = 0;
        for (const auto& w : b)
            if (j < sub.size() && w == sub[j]) ++j;
        if (j == sub.size()) best = sub.size();
    }
    return best;
}

std::size_t memo_levenshtein(const Seq& a, const Seq& b)
{
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == a.size()) return b.size() - j;
        if (j == b.size()) return a.size() - i;
        auto key = std::pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const std::size_t r = std::min({go(i + 1, j) + 1, go(i, j + 1) + 1, go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
        memo[key] = r;
        return r;
    };
    return go(0, 0);
}

/// Fewest edits (insert, delete, substitute, or move one contiguous block) turning h into r.
std::size_t exhaustive_edits(const Seq& h, const Seq& r, std::size_t max_depth)
{
    std::set<std::string> alphabet(r.begin(), r.end());
    alphabet.insert(h.begin(), h.end());
    std::map<Seq, std::size_t> seen{{h, 0}};
    std::deque<Seq> queue{h};
    while (!queue.empty()) {
        const Seq cur = queue.front();
        queue.pop_front();
        const std::size_t d = seen[cur];
        if (cur == r) return d;
        if (d == max_depth) continue;
        std::vector<Seq> next;
        for (std::size_t i = 0; i <= cur.size(); ++i) {
            for (const auto& w : alphabet) {
                Seq x = cur;
                x.insert(x.begin() + static_cast<std::ptrdiff_t>(i), w);
                next.push_back(std::move(x));
            }
        }
        for (std::size_t i = 0; i < cur.size(); ++i) {
            Seq del = cur;
            del.erase(del.begin() + static_cast<std::ptrdiff_t>(i));
            next.push_back(std::move(del));
            for (const auto& w : alphabet) {
                Seq sub = cur;
                sub[i] = w;
                next.push_back(std::move(sub));
            }
            for (std::size_t len = 1; i + len <= cur.size(); ++len) {
                for (std::size_t dest = 0; dest <= cur.size() - len; ++dest) {
                    next.push_back(metrics::detail::shifted(cur, i, len, dest));
                }
            }
        }
        for (auto& x : next) {
            if (seen.emplace(x, d + 1).second) queue.push_back(std::move(x));
        }
    }
    return SIZE_MAX;
}

Seq random_seq(sumctl::detail::Stream& rng, std::size_t len, std::size_t alphabet)
{
    Seq s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(std::string(1, static_cast<char>('a' + rng.below(alphabet))));
    return s;
}

} // namespace

TEST_CASE("rouge_n hand examples")
{
    const auto same = rouge_n("the quick brown fox", "the quick brown fox", 2);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.f1 == 1.0);

    const auto cat = rouge_n("the cat", "the dog", 1);
    CHECK(cat.precision == 0.5);
    CHECK(cat.recall == 0.5);
    CHECK(cat.f1 == 0.5);

    const auto disjoint = rouge_n("a b", "c d", 2);
    CHECK(disjoint.f1 == 0.0);
    CHECK(disjoint.precision == 0.0);

    // clipping: repeated hypothesis words only match as often as the reference has them
    const auto clipped = rouge_n("the the the", "the cat", 1);
    CHECK(clipped.precision == Catch::Approx(1.0 / 3.0));
    CHECK(clipped.recall == 0.5);

    CHECK(rouge_n("one", "one", 2).f1 == 0.0);
    CHECK_THROWS_AS(rouge_n("a", "a", 0), ValidationError);
}

TEST_CASE("rouge_l hand example")
{
    const auto r = rouge_l("the cat sat", "the cat sat on the mat");
    CHECK(lcs_length(words("the cat sat"), words("the cat sat on the mat")) == 3);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 0.5);
    CHECK(r.f1 == Catch::Approx(0.6667).margin(1e-4));
    CHECK(rouge_l("x y", "x y").f1 == 1.0);
    CHECK(rouge_l("", "x y").f1 == 0.0);
}

TEST_CASE("rouge_l matches exhaustive subsequence enumeration on random 8-token pairs")
{
    sumctl::detail::Stream rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = random_seq(rng, 8, 4);
        const auto b = random_seq(rng, 8, 4);
        const auto l = brute_lcs(a, b);
        CHECK(lcs_length(a, b) == l);
        const double p = static_cast<double>(l) / 8.0;
        CHECK(rouge_l(a, b).f1 == PRF::from(p, p).f1);
    }
}

TEST_CASE("bleu hand examples")
{
    CHECK(bleu("the cat sat on the mat", "the cat sat on the mat") == 1.0);
    CHECK(bleu("", "the cat") == 0.0);
    // p1 = p2 = p3 = p4 = 1 after smoothing, BP = exp(1 - 4/3)
    CHECK(bleu("the cat sat", "the cat sat down") == Catch::Approx(std::exp(1.0 - 4.0 / 3.0)).epsilon(1e-12));
    CHECK(bleu("the cat sat", "the cat sat down") == Catch::Approx(0.7165).margin(1e-3));
    CHECK(bleu("a b c", "d e f") == 0.0);
    CHECK_THROWS_AS(bleu("a", "a", 0), ValidationError);
}

TEST_CASE("ter hand examples")
{
    CHECK(ter("a b c", "a b c") == 0.0);
    CHECK(ter("the cat sits", "the cat sat") == Catch::Approx(1.0 / 3.0));
    CHECK(ter("d a b c", "a b c d") == 0.25);
    CHECK(exhaustive_edits(words("d a b c"), words("a b c d"), 3) == 1);
    CHECK(ter("d a b c", "a b c d", {false}) == 0.5);
    CHECK(ter("", "a b") == 1.0);
    CHECK(ter("a b", "") == 2.0);
    CHECK(ter("", "") == 0.0);
}

TEST_CASE("ter shift search agrees with exhaustive search on small instances")
{
    sumctl::detail::Stream rng(77);
    std::size_t exact = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const auto h = random_seq(rng, 1 + rng.below(4), 3);
        const auto r = random_seq(rng, 1 + rng.below(4), 3);
        const auto greedy = ter_edits(h, r);
        const auto best = exhaustive_edits(h, r, 4);
        // greedy never beats the optimum and never loses to plain edit distance
        CHECK(greedy >= best);
        CHECK(greedy <= edit_distance(h, r));
        exact += greedy == best;
    }
    CHECK(exact >= 110);
}

TEST_CASE("shift-free ter is Levenshtein over reference length")
{
    sumctl::detail::Stream rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const auto h = random_seq(rng, rng.below(7), 3);
        const auto r = random_seq(rng, 1 + rng.below(6), 3);
        CHECK(edit_distance(h, r) == memo_levenshtein(h, r));
        CHECK(ter(h, r, {false}) == static_cast<double>(memo_levenshtein(h, r)) / static_cast<double>(r.size()));
        CHECK(ter(h, r) <= ter(h, r, {false}));
    }
}

TEST_CASE("evaluate_pair composes the individual metrics")
{
    const auto same = evaluate_pair("Harlow Energy will build it.", "harlow energy will build it");
    CHECK(same.rouge_n.at(1).f1 == 1.0);
    CHECK(same.rouge_n.at(2).f1 == 1.0);
    CHECK(same.rouge_l.f1 == 1.0);
    CHECK(same.bleu == 1.0);
    CHECK(same.ter == 0.0);

    const auto empty = evaluate_pair("", "some reference text");
    CHECK(empty.rouge_l.f1 == 0.0);
    CHECK(empty.bleu == 0.0);
    CHECK(empty.ter == 1.0);

    const auto m = evaluate_pair("the cat sat", "the cat sat on the mat");
    CHECK(m.rouge_l.f1 == rouge_l("the cat sat", "the cat sat on the mat").f1);
    CHECK(m.bleu == bleu("the cat sat", "the cat sat on the mat"));
    CHECK(m.ter == ter("the cat sat", "the cat sat on the mat"));
    CHECK(m.ter == 0.5);
}

TEST_CASE("metric ranges and f1 consistency on random pairs")
{
    sumctl::detail::Stream rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = random_seq(rng, rng.below(12), 5);
        const auto r = random_seq(rng, rng.below(12), 5);
        for (const auto& prf : {rouge_n(h, r, 1), rouge_n(h, r, 2), rouge_l(h, r)}) {
            CHECK(prf.precision >= 0.0);
            CHECK(prf.precision <= 1.0);
            CHECK(prf.recall >= 0.0);
            CHECK(prf.recall <= 1.0);
            const double s = prf.precision + prf.recall;
            CHECK(prf.f1 == (s > 0 ? 2 * prf.precision * prf.recall / s : 0.0));
        }
        const double b = bleu(h, r);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        CHECK(ter(h, r) >= 0.0);
    }
}

TEST_CASE("metrics normalize case and punctuation")
{
    CHECK(rouge_l("The CAT, sat!", "the cat sat").f1 == 1.0);
    CHECK(ter("\"Hello\" world.", "hello world") == 0.0);
}
