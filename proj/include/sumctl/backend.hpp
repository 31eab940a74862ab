#pragma once

#include "sumctl/error.hpp"
#include "sumctl/prompt.hpp"
#include "sumctl/semgraph.hpp"
#include "sumctl/textproc.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <semaphore>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace sumctl {

struct GenerationRequest {
    Prompt prompt;
    std::string source_text;
    int max_output_tokens = 256;
    double temperature = 0.0;
};

struct GeneratedSummary {
    std::string text;
    std::string backend_id;
    PromptConfig prompt_config;
    std::int64_t latency_ms = 0;
};

/// Anything that turns (prompt, source) into a summary.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string id() const = 0;
    virtual GeneratedSummary generate(const GenerationRequest& req, const SemanticGraph& graph) const = 0;
};

// ---------------------------------------------------------------------------
// Extractive surrogate

/// Deterministic stand-in for a language model. Reads the sentence target and
/// keyword list carried by the prompt, scores every source sentence by the
/// salience of the prompt keywords it contains (plus 0.1 x its own salience),
/// and returns the best `target_sentences` in document order. Without
/// keywords it falls back to the lead sentences.
inline GeneratedSummary generate_surrogate(const GenerationRequest& req, const SemanticGraph& graph)
{
    if (req.max_output_tokens < 1) throw ValidationError("max_output_tokens must be >= 1");
    const auto sentences = split_sentences(req.source_text);
    if (sentences.empty()) throw GenerationError("source text has no sentences");
    const auto sentence_nodes = graph.sentence_indices();
    if (sentence_nodes.size() != sentences.size()) {
        throw GenerationError("semantic graph was not built from this source text");
    }

    const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, req.prompt.target_sentences)),
                                                   sentences.size());
    std::vector<std::size_t> chosen;
    if (req.prompt.keywords.empty()) {
        chosen.resize(want);
        std::iota(chosen.begin(), chosen.end(), 0);
    } else {
        const std::set<std::string> k(req.prompt.keywords.begin(), req.prompt.keywords.end());
        std::vector<double> score(sentences.size(), 0.0);
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            const auto node = sentence_nodes[i];
            auto it = graph.membership.find(node);
            if (it != graph.membership.end()) {
                for (auto c : it->second) {
                    if (k.contains(graph.nodes[c].surface)) score[i] += graph.nodes[c].salience;
                }
            }
            score[i] += 0.1 * graph.nodes[node].salience;
        }
        std::vector<std::size_t> order(sentences.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
        chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(want));
        std::sort(chosen.begin(), chosen.end());
    }

    GeneratedSummary out;
    for (auto i : chosen) {
        if (!out.text.empty()) out.text += ' ';
        out.text += sentences[i].text;
    }
    out.backend_id = "surrogate";
    out.prompt_config = req.prompt.config;
    return out;
}

class SurrogateBackend final : public Backend {
public:
    std::string id() const override { return "surrogate"; }
    GeneratedSummary generate(const GenerationRequest& req, const SemanticGraph& graph) const override
    {
        return generate_surrogate(req, graph);
    }
};

// ---------------------------------------------------------------------------
// Chat-completions HTTP backend

inline constexpr const char* kApiKeyEnv = "SUMCTL_API_KEY";

struct HttpOptions {
    std::string base_url = "http://127.0.0.1:8000/v1";
    std::string model = "default";
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{1000}; // waits base, 2*base, 4*base
    std::chrono::seconds timeout{60};
    int max_in_flight = 4;
};

namespace detail {

struct ParsedUrl {
    std::string origin; // scheme://host[:port]
    std::string path;   // without trailing slash
};

inline ParsedUrl parse_base_url(const std::string& url)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("base URL needs a scheme: " + url);
    const auto path_begin = url.find('/', scheme_end + 3);
    ParsedUrl p;
    p.origin = url.substr(0, path_begin);
    p.path = path_begin == std::string::npos ? "" : url.substr(path_begin);
    while (!p.path.empty() && p.path.back() == '/') p.path.pop_back();
    return p;
}

inline bool retryable(int status) { return status == 429 || (status >= 500 && status <= 599); }

} // namespace detail

/// POSTs `{model, messages, temperature, max_tokens}` to `<base>/chat/completions`,
/// prompt as the system message and source as the user message. 429 and 5xx
/// responses (and connection failures) are retried with exponential backoff.
inline GeneratedSummary generate_http(const GenerationRequest& req, const std::string& base_url,
                                      const std::string& model, const std::string& key, const HttpOptions& opts = {})
{
    if (key.empty()) throw ConfigError(std::string("missing API key (set ") + kApiKeyEnv + ")");
    if (req.max_output_tokens < 1) throw ValidationError("max_output_tokens must be >= 1");
    const auto url = detail::parse_base_url(base_url);

    nlohmann::json body = {
        {"model", model},
        {"messages", {{{"role", "system"}, {"content", req.prompt.text}}, {{"role", "user"}, {"content", req.source_text}}}},
        {"temperature", req.temperature},
        {"max_tokens", req.max_output_tokens}};
    const std::string payload = body.dump();

    httplib::Client client(url.origin);
    client.set_connection_timeout(opts.timeout);
    client.set_read_timeout(opts.timeout);
    client.set_write_timeout(opts.timeout);
    const httplib::Headers headers = {{"Authorization", "Bearer " + key}};

    const auto started = std::chrono::steady_clock::now();
    std::string last_failure;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(opts.backoff_base * (1 << (attempt - 1)));
        auto res = client.Post(url.path + "/chat/completions", headers, payload, "application/json");
        if (!res) {
            last_failure = "connection error: " + httplib::to_string(res.error());
            continue;
        }
        if (detail::retryable(res->status)) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) throw RequestError(res->status, res->body.substr(0, 200));

        std::string text;
        try {
            const auto j = nlohmann::json::parse(res->body);
            text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw GenerationError(std::string("unexpected completion payload: ") + ex.what());
        }
        if (text.empty()) throw GenerationError("endpoint returned an empty completion");
        GeneratedSummary out;
        out.text = std::move(text);
        out.backend_id = "http:" + model;
        out.prompt_config = req.prompt.config;
        out.latency_ms = std::max<std::int64_t>(
            1, std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count());
        return out;
    }
    throw TransportError("giving up after " + std::to_string(opts.max_retries) + " retries (" + last_failure + ")");
}

class HttpBackend final : public Backend {
public:
    /// Reads the key from the environment; fails before any request if it is missing.
    explicit HttpBackend(HttpOptions opts) : HttpBackend(opts, read_key()) {}

    HttpBackend(HttpOptions opts, std::string key)
        : opts_(std::move(opts))
        , key_(std::move(key))
        , slots_(std::make_unique<std::counting_semaphore<>>(std::max(1, opts_.max_in_flight)))
    {
        if (key_.empty()) throw ConfigError(std::string("missing API key (set ") + kApiKeyEnv + ")");
        detail::parse_base_url(opts_.base_url);
    }

    std::string id() const override { return "http:" + opts_.model; }

    GeneratedSummary generate(const GenerationRequest& req, const SemanticGraph&) const override
    {
        slots_->acquire();
        struct Release {
            std::counting_semaphore<>* s;
            ~Release() { s->release(); }
        } release{slots_.get()};
        return generate_http(req, opts_.base_url, opts_.model, key_, opts_);
    }

private:
    static std::string read_key()
    {
        const char* k = std::getenv(kApiKeyEnv);
        return k ? std::string(k) : std::string();
    }

    HttpOptions opts_;
    std::string key_;
    std::unique_ptr<std::counting_semaphore<>> slots_;
};

} // namespace sumctl
