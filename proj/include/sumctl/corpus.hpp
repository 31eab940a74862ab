#pragma once

#include "sumctl/detail/random.hpp"
#include "sumctl/detail/utf8.hpp"
#include "sumctl/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sumctl {

enum class TextType { news, blog, academic, unknown };

inline constexpr std::string_view to_string(TextType t) noexcept
{
    switch (t) {
    case TextType::news: return "news";
    case TextType::blog: return "blog";
    case TextType::academic: return "academic";
    case TextType::unknown: return "unknown";
    }
    return "unknown";
}

inline std::optional<TextType> parse_text_type(std::string_view s) noexcept
{
    for (auto t : {TextType::news, TextType::blog, TextType::academic, TextType::unknown}) {
        if (s == to_string(t)) return t;
    }
    return std::nullopt;
}

inline std::size_t count_words(std::string_view text)
{
    return detail::whitespace_pieces(text).size();
}

struct Document {
    std::string id;
    std::string text;
    std::optional<std::string> reference;
    TextType text_type = TextType::unknown;
    std::size_t word_count = 0;

    static Document make(std::string id, std::string text, std::optional<std::string> reference, TextType type)
    {
        Document d{std::move(id), std::move(text), std::move(reference), type, 0};
        d.word_count = count_words(d.text);
        return d;
    }

    bool operator==(const Document&) const = default;
};

// ---------------------------------------------------------------------------
// Noise injection

enum class NoiseOp { char_swap, token_delete, token_duplicate, token_substitute };

inline constexpr std::string_view to_string(NoiseOp op) noexcept
{
    switch (op) {
    case NoiseOp::char_swap: return "char_swap";
    case NoiseOp::token_delete: return "token_delete";
    case NoiseOp::token_duplicate: return "token_duplicate";
    case NoiseOp::token_substitute: return "token_substitute";
    }
    return "";
}

inline std::optional<NoiseOp> parse_noise_op(std::string_view s) noexcept
{
    for (auto op : {NoiseOp::char_swap, NoiseOp::token_delete, NoiseOp::token_duplicate, NoiseOp::token_substitute}) {
        if (s == to_string(op)) return op;
    }
    return std::nullopt;
}

struct NoiseSpec {
    double level = 0.0;
    std::set<NoiseOp> operations{NoiseOp::char_swap, NoiseOp::token_delete, NoiseOp::token_duplicate,
                                 NoiseOp::token_substitute};
    std::uint64_t seed = 0;

    void validate() const
    {
        if (!(level >= 0.0 && level <= 1.0)) {
            throw ValidationError("noise level must lie in [0, 1], got " + std::to_string(level));
        }
        if (level > 0.0 && operations.empty()) {
            throw ValidationError("noise level > 0 requires at least one noise operation");
        }
    }
};

namespace detail {

inline std::string swap_interior(std::string_view token, std::uint64_t draw)
{
    auto cps = decode(token);
    // interior positions are 1 .. size-2; a swap needs two of them
    if (cps.size() < 4) return std::string(token);
    std::size_t pairs = cps.size() - 3;
    std::size_t p = 1 + static_cast<std::size_t>(draw % pairs);
    std::swap(cps[p], cps[p + 1]);
    std::string out;
    out.reserve(token.size());
    for (const auto& cp : cps) out.append(token.substr(cp.offset, cp.length));
    return out;
}

} // namespace detail

/// Corrupts the source text token by token. Token i draws from its own stream
/// keyed on (seed, i), so raising the level only ever adds corrupted positions.
/// `vocabulary` feeds token_substitute; when empty the document's own tokens are used.
inline Document apply_noise(const Document& doc, const NoiseSpec& spec, std::span<const std::string> vocabulary = {})
{
    spec.validate();
    Document out = doc;
    if (spec.level == 0.0) return out;

    const auto pieces = detail::whitespace_pieces(doc.text);
    std::vector<std::string> own_vocab;
    if (vocabulary.empty()) {
        std::set<std::string> uniq;
        for (auto [off, len] : pieces) uniq.emplace(doc.text.substr(off, len));
        own_vocab.assign(uniq.begin(), uniq.end());
        vocabulary = own_vocab;
    }
    const std::vector<NoiseOp> ops(spec.operations.begin(), spec.operations.end());

    std::string text;
    text.reserve(doc.text.size());
    bool first = true;
    auto emit = [&](std::string_view tok, std::size_t sep_begin, std::size_t sep_end) {
        if (first) {
            // keep leading whitespace of the document only if it preceded the first token
            text.append(doc.text, 0, pieces.front().first);
            first = false;
        } else {
            text.append(sep_end > sep_begin ? std::string_view(doc.text).substr(sep_begin, sep_end - sep_begin)
                                            : std::string_view(" "));
        }
        text.append(tok);
    };

    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto [off, len] = pieces[i];
        const std::string_view tok = std::string_view(doc.text).substr(off, len);
        const std::size_t sep_begin = i == 0 ? 0 : pieces[i - 1].first + pieces[i - 1].second;
        const std::size_t sep_end = off;

        detail::Stream rng(detail::mix(spec.seed, i));
        const double u = rng.uniform();
        const std::uint64_t op_draw = rng.next();
        const std::uint64_t arg_draw = rng.next();
        if (u >= spec.level) {
            emit(tok, sep_begin, sep_end);
            continue;
        }
        switch (ops[op_draw % ops.size()]) {
        case NoiseOp::char_swap: emit(detail::swap_interior(tok, arg_draw), sep_begin, sep_end); break;
        case NoiseOp::token_delete: break;
        case NoiseOp::token_duplicate:
            emit(tok, sep_begin, sep_end);
            text.push_back(' ');
            text.append(tok);
            break;
        case NoiseOp::token_substitute:
            emit(vocabulary[arg_draw % vocabulary.size()], sep_begin, sep_end);
            break;
        }
    }
    if (!first && !pieces.empty()) {
        const auto [loff, llen] = pieces.back();
        text.append(doc.text, loff + llen);
    }
    out.text = std::move(text);
    out.word_count = count_words(out.text);
    return out;
}

// ---------------------------------------------------------------------------
// Corpus store

namespace detail {

inline nlohmann::ordered_json to_record(const Document& d)
{
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["text"] = d.text;
    if (d.reference) j["reference"] = *d.reference;
    j["text_type"] = std::string(to_string(d.text_type));
    j["word_count"] = d.word_count;
    return j;
}

inline Document from_record(const nlohmann::json& j)
{
    auto type = parse_text_type(j.at("text_type").get<std::string>());
    if (!type) throw ValidationError("unknown text_type in store record");
    std::optional<std::string> ref;
    if (j.contains("reference") && !j["reference"].is_null()) ref = j["reference"].get<std::string>();
    Document d = Document::make(j.at("id").get<std::string>(), j.at("text").get<std::string>(), std::move(ref), *type);
    if (d.word_count != j.at("word_count").get<std::size_t>()) {
        throw ValidationError("stored word_count does not match text for document '" + d.id + "'");
    }
    return d;
}

inline void write_atomically(const std::filesystem::path& path, std::string_view bytes)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

/// In-memory corpus with an on-disk form of `<root>/corpus.jsonl` plus
/// `<root>/manifest.json`. Documents keep their insertion order.
class CorpusStore {
public:
    static constexpr const char* kDataFile = "corpus.jsonl";
    static constexpr const char* kManifestFile = "manifest.json";

    CorpusStore() = default;

    void add(Document doc)
    {
        if (doc.id.empty()) throw ValidationError("document id must be nonempty");
        if (index_.contains(doc.id)) throw ValidationError("duplicate document id '" + doc.id + "'");
        index_.emplace(doc.id, docs_.size());
        docs_.push_back(std::move(doc));
    }

    std::span<const Document> documents() const noexcept { return docs_; }
    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }

    const Document* find(std::string_view id) const
    {
        auto it = index_.find(std::string(id));
        return it == index_.end() ? nullptr : &docs_[it->second];
    }

    std::vector<const Document*> of_type(TextType t) const
    {
        std::vector<const Document*> out;
        for (const auto& d : docs_) {
            if (d.text_type == t) out.push_back(&d);
        }
        return out;
    }

    /// Sorted distinct whitespace tokens across every document.
    std::vector<std::string> vocabulary() const
    {
        std::set<std::string> uniq;
        for (const auto& d : docs_) {
            for (auto [off, len] : detail::whitespace_pieces(d.text)) uniq.emplace(d.text.substr(off, len));
        }
        return {uniq.begin(), uniq.end()};
    }

    /// Writes (or extends) the on-disk store. Existing records are kept; new ids must not collide.
    void append_to(const std::filesystem::path& root) const
    {
        namespace fs = std::filesystem;
        fs::create_directories(root);
        const auto data_path = root / kDataFile;
        const auto manifest_path = root / kManifestFile;

        nlohmann::ordered_json manifest = {{"format", "sumctl-corpus"}, {"version", 1},
                                           {"documents", nlohmann::ordered_json::object()}};
        std::string data;
        if (fs::exists(manifest_path)) {
            manifest = nlohmann::ordered_json::parse(detail::read_file(manifest_path));
            data = detail::read_file(data_path);
        }
        auto& entries = manifest["documents"];
        for (const auto& d : docs_) {
            if (entries.contains(d.id)) throw ValidationError("document id '" + d.id + "' already in store");
        }
        for (const auto& d : docs_) {
            const std::string line = detail::to_record(d).dump();
            nlohmann::ordered_json e;
            e["text_type"] = std::string(to_string(d.text_type));
            e["offset"] = data.size();
            e["length"] = line.size();
            e["text_bytes"] = d.text.size();
            e["reference_bytes"] = d.reference ? d.reference->size() : 0;
            entries[d.id] = std::move(e);
            data += line;
            data += '\n';
        }
        detail::write_atomically(data_path, data);
        detail::write_atomically(manifest_path, manifest.dump(2) + "\n");
    }

    static CorpusStore load(const std::filesystem::path& root)
    {
        const auto manifest = nlohmann::ordered_json::parse(detail::read_file(root / kManifestFile));
        const std::string data = detail::read_file(root / kDataFile);
        CorpusStore store;
        for (const auto& [id, e] : manifest.at("documents").items()) {
            const auto off = e.at("offset").get<std::size_t>();
            const auto len = e.at("length").get<std::size_t>();
            if (off + len > data.size()) throw ValidationError("manifest entry '" + id + "' points past end of data");
            Document d;
            try {
                d = detail::from_record(nlohmann::json::parse(data.substr(off, len)));
            } catch (const nlohmann::json::exception& ex) {
                throw ValidationError("unparseable record for '" + id + "': " + ex.what());
            }
            if (d.id != id) throw ValidationError("manifest entry '" + id + "' resolves to record '" + d.id + "'");
            store.add(std::move(d));
        }
        return store;
    }

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Reads a CNN/Daily Mail style JSONL file ("article", "highlights", optional "id", "text_type").
/// Any bad line aborts the whole ingest; errors carry the 1-based line number.
inline CorpusStore ingest_jsonl(const std::filesystem::path& path, TextType default_type = TextType::news)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    CorpusStore store;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no + 1) + ": " + what);
    };
    for (; std::getline(in, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            fail("malformed JSON");
        }
        if (!j.is_object()) fail("expected a JSON object");
        if (!j.contains("article") || !j["article"].is_string()) fail("missing string field \"article\"");
        if (!j.contains("highlights") || !j["highlights"].is_string()) fail("missing string field \"highlights\"");
        std::string id = "doc-" + std::to_string(line_no);
        if (j.contains("id")) {
            if (!j["id"].is_string() || j["id"].get<std::string>().empty()) fail("field \"id\" must be a nonempty string");
            id = j["id"].get<std::string>();
        }
        TextType type = default_type;
        if (j.contains("text_type")) {
            auto parsed = j["text_type"].is_string() ? parse_text_type(j["text_type"].get<std::string>()) : std::nullopt;
            if (!parsed) fail("invalid \"text_type\"");
            type = *parsed;
        }
        if (store.find(id)) fail("duplicate id '" + id + "'");
        store.add(Document::make(std::move(id), j["article"].get<std::string>(), j["highlights"].get<std::string>(), type));
    }
    return store;
}

/// One document per `*.txt` file (sorted by name); id is the file stem, no reference.
inline CorpusStore ingest_textdir(const std::filesystem::path& dir, TextType type)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ValidationError(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    CorpusStore store;
    for (const auto& f : files) {
        std::string text = detail::read_file(f);
        if (!detail::is_valid_utf8(text)) throw ValidationError(f.string() + ": not valid UTF-8");
        store.add(Document::make(f.stem().string(), std::move(text), std::nullopt, type));
    }
    return store;
}

/// Loads a store directory, or ingests a `.jsonl` file in memory.
inline CorpusStore open_corpus(const std::filesystem::path& path, TextType default_type = TextType::news)
{
    if (std::filesystem::is_directory(path)) return CorpusStore::load(path);
    return ingest_jsonl(path, default_type);
}

} // namespace sumctl
