#pragma once

#include "sumctl/cli.hpp"
#include "sumctl/sumctl.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("sumctl-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) { return sumctl::detail::read_file(p); }

inline const std::filesystem::path& minicorpus_path()
{
    static const std::filesystem::path p = SUMCTL_DEFAULT_CORPUS;
    return p;
}

inline const sumctl::CorpusStore& minicorpus()
{
    static const sumctl::CorpusStore store = sumctl::ingest_jsonl(minicorpus_path());
    return store;
}

/// Graph for a standalone document, weighted against its own frequencies.
inline sumctl::SemanticGraph graph_of(const sumctl::Document& doc, const sumctl::GraphOptions& opts = {})
{
    const std::vector<sumctl::Document> docs{doc};
    const auto freqs = sumctl::DocumentFrequencies::of(docs);
    return sumctl::build_semantic_graph(doc, sumctl::term_weights(doc.text, freqs, sumctl::StopwordList::defaults()), opts);
}

} // namespace testing
