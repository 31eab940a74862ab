#pragma once

#include "sumctl/sumctl.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#ifndef SUMCTL_DEFAULT_CORPUS
#define SUMCTL_DEFAULT_CORPUS "data/minicorpus.jsonl"
#endif

namespace sumctl::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2 };

namespace detail {

struct BackendFlags {
    std::string backend = "surrogate";
    std::string base_url = "http://127.0.0.1:8000/v1";
    std::string model = "default";
    int max_in_flight = 4;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--backend", backend, "surrogate or http")->check(CLI::IsMember({"surrogate", "http"}));
        cmd->add_option("--base-url", base_url, "chat-completions base URL (http backend)");
        cmd->add_option("--model", model, "model name sent to the endpoint (http backend)");
        cmd->add_option("--max-in-flight", max_in_flight, "concurrent requests (http backend)")->check(CLI::PositiveNumber);
    }

    std::unique_ptr<Backend> make() const
    {
        if (backend == "http") {
            HttpOptions o;
            o.base_url = base_url;
            o.model = model;
            o.max_in_flight = max_in_flight;
            return std::make_unique<HttpBackend>(o);
        }
        return std::make_unique<SurrogateBackend>();
    }
};

struct ResourceFlags {
    std::string stopwords;
    std::string templates;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--stopwords", stopwords, "stopword list, one word per line")->check(CLI::ExistingFile);
        cmd->add_option("--templates", templates, "directory of <template>.txt prompt templates")->check(CLI::ExistingDirectory);
    }

    StopwordList stopword_list() const { return stopwords.empty() ? StopwordList() : StopwordList::from_file(stopwords); }
    TemplateSet template_set() const { return templates.empty() ? TemplateSet() : TemplateSet::from_directory(templates); }
};

inline TextType require_type(const std::string& s)
{
    auto t = parse_text_type(s);
    if (!t) throw ValidationError("unknown text type '" + s + "'");
    return *t;
}

inline TemplateId require_template(const std::string& s)
{
    auto t = parse_template_id(s);
    if (!t) throw ValidationError("unknown template '" + s + "'");
    return *t;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

} // namespace detail

/// Entry point of the `sumctl` tool. Exit codes: 0 success, 1 usage or
/// validation error, 2 runtime or backend failure.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"sumctl: prompt-controlled summarization experiments"};
    app.name("sumctl");
    app.set_config("--config", "", "TOML/INI file supplying defaults for any flag");
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    bool verbose = false;
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--verbose", verbose, "log progress to stderr");
    auto log = [&](const std::string& msg) {
        if (verbose) err << "[sumctl] " << msg << "\n";
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "ingest JSONL or a directory of .txt files into a corpus store");
    std::string ingest_jsonl_path, ingest_dir, ingest_type, ingest_store;
    auto* jsonl_opt = ingest->add_option("--jsonl", ingest_jsonl_path, "JSONL file with article/highlights")->check(CLI::ExistingFile);
    auto* dir_opt = ingest->add_option("--textdir", ingest_dir, "directory of *.txt files");
    jsonl_opt->excludes(dir_opt);
    ingest->add_option("--type", ingest_type, "text type for the documents (default: news for JSONL, unknown for text dirs)");
    ingest->add_option("--store", ingest_store, "corpus store directory")->required();

    // summarize
    auto* summarize = app.add_subcommand("summarize", "render a prompt and summarize one document");
    std::string sum_corpus = SUMCTL_DEFAULT_CORPUS, sum_doc, sum_input, sum_input_type = "news";
    std::string sum_template = "concise", sum_style, sum_graph_dump;
    int sum_length = 30, sum_level = 3, sum_max_tokens = 256;
    summarize->add_option("--corpus", sum_corpus, "corpus store directory or JSONL file");
    auto* doc_opt = summarize->add_option("--doc", sum_doc, "document id in the corpus");
    auto* input_opt = summarize->add_option("--input", sum_input, "plain-text file to summarize")->check(CLI::ExistingFile);
    doc_opt->excludes(input_opt);
    summarize->add_option("--input-type", sum_input_type, "text type of --input");
    summarize->add_option("--template", sum_template, "concise, detailed or structured");
    summarize->add_option("--length", sum_length, "prompt token budget");
    summarize->add_option("--level", sum_level, "abstraction level 1..5");
    summarize->add_option("--style", sum_style, "style tag (default: the document's type)");
    summarize->add_option("--max-output-tokens", sum_max_tokens, "generation limit (http backend)");
    summarize->add_option("--graph-dump", sum_graph_dump, "write the semantic graph as JSON");
    detail::BackendFlags sum_backend;
    sum_backend.attach(summarize);
    detail::ResourceFlags sum_res;
    sum_res.attach(summarize);

    // eval
    auto* eval = app.add_subcommand("eval", "score a predicted summary against a reference");
    std::string eval_pred, eval_ref;
    bool eval_json = false;
    eval->add_option("--pred", eval_pred, "predicted summary file")->required()->check(CLI::ExistingFile);
    eval->add_option("--ref", eval_ref, "reference summary file")->required()->check(CLI::ExistingFile);
    eval->add_flag("--json", eval_json, "print JSON instead of key = value lines");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a prompt-length, noise or text-type sweep");
    std::string sw_axis = "prompt_length", sw_grid, sw_corpus = SUMCTL_DEFAULT_CORPUS, sw_out = "sweep-out";
    std::string sw_template = "concise", sw_style, sw_noise_ops = "char_swap,token_delete,token_duplicate,token_substitute";
    std::string sw_lambdas = "0.5,0.3,0.2", sw_reward = "0.5,0.3,0.2";
    int sw_length = 30, sw_level = 3, sw_target = 3, sw_rouge_n = 2;
    double sw_noise = 0.0;
    unsigned sw_workers = 0;
    sweep->add_option("--axis", sw_axis, "prompt_length, noise or text_type")
        ->check(CLI::IsMember({"prompt_length", "noise", "text_type"}));
    sweep->add_option("--grid", sw_grid, "comma-separated grid values (default depends on the axis)");
    sweep->add_option("--corpus", sw_corpus, "corpus store directory or JSONL file");
    sweep->add_option("--out", sw_out, "output directory for records.csv and report.md");
    sweep->add_option("--template", sw_template, "prompt template");
    sweep->add_option("--length", sw_length, "prompt token budget when not swept");
    sweep->add_option("--level", sw_level, "abstraction level rendered into prompts");
    sweep->add_option("--target-level", sw_target, "abstraction level the objective aims for");
    sweep->add_option("--style", sw_style, "style tag (default: each document's type)");
    sweep->add_option("--noise", sw_noise, "noise level when not swept");
    sweep->add_option("--noise-ops", sw_noise_ops, "comma-separated noise operations");
    sweep->add_option("--lambdas", sw_lambdas, "objective weights semantic,abstract,contextual");
    sweep->add_option("--reward-weights", sw_reward, "reward weights rougeL,bleu,ter");
    sweep->add_option("--rouge-n", sw_rouge_n, "headline ROUGE-N order (1 or 2)");
    sweep->add_option("--workers", sw_workers, "worker threads (0: hardware concurrency)");
    detail::BackendFlags sw_backend;
    sw_backend.attach(sweep);
    detail::ResourceFlags sw_res;
    sw_res.attach(sweep);

    // optimize
    auto* optimize = app.add_subcommand("optimize", "learn prompt configurations with an epsilon-greedy bandit");
    std::string opt_corpus = SUMCTL_DEFAULT_CORPUS, opt_out = "optimize-out";
    std::vector<std::string> opt_tasks;
    std::string opt_lengths = "10,20,30,40,50,60", opt_levels = "1,2,3,4,5", opt_templates = "concise,detailed,structured";
    std::size_t opt_episodes = 300;
    double opt_eps_start = 0.3, opt_eps_end = 0.05;
    optimize->add_option("--corpus", opt_corpus, "corpus store directory or JSONL file");
    optimize->add_option("--task", opt_tasks, "task as id:type:lambda:target_level (repeatable)");
    optimize->add_option("--episodes", opt_episodes, "episodes per task")->check(CLI::PositiveNumber);
    optimize->add_option("--lengths", opt_lengths, "prompt budgets in the arm grid");
    optimize->add_option("--levels", opt_levels, "abstraction levels in the arm grid");
    optimize->add_option("--template-grid", opt_templates, "templates in the arm grid");
    optimize->add_option("--eps-start", opt_eps_start, "initial exploration rate");
    optimize->add_option("--eps-end", opt_eps_end, "final exploration rate");
    optimize->add_option("--out", opt_out, "output directory for trace.csv and policy.json");
    detail::BackendFlags opt_backend;
    opt_backend.attach(optimize);
    detail::ResourceFlags opt_res;
    opt_res.attach(optimize);

    // report
    auto* rep = app.add_subcommand("report", "render a Markdown report from a records CSV");
    std::string rep_csv, rep_axis = "prompt_length", rep_out;
    int rep_rouge_n = 2;
    rep->add_option("--csv", rep_csv, "records.csv written by sweep")->required()->check(CLI::ExistingFile);
    rep->add_option("--axis", rep_axis, "axis the records were swept over")
        ->check(CLI::IsMember({"prompt_length", "noise", "text_type"}));
    rep->add_option("--rouge-n", rep_rouge_n, "headline ROUGE-N order (1 or 2)");
    rep->add_option("--out", rep_out, "output Markdown file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kValidation;
    }

    try {
        if (*ingest) {
            if (ingest_jsonl_path.empty() && ingest_dir.empty()) throw ValidationError("ingest needs --jsonl or --textdir");
            CorpusStore store;
            if (!ingest_jsonl_path.empty()) {
                store = ingest_jsonl(ingest_jsonl_path, ingest_type.empty() ? TextType::news : detail::require_type(ingest_type));
            } else {
                store = ingest_textdir(ingest_dir, ingest_type.empty() ? TextType::unknown : detail::require_type(ingest_type));
            }
            store.append_to(ingest_store);
            out << "ingested " << store.size() << " documents into " << ingest_store << "\n";
            return kOk;
        }

        if (*summarize) {
            const auto stopwords = sum_res.stopword_list();
            CorpusStore corpus;
            Document doc;
            if (!sum_input.empty()) {
                doc = Document::make("input", sumctl::detail::read_file(sum_input), std::nullopt,
                                     detail::require_type(sum_input_type));
                if (std::filesystem::exists(sum_corpus)) corpus = open_corpus(sum_corpus);
            } else {
                if (sum_doc.empty()) throw ValidationError("summarize needs --doc or --input");
                corpus = open_corpus(sum_corpus);
                const auto* d = corpus.find(sum_doc);
                if (!d) throw ValidationError("no document '" + sum_doc + "' in " + sum_corpus);
                doc = *d;
            }
            std::vector<Document> df_docs(corpus.documents().begin(), corpus.documents().end());
            if (!corpus.find(doc.id)) df_docs.push_back(doc);
            const auto freqs = DocumentFrequencies::of(df_docs);
            const auto graph = build_semantic_graph(doc, term_weights(doc.text, freqs, stopwords), {}, stopwords);
            if (!sum_graph_dump.empty()) detail::write_text(sum_graph_dump, graph.to_json().dump(2) + "\n");

            PromptConfig pc;
            pc.template_id = detail::require_template(sum_template);
            pc.length_budget = sum_length;
            pc.abstraction_level = sum_level;
            pc.style_tag = sum_style.empty() ? doc.text_type : detail::require_type(sum_style);
            const auto prompt = render_prompt(pc, graph, sum_res.template_set());
            const auto score = score_prompt(prompt, graph, sum_level, {}, sum_length);
            const auto backend = sum_backend.make();
            const auto gen = backend->generate({prompt, doc.text, sum_max_tokens, 0.0}, graph);
            out << "prompt: " << prompt.text << "\n";
            out << "prompt_tokens: " << prompt.token_count << "\n";
            out << "prompt_loss_total: " << sumctl::detail::fixed(score.total) << "\n";
            out << "summary: " << gen.text << "\n";
            if (doc.reference) {
                const auto m = metrics::evaluate_pair(gen.text, *doc.reference);
                out << "rougeL_f1: " << sumctl::detail::fixed(m.rouge_l.f1) << "\n";
            }
            return kOk;
        }

        if (*eval) {
            const auto pred = sumctl::detail::read_file(eval_pred);
            const auto ref = sumctl::detail::read_file(eval_ref);
            const auto m = metrics::evaluate_pair(pred, ref);
            const std::vector<std::pair<std::string, double>> fields = {
                {"rouge1_p", m.rouge_n.at(1).precision}, {"rouge1_r", m.rouge_n.at(1).recall},
                {"rouge1_f1", m.rouge_n.at(1).f1},       {"rouge2_p", m.rouge_n.at(2).precision},
                {"rouge2_r", m.rouge_n.at(2).recall},    {"rouge2_f1", m.rouge_n.at(2).f1},
                {"rougeL_p", m.rouge_l.precision},       {"rougeL_r", m.rouge_l.recall},
                {"rougeL_f1", m.rouge_l.f1},             {"bleu", m.bleu},
                {"ter", m.ter}};
            if (eval_json) {
                nlohmann::ordered_json j;
                for (const auto& [k, v] : fields) j[k] = v;
                out << j.dump(2) << "\n";
            } else {
                for (const auto& [k, v] : fields) out << k << " = " << sumctl::detail::fixed(v) << "\n";
            }
            return kOk;
        }

        if (*sweep) {
            SweepConfig cfg;
            cfg.axis = *parse_axis(sw_axis);
            cfg.grid = sw_grid.empty() ? SweepConfig::default_grid(cfg.axis) : detail::split(sw_grid, ',');
            cfg.seed = seed;
            cfg.corpus = sw_corpus;
            cfg.output = sw_out;
            cfg.backend_choice = sw_backend.backend;
            cfg.workers = sw_workers;
            auto& f = cfg.fixed;
            f.template_id = detail::require_template(sw_template);
            f.prompt_length = sw_length;
            f.abstraction_level = sw_level;
            f.target_abstraction = sw_target;
            if (!sw_style.empty()) f.style = detail::require_type(sw_style);
            f.noise_level = sw_noise;
            f.noise_ops.clear();
            for (const auto& name : detail::split(sw_noise_ops, ',')) {
                if (name.empty()) continue;
                auto op = parse_noise_op(name);
                if (!op) throw ValidationError("unknown noise operation '" + name + "'");
                f.noise_ops.insert(*op);
            }
            const auto lam = detail::split(sw_lambdas, ',');
            const auto rw = detail::split(sw_reward, ',');
            if (lam.size() != 3 || rw.size() != 3) throw ValidationError("--lambdas and --reward-weights take three values");
            f.objective = ObjectiveWeights::normalized(std::stod(lam[0]), std::stod(lam[1]), std::stod(lam[2]));
            f.reward = {std::stod(rw[0]), std::stod(rw[1]), std::stod(rw[2])};
            f.headline_rouge_n = sw_rouge_n;
            cfg.stopwords = sw_res.stopword_list();
            cfg.templates = sw_res.template_set();
            cfg.validate();

            const auto backend = sw_backend.make();
            const auto store = open_corpus(cfg.corpus);
            const auto result = run_sweep(cfg, *backend, store, log);
            if (result.records.empty()) throw GenerationError("every sweep unit failed");
            const std::filesystem::path dir(cfg.output);
            detail::write_text(dir / "records.csv", to_csv(result.records));
            ReportOptions ro;
            ro.axis = cfg.axis;
            ro.headline_rouge_n = cfg.fixed.headline_rouge_n;
            detail::write_text(dir / "report.md", report(aggregate(result.records, cfg.axis), kPublishedBaselines, ro));
            out << "wrote " << result.records.size() << " records to " << (dir / "records.csv").string() << "\n";
            if (!result.skipped.empty()) out << "skipped " << result.skipped.size() << " of " << result.units << " units\n";
            return result.skipped_fraction() > 0.10 ? kRuntime : kOk;
        }

        if (*optimize) {
            std::vector<TaskSpec> tasks;
            if (opt_tasks.empty()) opt_tasks = {"news:news:1:3"};
            for (const auto& spec : opt_tasks) {
                const auto p = detail::split(spec, ':');
                if (p.size() != 4) throw ValidationError("task must look like id:type:lambda:target_level, got '" + spec + "'");
                tasks.push_back({p[0], detail::require_type(p[1]), std::stod(p[2]), std::stoi(p[3])});
            }
            OptimizerOptions o;
            o.grid.templates.clear();
            for (const auto& t : detail::split(opt_templates, ',')) o.grid.templates.push_back(detail::require_template(t));
            o.grid.budgets.clear();
            for (const auto& b : detail::split(opt_lengths, ',')) o.grid.budgets.push_back(std::stoi(b));
            o.grid.levels.clear();
            for (const auto& l : detail::split(opt_levels, ',')) o.grid.levels.push_back(std::stoi(l));
            o.epsilon_start = opt_eps_start;
            o.epsilon_end = opt_eps_end;
            o.templates = opt_res.template_set();
            const auto backend = opt_backend.make();
            const auto corpus = open_corpus(opt_corpus);
            const auto result = run_episodes(corpus, tasks, *backend, opt_episodes, seed, o);

            const std::filesystem::path dir(opt_out);
            detail::write_text(dir / "trace.csv", trace_to_csv(result.trace));
            nlohmann::ordered_json snapshot;
            for (const auto& p : result.policies) snapshot[p.task_id] = p.state.to_json();
            detail::write_text(dir / "policy.json", snapshot.dump(2) + "\n");
            for (const auto& p : result.policies) {
                const auto best = std::max_element(p.state.values.begin(), p.state.values.end()) - p.state.values.begin();
                out << p.task_id << ": best arm " << describe(p.state.arms[static_cast<std::size_t>(best)])
                    << " (value " << sumctl::detail::fixed(p.state.values[static_cast<std::size_t>(best)]) << ")\n";
            }
            out << "L_total = " << sumctl::detail::fixed(multi_task_loss(result.policies, tasks)) << "\n";
            return kOk;
        }

        if (*rep) {
            const auto records = records_from_csv(sumctl::detail::read_file(rep_csv));
            ReportOptions ro;
            ro.axis = *parse_axis(rep_axis);
            ro.headline_rouge_n = rep_rouge_n;
            const auto md = report(aggregate(records, ro.axis), kPublishedBaselines, ro);
            if (rep_out.empty()) {
                out << md;
            } else {
                detail::write_text(rep_out, md);
            }
            return kOk;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::invalid_argument& e) {
        err << "error: invalid number (" << e.what() << ")\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}

} // namespace sumctl::cli
