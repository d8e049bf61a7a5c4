// Command-line driver: index -> expand -> search -> evaluate -> tune.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conceptir/engine.hpp"

namespace {

using namespace conceptir;

struct GlobalOpts {
    std::string config_path;
    long seed = -1;
    bool verbose = false;
};

RunConfig load_config(const GlobalOpts& g) {
    KeyValueFile kv;
    if (!g.config_path.empty())
        kv = KeyValueFile::parse_file(g.config_path);
    RunConfig rc = RunConfig::from_kv(kv);
    if (g.seed >= 0) {
        rc.seed = static_cast<std::uint64_t>(g.seed);
        rc.ga.rng_seed = rc.seed;
    }
    if (!rc.weights_path.empty())
        load_weights_file(rc.weights_path, rc.weights);
    return rc;
}

void require_file(const std::string& path, const std::string& what) {
    std::ifstream probe(path);
    if (!probe)
        throw ConfigError(what + " not found: " + path);
}

int cmd_index(const GlobalOpts& g, const std::string& corpus_override,
              const std::string& out_path) {
    RunConfig rc = load_config(g);
    if (!corpus_override.empty())
        rc.corpus = corpus_override;
    if (rc.corpus.empty())
        throw ConfigError("no corpus configured (key 'corpus' or --corpus)");
    PipelineConfig pipeline;
    std::set<std::string> stopwords;
    if (!rc.stopword_path.empty()) {
        stopwords = load_stopwords(rc.stopword_path);
        pipeline.stopwords = &stopwords;
    }
    pipeline.stemming = rc.stemming;
    IngestReport report;
    CollectionIndex index = rc.corpus_format == "trec"
                                ? ingest_trec(rc.corpus, pipeline)
                                : ingest_directory(rc.corpus, pipeline, &report);
    for (const auto& err : report.file_errors)
        std::cerr << "warning: unreadable file skipped: " << err << "\n";
    NGramModel model = rc.ngram_path.empty() ? build_ngram_model(index, rc.window_size)
                                             : load_ngram_file(rc.ngram_path, rc.window_size);
    save_index(index, model, out_path);
    if (g.verbose)
        std::cerr << "indexed " << index.doc_count() << " documents, |C| = "
                  << index.total_tokens() << "\n";
    return 0;
}

int cmd_expand(const GlobalOpts& g, const std::string& index_path, const std::string& query,
               const std::string& topics_path, const std::string& out_path) {
    RunConfig rc = load_config(g);
    require_file(index_path, "index");
    Engine engine = Engine::open(rc, index_path);

    std::vector<std::pair<std::string, std::string>> queries;  // (label, text)
    if (!query.empty())
        queries.emplace_back("query", query);
    if (!topics_path.empty())
        for (const auto& t : parse_topics_file(topics_path))
            queries.emplace_back(std::to_string(t.number), t.title);
    if (queries.empty())
        throw ConfigError("expand needs --query or --topics");

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file)
            throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    for (const auto& [label, text] : queries) {
        auto cq = engine.analyze(text);
        auto eq = engine.expand(cq, rc.pattern);
        *out << "# " << label << "\t" << text << "\n";
        for (const auto& p : base_pairs(cq))
            *out << "# pair\t" << cq.concepts[static_cast<std::size_t>(p.dep)].surface << "\t"
                 << cq.concepts[static_cast<std::size_t>(p.head)].surface << "\t" << p.label
                 << "\n";
        *out << dump_expanded(eq) << "\n";
    }
    return 0;
}

int cmd_search(const GlobalOpts& g, const std::string& index_path, const std::string& topics_path,
               const std::string& out_path, const std::string& mode) {
    RunConfig rc = load_config(g);
    require_file(index_path, "index");
    require_file(topics_path, "topics file");
    Engine engine = Engine::open(rc, index_path);
    auto topics = parse_topics_file(topics_path);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file)
            throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    for (const auto& t : topics) {
        std::vector<ScoredDocument> results;
        if (mode == "lm")
            results = engine.lm_query(t.title);
        else if (mode == "rm")
            results = engine.rm_query(t.title, 10, rc.k_stat);
        else
            results = engine.search_query(t.title, rc.weights);
        if (results.empty())
            std::cerr << "warning: no candidates for topic " << t.number << "\n";
        *out << format_run(t.number, results, rc.run_tag);
    }
    return 0;
}

int cmd_evaluate(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                 std::size_t n_baselines, const std::string& out_path) {
    if (run_paths.empty())
        throw ConfigError("evaluate needs at least one run file");
    require_file(qrels_path, "qrels file");
    std::vector<std::string> warnings;
    Qrels qrels = parse_qrels_file(qrels_path, &warnings);
    std::vector<EvalRun> runs;
    for (const auto& path : run_paths) {
        require_file(path, "run file");
        runs.push_back(parse_run_file(path));
    }
    std::string csv = report(runs, qrels, n_baselines);
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << "\n";
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw std::runtime_error("cannot write " + out_path);
        out << csv;
    }
    return 0;
}

int cmd_tune(const GlobalOpts& g, const std::string& index_path, const std::string& topics_path,
             const std::string& qrels_path, const std::string& weights_out,
             const std::string& report_out) {
    RunConfig rc = load_config(g);
    require_file(index_path, "index");
    require_file(topics_path, "topics file");
    require_file(qrels_path, "qrels file");
    Engine engine = Engine::open(rc, index_path);
    auto topics = parse_topics_file(topics_path);
    Qrels qrels = parse_qrels_file(qrels_path);

    std::vector<std::pair<int, QueryBag>> bags;
    for (const auto& t : topics) {
        auto eq = engine.expand(t.title);
        bags.emplace_back(t.number, make_query_bag(eq.concepts));
    }
    FitnessContext ctx(engine.index(), {rc.mu}, bags, qrels, rc.result_depth);
    GAResult result = evolve(rc.ga, ctx);

    std::ofstream wout(weights_out);
    if (!wout)
        throw std::runtime_error("cannot write " + weights_out);
    wout << format_weights(result.best);
    if (!report_out.empty()) {
        std::ofstream rout(report_out);
        if (!rout)
            throw std::runtime_error("cannot write " + report_out);
        rout << format_tuning_report(result);
    }
    if (g.verbose)
        std::cerr << "tuned MAP = " << result.best_map << " over " << ctx.topic_count()
                  << " topics\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conceptir: role-typed query expansion retrieval engine"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key = value configuration file");
    app.add_option("--seed", g.seed, "random seed override");
    app.add_flag("--verbose", g.verbose, "verbose diagnostics");

    auto* sc_index = app.add_subcommand("index", "build the index artifact");
    std::string corpus_override, index_out = "index.bin";
    sc_index->add_option("--corpus", corpus_override, "corpus path override");
    sc_index->add_option("--out", index_out, "output index file");

    auto* sc_expand = app.add_subcommand("expand", "emit the expanded-query audit dump");
    std::string index_path = "index.bin", query, topics_path, expand_out;
    sc_expand->add_option("--index", index_path, "index file");
    sc_expand->add_option("--query", query, "single query text");
    sc_expand->add_option("--topics", topics_path, "TREC topics file");
    sc_expand->add_option("--out", expand_out, "output file (default stdout)");

    auto* sc_search = app.add_subcommand("search", "produce a TREC run file");
    std::string s_index = "index.bin", s_topics, s_out, s_mode = "full";
    sc_search->add_option("--index", s_index, "index file");
    sc_search->add_option("--topics", s_topics, "TREC topics file")->required();
    sc_search->add_option("--out", s_out, "run file (default stdout)");
    sc_search->add_option("--mode", s_mode, "full | lm | rm");

    auto* sc_eval = app.add_subcommand("evaluate", "score runs against qrels");
    std::vector<std::string> run_paths;
    std::string qrels_path, eval_out;
    std::size_t n_baselines = 1;
    sc_eval->add_option("--run", run_paths, "run file (repeatable; first runs are baselines)");
    sc_eval->add_option("--qrels", qrels_path, "qrels file")->required();
    sc_eval->add_option("--baselines", n_baselines, "number of leading runs treated as baselines");
    sc_eval->add_option("--out", eval_out, "report CSV (default stdout)");

    auto* sc_tune = app.add_subcommand("tune", "evolve role weights");
    std::string t_index = "index.bin", t_topics, t_qrels, t_weights = "weights.txt", t_report;
    sc_tune->add_option("--index", t_index, "index file");
    sc_tune->add_option("--topics", t_topics, "TREC topics file")->required();
    sc_tune->add_option("--qrels", t_qrels, "qrels file")->required();
    sc_tune->add_option("--weights-out", t_weights, "weights file output");
    sc_tune->add_option("--report", t_report, "per-generation tuning report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc_index->parsed())
            return cmd_index(g, corpus_override, index_out);
        if (sc_expand->parsed())
            return cmd_expand(g, index_path, query, topics_path, expand_out);
        if (sc_search->parsed())
            return cmd_search(g, s_index, s_topics, s_out, s_mode);
        if (sc_eval->parsed())
            return cmd_evaluate(run_paths, qrels_path, n_baselines, eval_out);
        if (sc_tune->parsed())
            return cmd_tune(g, t_index, t_topics, t_qrels, t_weights, t_report);
    } catch (const conceptir::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
