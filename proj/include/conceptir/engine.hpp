#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "conceptir/config.hpp"
#include "conceptir/eval.hpp"
#include "conceptir/expansion.hpp"
#include "conceptir/ga.hpp"
#include "conceptir/index.hpp"
#include "conceptir/kb.hpp"
#include "conceptir/linguistics.hpp"
#include "conceptir/retrieval.hpp"

namespace conceptir {

struct RunConfig {
    std::string corpus;
    std::string corpus_format = "dir";  // dir | trec
    std::string kb_path;
    std::string ncp_lexicon_path;
    std::string stopword_path;
    std::string ngram_path;  // optional external n-gram counts
    bool stemming = true;
    int window_size = 5;
    double mu = 1000.0;
    int k_stat = 5;
    int k_lex = 5;
    int traversal_depth = 2;
    double common_word_fraction = 0.1;
    Pattern pattern = Pattern::IE1;
    RoleWeights weights;
    std::string weights_path;
    std::uint64_t seed = 42;
    int result_depth = 1000;
    bool sat_over_expanded = true;
    std::string run_tag = "conceptir";
    GAConfig ga;

    static RunConfig from_kv(const KeyValueFile& kv) {
        RunConfig rc;
        rc.corpus = kv.get("corpus");
        rc.corpus_format = kv.get("corpus_format", rc.corpus_format);
        if (rc.corpus_format != "dir" && rc.corpus_format != "trec")
            throw ConfigError("corpus_format must be dir or trec");
        rc.kb_path = kv.get("kb");
        rc.ncp_lexicon_path = kv.get("ncp_lexicon");
        rc.stopword_path = kv.get("stopwords");
        rc.ngram_path = kv.get("ngram_file");
        rc.stemming = kv.get_bool("stemming", rc.stemming);
        rc.window_size = static_cast<int>(kv.get_long("window_size", rc.window_size));
        rc.mu = kv.get_double("mu", rc.mu);
        rc.k_stat = static_cast<int>(kv.get_long("k_stat", rc.k_stat));
        rc.k_lex = static_cast<int>(kv.get_long("k_lex", rc.k_lex));
        rc.traversal_depth = static_cast<int>(kv.get_long("traversal_depth", rc.traversal_depth));
        rc.common_word_fraction = kv.get_double("common_word_fraction", rc.common_word_fraction);
        rc.pattern = pattern_from_name(kv.get("pattern", pattern_name(rc.pattern)));
        rc.weights.coi = kv.get_double("w_coi", rc.weights.coi);
        rc.weights.dc = kv.get_double("w_dc", rc.weights.dc);
        rc.weights.rc = kv.get_double("w_rc", rc.weights.rc);
        rc.weights.ec = kv.get_double("w_ec", rc.weights.ec);
        rc.weights_path = kv.get("weights_file");
        rc.seed = static_cast<std::uint64_t>(kv.get_long("seed", static_cast<long>(rc.seed)));
        rc.result_depth = static_cast<int>(kv.get_long("result_depth", rc.result_depth));
        rc.sat_over_expanded = kv.get_bool("sat_over_expanded", rc.sat_over_expanded);
        rc.run_tag = kv.get("run_tag", rc.run_tag);
        rc.ga.population_size =
            static_cast<int>(kv.get_long("ga_population", rc.ga.population_size));
        rc.ga.max_iterations =
            static_cast<int>(kv.get_long("ga_iterations", rc.ga.max_iterations));
        rc.ga.crossover_rate = kv.get_double("ga_crossover_rate", rc.ga.crossover_rate);
        rc.ga.mutation_rate = kv.get_double("ga_mutation_rate", rc.ga.mutation_rate);
        rc.ga.crossover_events =
            static_cast<int>(kv.get_long("ga_crossover_events", rc.ga.crossover_events));
        rc.ga.mutation_events =
            static_cast<int>(kv.get_long("ga_mutation_events", rc.ga.mutation_events));
        rc.ga.elitism_count = static_cast<int>(kv.get_long("ga_elitism", rc.ga.elitism_count));
        rc.ga.stagnation_limit =
            static_cast<int>(kv.get_long("ga_stagnation", rc.ga.stagnation_limit));
        rc.ga.rng_seed = rc.seed;
        return rc;
    }
};

inline void load_weights_file(const std::string& path, RoleWeights& w) {
    auto kv = KeyValueFile::parse_file(path);
    w.coi = kv.get_double("w_coi", w.coi);
    w.dc = kv.get_double("w_dc", w.dc);
    w.rc = kv.get_double("w_rc", w.rc);
    w.ec = kv.get_double("w_ec", w.ec);
    w.sc = 0.0;
}

// Wires the index, n-gram model, knowledge base and linguistic front-end
// into the index -> analyze -> expand -> search workflow.
class Engine {
public:
    Engine(CollectionIndex index, NGramModel model, KnowledgeBase kb, NcpLexicon ncp,
           RunConfig cfg)
        : index_(std::move(index)),
          model_(std::move(model)),
          kb_(std::move(kb)),
          ncp_(std::move(ncp)),
          cfg_(std::move(cfg)) {
        if (!cfg_.stopword_path.empty())
            stopwords_ = load_stopwords(cfg_.stopword_path);
        else
            stopwords_ = default_stopwords();
        pipeline_.stopwords = &stopwords_;
        pipeline_.stemming = cfg_.stemming;
    }

    static Engine open(const RunConfig& cfg, const std::string& index_path) {
        auto [index, model] = load_index(index_path);
        KnowledgeBase kb;
        if (!cfg.kb_path.empty())
            kb = KnowledgeBase::load(cfg.kb_path);
        NcpLexicon ncp;
        if (!cfg.ncp_lexicon_path.empty())
            ncp = load_ncp_lexicon(cfg.ncp_lexicon_path);
        return Engine(std::move(index), std::move(model), std::move(kb), std::move(ncp), cfg);
    }

    const CollectionIndex& index() const { return index_; }
    const NGramModel& model() const { return model_; }
    const KnowledgeBase& kb() const { return kb_; }
    const PipelineConfig& pipeline() const { return pipeline_; }
    const RunConfig& config() const { return cfg_; }

    ConceptualQuery analyze(const std::string& query) const {
        return analyze_query(query, ncp_, &kb_, &index_, pipeline_);
    }

    ExpansionConfig expansion_config() const {
        ExpansionConfig ec;
        ec.k_stat = cfg_.k_stat;
        ec.k_lex = cfg_.k_lex;
        ec.traversal_depth = cfg_.traversal_depth;
        ec.common_word_fraction = cfg_.common_word_fraction;
        ec.seed = cfg_.seed;
        ec.stopwords = &stopwords_;
        return ec;
    }

    ExpandedQuery expand(const ConceptualQuery& cq, Pattern pattern) const {
        return expand_query(cq, pattern, model_, kb_, expansion_config(), &index_);
    }

    ExpandedQuery expand(const std::string& query) const {
        return expand(analyze(query), cfg_.pattern);
    }

    // Sat is computed over the expanded concept bag by default; the
    // original-bag mode keeps ECs for Imp only.
    QueryBag scoring_bag(const ExpandedQuery& eq) const {
        if (cfg_.sat_over_expanded)
            return make_query_bag(eq.concepts);
        std::vector<Concept> originals;
        for (const auto& c : eq.concepts)
            if (c.role != Role::EC)
                originals.push_back(c);
        return make_query_bag(originals);
    }

    std::vector<ScoredDocument> search_query(const std::string& query,
                                             const RoleWeights& weights) const {
        auto eq = expand(query);
        auto bag = make_query_bag(eq.concepts);
        return conceptir::search(bag, cfg_.result_depth, weights, index_, {cfg_.mu});
    }

    std::vector<ScoredDocument> lm_query(const std::string& query) const {
        auto bag = make_term_bag(normalize(query, pipeline_));
        if (bag.entries.empty())
            return {};
        return conceptir::lm_search(bag, cfg_.result_depth, index_, {cfg_.mu});
    }

    std::vector<ScoredDocument> rm_query(const std::string& query, int k_docs,
                                         int n_terms) const {
        auto terms = normalize(query, pipeline_);
        if (terms.empty())
            return {};
        auto expanded = rm_expand(terms, k_docs, n_terms, index_, {cfg_.mu});
        return conceptir::lm_search(make_term_bag(expanded), cfg_.result_depth, index_,
                                    {cfg_.mu});
    }

private:
    CollectionIndex index_;
    NGramModel model_;
    KnowledgeBase kb_;
    NcpLexicon ncp_;
    RunConfig cfg_;
    std::set<std::string> stopwords_;
    PipelineConfig pipeline_;
};

// TREC run format: `topic_id Q0 doc_id rank score run_tag`, rank from 1,
// score with 6 decimals.
inline std::string format_run(int topic, const std::vector<ScoredDocument>& results,
                              const std::string& tag) {
    std::string out;
    char buf[64];
    int rank = 1;
    for (const auto& sd : results) {
        out += std::to_string(topic);
        out += " Q0 ";
        out += sd.doc_id;
        out.push_back(' ');
        out += std::to_string(rank++);
        std::snprintf(buf, sizeof(buf), " %.6f ", sd.rel);
        out += buf;
        out += tag;
        out.push_back('\n');
    }
    return out;
}

}  // namespace conceptir
