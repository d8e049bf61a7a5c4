#include <doctest.h>

#include <set>

#include "conceptir/expansion.hpp"

using namespace conceptir;

#ifndef CONCEPTIR_DATA_DIR
#define CONCEPTIR_DATA_DIR "data"
#endif

namespace {

const KnowledgeBase& mini_kb() {
    static KnowledgeBase kb =
        KnowledgeBase::load(std::string(CONCEPTIR_DATA_DIR) + "/fixtures/mini.kb");
    return kb;
}

const NcpLexicon& ncp() {
    static NcpLexicon lex =
        load_ncp_lexicon(std::string(CONCEPTIR_DATA_DIR) + "/fixtures/ncp.txt");
    return lex;
}

struct Fig4 {
    CollectionIndex index;
    NGramModel model;
    ConceptualQuery cq;
};

Fig4 fig4() {
    Fig4 f;
    f.index = ingest_directory(std::string(CONCEPTIR_DATA_DIR) + "/fixtures/fig4/corpus", {});
    f.model = build_ngram_model(f.index, 5);
    f.cq = analyze_query("coping with overcrowded prisons", ncp(), &mini_kb(), &f.index);
    return f;
}

std::set<std::string> ec_terms(const ExpandedQuery& eq, bool statistical) {
    std::set<std::string> out;
    for (const auto& c : eq.concepts)
        if (c.role == Role::EC && c.relation.empty() == statistical)
            out.insert(c.normalized);
    return out;
}

std::set<std::string> ec_surfaces(const ExpandedQuery& eq, bool statistical) {
    std::set<std::string> out;
    for (const auto& c : eq.concepts)
        if (c.role == Role::EC && c.relation.empty() == statistical)
            out.insert(c.surface);
    return out;
}

}  // namespace

TEST_CASE("statistical pool reproduces the sample collocates") {
    auto f = fig4();
    ExpansionConfig cfg;
    cfg.k_stat = 6;
    cfg.k_lex = 5;
    auto eq = expand_query(f.cq, Pattern::IE1, f.model, mini_kb(), cfg, &f.index);
    CHECK(ec_terms(eq, true) ==
          std::set<std::string>{"state", "year", "jail", "countri", "condit", "problem"});
}

TEST_CASE("synonym pool reproduces the sample lexical candidates") {
    auto f = fig4();
    ExpansionConfig cfg;
    cfg.k_stat = 6;
    cfg.k_lex = 5;
    auto eq = expand_query(f.cq, Pattern::IE1, f.model, mini_kb(), cfg, &f.index);
    CHECK(ec_surfaces(eq, false) ==
          std::set<std::string>{"prison house", "grapple", "deal", "contend", "make out"});
    CHECK(ec_terms(eq, false) ==
          std::set<std::string>{"prison hous", "grappl", "deal", "contend", "make out"});
    for (const auto& c : eq.concepts)
        if (c.role == Role::EC && !c.relation.empty())
            CHECK(c.relation == "synonym");
}

TEST_CASE("common and detrimental words never become candidates") {
    auto f = fig4();
    ExpansionConfig cfg;
    cfg.k_stat = 50;
    cfg.k_lex = 50;
    auto pairs = base_pairs(f.cq);
    auto pool = pool_statistical(f.cq, pairs, f.model, cfg, &f.index);
    for (const auto& ct : pool.entries) {
        CHECK(ct.term != "overcrowd");  // 3 of 13 tokens: above the 10% cutoff
        CHECK(cfg.stopwords->count(ct.term) == 0);
    }
}

TEST_CASE("morphological variants merge by summed frequency") {
    ConceptualQuery cq;
    Concept a, b;
    a.surface = a.normalized = "alpha";
    a.role = Role::CoI;
    b.surface = b.normalized = "beta";
    b.role = Role::DC;
    cq.concepts = {a, b};
    cq.pairs = {{0, 1, "nn"}};

    NGramModel model;
    model.window_size = 5;
    model.windows = {{"alpha beta run", 1}, {"alpha beta runs", 1}, {"alpha beta walk", 1}};
    model.unigram_counts = {{"run", 3}, {"runs", 2}, {"walk", 4}, {"alpha", 1}, {"beta", 1}};
    ExpansionConfig cfg;
    auto pool = pool_statistical(cq, cq.pairs, model, cfg, nullptr);
    REQUIRE(pool.entries.size() == 2);
    CHECK(pool.entries[0].term == "run");
    CHECK(pool.entries[0].score == doctest::Approx(5.0));  // 3 + 2 across variants
    CHECK(pool.entries[1].term == "walk");
    CHECK(pool.entries[1].score == doctest::Approx(4.0));
}

TEST_CASE("stem collisions keep the lexical-semantic copy") {
    CandidateTerm stat_j;
    stat_j.term = "journal";
    stat_j.source = CandidateSource::Statistical;
    CandidateTerm lex_j;
    lex_j.term = "journal";
    lex_j.source = CandidateSource::LexicalSemantic;
    lex_j.relation = "hyponym";
    auto [stat_out, lex_out] = dedup({stat_j}, {lex_j});
    CHECK(stat_out.empty());
    REQUIRE(lex_out.size() == 1);
    CHECK(lex_out[0].relation == "hyponym");

    // "books" and "book" collide after stemming
    CandidateTerm stat_b;
    stat_b.term = detail::stem_key("books");
    CandidateTerm lex_b;
    lex_b.term = detail::stem_key("book");
    lex_b.relation = "hyponym";
    CHECK(stat_b.term == lex_b.term);
    auto [s2, l2] = dedup({stat_b}, {lex_b});
    CHECK(s2.empty());
    CHECK(l2.size() == 1);
}

TEST_CASE("apply_pattern invariants") {
    auto f = fig4();
    ExpansionConfig cfg;
    auto pairs = base_pairs(f.cq);
    auto stat = pool_statistical(f.cq, pairs, f.model, cfg, &f.index);
    auto lex = pool_lexical(f.cq, mini_kb(), "synonym", cfg, &f.index);

    auto eq = apply_pattern(f.cq, Pattern::IE1, stat, lex, 3, 2);
    // originals preserved in order, roles intact
    REQUIRE(eq.concepts.size() >= f.cq.concepts.size());
    for (std::size_t i = 0; i < f.cq.concepts.size(); ++i) {
        CHECK(eq.concepts[i].normalized == f.cq.concepts[i].normalized);
        CHECK(eq.concepts[i].role == f.cq.concepts[i].role);
    }
    // every appended concept is an EC; no stem duplicates anywhere
    std::set<std::string> keys;
    for (const auto& c : eq.concepts) {
        CHECK(keys.insert(detail::stem_key(c.normalized)).second);
        if (keys.size() > f.cq.concepts.size())
            CHECK(c.role == Role::EC);
    }
    // thresholds respected
    int n_stat = 0, n_lex = 0;
    for (const auto& c : eq.concepts)
        if (c.role == Role::EC)
            (c.relation.empty() ? n_stat : n_lex)++;
    CHECK(n_stat <= 3);
    CHECK(n_lex <= 2);

    CHECK_THROWS_AS(apply_pattern(f.cq, Pattern::IE1, stat, lex, -1, 2), ConfigError);

    auto none = apply_pattern(f.cq, Pattern::None, stat, lex, 3, 2);
    CHECK(none.concepts.size() == f.cq.concepts.size());
}

TEST_CASE("selection is monotone in k") {
    auto f = fig4();
    ExpansionConfig cfg;
    auto run = [&](int k) {
        ExpansionConfig c = cfg;
        c.k_stat = k;
        c.k_lex = 0;
        auto eq = expand_query(f.cq, Pattern::IE1, f.model, mini_kb(), c, &f.index);
        std::vector<std::string> terms;
        for (const auto& x : eq.concepts)
            if (x.role == Role::EC)
                terms.push_back(x.normalized);
        return terms;
    };
    auto k2 = run(2), k4 = run(4), k6 = run(6);
    REQUIRE(k2.size() == 2);
    REQUIRE(k4.size() == 4);
    for (std::size_t i = 0; i < k2.size(); ++i)
        CHECK(k2[i] == k4[i]);
    for (std::size_t i = 0; i < k4.size(); ++i)
        CHECK(k4[i] == k6[i]);
}

TEST_CASE("expansion is deterministic under a fixed seed") {
    auto f = fig4();
    ExpansionConfig cfg;
    cfg.seed = 7;
    auto a = expand_query(f.cq, Pattern::IE1, f.model, mini_kb(), cfg, &f.index);
    auto b = expand_query(f.cq, Pattern::IE1, f.model, mini_kb(), cfg, &f.index);
    CHECK(dump_expanded(a) == dump_expanded(b));
    cfg.seed = 8;
    auto c = expand_query(f.cq, Pattern::IE1, f.model, mini_kb(), cfg, &f.index);
    CHECK(c.concepts.size() == a.concepts.size());  // same pool, maybe different tie order
}

TEST_CASE("patterns select their lexical relation") {
    auto f = fig4();
    auto index = ingest_directory(std::string(CONCEPTIR_DATA_DIR) + "/fixtures/fig4/corpus", {});
    auto cq = analyze_query("How to repair a car with engine failure", ncp(), &mini_kb(), &index);
    ExpansionConfig cfg;
    cfg.k_stat = 0;
    cfg.k_lex = 10;

    auto model = build_ngram_model(index, 5);
    auto ie2 = expand_query(cq, Pattern::IE2, model, mini_kb(), cfg, &index);
    auto terms2 = ec_terms(ie2, false);
    CHECK(terms2.count("vehicl") == 1);
    CHECK(terms2.count("convey") == 1);  // depth-2 traversal
    for (const auto& c : ie2.concepts)
        if (c.role == Role::EC)
            CHECK(c.relation == "hypernym");

    auto ie4 = expand_query(cq, Pattern::IE4, model, mini_kb(), cfg, &index);
    auto terms4 = ec_terms(ie4, false);
    CHECK(terms4.count("truck") == 1);
    CHECK(terms4.count("lorri") == 1);

    auto ie3 = expand_query(cq, Pattern::IE3, model, mini_kb(), cfg, &index);
    for (const auto& c : ie3.concepts)
        if (c.role == Role::EC)
            CHECK(c.relation == "hyponym");

    CHECK(pattern_relation(Pattern::IE1) == "synonym");
    CHECK(pattern_relation(Pattern::IE2) == "hypernym");
    CHECK(pattern_relation(Pattern::IE3) == "hyponym");
    CHECK(pattern_relation(Pattern::IE4) == "coordinate");
    CHECK(pattern_from_name("IE3") == Pattern::IE3);
    CHECK_THROWS_AS(pattern_from_name("IE9"), ConfigError);
}

TEST_CASE("verbs receive synonym expansion only") {
    auto index = ingest_directory(std::string(CONCEPTIR_DATA_DIR) + "/fixtures/fig4/corpus", {});
    auto cq = analyze_query("coping with overcrowded prisons", ncp(), &mini_kb(), &index);
    ExpansionConfig cfg;
    // hypernym pattern: cope (verb) must contribute nothing, and prison has
    // no hypernyms in the sample KB, so the lexical pool is empty
    auto pool = pool_lexical(cq, mini_kb(), "hypernym", cfg, &index);
    CHECK(pool.entries.empty());
    auto syn = pool_lexical(cq, mini_kb(), "synonym", cfg, &index);
    bool has_grapple = false;
    for (const auto& ct : syn.entries)
        has_grapple |= ct.display == "grapple";
    CHECK(has_grapple);
    CHECK_THROWS(pool_lexical(cq, mini_kb(), "antonym", cfg, &index));
}

TEST_CASE("dump format") {
    ConceptualQuery cq;
    Concept c;
    c.surface = c.normalized = "prison";
    c.role = Role::CoI;
    cq.concepts = {c};
    ExpandedQuery eq;
    eq.concepts = cq.concepts;
    Concept ec;
    ec.normalized = "jail";
    ec.role = Role::EC;
    ec.score = 1.5;
    eq.concepts.push_back(ec);
    CHECK(dump_expanded(eq) == "prison\tCoI\t-\t0.000000\njail\tEC\t-\t1.500000\n");
}
