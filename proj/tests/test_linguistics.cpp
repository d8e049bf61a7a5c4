#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "conceptir/index.hpp"
#include "conceptir/linguistics.hpp"

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

CollectionIndex fig4_index() {
    return ingest_directory(std::string(CONCEPTIR_DATA_DIR) + "/fixtures/fig4/corpus", {});
}

Role role_of(const ConceptualQuery& cq, const std::string& surface) {
    for (const auto& c : cq.concepts)
        if (c.surface == surface)
            return c.role;
    FAIL("concept not found: " << surface);
    return Role::Unassigned;
}

bool has_pair(const ConceptualQuery& cq, const std::string& head, const std::string& dep,
              const std::string& label) {
    for (const auto& p : cq.pairs)
        if (cq.concepts[static_cast<std::size_t>(p.head)].surface == head &&
            cq.concepts[static_cast<std::size_t>(p.dep)].surface == dep && p.label == label)
            return true;
    return false;
}

}  // namespace

TEST_CASE("ncp detection is leftmost-longest") {
    NcpLexicon lex;
    lex.insert({"new", "york"});
    lex.insert({"new", "york", "city"});
    auto concepts = detect_ncp(segment_concepts("visit new york city soon"), lex);
    REQUIRE(concepts.size() == 3);
    CHECK(concepts[1].surface == "new york city");
    CHECK(concepts[1].is_ncp);
    CHECK(concepts[1].normalized == "new york citi");
    // non-overlapping: a second match starts after the first ends
    auto two = detect_ncp(segment_concepts("new york new york"), lex);
    REQUIRE(two.size() == 2);
    CHECK(two[0].surface == "new york");
    CHECK(two[1].surface == "new york");
}

TEST_CASE("pos tagging heuristics") {
    auto c = pos_tag(segment_concepts("how to repair a car with engine failure"));
    CHECK(c[0].pos == Pos::Function);  // how
    CHECK(c[1].pos == Pos::Function);  // to
    CHECK(c[2].pos == Pos::Verb);      // repair (after "to")
    CHECK(c[3].pos == Pos::Function);  // a
    CHECK(c[4].pos == Pos::Noun);      // car
    CHECK(c[5].pos == Pos::Function);  // with
    auto d = pos_tag(segment_concepts("coping with overcrowded prisons"));
    CHECK(d[0].pos == Pos::Verb);       // coping (-ing)
    CHECK(d[2].pos == Pos::Adjective);  // overcrowded (-ed before a nominal)
    CHECK(d[3].pos == Pos::Noun);
    auto e = pos_tag(segment_concepts("clearly dangerous"));
    CHECK(e[0].pos == Pos::Adverb);
    CHECK(e[1].pos == Pos::Adjective);
}

TEST_CASE("role assignment: coping with overcrowded prisons") {
    auto index = fig4_index();
    auto cq = analyze_query("coping with overcrowded prisons", ncp(), &mini_kb(), &index);
    REQUIRE(cq.concepts.size() == 4);
    CHECK(role_of(cq, "coping") == Role::CoI);
    CHECK(role_of(cq, "with") == Role::SC);
    CHECK(role_of(cq, "overcrowded") == Role::DC);
    CHECK(role_of(cq, "prisons") == Role::CoI);
    CHECK(has_pair(cq, "prisons", "overcrowded", "amod"));
    CHECK(has_pair(cq, "prisons", "coping", "dobj"));
    auto bases = base_pairs(cq);
    CHECK(bases.size() == 2);
}

TEST_CASE("role assignment: how to repair a car with engine failure") {
    auto index = fig4_index();
    auto cq = analyze_query("How to repair a car with engine failure", ncp(), &mini_kb(), &index);
    REQUIRE(cq.concepts.size() == 7);
    CHECK(role_of(cq, "how") == Role::SC);
    CHECK(role_of(cq, "to") == Role::SC);
    CHECK(role_of(cq, "repair") == Role::CoI);
    CHECK(role_of(cq, "a") == Role::SC);
    CHECK(role_of(cq, "car") == Role::CoI);
    CHECK(role_of(cq, "with") == Role::SC);
    CHECK(role_of(cq, "engine failure") == Role::CoI);
    CHECK(cq.concepts[6].is_ncp);
    CHECK(cq.concepts[6].normalized == "engin failur");
    CHECK(has_pair(cq, "car", "repair", "dobj"));
    CHECK(has_pair(cq, "car", "engine failure", "prep"));

    SUBCASE("disambiguation picks the context-supported car sense") {
        const Concept* car = nullptr;
        for (const auto& c : cq.concepts)
            if (c.surface == "car")
                car = &c;
        REQUIRE(car != nullptr);
        REQUIRE(car->sense.has_value());
        CHECK(*car->sense == "car.n.1");
    }
    SUBCASE("holonym axiom between car and the phrase constituent engine") {
        REQUIRE(cq.axioms.size() == 1);
        CHECK(cq.axioms[0].relation == "holonym");
        CHECK(cq.concepts[static_cast<std::size_t>(cq.axioms[0].a)].surface == "car");
        CHECK(cq.concepts[static_cast<std::size_t>(cq.axioms[0].b)].surface == "engine failure");
    }
}

TEST_CASE("light verbs become relational concepts") {
    auto index = fig4_index();
    auto cq = analyze_query("making a deal", ncp(), nullptr, &index);
    CHECK(role_of(cq, "making") == Role::RC);
    CHECK(role_of(cq, "deal") == Role::CoI);
}

TEST_CASE("unassigned roles resolve by inheritance then frequency") {
    CollectionIndex index;
    index.add_document({"D1", {"alpha", "alpha", "beta"}});
    index.finalize();

    auto make = [](std::initializer_list<const char*> words) {
        std::vector<Concept> out;
        for (const char* w : words) {
            Concept c;
            c.surface = w;
            c.normalized = w;
            c.pos = Pos::Noun;
            out.push_back(c);
        }
        return out;
    };

    SUBCASE("frequency: higher collection count becomes the CoI") {
        auto concepts = make({"alpha", "beta"});
        std::vector<ConceptPair> pairs{{0, 1, "dep"}};
        std::vector<std::vector<Role>> cands;
        concepts = assign_roles(pairs, std::move(concepts), &cands);
        CHECK(concepts[0].role == Role::Unassigned);
        resolve_unassigned(concepts, pairs, cands, &index);
        resolve_multiple(concepts, cands);
        CHECK(concepts[0].role == Role::CoI);  // alpha: count 2
        CHECK(concepts[1].role == Role::DC);   // beta: count 1
    }
    SUBCASE("equal counts: both become CoIs") {
        auto concepts = make({"beta", "gamma"});
        index.add_document({"D2", {"gamma"}});
        index.finalize();
        std::vector<ConceptPair> pairs{{0, 1, "dep"}};
        std::vector<std::vector<Role>> cands;
        concepts = assign_roles(pairs, std::move(concepts), &cands);
        resolve_unassigned(concepts, pairs, cands, &index);
        resolve_multiple(concepts, cands);
        CHECK(concepts[0].role == Role::CoI);
        CHECK(concepts[1].role == Role::CoI);
    }
    SUBCASE("inheritance: a role from another pair wins over frequency") {
        auto concepts = make({"alpha", "beta"});
        concepts[1].pos = Pos::Adjective;
        // beta also modifies alpha via amod, so it inherits DC
        std::vector<ConceptPair> pairs{{0, 1, "amod"}, {0, 1, "dep"}};
        std::vector<std::vector<Role>> cands;
        concepts = assign_roles(pairs, std::move(concepts), &cands);
        resolve_unassigned(concepts, pairs, cands, &index);
        resolve_multiple(concepts, cands);
        CHECK(concepts[0].role == Role::CoI);
        CHECK(concepts[1].role == Role::DC);
    }
    SUBCASE("missing index statistics is an error") {
        auto concepts = make({"alpha", "beta"});
        std::vector<ConceptPair> pairs{{0, 1, "dep"}};
        std::vector<std::vector<Role>> cands;
        concepts = assign_roles(pairs, std::move(concepts), &cands);
        CHECK_THROWS(resolve_unassigned(concepts, pairs, cands, nullptr));
    }
}

TEST_CASE("multiple candidate roles keep the most noteworthy") {
    std::vector<Concept> concepts(1);
    concepts[0].surface = "x";
    std::vector<std::vector<Role>> cands{{Role::DC, Role::CoI, Role::RC}};
    resolve_multiple(concepts, cands);
    CHECK(concepts[0].role == Role::CoI);
    CHECK(role_priority(Role::CoI) > role_priority(Role::DC));
    CHECK(role_priority(Role::DC) > role_priority(Role::RC));
    CHECK(role_priority(Role::RC) > role_priority(Role::SC));
}

TEST_CASE("build_conceptual_query rejects unresolved roles") {
    std::vector<Concept> concepts(1);
    concepts[0].surface = "x";
    CHECK_THROWS(build_conceptual_query("x", concepts, {}));
}

TEST_CASE("pre-parsed query ingestion") {
    std::string path = "preparsed_test.tmp";
    {
        std::ofstream out(path);
        out << "Coping\tverb\tCoI\n"
            << "with\tfunc\tSC\n"
            << "overcrowded\tadj\t_\n"
            << "prisons\tnoun\t_\n"
            << "#pair\t3\t2\tamod\n"
            << "#pair\t3\t0\tdobj\n"
            << "\n"
            << "alpha\tnoun\t_\n"
            << "beta\tnoun\t_\n"
            << "#pair\t0\t1\tdep\n";
    }
    auto queries = load_preparsed_queries(path);
    REQUIRE(queries.size() == 2);
    CHECK(queries[0].concepts.size() == 4);
    CHECK(queries[0].concepts[0].surface == "coping");  // lowercased
    CHECK(queries[0].pairs.size() == 2);

    CollectionIndex index;
    index.add_document({"D1", {"alpha", "alpha", "beta"}});
    index.finalize();
    auto cq = analyze_preparsed(queries[0], &mini_kb(), &index);
    CHECK(role_of(cq, "overcrowded") == Role::DC);
    CHECK(role_of(cq, "prisons") == Role::CoI);
    auto cq2 = analyze_preparsed(queries[1], nullptr, &index);
    CHECK(role_of(cq2, "alpha") == Role::CoI);
    CHECK(role_of(cq2, "beta") == Role::DC);

    {
        std::ofstream out(path);
        out << "alpha\tnoun\n";  // missing role column
    }
    CHECK_THROWS_AS(load_preparsed_queries(path), ParseError);
    {
        std::ofstream out(path);
        out << "alpha\tnoun\tCoI\n#pair\t0\t5\tdep\n";  // index out of range
    }
    CHECK_THROWS_AS(load_preparsed_queries(path), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("empty query rejected") {
    CHECK_THROWS(segment_concepts("  !! "));
}
