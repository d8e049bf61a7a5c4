#pragma once

#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conceptir/index.hpp"
#include "conceptir/kb.hpp"
#include "conceptir/text.hpp"

namespace conceptir {

enum class Role { Unassigned, CoI, DC, RC, SC, EC };

inline std::string role_name(Role r) {
    switch (r) {
    case Role::CoI: return "CoI";
    case Role::DC: return "DC";
    case Role::RC: return "RC";
    case Role::SC: return "SC";
    case Role::EC: return "EC";
    case Role::Unassigned: return "_";
    }
    return "_";
}

inline Role role_from_name(const std::string& s) {
    if (s == "CoI" || s == "coi") return Role::CoI;
    if (s == "DC" || s == "dc") return Role::DC;
    if (s == "RC" || s == "rc") return Role::RC;
    if (s == "SC" || s == "sc") return Role::SC;
    if (s == "EC" || s == "ec") return Role::EC;
    if (s == "_") return Role::Unassigned;
    throw ParseError("unknown role: " + s);
}

// Priority used when one concept collects several candidate roles: the
// more noteworthy role is kept.
inline int role_priority(Role r) {
    switch (r) {
    case Role::CoI: return 4;
    case Role::DC: return 3;
    case Role::RC: return 2;
    case Role::SC: return 1;
    default: return 0;
    }
}

enum class Pos { Noun, Verb, Adjective, Adverb, Function };

inline std::string pos_name(Pos p) {
    switch (p) {
    case Pos::Noun: return "noun";
    case Pos::Verb: return "verb";
    case Pos::Adjective: return "adj";
    case Pos::Adverb: return "adv";
    case Pos::Function: return "func";
    }
    return "noun";
}

inline Pos pos_from_name(const std::string& s) {
    if (s == "noun" || s == "n") return Pos::Noun;
    if (s == "verb" || s == "v") return Pos::Verb;
    if (s == "adj" || s == "a") return Pos::Adjective;
    if (s == "adv" || s == "r") return Pos::Adverb;
    if (s == "func" || s == "f") return Pos::Function;
    throw ParseError("unknown pos: " + s);
}

inline WordClass pos_to_word_class(Pos p) {
    switch (p) {
    case Pos::Verb: return WordClass::Verb;
    case Pos::Adjective: return WordClass::Adjective;
    case Pos::Adverb: return WordClass::Adverb;
    default: return WordClass::Noun;
    }
}

struct Concept {
    std::string surface;     // original text span, lowercased
    std::string normalized;  // stemmed form (stems joined by spaces for NCPs)
    Pos pos = Pos::Noun;
    Role role = Role::Unassigned;
    bool is_ncp = false;
    std::optional<std::string> sense;  // synset id, filled by disambiguation
    // EC bookkeeping (empty for original concepts)
    std::string relation;
    double score = 0.0;
};

struct ConceptPair {
    int head = 0;  // index into the concept list
    int dep = 0;
    std::string label;  // amod | nn | dobj | prep | dep
};

struct Axiom {
    std::string relation;  // e.g. holonym
    int a = 0;             // concept indices: relation(a, b)
    int b = 0;
};

struct ConceptualQuery {
    std::string original;
    std::vector<Concept> concepts;
    std::vector<ConceptPair> pairs;
    std::vector<Axiom> axioms;
};

// ---------------------------------------------------------------------------
// NCP lexicon: one lowercase phrase per line.

using NcpLexicon = std::set<std::vector<std::string>>;

inline NcpLexicon load_ncp_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open NCP lexicon: " + path);
    NcpLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
        auto words = tokenize(line);
        if (words.size() >= 2)
            lex.insert(words);
    }
    return lex;
}

// ---------------------------------------------------------------------------
// Operations

inline std::vector<Concept> segment_concepts(const std::string& query,
                                             const PipelineConfig& cfg = {}) {
    auto tokens = tokenize(query);
    if (tokens.empty())
        throw std::runtime_error("empty query");
    std::vector<Concept> out;
    for (const auto& tok : tokens) {
        Concept c;
        c.surface = tok;
        c.normalized = cfg.stemming ? porter_stem(tok) : tok;
        out.push_back(std::move(c));
    }
    return out;
}

// Merges maximal-length lexicon matches into single concepts,
// leftmost-longest wins, matches never overlap.
inline std::vector<Concept> detect_ncp(const std::vector<Concept>& concepts,
                                       const NcpLexicon& lexicon,
                                       const PipelineConfig& cfg = {}) {
    std::size_t max_len = 0;
    for (const auto& phrase : lexicon)
        max_len = std::max(max_len, phrase.size());
    std::vector<Concept> out;
    std::size_t i = 0;
    while (i < concepts.size()) {
        std::size_t best = 0;
        for (std::size_t len = std::min(max_len, concepts.size() - i); len >= 2; --len) {
            std::vector<std::string> span;
            for (std::size_t j = 0; j < len; ++j)
                span.push_back(concepts[i + j].surface);
            if (lexicon.count(span)) {
                best = len;
                break;
            }
        }
        if (best >= 2) {
            Concept merged;
            for (std::size_t j = 0; j < best; ++j) {
                if (j) merged.surface.push_back(' ');
                merged.surface += concepts[i + j].surface;
            }
            merged.normalized = normalize_phrase(merged.surface, cfg);
            merged.is_ncp = true;
            merged.pos = Pos::Noun;
            out.push_back(std::move(merged));
            i += best;
        } else {
            out.push_back(concepts[i]);
            ++i;
        }
    }
    return out;
}

namespace detail {

inline const std::set<std::string>& closed_class_words() {
    // determiners, prepositions, conjunctions, pronouns, auxiliaries, wh-words
    static const std::set<std::string> words = {
        "a",    "an",    "the",   "this",  "that",  "these", "those", "and",  "or",
        "but",  "nor",   "so",    "yet",   "of",    "in",    "on",    "at",   "by",
        "for",  "with",  "about", "against","between","into", "through","during",
        "before","after", "above", "below", "from",  "up",    "down",  "out",  "off",
        "over", "under",  "to",    "as",    "is",    "are",   "was",   "were", "be",
        "been", "being",  "am",    "do",    "does",  "did",   "have",  "has",  "had",
        "will", "would",  "shall", "should","may",   "might", "must",  "can",  "could",
        "i",    "you",   "he",    "she",   "it",    "we",    "they",  "them", "their",
        "his",  "her",   "its",   "our",   "your",  "my",    "who",   "whom", "whose",
        "which","what",  "when",  "where", "why",   "how",   "not",   "no",   "any",
        "some", "each",  "every", "all",   "both",  "either","neither","than", "via",
        "per",  "upon",  "if",    "while", "because","until",
    };
    return words;
}

inline const std::set<std::string>& prepositions() {
    static const std::set<std::string> words = {
        "of", "in", "on", "at", "by", "for", "with", "about", "against", "between",
        "into", "through", "during", "before", "after", "above", "below", "from",
        "over", "under", "to", "via", "per", "upon",
    };
    return words;
}

// Copulas and light verbs: connective verbs carrying no standalone lookup
// value. A dobj pair headed by one of these makes the verb an RC.
inline const std::set<std::string>& light_verbs() {
    static const std::set<std::string> words = {
        "be", "is", "are", "was", "were", "being", "get", "gets", "got", "getting",
        "make", "makes", "made", "making", "take", "takes", "took", "taking",
        "give", "gives", "gave", "giving", "have", "has", "had", "having",
        "become", "becomes", "became", "becoming", "seem", "seems", "seemed",
    };
    return words;
}

inline bool ends_with(const std::string& s, const char* suffix) {
    std::size_t n = std::strlen(suffix);
    return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

}  // namespace detail

// Closed-class lexicon plus suffix heuristics, adequate for short
// keyword/title queries. NCPs are nouns. Unknown words default to noun.
inline std::vector<Concept> pos_tag(std::vector<Concept> concepts) {
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        Concept& c = concepts[i];
        if (c.is_ncp) {
            c.pos = Pos::Noun;
            continue;
        }
        const std::string& w = c.surface;
        if (detail::closed_class_words().count(w)) {
            c.pos = Pos::Function;
            continue;
        }
        bool after_to = i > 0 && concepts[i - 1].surface == "to";
        if (after_to) {
            c.pos = Pos::Verb;
            continue;
        }
        if (w.size() > 4 && detail::ends_with(w, "ing")) {
            c.pos = Pos::Verb;
            continue;
        }
        if (w.size() > 2 && detail::ends_with(w, "ly")) {
            c.pos = Pos::Adverb;
            continue;
        }
        if (w.size() > 3 && detail::ends_with(w, "ed")) {
            // participle before a nominal reads as a modifier
            bool before_nominal = i + 1 < concepts.size() &&
                                  !detail::closed_class_words().count(concepts[i + 1].surface);
            c.pos = before_nominal ? Pos::Adjective : Pos::Verb;
            continue;
        }
        if (w.size() > 4 && (detail::ends_with(w, "ous") || detail::ends_with(w, "ful") ||
                             detail::ends_with(w, "ive") || detail::ends_with(w, "less") ||
                             detail::ends_with(w, "able") || detail::ends_with(w, "ible"))) {
            c.pos = Pos::Adjective;
            continue;
        }
        c.pos = Pos::Noun;
    }
    return concepts;
}

// Rule table: adjective -> following noun (amod); adjacent noun-noun
// compound (nn); verb -> next noun across function words and modifiers
// (dobj); noun -> noun across a preposition (prep).
inline std::vector<ConceptPair> extract_relation_pairs(const std::vector<Concept>& concepts) {
    std::vector<ConceptPair> pairs;
    auto add = [&](int head, int dep, const std::string& label) {
        if (head == dep)
            return;
        for (const auto& p : pairs)
            if (p.head == head && p.dep == dep && p.label == label)
                return;
        pairs.push_back({head, dep, label});
    };
    const int n = static_cast<int>(concepts.size());
    for (int i = 0; i < n; ++i) {
        switch (concepts[i].pos) {
        case Pos::Adjective: {
            for (int j = i + 1; j < n; ++j) {
                if (concepts[j].pos == Pos::Noun) {
                    add(j, i, "amod");
                    break;
                }
                if (concepts[j].pos != Pos::Adjective && concepts[j].pos != Pos::Adverb)
                    break;
            }
            break;
        }
        case Pos::Noun: {
            if (i + 1 < n && concepts[i + 1].pos == Pos::Noun)
                add(i + 1, i, "nn");
            // prep link: noun ... (function words incl. one preposition) ... noun
            bool saw_prep = false;
            for (int j = i + 1; j < n; ++j) {
                if (concepts[j].pos == Pos::Function) {
                    if (detail::prepositions().count(concepts[j].surface))
                        saw_prep = true;
                    continue;
                }
                if (concepts[j].pos == Pos::Noun && saw_prep)
                    add(i, j, "prep");
                break;
            }
            break;
        }
        case Pos::Verb: {
            for (int j = i + 1; j < n; ++j) {
                if (concepts[j].pos == Pos::Noun) {
                    add(j, i, "dobj");
                    break;
                }
                if (concepts[j].pos == Pos::Verb)
                    break;
            }
            break;
        }
        default:
            break;
        }
    }
    return pairs;
}

namespace detail {

inline void offer_role(std::vector<std::vector<Role>>& candidates, int idx, Role role) {
    candidates[static_cast<std::size_t>(idx)].push_back(role);
}

}  // namespace detail

// Gathers per-concept candidate roles from the pair rule table, then the
// defaults: function words -> SC, uncovered nouns/verbs -> CoI, uncovered
// modifiers -> DC.
inline std::vector<Concept> assign_roles(const std::vector<ConceptPair>& pairs,
                                         std::vector<Concept> concepts,
                                         std::vector<std::vector<Role>>* candidates_out = nullptr) {
    std::vector<std::vector<Role>> candidates(concepts.size());
    for (const auto& p : pairs) {
        if (p.label == "amod" || p.label == "nn") {
            detail::offer_role(candidates, p.head, Role::CoI);
            detail::offer_role(candidates, p.dep, Role::DC);
        } else if (p.label == "dobj") {
            detail::offer_role(candidates, p.head, Role::CoI);
            bool light = detail::light_verbs().count(concepts[p.dep].surface) > 0;
            detail::offer_role(candidates, p.dep, light ? Role::RC : Role::CoI);
        } else if (p.label == "prep") {
            detail::offer_role(candidates, p.head, Role::CoI);
            detail::offer_role(candidates, p.dep, Role::CoI);
        }
        // "dep" (generic) pairs offer nothing; resolve_unassigned handles them
    }
    std::vector<bool> in_pair(concepts.size(), false);
    for (const auto& p : pairs) {
        in_pair[static_cast<std::size_t>(p.head)] = true;
        in_pair[static_cast<std::size_t>(p.dep)] = true;
    }
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        if (!candidates[i].empty() || in_pair[i])
            continue;
        switch (concepts[i].pos) {
        case Pos::Function:
            candidates[i].push_back(Role::SC);
            break;
        case Pos::Noun:
        case Pos::Verb:
            candidates[i].push_back(Role::CoI);
            break;
        case Pos::Adjective:
        case Pos::Adverb:
            candidates[i].push_back(Role::DC);
            break;
        }
    }
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        if (concepts[i].pos == Pos::Function) {
            candidates[i] = {Role::SC};  // function words always end as SC
        }
        if (candidates[i].size() == 1)
            concepts[i].role = candidates[i].front();
    }
    if (candidates_out)
        *candidates_out = std::move(candidates);
    return concepts;
}

// Inheritance first: a role assigned to the concept elsewhere propagates.
// Otherwise frequency: the concept with the larger collection count is the
// CoI and the other the DC; equal counts -> both CoIs.
inline void resolve_unassigned(std::vector<Concept>& concepts,
                               const std::vector<ConceptPair>& pairs,
                               std::vector<std::vector<Role>>& candidates,
                               const CollectionIndex* index) {
    for (const auto& p : pairs) {
        if (p.label != "dep")
            continue;
        auto& head_cands = candidates[static_cast<std::size_t>(p.head)];
        auto& dep_cands = candidates[static_cast<std::size_t>(p.dep)];
        // inheritance: a role gathered from any other pair already sits in
        // the candidate list, so only truly empty concepts fall through to
        // the frequency rule
        bool head_open = head_cands.empty();
        bool dep_open = dep_cands.empty();
        if (!head_open && !dep_open)
            continue;
        {
            if (!index)
                throw std::runtime_error(
                    "collection statistics required to resolve unassigned roles");
            long nh = index->collection_count(concepts[p.head].normalized);
            long nd = index->collection_count(concepts[p.dep].normalized);
            if (nh > nd) {
                if (head_open) head_cands.push_back(Role::CoI);
                if (dep_open) dep_cands.push_back(Role::DC);
            } else if (nd > nh) {
                if (dep_open) dep_cands.push_back(Role::CoI);
                if (head_open) head_cands.push_back(Role::DC);
            } else {
                if (head_open) head_cands.push_back(Role::CoI);
                if (dep_open) dep_cands.push_back(Role::CoI);
            }
        }
    }
}

// Keeps the single most noteworthy role: CoI > DC > RC > SC.
inline void resolve_multiple(std::vector<Concept>& concepts,
                             const std::vector<std::vector<Role>>& candidates) {
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        Role best = Role::Unassigned;
        for (Role r : candidates[i])
            if (role_priority(r) > role_priority(best))
                best = r;
        if (best != Role::Unassigned)
            concepts[i].role = best;
    }
}

inline ConceptualQuery build_conceptual_query(const std::string& original,
                                              std::vector<Concept> concepts,
                                              std::vector<ConceptPair> pairs,
                                              std::vector<Axiom> axioms = {}) {
    for (const auto& c : concepts)
        if (c.role == Role::Unassigned)
            throw std::runtime_error("unresolved role for concept: " + c.surface);
    ConceptualQuery cq;
    cq.original = original;
    cq.concepts = std::move(concepts);
    cq.pairs = std::move(pairs);
    cq.axioms = std::move(axioms);
    return cq;
}

// ---------------------------------------------------------------------------
// Disambiguation and axiom derivation over the conceptual query.

namespace detail {

// KB lookup terms for a concept: lowercase surface first, stem fallback.
inline std::vector<std::string> lookup_terms(const Concept& c) {
    std::vector<std::string> out{c.surface};
    if (c.normalized != c.surface)
        out.push_back(c.normalized);
    return out;
}

}  // namespace detail

inline const Synset* concept_sense(const KnowledgeBase& kb, const Concept& c) {
    return c.sense ? kb.synset(*c.sense) : nullptr;
}

// Assigns a sense to every CoI/DC concept found in the KB, using the other
// CoI/DC concepts as disambiguation context.
inline void disambiguate_query(ConceptualQuery& cq, const KnowledgeBase& kb) {
    std::vector<int> targets;
    for (std::size_t i = 0; i < cq.concepts.size(); ++i)
        if (cq.concepts[i].role == Role::CoI || cq.concepts[i].role == Role::DC)
            targets.push_back(static_cast<int>(i));
    for (int i : targets) {
        Concept& c = cq.concepts[static_cast<std::size_t>(i)];
        std::vector<std::string> context;
        for (int j : targets)
            if (j != i)
                context.push_back(cq.concepts[static_cast<std::size_t>(j)].surface);
        WordClass wc = pos_to_word_class(c.pos);
        for (const auto& term : detail::lookup_terms(c)) {
            auto sense = kb.disambiguate(term, wc, context);
            if (sense) {
                c.sense = sense->synset_id;
                break;
            }
        }
    }
}

// Derives semantic axioms between query concepts, e.g. holonymy. NCP
// constituent words participate so a part-whole link to a phrase head is
// still discovered.
inline std::vector<Axiom> derive_axioms(const ConceptualQuery& cq, const KnowledgeBase& kb) {
    std::vector<Axiom> axioms;
    auto senses_of = [&](const Concept& c) {
        std::vector<const Synset*> out;
        if (const Synset* s = concept_sense(kb, c))
            out.push_back(s);
        if (c.is_ncp)
            for (const auto& word : tokenize(c.surface))
                for (const Synset* s : kb.synsets_any_pos(word))
                    out.push_back(s);
        return out;
    };
    const int n = static_cast<int>(cq.concepts.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            for (const Synset* si : senses_of(cq.concepts[i]))
                for (const Synset* sj : senses_of(cq.concepts[j]))
                    for (const auto& e : si->edges)
                        if (e.relation == "holonym" && e.target == sj->id)
                            axioms.push_back({"holonym", j, i});  // sj is a holonym of si
        }
    }
    // dedup
    std::vector<Axiom> unique;
    for (const auto& ax : axioms) {
        bool seen = false;
        for (const auto& u : unique)
            if (u.relation == ax.relation && u.a == ax.a && u.b == ax.b)
                seen = true;
        if (!seen)
            unique.push_back(ax);
    }
    return unique;
}

// Full linguistic pipeline: raw query -> conceptual representation.
inline ConceptualQuery analyze_query(const std::string& query, const NcpLexicon& ncp_lexicon,
                                     const KnowledgeBase* kb, const CollectionIndex* index,
                                     const PipelineConfig& cfg = {}) {
    auto concepts = segment_concepts(query, cfg);
    concepts = detect_ncp(concepts, ncp_lexicon, cfg);
    concepts = pos_tag(std::move(concepts));
    auto pairs = extract_relation_pairs(concepts);
    std::vector<std::vector<Role>> candidates;
    concepts = assign_roles(pairs, std::move(concepts), &candidates);
    resolve_unassigned(concepts, pairs, candidates, index);
    resolve_multiple(concepts, candidates);
    auto cq = build_conceptual_query(query, std::move(concepts), std::move(pairs));
    if (kb) {
        disambiguate_query(cq, *kb);
        cq.axioms = derive_axioms(cq, *kb);
    }
    return cq;
}

// Base pairs handed to expansion: pairs whose endpoints are both CoI/DC.
inline std::vector<ConceptPair> base_pairs(const ConceptualQuery& cq) {
    std::vector<ConceptPair> out;
    for (const auto& p : cq.pairs) {
        Role rh = cq.concepts[static_cast<std::size_t>(p.head)].role;
        Role rd = cq.concepts[static_cast<std::size_t>(p.dep)].role;
        auto ok = [](Role r) { return r == Role::CoI || r == Role::DC; };
        if (ok(rh) && ok(rd))
            out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pre-parsed query ingestion: one query per blank-line-separated block,
// `token<TAB>POS<TAB>role-or-_` lines plus `#pair<TAB>head<TAB>dep<TAB>label`.

struct PreParsedQuery {
    std::vector<Concept> concepts;
    std::vector<ConceptPair> pairs;
};

inline std::vector<PreParsedQuery> load_preparsed_queries(const std::string& path,
                                                          const PipelineConfig& cfg = {}) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open pre-parsed query file: " + path);
    std::vector<PreParsedQuery> out;
    PreParsedQuery cur;
    std::string line;
    std::size_t lineno = 0;
    auto flush = [&]() {
        if (!cur.concepts.empty()) {
            out.push_back(std::move(cur));
            cur = {};
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields[0] == "#pair") {
            if (fields.size() != 4)
                throw ParseError("pre-parsed line " + std::to_string(lineno) + ": malformed pair");
            ConceptPair p;
            p.head = std::stoi(fields[1]);
            p.dep = std::stoi(fields[2]);
            p.label = fields[3];
            if (p.head < 0 || p.dep < 0 ||
                p.head >= static_cast<int>(cur.concepts.size()) ||
                p.dep >= static_cast<int>(cur.concepts.size()))
                throw ParseError("pre-parsed line " + std::to_string(lineno) +
                                 ": pair index out of range");
            cur.pairs.push_back(p);
        } else {
            if (fields.size() != 3)
                throw ParseError("pre-parsed line " + std::to_string(lineno) + ": malformed token");
            Concept c;
            c.surface = fields[0];
            for (auto& ch : c.surface)
                ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            c.normalized = normalize_phrase(c.surface, cfg);
            c.pos = pos_from_name(fields[1]);
            c.role = role_from_name(fields[2]);
            c.is_ncp = c.surface.find(' ') != std::string::npos;
            cur.concepts.push_back(std::move(c));
        }
    }
    flush();
    return out;
}

// Finishes a pre-parsed query: roles left "_" go through the standard
// resolution path, then the triplet is assembled.
inline ConceptualQuery analyze_preparsed(const PreParsedQuery& pq, const KnowledgeBase* kb,
                                         const CollectionIndex* index) {
    auto concepts = pq.concepts;
    std::vector<std::vector<Role>> candidates(concepts.size());
    for (std::size_t i = 0; i < concepts.size(); ++i)
        if (concepts[i].role != Role::Unassigned)
            candidates[i].push_back(concepts[i].role);
    for (const auto& p : pq.pairs) {
        if (p.label == "amod" || p.label == "nn") {
            detail::offer_role(candidates, p.head, Role::CoI);
            detail::offer_role(candidates, p.dep, Role::DC);
        } else if (p.label == "dobj") {
            detail::offer_role(candidates, p.head, Role::CoI);
            detail::offer_role(candidates, p.dep, Role::CoI);
        } else if (p.label == "prep") {
            detail::offer_role(candidates, p.head, Role::CoI);
            detail::offer_role(candidates, p.dep, Role::CoI);
        }
    }
    resolve_unassigned(concepts, pq.pairs, candidates, index);
    resolve_multiple(concepts, candidates);
    std::string original;
    for (const auto& c : concepts) {
        if (!original.empty()) original.push_back(' ');
        original += c.surface;
    }
    auto cq = build_conceptual_query(original, std::move(concepts), pq.pairs);
    if (kb) {
        disambiguate_query(cq, *kb);
        cq.axioms = derive_axioms(cq, *kb);
    }
    return cq;
}

}  // namespace conceptir
