#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conceptir/index.hpp"
#include "conceptir/kb.hpp"
#include "conceptir/linguistics.hpp"

namespace conceptir {

enum class CandidateSource { Statistical, LexicalSemantic };

struct CandidateTerm {
    std::string term;      // normalized (stemmed, space-joined for phrases)
    std::string display;   // a surface form for audit output
    CandidateSource source = CandidateSource::Statistical;
    std::string relation;  // empty for statistical candidates
    double score = 0.0;    // frequency (statistical) or mean similarity (lexical)
    std::vector<std::string> origins;  // base term(s) it came from
};

struct TermPool {
    std::string kind;  // statistical | synonyms | hypernyms | hyponyms | coordinates
    std::vector<CandidateTerm> entries;  // sorted by score descending
};

enum class Pattern { IE1, IE2, IE3, IE4, None };

inline std::string pattern_name(Pattern p) {
    switch (p) {
    case Pattern::IE1: return "IE1";
    case Pattern::IE2: return "IE2";
    case Pattern::IE3: return "IE3";
    case Pattern::IE4: return "IE4";
    case Pattern::None: return "none";
    }
    return "none";
}

inline Pattern pattern_from_name(const std::string& s) {
    if (s == "IE1" || s == "ie1") return Pattern::IE1;
    if (s == "IE2" || s == "ie2") return Pattern::IE2;
    if (s == "IE3" || s == "ie3") return Pattern::IE3;
    if (s == "IE4" || s == "ie4") return Pattern::IE4;
    if (s == "none") return Pattern::None;
    throw ConfigError("unknown integration pattern: " + s);
}

// The lexical relation each pattern draws from.
inline std::string pattern_relation(Pattern p) {
    switch (p) {
    case Pattern::IE1: return "synonym";
    case Pattern::IE2: return "hypernym";
    case Pattern::IE3: return "hyponym";
    case Pattern::IE4: return "coordinate";
    case Pattern::None: return "";
    }
    return "";
}

struct ExpandedQuery {
    std::vector<Concept> concepts;  // originals (roles intact) then ECs
    Pattern pattern = Pattern::None;
};

struct ExpansionConfig {
    int k_stat = 5;
    int k_lex = 5;
    int traversal_depth = 2;          // levels of hypernym/hyponym traversal
    double common_word_fraction = 0.1;  // collection-frequency cutoff for candidates
    std::uint64_t seed = 42;
    const std::set<std::string>* stopwords = &default_stopwords();
};

namespace detail {

// Stem key for approximate matching: per-word Porter stems joined with
// spaces, so "book"/"books" collide and phrases match word-wise.
inline std::string stem_key(const std::string& term) {
    std::string out;
    for (const auto& tok : tokenize(term)) {
        if (!out.empty()) out.push_back(' ');
        out += porter_stem(tok);
    }
    return out;
}

inline bool detrimental(const std::string& term, const ExpansionConfig& cfg,
                        const CollectionIndex* index) {
    if (term.empty())
        return true;
    for (unsigned char ch : term)
        if (!std::isalnum(ch) && ch != ' ')
            return true;
    if (cfg.stopwords && cfg.stopwords->count(term))
        return true;
    if (index && index->total_tokens() > 0) {
        long limit = static_cast<long>(cfg.common_word_fraction *
                                       static_cast<double>(index->total_tokens()));
        if (index->collection_count(stem_key(term)) > limit)
            return true;
    }
    return false;
}

}  // namespace detail

// Statistically collocated candidates: each base pair is matched against
// the n-gram windows, surrounding terms are collected and scored with
// 1-gram frequencies, stem variants merged by summing. Equal-frequency
// ties are broken by a seeded uniform draw.
inline TermPool pool_statistical(const ConceptualQuery& cq,
                                 const std::vector<ConceptPair>& pairs,
                                 const NGramModel& model, const ExpansionConfig& cfg,
                                 const CollectionIndex* index = nullptr) {
    TermPool pool;
    pool.kind = "statistical";
    std::map<std::string, CandidateTerm> merged;  // stem key -> candidate
    std::map<std::string, std::set<std::string>> variants;  // stem key -> surface variants seen
    for (const auto& p : pairs) {
        const Concept& head = cq.concepts[static_cast<std::size_t>(p.head)];
        const Concept& dep = cq.concepts[static_cast<std::size_t>(p.dep)];
        auto head_words = split_ws(head.normalized);
        auto dep_words = split_ws(dep.normalized);
        // multi-word concepts probe with their first stem
        std::string a = head_words.empty() ? head.normalized : head_words.front();
        std::string b = dep_words.empty() ? dep.normalized : dep_words.front();
        std::set<std::string> pair_words(head_words.begin(), head_words.end());
        pair_words.insert(dep_words.begin(), dep_words.end());
        for (const auto& match : window_matches({a, b}, model)) {
            for (const auto& tok : split_ws(match.window)) {
                if (pair_words.count(tok))
                    continue;
                if (cfg.stopwords && cfg.stopwords->count(tok))
                    continue;
                if (detail::detrimental(tok, cfg, index))
                    continue;
                std::string key = detail::stem_key(tok);
                auto it = merged.find(key);
                long freq = 0;
                auto uit = model.unigram_counts.find(tok);
                if (uit != model.unigram_counts.end())
                    freq = uit->second;
                if (it == merged.end()) {
                    CandidateTerm ct;
                    ct.term = key;
                    ct.display = tok;
                    ct.source = CandidateSource::Statistical;
                    ct.score = static_cast<double>(freq);
                    ct.origins = {head.normalized, dep.normalized};
                    merged.emplace(key, std::move(ct));
                    variants[key].insert(tok);
                } else {
                    // morphological variants sharing the stem sum their
                    // frequencies; a repeat of the same variant does not
                    if (variants[key].insert(tok).second)
                        it->second.score += static_cast<double>(freq);
                    for (const auto& o : {head.normalized, dep.normalized})
                        if (std::find(it->second.origins.begin(), it->second.origins.end(), o) ==
                            it->second.origins.end())
                            it->second.origins.push_back(o);
                }
            }
        }
    }
    for (auto& [key, ct] : merged)
        pool.entries.push_back(std::move(ct));
    // seeded tie-break among equal frequencies: a stable random priority
    // per term drawn in lexicographic term order
    std::mt19937_64 rng(cfg.seed);
    std::map<std::string, std::uint64_t> priority;
    for (const auto& ct : pool.entries)
        priority[ct.term] = 0;
    for (auto& [term, pr] : priority)
        pr = rng();
    std::sort(pool.entries.begin(), pool.entries.end(),
              [&](const CandidateTerm& x, const CandidateTerm& y) {
                  if (x.score != y.score) return x.score > y.score;
                  return priority[x.term] < priority[y.term];
              });
    return pool;
}

// Lexical-semantic candidates for one relation: related synsets of each
// disambiguated CoI/DC base term (verbs contribute to synonyms only),
// with every candidate synset's co-lemmas included, each candidate scored
// by its mean path similarity to all sensed base terms.
inline TermPool pool_lexical(const ConceptualQuery& cq, const KnowledgeBase& kb,
                             const std::string& relation, const ExpansionConfig& cfg,
                             const CollectionIndex* index = nullptr) {
    if (std::find(kb_relations().begin(), kb_relations().end(), relation) == kb_relations().end())
        throw std::runtime_error("unknown expansion relation: " + relation);
    TermPool pool;
    pool.kind = relation == "synonym" ? "synonyms" : relation + "s";

    std::vector<const Concept*> bases;
    std::vector<const Synset*> base_senses;
    for (const auto& c : cq.concepts) {
        if (c.role != Role::CoI && c.role != Role::DC)
            continue;
        bases.push_back(&c);
        if (const Synset* s = concept_sense(kb, c))
            base_senses.push_back(s);
    }
    if (base_senses.empty())
        return pool;

    std::set<std::string> base_keys;
    for (const auto* c : bases)
        base_keys.insert(detail::stem_key(c->surface));

    std::map<std::string, CandidateTerm> merged;
    for (const auto* c : bases) {
        const Synset* sense = concept_sense(kb, *c);
        if (!sense)
            continue;  // absent from KB: skipped by lexical expansion
        if (sense->pos == WordClass::Verb && relation != "synonym")
            continue;  // verbs receive synonym expansion only
        int depth = (relation == "hypernym" || relation == "hyponym") ? cfg.traversal_depth : 1;
        for (const Synset* target : kb.related_synsets(*sense, relation, depth)) {
            for (const auto& lemma : target->lemmas) {
                std::string key = detail::stem_key(lemma);
                if (target == sense && key == detail::stem_key(c->surface))
                    continue;  // the base lemma itself is not its own synonym
                if (detail::detrimental(lemma, cfg, index))
                    continue;
                double total = 0.0;
                for (const Synset* bs : base_senses)
                    total += kb.similarity(*target, *bs);
                double score = total / static_cast<double>(base_senses.size());
                auto it = merged.find(key);
                if (it == merged.end()) {
                    CandidateTerm ct;
                    ct.term = key;
                    ct.display = lemma;
                    ct.source = CandidateSource::LexicalSemantic;
                    ct.relation = relation;
                    ct.score = score;
                    ct.origins = {c->normalized};
                    merged.emplace(key, std::move(ct));
                } else {
                    it->second.score = std::max(it->second.score, score);
                    if (std::find(it->second.origins.begin(), it->second.origins.end(),
                                  c->normalized) == it->second.origins.end())
                        it->second.origins.push_back(c->normalized);
                }
            }
        }
    }
    for (auto& [key, ct] : merged)
        pool.entries.push_back(std::move(ct));
    std::sort(pool.entries.begin(), pool.entries.end(),
              [](const CandidateTerm& x, const CandidateTerm& y) {
                  if (x.score != y.score) return x.score > y.score;
                  return x.term < y.term;
              });
    return pool;
}

// Stem-equivalence reconciliation: on a collision the statistical copy is
// removed and the lexical-semantic copy kept with its relation.
inline std::pair<std::vector<CandidateTerm>, std::vector<CandidateTerm>> dedup(
    std::vector<CandidateTerm> stat, std::vector<CandidateTerm> lex) {
    std::set<std::string> lex_keys;
    for (const auto& ct : lex)
        lex_keys.insert(ct.term);
    std::vector<CandidateTerm> stat_out;
    for (auto& ct : stat)
        if (!lex_keys.count(ct.term))
            stat_out.push_back(std::move(ct));
    return {std::move(stat_out), std::move(lex)};
}

// Integrates the selected statistical and lexical candidates into the
// final expanded query. Original concepts are never removed or reordered;
// every added term carries role EC; the result is stem-duplicate-free,
// internally and against the originals.
inline ExpandedQuery apply_pattern(const ConceptualQuery& cq, Pattern pattern,
                                   const TermPool& stat_pool, const TermPool& lex_pool,
                                   int k_stat, int k_lex) {
    if (k_stat < 0 || k_lex < 0)
        throw ConfigError("expansion thresholds must be >= 0");
    ExpandedQuery eq;
    eq.pattern = pattern;
    eq.concepts = cq.concepts;
    if (pattern == Pattern::None)
        return eq;

    std::set<std::string> original_keys;
    for (const auto& c : cq.concepts)
        original_keys.insert(detail::stem_key(c.normalized));

    auto take = [&](const TermPool& pool, int k) {
        std::vector<CandidateTerm> out;
        for (const auto& ct : pool.entries) {
            if (static_cast<int>(out.size()) >= k)
                break;
            if (original_keys.count(ct.term))
                continue;
            out.push_back(ct);
        }
        return out;
    };
    auto stat_sel = take(stat_pool, k_stat);
    auto lex_sel = take(lex_pool, k_lex);
    auto [stat_final, lex_final] = dedup(std::move(stat_sel), std::move(lex_sel));

    std::set<std::string> added;
    auto append = [&](const CandidateTerm& ct) {
        if (!added.insert(ct.term).second)
            return;
        Concept ec;
        ec.surface = ct.display;
        ec.normalized = ct.term;
        ec.pos = Pos::Noun;
        ec.role = Role::EC;
        ec.is_ncp = ct.term.find(' ') != std::string::npos;
        ec.relation = ct.relation;
        ec.score = ct.score;
        eq.concepts.push_back(std::move(ec));
    };
    for (const auto& ct : stat_final)
        append(ct);
    for (const auto& ct : lex_final)
        append(ct);
    return eq;
}

// Convenience: builds both pools and applies the pattern.
inline ExpandedQuery expand_query(const ConceptualQuery& cq, Pattern pattern,
                                  const NGramModel& model, const KnowledgeBase& kb,
                                  const ExpansionConfig& cfg,
                                  const CollectionIndex* index = nullptr) {
    if (pattern == Pattern::None) {
        ExpandedQuery eq;
        eq.pattern = pattern;
        eq.concepts = cq.concepts;
        return eq;
    }
    auto pairs = base_pairs(cq);
    TermPool stat = pool_statistical(cq, pairs, model, cfg, index);
    TermPool lex = pool_lexical(cq, kb, pattern_relation(pattern), cfg, index);
    return apply_pattern(cq, pattern, stat, lex, cfg.k_stat, cfg.k_lex);
}

// Audit dump: one line per concept, `term<TAB>role<TAB>relation-or-"-"<TAB>score`.
inline std::string dump_expanded(const ExpandedQuery& eq) {
    std::string out;
    char buf[64];
    for (const auto& c : eq.concepts) {
        out += c.normalized;
        out.push_back('\t');
        out += role_name(c.role);
        out.push_back('\t');
        out += c.relation.empty() ? "-" : c.relation;
        out.push_back('\t');
        std::snprintf(buf, sizeof(buf), "%.6f", c.score);
        out += buf;
        out.push_back('\n');
    }
    return out;
}

}  // namespace conceptir
