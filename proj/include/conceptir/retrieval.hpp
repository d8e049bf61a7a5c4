#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "conceptir/expansion.hpp"
#include "conceptir/index.hpp"
#include "conceptir/linguistics.hpp"

namespace conceptir {

struct SmoothingConfig {
    double mu = 1000.0;  // Dirichlet prior mass, >= 0
};

struct RoleWeights {
    double coi = 1.0;
    double dc = 0.8;
    double rc = 0.3;
    double sc = 0.0;  // pinned: structural concepts carry no weight
    double ec = 0.5;

    double of(Role r) const {
        switch (r) {
        case Role::CoI: return coi;
        case Role::DC: return dc;
        case Role::RC: return rc;
        case Role::SC: return 0.0;
        case Role::EC: return ec;
        default: return 0.0;
        }
    }
};

struct ScoredDocument {
    std::string doc_id;
    double sat = 0.0;  // log-likelihood, <= 0
    double imp = 0.0;
    double rel = 0.0;
};

// The query as a concept multiset: one entry per distinct normalized
// concept with its multiplicity, role, and pre-split phrase words.
// |q| counts the distinct role-typed concepts (SCs included).
struct QueryBag {
    struct Entry {
        std::string term;
        std::vector<std::string> words;
        long multiplicity = 1;
        Role role = Role::CoI;
    };
    std::vector<Entry> entries;
    std::size_t size = 0;  // |q|
};

inline QueryBag make_query_bag(const std::vector<Concept>& concepts) {
    QueryBag bag;
    std::map<std::string, std::size_t> pos;
    for (const auto& c : concepts) {
        auto it = pos.find(c.normalized);
        if (it != pos.end()) {
            bag.entries[it->second].multiplicity++;
            continue;
        }
        QueryBag::Entry e;
        e.term = c.normalized;
        e.words = split_ws(c.normalized);
        e.role = c.role;
        pos[c.normalized] = bag.entries.size();
        bag.entries.push_back(std::move(e));
    }
    bag.size = bag.entries.size();
    return bag;
}

// Plain term bag for the LM baseline: raw normalized query terms, no roles.
inline QueryBag make_term_bag(const std::vector<std::string>& terms) {
    QueryBag bag;
    std::map<std::string, std::size_t> pos;
    for (const auto& t : terms) {
        auto it = pos.find(t);
        if (it != pos.end()) {
            bag.entries[it->second].multiplicity++;
            continue;
        }
        QueryBag::Entry e;
        e.term = t;
        e.words = {t};
        pos[t] = bag.entries.size();
        bag.entries.push_back(std::move(e));
    }
    bag.size = bag.entries.size();
    return bag;
}

// Collection-level phrase statistics cached per query.
class ConceptStats {
public:
    explicit ConceptStats(const CollectionIndex& index) : index_(index) {}

    long collection_count(const QueryBag::Entry& e) {
        auto it = cache_.find(e.term);
        if (it != cache_.end())
            return it->second;
        long n = e.words.size() == 1 ? index_.collection_count(e.words[0])
                                     : index_.collection_phrase_count(e.words);
        cache_[e.term] = n;
        return n;
    }

    static long doc_count(const Document& d, const QueryBag::Entry& e) {
        return CollectionIndex::phrase_count(d, e.words);
    }

private:
    const CollectionIndex& index_;
    std::map<std::string, long> cache_;
};

// Dirichlet-smoothed concept probability:
//   p(c | L_d) = (N_d(c) + mu * N_c(c) / |C|) / (|d| + mu)
inline double smoothed_prob(long n_d, long n_c, long doc_len, long coll_len,
                            const SmoothingConfig& cfg) {
    if (coll_len <= 0)
        throw std::runtime_error("empty collection");
    if (cfg.mu < 0)
        throw ConfigError("mu must be >= 0");
    double denom = static_cast<double>(doc_len) + cfg.mu;
    if (denom == 0.0)
        throw std::runtime_error("undefined probability: mu = 0 and |d| = 0");
    return (static_cast<double>(n_d) +
            cfg.mu * static_cast<double>(n_c) / static_cast<double>(coll_len)) /
           denom;
}

inline double smoothed_prob(const QueryBag::Entry& entry, const Document& d,
                            const CollectionIndex& index, ConceptStats& stats,
                            const SmoothingConfig& cfg) {
    long n_d = ConceptStats::doc_count(d, entry);
    long n_c = stats.collection_count(entry);
    return smoothed_prob(n_d, n_c, static_cast<long>(d.length()), index.total_tokens(), cfg);
}

struct SatResult {
    double value = 0.0;
    int skipped = 0;  // concepts absent from the whole collection
};

// Sat(d,q) = sum_c N_q(c) * log p(c | L_d). Concepts with zero collection
// probability are skipped and counted.
inline SatResult sat(const Document& d, const QueryBag& bag, const CollectionIndex& index,
                     ConceptStats& stats, const SmoothingConfig& cfg) {
    SatResult r;
    for (const auto& e : bag.entries) {
        double p = smoothed_prob(e, d, index, stats, cfg);
        if (p <= 0.0) {
            r.skipped++;
            continue;
        }
        r.value += static_cast<double>(e.multiplicity) * std::log(p);
    }
    return r;
}

// Imp(q,d) = sum over distinct query concepts occurring in d of W(role),
// divided by |q|.
inline double imp(const QueryBag& bag, const Document& d, const RoleWeights& weights) {
    if (bag.size == 0)
        return 0.0;
    double total = 0.0;
    for (const auto& e : bag.entries)
        if (ConceptStats::doc_count(d, e) > 0)
            total += weights.of(e.role);
    return total / static_cast<double>(bag.size);
}

// Rel(d,q): the likelihood-scale product p(q|L_d) * Imp(q,d), computed in
// log space as sat + log(imp). Documents with Imp = 0 are excluded.
inline bool rel(const Document& d, const QueryBag& bag, const RoleWeights& weights,
                const CollectionIndex& index, ConceptStats& stats, const SmoothingConfig& cfg,
                ScoredDocument& out) {
    double i = imp(bag, d, weights);
    if (i <= 0.0)
        return false;
    SatResult s = sat(d, bag, index, stats, cfg);
    out.doc_id = d.id;
    out.sat = s.value;
    out.imp = i;
    out.rel = s.value + std::log(i);
    return true;
}

namespace detail {

// Candidate documents: those containing at least one query concept.
inline std::vector<const Document*> candidates(const QueryBag& bag,
                                               const CollectionIndex& index) {
    std::set<std::string> ids;
    for (const auto& e : bag.entries) {
        if (e.words.size() == 1) {
            if (const auto* posts = index.postings(e.words[0]))
                for (const auto& p : *posts)
                    ids.insert(p.doc_id);
        } else {
            for (const auto& d : index.documents())
                if (CollectionIndex::phrase_count(d, e.words) > 0)
                    ids.insert(d.id);
        }
    }
    std::vector<const Document*> out;
    for (const auto& id : ids)
        out.push_back(index.document(id));
    return out;
}

inline void sort_and_truncate(std::vector<ScoredDocument>& scored, int k) {
    std::sort(scored.begin(), scored.end(), [](const ScoredDocument& a, const ScoredDocument& b) {
        if (a.rel != b.rel) return a.rel > b.rel;
        return a.doc_id < b.doc_id;
    });
    if (static_cast<int>(scored.size()) > k)
        scored.resize(static_cast<std::size_t>(k));
}

}  // namespace detail

// Role-weighted retrieval: top-k candidates by rel descending, ties by
// doc_id ascending.
inline std::vector<ScoredDocument> search(const QueryBag& bag, int k, const RoleWeights& weights,
                                          const CollectionIndex& index,
                                          const SmoothingConfig& cfg) {
    if (k <= 0)
        throw ConfigError("result depth k must be > 0");
    ConceptStats stats(index);
    std::vector<ScoredDocument> scored;
    for (const Document* d : detail::candidates(bag, index)) {
        ScoredDocument sd;
        if (rel(*d, bag, weights, index, stats, cfg, sd))
            scored.push_back(sd);
    }
    detail::sort_and_truncate(scored, k);
    return scored;
}

// Unigram language-model baseline: pure Sat over the raw normalized query
// terms, Imp ignored.
inline std::vector<ScoredDocument> lm_search(const QueryBag& bag, int k,
                                             const CollectionIndex& index,
                                             const SmoothingConfig& cfg) {
    if (k <= 0)
        throw ConfigError("result depth k must be > 0");
    ConceptStats stats(index);
    std::vector<ScoredDocument> scored;
    for (const Document* d : detail::candidates(bag, index)) {
        SatResult s = sat(*d, bag, index, stats, cfg);
        ScoredDocument sd;
        sd.doc_id = d->id;
        sd.sat = s.value;
        sd.imp = 1.0;
        sd.rel = s.value;
        scored.push_back(sd);
    }
    detail::sort_and_truncate(scored, k);
    return scored;
}

// Relevance-model style pseudo feedback: the top n frequently occurring
// terms of the top k documents (stopword-free by construction, query terms
// excluded) are appended to the query term list.
inline std::vector<std::string> rm_expand(const std::vector<std::string>& query_terms,
                                          int k_docs, int n_terms, const CollectionIndex& index,
                                          const SmoothingConfig& cfg) {
    if (k_docs < 1 || n_terms < 0)
        throw ConfigError("rm_expand requires k_docs >= 1 and n_terms >= 0");
    std::vector<std::string> out = query_terms;
    if (n_terms == 0)
        return out;
    auto bag = make_term_bag(query_terms);
    auto top = lm_search(bag, k_docs, index, cfg);
    if (top.empty())
        return out;
    std::set<std::string> exclude(query_terms.begin(), query_terms.end());
    std::map<std::string, long> freq;
    for (const auto& sd : top) {
        const Document* d = index.document(sd.doc_id);
        for (const auto& t : d->tokens)
            if (!exclude.count(t))
                freq[t]++;
    }
    std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (int i = 0; i < n_terms && i < static_cast<int>(ranked.size()); ++i)
        out.push_back(ranked[static_cast<std::size_t>(i)].first);
    return out;
}

}  // namespace conceptir
