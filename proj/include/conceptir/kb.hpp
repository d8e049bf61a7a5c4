#pragma once

#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conceptir/index.hpp"
#include "conceptir/text.hpp"

namespace conceptir {

enum class WordClass { Noun, Verb, Adjective, Adverb };

inline char word_class_tag(WordClass p) {
    switch (p) {
    case WordClass::Noun: return 'n';
    case WordClass::Verb: return 'v';
    case WordClass::Adjective: return 'a';
    case WordClass::Adverb: return 'r';
    }
    return 'n';
}

inline WordClass word_class_from_tag(char c) {
    switch (c) {
    case 'n': return WordClass::Noun;
    case 'v': return WordClass::Verb;
    case 'a': return WordClass::Adjective;
    case 'r': return WordClass::Adverb;
    }
    throw ParseError(std::string("unknown part-of-speech tag: ") + c);
}

struct SynsetEdge {
    std::string relation;  // hypernym | hyponym | holonym | meronym
    std::string target;
};

struct Synset {
    std::string id;
    WordClass pos = WordClass::Noun;
    std::vector<std::string> lemmas;  // first = most frequent
    std::string gloss;
    std::vector<SynsetEdge> edges;
};

struct SenseAssignment {
    std::string synset_id;
    double score = 0.0;
};

// Semantic relations the expansion module may ask for. `synonym` and
// `coordinate` are derived; the rest are stored edges.
inline const std::vector<std::string>& kb_relations() {
    static const std::vector<std::string> r = {"synonym",    "hypernym", "hyponym",
                                               "coordinate", "holonym",  "meronym"};
    return r;
}

class KnowledgeBase {
public:
    KnowledgeBase() = default;

    static KnowledgeBase load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open KB file: " + path);
        KnowledgeBase kb;
        std::string line;
        std::size_t lineno = 0;
        std::vector<std::tuple<std::string, std::string, std::string, std::size_t>> edges;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line[0] == '#')
                continue;
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
            if (fields[0] == "S") {
                if (fields.size() < 4)
                    throw ParseError("KB line " + std::to_string(lineno) + ": malformed synset");
                Synset s;
                s.id = fields[1];
                if (fields[2].size() != 1)
                    throw ParseError("KB line " + std::to_string(lineno) + ": bad pos");
                s.pos = word_class_from_tag(fields[2][0]);
                std::string cur;
                for (char ch : fields[3]) {
                    if (ch == '|') {
                        if (!cur.empty()) s.lemmas.push_back(cur);
                        cur.clear();
                    } else {
                        cur.push_back(ch);
                    }
                }
                if (!cur.empty()) s.lemmas.push_back(cur);
                if (s.lemmas.empty())
                    throw ParseError("KB line " + std::to_string(lineno) + ": synset without lemmas");
                if (fields.size() > 4)
                    s.gloss = fields[4];
                kb.add_synset(std::move(s));
            } else if (fields[0] == "E") {
                if (fields.size() != 4)
                    throw ParseError("KB line " + std::to_string(lineno) + ": malformed edge");
                edges.emplace_back(fields[1], fields[2], fields[3], lineno);
            } else {
                throw ParseError("KB line " + std::to_string(lineno) + ": unknown record type '" +
                                 fields[0] + "'");
            }
        }
        for (auto& [src, rel, dst, ln] : edges) {
            if (!kb.synset(src) || !kb.synset(dst))
                throw ParseError("KB line " + std::to_string(ln) + ": edge references missing synset");
            if (rel != "hypernym" && rel != "hyponym" && rel != "holonym" && rel != "meronym")
                throw ParseError("KB line " + std::to_string(ln) + ": unknown relation '" + rel + "'");
            kb.synsets_[kb.pos_.at(src)].edges.push_back({rel, dst});
        }
        kb.check_inverses();
        return kb;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write KB file: " + path);
        for (const auto& s : synsets_) {
            out << "S\t" << s.id << '\t' << word_class_tag(s.pos) << '\t';
            for (std::size_t i = 0; i < s.lemmas.size(); ++i) {
                if (i) out << '|';
                out << s.lemmas[i];
            }
            out << '\t' << s.gloss << '\n';
        }
        for (const auto& s : synsets_)
            for (const auto& e : s.edges)
                out << "E\t" << s.id << '\t' << e.relation << '\t' << e.target << '\n';
    }

    void add_synset(Synset s) {
        if (pos_.count(s.id))
            throw ParseError("duplicate synset id: " + s.id);
        pos_[s.id] = synsets_.size();
        for (const auto& lemma : s.lemmas)
            by_lemma_[lemma].push_back(s.id);
        synsets_.push_back(std::move(s));
    }

    std::size_t size() const { return synsets_.size(); }

    const Synset* synset(const std::string& id) const {
        auto it = pos_.find(id);
        return it == pos_.end() ? nullptr : &synsets_[it->second];
    }

    // All synsets containing the lemma with matching pos, in KB order
    // (first entry = most frequent sense).
    std::vector<const Synset*> synsets(const std::string& lemma, WordClass pos) const {
        std::vector<const Synset*> out;
        auto it = by_lemma_.find(lemma);
        if (it == by_lemma_.end())
            return out;
        for (const auto& id : it->second) {
            const Synset* s = synset(id);
            if (s->pos == pos)
                out.push_back(s);
        }
        return out;
    }

    std::vector<const Synset*> synsets_any_pos(const std::string& lemma) const {
        std::vector<const Synset*> out;
        auto it = by_lemma_.find(lemma);
        if (it == by_lemma_.end())
            return out;
        for (const auto& id : it->second)
            out.push_back(synset(id));
        return out;
    }

    // Target synsets for a relation. synonym -> the synset itself;
    // hypernym/hyponym -> edge targets up to `depth` levels; coordinate ->
    // other hyponyms of each direct hypernym; holonym/meronym -> direct
    // edge targets.
    std::vector<const Synset*> related_synsets(const Synset& s, const std::string& relation,
                                               int depth = 1) const {
        std::vector<const Synset*> out;
        std::set<std::string> seen;
        auto push = [&](const std::string& id) {
            if (id != s.id && seen.insert(id).second)
                out.push_back(synset(id));
        };
        if (relation == "synonym") {
            out.push_back(&s);
        } else if (relation == "hypernym" || relation == "hyponym") {
            std::deque<std::pair<const Synset*, int>> frontier{{&s, 0}};
            std::set<std::string> visited{s.id};
            while (!frontier.empty()) {
                auto [cur, level] = frontier.front();
                frontier.pop_front();
                if (level >= depth)
                    continue;
                for (const auto& e : cur->edges) {
                    if (e.relation != relation)
                        continue;
                    push(e.target);
                    if (visited.insert(e.target).second)
                        frontier.emplace_back(synset(e.target), level + 1);
                }
            }
        } else if (relation == "coordinate") {
            for (const auto& e : s.edges) {
                if (e.relation != "hypernym")
                    continue;
                const Synset* parent = synset(e.target);
                for (const auto& pe : parent->edges)
                    if (pe.relation == "hyponym")
                        push(pe.target);
            }
        } else if (relation == "holonym" || relation == "meronym") {
            for (const auto& e : s.edges)
                if (e.relation == relation)
                    push(e.target);
        } else {
            throw std::runtime_error("unknown KB relation: " + relation);
        }
        return out;
    }

    // Lemma view of related_synsets. For `synonym` the co-lemmas of the
    // synset itself, excluding nothing but duplicates.
    std::vector<std::string> related(const Synset& s, const std::string& relation,
                                     int depth = 1) const {
        std::vector<std::string> out;
        std::set<std::string> seen;
        if (relation == "synonym") {
            for (std::size_t i = 1; i < s.lemmas.size(); ++i)
                if (seen.insert(s.lemmas[i]).second)
                    out.push_back(s.lemmas[i]);
            return out;
        }
        for (const Synset* t : related_synsets(s, relation, depth))
            for (const auto& lemma : t->lemmas)
                if (seen.insert(lemma).second)
                    out.push_back(lemma);
        return out;
    }

    // Shortest-path length between two synsets through hypernym/hyponym
    // edges; -1 when unreachable.
    int path_length(const std::string& a, const std::string& b) const {
        if (a == b)
            return 0;
        if (!synset(a) || !synset(b))
            return -1;
        std::deque<std::pair<std::string, int>> frontier{{a, 0}};
        std::set<std::string> visited{a};
        while (!frontier.empty()) {
            auto [cur, dist] = frontier.front();
            frontier.pop_front();
            for (const auto& e : synset(cur)->edges) {
                if (e.relation != "hypernym" && e.relation != "hyponym")
                    continue;
                if (e.target == b)
                    return dist + 1;
                if (visited.insert(e.target).second)
                    frontier.emplace_back(e.target, dist + 1);
            }
        }
        return -1;
    }

    // Inverse path-length similarity: 1/(1+L); 0 when unreachable.
    double similarity(const Synset& a, const Synset& b) const {
        int l = path_length(a.id, b.id);
        return l < 0 ? 0.0 : 1.0 / (1.0 + l);
    }

    // Term-level similarity: each term resolves to its best sense against
    // the other, i.e. the maximum over sense pairs.
    double similarity(const std::string& term_a, const std::string& term_b) const {
        double best = 0.0;
        for (const Synset* sa : synsets_any_pos(term_a))
            for (const Synset* sb : synsets_any_pos(term_b))
                best = std::max(best, similarity(*sa, *sb));
        return best;
    }

    // Chooses the sense of `lemma` maximizing the mean over context terms
    // of the best sense-pair similarity. Tie or empty context -> most
    // frequent sense (first in KB order). No sense in the KB -> nullopt.
    std::optional<SenseAssignment> disambiguate(const std::string& lemma, WordClass pos,
                                                const std::vector<std::string>& context) const {
        auto senses = synsets(lemma, pos);
        if (senses.empty())
            return std::nullopt;
        const Synset* best = senses.front();
        double best_score = context_score(*senses.front(), context);
        for (std::size_t i = 1; i < senses.size(); ++i) {
            double sc = context_score(*senses[i], context);
            if (sc > best_score) {  // strict: ties keep the earlier sense
                best = senses[i];
                best_score = sc;
            }
        }
        return SenseAssignment{best->id, best_score};
    }

    const std::vector<Synset>& all_synsets() const { return synsets_; }

private:
    double context_score(const Synset& sense, const std::vector<std::string>& context) const {
        if (context.empty())
            return 0.0;
        double total = 0.0;
        for (const auto& term : context) {
            double best = 0.0;
            for (const Synset* ct : synsets_any_pos(term))
                best = std::max(best, similarity(sense, *ct));
            total += best;
        }
        return total / static_cast<double>(context.size());
    }

    void check_inverses() const {
        for (const auto& s : synsets_) {
            for (const auto& e : s.edges) {
                std::string inverse;
                if (e.relation == "hypernym") inverse = "hyponym";
                else if (e.relation == "hyponym") inverse = "hypernym";
                else continue;
                const Synset* t = synset(e.target);
                bool found = false;
                for (const auto& te : t->edges)
                    if (te.relation == inverse && te.target == s.id) { found = true; break; }
                if (!found)
                    throw ParseError("inverse-edge inconsistency: " + s.id + " " + e.relation +
                                     " " + e.target);
            }
        }
    }

    std::vector<Synset> synsets_;
    std::map<std::string, std::size_t> pos_;
    std::map<std::string, std::vector<std::string>> by_lemma_;
};

}  // namespace conceptir
