#pragma once

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace conceptir {

namespace detail {

// Porter stemming algorithm (M.F. Porter, 1980), transcribed from the
// reference C implementation including its documented departures
// (bli->ble, logi->log).
class PorterStemmer {
public:
    static std::string stem(const std::string& word) {
        if (word.size() <= 2)
            return word;
        PorterStemmer p;
        p.b_ = word;
        p.k_ = static_cast<int>(word.size()) - 1;
        p.step1ab();
        p.step1c();
        p.step2();
        p.step3();
        p.step4();
        p.step5();
        p.b_.resize(p.k_ + 1);
        return p.b_;
    }

private:
    std::string b_;
    int k_ = 0;
    int j_ = 0;

    bool cons(int i) const {
        switch (b_[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !cons(i - 1);
        default:
            return true;
        }
    }

    // Measure of the stem b_[0..j_]: the number of VC sequences.
    int m() const {
        int n = 0, i = 0;
        while (true) {
            if (i > j_) return n;
            if (!cons(i)) break;
            i++;
        }
        i++;
        while (true) {
            while (true) {
                if (i > j_) return n;
                if (cons(i)) break;
                i++;
            }
            i++;
            n++;
            while (true) {
                if (i > j_) return n;
                if (!cons(i)) break;
                i++;
            }
            i++;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; i++)
            if (!cons(i)) return true;
        return false;
    }

    bool doublec(int j) const {
        if (j < 1) return false;
        if (b_[j] != b_[j - 1]) return false;
        return cons(j);
    }

    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = b_[i];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(const char* s) {
        int l = static_cast<int>(std::strlen(s));
        if (l > k_ + 1) return false;
        if (b_.compare(k_ - l + 1, l, s) != 0) return false;
        j_ = k_ - l;
        return true;
    }

    void setto(const char* s) {
        int l = static_cast<int>(std::strlen(s));
        b_.replace(j_ + 1, b_.size() - j_ - 1, s);
        k_ = j_ + l;
    }

    void r(const char* s) {
        if (m() > 0) setto(s);
    }

    void step1ab() {
        if (b_[k_] == 's') {
            if (ends("sses")) k_ -= 2;
            else if (ends("ies")) setto("i");
            else if (b_[k_ - 1] != 's') k_--;
        }
        if (ends("eed")) {
            if (m() > 0) k_--;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) setto("ate");
            else if (ends("bl")) setto("ble");
            else if (ends("iz")) setto("ize");
            else if (doublec(k_)) {
                k_--;
                char ch = b_[k_];
                if (ch == 'l' || ch == 's' || ch == 'z') k_++;
            } else if (m() == 1 && cvc(k_)) {
                setto("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[k_] = 'i';
    }

    void step2() {
        if (k_ < 1) return;
        switch (b_[k_ - 1]) {
        case 'a':
            if (ends("ational")) { r("ate"); break; }
            if (ends("tional")) { r("tion"); break; }
            break;
        case 'c':
            if (ends("enci")) { r("ence"); break; }
            if (ends("anci")) { r("ance"); break; }
            break;
        case 'e':
            if (ends("izer")) { r("ize"); break; }
            break;
        case 'l':
            if (ends("bli")) { r("ble"); break; }
            if (ends("alli")) { r("al"); break; }
            if (ends("entli")) { r("ent"); break; }
            if (ends("eli")) { r("e"); break; }
            if (ends("ousli")) { r("ous"); break; }
            break;
        case 'o':
            if (ends("ization")) { r("ize"); break; }
            if (ends("ation")) { r("ate"); break; }
            if (ends("ator")) { r("ate"); break; }
            break;
        case 's':
            if (ends("alism")) { r("al"); break; }
            if (ends("iveness")) { r("ive"); break; }
            if (ends("fulness")) { r("ful"); break; }
            if (ends("ousness")) { r("ous"); break; }
            break;
        case 't':
            if (ends("aliti")) { r("al"); break; }
            if (ends("iviti")) { r("ive"); break; }
            if (ends("biliti")) { r("ble"); break; }
            break;
        case 'g':
            if (ends("logi")) { r("log"); break; }
            break;
        default:
            break;
        }
    }

    void step3() {
        switch (b_[k_]) {
        case 'e':
            if (ends("icate")) { r("ic"); break; }
            if (ends("ative")) { r(""); break; }
            if (ends("alize")) { r("al"); break; }
            break;
        case 'i':
            if (ends("iciti")) { r("ic"); break; }
            break;
        case 'l':
            if (ends("ical")) { r("ic"); break; }
            if (ends("ful")) { r(""); break; }
            break;
        case 's':
            if (ends("ness")) { r(""); break; }
            break;
        default:
            break;
        }
    }

    void step4() {
        if (k_ < 1) return;
        switch (b_[k_ - 1]) {
        case 'a':
            if (ends("al")) break;
            return;
        case 'c':
            if (ends("ance")) break;
            if (ends("ence")) break;
            return;
        case 'e':
            if (ends("er")) break;
            return;
        case 'i':
            if (ends("ic")) break;
            return;
        case 'l':
            if (ends("able")) break;
            if (ends("ible")) break;
            return;
        case 'n':
            if (ends("ant")) break;
            if (ends("ement")) break;
            if (ends("ment")) break;
            if (ends("ent")) break;
            return;
        case 'o':
            if (ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) break;
            if (ends("ou")) break;
            return;
        case 's':
            if (ends("ism")) break;
            return;
        case 't':
            if (ends("ate")) break;
            if (ends("iti")) break;
            return;
        case 'u':
            if (ends("ous")) break;
            return;
        case 'v':
            if (ends("ive")) break;
            return;
        case 'z':
            if (ends("ize")) break;
            return;
        default:
            return;
        }
        if (m() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (b_[k_] == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) k_--;
        }
        if (b_[k_] == 'l' && doublec(k_) && m() > 1) k_--;
    }
};

}  // namespace detail

inline std::string porter_stem(const std::string& word) {
    return detail::PorterStemmer::stem(word);
}

// Default English stopword list (standard function words).
inline const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a",       "about",   "above",  "after",  "again",   "against", "all",
        "am",      "an",      "and",    "any",    "are",     "as",      "at",
        "be",      "because", "been",   "before", "being",   "below",   "between",
        "both",    "but",     "by",     "can",    "cannot",  "could",   "did",
        "do",      "does",    "doing",  "down",   "during",  "each",    "few",
        "for",     "from",    "further","had",    "has",     "have",    "having",
        "he",      "her",     "here",   "hers",   "herself", "him",     "himself",
        "his",     "how",     "i",      "if",     "in",      "into",    "is",
        "it",      "its",     "itself", "me",     "more",    "most",    "my",
        "myself",  "no",      "nor",    "not",    "of",      "off",     "on",
        "once",    "only",    "or",     "other",  "ought",   "our",     "ours",
        "ourselves","out",    "over",   "own",    "same",    "she",     "should",
        "so",      "some",    "such",   "than",   "that",    "the",     "their",
        "theirs",  "them",    "themselves","then","there",   "these",   "they",
        "this",    "those",   "through","to",     "too",     "under",   "until",
        "up",      "upon",    "very",   "was",    "we",      "were",    "what",
        "when",    "where",   "which",  "while",  "who",     "whom",    "why",
        "will",    "with",    "would",  "you",    "your",    "yours",   "yourself",
        "yourselves","across","via",    "per",
    };
    return words;
}

inline std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open stopword file: " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n' ||
                                 line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (!line.empty())
            words.insert(line);
    }
    return words;
}

// Lowercase, split on non-alphanumeric characters. Hyphenated words split.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char ch : text) {
        if (std::isalnum(ch)) {
            cur.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

struct PipelineConfig {
    const std::set<std::string>* stopwords = &default_stopwords();
    bool stemming = true;
};

// Tokenize, drop stopwords, stem. Empty input yields an empty list.
inline std::vector<std::string> normalize(const std::string& text,
                                          const PipelineConfig& cfg = {}) {
    std::vector<std::string> out;
    for (auto& tok : tokenize(text)) {
        if (cfg.stopwords && cfg.stopwords->count(tok))
            continue;
        out.push_back(cfg.stemming ? porter_stem(tok) : tok);
    }
    return out;
}

// Normalized form of a possibly multi-word phrase: per-word stems joined
// with single spaces.
inline std::string normalize_phrase(const std::string& phrase,
                                    const PipelineConfig& cfg = {}) {
    std::string out;
    for (auto& tok : tokenize(phrase)) {
        if (!out.empty()) out.push_back(' ');
        out += cfg.stemming ? porter_stem(tok) : tok;
    }
    return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ' ' || ch == '\t') {
            if (!cur.empty()) { out.push_back(cur); cur.clear(); }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace conceptir
