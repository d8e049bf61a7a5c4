#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "conceptir/text.hpp"

namespace conceptir {

struct Document {
    std::string id;
    std::vector<std::string> tokens;  // normalized, stopword-free

    std::size_t length() const { return tokens.size(); }
};

struct Posting {
    std::string doc_id;
    long count = 0;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inverted index plus the collection statistics the retrieval model reads:
// per-document counts, collection counts and the collection token total.
class CollectionIndex {
public:
    CollectionIndex() = default;

    void add_document(Document doc) {
        if (doc_pos_.count(doc.id))
            throw std::runtime_error("duplicate doc_id: " + doc.id);
        doc_pos_[doc.id] = docs_.size();
        docs_.push_back(std::move(doc));
        finalized_ = false;
    }

    // Sorts documents by id and rebuilds postings; makes the index
    // independent of insertion order.
    void finalize() {
        std::sort(docs_.begin(), docs_.end(),
                  [](const Document& a, const Document& b) { return a.id < b.id; });
        doc_pos_.clear();
        postings_.clear();
        collection_counts_.clear();
        total_tokens_ = 0;
        for (std::size_t i = 0; i < docs_.size(); ++i) {
            doc_pos_[docs_[i].id] = i;
            std::map<std::string, long> local;
            for (const auto& t : docs_[i].tokens)
                local[t]++;
            for (const auto& [term, n] : local) {
                postings_[term].push_back({docs_[i].id, n});
                collection_counts_[term] += n;
            }
            total_tokens_ += static_cast<long>(docs_[i].tokens.size());
        }
        finalized_ = true;
    }

    const std::vector<Document>& documents() const { return docs_; }
    std::size_t doc_count() const { return docs_.size(); }
    long total_tokens() const { return total_tokens_; }

    const Document* document(const std::string& doc_id) const {
        auto it = doc_pos_.find(doc_id);
        return it == doc_pos_.end() ? nullptr : &docs_[it->second];
    }

    long doc_length(const std::string& doc_id) const {
        const Document* d = document(doc_id);
        return d ? static_cast<long>(d->length()) : 0;
    }

    const std::vector<Posting>* postings(const std::string& term) const {
        auto it = postings_.find(term);
        return it == postings_.end() ? nullptr : &it->second;
    }

    long collection_count(const std::string& term) const {
        auto it = collection_counts_.find(term);
        return it == collection_counts_.end() ? 0 : it->second;
    }

    const std::map<std::string, long>& collection_counts() const {
        return collection_counts_;
    }

    long doc_count_of_term(const std::string& term) const {
        auto p = postings(term);
        return p ? static_cast<long>(p->size()) : 0;
    }

    // Occurrences of an exact adjacent token sequence within one document.
    static long phrase_count(const Document& d, const std::vector<std::string>& words) {
        if (words.empty() || d.tokens.size() < words.size())
            return 0;
        if (words.size() == 1) {
            long n = 0;
            for (const auto& t : d.tokens)
                if (t == words[0]) n++;
            return n;
        }
        long n = 0;
        for (std::size_t i = 0; i + words.size() <= d.tokens.size(); ++i) {
            bool hit = true;
            for (std::size_t j = 0; j < words.size(); ++j) {
                if (d.tokens[i + j] != words[j]) { hit = false; break; }
            }
            if (hit) n++;
        }
        return n;
    }

    long collection_phrase_count(const std::vector<std::string>& words) const {
        if (words.size() == 1)
            return collection_count(words[0]);
        long n = 0;
        for (const auto& d : docs_)
            n += phrase_count(d, words);
        return n;
    }

    bool finalized() const { return finalized_; }

private:
    std::vector<Document> docs_;
    std::map<std::string, std::size_t> doc_pos_;
    std::map<std::string, std::vector<Posting>> postings_;
    std::map<std::string, long> collection_counts_;
    long total_tokens_ = 0;
    bool finalized_ = false;
};

// Windowed n-gram model over the collection's normalized token streams.
// Window keys are space-joined token sequences.
struct NGramModel {
    int window_size = 5;
    std::map<std::string, long> windows;
    std::map<std::string, long> unigram_counts;
};

inline NGramModel build_ngram_model(const CollectionIndex& index, int n) {
    if (n < 2)
        throw ConfigError("n-gram window size must be >= 2");
    NGramModel model;
    model.window_size = n;
    for (const auto& doc : index.documents()) {
        const auto& toks = doc.tokens;
        if (toks.empty())
            continue;
        std::size_t win = std::min<std::size_t>(toks.size(), static_cast<std::size_t>(n));
        for (std::size_t i = 0; i + win <= toks.size(); ++i) {
            std::string key;
            for (std::size_t j = 0; j < win; ++j) {
                if (j) key.push_back(' ');
                key += toks[i + j];
            }
            model.windows[key]++;
        }
        for (const auto& t : toks)
            model.unigram_counts[t]++;
    }
    return model;
}

// External n-gram counts: `term1 term2 ... termN<TAB>count` per line.
inline NGramModel load_ngram_file(const std::string& path, int n) {
    if (n < 2)
        throw ConfigError("n-gram window size must be >= 2");
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open n-gram file: " + path);
    NGramModel model;
    model.window_size = n;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("n-gram file line " + std::to_string(lineno) + ": missing tab");
        std::string seq = line.substr(0, tab);
        long count = 0;
        try {
            count = std::stol(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw ParseError("n-gram file line " + std::to_string(lineno) + ": bad count");
        }
        if (count <= 0)
            throw ParseError("n-gram file line " + std::to_string(lineno) + ": count must be positive");
        auto words = split_ws(seq);
        if (words.empty() || static_cast<int>(words.size()) > n)
            throw ParseError("n-gram file line " + std::to_string(lineno) + ": bad sequence length");
        std::string key;
        for (std::size_t j = 0; j < words.size(); ++j) {
            if (j) key.push_back(' ');
            key += words[j];
        }
        model.windows[key] += count;
        if (words.size() == 1)
            model.unigram_counts[words[0]] += count;
        else
            for (const auto& w : words)
                model.unigram_counts[w] += 1;  // presence, not window weight
    }
    return model;
}

struct WindowMatch {
    std::string window;
    long count = 0;
};

// All windows containing both terms of the pair, in either order, adjacent
// or not. A pair of identical terms requires two occurrences in the window.
inline std::vector<WindowMatch> window_matches(const std::pair<std::string, std::string>& pair,
                                               const NGramModel& model) {
    std::vector<WindowMatch> out;
    for (const auto& [window, count] : model.windows) {
        auto toks = split_ws(window);
        int need_first = 1 + (pair.first == pair.second ? 1 : 0);
        int seen_first = 0, seen_second = 0;
        for (const auto& t : toks) {
            if (t == pair.first) seen_first++;
            if (t == pair.second) seen_second++;
        }
        bool hit = (pair.first == pair.second)
                       ? seen_first >= need_first
                       : (seen_first >= 1 && seen_second >= 1);
        if (hit)
            out.push_back({window, count});
    }
    std::sort(out.begin(), out.end(), [](const WindowMatch& a, const WindowMatch& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.window < b.window;
    });
    return out;
}

struct IngestReport {
    std::vector<std::string> file_errors;
};

// Directory of *.txt files, one document per file, doc_id = filename stem.
inline CollectionIndex ingest_directory(const std::string& dir, const PipelineConfig& cfg,
                                        IngestReport* report = nullptr) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw std::runtime_error("corpus directory not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    CollectionIndex index;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) {
            if (report)
                report->file_errors.push_back(f.string());
            continue;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        index.add_document({f.stem().string(), normalize(buf.str(), cfg)});
    }
    if (index.doc_count() == 0)
        throw std::runtime_error("no documents ingested from " + dir);
    index.finalize();
    return index;
}

// TREC-SGML stream: <DOC> ... <DOCNO> id </DOCNO> ... </DOC>. All content
// between tags other than DOCNO contributes to the document text.
inline CollectionIndex ingest_trec(const std::string& path, const PipelineConfig& cfg) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open TREC corpus: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string data = buf.str();

    CollectionIndex index;
    std::size_t pos = 0;
    while (true) {
        auto start = data.find("<DOC>", pos);
        if (start == std::string::npos)
            break;
        auto end = data.find("</DOC>", start);
        if (end == std::string::npos)
            throw ParseError("unterminated <DOC> block in " + path);
        std::string block = data.substr(start + 5, end - start - 5);
        pos = end + 6;

        auto no_start = block.find("<DOCNO>");
        auto no_end = block.find("</DOCNO>");
        if (no_start == std::string::npos || no_end == std::string::npos)
            throw ParseError("missing <DOCNO> in " + path);
        std::string id = block.substr(no_start + 7, no_end - no_start - 7);
        // trim
        while (!id.empty() && std::isspace(static_cast<unsigned char>(id.front()))) id.erase(id.begin());
        while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.pop_back();

        // strip all tags, keep content
        std::string text;
        bool in_tag = false;
        std::string body = block.substr(0, no_start) + block.substr(no_end + 8);
        for (char ch : body) {
            if (ch == '<') { in_tag = true; continue; }
            if (ch == '>') { in_tag = false; text.push_back(' '); continue; }
            if (!in_tag) text.push_back(ch);
        }
        index.add_document({id, normalize(text, cfg)});
    }
    if (index.doc_count() == 0)
        throw std::runtime_error("no documents ingested from " + path);
    index.finalize();
    return index;
}

// ---------------------------------------------------------------------------
// Versioned binary persistence. The container stores the document token
// streams and the n-gram window size; derived statistics are rebuilt on load.

namespace detail {

constexpr char kIndexMagic[4] = {'C', 'I', 'D', 'X'};
constexpr std::uint32_t kIndexVersion = 1;

inline void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
inline void write_str(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
inline std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in)
        throw ParseError("truncated index file");
    return v;
}
inline std::string read_str(std::istream& in) {
    std::uint32_t n = read_u32(in);
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (!in)
        throw ParseError("truncated index file");
    return s;
}

}  // namespace detail

inline void save_index(const CollectionIndex& index, const NGramModel& model,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write index file: " + path);
    out.write(detail::kIndexMagic, 4);
    detail::write_u32(out, detail::kIndexVersion);
    detail::write_u32(out, static_cast<std::uint32_t>(model.window_size));
    detail::write_u32(out, static_cast<std::uint32_t>(index.doc_count()));
    for (const auto& d : index.documents()) {
        detail::write_str(out, d.id);
        detail::write_u32(out, static_cast<std::uint32_t>(d.tokens.size()));
        for (const auto& t : d.tokens)
            detail::write_str(out, t);
    }
}

inline std::pair<CollectionIndex, NGramModel> load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open index file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, detail::kIndexMagic, 4) != 0)
        throw ParseError("not an index file: " + path);
    std::uint32_t version = detail::read_u32(in);
    if (version != detail::kIndexVersion)
        throw ParseError("unsupported index format version " + std::to_string(version));
    int window_size = static_cast<int>(detail::read_u32(in));
    std::uint32_t n_docs = detail::read_u32(in);
    CollectionIndex index;
    for (std::uint32_t i = 0; i < n_docs; ++i) {
        Document d;
        d.id = detail::read_str(in);
        std::uint32_t n_toks = detail::read_u32(in);
        d.tokens.reserve(n_toks);
        for (std::uint32_t j = 0; j < n_toks; ++j)
            d.tokens.push_back(detail::read_str(in));
        index.add_document(std::move(d));
    }
    index.finalize();
    NGramModel model = build_ngram_model(index, window_size);
    return {std::move(index), std::move(model)};
}

}  // namespace conceptir
