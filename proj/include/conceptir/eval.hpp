#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conceptir/index.hpp"

namespace conceptir {

struct Topic {
    int number = 0;
    std::string title;
    std::string description;
    std::string narrative;
};

// (topic, doc_id) -> binary relevance
using Qrels = std::map<int, std::set<std::string>>;

// ---------------------------------------------------------------------------
// TREC topic format:
//   <top> <num> Number: 151 <title> Topic: ... <desc> ... <narr> ... </top>

inline std::vector<Topic> parse_topics(std::istream& in) {
    std::vector<Topic> topics;
    std::string line;
    Topic cur;
    bool in_top = false;
    std::string* sink = nullptr;
    int lineno = 0;

    auto strip = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
    };
    auto strip_prefix = [&](std::string s, const char* prefix) {
        s = strip(std::move(s));
        std::size_t n = std::strlen(prefix);
        if (s.compare(0, n, prefix) == 0)
            s = strip(s.substr(n));
        return s;
    };
    auto finish = [&]() {
        if (!in_top)
            return;
        if (cur.number == 0)
            throw ParseError("topic block without <num> near line " + std::to_string(lineno));
        if (strip(cur.title).empty())
            throw ParseError("topic " + std::to_string(cur.number) + " has no <title>");
        cur.title = strip(cur.title);
        cur.description = strip(cur.description);
        cur.narrative = strip(cur.narrative);
        topics.push_back(cur);
        cur = {};
        in_top = false;
        sink = nullptr;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(line);
        if (s.rfind("<top>", 0) == 0) {
            finish();
            in_top = true;
            continue;
        }
        if (s.rfind("</top>", 0) == 0) {
            finish();
            continue;
        }
        if (!in_top)
            continue;
        if (s.rfind("<num>", 0) == 0) {
            std::string rest = strip_prefix(s.substr(5), "Number:");
            try {
                cur.number = std::stoi(rest);
            } catch (const std::exception&) {
                throw ParseError("bad topic number at line " + std::to_string(lineno));
            }
            sink = nullptr;
        } else if (s.rfind("<title>", 0) == 0) {
            cur.title = strip_prefix(s.substr(7), "Topic:");
            sink = &cur.title;
        } else if (s.rfind("<desc>", 0) == 0) {
            cur.description = strip_prefix(s.substr(6), "Description:");
            sink = &cur.description;
        } else if (s.rfind("<narr>", 0) == 0) {
            cur.narrative = strip_prefix(s.substr(6), "Narrative:");
            sink = &cur.narrative;
        } else if (sink) {
            if (!sink->empty())
                sink->push_back(' ');
            *sink += s;
        }
    }
    finish();
    return topics;
}

inline std::vector<Topic> parse_topics_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open topics file: " + path);
    return parse_topics(in);
}

// ---------------------------------------------------------------------------
// Qrels: whitespace-separated `topic iter doc_id rel`; graded values > 0
// map to relevant. Duplicate lines: last wins.

inline Qrels parse_qrels(std::istream& in, std::vector<std::string>* warnings = nullptr) {
    Qrels qrels;
    std::map<std::pair<int, std::string>, int> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(line);
        if (fields.empty())
            continue;
        if (fields.size() != 4)
            throw ParseError("qrels line " + std::to_string(lineno) + ": expected 4 fields");
        int topic = 0, rel = 0;
        try {
            topic = std::stoi(fields[0]);
            rel = std::stoi(fields[3]);
        } catch (const std::exception&) {
            throw ParseError("qrels line " + std::to_string(lineno) + ": bad number");
        }
        auto key = std::make_pair(topic, fields[2]);
        if (seen.count(key) && warnings)
            warnings->push_back("duplicate qrels entry for topic " + fields[0] + " doc " +
                                fields[2] + " (last wins)");
        seen[key] = rel;
    }
    for (const auto& [key, rel] : seen)
        if (rel > 0)
            qrels[key.first].insert(key.second);
        else
            qrels[key.first];  // topic known, doc non-relevant
    return qrels;
}

inline Qrels parse_qrels_file(const std::string& path, std::vector<std::string>* warnings = nullptr) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open qrels file: " + path);
    return parse_qrels(in, warnings);
}

// ---------------------------------------------------------------------------
// Metrics

// AP = (sum over ranks r where doc_r is relevant of precision@r) / |relevant|.
inline double average_precision(const std::vector<std::string>& ranking,
                                const std::set<std::string>& relevant) {
    if (relevant.empty())
        throw std::runtime_error("average_precision: empty relevant set");
    double sum = 0.0;
    long hits = 0, rank = 0;
    std::set<std::string> seen;
    for (const auto& doc : ranking) {
        if (!seen.insert(doc).second)
            continue;
        rank++;
        if (relevant.count(doc)) {
            hits++;
            sum += static_cast<double>(hits) / static_cast<double>(rank);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

inline double map_score(const std::vector<double>& per_topic_ap) {
    if (per_topic_ap.empty())
        throw std::runtime_error("map_score: no evaluable topics");
    double sum = 0.0;
    for (double ap : per_topic_ap)
        sum += ap;
    return sum / static_cast<double>(per_topic_ap.size());
}

// ---------------------------------------------------------------------------
// Paired t-test with an in-repo t CDF via the regularized incomplete beta.

namespace detail {

inline double betacf(double a, double b, double x) {
    const int max_iter = 200;
    const double eps = 3e-14, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            break;
    }
    return h;
}

inline double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                   b * std::log(1.0 - x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace detail

// Two-sided p-value of Student's t with df degrees of freedom.
inline double t_test_p_value(double t, double df) {
    double x = df / (df + t * t);
    return detail::reg_inc_beta(df / 2.0, 0.5, x);
}

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    bool significant = false;  // p < 0.05
    bool epsilon_guard = false;
};

// Two-sided paired t-test on per-topic differences, significance at
// p < 0.05. Zero-variance identical inputs: t = 0, p = 1. Zero-variance
// nonzero-mean differences: sd clamped to 1e-12 with a flag.
inline TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::runtime_error("paired_t_test: length mismatch");
    if (a.size() < 2)
        throw std::runtime_error("paired_t_test: need >= 2 pairs");
    const auto n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        mean += a[i] - b[i];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = (a[i] - b[i]) - mean;
        var += d * d;
    }
    var /= (n - 1.0);
    double sd = std::sqrt(var);

    TTestResult r;
    if (sd == 0.0 && mean == 0.0) {
        r.t = 0.0;
        r.p = 1.0;
        r.significant = false;
        return r;
    }
    if (sd == 0.0) {
        sd = 1e-12;
        r.epsilon_guard = true;
    }
    r.t = mean / (sd / std::sqrt(n));
    r.p = t_test_p_value(r.t, n - 1.0);
    r.significant = r.p < 0.05;
    return r;
}

// ---------------------------------------------------------------------------
// Runs and reporting

struct EvalRun {
    std::string tag;
    std::map<int, std::vector<std::string>> rankings;  // topic -> ranked doc ids
    std::map<int, double> ap;                          // evaluable topics only
    double map = 0.0;
};

// TREC run format: `topic_id Q0 doc_id rank score run_tag`.
inline EvalRun parse_run(std::istream& in, const std::string& fallback_tag = "run") {
    EvalRun run;
    run.tag = fallback_tag;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(line);
        if (fields.empty())
            continue;
        if (fields.size() != 6)
            throw ParseError("run line " + std::to_string(lineno) + ": expected 6 fields");
        int topic = 0;
        try {
            topic = std::stoi(fields[0]);
        } catch (const std::exception&) {
            throw ParseError("run line " + std::to_string(lineno) + ": bad topic id");
        }
        run.rankings[topic].push_back(fields[2]);
        run.tag = fields[5];
    }
    return run;
}

inline EvalRun parse_run_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open run file: " + path);
    return parse_run(in);
}

// Scores a run: per-topic AP over topics with a non-empty relevant set,
// MAP over those topics. Topics with no relevant documents are skipped.
inline void evaluate_run(EvalRun& run, const Qrels& qrels,
                         std::vector<std::string>* warnings = nullptr) {
    run.ap.clear();
    std::vector<double> aps;
    for (const auto& [topic, ranking] : run.rankings) {
        auto it = qrels.find(topic);
        if (it == qrels.end() || it->second.empty()) {
            if (warnings)
                warnings->push_back("topic " + std::to_string(topic) +
                                    " has no relevant documents; skipped");
            continue;
        }
        double ap = average_precision(ranking, it->second);
        run.ap[topic] = ap;
        aps.push_back(ap);
    }
    run.map = map_score(aps);
}

// Comparison table mirroring per-baseline significance markers.
// CSV header: system,map,rel_improvement_pct,significant_vs
inline std::string report(std::vector<EvalRun>& runs, const Qrels& qrels,
                          std::size_t n_baselines = 1) {
    if (runs.empty())
        throw std::runtime_error("report: no runs");
    if (n_baselines == 0 || n_baselines > runs.size())
        n_baselines = 1;
    for (auto& run : runs)
        evaluate_run(run, qrels);

    auto paired_aps = [](const EvalRun& x, const EvalRun& y) {
        std::pair<std::vector<double>, std::vector<double>> out;
        for (const auto& [topic, ap] : x.ap) {
            auto it = y.ap.find(topic);
            if (it != y.ap.end()) {
                out.first.push_back(ap);
                out.second.push_back(it->second);
            }
        }
        return out;
    };

    std::ostringstream out;
    out << "system,map,rel_improvement_pct,significant_vs\n";
    const EvalRun& primary = runs.front();
    for (const auto& run : runs) {
        double improvement = primary.map > 0.0
                                 ? (run.map - primary.map) / primary.map * 100.0
                                 : 0.0;
        if (&run == &primary)
            improvement = 0.0;
        std::string markers;
        for (std::size_t b = 0; b < n_baselines; ++b) {
            if (&run == &runs[b])
                continue;
            auto [x, y] = paired_aps(run, runs[b]);
            if (x.size() < 2)
                continue;
            auto t = paired_t_test(x, y);
            if (t.significant && run.map > runs[b].map) {
                if (!markers.empty()) markers.push_back('|');
                markers += runs[b].tag;
            }
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f", run.map);
        out << run.tag << ',' << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.1f", improvement);
        out << buf << ',' << markers << '\n';
    }
    return out.str();
}

}  // namespace conceptir
