#pragma once

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "conceptir/eval.hpp"
#include "conceptir/retrieval.hpp"

namespace conceptir {

// Five genes, one per role-type; the SC gene is pinned to 0 and only the
// other four evolve.
struct Chromosome {
    std::array<double, 5> genes{};  // CoI, DC, RC, SC, EC
    double fitness = -1.0;          // MAP, or -1 when unset

    RoleWeights weights() const {
        RoleWeights w;
        w.coi = genes[0];
        w.dc = genes[1];
        w.rc = genes[2];
        w.sc = 0.0;
        w.ec = genes[4];
        return w;
    }
};

struct GAConfig {
    int population_size = 200;
    int max_iterations = 100;
    double crossover_rate = 0.9;   // per offspring pair
    double mutation_rate = 0.1;    // per evolving gene
    // optional per-generation event counts; when > 0 they replace the
    // probabilistic rates
    int crossover_events = 0;
    int mutation_events = 0;
    std::uint64_t rng_seed = 42;
    int elitism_count = 1;
    int stagnation_limit = 0;  // 0 = disabled
    double boost_threshold = 0.5;
    double boost_multiplier = 1.5;

    void validate() const {
        if (population_size < 2)
            throw ConfigError("GA population_size must be >= 2");
        if (max_iterations < 1)
            throw ConfigError("GA max_iterations must be >= 1");
        if (crossover_rate < 0 || crossover_rate > 1 || mutation_rate < 0 || mutation_rate > 1)
            throw ConfigError("GA rates must be in [0,1]");
        if (elitism_count < 1 || elitism_count > population_size)
            throw ConfigError("GA elitism_count must be in [1, population_size]");
    }
};

// Pre-scored evaluation fixture: per topic, per candidate document, the
// weight-independent Sat value and the per-role counts of matched distinct
// query concepts. Fitness then only recombines these with a weight vector.
class FitnessContext {
public:
    struct DocEntry {
        std::string doc_id;
        double sat = 0.0;
        std::array<long, 5> role_matches{};  // CoI, DC, RC, SC, EC
        bool relevant = false;
    };
    struct TopicEntry {
        int topic = 0;
        std::size_t query_size = 0;  // |q|
        std::vector<DocEntry> docs;
        long relevant_total = 0;
    };

    FitnessContext(const CollectionIndex& index, const SmoothingConfig& cfg,
                   const std::vector<std::pair<int, QueryBag>>& topic_bags, const Qrels& qrels,
                   int depth = 1000)
        : depth_(depth) {
        if (topic_bags.empty())
            throw std::runtime_error("GA fitness: empty topic set");
        for (const auto& [topic, bag] : topic_bags) {
            auto qit = qrels.find(topic);
            if (qit == qrels.end() || qit->second.empty())
                continue;
            TopicEntry te;
            te.topic = topic;
            te.query_size = bag.size;
            te.relevant_total = static_cast<long>(qit->second.size());
            ConceptStats stats(index);
            for (const Document* d : detail::candidates(bag, index)) {
                DocEntry de;
                de.doc_id = d->id;
                bool any = false;
                for (const auto& e : bag.entries) {
                    if (ConceptStats::doc_count(*d, e) > 0) {
                        de.role_matches[role_slot(e.role)]++;
                        any = true;
                    }
                }
                if (!any)
                    continue;
                de.sat = sat(*d, bag, index, stats, cfg).value;
                de.relevant = qit->second.count(d->id) > 0;
                te.docs.push_back(std::move(de));
            }
            topics_.push_back(std::move(te));
        }
        if (topics_.empty())
            throw std::runtime_error("GA fitness: no evaluable topics");
    }

    // MAP over the fixture under the given weights.
    double map(const RoleWeights& w) const {
        std::array<double, 5> wv{w.coi, w.dc, w.rc, 0.0, w.ec};
        double total = 0.0;
        for (const auto& te : topics_) {
            std::vector<std::pair<double, const DocEntry*>> scored;
            for (const auto& de : te.docs) {
                double imp_num = 0.0;
                for (int r = 0; r < 5; ++r)
                    imp_num += wv[static_cast<std::size_t>(r)] *
                               static_cast<double>(de.role_matches[static_cast<std::size_t>(r)]);
                if (imp_num <= 0.0)
                    continue;
                double imp = imp_num / static_cast<double>(te.query_size);
                scored.emplace_back(de.sat + std::log(imp), &de);
            }
            std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second->doc_id < b.second->doc_id;
            });
            if (static_cast<int>(scored.size()) > depth_)
                scored.resize(static_cast<std::size_t>(depth_));
            double sum = 0.0;
            long hits = 0;
            for (std::size_t r = 0; r < scored.size(); ++r) {
                if (scored[r].second->relevant) {
                    hits++;
                    sum += static_cast<double>(hits) / static_cast<double>(r + 1);
                }
            }
            total += sum / static_cast<double>(te.relevant_total);
        }
        return total / static_cast<double>(topics_.size());
    }

    std::size_t topic_count() const { return topics_.size(); }

private:
    static std::size_t role_slot(Role r) {
        switch (r) {
        case Role::CoI: return 0;
        case Role::DC: return 1;
        case Role::RC: return 2;
        case Role::SC: return 3;
        case Role::EC: return 4;
        default: return 3;
        }
    }

    std::vector<TopicEntry> topics_;
    int depth_;
};

inline double fitness(const Chromosome& ch, const FitnessContext& ctx) {
    return ctx.map(ch.weights());
}

inline std::vector<Chromosome> init_population(const GAConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<Chromosome> pop(static_cast<std::size_t>(cfg.population_size));
    for (auto& ch : pop) {
        for (std::size_t g = 0; g < 5; ++g)
            ch.genes[g] = (g == 3) ? 0.0 : uni(rng);
    }
    return pop;
}

struct GenerationStats {
    int generation = 0;
    double best_map = 0.0;   // best-ever, monotone non-decreasing
    double mean_map = 0.0;
    std::array<double, 4> best_genes{};  // CoI, DC, RC, EC of the best-ever
};

struct GAResult {
    RoleWeights best;
    double best_map = 0.0;
    std::vector<GenerationStats> history;
};

// Tournament-2 selection with elitism, single-point crossover over the
// four evolving genes, per-gene Gaussian mutation (sigma 0.1) clamped to
// [0,1]. Chromosomes above the boost threshold get a selection-weight
// multiplier; the boost never touches the reported MAP.
inline GAResult evolve(const GAConfig& cfg, const FitnessContext& ctx) {
    cfg.validate();
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 0.1);
    // evolving gene slots: CoI, DC, RC, EC
    static constexpr std::array<std::size_t, 4> kEvolving = {0, 1, 2, 4};

    auto pop = init_population(cfg, rng);
    for (auto& ch : pop)
        ch.fitness = fitness(ch, ctx);

    auto boosted = [&](const Chromosome& ch) {
        return ch.fitness > cfg.boost_threshold ? ch.fitness * cfg.boost_multiplier : ch.fitness;
    };
    auto pick = [&]() -> const Chromosome& {
        std::uniform_int_distribution<std::size_t> idx(0, pop.size() - 1);
        const Chromosome& a = pop[idx(rng)];
        const Chromosome& b = pop[idx(rng)];
        return boosted(a) >= boosted(b) ? a : b;
    };
    auto crossover = [&](Chromosome& a, Chromosome& b) {
        std::uniform_int_distribution<std::size_t> cut(1, kEvolving.size() - 1);
        std::size_t point = cut(rng);
        for (std::size_t g = point; g < kEvolving.size(); ++g)
            std::swap(a.genes[kEvolving[g]], b.genes[kEvolving[g]]);
    };
    auto mutate_gene = [&](Chromosome& ch, std::size_t slot) {
        double v = ch.genes[slot] + gauss(rng);
        ch.genes[slot] = std::min(1.0, std::max(0.0, v));
    };

    Chromosome best_ever = pop.front();
    for (const auto& ch : pop)
        if (ch.fitness > best_ever.fitness)
            best_ever = ch;

    GAResult result;
    int stagnant = 0;
    for (int gen = 1; gen <= cfg.max_iterations; ++gen) {
        // elitism: carry the top chromosomes unchanged
        std::vector<Chromosome> next;
        {
            auto sorted = pop;
            std::sort(sorted.begin(), sorted.end(),
                      [](const Chromosome& a, const Chromosome& b) { return a.fitness > b.fitness; });
            for (int e = 0; e < cfg.elitism_count; ++e)
                next.push_back(sorted[static_cast<std::size_t>(e)]);
        }
        std::vector<Chromosome> offspring;
        while (next.size() + offspring.size() < pop.size()) {
            Chromosome a = pick();
            Chromosome b = pick();
            if (cfg.crossover_events <= 0 && uni(rng) < cfg.crossover_rate)
                crossover(a, b);
            if (cfg.mutation_events <= 0) {
                for (std::size_t slot : kEvolving) {
                    if (uni(rng) < cfg.mutation_rate) mutate_gene(a, slot);
                    if (uni(rng) < cfg.mutation_rate) mutate_gene(b, slot);
                }
            }
            a.fitness = -1.0;
            b.fitness = -1.0;
            offspring.push_back(std::move(a));
            if (next.size() + offspring.size() < pop.size())
                offspring.push_back(std::move(b));
        }
        // event-count mode: a fixed number of crossover/mutation events per
        // generation over the offspring
        if (cfg.crossover_events > 0 && offspring.size() >= 2) {
            std::uniform_int_distribution<std::size_t> idx(0, offspring.size() - 1);
            for (int e = 0; e < cfg.crossover_events; ++e) {
                std::size_t i = idx(rng), j = idx(rng);
                if (i != j)
                    crossover(offspring[i], offspring[j]);
            }
        }
        if (cfg.mutation_events > 0 && !offspring.empty()) {
            std::uniform_int_distribution<std::size_t> idx(0, offspring.size() - 1);
            std::uniform_int_distribution<std::size_t> gidx(0, kEvolving.size() - 1);
            for (int e = 0; e < cfg.mutation_events; ++e)
                mutate_gene(offspring[idx(rng)], kEvolving[gidx(rng)]);
        }
        for (auto& ch : offspring) {
            ch.fitness = fitness(ch, ctx);
            next.push_back(std::move(ch));
        }
        pop = std::move(next);

        double prev_best = best_ever.fitness;
        double mean = 0.0;
        for (const auto& ch : pop) {
            mean += ch.fitness;
            if (ch.fitness > best_ever.fitness)
                best_ever = ch;
        }
        mean /= static_cast<double>(pop.size());

        GenerationStats gs;
        gs.generation = gen;
        gs.best_map = best_ever.fitness;
        gs.mean_map = mean;
        gs.best_genes = {best_ever.genes[0], best_ever.genes[1], best_ever.genes[2],
                         best_ever.genes[4]};
        result.history.push_back(gs);

        if (best_ever.fitness > prev_best)
            stagnant = 0;
        else
            stagnant++;
        if (cfg.stagnation_limit > 0 && stagnant >= cfg.stagnation_limit)
            break;
    }
    result.best = best_ever.weights();
    result.best_map = best_ever.fitness;
    return result;
}

// Tuning report: `gen<TAB>best_map<TAB>mean_map<TAB>best_genes(4 floats)`.
inline std::string format_tuning_report(const GAResult& result) {
    std::string out = "generation\tbest_map\tmean_map\tbest_genes\n";
    char buf[160];
    for (const auto& gs : result.history) {
        std::snprintf(buf, sizeof(buf), "%d\t%.6f\t%.6f\t%.6f %.6f %.6f %.6f\n", gs.generation,
                      gs.best_map, gs.mean_map, gs.best_genes[0], gs.best_genes[1],
                      gs.best_genes[2], gs.best_genes[3]);
        out += buf;
    }
    return out;
}

// Weights file consumed by retrieval: `key = value` lines.
inline std::string format_weights(const RoleWeights& w) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "w_coi = %.9f\nw_dc = %.9f\nw_rc = %.9f\nw_sc = 0\nw_ec = %.9f\n", w.coi, w.dc,
                  w.rc, w.ec);
    return buf;
}

}  // namespace conceptir
