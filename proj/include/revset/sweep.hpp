#pragma once

// Batch experiments over a grid of step-1 vector kinds x voting techniques x
// RL_top cutoffs x step-2 content types x relevance thresholds. One row per
// configuration, macro-averaged over the selected manuscripts. A failing
// (configuration, manuscript) cell is recorded, never fatal.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "revset/corpus.hpp"
#include "revset/evaluation.hpp"
#include "revset/expert_search.hpp"
#include "revset/format.hpp"
#include "revset/parallel.hpp"
#include "revset/set_assignment.hpp"

namespace revset {

struct SweepGrid {
    std::vector<VectorKind> kinds;
    std::vector<VotingTechnique> techniques;
    std::vector<std::optional<std::size_t>> cutoffs;  // nullopt = all
    std::vector<ContentType> contents;
    std::vector<double> thresholds;
    std::vector<std::string> manuscripts;  // empty = every manuscript
    ContentType step1_content = ContentType::full;
    AssignmentConfig base;                 // threshold and content are overridden per cell
    bool baselines = true;

    std::size_t size() const {
        return kinds.size() * techniques.size() * cutoffs.size() * contents.size() * thresholds.size();
    }

    /// 4 vector kinds x 17 techniques x 3 cutoffs x 2 content types x 4 thresholds = 1,632 configurations.
    static SweepGrid reference_grid() {
        SweepGrid g;
        g.kinds = {VectorKind::tfidf, VectorKind::dbow, VectorKind::dm, VectorKind::bert};
        g.techniques = standard_voting_techniques();
        g.cutoffs = {10, 20, std::nullopt};
        g.contents = {ContentType::full, ContentType::research};
        g.thresholds = {0.0, 0.25, 0.5, 0.9};
        return g;
    }

    static SweepGrid from_json(const nlohmann::json& j) {
        SweepGrid g = reference_grid();
        auto strings = [&](const char* key) {
            std::vector<std::string> out;
            const auto& v = j.at(key);
            if (!v.is_array()) throw DataError(std::string("grid field '") + key + "' must be an array");
            for (const auto& x : v) out.push_back(x.get<std::string>());
            return out;
        };
        try {
            if (j.contains("kinds")) {
                g.kinds.clear();
                for (const auto& s : strings("kinds")) {
                    auto k = parse_vector_kind(s);
                    if (!k) throw DataError("grid: unknown vector kind '" + s + "'");
                    g.kinds.push_back(*k);
                }
            }
            if (j.contains("techniques")) {
                if (j.at("techniques").is_string() && j.at("techniques") == "standard") {
                    g.techniques = standard_voting_techniques();
                } else {
                    g.techniques.clear();
                    for (const auto& s : strings("techniques")) g.techniques.push_back(VotingTechnique::parse(s));
                }
            }
            if (j.contains("cutoffs")) {
                g.cutoffs.clear();
                for (const auto& x : j.at("cutoffs")) {
                    if (x.is_string() && x == "all") {
                        g.cutoffs.push_back(std::nullopt);
                    } else if (x.is_number_unsigned() && x.get<std::size_t>() > 0) {
                        g.cutoffs.push_back(x.get<std::size_t>());
                    } else {
                        throw DataError("grid: cutoffs must be positive integers or \"all\"");
                    }
                }
            }
            if (j.contains("contents")) {
                g.contents.clear();
                for (const auto& s : strings("contents")) {
                    auto c = parse_content_type(s);
                    if (!c) throw DataError("grid: unknown content type '" + s + "'");
                    g.contents.push_back(*c);
                }
            }
            if (j.contains("thresholds")) g.thresholds = j.at("thresholds").get<std::vector<double>>();
            if (j.contains("manuscripts")) g.manuscripts = strings("manuscripts");
            if (j.contains("step1_content")) {
                auto c = parse_content_type(j.at("step1_content").get<std::string>());
                if (!c) throw DataError("grid: unknown step1_content");
                g.step1_content = *c;
            }
            if (j.contains("set_size")) g.base.set_size = j.at("set_size").get<std::size_t>();
            if (j.contains("expertise_weights")) g.base.expertise_weights = j.at("expertise_weights").get<std::array<double, 3>>();
            if (j.contains("alpha")) g.base.alpha = j.at("alpha").get<double>();
            if (j.contains("sigma")) g.base.sigma = j.at("sigma").get<double>();
            if (j.contains("seed")) g.base.rng_seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("relevance_kind")) {
                auto k = parse_vector_kind(j.at("relevance_kind").get<std::string>());
                if (!k) throw DataError("grid: unknown relevance_kind");
                g.base.relevance_kind = *k;
            }
            if (j.contains("coi_window_years") && !j.at("coi_window_years").is_null()) {
                g.base.coi_window_years = j.at("coi_window_years").get<int>();
            }
            if (j.contains("baselines")) g.baselines = j.at("baselines").get<bool>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("grid: ") + e.what());
        }
        if (g.size() == 0) throw DataError("grid: every dimension needs at least one value");
        for (double t : g.thresholds) {
            AssignmentConfig probe = g.base;
            probe.threshold = t;
            probe.validate();
        }
        g.base.validate();
        return g;
    }
};

struct SweepRow {
    VectorKind kind = VectorKind::tfidf;
    VotingTechnique technique;
    std::optional<std::size_t> cutoff;
    ContentType content = ContentType::full;
    double threshold = 0.0;

    std::size_t ok = 0;
    std::size_t failed = 0;
    std::string first_error;

    std::optional<double> p_at_10, map_at_10, ndcg_at_10;
    std::optional<double> r0_sc, r0_a, r0_s, r0_i, r0_d, r0_e;
    std::optional<double> bt3_sc, btr_sc, br_sc;

    std::string status() const { return failed == 0 ? "ok" : ok == 0 ? "failed" : "partial"; }
};

namespace detail {

struct CellOutcome {
    std::optional<std::string> error;
    ScoredReviewerSet best;
    std::optional<double> baseline_sc[3];
};

struct StepOneCache {
    std::optional<std::string> error;
    std::vector<RankedExpertList> lists;  // one per technique
};

inline std::uint64_t cell_seed(std::uint64_t base, std::size_t cell, std::size_t manuscript) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(manuscript)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t{out[0]} << 32) | out[1];
}

class Mean {
public:
    void add(double x) {
        sum_ += x;
        ++n_;
    }
    std::optional<double> value() const {
        if (n_ == 0) return std::nullopt;
        return sum_ / static_cast<double>(n_);
    }

private:
    double sum_ = 0.0;
    std::size_t n_ = 0;
};

}  // namespace detail

/// Runs every configuration of `grid` on `corpus`. Rows come out in grid
/// order (kind, technique, cutoff, content, threshold) and are identical for
/// any thread count.
inline std::vector<SweepRow> sweep(const Corpus& corpus, const SweepGrid& grid, std::size_t threads = 1) {
    if (grid.size() == 0) throw DataError("sweep grid is empty");
    std::vector<const ManuscriptRecord*> manuscripts;
    if (grid.manuscripts.empty()) {
        for (const auto& m : corpus.manuscripts) manuscripts.push_back(&m);
    } else {
        for (const auto& id : grid.manuscripts) manuscripts.push_back(&corpus.manuscript(id));
    }
    const auto nm = manuscripts.size();
    const auto nk = grid.kinds.size();
    const auto nv = grid.techniques.size();
    SearchOptions search{grid.base.coi_window_years, 1};

    std::vector<detail::StepOneCache> step1(nm * nk);
    parallel_for(nm * nk, threads, [&](std::size_t idx) {
        const auto& m = *manuscripts[idx / nk];
        auto& slot = step1[idx];
        try {
            auto ctx = build_context(m, corpus.pool, grid.kinds[idx % nk], grid.step1_content, search);
            if (ctx.reviewer_hits.empty()) throw NoEligibleReviewers(m.id);
            for (const auto& vt : grid.techniques) slot.lists.push_back(rank_experts(ctx, vt));
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    // Cell order: kind, technique, cutoff, content, threshold.
    const auto nc = grid.cutoffs.size(), nt = grid.contents.size(), nth = grid.thresholds.size();
    const auto cells = grid.size();
    std::vector<detail::CellOutcome> outcomes(cells * nm);
    parallel_for(cells * nm, threads, [&](std::size_t flat) {
        const std::size_t cell = flat / nm, mi = flat % nm;
        std::size_t rest = cell;
        const auto thi = rest % nth;
        rest /= nth;
        const auto cti = rest % nt;
        rest /= nt;
        const auto ci = rest % nc;
        rest /= nc;
        const auto vi = rest % nv;
        const auto ki = rest / nv;

        auto& out = outcomes[flat];
        const auto& cache = step1[mi * nk + ki];
        if (cache.error) {
            out.error = *cache.error;
            return;
        }
        const auto& m = *manuscripts[mi];
        AssignmentConfig cfg = grid.base;
        cfg.threshold = grid.thresholds[thi];
        cfg.content = grid.contents[cti];
        cfg.rng_seed = detail::cell_seed(grid.base.rng_seed, cell, mi);
        const auto& rl = cache.lists[vi];
        try {
            auto rl_top = rl.top(grid.cutoffs[ci]);
            auto profiles = build_profiles(m, rl_top, corpus.pool, cfg);
            out.best = assign(profiles, m, cfg, corpus.pool, 1, 1).front();
            if (grid.baselines) {
                const Baseline kinds[3] = {Baseline::top, Baseline::random_top, Baseline::random_committee};
                for (int b = 0; b < 3; ++b) {
                    try {
                        out.baseline_sc[b] = baseline(kinds[b], m, rl, profiles, corpus.pool, cfg).sc;
                    } catch (const InfeasibleError&) {
                    }
                }
            }
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    });

    std::vector<SweepRow> rows;
    rows.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t rest = cell;
        SweepRow row;
        row.threshold = grid.thresholds[rest % nth];
        rest /= nth;
        row.content = grid.contents[rest % nt];
        rest /= nt;
        row.cutoff = grid.cutoffs[rest % nc];
        rest /= nc;
        const auto vi = rest % nv;
        const auto ki = rest / nv;
        row.technique = grid.techniques[vi];
        row.kind = grid.kinds[ki];

        detail::Mean sc, a, s, i, d, e, bt[3];
        std::map<std::string, std::vector<std::string>> rankings;
        for (std::size_t mi = 0; mi < nm; ++mi) {
            const auto& out = outcomes[cell * nm + mi];
            const auto& cache = step1[mi * nk + ki];
            if (!cache.error) rankings[manuscripts[mi]->id] = cache.lists[vi].reviewer_ids();
            if (out.error) {
                ++row.failed;
                if (row.first_error.empty()) row.first_error = manuscripts[mi]->id + ": " + *out.error;
                continue;
            }
            ++row.ok;
            sc.add(out.best.sc);
            a.add(out.best.authority);
            s.add(out.best.seniority);
            i.add(out.best.interest);
            d.add(out.best.diversity);
            e.add(out.best.expertise);
            for (int b = 0; b < 3; ++b) {
                if (out.baseline_sc[b]) bt[b].add(*out.baseline_sc[b]);
            }
        }
        row.r0_sc = sc.value();
        row.r0_a = a.value();
        row.r0_s = s.value();
        row.r0_i = i.value();
        row.r0_d = d.value();
        row.r0_e = e.value();
        row.bt3_sc = bt[0].value();
        row.btr_sc = bt[1].value();
        row.br_sc = bt[2].value();
        if (corpus.ground_truth) {
            auto report = evaluate_rankings(rankings, corpus.ground_truth->relevant);
            if (!report.per_manuscript.empty()) {
                row.p_at_10 = report.macro.p_at_k;
                row.map_at_10 = report.macro.map_at_k;
                row.ndcg_at_10 = report.macro.ndcg_at_k;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Tab-separated table; '#' lines echo the fixed part of the configuration.
inline void write_sweep_table(std::ostream& out, const SweepGrid& grid, const std::vector<SweepRow>& rows) {
    const auto& b = grid.base;
    out << "# revset sweep\n";
    out << "# set_size=" << b.set_size << " expertise_weights=" << format_real(b.expertise_weights[0]) << ','
        << format_real(b.expertise_weights[1]) << ',' << format_real(b.expertise_weights[2])
        << " alpha=" << format_real(b.alpha) << " sigma=" << format_real(b.sigma) << " seed=" << b.rng_seed
        << " relevance_kind=" << to_string(b.relevance_kind) << " step1_content=" << to_string(grid.step1_content)
        << " coi_window_years=" << (b.coi_window_years ? std::to_string(*b.coi_window_years) : "unlimited") << '\n';
    out << "# ndcg: " << kNdcgVariant << "\n";
    out << "kind\ttechnique\tcutoff\tcontent\tthreshold\tstatus\tok\tfailed\tp_at_10\tmap_at_10\tndcg_at_10"
           "\tr0_sc\tr0_A\tr0_S\tr0_I\tr0_D\tr0_E\tbt3_sc\tbtr_sc\tbr_sc\terror\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("NA"); };
    for (const auto& r : rows) {
        std::string error = r.first_error;
        std::replace(error.begin(), error.end(), '\t', ' ');
        std::replace(error.begin(), error.end(), '\n', ' ');
        out << to_string(r.kind) << '\t' << r.technique.name() << '\t'
            << (r.cutoff ? std::to_string(*r.cutoff) : std::string("all")) << '\t' << to_string(r.content) << '\t'
            << format_real(r.threshold) << '\t' << r.status() << '\t' << r.ok << '\t' << r.failed << '\t'
            << opt(r.p_at_10) << '\t' << opt(r.map_at_10) << '\t' << opt(r.ndcg_at_10) << '\t' << opt(r.r0_sc) << '\t'
            << opt(r.r0_a) << '\t' << opt(r.r0_s) << '\t' << opt(r.r0_i) << '\t' << opt(r.r0_d) << '\t'
            << opt(r.r0_e) << '\t' << opt(r.bt3_sc) << '\t' << opt(r.btr_sc) << '\t' << opt(r.br_sc) << '\t'
            << (error.empty() ? "-" : error) << '\n';
    }
}

}  // namespace revset
