#pragma once

// Expert search: score each conflict-free reviewer against a manuscript by
// fusing the similarities of their publications with a voting technique,
// then rank reviewers by that score.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "revset/corpus.hpp"
#include "revset/error.hpp"
#include "revset/format.hpp"
#include "revset/parallel.hpp"
#include "revset/vectorspace.hpp"

namespace revset {

struct VotingTechnique {
    enum class Family { votes, sum, avg, mnz, sum_n, min, max, rr, mrr, borda_fuse, exp_sum, exp_avg, exp_mnz };

    Family family = Family::sum;
    double delta = 0.0;  // votes only
    int n = 1;           // sum_n only

    static VotingTechnique votes(double delta) { return {Family::votes, delta, 1}; }
    static VotingTechnique sum_n(int n) { return {Family::sum_n, 0.0, n}; }

    /// Canonical name, e.g. "sum", "votes:0.25", "sum_n:5".
    std::string name() const {
        switch (family) {
            case Family::votes: return "votes:" + format_real(delta);
            case Family::sum: return "sum";
            case Family::avg: return "avg";
            case Family::mnz: return "mnz";
            case Family::sum_n: return "sum_n:" + std::to_string(n);
            case Family::min: return "min";
            case Family::max: return "max";
            case Family::rr: return "rr";
            case Family::mrr: return "mrr";
            case Family::borda_fuse: return "borda_fuse";
            case Family::exp_sum: return "exp_sum";
            case Family::exp_avg: return "exp_avg";
            case Family::exp_mnz: return "exp_mnz";
        }
        return "?";
    }

    /// Accepts canonical names; "votes" alone means delta = 0. Throws DataError.
    static VotingTechnique parse(std::string_view text) {
        auto colon = text.find(':');
        std::string_view head = text.substr(0, colon);
        std::optional<std::string_view> param;
        if (colon != std::string_view::npos) param = text.substr(colon + 1);
        auto bad = [&](const std::string& why) -> DataError {
            return DataError("invalid voting technique '" + std::string(text) + "': " + why);
        };
        auto no_param = [&](Family f) {
            if (param) throw bad("takes no parameter");
            return VotingTechnique{f, 0.0, 1};
        };
        if (head == "votes") {
            double d = 0.0;
            if (param) {
                auto [p, ec] = std::from_chars(param->data(), param->data() + param->size(), d);
                if (ec != std::errc() || p != param->data() + param->size()) throw bad("delta is not a number");
            }
            if (!(d >= 0.0 && d <= 1.0)) throw bad("delta must lie in [0, 1]");
            return votes(d);
        }
        if (head == "sum_n" || head == "sumn") {
            if (!param) throw bad("sum_n needs :n");
            int v = 0;
            auto [p, ec] = std::from_chars(param->data(), param->data() + param->size(), v);
            if (ec != std::errc() || p != param->data() + param->size() || v < 1) throw bad("n must be an integer >= 1");
            return sum_n(v);
        }
        if (head == "sum") return no_param(Family::sum);
        if (head == "avg") return no_param(Family::avg);
        if (head == "mnz") return no_param(Family::mnz);
        if (head == "min") return no_param(Family::min);
        if (head == "max") return no_param(Family::max);
        if (head == "rr") return no_param(Family::rr);
        if (head == "mrr") return no_param(Family::mrr);
        if (head == "borda_fuse" || head == "borda" || head == "bordafuse") return no_param(Family::borda_fuse);
        if (head == "exp_sum") return no_param(Family::exp_sum);
        if (head == "exp_avg") return no_param(Family::exp_avg);
        if (head == "exp_mnz") return no_param(Family::exp_mnz);
        throw bad("unknown name");
    }

    friend bool operator==(const VotingTechnique&, const VotingTechnique&) = default;
};

/// The 17 parameterizations used in the reference experiments:
/// votes with delta in {0, .25, .5, .9}, sum_n with n in {5, 10}, and the
/// eleven unparameterized techniques.
inline std::vector<VotingTechnique> standard_voting_techniques() {
    using F = VotingTechnique::Family;
    return {VotingTechnique::votes(0.0), VotingTechnique::votes(0.25), VotingTechnique::votes(0.5),
            VotingTechnique::votes(0.9), {F::sum},  {F::avg},  {F::mnz},  VotingTechnique::sum_n(5),
            VotingTechnique::sum_n(10),  {F::min},  {F::max},  {F::rr},   {F::mrr},
            {F::borda_fuse},             {F::exp_sum}, {F::exp_avg}, {F::exp_mnz}};
}

struct PublicationHit {
    std::string publication_id;
    double similarity = 0.0;
    std::size_t global_rank = 0;    // 1-based over all eligible reviewers' publications
    std::size_t reviewer_rank = 0;  // 1-based within the reviewer's own publications
};

/// Similarities and ranks of every publication of every eligible reviewer.
struct SimilarityContext {
    std::string manuscript_id;
    VectorKind kind = VectorKind::tfidf;
    ContentType content = ContentType::full;
    std::map<std::string, std::vector<PublicationHit>> reviewer_hits;  // sorted by reviewer_rank
    std::unordered_map<std::string, double> similarity;
    std::unordered_map<std::string, std::size_t> global_rank;
    std::size_t total_pub_count = 0;
    std::vector<std::string> conflicted_reviewers;
    std::vector<std::string> excluded_reviewers;  // conflict-free but without vectors of `kind`

    std::vector<std::string> eligible_reviewers() const {
        std::vector<std::string> out;
        out.reserve(reviewer_hits.size());
        for (const auto& [id, hits] : reviewer_hits) out.push_back(id);
        return out;
    }
};

struct SearchOptions {
    std::optional<int> coi_window_years;
    std::size_t threads = 1;
};

/// Ties in similarity are broken by ascending publication id.
inline SimilarityContext build_context(const ManuscriptRecord& m, const CandidatePool& pool, VectorKind kind,
                                       ContentType content, const SearchOptions& options = {}) {
    const DocVector& query = m.require_vector(content, kind);

    SimilarityContext ctx;
    ctx.manuscript_id = m.id;
    ctx.kind = kind;
    ctx.content = content;

    std::map<std::string, std::vector<std::string>> eligible;
    std::vector<std::string> union_ids;
    for (const auto& [rid, reviewer] : pool.reviewers()) {
        if (conflict_of_interest(pool, m, rid, options.coi_window_years)) {
            ctx.conflicted_reviewers.push_back(rid);
            continue;
        }
        std::vector<std::string> usable;
        for (const auto& pid : reviewer.publication_ids) {
            if (pool.publication(pid).vector(kind)) usable.push_back(pid);
        }
        if (usable.empty()) {
            ctx.excluded_reviewers.push_back(rid);
            continue;
        }
        union_ids.insert(union_ids.end(), usable.begin(), usable.end());
        eligible.emplace(rid, std::move(usable));
    }

    std::sort(union_ids.begin(), union_ids.end());
    union_ids.erase(std::unique(union_ids.begin(), union_ids.end()), union_ids.end());

    std::vector<double> sims(union_ids.size());
    parallel_for(union_ids.size(), options.threads, [&](std::size_t i) {
        sims[i] = cosine(*pool.publication(union_ids[i]).vector(kind), query);
    });

    std::vector<std::size_t> order(union_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sims[a] != sims[b]) return sims[a] > sims[b];
        return union_ids[a] < union_ids[b];
    });
    ctx.similarity.reserve(union_ids.size());
    ctx.global_rank.reserve(union_ids.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto i = order[pos];
        ctx.similarity.emplace(union_ids[i], sims[i]);
        ctx.global_rank.emplace(union_ids[i], pos + 1);
    }
    ctx.total_pub_count = union_ids.size();

    for (auto& [rid, pubs] : eligible) {
        std::vector<PublicationHit> hits;
        hits.reserve(pubs.size());
        for (auto& pid : pubs) hits.push_back({pid, ctx.similarity.at(pid), ctx.global_rank.at(pid), 0});
        std::sort(hits.begin(), hits.end(), [](const PublicationHit& a, const PublicationHit& b) {
            if (a.similarity != b.similarity) return a.similarity > b.similarity;
            return a.publication_id < b.publication_id;
        });
        for (std::size_t r = 0; r < hits.size(); ++r) hits[r].reviewer_rank = r + 1;
        ctx.reviewer_hits.emplace(rid, std::move(hits));
    }
    return ctx;
}

/// Fuses one reviewer's publication hits into a score; higher is a better fit.
inline double vote(const VotingTechnique& vt, std::span<const PublicationHit> hits, std::size_t total_pub_count) {
    using F = VotingTechnique::Family;
    if (hits.empty()) return 0.0;
    const auto count = static_cast<double>(hits.size());

    auto sum_of = [&](auto&& term) {
        double s = 0.0;
        for (const auto& h : hits) s += term(h);
        return s;
    };
    auto sim = [](const PublicationHit& h) { return h.similarity; };
    auto exp_sim = [](const PublicationHit& h) { return std::exp(h.similarity); };
    auto reciprocal_rank = [](const PublicationHit& h) { return 1.0 / static_cast<double>(h.global_rank); };

    switch (vt.family) {
        case F::votes:
            return static_cast<double>(
                std::count_if(hits.begin(), hits.end(), [&](const PublicationHit& h) { return h.similarity >= vt.delta; }));
        case F::sum: return sum_of(sim);
        case F::avg: return sum_of(sim) / count;
        case F::mnz: return count * sum_of(sim);
        case F::sum_n: {
            double s = 0.0;
            for (const auto& h : hits) {
                if (h.reviewer_rank <= static_cast<std::size_t>(vt.n)) s += h.similarity;
            }
            return s;
        }
        case F::min:
            return std::min_element(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
                       return a.similarity < b.similarity;
                   })->similarity;
        case F::max:
            return std::max_element(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
                       return a.similarity < b.similarity;
                   })->similarity;
        case F::rr: return sum_of(reciprocal_rank);
        case F::mrr: return sum_of(reciprocal_rank) / count;
        case F::borda_fuse:
            return sum_of([&](const PublicationHit& h) {
                return static_cast<double>(total_pub_count) - static_cast<double>(h.global_rank);
            });
        case F::exp_sum: return sum_of(exp_sim);
        case F::exp_avg: return sum_of(exp_sim) / count;
        case F::exp_mnz: return count * sum_of(exp_sim);
    }
    return 0.0;
}

inline double vote(const VotingTechnique& vt, const ReviewerProfile& reviewer, const SimilarityContext& ctx) {
    auto it = ctx.reviewer_hits.find(reviewer.id);
    if (it == ctx.reviewer_hits.end()) {
        throw DataError("reviewer '" + reviewer.id + "' is not eligible for manuscript '" + ctx.manuscript_id + "'");
    }
    return vote(vt, it->second, ctx.total_pub_count);
}

struct RankedEntry {
    std::string reviewer_id;
    double score = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedExpertList {
    std::string manuscript_id;
    VectorKind kind = VectorKind::tfidf;
    VotingTechnique technique;
    ContentType content = ContentType::full;
    std::optional<std::size_t> cutoff;  // nullopt = all
    std::vector<RankedEntry> entries;

    std::vector<std::string> reviewer_ids() const {
        std::vector<std::string> out;
        out.reserve(entries.size());
        for (const auto& e : entries) out.push_back(e.reviewer_id);
        return out;
    }

    /// The first k entries (all of them when k is nullopt or exceeds the size).
    RankedExpertList top(std::optional<std::size_t> k) const {
        RankedExpertList out = *this;
        out.cutoff = k;
        if (k && *k < out.entries.size()) out.entries.resize(*k);
        return out;
    }
};

/// Full ranked list: descending score, ties by ascending reviewer id.
inline RankedExpertList rank_experts(const SimilarityContext& ctx, const VotingTechnique& vt) {
    RankedExpertList rl;
    rl.manuscript_id = ctx.manuscript_id;
    rl.kind = ctx.kind;
    rl.technique = vt;
    rl.content = ctx.content;
    rl.entries.reserve(ctx.reviewer_hits.size());
    for (const auto& [rid, hits] : ctx.reviewer_hits) rl.entries.push_back({rid, vote(vt, hits, ctx.total_pub_count)});
    std::stable_sort(rl.entries.begin(), rl.entries.end(),
                     [](const RankedEntry& a, const RankedEntry& b) { return a.score > b.score; });
    return rl;
}

inline RankedExpertList expert_search(const ManuscriptRecord& m, const CandidatePool& pool, VectorKind kind,
                                      const VotingTechnique& vt, ContentType content,
                                      std::optional<std::size_t> cutoff, const SearchOptions& options = {}) {
    auto ctx = build_context(m, pool, kind, content, options);
    if (ctx.reviewer_hits.empty()) throw NoEligibleReviewers(m.id);
    return rank_experts(ctx, vt).top(cutoff);
}

}  // namespace revset
