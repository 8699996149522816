#pragma once

// Reviewer set assignment: from the top of a ranked expert list, build
// per-reviewer relevance profiles, score every candidate set of a fixed size
// on expertise, authority, diversity, interest and seniority, and return the
// sets ordered by the product of those five aspects. Sets containing two
// co-authors are infeasible and score 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "revset/corpus.hpp"
#include "revset/error.hpp"
#include "revset/expert_search.hpp"
#include "revset/parallel.hpp"
#include "revset/vectorspace.hpp"

namespace revset {

struct AssignmentConfig {
    std::size_t set_size = 3;
    double threshold = 0.0;                                    // t
    std::array<double, 3> expertise_weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double alpha = 0.5;                                        // authority mix
    double sigma = 0.5;                                        // seniority mix
    ContentType content = ContentType::full;
    VectorKind relevance_kind = VectorKind::tfidf;             // similarity used for the threshold filter
    std::uint64_t rng_seed = 0;
    std::optional<int> coi_window_years;

    void validate() const {
        auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
        if (set_size < 2) throw DataError("set size must be at least 2");
        if (!unit(threshold)) throw DataError("threshold t must lie in [0, 1]");
        if (!unit(alpha) || !unit(sigma)) throw DataError("alpha and sigma must lie in [0, 1]");
        double total = 0.0;
        for (double w : expertise_weights) {
            if (!unit(w)) throw DataError("expertise weights must lie in [0, 1]");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) throw DataError("expertise weights must sum to 1");
        if (!is_non_negative_kind(relevance_kind)) throw DataError("relevance kind must be tfidf or lda");
    }
};

/// Publication age in years, floored at 1.
inline int publication_age(int reference_year, int publication_year) {
    return std::max(1, reference_year - publication_year);
}

/// Largest h such that at least h of the counts are >= h.
inline int h_index(std::vector<std::int64_t> citations) {
    std::sort(citations.begin(), citations.end(), std::greater<>());
    int h = 0;
    while (h < static_cast<int>(citations.size()) && citations[h] >= h + 1) ++h;
    return h;
}

struct RelevanceProfile {
    std::string reviewer_id;
    std::vector<std::string> relevant_pubs;  // r_t(R, M)
    DocVector agg_lda;
    DocVector agg_tfidf;
    DocVector interest_vec;                  // age-weighted topic aggregate
    int h_rel = 0;
    std::int64_t cite_rel = 0;
    int range_rel = 0;
};

struct PoolStatistics {
    std::size_t max_rel_count = 0;
    int max_h = 0;
    std::int64_t max_cite = 0;
    int max_range = 0;
    int q75_range = 0;
};

/// Nearest-rank quantile of a non-empty sample.
inline int nearest_rank_quantile(std::vector<int> values, double p) {
    if (values.empty()) throw DataError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

/// Returns nullopt when no publication of the reviewer reaches the threshold
/// or the relevant publications carry only zero topic/term vectors.
inline std::optional<RelevanceProfile> make_profile(const ManuscriptRecord& m, const ReviewerProfile& reviewer,
                                                    const CandidatePool& pool, const AssignmentConfig& cfg) {
    const DocVector& query = m.require_vector(cfg.content, cfg.relevance_kind);

    RelevanceProfile p;
    p.reviewer_id = reviewer.id;
    std::vector<const DocVector*> lda, tfidf;
    std::vector<double> unit_weights, age_weights;
    std::vector<std::int64_t> citations;
    int min_age = 0, max_age = 0;

    for (const auto& pid : reviewer.publication_ids) {
        const auto& pub = pool.publication(pid);
        const auto* l = pub.vector(VectorKind::lda);
        const auto* t = pub.vector(VectorKind::tfidf);
        const auto* r = pub.vector(cfg.relevance_kind);
        if (!l || !t || !r) continue;
        if (cosine(*r, query) < cfg.threshold) continue;
        p.relevant_pubs.push_back(pid);
        lda.push_back(l);
        tfidf.push_back(t);
        unit_weights.push_back(1.0);
        const int age = publication_age(m.reference_year, pub.year);
        age_weights.push_back(1.0 / age);
        citations.push_back(pub.citation_count);
        p.cite_rel += pub.citation_count;
        min_age = p.relevant_pubs.size() == 1 ? age : std::min(min_age, age);
        max_age = p.relevant_pubs.size() == 1 ? age : std::max(max_age, age);
    }
    if (p.relevant_pubs.empty()) return std::nullopt;
    try {
        p.agg_lda = weighted_aggregate(std::span<const DocVector* const>(lda), unit_weights);
        p.agg_tfidf = weighted_aggregate(std::span<const DocVector* const>(tfidf), unit_weights);
        p.interest_vec = weighted_aggregate(std::span<const DocVector* const>(lda), age_weights);
    } catch (const DegenerateAggregate&) {
        return std::nullopt;
    }
    p.h_rel = h_index(std::move(citations));
    p.range_rel = 1 + max_age - min_age;
    return p;
}

inline PoolStatistics compute_statistics(const std::map<std::string, RelevanceProfile>& profiles) {
    PoolStatistics s;
    std::vector<int> ranges;
    for (const auto& [id, p] : profiles) {
        s.max_rel_count = std::max(s.max_rel_count, p.relevant_pubs.size());
        s.max_h = std::max(s.max_h, p.h_rel);
        s.max_cite = std::max(s.max_cite, p.cite_rel);
        s.max_range = std::max(s.max_range, p.range_rel);
        ranges.push_back(p.range_rel);
    }
    if (!ranges.empty()) s.q75_range = nearest_rank_quantile(std::move(ranges), 0.75);
    return s;
}

struct ProfileSet {
    std::map<std::string, RelevanceProfile> profiles;  // reviewers of RL_top with a non-empty r_t
    PoolStatistics stats;
    std::vector<std::string> excluded;                  // RL_top members without relevant publications

    const RelevanceProfile& at(const std::string& id) const {
        auto it = profiles.find(id);
        if (it == profiles.end()) throw DataError("reviewer '" + id + "' has no relevance profile");
        return it->second;
    }
};

/// Profiles every reviewer in `rl_top`; statistics are taken over the
/// profiled ones. Throws ThresholdTooStrict if none survives the threshold.
inline ProfileSet build_profiles(const ManuscriptRecord& m, const RankedExpertList& rl_top, const CandidatePool& pool,
                                 const AssignmentConfig& cfg) {
    cfg.validate();
    m.require_vector(cfg.content, VectorKind::lda);
    m.require_vector(cfg.content, VectorKind::tfidf);
    ProfileSet out;
    for (const auto& entry : rl_top.entries) {
        if (auto p = make_profile(m, pool.reviewer(entry.reviewer_id), pool, cfg)) {
            out.profiles.emplace(entry.reviewer_id, std::move(*p));
        } else {
            out.excluded.push_back(entry.reviewer_id);
        }
    }
    if (out.profiles.empty()) throw ThresholdTooStrict(cfg.threshold);
    out.stats = compute_statistics(out.profiles);
    return out;
}

/// Per-member quantities that the aspect formulas combine.
struct MemberTerms {
    double lda_fit = 0.0;       // cosine(agg_lda, M)
    double tfidf_fit = 0.0;     // cosine(agg_tfidf, M)
    double interest_fit = 0.0;  // cosine(interest_vec, M)
    std::size_t rel_count = 0;
    int h = 0;
    std::int64_t cite = 0;
    int range = 0;
};

inline MemberTerms member_terms(const RelevanceProfile& p, const ManuscriptRecord& m, ContentType content) {
    const auto& m_lda = m.require_vector(content, VectorKind::lda);
    const auto& m_tfidf = m.require_vector(content, VectorKind::tfidf);
    return {cosine(p.agg_lda, m_lda),     cosine(p.agg_tfidf, m_tfidf), cosine(p.interest_vec, m_lda),
            p.relevant_pubs.size(),       p.h_rel,                      p.cite_rel,
            p.range_rel};
}

struct ExpertiseScore {
    double value = 0, e1 = 0, e2 = 0, e3 = 0;
};
struct AuthorityScore {
    double value = 0, a1 = 0, a2 = 0;
};
struct SeniorityScore {
    double value = 0, s1 = 0, s2 = 0;
};

namespace detail {

/// numerator / (n * denominator); 0 when the denominator is 0. Optionally capped at 1.
inline double normalized_mean(double numerator, std::size_t n, double denominator, bool cap) {
    if (denominator <= 0.0) return 0.0;
    double v = numerator / (static_cast<double>(n) * denominator);
    return cap ? std::min(v, 1.0) : v;
}

}  // namespace detail

/// `cap` clamps E3 to at most 1 (for members drawn from outside RL_top).
inline ExpertiseScore expertise(std::span<const MemberTerms> set, const PoolStatistics& stats,
                                const AssignmentConfig& cfg, bool cap = false) {
    ExpertiseScore e;
    double lda = 0.0, tfidf = 0.0, rel = 0.0;
    for (const auto& t : set) {
        lda += t.lda_fit;
        tfidf += t.tfidf_fit;
        rel += static_cast<double>(t.rel_count);
    }
    const auto n = static_cast<double>(set.size());
    e.e1 = lda / n;
    e.e2 = tfidf / n;
    e.e3 = detail::normalized_mean(rel, set.size(), static_cast<double>(stats.max_rel_count), cap);
    const auto& w = cfg.expertise_weights;
    e.value = w[0] * e.e1 + w[1] * e.e2 + w[2] * e.e3;
    return e;
}

/// `cap` clamps A1 and A2 to at most 1.
inline AuthorityScore authority(std::span<const MemberTerms> set, const PoolStatistics& stats,
                                const AssignmentConfig& cfg, bool cap = false) {
    AuthorityScore a;
    double h = 0.0, cite = 0.0;
    for (const auto& t : set) {
        h += t.h;
        cite += static_cast<double>(t.cite);
    }
    a.a1 = detail::normalized_mean(h, set.size(), stats.max_h, cap);
    a.a2 = detail::normalized_mean(cite, set.size(), static_cast<double>(stats.max_cite), cap);
    a.value = cfg.alpha * a.a1 + (1.0 - cfg.alpha) * a.a2;
    return a;
}

/// 1 - mean pairwise topical similarity, given the sum over pairs.
inline double diversity_from_pair_sum(double pair_similarity_sum, std::size_t set_size) {
    if (set_size < 2) throw DataError("diversity is undefined for fewer than two reviewers");
    const double pairs = static_cast<double>(set_size) * static_cast<double>(set_size - 1) / 2.0;
    return 1.0 - pair_similarity_sum / pairs;
}

inline double diversity(std::span<const RelevanceProfile* const> set) {
    if (set.size() < 2) throw DataError("diversity is undefined for fewer than two reviewers");
    double sum = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) sum += cosine(set[i]->agg_lda, set[j]->agg_lda);
    }
    return diversity_from_pair_sum(sum, set.size());
}

inline double interest(std::span<const MemberTerms> set) {
    double sum = 0.0;
    for (const auto& t : set) sum += t.interest_fit;
    return sum / static_cast<double>(set.size());
}

/// `cap` clamps S1 into [0, 1]; only needed when a member's range may exceed the pool maximum.
inline SeniorityScore seniority(std::span<const MemberTerms> set, const PoolStatistics& stats,
                                const AssignmentConfig& cfg, bool cap = false) {
    SeniorityScore s;
    int lo = set.front().range, hi = set.front().range;
    for (const auto& t : set) {
        lo = std::min(lo, t.range);
        hi = std::max(hi, t.range);
    }
    s.s1 = stats.max_range > 0 ? 1.0 - static_cast<double>(lo) / stats.max_range : 0.0;
    if (cap) s.s1 = std::clamp(s.s1, 0.0, 1.0);
    s.s2 = stats.q75_range > 0 ? std::min(static_cast<double>(hi) / stats.q75_range, 1.0) : 0.0;
    s.value = cfg.sigma * s.s1 + (1.0 - cfg.sigma) * s.s2;
    return s;
}

struct ScoredReviewerSet {
    std::vector<std::string> reviewer_ids;  // ascending
    bool feasible = false;
    double expertise = 0, authority = 0, diversity = 0, interest = 0, seniority = 0;
    double e1 = 0, e2 = 0, e3 = 0, a1 = 0, a2 = 0, s1 = 0, s2 = 0;
    double sc = 0;
};

namespace detail {

/// Fills the aspect fields and sc of a feasible set.
inline void fill_scores(ScoredReviewerSet& out, std::span<const MemberTerms> terms, double pair_similarity_sum,
                        const PoolStatistics& stats, const AssignmentConfig& cfg, bool cap) {
    const auto e = expertise(terms, stats, cfg, cap);
    const auto a = authority(terms, stats, cfg, cap);
    const auto s = seniority(terms, stats, cfg, cap);
    out.feasible = true;
    out.expertise = e.value;
    out.e1 = e.e1;
    out.e2 = e.e2;
    out.e3 = e.e3;
    out.authority = a.value;
    out.a1 = a.a1;
    out.a2 = a.a2;
    out.diversity = diversity_from_pair_sum(pair_similarity_sum, terms.size());
    out.interest = interest(terms);
    out.seniority = s.value;
    out.s1 = s.s1;
    out.s2 = s.s2;
    out.sc = out.authority * out.seniority * out.interest * out.diversity * out.expertise;
}

inline bool any_coauthors(const CandidatePool& pool, std::span<const std::string> ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (pool.coauthors(ids[i], ids[j])) return true;
        }
    }
    return false;
}

}  // namespace detail

/// Scores one set. Every member needs a profile in `profiles` (or in `extra`,
/// for members outside RL_top). A set containing two co-authors scores 0.
inline ScoredReviewerSet score_set(std::vector<std::string> ids, const ProfileSet& profiles,
                                   const ManuscriptRecord& m, const AssignmentConfig& cfg, const CandidatePool& pool,
                                   bool cap = false, const std::map<std::string, RelevanceProfile>* extra = nullptr) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw DataError("reviewer set has duplicates");
    if (ids.size() < 2) throw DataError("reviewer set needs at least two members");
    ScoredReviewerSet out;
    out.reviewer_ids = ids;
    if (detail::any_coauthors(pool, ids)) return out;

    std::vector<const RelevanceProfile*> members;
    for (const auto& id : ids) {
        if (auto it = profiles.profiles.find(id); it != profiles.profiles.end()) {
            members.push_back(&it->second);
        } else if (extra && extra->contains(id)) {
            members.push_back(&extra->at(id));
        } else {
            throw DataError("reviewer '" + id + "' has no relevance profile");
        }
    }
    std::vector<MemberTerms> terms;
    for (const auto* p : members) terms.push_back(member_terms(*p, m, cfg.content));
    double pair_sum = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) pair_sum += cosine(members[i]->agg_lda, members[j]->agg_lda);
    }
    detail::fill_scores(out, terms, pair_sum, profiles.stats, cfg, cap);
    return out;
}

/// Precomputed member terms, pairwise topical similarities and co-author
/// conflicts for exhaustive enumeration over the profiled reviewers.
class SetEnumerator {
public:
    SetEnumerator(const ProfileSet& profiles, const ManuscriptRecord& m, const AssignmentConfig& cfg,
                  const CandidatePool& pool)
        : stats_(profiles.stats), cfg_(cfg) {
        for (const auto& [id, p] : profiles.profiles) {
            ids_.push_back(id);
            members_.push_back(&p);
            terms_.push_back(member_terms(p, m, cfg.content));
        }
        const auto n = ids_.size();
        similarity_.assign(n * n, 0.0);
        conflict_.assign(n * n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                similarity_[i * n + j] = similarity_[j * n + i] = cosine(members_[i]->agg_lda, members_[j]->agg_lda);
                conflict_[i * n + j] = conflict_[j * n + i] = pool.coauthors(ids_[i], ids_[j]) ? 1 : 0;
            }
        }
    }

    std::size_t candidate_count() const noexcept { return ids_.size(); }
    const std::vector<std::string>& candidate_ids() const noexcept { return ids_; }

    /// A scored set in compact form; members are candidate indices, ascending.
    struct Compact {
        std::vector<std::uint32_t> members;
        ScoredReviewerSet scores;  // reviewer_ids left empty
    };

    Compact score(std::span<const std::uint32_t> members) const {
        Compact out;
        out.members.assign(members.begin(), members.end());
        const auto n = ids_.size();
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (conflict_[members[i] * n + members[j]]) return out;
            }
        }
        std::vector<MemberTerms> terms;
        terms.reserve(members.size());
        double pair_sum = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            terms.push_back(terms_[members[i]]);
            for (std::size_t j = i + 1; j < members.size(); ++j) pair_sum += similarity_[members[i] * n + members[j]];
        }
        detail::fill_scores(out.scores, terms, pair_sum, stats_, cfg_, false);
        return out;
    }

    /// sc descending, then lexicographic member tuple (ids are sorted, so this is id order).
    static bool better(const Compact& a, const Compact& b) {
        if (a.scores.sc != b.scores.sc) return a.scores.sc > b.scores.sc;
        return a.members < b.members;
    }

    /// Visits every subset of `set_size` candidates whose smallest member is `first`.
    template <class F>
    void for_each_with_first(std::uint32_t first, std::size_t set_size, F&& visit) const {
        const auto n = static_cast<std::uint32_t>(ids_.size());
        std::vector<std::uint32_t> combo(set_size);
        combo[0] = first;
        if (set_size == 1) {
            visit(std::span<const std::uint32_t>(combo));
            return;
        }
        for (std::size_t i = 1; i < set_size; ++i) combo[i] = first + static_cast<std::uint32_t>(i);
        if (combo.back() >= n) return;
        while (true) {
            visit(std::span<const std::uint32_t>(combo));
            std::size_t pos = set_size - 1;
            while (pos >= 1 && combo[pos] == n - (set_size - pos)) --pos;
            if (pos == 0) return;
            ++combo[pos];
            for (std::size_t i = pos + 1; i < set_size; ++i) combo[i] = combo[i - 1] + 1;
        }
    }

    ScoredReviewerSet materialize(const Compact& c) const {
        ScoredReviewerSet out = c.scores;
        out.reviewer_ids.clear();
        for (auto idx : c.members) out.reviewer_ids.push_back(ids_[idx]);
        return out;
    }

private:
    std::vector<std::string> ids_;
    std::vector<const RelevanceProfile*> members_;
    std::vector<MemberTerms> terms_;
    std::vector<double> similarity_;
    std::vector<char> conflict_;
    PoolStatistics stats_;
    AssignmentConfig cfg_;
};

namespace detail {

inline std::vector<SetEnumerator::Compact> enumerate_sorted(const SetEnumerator& en, std::size_t set_size,
                                                            std::optional<std::size_t> keep, std::size_t threads) {
    const auto n = en.candidate_count();
    if (n < set_size) {
        throw NoFeasibleSet("only " + std::to_string(n) + " profiled reviewers for sets of size " +
                            std::to_string(set_size));
    }
    const std::size_t firsts = n - set_size + 1;
    std::vector<std::vector<SetEnumerator::Compact>> chunks(firsts);
    parallel_for(firsts, threads, [&](std::size_t first) {
        auto& chunk = chunks[first];
        en.for_each_with_first(static_cast<std::uint32_t>(first), set_size, [&](std::span<const std::uint32_t> combo) {
            chunk.push_back(en.score(combo));
            if (keep && chunk.size() > 4 * *keep + 64) {
                std::partial_sort(chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(*keep), chunk.end(),
                                  SetEnumerator::better);
                chunk.resize(*keep);
            }
        });
        if (keep && chunk.size() > *keep) {
            std::partial_sort(chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(*keep), chunk.end(),
                              SetEnumerator::better);
            chunk.resize(*keep);
        }
    });
    std::vector<SetEnumerator::Compact> all;
    for (auto& c : chunks) std::move(c.begin(), c.end(), std::back_inserter(all));
    if (keep && all.size() > *keep) {
        std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(*keep), all.end(),
                          SetEnumerator::better);
        all.resize(*keep);
    } else {
        std::sort(all.begin(), all.end(), SetEnumerator::better);
    }
    return all;
}

}  // namespace detail

/// Scores all C(n, set_size) subsets of the profiled reviewers and returns the
/// best `keep` of them (all when nullopt), ordered by sc descending then by
/// reviewer-id tuple. The first entry is the recommended set. Throws
/// NoFeasibleSet when no feasible set with sc > 0 exists.
inline std::vector<ScoredReviewerSet> assign(const ProfileSet& profiles, const ManuscriptRecord& m,
                                             const AssignmentConfig& cfg, const CandidatePool& pool,
                                             std::optional<std::size_t> keep = std::nullopt, std::size_t threads = 1) {
    cfg.validate();
    SetEnumerator en(profiles, m, cfg, pool);
    auto sorted = detail::enumerate_sorted(en, cfg.set_size, keep, threads);
    if (sorted.empty() || !sorted.front().scores.feasible || !(sorted.front().scores.sc > 0.0)) {
        throw NoFeasibleSet("every candidate set of manuscript '" + m.id + "' is infeasible or scores 0");
    }
    std::vector<ScoredReviewerSet> out;
    out.reserve(sorted.size());
    for (const auto& c : sorted) out.push_back(en.materialize(c));
    return out;
}

inline std::vector<ScoredReviewerSet> assign(const ManuscriptRecord& m, const RankedExpertList& rl_top,
                                             const CandidatePool& pool, const AssignmentConfig& cfg,
                                             std::optional<std::size_t> keep = std::nullopt, std::size_t threads = 1) {
    return assign(build_profiles(m, rl_top, pool, cfg), m, cfg, pool, keep, threads);
}

enum class Baseline { top, random_top, random_committee };

inline constexpr std::string_view to_string(Baseline b) noexcept {
    switch (b) {
        case Baseline::top: return "B_t3";
        case Baseline::random_top: return "B_tr";
        case Baseline::random_committee: return "B_r";
    }
    return "?";
}

namespace detail {

inline std::vector<std::string> sample_without_replacement(std::vector<std::string> pool, std::size_t count,
                                                           std::mt19937_64& rng) {
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace detail

/// Reference sets scored against the RL_top statistics:
///  - top: the first set_size profileable reviewers of the full list `rl`;
///  - random_top: a uniform sample from the profiled RL_top reviewers;
///  - random_committee: a uniform sample from all conflict-free, profileable
///    committee members, with E3, A1, A2 (and S1) capped.
/// Sampling uses std::mt19937_64 seeded with cfg.rng_seed.
inline ScoredReviewerSet baseline(Baseline kind, const ManuscriptRecord& m, const RankedExpertList& rl,
                                  const ProfileSet& profiles, const CandidatePool& pool, const AssignmentConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.rng_seed);
    std::map<std::string, RelevanceProfile> extra;
    auto profile_of = [&](const std::string& id) -> bool {
        if (profiles.profiles.contains(id) || extra.contains(id)) return true;
        if (auto p = make_profile(m, pool.reviewer(id), pool, cfg)) {
            extra.emplace(id, std::move(*p));
            return true;
        }
        return false;
    };
    auto insufficient = [&](std::size_t available) {
        return NoFeasibleSet(std::string(to_string(kind)) + " needs " + std::to_string(cfg.set_size) +
                             " reviewers but only " + std::to_string(available) + " qualify");
    };

    std::vector<std::string> chosen;
    switch (kind) {
        case Baseline::top: {
            for (const auto& e : rl.entries) {
                if (chosen.size() == cfg.set_size) break;
                if (profile_of(e.reviewer_id)) chosen.push_back(e.reviewer_id);
            }
            if (chosen.size() < cfg.set_size) throw insufficient(chosen.size());
            break;
        }
        case Baseline::random_top: {
            std::vector<std::string> candidates;
            for (const auto& [id, p] : profiles.profiles) candidates.push_back(id);
            if (candidates.size() < cfg.set_size) throw insufficient(candidates.size());
            chosen = detail::sample_without_replacement(std::move(candidates), cfg.set_size, rng);
            break;
        }
        case Baseline::random_committee: {
            std::vector<std::string> candidates;
            for (const auto& id : conflict_free_reviewers(pool, m, cfg.coi_window_years)) {
                if (profile_of(id)) candidates.push_back(id);
            }
            if (candidates.size() < cfg.set_size) throw insufficient(candidates.size());
            chosen = detail::sample_without_replacement(std::move(candidates), cfg.set_size, rng);
            break;
        }
    }
    return score_set(std::move(chosen), profiles, m, cfg, pool, kind != Baseline::random_top, &extra);
}

}  // namespace revset
