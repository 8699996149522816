#pragma once

// Small random corpora for property tests: a handful of reviewers with a few
// publications each, random non-negative term and topic vectors, and some
// shared publications so that co-author conflicts occur.

#include <random>
#include <string>

#include "revset/corpus.hpp"

namespace revset::testing {

struct RandomPool {
    CandidatePool pool;
    ManuscriptRecord manuscript;
};

struct RandomPoolOptions {
    std::size_t min_reviewers = 3;
    std::size_t max_reviewers = 8;
    std::size_t max_pubs = 6;
    std::size_t vocabulary = 12;
    std::size_t topics = 4;
    double shared_probability = 0.1;
};

inline RandomPool random_pool(std::uint64_t seed, const RandomPoolOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> reviewers(opt.min_reviewers, opt.max_reviewers);
    std::uniform_int_distribution<std::size_t> pubs(1, opt.max_pubs);
    std::uniform_int_distribution<std::uint32_t> term(0, static_cast<std::uint32_t>(opt.vocabulary - 1));
    std::uniform_int_distribution<int> year(1995, 2016);
    std::geometric_distribution<int> cites(0.1);

    auto vectors = [&] {
        VectorMap v;
        std::vector<SparseEntry> terms;
        std::map<std::uint32_t, double> picked;
        for (int i = 0; i < 4; ++i) picked[term(rng)] = 0.05 + unit(rng);
        for (auto [i, w] : picked) terms.push_back({i, w});
        v.emplace(VectorKind::tfidf, DocVector::sparse(VectorKind::tfidf, terms));
        std::vector<double> topics(opt.topics);
        for (auto& x : topics) x = 0.01 + unit(rng);
        v.emplace(VectorKind::lda, DocVector::dense(VectorKind::lda, topics));
        for (auto kind : {VectorKind::dbow, VectorKind::dm, VectorKind::bert}) {
            std::vector<double> e(6);
            for (auto& x : e) x = unit(rng) * 2.0 - 1.0;
            v.emplace(kind, DocVector::dense(kind, e));
        }
        return v;
    };

    std::map<std::string, ReviewerProfile> revs;
    std::map<std::string, PublicationRecord> publications;
    const std::size_t n = reviewers(rng);
    std::vector<std::string> ids;
    for (std::size_t r = 0; r < n; ++r) ids.push_back("r" + std::to_string(r));
    std::size_t next_pub = 0;
    for (const auto& rid : ids) {
        revs[rid].id = rid;
        revs[rid].display_name = rid;
        for (std::size_t k = pubs(rng); k > 0; --k) {
            PublicationRecord p;
            p.id = "p" + std::to_string(next_pub++);
            p.year = year(rng);
            p.citation_count = cites(rng);
            p.author_ids = {rid};
            p.vectors = vectors();
            if (unit(rng) < opt.shared_probability) {
                const auto& other = ids[rng() % ids.size()];
                if (other != rid) {
                    p.author_ids.push_back(other);
                    revs[other].id = other;
                    revs[other].display_name = other;
                    revs[other].publication_ids.push_back(p.id);
                }
            }
            std::sort(p.author_ids.begin(), p.author_ids.end());
            revs[rid].publication_ids.push_back(p.id);
            publications.emplace(p.id, std::move(p));
        }
    }

    ManuscriptRecord m;
    m.id = "m" + std::to_string(seed);
    m.author_ids = {"outsider"};
    m.reference_year = 2017;
    m.vectors_full = vectors();
    m.vectors_research = vectors();
    return {CandidatePool(std::move(revs), std::move(publications)), std::move(m)};
}

}  // namespace revset::testing
