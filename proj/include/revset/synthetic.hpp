#pragma once

// Topic-structured random corpora for tests, benchmarks and demos. Each
// reviewer has a home topic; publications and manuscripts draw their
// vectors around a topic, so similarity and relevance line up.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "revset/corpus.hpp"

namespace revset {

struct SyntheticOptions {
    std::size_t reviewers = 20;
    std::size_t min_pubs = 1;
    std::size_t max_pubs = 6;
    std::size_t manuscripts = 2;
    std::size_t topics = 8;
    std::size_t vocabulary = 400;
    std::size_t terms_per_doc = 12;
    std::size_t embedding_dims = 16;  // dbow and dm
    std::size_t bert_dims = 32;
    int first_year = 1995;
    int reference_year = 2016;
    double coauthor_probability = 0.1;  // chance a publication also lists another reviewer
    double conflict_probability = 0.2;  // chance a manuscript lists a reviewer as author
    std::size_t external_authors = 60;
    bool ground_truth = true;
    std::uint64_t seed = 1;
};

namespace detail {

inline std::string padded(const char* prefix, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%04zu", prefix, n);
    return buf;
}

class SyntheticGenerator {
public:
    explicit SyntheticGenerator(const SyntheticOptions& opt) : opt_(opt), rng_(opt.seed) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto kind : {VectorKind::dbow, VectorKind::dm, VectorKind::bert}) {
            const auto dims = kind == VectorKind::bert ? opt.bert_dims : opt.embedding_dims;
            auto& centroids = centroids_[static_cast<int>(kind)];
            for (std::size_t t = 0; t < opt.topics; ++t) {
                std::vector<double> c(dims);
                for (auto& x : c) x = gauss(rng_);
                centroids.push_back(std::move(c));
            }
        }
    }

    VectorMap document(std::size_t topic, double focus) {
        VectorMap out;
        out.emplace(VectorKind::lda, DocVector::dense(VectorKind::lda, topic_mixture(topic, focus)));
        out.emplace(VectorKind::tfidf, DocVector::sparse(VectorKind::tfidf, terms(topic, focus)));
        for (auto kind : {VectorKind::dbow, VectorKind::dm, VectorKind::bert}) {
            out.emplace(kind, DocVector::dense(kind, embedding(kind, topic, focus)));
        }
        return out;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::vector<double> topic_mixture(std::size_t topic, double focus) {
        std::gamma_distribution<double> gamma(0.3, 1.0);
        std::vector<double> v(opt_.topics);
        double total = 0.0;
        for (auto& x : v) total += (x = gamma(rng_));
        v[topic] += focus * (total + 1.0);
        total = 0.0;
        for (double x : v) total += x;
        for (auto& x : v) x /= total;
        return v;
    }

    std::vector<SparseEntry> terms(std::size_t topic, double focus) {
        // Each topic owns a block of the vocabulary; the first few terms of a
        // block are its core terms and carry most of the weight.
        const auto block = std::max<std::size_t>(1, opt_.vocabulary / opt_.topics);
        const auto core = std::max<std::size_t>(1, block / 8);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> in_core(0, core - 1);
        std::uniform_int_distribution<std::size_t> in_block(0, block - 1);
        std::uniform_int_distribution<std::size_t> anywhere(0, opt_.vocabulary - 1);
        std::map<std::uint32_t, double> weights;
        for (std::size_t i = 0; i < opt_.terms_per_doc; ++i) {
            const double u = unit(rng_);
            std::size_t idx;
            double w;
            if (u < 0.6 * focus) {
                idx = topic * block + in_core(rng_);
                w = 1.0 + 2.0 * unit(rng_);
            } else if (u < 0.4 + 0.5 * focus) {
                idx = topic * block + in_block(rng_);
                w = 0.05 + unit(rng_);
            } else {
                idx = anywhere(rng_);
                w = 0.05 + unit(rng_);
            }
            weights[static_cast<std::uint32_t>(idx)] += w;
        }
        std::vector<SparseEntry> out;
        for (auto [idx, w] : weights) out.push_back({idx, w});
        return out;
    }

    std::vector<double> embedding(VectorKind kind, std::size_t topic, double focus) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        const auto& c = centroids_[static_cast<int>(kind)][topic];
        std::vector<double> v(c.size());
        for (std::size_t d = 0; d < v.size(); ++d) v[d] = focus * c[d] + (1.5 - focus) * gauss(rng_);
        return v;
    }

    SyntheticOptions opt_;
    std::mt19937_64 rng_;
    std::vector<std::vector<double>> centroids_[5];
};

}  // namespace detail

inline Corpus make_synthetic_corpus(const SyntheticOptions& opt) {
    detail::SyntheticGenerator gen(opt);
    auto& rng = gen.rng();
    std::uniform_int_distribution<std::size_t> topic_of(0, opt.topics - 1);
    std::uniform_int_distribution<std::size_t> pub_count(opt.min_pubs, opt.max_pubs);
    std::uniform_int_distribution<int> year(opt.first_year, opt.reference_year);
    std::uniform_int_distribution<std::size_t> external(0, opt.external_authors - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::geometric_distribution<int> citations(0.08);

    std::vector<std::string> reviewer_ids;
    std::vector<std::size_t> home;
    for (std::size_t r = 0; r < opt.reviewers; ++r) {
        reviewer_ids.push_back(detail::padded("r", r));
        home.push_back(topic_of(rng));
    }

    std::map<std::string, PublicationRecord> publications;
    std::map<std::string, ReviewerProfile> reviewers;
    std::uniform_int_distribution<std::size_t> any_reviewer(0, opt.reviewers - 1);
    for (std::size_t r = 0; r < opt.reviewers; ++r) {
        ReviewerProfile rev{reviewer_ids[r], "Reviewer " + std::to_string(r), {}};
        const auto n = pub_count(rng);
        for (std::size_t i = 0; i < n; ++i) {
            PublicationRecord p;
            p.id = detail::padded("p", publications.size());
            p.year = year(rng);
            p.citation_count = citations(rng);
            p.author_ids = {reviewer_ids[r], detail::padded("x", external(rng))};
            if (opt.reviewers > 1 && unit(rng) < opt.coauthor_probability) {
                auto other = any_reviewer(rng);
                if (other != r) p.author_ids.push_back(reviewer_ids[other]);
            }
            p.author_ids = detail::sorted_unique(std::move(p.author_ids));
            const auto topic = unit(rng) < 0.75 ? home[r] : topic_of(rng);
            p.vectors = gen.document(topic, 0.3 + 0.6 * unit(rng));
            rev.publication_ids.push_back(p.id);
            publications.emplace(p.id, std::move(p));
        }
        reviewers.emplace(rev.id, std::move(rev));
    }

    Corpus corpus;
    corpus.reference_year = opt.reference_year;
    corpus.pool = CandidatePool(std::move(reviewers), std::move(publications));
    GroundTruth gt;
    for (std::size_t i = 0; i < opt.manuscripts; ++i) {
        ManuscriptRecord m;
        m.id = detail::padded("m", i);
        m.reference_year = opt.reference_year + 1;
        m.author_ids = {detail::padded("x", external(rng)), detail::padded("y", i)};
        if (unit(rng) < opt.conflict_probability) m.author_ids.push_back(reviewer_ids[any_reviewer(rng)]);
        m.author_ids = detail::sorted_unique(std::move(m.author_ids));
        const auto topic = topic_of(rng);
        m.vectors_full = gen.document(topic, 0.8);
        m.vectors_research = gen.document(topic, 0.9);
        auto& rel = gt.relevant[m.id];
        for (std::size_t r = 0; r < opt.reviewers; ++r) {
            if (home[r] == topic && !conflict_of_interest(corpus.pool, m, reviewer_ids[r])) rel.insert(reviewer_ids[r]);
        }
        corpus.manuscripts.push_back(std::move(m));
    }
    if (opt.ground_truth) corpus.ground_truth = std::move(gt);
    return corpus;
}

}  // namespace revset
