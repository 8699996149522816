#pragma once

// Small hand-built corpora for unit tests.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "revset/corpus.hpp"

namespace revset::testing {

inline DocVector dense(VectorKind kind, std::vector<double> v) { return DocVector::dense(kind, std::move(v)); }

/// A 2-d unit vector whose cosine with (1, 0) is `s`.
inline std::vector<double> at_similarity(double s) { return {s, std::sqrt(std::max(0.0, 1.0 - s * s))}; }

/// Publication with the same 2-d direction for every vector kind.
inline PublicationRecord pub(std::string id, int year, std::int64_t citations, std::vector<std::string> authors,
                             std::vector<double> direction) {
    PublicationRecord p;
    p.id = std::move(id);
    p.year = year;
    p.citation_count = citations;
    std::sort(authors.begin(), authors.end());
    p.author_ids = std::move(authors);
    for (auto kind : kAllVectorKinds) p.vectors.emplace(kind, dense(kind, direction));
    return p;
}

inline ManuscriptRecord manuscript(std::string id, std::vector<std::string> authors, int reference_year,
                                   std::vector<double> direction) {
    ManuscriptRecord m;
    m.id = std::move(id);
    std::sort(authors.begin(), authors.end());
    m.author_ids = std::move(authors);
    m.reference_year = reference_year;
    for (auto kind : kAllVectorKinds) {
        m.vectors_full.emplace(kind, dense(kind, direction));
        m.vectors_research.emplace(kind, dense(kind, direction));
    }
    return m;
}

class PoolBuilder {
public:
    PoolBuilder& add(PublicationRecord p, const std::string& reviewer) {
        reviewers_[reviewer].id = reviewer;
        reviewers_[reviewer].display_name = reviewer;
        reviewers_[reviewer].publication_ids.push_back(p.id);
        publications_.emplace(p.id, std::move(p));
        return *this;
    }

    CandidatePool build() const { return CandidatePool(reviewers_, publications_); }

private:
    std::map<std::string, ReviewerProfile> reviewers_;
    std::map<std::string, PublicationRecord> publications_;
};

}  // namespace revset::testing
