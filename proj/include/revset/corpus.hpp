#pragma once

// Data model for publications, reviewers and manuscripts, plus reading and
// writing the line-delimited JSON dataset layout:
//
//   publications.jsonl  {"id", "year", "citations", "authors":[...], "vectors":{kind: {"idx": w} | [..]},
//                        optional "paper_length", "core_rank", "avg_author_h_index"}
//   reviewers.jsonl     {"id", "name", "pubs":[...]}
//   manuscripts.jsonl   {"id", "authors":[...], optional "reference_year",
//                        "vectors_full":{...}, "vectors_research":{...}}
//   ground_truth.jsonl  {"manuscript", "relevant":[...]}            (optional)

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "revset/error.hpp"
#include "revset/vectorspace.hpp"

namespace revset {

enum class ContentType { full, research };

inline constexpr std::string_view to_string(ContentType content) noexcept {
    return content == ContentType::full ? "full" : "research";
}

inline std::optional<ContentType> parse_content_type(std::string_view name) noexcept {
    if (name == "full") return ContentType::full;
    if (name == "research") return ContentType::research;
    return std::nullopt;
}

using VectorMap = std::map<VectorKind, DocVector>;

struct PublicationRecord {
    std::string id;
    int year = 0;
    std::int64_t citation_count = 0;
    std::vector<std::string> author_ids;  // sorted, unique
    VectorMap vectors;
    std::optional<int> paper_length;
    std::optional<std::string> venue_core_rank;
    std::optional<double> avg_author_h_index;

    const DocVector* vector(VectorKind kind) const {
        auto it = vectors.find(kind);
        return it == vectors.end() ? nullptr : &it->second;
    }

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct ReviewerProfile {
    std::string id;
    std::string display_name;
    std::vector<std::string> publication_ids;

    friend bool operator==(const ReviewerProfile&, const ReviewerProfile&) = default;
};

struct ManuscriptRecord {
    std::string id;
    std::vector<std::string> author_ids;  // sorted, unique
    int reference_year = 0;
    VectorMap vectors_full;
    VectorMap vectors_research;

    const VectorMap& vectors(ContentType content) const {
        return content == ContentType::full ? vectors_full : vectors_research;
    }

    const DocVector* vector(ContentType content, VectorKind kind) const {
        const auto& m = vectors(content);
        auto it = m.find(kind);
        return it == m.end() ? nullptr : &it->second;
    }

    /// Throws DataError naming the manuscript when the vector is missing.
    const DocVector& require_vector(ContentType content, VectorKind kind) const {
        if (const auto* v = vector(content, kind)) return *v;
        throw DataError("manuscript '" + id + "' has no " + std::string(to_string(kind)) + " vector for " +
                        std::string(to_string(content)) + " content");
    }

    friend bool operator==(const ManuscriptRecord&, const ManuscriptRecord&) = default;
};

/// author id -> co-author id -> most recent year of a joint publication.
using CoauthorIndex = std::map<std::string, std::map<std::string, int>>;

inline CoauthorIndex build_coauthor_index(const std::map<std::string, PublicationRecord>& publications) {
    CoauthorIndex index;
    for (const auto& [id, pub] : publications) {
        for (const auto& a : pub.author_ids) {
            for (const auto& b : pub.author_ids) {
                if (a == b) continue;
                auto [it, inserted] = index[a].try_emplace(b, pub.year);
                if (!inserted) it->second = std::max(it->second, pub.year);
            }
        }
    }
    return index;
}

/// The fixed set of reviewer candidates and everything they have published.
/// Immutable after construction.
class CandidatePool {
public:
    CandidatePool() = default;

    CandidatePool(std::map<std::string, ReviewerProfile> reviewers,
                  std::map<std::string, PublicationRecord> publications)
        : reviewers_(std::move(reviewers)), publications_(std::move(publications)) {
        for (const auto& [id, reviewer] : reviewers_) {
            if (reviewer.publication_ids.empty()) {
                throw DataError("reviewer '" + id + "' has no publications");
            }
            for (const auto& pid : reviewer.publication_ids) {
                if (!publications_.contains(pid)) {
                    throw DataError("reviewer '" + id + "' lists unknown publication '" + pid + "'");
                }
            }
        }
        coauthors_ = build_coauthor_index(publications_);
    }

    const std::map<std::string, ReviewerProfile>& reviewers() const noexcept { return reviewers_; }
    const std::map<std::string, PublicationRecord>& publications() const noexcept { return publications_; }
    const CoauthorIndex& coauthor_index() const noexcept { return coauthors_; }

    bool has_reviewer(std::string_view id) const { return reviewers_.find(std::string(id)) != reviewers_.end(); }

    const ReviewerProfile& reviewer(std::string_view id) const {
        auto it = reviewers_.find(std::string(id));
        if (it == reviewers_.end()) throw DataError("unknown reviewer '" + std::string(id) + "'");
        return it->second;
    }

    const PublicationRecord& publication(std::string_view id) const {
        auto it = publications_.find(std::string(id));
        if (it == publications_.end()) throw DataError("unknown publication '" + std::string(id) + "'");
        return it->second;
    }

    /// True when a and b share a publication, restricted to joint papers from
    /// `since_year` on when given.
    bool coauthors(std::string_view a, std::string_view b, std::optional<int> since_year = std::nullopt) const {
        auto it = coauthors_.find(std::string(a));
        if (it == coauthors_.end()) return false;
        auto jt = it->second.find(std::string(b));
        if (jt == it->second.end()) return false;
        return !since_year || jt->second >= *since_year;
    }

    std::set<std::string> coauthors_of(std::string_view a) const {
        std::set<std::string> out;
        if (auto it = coauthors_.find(std::string(a)); it != coauthors_.end()) {
            for (const auto& [b, year] : it->second) out.insert(b);
        }
        return out;
    }

    friend bool operator==(const CandidatePool& a, const CandidatePool& b) {
        return a.reviewers_ == b.reviewers_ && a.publications_ == b.publications_;
    }

private:
    std::map<std::string, ReviewerProfile> reviewers_;
    std::map<std::string, PublicationRecord> publications_;
    CoauthorIndex coauthors_;
};

/// Authorship or co-authorship between the reviewer and any manuscript author.
/// With `window_years`, only joint papers from reference_year - window_years on count.
inline bool conflict_of_interest(const CandidatePool& pool, const ManuscriptRecord& m, std::string_view reviewer_id,
                                 std::optional<int> window_years = std::nullopt) {
    if (!pool.has_reviewer(reviewer_id)) throw DataError("unknown reviewer '" + std::string(reviewer_id) + "'");
    if (std::binary_search(m.author_ids.begin(), m.author_ids.end(), reviewer_id)) return true;
    std::optional<int> since;
    if (window_years) since = m.reference_year - *window_years;
    return std::any_of(m.author_ids.begin(), m.author_ids.end(),
                       [&](const std::string& author) { return pool.coauthors(reviewer_id, author, since); });
}

/// Reviewers (sorted by id) without a conflict of interest.
inline std::vector<std::string> conflict_free_reviewers(const CandidatePool& pool, const ManuscriptRecord& m,
                                                        std::optional<int> window_years = std::nullopt) {
    std::vector<std::string> out;
    for (const auto& [id, r] : pool.reviewers()) {
        if (!conflict_of_interest(pool, m, id, window_years)) out.push_back(id);
    }
    return out;
}

struct GroundTruth {
    std::map<std::string, std::set<std::string>> relevant;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct LoadReport {
    std::size_t dropped_future_publications = 0;
    std::size_t duplicate_publication_refs = 0;
    std::vector<std::string> rejected_reviewers;  // "id: reason"
};

struct Corpus {
    int reference_year = 0;
    CandidatePool pool;
    std::vector<ManuscriptRecord> manuscripts;
    std::optional<GroundTruth> ground_truth;
    LoadReport report;

    const ManuscriptRecord& manuscript(std::string_view id) const {
        for (const auto& m : manuscripts) {
            if (m.id == id) return m;
        }
        throw DataError("unknown manuscript '" + std::string(id) + "'");
    }
};

namespace detail {

using nlohmann::json;

struct Location {
    std::string file;
    std::size_t line = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError(file + ":" + std::to_string(line) + ": " + what);
    }
};

template <class F>
void for_each_record(std::istream& in, const std::string& file, F&& handle) {
    std::string text;
    Location loc{file, 0};
    while (std::getline(in, text)) {
        ++loc.line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(text);
        } catch (const json::parse_error& e) {
            loc.fail(std::string("invalid JSON: ") + e.what());
        }
        if (!record.is_object()) loc.fail("record is not a JSON object");
        handle(record, loc);
    }
}

inline const json& field(const json& record, const char* name, const Location& loc) {
    auto it = record.find(name);
    if (it == record.end()) loc.fail(std::string("missing field '") + name + "'");
    return *it;
}

inline std::string string_field(const json& record, const char* name, const Location& loc) {
    const auto& v = field(record, name, loc);
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
        loc.fail(std::string("field '") + name + "' must be a non-empty string");
    }
    return v.get<std::string>();
}

inline std::int64_t integer_field(const json& v, const char* name, const Location& loc) {
    if (!v.is_number_integer()) loc.fail(std::string("field '") + name + "' must be an integer");
    return v.get<std::int64_t>();
}

inline std::vector<std::string> string_list(const json& v, const char* name, const Location& loc) {
    if (!v.is_array()) loc.fail(std::string("field '") + name + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string() || x.get_ref<const std::string&>().empty()) {
            loc.fail(std::string("field '") + name + "' must contain non-empty strings");
        }
        out.push_back(x.get<std::string>());
    }
    return out;
}

inline std::vector<std::string> sorted_unique(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

/// Tracks per-kind representation and dense dimension across a whole corpus.
class ShapeRegistry {
public:
    void check(const DocVector& v, const Location& loc) {
        auto [it, inserted] = shapes_.try_emplace(v.kind(), Shape{v.is_sparse(), v.is_sparse() ? 0 : v.dimension()});
        if (inserted) return;
        if (it->second.sparse != v.is_sparse()) {
            loc.fail("vector kind '" + std::string(to_string(v.kind())) + "' mixes sparse and dense representations");
        }
        if (!v.is_sparse() && it->second.dimension != v.dimension()) {
            loc.fail("vector-dimension mismatch for kind '" + std::string(to_string(v.kind())) + "': " +
                     std::to_string(v.dimension()) + " vs " + std::to_string(it->second.dimension));
        }
    }

private:
    struct Shape {
        bool sparse;
        std::size_t dimension;
    };
    std::map<VectorKind, Shape> shapes_;
};

inline DocVector parse_vector(VectorKind kind, const json& v, const Location& loc) {
    DocVector out;
    try {
        if (v.is_object()) {
            std::vector<SparseEntry> entries;
            for (const auto& [key, weight] : v.items()) {
                std::size_t consumed = 0;
                unsigned long idx = 0;
                try {
                    idx = std::stoul(key, &consumed);
                } catch (const std::exception&) {
                    consumed = 0;
                }
                if (consumed != key.size() || idx > UINT32_MAX || key.empty() || key[0] == '-' || key[0] == '+') {
                    loc.fail("sparse vector index '" + key + "' is not a non-negative integer");
                }
                if (!weight.is_number()) loc.fail("sparse vector weight must be a number");
                entries.push_back({static_cast<std::uint32_t>(idx), weight.get<double>()});
            }
            out = DocVector::sparse(kind, std::move(entries));
        } else if (v.is_array()) {
            std::vector<double> values;
            values.reserve(v.size());
            for (const auto& x : v) {
                if (!x.is_number()) loc.fail("dense vector component must be a number");
                values.push_back(x.get<double>());
            }
            out = DocVector::dense(kind, std::move(values));
        } else {
            loc.fail("vector must be an object (sparse) or an array (dense)");
        }
    } catch (const DataError& e) {
        if (std::string_view(e.what()).starts_with(loc.file)) throw;
        loc.fail(e.what());
    }
    if (is_non_negative_kind(kind) && out.has_negative_component()) {
        loc.fail("vector kind '" + std::string(to_string(kind)) + "' must be non-negative");
    }
    return out;
}

inline VectorMap parse_vector_map(const json& v, const char* name, const Location& loc, ShapeRegistry& shapes) {
    if (!v.is_object()) loc.fail(std::string("field '") + name + "' must be an object keyed by vector kind");
    VectorMap out;
    for (const auto& [key, value] : v.items()) {
        auto kind = parse_vector_kind(key);
        if (!kind) loc.fail("unknown vector kind '" + key + "'");
        auto vec = parse_vector(*kind, value, loc);
        shapes.check(vec, loc);
        out.emplace(*kind, std::move(vec));
    }
    return out;
}

inline json vector_to_json(const DocVector& v) {
    if (v.is_sparse()) {
        json obj = json::object();
        for (const auto& e : v.sparse_entries()) obj[std::to_string(e.index)] = e.weight;
        return obj;
    }
    json arr = json::array();
    for (double x : v.dense_values()) arr.push_back(x);
    return arr;
}

inline json vector_map_to_json(const VectorMap& m) {
    json obj = json::object();
    for (const auto& [kind, v] : m) obj[std::string(to_string(kind))] = vector_to_json(v);
    return obj;
}

}  // namespace detail

/// Reads ground_truth.jsonl. When given, reviewer ids are checked against
/// `pool` and manuscript ids against `manuscript_ids`.
inline GroundTruth read_ground_truth(std::istream& in, const CandidatePool* pool = nullptr,
                                     const std::set<std::string>* manuscript_ids = nullptr) {
    using nlohmann::json;
    GroundTruth gt;
    detail::for_each_record(in, "ground_truth.jsonl", [&](const json& r, const detail::Location& loc) {
        auto mid = detail::string_field(r, "manuscript", loc);
        if (manuscript_ids && !manuscript_ids->contains(mid)) loc.fail("ground truth for unknown manuscript '" + mid + "'");
        auto& rel = gt.relevant[mid];
        for (auto& rid : detail::string_list(detail::field(r, "relevant", loc), "relevant", loc)) {
            if (pool && !pool->has_reviewer(rid)) loc.fail("ground truth names unknown reviewer '" + rid + "'");
            rel.insert(std::move(rid));
        }
    });
    return gt;
}

struct CorpusStreams {
    std::istream* publications = nullptr;
    std::istream* reviewers = nullptr;
    std::istream* manuscripts = nullptr;
    std::istream* ground_truth = nullptr;  // optional
};

/// Parses and validates a corpus. Publications dated after `reference_year`
/// are dropped (counted in the report); reviewers left without publications
/// are rejected by name. Schema violations, dangling publication ids and
/// vector-shape mismatches throw DataError with file and line.
inline Corpus load_corpus(const CorpusStreams& in, int reference_year) {
    using detail::Location;
    using nlohmann::json;

    Corpus corpus;
    corpus.reference_year = reference_year;
    detail::ShapeRegistry shapes;

    std::map<std::string, PublicationRecord> publications;
    std::set<std::string> dropped;
    detail::for_each_record(*in.publications, "publications.jsonl", [&](const json& r, const Location& loc) {
        PublicationRecord p;
        p.id = detail::string_field(r, "id", loc);
        p.year = static_cast<int>(detail::integer_field(detail::field(r, "year", loc), "year", loc));
        p.citation_count = detail::integer_field(detail::field(r, "citations", loc), "citations", loc);
        if (p.citation_count < 0) loc.fail("field 'citations' must be >= 0");
        p.author_ids = detail::sorted_unique(detail::string_list(detail::field(r, "authors", loc), "authors", loc));
        if (p.author_ids.empty()) loc.fail("publication '" + p.id + "' has no authors");
        p.vectors = detail::parse_vector_map(detail::field(r, "vectors", loc), "vectors", loc, shapes);
        if (auto it = r.find("paper_length"); it != r.end() && !it->is_null()) {
            p.paper_length = static_cast<int>(detail::integer_field(*it, "paper_length", loc));
        }
        if (auto it = r.find("core_rank"); it != r.end() && !it->is_null()) {
            if (!it->is_string()) loc.fail("field 'core_rank' must be a string");
            p.venue_core_rank = it->get<std::string>();
        }
        if (auto it = r.find("avg_author_h_index"); it != r.end() && !it->is_null()) {
            if (!it->is_number()) loc.fail("field 'avg_author_h_index' must be a number");
            p.avg_author_h_index = it->get<double>();
        }
        if (publications.contains(p.id) || dropped.contains(p.id)) loc.fail("duplicate publication id '" + p.id + "'");
        if (p.year > reference_year) {
            dropped.insert(p.id);
            ++corpus.report.dropped_future_publications;
            return;
        }
        publications.emplace(p.id, std::move(p));
    });

    std::map<std::string, ReviewerProfile> reviewers;
    detail::for_each_record(*in.reviewers, "reviewers.jsonl", [&](const json& r, const Location& loc) {
        ReviewerProfile rev;
        rev.id = detail::string_field(r, "id", loc);
        if (auto it = r.find("name"); it != r.end()) {
            if (!it->is_string()) loc.fail("field 'name' must be a string");
            rev.display_name = it->get<std::string>();
        }
        if (reviewers.contains(rev.id)) loc.fail("duplicate reviewer id '" + rev.id + "'");
        std::set<std::string> seen;
        for (auto& pid : detail::string_list(detail::field(r, "pubs", loc), "pubs", loc)) {
            if (dropped.contains(pid)) continue;
            if (!publications.contains(pid)) {
                loc.fail("reviewer '" + rev.id + "' lists unknown publication '" + pid + "'");
            }
            if (!seen.insert(pid).second) {
                ++corpus.report.duplicate_publication_refs;
                continue;
            }
            rev.publication_ids.push_back(std::move(pid));
        }
        if (rev.publication_ids.empty()) {
            corpus.report.rejected_reviewers.push_back(rev.id + ": no publications up to " +
                                                       std::to_string(reference_year));
            return;
        }
        reviewers.emplace(rev.id, std::move(rev));
    });

    corpus.pool = CandidatePool(std::move(reviewers), std::move(publications));

    std::set<std::string> manuscript_ids;
    detail::for_each_record(*in.manuscripts, "manuscripts.jsonl", [&](const json& r, const Location& loc) {
        ManuscriptRecord m;
        m.id = detail::string_field(r, "id", loc);
        if (!manuscript_ids.insert(m.id).second) loc.fail("duplicate manuscript id '" + m.id + "'");
        m.author_ids = detail::sorted_unique(detail::string_list(detail::field(r, "authors", loc), "authors", loc));
        m.reference_year = reference_year + 1;
        if (auto it = r.find("reference_year"); it != r.end()) {
            m.reference_year = static_cast<int>(detail::integer_field(*it, "reference_year", loc));
        }
        m.vectors_full = detail::parse_vector_map(detail::field(r, "vectors_full", loc), "vectors_full", loc, shapes);
        m.vectors_research =
            detail::parse_vector_map(detail::field(r, "vectors_research", loc), "vectors_research", loc, shapes);
        corpus.manuscripts.push_back(std::move(m));
    });

    if (in.ground_truth) corpus.ground_truth = read_ground_truth(*in.ground_truth, &corpus.pool, &manuscript_ids);
    return corpus;
}

inline Corpus load_corpus(const std::filesystem::path& dir, int reference_year) {
    auto open = [&](const char* name) {
        std::ifstream f(dir / name);
        if (!f) throw DataError("cannot open " + (dir / name).string());
        return f;
    };
    auto pubs = open("publications.jsonl");
    auto revs = open("reviewers.jsonl");
    auto mans = open("manuscripts.jsonl");
    std::optional<std::ifstream> gt;
    if (std::filesystem::exists(dir / "ground_truth.jsonl")) gt.emplace(open("ground_truth.jsonl"));
    return load_corpus(CorpusStreams{&pubs, &revs, &mans, gt ? &*gt : nullptr}, reference_year);
}

/// Canonical serialization: records ordered by id, object keys sorted.
inline void write_corpus(const Corpus& corpus, std::ostream& publications, std::ostream& reviewers,
                         std::ostream& manuscripts, std::ostream* ground_truth = nullptr) {
    using nlohmann::json;
    for (const auto& [id, p] : corpus.pool.publications()) {
        json r = {{"id", p.id},
                  {"year", p.year},
                  {"citations", p.citation_count},
                  {"authors", p.author_ids},
                  {"vectors", detail::vector_map_to_json(p.vectors)}};
        if (p.paper_length) r["paper_length"] = *p.paper_length;
        if (p.venue_core_rank) r["core_rank"] = *p.venue_core_rank;
        if (p.avg_author_h_index) r["avg_author_h_index"] = *p.avg_author_h_index;
        publications << r.dump() << '\n';
    }
    for (const auto& [id, rev] : corpus.pool.reviewers()) {
        reviewers << json{{"id", rev.id}, {"name", rev.display_name}, {"pubs", rev.publication_ids}}.dump() << '\n';
    }
    auto sorted = corpus.manuscripts;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& m : sorted) {
        manuscripts << json{{"id", m.id},
                            {"authors", m.author_ids},
                            {"reference_year", m.reference_year},
                            {"vectors_full", detail::vector_map_to_json(m.vectors_full)},
                            {"vectors_research", detail::vector_map_to_json(m.vectors_research)}}
                           .dump()
                    << '\n';
    }
    if (ground_truth && corpus.ground_truth) {
        for (const auto& [mid, rel] : corpus.ground_truth->relevant) {
            *ground_truth << json{{"manuscript", mid}, {"relevant", rel}}.dump() << '\n';
        }
    }
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream pubs(dir / "publications.jsonl");
    std::ofstream revs(dir / "reviewers.jsonl");
    std::ofstream mans(dir / "manuscripts.jsonl");
    if (corpus.ground_truth) {
        std::ofstream gt(dir / "ground_truth.jsonl");
        write_corpus(corpus, pubs, revs, mans, &gt);
    } else {
        write_corpus(corpus, pubs, revs, mans);
    }
}

}  // namespace revset
