#pragma once

// Document vectors (sparse or dense) and the two primitives everything else
// is built on: cosine similarity and length-normalized weighted aggregation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "revset/error.hpp"

namespace revset {

enum class VectorKind { tfidf, lda, dbow, dm, bert };

inline constexpr std::array<VectorKind, 5> kAllVectorKinds = {
    VectorKind::tfidf, VectorKind::lda, VectorKind::dbow, VectorKind::dm, VectorKind::bert};

inline constexpr std::string_view to_string(VectorKind kind) noexcept {
    switch (kind) {
        case VectorKind::tfidf: return "tfidf";
        case VectorKind::lda: return "lda";
        case VectorKind::dbow: return "dbow";
        case VectorKind::dm: return "dm";
        case VectorKind::bert: return "bert";
    }
    return "?";
}

inline std::optional<VectorKind> parse_vector_kind(std::string_view name) noexcept {
    for (auto kind : kAllVectorKinds) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

/// tf-idf and topic vectors have no negative components.
inline constexpr bool is_non_negative_kind(VectorKind kind) noexcept {
    return kind == VectorKind::tfidf || kind == VectorKind::lda;
}

struct SparseEntry {
    std::uint32_t index;
    double weight;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// A document embedding of one kind. Sparse entries are kept strictly
/// increasing by index with no stored zeros; the L2 norm is cached.
class DocVector {
public:
    DocVector() = default;

    /// Entries may arrive in any order; zeros are dropped, duplicate indices rejected.
    static DocVector sparse(VectorKind kind, std::vector<SparseEntry> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].index == entries[i - 1].index) {
                throw DataError("sparse vector has duplicate index " + std::to_string(entries[i].index));
            }
        }
        std::erase_if(entries, [](const SparseEntry& e) { return e.weight == 0.0; });
        check_finite(entries);
        DocVector v;
        v.kind_ = kind;
        v.data_ = std::move(entries);
        v.norm_ = v.compute_norm();
        return v;
    }

    static DocVector dense(VectorKind kind, std::vector<double> values) {
        for (double x : values) {
            if (!std::isfinite(x)) throw DataError("dense vector has a non-finite component");
        }
        DocVector v;
        v.kind_ = kind;
        v.data_ = std::move(values);
        v.norm_ = v.compute_norm();
        return v;
    }

    VectorKind kind() const noexcept { return kind_; }
    bool is_sparse() const noexcept { return std::holds_alternative<std::vector<SparseEntry>>(data_); }
    double norm() const noexcept { return norm_; }

    std::span<const SparseEntry> sparse_entries() const {
        return std::get<std::vector<SparseEntry>>(data_);
    }
    std::span<const double> dense_values() const { return std::get<std::vector<double>>(data_); }

    /// Dense: the component count. Sparse: one past the largest stored index.
    std::size_t dimension() const noexcept {
        if (is_sparse()) {
            const auto& e = std::get<std::vector<SparseEntry>>(data_);
            return e.empty() ? 0 : std::size_t{e.back().index} + 1;
        }
        return std::get<std::vector<double>>(data_).size();
    }

    bool has_negative_component() const noexcept {
        if (is_sparse()) {
            const auto& e = std::get<std::vector<SparseEntry>>(data_);
            return std::any_of(e.begin(), e.end(), [](const SparseEntry& s) { return s.weight < 0.0; });
        }
        const auto& d = std::get<std::vector<double>>(data_);
        return std::any_of(d.begin(), d.end(), [](double x) { return x < 0.0; });
    }

    friend bool operator==(const DocVector& a, const DocVector& b) {
        return a.kind_ == b.kind_ && a.data_ == b.data_;
    }

private:
    static void check_finite(const std::vector<SparseEntry>& entries) {
        for (const auto& e : entries) {
            if (!std::isfinite(e.weight)) throw DataError("sparse vector has a non-finite weight");
        }
    }

    double compute_norm() const noexcept {
        double sum = 0.0;
        if (is_sparse()) {
            for (const auto& e : std::get<std::vector<SparseEntry>>(data_)) sum += e.weight * e.weight;
        } else {
            for (double x : std::get<std::vector<double>>(data_)) sum += x * x;
        }
        return std::sqrt(sum);
    }

    VectorKind kind_ = VectorKind::tfidf;
    std::variant<std::vector<SparseEntry>, std::vector<double>> data_;
    double norm_ = 0.0;
};

inline double dot(const DocVector& a, const DocVector& b) {
    if (a.kind() != b.kind()) {
        throw DataError("cannot compare a " + std::string(to_string(a.kind())) + " vector with a " +
                        std::string(to_string(b.kind())) + " vector");
    }
    if (a.is_sparse() != b.is_sparse()) {
        throw DataError("cannot compare sparse and dense vectors of kind " + std::string(to_string(a.kind())));
    }
    double sum = 0.0;
    if (a.is_sparse()) {
        auto x = a.sparse_entries();
        auto y = b.sparse_entries();
        std::size_t i = 0, j = 0;
        while (i < x.size() && j < y.size()) {
            if (x[i].index < y[j].index) {
                ++i;
            } else if (y[j].index < x[i].index) {
                ++j;
            } else {
                sum += x[i].weight * y[j].weight;
                ++i;
                ++j;
            }
        }
        return sum;
    }
    auto x = a.dense_values();
    auto y = b.dense_values();
    if (x.size() != y.size()) {
        throw DataError("dense dimension mismatch: " + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
    return sum;
}

/// Cosine similarity; 0 when either vector has zero norm. Clamped to [-1, 1]
/// so rounding cannot push identical vectors above 1.
inline double cosine(const DocVector& a, const DocVector& b) {
    const double d = dot(a, b);
    if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
    return std::clamp(d / (a.norm() * b.norm()), -1.0, 1.0);
}

/// L2-normalized sum of weights[i] * vectors[i]. Sparse inputs give a sparse
/// result. Throws DegenerateAggregate when the weighted sum is zero.
inline DocVector weighted_aggregate(std::span<const DocVector* const> vectors, std::span<const double> weights) {
    if (vectors.empty()) throw DataError("weighted_aggregate: no vectors");
    if (vectors.size() != weights.size()) throw DataError("weighted_aggregate: vectors and weights differ in length");
    const VectorKind kind = vectors.front()->kind();
    const bool sparse = vectors.front()->is_sparse();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i]->kind() != kind || vectors[i]->is_sparse() != sparse) {
            throw DataError("weighted_aggregate: vectors of mixed kind or representation");
        }
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw DataError("weighted_aggregate: weights must be positive and finite");
        }
    }

    if (sparse) {
        std::vector<SparseEntry> acc;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            for (const auto& e : vectors[i]->sparse_entries()) acc.push_back({e.index, weights[i] * e.weight});
        }
        std::stable_sort(acc.begin(), acc.end(),
                         [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
        std::vector<SparseEntry> merged;
        for (const auto& e : acc) {
            if (!merged.empty() && merged.back().index == e.index) {
                merged.back().weight += e.weight;
            } else {
                merged.push_back(e);
            }
        }
        double norm = 0.0;
        for (const auto& e : merged) norm += e.weight * e.weight;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw DegenerateAggregate();
        for (auto& e : merged) e.weight /= norm;
        return DocVector::sparse(kind, std::move(merged));
    }

    const std::size_t dim = vectors.front()->dense_values().size();
    std::vector<double> sum(dim, 0.0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        auto values = vectors[i]->dense_values();
        if (values.size() != dim) throw DataError("weighted_aggregate: dense dimension mismatch");
        for (std::size_t d = 0; d < dim; ++d) sum[d] += weights[i] * values[d];
    }
    double norm = 0.0;
    for (double x : sum) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw DegenerateAggregate();
    for (double& x : sum) x /= norm;
    return DocVector::dense(kind, std::move(sum));
}

inline DocVector weighted_aggregate(std::span<const DocVector> vectors, std::span<const double> weights) {
    std::vector<const DocVector*> ptrs;
    ptrs.reserve(vectors.size());
    for (const auto& v : vectors) ptrs.push_back(&v);
    return weighted_aggregate(std::span<const DocVector* const>(ptrs), weights);
}

}  // namespace revset
