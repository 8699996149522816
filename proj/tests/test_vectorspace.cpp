#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>

#include "revset/vectorspace.hpp"

using namespace revset;
using Catch::Matchers::WithinAbs;

namespace {

DocVector random_sparse(std::mt19937_64& rng, VectorKind kind, bool non_negative) {
    std::uniform_int_distribution<std::uint32_t> idx(0, 60);
    std::uniform_int_distribution<int> count(0, 12);
    std::uniform_real_distribution<double> w(non_negative ? 0.0 : -1.0, 1.0);
    std::map<std::uint32_t, double> entries;
    for (int i = count(rng); i > 0; --i) entries[idx(rng)] = w(rng);
    std::vector<SparseEntry> v;
    for (auto [i, x] : entries) v.push_back({i, x});
    return DocVector::sparse(kind, v);
}

}  // namespace

TEST_CASE("sparse vectors are stored sorted without zeros", "[vectorspace]") {
    auto v = DocVector::sparse(VectorKind::tfidf, {{7, 0.5}, {2, 0.0}, {3, 1.0}});
    REQUIRE(v.sparse_entries().size() == 2);
    CHECK(v.sparse_entries()[0].index == 3);
    CHECK(v.sparse_entries()[1].index == 7);
    CHECK_THAT(v.norm(), WithinAbs(std::sqrt(1.25), 1e-15));
    CHECK_THROWS_AS(DocVector::sparse(VectorKind::tfidf, {{1, 0.5}, {1, 0.2}}), DataError);
}

TEST_CASE("cosine on hand examples", "[vectorspace]") {
    SECTION("identity") {
        auto a = DocVector::dense(VectorKind::lda, {0.2, 0.3, 0.5});
        CHECK_THAT(cosine(a, a), WithinAbs(1.0, 1e-15));
    }
    SECTION("disjoint sparse supports") {
        auto a = DocVector::sparse(VectorKind::tfidf, {{0, 1.0}, {4, 2.0}});
        auto b = DocVector::sparse(VectorKind::tfidf, {{1, 1.0}, {5, 3.0}});
        CHECK(cosine(a, b) == 0.0);
    }
    SECTION("(1,1,0) vs (1,0,1) is one half, dense and sparse") {
        auto a = DocVector::dense(VectorKind::lda, {1, 1, 0});
        auto b = DocVector::dense(VectorKind::lda, {1, 0, 1});
        CHECK_THAT(cosine(a, b), WithinAbs(0.5, 1e-15));
        auto sa = DocVector::sparse(VectorKind::tfidf, {{0, 1}, {1, 1}});
        auto sb = DocVector::sparse(VectorKind::tfidf, {{0, 1}, {2, 1}});
        CHECK_THAT(cosine(sa, sb), WithinAbs(0.5, 1e-15));
    }
    SECTION("zero vector matches nothing") {
        auto z = DocVector::dense(VectorKind::bert, {0, 0});
        auto a = DocVector::dense(VectorKind::bert, {1, 2});
        CHECK(cosine(z, a) == 0.0);
        CHECK(cosine(DocVector::sparse(VectorKind::tfidf, {}), DocVector::sparse(VectorKind::tfidf, {{1, 1}})) == 0.0);
    }
    SECTION("dense embeddings may be negative") {
        auto a = DocVector::dense(VectorKind::dbow, {1, 0});
        auto b = DocVector::dense(VectorKind::dbow, {-1, 0});
        CHECK_THAT(cosine(a, b), WithinAbs(-1.0, 1e-15));
    }
    SECTION("kind or representation mismatch") {
        CHECK_THROWS_AS(cosine(DocVector::dense(VectorKind::lda, {1}), DocVector::dense(VectorKind::bert, {1})),
                        DataError);
        CHECK_THROWS_AS(cosine(DocVector::dense(VectorKind::lda, {1}), DocVector::sparse(VectorKind::lda, {{0, 1}})),
                        DataError);
        CHECK_THROWS_AS(cosine(DocVector::dense(VectorKind::dm, {1, 2}), DocVector::dense(VectorKind::dm, {1})),
                        DataError);
    }
}

TEST_CASE("cosine properties on random sparse vectors", "[vectorspace][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 500; ++trial) {
        auto a = random_sparse(rng, VectorKind::tfidf, true);
        auto b = random_sparse(rng, VectorKind::tfidf, true);
        const double ab = cosine(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(ab == cosine(b, a));

        std::vector<SparseEntry> scaled(a.sparse_entries().begin(), a.sparse_entries().end());
        const double lambda = scale(rng);
        for (auto& e : scaled) e.weight *= lambda;
        CHECK_THAT(cosine(DocVector::sparse(VectorKind::tfidf, scaled), b), WithinAbs(ab, 1e-12));

        auto c = random_sparse(rng, VectorKind::dbow, false);
        auto d = random_sparse(rng, VectorKind::dbow, false);
        CHECK(cosine(c, d) >= -1.0);
        CHECK(cosine(c, d) <= 1.0);
    }
}

TEST_CASE("weighted aggregate", "[vectorspace]") {
    SECTION("singleton is normalized") {
        auto v = DocVector::dense(VectorKind::lda, {3, 4});
        std::vector<DocVector> vs{v};
        std::vector<double> w{1.0};
        auto agg = weighted_aggregate(std::span<const DocVector>(vs), w);
        CHECK_THAT(agg.dense_values()[0], WithinAbs(0.6, 1e-15));
        CHECK_THAT(agg.dense_values()[1], WithinAbs(0.8, 1e-15));
        CHECK_THAT(agg.norm(), WithinAbs(1.0, 1e-9));
    }
    SECTION("collinear inputs keep their direction") {
        auto v = DocVector::sparse(VectorKind::tfidf, {{2, 1.0}, {9, 2.0}});
        std::vector<DocVector> vs{v, v};
        std::vector<double> w{0.3, 7.0};
        auto agg = weighted_aggregate(std::span<const DocVector>(vs), w);
        CHECK_THAT(cosine(agg, v), WithinAbs(1.0, 1e-12));
        CHECK(agg.is_sparse());
    }
    SECTION("orthogonal unit vectors average to the diagonal") {
        std::vector<DocVector> vs{DocVector::dense(VectorKind::lda, {1, 0}), DocVector::dense(VectorKind::lda, {0, 1})};
        std::vector<double> w{1.0, 1.0};
        auto agg = weighted_aggregate(std::span<const DocVector>(vs), w);
        CHECK_THAT(agg.dense_values()[0], WithinAbs(1 / std::sqrt(2.0), 1e-12));
        CHECK_THAT(agg.dense_values()[1], WithinAbs(1 / std::sqrt(2.0), 1e-12));
    }
    SECTION("uniform weight scaling does not matter") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<DocVector> vs{random_sparse(rng, VectorKind::tfidf, true), random_sparse(rng, VectorKind::tfidf, true),
                                      DocVector::sparse(VectorKind::tfidf, {{1, 1.0}})};
            std::vector<double> w{0.5, 2.0, 1.0}, w10{5.0, 20.0, 10.0};
            auto a = weighted_aggregate(std::span<const DocVector>(vs), w);
            auto b = weighted_aggregate(std::span<const DocVector>(vs), w10);
            CHECK_THAT(cosine(a, b), WithinAbs(1.0, 1e-12));
            CHECK_THAT(a.norm(), WithinAbs(1.0, 1e-9));
        }
    }
    SECTION("errors") {
        std::vector<DocVector> zeros{DocVector::dense(VectorKind::lda, {0, 0})};
        std::vector<double> one{1.0};
        CHECK_THROWS_AS(weighted_aggregate(std::span<const DocVector>(zeros), one), DegenerateAggregate);
        std::vector<DocVector> cancel{DocVector::dense(VectorKind::dm, {1, 0}), DocVector::dense(VectorKind::dm, {-1, 0})};
        std::vector<double> two{1.0, 1.0};
        CHECK_THROWS_AS(weighted_aggregate(std::span<const DocVector>(cancel), two), DegenerateAggregate);
        std::vector<double> bad{0.0};
        std::vector<DocVector> v{DocVector::dense(VectorKind::lda, {1, 0})};
        CHECK_THROWS_AS(weighted_aggregate(std::span<const DocVector>(v), bad), DataError);
        CHECK_THROWS_AS(weighted_aggregate(std::span<const DocVector>(v), two), DataError);
    }
}
