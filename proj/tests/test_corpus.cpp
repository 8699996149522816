#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "revset/corpus.hpp"
#include "revset/synthetic.hpp"

using namespace revset;

namespace {

// 3 reviewers, 5 publications: r1 and r2 wrote p3 together; x is external.
const char* kPubs = R"({"id":"p1","year":2010,"citations":4,"authors":["r1","x"],"vectors":{"tfidf":{"0":1.0,"3":0.5},"lda":[0.7,0.3]}}
{"id":"p2","year":2014,"citations":0,"authors":["r1"],"vectors":{"tfidf":{"1":2.0},"lda":[0.1,0.9]}}
{"id":"p3","year":2012,"citations":10,"authors":["r1","r2"],"vectors":{"tfidf":{"0":0.2,"1":0.2},"lda":[0.5,0.5]}}
{"id":"p4","year":2016,"citations":1,"authors":["r2"],"vectors":{"tfidf":{"2":1.0},"lda":[0.4,0.6]},"core_rank":"A"}

{"id":"p5","year":2001,"citations":2,"authors":["r3","y"],"vectors":{"tfidf":{"3":1.0},"lda":[0.9,0.1]},"paper_length":12}
)";
const char* kRevs = R"({"id":"r1","name":"One","pubs":["p1","p2","p3"]}
{"id":"r2","name":"Two","pubs":["p3","p4"]}
{"id":"r3","name":"Three","pubs":["p5"]}
)";
const char* kMans = R"({"id":"m1","authors":["y"],"vectors_full":{"tfidf":{"0":1.0},"lda":[0.6,0.4]},"vectors_research":{"tfidf":{"0":1.0},"lda":[0.6,0.4]}}
)";

Corpus load_strings(const std::string& pubs, const std::string& revs, const std::string& mans, int year = 2016,
                    const std::string* gt = nullptr) {
    std::istringstream p(pubs), r(revs), m(mans);
    std::optional<std::istringstream> g;
    if (gt) g.emplace(*gt);
    return load_corpus(CorpusStreams{&p, &r, &m, g ? &*g : nullptr}, year);
}

std::string error_of(auto&& f) {
    try {
        f();
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("well-formed corpus loads", "[corpus]") {
    auto c = load_strings(kPubs, kRevs, kMans);
    CHECK(c.pool.publications().size() == 5);
    CHECK(c.pool.reviewers().size() == 3);
    CHECK(c.manuscripts.size() == 1);
    CHECK(c.report.dropped_future_publications == 0);
    CHECK(c.report.rejected_reviewers.empty());
    CHECK(c.manuscripts[0].reference_year == 2017);
    CHECK(c.pool.publication("p4").venue_core_rank == "A");
    CHECK(c.pool.publication("p5").paper_length == 12);
    CHECK(c.pool.publication("p1").vector(VectorKind::tfidf)->is_sparse());
    CHECK(c.pool.coauthors("r1", "r2"));
    CHECK(c.pool.coauthors("r2", "r1"));
    CHECK_FALSE(c.pool.coauthors("r1", "r3"));
}

TEST_CASE("publications after the reference year are dropped", "[corpus]") {
    auto c = load_strings(kPubs, kRevs, kMans, 2015);
    CHECK(c.report.dropped_future_publications == 1);
    CHECK_FALSE(c.pool.publications().contains("p4"));
    CHECK(c.pool.reviewer("r2").publication_ids == std::vector<std::string>{"p3"});
}

TEST_CASE("a reviewer whose last publication is dropped is rejected by name", "[corpus]") {
    auto c = load_strings(kPubs, kRevs, kMans, 2000);
    CHECK(c.report.dropped_future_publications == 5);
    CHECK(c.pool.reviewers().empty());
    REQUIRE(c.report.rejected_reviewers.size() == 3);
    CHECK(c.report.rejected_reviewers[2].starts_with("r3:"));

    auto partial = load_strings(kPubs, kRevs, kMans, 2013);
    CHECK(partial.pool.reviewers().size() == 3);
    CHECK(partial.report.rejected_reviewers.empty());
}

TEST_CASE("ingestion errors name file, line and offender", "[corpus]") {
    SECTION("unknown publication id") {
        auto msg = error_of([] { load_strings(kPubs, R"({"id":"r9","pubs":["nope"]})", kMans); });
        CHECK(msg.find("reviewers.jsonl:1") != std::string::npos);
        CHECK(msg.find("'nope'") != std::string::npos);
    }
    SECTION("dense dimension mismatch") {
        std::string pubs = std::string(kPubs) +
                           R"({"id":"p6","year":2000,"citations":0,"authors":["z"],"vectors":{"lda":[0.2,0.3,0.5]}})";
        auto msg = error_of([&] { load_strings(pubs, kRevs, kMans); });
        CHECK(msg.find("publications.jsonl:7") != std::string::npos);
        CHECK(msg.find("dimension mismatch") != std::string::npos);
    }
    SECTION("sparse and dense mixed within a kind") {
        std::string mans = R"({"id":"m1","authors":["y"],"vectors_full":{"tfidf":[1.0,0.0]},"vectors_research":{}})";
        CHECK(error_of([&] { load_strings(kPubs, kRevs, mans); }).find("mixes sparse and dense") != std::string::npos);
    }
    SECTION("negative tf-idf weight") {
        std::string pubs = R"({"id":"p1","year":2000,"citations":0,"authors":["r"],"vectors":{"tfidf":{"1":-0.5}}})";
        CHECK(error_of([&] { load_strings(pubs, "", ""); }).find("non-negative") != std::string::npos);
    }
    SECTION("schema violations") {
        CHECK(error_of([] { load_strings(R"({"id":"p1","year":2000,"authors":["a"],"vectors":{}})", "", ""); })
                  .find("missing field 'citations'") != std::string::npos);
        CHECK(error_of([] { load_strings(R"({"id":"p1","year":2000,"citations":1,"authors":[],"vectors":{}})", "", ""); })
                  .find("no authors") != std::string::npos);
        CHECK(error_of([] { load_strings("not json", "", ""); }).find("publications.jsonl:1: invalid JSON") !=
              std::string::npos);
        CHECK(error_of([] {
                  load_strings(R"({"id":"p1","year":2000,"citations":1,"authors":["a"],"vectors":{"w2v":[1]}})", "", "");
              }).find("unknown vector kind") != std::string::npos);
        CHECK(error_of([] {
                  load_strings(R"({"id":"p1","year":2000,"citations":1,"authors":["a"],"vectors":{"tfidf":{"x":1}}})", "",
                               "");
              }).find("not a non-negative integer") != std::string::npos);
    }
    SECTION("ground truth must name pool reviewers") {
        std::string gt = R"({"manuscript":"m1","relevant":["r1","ghost"]})";
        CHECK(error_of([&] { load_strings(kPubs, kRevs, kMans, 2016, &gt); }).find("'ghost'") != std::string::npos);
        std::string ok = R"({"manuscript":"m1","relevant":["r1","r3"]})";
        auto c = load_strings(kPubs, kRevs, kMans, 2016, &ok);
        REQUIRE(c.ground_truth);
        CHECK(c.ground_truth->relevant.at("m1") == std::set<std::string>{"r1", "r3"});
    }
}

TEST_CASE("conflict of interest", "[corpus]") {
    auto c = load_strings(kPubs, kRevs, kMans);
    auto m = c.manuscripts[0];

    SECTION("reviewer is an author") {
        m.author_ids = {"r2"};
        CHECK(conflict_of_interest(c.pool, m, "r2"));
    }
    SECTION("reviewer co-authored with an author, at any time") {
        CHECK(conflict_of_interest(c.pool, m, "r3"));  // r3 and y wrote p5 in 2001
    }
    SECTION("no author link") {
        CHECK_FALSE(conflict_of_interest(c.pool, m, "r1"));
        CHECK_FALSE(conflict_of_interest(c.pool, m, "r2"));
    }
    SECTION("a window forgives old co-authorships") {
        CHECK_FALSE(conflict_of_interest(c.pool, m, "r3", 3));
        m.author_ids = {"x"};  // x and r1 wrote p1 in 2010
        CHECK(conflict_of_interest(c.pool, m, "r1", 7));
        CHECK_FALSE(conflict_of_interest(c.pool, m, "r1", 6));
    }
    SECTION("unknown reviewer") { CHECK_THROWS_AS(conflict_of_interest(c.pool, m, "nobody"), DataError); }
    CHECK(conflict_free_reviewers(c.pool, c.manuscripts[0]) == std::vector<std::string>{"r1", "r2"});
}

TEST_CASE("co-author index is symmetric and rebuildable", "[corpus][property]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SyntheticOptions opt;
        opt.seed = seed;
        opt.coauthor_probability = 0.4;
        auto c = make_synthetic_corpus(opt);
        const auto& index = c.pool.coauthor_index();
        for (const auto& [a, links] : index) {
            for (const auto& [b, year] : links) {
                REQUIRE(index.at(b).at(a) == year);
            }
        }
        CHECK(build_coauthor_index(c.pool.publications()) == index);
        for (const auto& m : c.manuscripts) {
            CandidatePool rebuilt(c.pool.reviewers(), c.pool.publications());
            for (const auto& [rid, r] : c.pool.reviewers()) {
                CHECK(conflict_of_interest(c.pool, m, rid) == conflict_of_interest(rebuilt, m, rid));
            }
        }
    }
}

TEST_CASE("serialize then load yields an equal corpus", "[corpus][property]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SyntheticOptions opt;
        opt.seed = seed;
        opt.reviewers = 8;
        auto original = make_synthetic_corpus(opt);
        std::ostringstream p, r, m, g;
        write_corpus(original, p, r, m, &g);
        std::string gt = g.str();
        auto loaded = load_strings(p.str(), r.str(), m.str(), opt.reference_year, &gt);
        CHECK(loaded.pool == original.pool);
        CHECK(loaded.manuscripts == original.manuscripts);
        CHECK(loaded.ground_truth == original.ground_truth);

        std::ostringstream p2, r2, m2;
        write_corpus(loaded, p2, r2, m2);
        CHECK(p2.str() == p.str());
        CHECK(r2.str() == r.str());
        CHECK(m2.str() == m.str());
    }
}
