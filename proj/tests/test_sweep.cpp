#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "revset/sweep.hpp"
#include "revset/synthetic.hpp"

using namespace revset;

namespace {

Corpus small_corpus() {
    SyntheticOptions opt;
    opt.reviewers = 24;
    opt.manuscripts = 3;
    opt.seed = 9;
    return make_synthetic_corpus(opt);
}

SweepGrid one_point() {
    SweepGrid g;
    g.kinds = {VectorKind::tfidf};
    g.techniques = {{VotingTechnique::Family::sum}};
    g.cutoffs = {10};
    g.contents = {ContentType::full};
    g.thresholds = {0.0};
    return g;
}

std::string table(const SweepGrid& g, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    write_sweep_table(out, g, rows);
    return out.str();
}

}  // namespace

TEST_CASE("a one-point grid yields one row", "[sweep]") {
    auto c = small_corpus();
    auto g = one_point();
    auto rows = sweep(c, g);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status() == "ok");
    CHECK(rows[0].ok == 3);
    REQUIRE(rows[0].r0_sc);
    CHECK(*rows[0].r0_sc > 0.0);
    CHECK(rows[0].map_at_10);
    CHECK(rows[0].bt3_sc);
}

TEST_CASE("the reference grid has 1,632 configurations", "[sweep]") {
    auto g = SweepGrid::reference_grid();
    CHECK(g.size() == 1632);
    CHECK(SweepGrid::from_json(nlohmann::json::object()).size() == 1632);
}

TEST_CASE("rows follow grid order", "[sweep]") {
    auto c = small_corpus();
    SweepGrid g = one_point();
    g.kinds = {VectorKind::tfidf, VectorKind::bert};
    g.cutoffs = {5, std::nullopt};
    g.thresholds = {0.0, 0.25};
    g.baselines = false;
    auto rows = sweep(c, g);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].kind == VectorKind::tfidf);
    CHECK(rows[0].cutoff == 5u);
    CHECK(rows[1].threshold == 0.25);
    CHECK_FALSE(rows[2].cutoff);
    CHECK(rows[4].kind == VectorKind::bert);
    CHECK_FALSE(rows[0].bt3_sc);
}

TEST_CASE("a failing cell is marked and the sweep completes", "[sweep]") {
    auto c = small_corpus();
    SweepGrid g = one_point();
    g.thresholds = {0.0, 0.99};
    auto rows = sweep(c, g);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status() == "ok");
    CHECK(rows[1].status() == "failed");
    CHECK(rows[1].failed == 3);
    CHECK_FALSE(rows[1].r0_sc);
    CHECK(rows[1].first_error.find("ThresholdTooStrict") != std::string::npos);
    CHECK(rows[1].map_at_10 == rows[0].map_at_10);  // step 1 metrics do not depend on step 2
    auto text = table(g, rows);
    CHECK(text.find("\tfailed\t0\t3\t") != std::string::npos);
}

TEST_CASE("sweep output does not depend on the thread count", "[sweep][property]") {
    auto c = small_corpus();
    SweepGrid g;
    g.kinds = {VectorKind::tfidf, VectorKind::dm};
    g.techniques = {{VotingTechnique::Family::sum}, VotingTechnique::votes(0.25), {VotingTechnique::Family::mrr}};
    g.cutoffs = {10, std::nullopt};
    g.contents = {ContentType::full, ContentType::research};
    g.thresholds = {0.0, 0.5};
    g.base.rng_seed = 17;
    auto serial = table(g, sweep(c, g, 1));
    CHECK(serial == table(g, sweep(c, g, 3)));
    CHECK(serial == table(g, sweep(c, g, 8)));
}

TEST_CASE("grid files", "[sweep]") {
    auto g = SweepGrid::from_json(nlohmann::json::parse(
        R"({"kinds":["tfidf"],"techniques":["sum","votes:0.5"],"cutoffs":[10,"all"],"contents":["research"],
            "thresholds":[0.25],"seed":3,"set_size":2})"));
    CHECK(g.size() == 4);
    CHECK(g.base.rng_seed == 3);
    CHECK(g.base.set_size == 2);
    CHECK_FALSE(g.cutoffs[1]);
    CHECK_THROWS_AS(SweepGrid::from_json(nlohmann::json::parse(R"({"kinds":[]})")), DataError);
    CHECK_THROWS_AS(SweepGrid::from_json(nlohmann::json::parse(R"({"kinds":["w2v"]})")), DataError);
    CHECK_THROWS_AS(SweepGrid::from_json(nlohmann::json::parse(R"({"thresholds":[2]})")), DataError);
    CHECK_THROWS_AS(SweepGrid::from_json(nlohmann::json::parse(R"({"cutoffs":[0]})")), DataError);
}
