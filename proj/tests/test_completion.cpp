#include <doctest.h>

#include "cubical/completion.hpp"
#include "fixtures.hpp"

using namespace cubical;

TEST_CASE("free subgroups finish by folding alone") {
    auto y = fixtures::rose(2);

    SUBCASE("single loop") {
        auto z = fixtures::complete_words(y, {{1}});
        CHECK(z.status == CompletionStatus::Finished);
        CHECK(z.map.domain().num_vertices() == 1);
        CHECK(z.map.domain().num_edges() == 1);
    }
    SUBCASE("a squared keeps its two vertices") {
        auto z = fixtures::complete_words(y, {{1, 1}});
        CHECK(z.status == CompletionStatus::Finished);
        CHECK(z.map.domain().num_vertices() == 2);
        CHECK(z.map.domain().num_edges() == 2);
    }
    SUBCASE("a with ab folds down to the whole rose") {
        auto z = fixtures::complete_words(y, {{1}, {1, 2}});
        CHECK(z.status == CompletionStatus::Finished);
        CHECK(z.map.domain().num_vertices() == 1);
        CHECK(z.map.domain().num_edges() == 2);
        CHECK(is_covering(z.map).covering);
    }
}

TEST_CASE("whole torus generators complete to the torus itself") {
    auto z = fixtures::complete_words(fixtures::torus(), {{1}, {2}});
    REQUIRE(z.status == CompletionStatus::Finished);
    CHECK(z.map.domain().num_vertices() == 1);
    CHECK(z.map.domain().num_edges() == 2);
    CHECK(z.map.domain().num_cubes() == 1);
    auto c = is_covering(z.map);
    CHECK(c.covering);
    CHECK(c.fiber == 1);
}

TEST_CASE("index two torus subgroup completes to the double cover") {
    auto z = fixtures::complete_words(fixtures::torus(), {{1, 1}, {2}});
    REQUIRE(z.status == CompletionStatus::Finished);
    CHECK(z.map.domain().num_vertices() == 2);
    CHECK(z.map.domain().num_edges() == 4);
    CHECK(z.map.domain().num_cubes() == 2);
}

TEST_CASE("diagonal torus subgroup exhausts any budget") {
    auto y = fixtures::torus();
    CompletionOptions small{40, std::nullopt};
    auto a = fixtures::complete_words(y, {{1, 2}}, small);
    CHECK(a.status == CompletionStatus::BudgetExceeded);
    CHECK(a.budget_used > 40);

    CompletionOptions larger{80, std::nullopt};
    auto b = fixtures::complete_words(y, {{1, 2}}, larger);
    CHECK(b.status == CompletionStatus::BudgetExceeded);
    CHECK(b.budget_used > a.budget_used);
}

TEST_CASE("finished completions are local isometries") {
    auto z = fixtures::complete_words(fixtures::torus(), {{1, 1}, {2, 2}});
    REQUIRE(z.status == CompletionStatus::Finished);
    CHECK(is_local_isometry(z.map).local_isometry);
    CHECK(!z.history.empty());
}

TEST_CASE("shuffled schedules land on the same canonical form") {
    auto y = fixtures::torus();
    std::vector<std::vector<int>> words{{1, 1}, {2}};
    auto base = fixtures::complete_words(y, words);
    REQUIRE(base.status == CompletionStatus::Finished);
    auto reference = canonical_signature(canonicalize(base.map));
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        CompletionOptions opt;
        opt.schedule_seed = seed;
        auto z = fixtures::complete_words(y, words, opt);
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(canonical_signature(canonicalize(z.map)) == reference);
    }
}

TEST_CASE("canonicalize is idempotent on signatures") {
    auto z = fixtures::complete_words(fixtures::rose(3), {{1, 2, -1}, {3, 3}});
    REQUIRE(z.status == CompletionStatus::Finished);
    auto once = canonicalize(z.map);
    CHECK(canonical_signature(once) == canonical_signature(canonicalize(once)));
}

TEST_CASE("fold reports its quotient maps") {
    auto f = bouquet_from_words(fixtures::rose(2), 0,
                                {fixtures::to_letters({1}), fixtures::to_letters({1, 2})});
    auto site = find_fold(f);
    REQUIRE(site.has_value());
    QuotientMaps q;
    auto g = fold(f, *site, &q);
    CHECK(q.vertex_map.size() == f.domain().num_vertices());
    CHECK(q.edge_map.size() == f.domain().num_edges());
    CHECK(g.domain().num_edges() + 1 == f.domain().num_edges());
    // the basepoint never moves
    CHECK(q.vertex_map[0] == 0);
}
