#include <doctest.h>

#include <algorithm>

#include "cubical/group_algorithms.hpp"
#include "cubical/io.hpp"
#include "fixtures.hpp"

using namespace cubical;

namespace {

std::vector<CubicalWord> as_words(const std::vector<std::vector<int>>& words) {
    std::vector<CubicalWord> out;
    for (const auto& w : words) out.push_back(fixtures::based_word(w));
    return out;
}

std::vector<std::string> reduced_strings(GroupContext& ctx, const std::vector<int>& w,
                                         const NamedComplex& names) {
    std::vector<std::string> out;
    for (const auto& form : reduced_forms(ctx, fixtures::based_word(w)))
        out.push_back(emit_word(form.letters, names));
    return out;
}

}  // namespace

TEST_CASE("word endpoints and inverses") {
    auto x = fixtures::grid(2, 2, 1);
    // edge 0 runs from vertex 0 to vertex 2 (x direction), edge 2 from 0 to 1
    CubicalWord w{0, {{0, true}, {3, true}}};
    CHECK(word_endpoint(*x, w) == 3);
    auto back = inverse_word(*x, w);
    CHECK(back.base == 3);
    CHECK(word_endpoint(*x, back) == 0);
    CubicalWord broken{0, {{0, true}, {0, true}}};
    CHECK_THROWS_AS((void)word_endpoint(*x, broken), std::invalid_argument);
}

TEST_CASE("spanning trees are rooted breadth-first") {
    auto x = fixtures::grid(2, 2, 1);
    auto tree = spanning_tree(*x);
    CHECK(tree.root == 0);
    CHECK(tree.edges.size() == 3);
    CHECK(!tree.to_parent[0].has_value());
    for (VertexId v = 1; v < 4; ++v) REQUIRE(tree.to_parent[v].has_value());
}

TEST_CASE("presentations read generators and relators off the cells") {
    SUBCASE("rose has no relators") {
        auto x = fixtures::rose(2);
        auto p = cubical_presentation(*x, spanning_tree(*x));
        CHECK(p.generators.size() == 2);
        CHECK(p.relators.empty());
    }
    SUBCASE("torus has the commutator square") {
        auto x = fixtures::torus();
        auto named = fixtures::with_names(x);
        auto p = cubical_presentation(*x, spanning_tree(*x));
        CHECK(p.generators.size() == 2);
        REQUIRE(p.relators.size() == 1);
        CHECK(emit_word(p.relators[0].letters, named) == "a b a^-1 b^-1");
    }
    SUBCASE("tree edges become length one relators") {
        auto x = fixtures::grid(2, 1, 1);
        auto p = cubical_presentation(*x, spanning_tree(*x));
        CHECK(p.generators.size() == 1);
        REQUIRE(p.relators.size() == 1);
        CHECK(p.relators[0].letters.size() == 1);
    }
}

TEST_CASE("letter sequences close up through the tree") {
    auto x = fixtures::grid(2, 1, 1);
    auto tree = spanning_tree(*x);
    auto w = word_to_cubical(*x, tree, {{0, true}});
    CHECK(w.base == 0);
    CHECK(word_endpoint(*x, w) == 0);
    CHECK(w.letters.size() == 2);
    GroupContext ctx(x, 0);
    CHECK(reduced_forms(ctx, w).front().letters.empty());
}

TEST_CASE("reduced forms enumerate the geodesic diamond") {
    auto x = fixtures::torus();
    auto named = fixtures::with_names(x);
    GroupContext ctx(x, 0);
    CHECK(reduced_strings(ctx, {1, 2}, named) == std::vector<std::string>{"a b", "b a"});
    CHECK(reduced_strings(ctx, {1, 2, -1}, named) == std::vector<std::string>{"b"});
    CHECK(reduced_strings(ctx, {1, -1}, named) == std::vector<std::string>{""});

    auto r = fixtures::rose(2);
    GroupContext rc(r, 0);
    auto rn = fixtures::with_names(r);
    CHECK(reduced_strings(rc, {1, 2}, rn) == std::vector<std::string>{"a b"});
    CHECK(reduced_strings(rc, {1, -1, 2}, rn) == std::vector<std::string>{"b"});
}

TEST_CASE("words compare equal through the cover") {
    auto x = fixtures::torus();
    GroupContext ctx(x, 0);
    CHECK(words_equal(ctx, fixtures::based_word({1, 2}), fixtures::based_word({2, 1})));
    auto r = fixtures::rose(2);
    GroupContext rc(r, 0);
    CHECK(!words_equal(rc, fixtures::based_word({1, 2}), fixtures::based_word({2, 1})));
}

TEST_CASE("membership through completions") {
    SUBCASE("free case") {
        auto r = fixtures::rose(2);
        GroupContext ctx(r, 0);
        auto z = fixtures::complete_words(r, {{1, 2}});
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(membership(ctx, z, fixtures::based_word({1, 2})));
        CHECK(membership(ctx, z, fixtures::based_word({1, 2, 1, 2})));
        CHECK(!membership(ctx, z, fixtures::based_word({2, 1})));
        CHECK(!membership(ctx, z, fixtures::based_word({1})));
    }
    SUBCASE("abelian case sees commuted forms") {
        auto t = fixtures::torus();
        GroupContext ctx(t, 0);
        auto z = fixtures::complete_words(t, {{1, 1}, {2, 2}});
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(membership(ctx, z, fixtures::based_word({1, 1, 2, 2})));
        CHECK(membership(ctx, z, fixtures::based_word({2, 1, 1, 2})));
        CHECK(membership(ctx, z, fixtures::based_word({1, 1, 1, 1})));
        CHECK(!membership(ctx, z, fixtures::based_word({1, 2})));
        CHECK(!membership(ctx, z, fixtures::based_word({1})));
    }
}

TEST_CASE("least powers land in the subgroup") {
    SUBCASE("free cube") {
        auto r = fixtures::rose(2);
        GroupContext ctx(r, 0);
        auto z = fixtures::complete_words(r, {{1, 1, 1}});
        REQUIRE(z.status == CompletionStatus::Finished);
        auto k = power_membership(ctx, z, fixtures::based_word({1}));
        REQUIRE(k.has_value());
        CHECK(*k == 3);
    }
    SUBCASE("mixed torus moduli") {
        auto t = fixtures::torus();
        GroupContext ctx(t, 0);
        auto z = fixtures::complete_words(t, {{1, 1}, {2, 2, 2}});
        REQUIRE(z.status == CompletionStatus::Finished);
        auto k = power_membership(ctx, z, fixtures::based_word({1, 2}));
        REQUIRE(k.has_value());
        CHECK(*k == 6);
    }
    SUBCASE("orbit that escapes returns nothing") {
        auto r = fixtures::rose(2);
        GroupContext ctx(r, 0);
        auto z = fixtures::complete_words(r, {{1, 2}});
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(!power_membership(ctx, z, fixtures::based_word({1})).has_value());
    }
}

TEST_CASE("core graphs cover the traversed cells") {
    auto r = fixtures::rose(2);
    GroupContext ctx(r, 0);
    auto z = fixtures::complete_words(r, {{1, 2}});
    REQUIRE(z.status == CompletionStatus::Finished);
    auto core = core_graph(ctx, z, as_words({{1, 2}}));
    CHECK(core.vertices.size() == z.map.domain().num_vertices());
    CHECK(core.edges.size() == z.map.domain().num_edges());
}

TEST_CASE("normality decisions") {
    auto r = fixtures::rose(2);
    GroupContext ctx(r, 0);

    SUBCASE("the whole group is normal") {
        auto z = fixtures::complete_words(r, {{1}, {2}});
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(is_normal(ctx, z, as_words({{1}, {2}})) == Decision::Yes);
    }
    SUBCASE("a single free factor is not") {
        auto z = fixtures::complete_words(r, {{1}});
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(is_normal(ctx, z, as_words({{1}})) == Decision::No);
    }
    SUBCASE("the even subgroup is normal of index two") {
        std::vector<std::vector<int>> gens{{1, 1}, {1, 2}, {1, -2}};
        auto z = fixtures::complete_words(r, gens);
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(is_normal(ctx, z, as_words(gens)) == Decision::Yes);
    }
    SUBCASE("abelian subgroups are always normal") {
        auto t = fixtures::torus();
        GroupContext tc(t, 0);
        auto z = fixtures::complete_words(t, {{1, 1}, {2}});
        REQUIRE(z.status == CompletionStatus::Finished);
        CHECK(is_normal(tc, z, as_words({{1, 1}, {2}})) == Decision::Yes);
    }
}

TEST_CASE("index by covering fiber and by coset enumeration") {
    auto r = fixtures::rose(2);
    GroupContext ctx(r, 0);

    SUBCASE("whole group") {
        auto z = fixtures::complete_words(r, {{1}, {2}});
        auto n = finite_index(ctx, z, 8);
        REQUIRE(n.has_value());
        CHECK(*n == 1);
    }
    SUBCASE("even subgroup, both paths") {
        auto z = fixtures::complete_words(r, {{1, 1}, {1, 2}, {1, -2}});
        auto by_cover = finite_index(ctx, z, 8);
        auto by_cosets = finite_index(ctx, z, 8, false);
        REQUIRE(by_cover.has_value());
        REQUIRE(by_cosets.has_value());
        CHECK(*by_cover == 2);
        CHECK(*by_cosets == 2);
    }
    SUBCASE("infinite index runs out of cosets") {
        auto z = fixtures::complete_words(r, {{1}});
        CHECK(!finite_index(ctx, z, 8).has_value());
    }
    SUBCASE("torus sublattice") {
        auto t = fixtures::torus();
        GroupContext tc(t, 0);
        auto z = fixtures::complete_words(t, {{1, 1}, {2, 2, 2}});
        auto by_cover = finite_index(tc, z, 12);
        auto by_cosets = finite_index(tc, z, 12, false);
        REQUIRE(by_cover.has_value());
        CHECK(*by_cover == 6);
        CHECK(by_cosets == by_cover);
    }
}
