// Acceptance gate: one pass/fail line per promised property, exit status 0
// only when every line passes.  Checks run against independent oracles and
// frozen counts; the two timing limits are pinned here in seconds.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cubical/completion.hpp"
#include "cubical/cube_complex.hpp"
#include "cubical/cubical_map.hpp"
#include "cubical/geometry.hpp"
#include "cubical/group_algorithms.hpp"
#include "cubical/oracles.hpp"
#include "fixtures.hpp"

namespace {

using namespace cubical;
using Clock = std::chrono::steady_clock;

constexpr double kFreeGroupSeconds = 10.0;
constexpr double kMembershipSeconds = 30.0;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

double elapsed(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string with_time(const std::string& detail, Clock::time_point start) {
    std::ostringstream out;
    out << detail << ", " << std::fixed;
    out.precision(2);
    out << elapsed(start) << "s";
    return out.str();
}

// ---- criterion 1: completions over roses match classical folding ---------

using Arc = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

std::vector<Arc> completion_arcs(const CubicalMap& canon) {
    std::vector<Arc> arcs;
    const CubeComplex& x = canon.domain();
    for (EdgeId e = 0; e < x.num_edges(); ++e) {
        auto im = canon.edge_image(e);
        auto ends = x.edge(e);
        if (im.forward)
            arcs.emplace_back(ends.src, ends.dst, im.edge);
        else
            arcs.emplace_back(ends.dst, ends.src, im.edge);
    }
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

std::vector<Arc> oracle_arcs(const oracles::StallingsGraph& g) {
    std::vector<Arc> arcs;
    for (const auto& a : g.arcs) arcs.emplace_back(a.tail, a.head, a.letter);
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

std::string free_group_equivalence() {
    auto start = Clock::now();
    std::mt19937_64 rng(101);
    int cases = 0;
    for (int rank : {2, 3}) {
        auto y = fixtures::rose(rank);
        for (int i = 0; i < 100; ++i) {
            auto words = fixtures::random_words(rng, rank, 4, 8);
            auto z = fixtures::complete_words(y, words);
            require(z.status == CompletionStatus::Finished, "free completion hit its budget");
            auto ours = completion_arcs(canonicalize(z.map));
            auto folded = oracles::canonical_form(oracles::classic_fold(rank, words));
            require(z.map.domain().num_vertices() == folded.num_vertices,
                    "vertex counts differ from the folding oracle");
            require(ours == oracle_arcs(folded), "arc lists differ from the folding oracle");
            ++cases;
        }
    }
    require(elapsed(start) < kFreeGroupSeconds, "free-group comparison exceeded its time limit");
    return with_time(std::to_string(cases) + " subgroups", start);
}

// ---- criterion 2: cover balls of completions realize the hull ------------

/// Vertices of the ambient ball lying on loops of the generators lifted from
/// every reachable lift of the basepoint.
std::vector<VertexId> lifted_generator_vertices(const CoverBall& by,
                                                const std::vector<std::vector<int>>& words) {
    std::vector<std::vector<DirectedEdge>> moves;
    for (const auto& w : words) {
        moves.push_back(fixtures::to_letters(w));
        moves.push_back(fixtures::to_letters(fixtures::inverse(w)));
    }
    std::set<VertexId> orbit{by.center}, seeds{by.center};
    std::queue<VertexId> frontier;
    frontier.push(by.center);
    while (!frontier.empty()) {
        VertexId o = frontier.front();
        frontier.pop();
        for (const auto& letters : moves) {
            if (by.depth[o] + letters.size() > by.radius) continue;
            VertexId at = o;
            bool ok = true;
            std::vector<VertexId> trail;
            for (const auto& l : letters) {
                bool stepped = false;
                for (const auto& g : by.complex().germs(at)) {
                    if (by.projection.image(g) == l) {
                        at = by.complex().target(g);
                        stepped = true;
                        break;
                    }
                }
                if (!stepped) {
                    ok = false;
                    break;
                }
                trail.push_back(at);
            }
            if (!ok) continue;
            seeds.insert(trail.begin(), trail.end());
            if (orbit.insert(at).second) frontier.push(at);
        }
    }
    return {seeds.begin(), seeds.end()};
}

enum class HullOutcome { Pass, Skip };

HullOutcome hull_case(GroupContext& ctx, ComplexPtr y, const std::vector<std::vector<int>>& words,
                      unsigned ambient_radius) {
    auto z = fixtures::complete_words(y, words, CompletionOptions{1500, std::nullopt});
    if (z.status != CompletionStatus::Finished) return HullOutcome::Skip;

    auto bz = universal_cover_ball(z.map.domain_ptr(), *z.map.domain().basepoint(), 3);
    const CoverBall& by = ctx.ball(ctx.basepoint(), ambient_radius);
    auto pi = compose(z.map, bz.projection);

    // lift the completion ball into the ambient ball germ by germ
    const CubeComplex& bzc = bz.complex();
    std::vector<VertexId> image(bzc.num_vertices(), kNoVertex);
    image[bz.center] = by.center;
    std::queue<VertexId> queue;
    queue.push(bz.center);
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop();
        for (const auto& g : bzc.germs(v)) {
            DirectedEdge base_letter = pi.image(g);
            VertexId w = bzc.target(g);
            VertexId mapped = kNoVertex;
            for (const auto& h : by.complex().germs(image[v])) {
                if (by.projection.image(h) == base_letter) {
                    mapped = by.complex().target(h);
                    break;
                }
            }
            require(mapped != kNoVertex, "completion ball fell off the ambient ball");
            if (image[w] == kNoVertex) {
                image[w] = mapped;
                queue.push(w);
            } else {
                require(image[w] == mapped, "ball lift is inconsistent");
            }
        }
    }
    std::vector<VertexId> image_sorted;
    for (VertexId v = 0; v < bzc.num_vertices(); ++v) {
        require(image[v] != kNoVertex, "completion ball is not connected");
        image_sorted.push_back(image[v]);
    }
    std::sort(image_sorted.begin(), image_sorted.end());
    require(std::adjacent_find(image_sorted.begin(), image_sorted.end()) == image_sorted.end(),
            "ball lift is not injective");

    auto seeds = lifted_generator_vertices(by, words);
    auto hull = convex_hull(by.complex(), seeds);
    std::vector<VertexId> clamped;
    for (VertexId v : hull.vertices)
        if (by.depth[v] <= 3) clamped.push_back(v);
    auto expected = full_subcomplex(by.complex(), clamped);

    require(image_sorted == expected.vertices, "hull vertices differ from the cover ball");
    require(bzc.num_edges() == expected.edges.size(), "hull edge count differs");
    require(bzc.num_cubes() == expected.cubes.size(), "hull cube count differs");
    return HullOutcome::Pass;
}

std::string hull_theorem() {
    auto start = Clock::now();
    struct BaseCase {
        ComplexPtr y;
        int rank;
        int max_len;
        unsigned radius;
        int target;
    };
    std::vector<BaseCase> bases{
        {fixtures::torus(), 2, 3, 10, 12},
        {fixtures::torus3(), 3, 2, 8, 8},
        {fixtures::salvetti(3, {{0, 1}}), 3, 2, 5, 6},
        {fixtures::salvetti(3, {{0, 1}, {1, 2}}), 3, 2, 5, 6},
    };
    std::mt19937_64 rng(202);
    int cases = 0;
    for (auto& base : bases) {
        GroupContext ctx(base.y, 0);
        int done = 0;
        for (int attempt = 0; attempt < 250 && done < base.target; ++attempt) {
            auto words = fixtures::random_words(rng, base.rank, 3, base.max_len);
            if (hull_case(ctx, base.y, words, base.radius) == HullOutcome::Pass) {
                ++done;
                ++cases;
            }
        }
        require(done == base.target, "not enough finished completions for one base");
    }
    require(cases >= 30, "fewer than 30 hull cases");
    return with_time(std::to_string(cases) + " cases", start);
}

// ---- criterion 3: schedule independence ----------------------------------

std::string schedule_uniqueness() {
    auto start = Clock::now();
    std::mt19937_64 rng(303);
    int cases = 0;
    auto rose = fixtures::rose(2);
    auto torus = fixtures::torus();
    while (cases < 50) {
        bool free_case = cases % 5 != 0;
        auto y = free_case ? rose : torus;
        auto words = fixtures::random_words(rng, 2, 3, free_case ? 6 : 3);
        auto reference = fixtures::complete_words(y, words, CompletionOptions{1500, std::nullopt});
        if (reference.status != CompletionStatus::Finished) continue;
        auto signature = canonical_signature(canonicalize(reference.map));
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            CompletionOptions opt{1500, seed};
            auto shuffled = fixtures::complete_words(y, words, opt);
            require(shuffled.status == CompletionStatus::Finished,
                    "shuffled schedule hit the budget where the canonical one finished");
            require(canonical_signature(canonicalize(shuffled.map)) == signature,
                    "shuffled schedule reached a different completion");
        }
        ++cases;
    }
    return with_time("50 subgroups x 5 schedules", start);
}

// ---- criterion 4: duality against the hull -------------------------------

std::string sageev_duality() {
    auto start = Clock::now();
    auto x = fixtures::grid(6, 6, 3);
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> pick(0, int(x->num_vertices()) - 1);
    std::uniform_int_distribution<int> count(2, 5);
    for (int trial = 0; trial < 50; ++trial) {
        std::set<VertexId> seed_set;
        int want = count(rng);
        while (int(seed_set.size()) < want) seed_set.insert(VertexId(pick(rng)));
        std::vector<VertexId> seeds(seed_set.begin(), seed_set.end());

        auto hull = convex_hull(*x, seeds);
        auto poset = halfspaces_meeting(*x, seeds);
        auto dual = sageev_dual(poset);

        require(dual.complex.num_vertices() == hull.vertices.size(),
                "dual vertex count differs from the hull");
        require(dual.complex.num_edges() == hull.edges.size(),
                "dual edge count differs from the hull");
        require(dual.complex.num_cubes() == hull.cubes.size(),
                "dual cube count differs from the hull");

        std::vector<VertexId> recovered;
        for (const auto& orientation : dual.orientations)
            recovered.push_back(dual_to_ambient(*x, poset, orientation, seeds.front()));
        std::sort(recovered.begin(), recovered.end());
        require(recovered == hull.vertices, "dual vertices land outside the hull");
    }
    return with_time("50 vertex sets", start);
}

// ---- criterion 5: membership against both oracles ------------------------

std::string membership_oracles() {
    auto start = Clock::now();
    std::mt19937_64 rng(505);
    int queries = 0;

    auto torus = fixtures::torus();
    GroupContext torus_ctx(torus, 0);
    int torus_subgroups = 0;
    while (torus_subgroups < 30) {
        auto words = fixtures::random_words(rng, 2, 3, 6);
        auto z = fixtures::complete_words(torus, words, CompletionOptions{1200, std::nullopt});
        if (z.status != CompletionStatus::Finished) continue;
        ++torus_subgroups;
        auto lattice = oracles::lattice_oracle(2, words);
        for (int q = 0; q < 10; ++q) {
            auto g = fixtures::random_word(rng, 2, 1, 6);
            bool ours = membership(torus_ctx, z, fixtures::based_word(g));
            require(ours == oracles::member(lattice, g), "membership disagrees with the lattice");
            ++queries;
        }
    }

    auto rose = fixtures::rose(2);
    GroupContext rose_ctx(rose, 0);
    for (int s = 0; s < 30; ++s) {
        auto words = fixtures::random_words(rng, 2, 3, 6);
        auto z = fixtures::complete_words(rose, words);
        require(z.status == CompletionStatus::Finished, "free completion hit its budget");
        auto folded = oracles::classic_fold(2, words);
        for (int q = 0; q < 10; ++q) {
            auto g = fixtures::random_word(rng, 2, 1, 6);
            bool ours = membership(rose_ctx, z, fixtures::based_word(g));
            require(ours == oracles::member(folded, g), "membership disagrees with folding");
            ++queries;
        }
    }
    require(elapsed(start) < kMembershipSeconds, "membership queries exceeded their time limit");
    return with_time(std::to_string(queries) + " queries", start);
}

// ---- criterion 6: least powers are bounded and minimal --------------------

std::string power_bounds() {
    auto start = Clock::now();
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<int> modulus(1, 3);
    int cases = 0;

    auto torus = fixtures::torus();
    GroupContext torus_ctx(torus, 0);
    while (cases < 60) {
        int m = modulus(rng), n = modulus(rng);
        auto words = std::vector<std::vector<int>>{fixtures::repeat({1}, m), fixtures::repeat({2}, n)};
        auto z = fixtures::complete_words(torus, words);
        require(z.status == CompletionStatus::Finished, "sublattice completion hit its budget");
        std::uint32_t limit = z.map.domain().num_vertices();
        auto g = fixtures::random_word(rng, 2, 1, 2);
        auto expected = oracles::power(oracles::lattice_oracle(2, words), g, limit);
        if (!expected) continue;
        auto k = power_membership(torus_ctx, z, fixtures::based_word(g));
        require(k.has_value(), "power exists but was not found");
        require(*k == *expected, "power disagrees with the lattice");
        require(*k <= limit, "power exceeds the vertex bound");
        require(membership(torus_ctx, z, fixtures::based_word(fixtures::repeat(g, int(*k)))),
                "claimed power is not a member");
        for (std::uint32_t j = 1; j < *k; ++j)
            require(!membership(torus_ctx, z, fixtures::based_word(fixtures::repeat(g, int(j)))),
                    "a smaller power is already a member");
        ++cases;
    }

    auto rose = fixtures::rose(2);
    GroupContext rose_ctx(rose, 0);
    while (cases < 100) {
        int m = modulus(rng);
        auto w = fixtures::random_word(rng, 2, 1, 2);
        auto words = std::vector<std::vector<int>>{fixtures::repeat(w, m)};
        auto z = fixtures::complete_words(rose, words);
        require(z.status == CompletionStatus::Finished, "free completion hit its budget");
        std::uint32_t limit = z.map.domain().num_vertices();
        auto expected = oracles::power(oracles::classic_fold(2, words), w, limit);
        if (!expected) continue;
        auto k = power_membership(rose_ctx, z, fixtures::based_word(w));
        require(k.has_value(), "power exists but was not found");
        require(*k == *expected, "power disagrees with folding");
        require(*k <= limit, "power exceeds the vertex bound");
        for (std::uint32_t j = 1; j < *k; ++j)
            require(!membership(rose_ctx, z, fixtures::based_word(fixtures::repeat(w, int(j)))),
                    "a smaller power is already a member");
        require(membership(rose_ctx, z, fixtures::based_word(fixtures::repeat(w, int(*k)))),
                "claimed power is not a member");
        ++cases;
    }
    return with_time(std::to_string(cases) + " cases", start);
}

// ---- criterion 7: index values -------------------------------------------

std::string index_values() {
    auto start = Clock::now();
    auto torus = fixtures::torus();
    GroupContext torus_ctx(torus, 0);
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            auto z = fixtures::complete_words(
                torus, {fixtures::repeat({1}, m), fixtures::repeat({2}, n)});
            require(z.status == CompletionStatus::Finished, "sublattice completion hit its budget");
            auto by_cover = finite_index(torus_ctx, z, 40);
            auto by_cosets = finite_index(torus_ctx, z, 40, false);
            require(by_cover.has_value() && *by_cover == std::uint64_t(m) * n,
                    "covering index is not m*n");
            require(by_cosets.has_value() && *by_cosets == std::uint64_t(m) * n,
                    "coset enumeration index is not m*n");
        }

    auto rose = fixtures::rose(2);
    GroupContext rose_ctx(rose, 0);
    auto z = fixtures::complete_words(rose, {{1}, {2, 2}, {2, 1, -2}});
    require(z.status == CompletionStatus::Finished, "free completion hit its budget");
    auto by_cover = finite_index(rose_ctx, z, 16);
    auto by_cosets = finite_index(rose_ctx, z, 16, false);
    require(by_cover.has_value() && *by_cover == 2, "free index-two subgroup not recognized");
    require(by_cosets == by_cover, "the two index paths disagree");
    return with_time("17 subgroups", start);
}

// ---- criterion 8: normality ----------------------------------------------

std::string normality_agreement() {
    auto start = Clock::now();
    std::mt19937_64 rng(808);
    int cases = 0;

    auto rose = fixtures::rose(2);
    GroupContext rose_ctx(rose, 0);
    auto check_rose = [&](const std::vector<std::vector<int>>& words) {
        auto z = fixtures::complete_words(rose, words);
        require(z.status == CompletionStatus::Finished, "free completion hit its budget");
        std::vector<CubicalWord> gens;
        for (const auto& w : words) gens.push_back(fixtures::based_word(w));
        auto d = is_normal(rose_ctx, z, gens);
        require(d != Decision::Undecided, "free normality came back undecided");
        bool expected = oracles::normal(oracles::classic_fold(2, words), 2, words);
        require((d == Decision::Yes) == expected, "normality disagrees with the folding oracle");
        ++cases;
    };
    check_rose({{1}, {2}});
    check_rose({{1}});
    check_rose({{1, 1}, {1, 2}, {1, -2}});
    for (int i = 0; i < 51; ++i) check_rose(fixtures::random_words(rng, 2, 3, 5));

    auto torus = fixtures::torus();
    GroupContext torus_ctx(torus, 0);
    int torus_cases = 0;
    while (torus_cases < 46) {
        auto words = fixtures::random_words(rng, 2, 3, 4);
        auto z = fixtures::complete_words(torus, words, CompletionOptions{1200, std::nullopt});
        if (z.status != CompletionStatus::Finished) continue;
        std::vector<CubicalWord> gens;
        for (const auto& w : words) gens.push_back(fixtures::based_word(w));
        require(is_normal(torus_ctx, z, gens) == Decision::Yes,
                "an abelian subgroup came back non-normal");
        ++torus_cases;
        ++cases;
    }
    require(cases >= 100, "fewer than 100 normality cases");
    return with_time(std::to_string(cases) + " cases", start);
}

// ---- criterion 9: curvature detection ------------------------------------

std::string npc_detection() {
    auto start = Clock::now();
    auto bad = fixtures::corner_squares();
    auto report = check_npc(*bad);
    require(!report.npc, "the three-square corner passed the link check");
    const auto& origin = report.vertices[0];
    require(origin.simplicial && !origin.flag, "wrong failure mode at the corner");
    require(origin.witness.size() == 3, "witness clique has the wrong size");
    for (EdgeId e = 0; e < 3; ++e)
        require(origin.witness[e] == DirectedEdge{e, true}, "witness clique names the wrong germs");

    std::vector<ComplexPtr> good{fixtures::rose(1), fixtures::rose(2), fixtures::rose(3),
                                 fixtures::rose(4), fixtures::torus(), fixtures::torus3(),
                                 fixtures::salvetti(3, {{0, 1}}),
                                 fixtures::salvetti(3, {{0, 1}, {1, 2}}),
                                 fixtures::salvetti(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})};
    for (const auto& y : good) require(check_npc(*y).npc, "a curved fixture failed the link check");
    return with_time("1 rejection, 9 passes", start);
}

// ---- criterion 10: budget honesty ----------------------------------------

std::string budget_honesty() {
    auto start = Clock::now();
    auto torus = fixtures::torus();
    std::size_t previous = 0;
    for (std::size_t budget : {std::size_t(50), std::size_t(100), std::size_t(200), std::size_t(400)}) {
        auto z = fixtures::complete_words(torus, {{1, 2}}, CompletionOptions{budget, std::nullopt});
        require(z.status == CompletionStatus::BudgetExceeded,
                "the diagonal subgroup finished unexpectedly");
        require(z.budget_used > budget, "reported cell count does not exceed the budget");
        require(z.budget_used > previous, "cell counts are not strictly increasing");
        previous = z.budget_used;
    }
    return with_time("budgets 50..400", start);
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<std::string()> body;
    };
    std::vector<Criterion> criteria{
        {"free-group equivalence", free_group_equivalence},
        {"hull realization", hull_theorem},
        {"schedule uniqueness", schedule_uniqueness},
        {"sageev duality", sageev_duality},
        {"membership oracles", membership_oracles},
        {"power bounds", power_bounds},
        {"index values", index_values},
        {"normality agreement", normality_agreement},
        {"npc detection", npc_detection},
        {"budget honesty", budget_honesty},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::cout << "criterion " << (i + 1) << " (" << criteria[i].name << "): " << std::flush;
        try {
            auto detail = criteria[i].body();
            std::cout << "PASS (" << detail << ")" << std::endl;
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "FAIL (" << e.what() << ")" << std::endl;
        }
    }
    if (failures) std::cout << failures << " criteria failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
