#include "cubical/group_algorithms.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace cubical {
namespace {

std::vector<std::uint64_t> letter_keys(const std::vector<DirectedEdge>& letters) {
    std::vector<std::uint64_t> keys;
    keys.reserve(letters.size());
    for (const auto& l : letters) keys.push_back(l.key());
    return keys;
}

void append_letters(std::vector<DirectedEdge>& to, const std::vector<DirectedEdge>& tail) {
    to.insert(to.end(), tail.begin(), tail.end());
}

// Walk a letter sequence upstairs through an immersion: each letter has at
// most one germ over it at the current vertex.  Returns the final vertex,
// or nothing when some letter has no lift; optionally records the germs.
std::optional<VertexId> lift_letters(const CubicalMap& f, VertexId from,
                                     const std::vector<DirectedEdge>& letters,
                                     std::vector<DirectedEdge>* germs = nullptr) {
    VertexId cur = from;
    for (const auto& l : letters) {
        bool stepped = false;
        for (const auto& g : f.domain().germs(cur)) {
            if (f.image(g).key() != l.key()) continue;
            if (germs) germs->push_back(g);
            cur = f.domain().target(g);
            stepped = true;
            break;
        }
        if (!stepped) return std::nullopt;
    }
    return cur;
}

// Tree geodesic between two vertices: climb both toward the root and cut
// the common tail above the meeting point.
std::vector<DirectedEdge> tree_path(const CubeComplex& x, const SpanningTree& t, VertexId u,
                                    VertexId v) {
    auto climb = [&](VertexId a, std::vector<DirectedEdge>& germs, std::vector<VertexId>& at) {
        at.push_back(a);
        while (t.to_parent[a]) {
            germs.push_back(*t.to_parent[a]);
            a = x.target(germs.back());
            at.push_back(a);
        }
    };
    std::vector<DirectedEdge> cu, cv;
    std::vector<VertexId> vu, vv;
    climb(u, cu, vu);
    climb(v, cv, vv);
    std::size_t i = cu.size(), j = cv.size();
    while (i > 0 && j > 0 && vu[i - 1] == vv[j - 1]) --i, --j;
    std::vector<DirectedEdge> path(cu.begin(), cu.begin() + i);
    for (std::size_t k = j; k > 0; --k) path.push_back(cv[k - 1].reversed());
    return path;
}

void require_finished(const CompletionResult& z, const char* who) {
    if (z.status != CompletionStatus::Finished)
        throw std::invalid_argument(std::string(who) + ": completion did not finish");
}

// The subgroup word g must be a loop at the image of z's basepoint.
VertexId require_based_loop(GroupContext& ctx, const CompletionResult& z, const CubicalWord& g,
                            const char* who) {
    if (z.map.codomain_ptr().get() != ctx.base_ptr().get())
        throw std::invalid_argument(std::string(who) + ": completion is over a different base complex");
    if (word_endpoint(ctx.base(), g) != g.base)
        throw std::invalid_argument(std::string(who) + ": word is not closed");
    auto zb = z.map.domain().basepoint();
    if (!zb || z.map.vertex_image(*zb) != g.base)
        throw std::invalid_argument(std::string(who) +
                                    ": word is not based at the completion's basepoint image");
    return *zb;
}

}  // namespace

// ---------------------------------------------------------------- words

VertexId word_endpoint(const CubeComplex& x, const CubicalWord& w) {
    if (w.base >= x.num_vertices())
        throw std::invalid_argument("word_endpoint: base vertex out of range");
    VertexId cur = w.base;
    for (const auto& l : w.letters) {
        if (l.edge >= x.num_edges())
            throw std::invalid_argument("word_endpoint: letter out of range");
        if (x.source(l) != cur)
            throw std::invalid_argument("word_endpoint: letters do not chain");
        cur = x.target(l);
    }
    return cur;
}

CubicalWord inverse_word(const CubeComplex& x, const CubicalWord& w) {
    CubicalWord r{word_endpoint(x, w), {}};
    r.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        r.letters.push_back(it->reversed());
    return r;
}

// ----------------------------------------------------------------- trees

SpanningTree spanning_tree(const CubeComplex& x, VertexId root) {
    if (root >= x.num_vertices())
        throw std::invalid_argument("spanning_tree: root out of range");
    SpanningTree t;
    t.root = root;
    t.to_parent.assign(x.num_vertices(), std::nullopt);
    std::vector<char> seen(x.num_vertices(), 0);
    seen[root] = 1;
    std::deque<VertexId> queue{root};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (const auto& g : x.germs(v)) {
            VertexId w = x.target(g);
            if (seen[w]) continue;
            seen[w] = 1;
            t.edges.push_back(g.edge);
            t.to_parent[w] = g.reversed();
            queue.push_back(w);
        }
    }
    for (char s : seen)
        if (!s) throw std::invalid_argument("spanning_tree: complex is not connected");
    std::sort(t.edges.begin(), t.edges.end());
    return t;
}

SpanningTree spanning_tree(const CubeComplex& x) {
    if (!x.basepoint()) throw std::invalid_argument("spanning_tree: complex has no basepoint");
    return spanning_tree(x, *x.basepoint());
}

CubicalPresentation cubical_presentation(const CubeComplex& x, const SpanningTree& tree) {
    if (tree.to_parent.size() != x.num_vertices())
        throw std::invalid_argument("cubical_presentation: tree does not fit the complex");
    CubicalPresentation p{tree, {}, {}};
    for (EdgeId e = 0; e < x.num_edges(); ++e) p.generators.push_back(e);
    for (EdgeId e : tree.edges)
        p.relators.push_back({x.edge(e).src, {DirectedEdge{e, true}}});
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        const Cube& s = x.cube(c);
        if (s.dim != 2) continue;
        // boundary loop at corner 0: across, up, back across, back down
        p.relators.push_back({s.corners[0],
                              {s.edges[Cube::edge_index(2, 0, 0)],
                               s.edges[Cube::edge_index(2, 1, 1)],
                               s.edges[Cube::edge_index(2, 0, 2)].reversed(),
                               s.edges[Cube::edge_index(2, 1, 0)].reversed()}});
    }
    return p;
}

CubicalWord word_to_cubical(const CubeComplex& x, const SpanningTree& tree,
                            const std::vector<DirectedEdge>& letters) {
    if (tree.to_parent.size() != x.num_vertices())
        throw std::invalid_argument("word_to_cubical: tree does not fit the complex");
    CubicalWord w{tree.root, {}};
    VertexId cur = tree.root;
    for (const auto& l : letters) {
        if (l.edge >= x.num_edges())
            throw std::invalid_argument("word_to_cubical: letter out of range");
        append_letters(w.letters, tree_path(x, tree, cur, x.source(l)));
        w.letters.push_back(l);
        cur = x.target(l);
    }
    append_letters(w.letters, tree_path(x, tree, cur, tree.root));
    return w;
}

// ---------------------------------------------------------------- context

GroupContext::GroupContext(ComplexPtr base, VertexId q) : base_(std::move(base)), q_(q) {
    if (!base_) throw std::invalid_argument("GroupContext: null base complex");
    if (q_ >= base_->num_vertices())
        throw std::invalid_argument("GroupContext: basepoint out of range");
}

const CoverBall& GroupContext::ball(VertexId center, unsigned radius) {
    auto key = std::make_pair(center, radius);
    auto it = balls_.find(key);
    if (it == balls_.end())
        it = balls_.emplace(key, universal_cover_ball(base_, center, radius, ball_cell_budget))
                 .first;
    return it->second;
}

// ----------------------------------------------------------- reduced forms

std::vector<CubicalWord> reduced_forms(GroupContext& ctx, const CubicalWord& w) {
    word_endpoint(ctx.base(), w);
    unsigned radius = unsigned(w.letters.size()) + 1;
    const CoverBall& b = ctx.ball(w.base, radius);
    auto end = lift_letters(b.projection, b.center, w.letters);
    if (!end) throw std::logic_error("reduced_forms: word does not lift into its own ball");
    std::vector<CubicalWord> out;
    for (const auto& geo : combinatorial_geodesics(b, b.center, *end)) {
        CubicalWord form{w.base, {}};
        form.letters.reserve(geo.size());
        for (const auto& g : geo) form.letters.push_back(b.projection.image(g));
        out.push_back(std::move(form));
    }
    std::sort(out.begin(), out.end(), [](const CubicalWord& a, const CubicalWord& c) {
        return letter_keys(a.letters) < letter_keys(c.letters);
    });
    return out;
}

bool words_equal(GroupContext& ctx, const CubicalWord& w1, const CubicalWord& w2) {
    word_endpoint(ctx.base(), w1);
    word_endpoint(ctx.base(), w2);
    if (w1.base != w2.base)
        throw std::invalid_argument("words_equal: words start at different vertices");
    unsigned radius = unsigned(std::max(w1.letters.size(), w2.letters.size())) + 1;
    const CoverBall& b = ctx.ball(w1.base, radius);
    auto e1 = lift_letters(b.projection, b.center, w1.letters);
    auto e2 = lift_letters(b.projection, b.center, w2.letters);
    if (!e1 || !e2) throw std::logic_error("words_equal: word does not lift into its own ball");
    return *e1 == *e2;
}

// ------------------------------------------------------------- membership

bool membership(GroupContext& ctx, const CompletionResult& z, const CubicalWord& g) {
    require_finished(z, "membership");
    VertexId zb = require_based_loop(ctx, z, g, "membership");
    const auto representative = reduced_forms(ctx, g).front();
    auto end = lift_letters(z.map, zb, representative.letters);
    return end && *end == zb;
}

std::optional<std::uint32_t> power_membership(GroupContext& ctx, const CompletionResult& z,
                                              const CubicalWord& g) {
    require_finished(z, "power_membership");
    VertexId zb = require_based_loop(ctx, z, g, "power_membership");
    if (g.letters.empty()) return 1;

    std::uint32_t limit = z.map.domain().num_vertices();
    unsigned len = unsigned(g.letters.size());
    VertexId orbit = zb;
    for (std::uint32_t k = 1; k <= limit; ++k) {
        // positions of the (k-1)-th and k-th powers in the cover
        const CoverBall& b = ctx.ball(g.base, k * len + 1);
        VertexId before = b.center, after = b.center;
        for (std::uint32_t i = 0; i < k; ++i) {
            before = after;
            auto step = lift_letters(b.projection, after, g.letters);
            if (!step) throw std::logic_error("power_membership: power does not lift into its ball");
            after = *step;
        }
        // the least geodesic segment joining them, downstairs
        std::vector<std::vector<DirectedEdge>> segments;
        for (const auto& geo : combinatorial_geodesics(b, before, after)) {
            std::vector<DirectedEdge> seg;
            seg.reserve(geo.size());
            for (const auto& e : geo) seg.push_back(b.projection.image(e));
            segments.push_back(std::move(seg));
        }
        std::sort(segments.begin(), segments.end(),
                  [](const auto& a, const auto& c) { return letter_keys(a) < letter_keys(c); });
        // walk it in z; leaving z's image means no power ever returns
        auto next = lift_letters(z.map, orbit, segments.front());
        if (!next) return std::nullopt;
        orbit = *next;
        if (orbit == zb) return k;
    }
    return std::nullopt;
}

// -------------------------------------------------------------- core graph

CoreGraph core_graph(GroupContext& ctx, const CompletionResult& z,
                     const std::vector<CubicalWord>& generators) {
    require_finished(z, "core_graph");
    std::set<VertexId> vs;
    std::set<EdgeId> es;
    VertexId zb = 0;
    if (generators.empty()) {
        auto base = z.map.domain().basepoint();
        if (!base) throw std::invalid_argument("core_graph: completion has no basepoint");
        zb = *base;
    }
    for (const auto& s : generators) {
        zb = require_based_loop(ctx, z, s, "core_graph");
        for (const auto& form : reduced_forms(ctx, s)) {
            std::vector<DirectedEdge> germs;
            auto end = lift_letters(z.map, zb, form.letters, &germs);
            if (!end || *end != zb)
                throw std::invalid_argument("core_graph: generator is not in the completed subgroup");
            VertexId cur = zb;
            for (const auto& g : germs) {
                es.insert(g.edge);
                cur = z.map.domain().target(g);
                vs.insert(cur);
            }
        }
    }
    vs.insert(zb);
    return {std::vector<VertexId>(vs.begin(), vs.end()), std::vector<EdgeId>(es.begin(), es.end())};
}

// --------------------------------------------------------------- normality

Decision normalized_by(GroupContext& ctx, const CompletionResult& z,
                       const std::vector<CubicalWord>& generators, const CubicalWord& g,
                       const CompletionOptions& options) {
    require_finished(z, "normalized_by");
    require_based_loop(ctx, z, g, "normalized_by");
    CubicalWord ginv = inverse_word(ctx.base(), g);

    // Geodesic representatives on both sides.  A bouquet of non-geodesic
    // words completes to a strictly larger complex (its universal cover is
    // the hull of the orbit of the word paths, not just of the basepoint
    // orbit), so the raw conjugates would drag the conjugator's hull along
    // and ruin the comparison even when the subgroups are equal.
    std::vector<std::vector<DirectedEdge>> original, conjugated;
    original.reserve(generators.size());
    conjugated.reserve(generators.size());
    for (const auto& s : generators) {
        if (s.base != g.base || word_endpoint(ctx.base(), s) != s.base)
            throw std::invalid_argument("normalized_by: generators must be loops at g's base");
        original.push_back(reduced_forms(ctx, s).front().letters);
        CubicalWord conj{g.base, ginv.letters};
        append_letters(conj.letters, s.letters);
        append_letters(conj.letters, g.letters);
        conjugated.push_back(reduced_forms(ctx, conj).front().letters);
    }

    auto zh = complete(bouquet_from_words(ctx.base_ptr(), g.base, original), options);
    auto zprime = complete(bouquet_from_words(ctx.base_ptr(), g.base, conjugated), options);
    if (zh.status != CompletionStatus::Finished || zprime.status != CompletionStatus::Finished)
        return Decision::Undecided;
    bool same_completion =
        canonical_signature(canonicalize(zprime.map)) == canonical_signature(canonicalize(zh.map));

    // the direct criterion: both conjugates of every generator are members
    bool conjugates_inside = true;
    for (const auto& s : generators) {
        CubicalWord left{g.base, ginv.letters};
        append_letters(left.letters, s.letters);
        append_letters(left.letters, g.letters);
        CubicalWord right{g.base, g.letters};
        append_letters(right.letters, s.letters);
        append_letters(right.letters, ginv.letters);
        if (!membership(ctx, z, left) || !membership(ctx, z, right)) {
            conjugates_inside = false;
            break;
        }
    }
    if (same_completion != conjugates_inside)
        throw std::logic_error("normalized_by: completion and membership criteria disagree");
    return same_completion ? Decision::Yes : Decision::No;
}

Decision is_normal(GroupContext& ctx, const CompletionResult& z,
                   const std::vector<CubicalWord>& generators, const CompletionOptions& options) {
    require_finished(z, "is_normal");
    auto tree = spanning_tree(ctx.base(), ctx.basepoint());
    std::set<EdgeId> in_tree(tree.edges.begin(), tree.edges.end());
    bool undecided = false;
    for (EdgeId e = 0; e < ctx.base().num_edges(); ++e) {
        if (in_tree.count(e)) continue;
        for (bool forward : {true, false}) {
            auto loop = word_to_cubical(ctx.base(), tree, {DirectedEdge{e, forward}});
            switch (normalized_by(ctx, z, generators, loop, options)) {
                case Decision::No:
                    return Decision::No;
                case Decision::Undecided:
                    undecided = true;
                    break;
                case Decision::Yes:
                    break;
            }
        }
    }
    return undecided ? Decision::Undecided : Decision::Yes;
}

// ------------------------------------------------------------ finite index

std::optional<std::uint64_t> finite_index(GroupContext& ctx, const CompletionResult& z,
                                          std::size_t coset_budget, bool covering_shortcut) {
    require_finished(z, "finite_index");
    if (z.map.codomain_ptr().get() != ctx.base_ptr().get())
        throw std::invalid_argument("finite_index: completion is over a different base complex");
    if (!ctx.base().basepoint())
        throw std::invalid_argument("finite_index: base complex has no basepoint");

    if (covering_shortcut) {
        auto cov = is_covering(z.map);
        if (cov.covering) return cov.fiber;
    }

    // budgeted coset enumeration over the non-tree generators
    auto tree = spanning_tree(ctx.base(), ctx.basepoint());
    std::set<EdgeId> in_tree(tree.edges.begin(), tree.edges.end());
    std::vector<CubicalWord> gens;
    for (EdgeId e = 0; e < ctx.base().num_edges(); ++e) {
        if (in_tree.count(e)) continue;
        for (bool forward : {true, false})
            gens.push_back(word_to_cubical(ctx.base(), tree, {DirectedEdge{e, forward}}));
    }

    std::vector<CubicalWord> reps{CubicalWord{ctx.basepoint(), {}}};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (const auto& s : gens) {
            CubicalWord candidate{ctx.basepoint(), reps[i].letters};
            append_letters(candidate.letters, s.letters);
            candidate = reduced_forms(ctx, candidate).front();
            bool known = false;
            for (const auto& r : reps) {
                CubicalWord difference{ctx.basepoint(), candidate.letters};
                append_letters(difference.letters, inverse_word(ctx.base(), r).letters);
                if (membership(ctx, z, difference)) {
                    known = true;
                    break;
                }
            }
            if (known) continue;
            if (reps.size() >= coset_budget) return std::nullopt;
            queue.push_back(reps.size());
            reps.push_back(std::move(candidate));
        }
    }
    return reps.size();
}

}  // namespace cubical
