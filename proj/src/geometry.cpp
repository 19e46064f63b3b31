#include "cubical/geometry.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "cubical/completion.hpp"

namespace cubical {

// ------------------------------------------------------------ distances

std::vector<std::uint32_t> distances_from(const CubeComplex& x, VertexId u) {
    if (u >= x.num_vertices()) throw std::invalid_argument("distances_from: vertex out of range");
    std::vector<std::uint32_t> dist(x.num_vertices(), kUnreachable);
    dist[u] = 0;
    std::deque<VertexId> queue{u};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (const auto& g : x.germs(v)) {
            VertexId w = x.target(g);
            if (dist[w] != kUnreachable) continue;
            dist[w] = dist[v] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

// ------------------------------------------------------------ geodesics

std::vector<std::vector<DirectedEdge>> combinatorial_geodesics(const CubeComplex& x, VertexId u,
                                                               VertexId v) {
    if (u >= x.num_vertices() || v >= x.num_vertices())
        throw std::invalid_argument("combinatorial_geodesics: vertex out of range");
    auto dist = distances_from(x, v);
    if (dist[u] == kUnreachable)
        throw std::invalid_argument("combinatorial_geodesics: endpoints lie in different components");

    // Walk the distance gradient depth-first.  germs(w) is sorted by key, so
    // the paths come out ordered by their edge key sequences.
    std::vector<std::vector<DirectedEdge>> out;
    std::vector<DirectedEdge> path;
    auto walk = [&](auto&& self, VertexId w) -> void {
        if (w == v) {
            out.push_back(path);
            return;
        }
        for (const auto& g : x.germs(w)) {
            VertexId next = x.target(g);
            if (dist[next] == kUnreachable || dist[next] + 1 != dist[w]) continue;
            path.push_back(g);
            self(self, next);
            path.pop_back();
        }
    };
    walk(walk, u);
    return out;
}

std::vector<std::vector<DirectedEdge>> combinatorial_geodesics(const CoverBall& b, VertexId u,
                                                               VertexId v) {
    const CubeComplex& x = b.complex();
    if (u >= x.num_vertices() || v >= x.num_vertices())
        throw std::invalid_argument("combinatorial_geodesics: vertex out of range");
    auto dist = distances_from(x, u);
    std::uint32_t d = dist[v];
    // Any walk that left the ball through depth r and came back would be
    // longer than depth(u) + depth(v) >= d + 2 * slack, so under this margin
    // the ball distance is the cover distance and no cover geodesic between
    // u and v can leave the ball.
    if (d == kUnreachable || d + b.depth[u] + b.depth[v] > 2u * b.radius)
        throw IncompleteBallError("combinatorial_geodesics: ball of radius " +
                                  std::to_string(b.radius) +
                                  " cannot certify geodesics between these vertices");
    return combinatorial_geodesics(x, u, v);
}

// ------------------------------------------------------- full subcomplex

Subcomplex full_subcomplex(const CubeComplex& x, std::vector<VertexId> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    for (VertexId v : vertices)
        if (v >= x.num_vertices())
            throw std::invalid_argument("full_subcomplex: vertex out of range");

    std::vector<VertexId> vmap(x.num_vertices(), kNoVertex);
    for (std::size_t i = 0; i < vertices.size(); ++i) vmap[vertices[i]] = VertexId(i);

    Subcomplex sub;
    sub.vertices = std::move(vertices);
    ComplexData d;
    d.num_vertices = std::uint32_t(sub.vertices.size());

    std::vector<EdgeId> emap(x.num_edges(), kNoEdge);
    for (EdgeId e = 0; e < x.num_edges(); ++e) {
        const Edge& ed = x.edge(e);
        if (vmap[ed.src] == kNoVertex || vmap[ed.dst] == kNoVertex) continue;
        emap[e] = EdgeId(d.edges.size());
        sub.edges.push_back(e);
        d.edges.push_back({vmap[ed.src], vmap[ed.dst]});
    }
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        const Cube& cb = x.cube(c);
        bool inside = true;
        for (VertexId v : cb.corners)
            if (vmap[v] == kNoVertex) inside = false;
        if (!inside) continue;
        Cube nc;
        nc.dim = cb.dim;
        for (VertexId v : cb.corners) nc.corners.push_back(vmap[v]);
        for (const DirectedEdge& de : cb.edges) nc.edges.push_back({emap[de.edge], de.forward});
        sub.cubes.push_back(c);
        d.cubes.push_back(std::move(nc));
    }
    if (x.basepoint() && vmap[*x.basepoint()] != kNoVertex) d.basepoint = vmap[*x.basepoint()];
    sub.complex = CubeComplex::from_data(std::move(d));
    return sub;
}

// ------------------------------------------------------ hyperplane sides

std::pair<std::vector<VertexId>, std::vector<VertexId>> hyperplane_sides(const CubeComplex& x,
                                                                         const Hyperplane& h) {
    std::vector<char> dual(x.num_edges(), 0);
    for (EdgeId e : h.dual_edges) {
        if (e >= x.num_edges()) throw std::invalid_argument("hyperplane_sides: edge out of range");
        dual[e] = 1;
    }
    std::vector<int> comp(x.num_vertices(), -1);
    int parts = 0;
    for (VertexId s = 0; s < x.num_vertices(); ++s) {
        if (comp[s] != -1) continue;
        comp[s] = parts;
        std::deque<VertexId> queue{s};
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (const auto& g : x.germs(v)) {
                if (dual[g.edge]) continue;
                VertexId w = x.target(g);
                if (comp[w] != -1) continue;
                comp[w] = parts;
                queue.push_back(w);
            }
        }
        ++parts;
    }
    if (parts != 2)
        throw std::invalid_argument("hyperplane_sides: deleting the dual edges leaves " +
                                    std::to_string(parts) + " components, not two");
    // Vertex 0 is the smallest vertex overall, so its component goes first.
    std::pair<std::vector<VertexId>, std::vector<VertexId>> sides;
    for (VertexId v = 0; v < x.num_vertices(); ++v)
        (comp[v] == comp[0] ? sides.first : sides.second).push_back(v);
    return sides;
}

// ----------------------------------------------------------- convex hull

Subcomplex convex_hull(const CubeComplex& x, const std::vector<VertexId>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("convex_hull: no seed vertices");
    for (VertexId s : seeds)
        if (s >= x.num_vertices()) throw std::invalid_argument("convex_hull: vertex out of range");

    std::vector<char> keep(x.num_vertices(), 1);
    for (const Hyperplane& h : hyperplanes(x)) {
        auto sides = hyperplane_sides(x, h);
        std::vector<char> in_first(x.num_vertices(), 0);
        for (VertexId v : sides.first) in_first[v] = 1;
        bool all_first = true, all_second = true;
        for (VertexId s : seeds) (in_first[s] ? all_second : all_first) = false;
        if (all_first) {
            for (VertexId v = 0; v < x.num_vertices(); ++v)
                if (!in_first[v]) keep[v] = 0;
        } else if (all_second) {
            for (VertexId v : sides.first) keep[v] = 0;
        }
        // seeds on both sides: the hyperplane does not constrain the hull
    }
    std::vector<VertexId> kept;
    for (VertexId v = 0; v < x.num_vertices(); ++v)
        if (keep[v]) kept.push_back(v);
    return full_subcomplex(x, std::move(kept));
}

// ------------------------------------------------------- halfspace poset

HalfspacePoset halfspaces_meeting(const CubeComplex& x, const std::vector<VertexId>& s) {
    if (s.empty()) throw std::invalid_argument("halfspaces_meeting: empty vertex set");
    std::vector<char> in_s(x.num_vertices(), 0);
    for (VertexId v : s) {
        if (v >= x.num_vertices())
            throw std::invalid_argument("halfspaces_meeting: vertex out of range");
        in_s[v] = 1;
    }

    HalfspacePoset p;
    auto hps = hyperplanes(x);
    for (std::uint32_t hid = 0; hid < hps.size(); ++hid) {
        auto sides = hyperplane_sides(x, hps[hid]);
        bool meets_first = false, meets_second = false;
        for (VertexId v : sides.first) meets_first = meets_first || in_s[v];
        for (VertexId v : sides.second) meets_second = meets_second || in_s[v];
        if (!meets_first || !meets_second) continue;
        std::uint32_t pair = std::uint32_t(p.hyperplane_ids.size());
        p.hyperplane_ids.push_back(hid);
        p.halfspaces.push_back({pair, 0, std::move(sides.first)});
        p.halfspaces.push_back({pair, 1, std::move(sides.second)});
    }
    std::size_t n = p.halfspaces.size();
    p.leq.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p.leq[i][j] = std::includes(p.halfspaces[j].vertices.begin(),
                                        p.halfspaces[j].vertices.end(),
                                        p.halfspaces[i].vertices.begin(),
                                        p.halfspaces[i].vertices.end());
    return p;
}

// ------------------------------------------------------------- dual complex

SageevDual sageev_dual(const HalfspacePoset& p) {
    std::size_t n = p.halfspaces.size();
    if (n % 2 != 0)
        throw std::invalid_argument("sageev_dual: halfspaces must come in complementary pairs");
    if (p.leq.size() != n)
        throw std::invalid_argument("sageev_dual: inclusion table size mismatch");
    for (const auto& row : p.leq)
        if (row.size() != n) throw std::invalid_argument("sageev_dual: inclusion table size mismatch");
    std::size_t k = n / 2;

    // Enumerate the orientations: one halfspace per pair, closed upward
    // under inclusion.  Choosing h rules out the complement of anything
    // containing h, which prunes the search tree.
    SageevDual dual;
    std::vector<std::uint32_t> chosen(k, 0);
    auto consistent = [&](std::size_t i, std::uint32_t c) {
        for (std::size_t j = 0; j < i; ++j) {
            std::uint32_t d = chosen[j];
            if (p.leq[c][d ^ 1] || p.leq[d][c ^ 1]) return false;
        }
        return true;
    };
    auto extend = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            dual.orientations.push_back(chosen);
            return;
        }
        for (std::uint32_t side = 0; side < 2; ++side) {
            std::uint32_t c = std::uint32_t(2 * i + side);
            if (!consistent(i, c)) continue;
            chosen[i] = c;
            self(self, i + 1);
        }
    };
    extend(extend, 0);

    // Side 0 explored first, so the orientations are already in
    // lexicographic order; ids follow that order.
    std::map<std::vector<std::uint32_t>, VertexId> vid;
    for (std::size_t i = 0; i < dual.orientations.size(); ++i)
        vid.emplace(dual.orientations[i], VertexId(i));

    ComplexData d;
    d.num_vertices = std::uint32_t(dual.orientations.size());
    std::map<std::pair<VertexId, VertexId>, EdgeId> edge_at;
    for (VertexId a = 0; a < d.num_vertices; ++a) {
        for (std::size_t i = 0; i < k; ++i) {
            auto o = dual.orientations[a];
            o[i] ^= 1;
            auto it = vid.find(o);
            if (it != vid.end() && it->second > a) d.edges.push_back({a, it->second});
        }
    }
    std::sort(d.edges.begin(), d.edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    for (EdgeId e = 0; e < d.edges.size(); ++e)
        edge_at.emplace(std::make_pair(d.edges[e].src, d.edges[e].dst), e);

    // One cube per set of pairwise-flippable hyperplanes whose every corner
    // orientation exists, rooted at the corner choosing side 0 throughout so
    // each cube is found exactly once.
    std::vector<std::pair<std::vector<VertexId>, Cube>> cubes;
    for (VertexId a = 0; a < d.num_vertices; ++a) {
        const auto& base = dual.orientations[a];
        std::vector<std::size_t> cand;
        for (std::size_t i = 0; i < k; ++i) {
            if (base[i] != 2 * i) continue;
            auto o = base;
            o[i] ^= 1;
            if (vid.count(o)) cand.push_back(i);
        }
        if (cand.size() < 2 || cand.size() >= 8 * sizeof(std::size_t)) continue;
        for (std::size_t mask = 1; mask < (std::size_t(1) << cand.size()); ++mask) {
            std::vector<std::size_t> axes;
            for (std::size_t j = 0; j < cand.size(); ++j)
                if (mask >> j & 1) axes.push_back(cand[j]);
            if (axes.size() < 2) continue;
            int dim = int(axes.size());
            std::vector<VertexId> corners(std::size_t(1) << dim, kNoVertex);
            bool whole = true;
            for (std::size_t m = 0; whole && m < corners.size(); ++m) {
                auto o = base;
                for (std::size_t j = 0; j < axes.size(); ++j)
                    if (m >> j & 1) o[axes[j]] ^= 1;
                auto it = vid.find(o);
                if (it == vid.end())
                    whole = false;
                else
                    corners[m] = it->second;
            }
            if (!whole) continue;
            Cube cb;
            cb.dim = dim;
            cb.corners = corners;
            cb.edges.resize(cb.edge_count());
            for (int axis = 0; axis < dim; ++axis) {
                for (std::size_t m = 0; m < corners.size(); ++m) {
                    if (m >> axis & 1) continue;
                    VertexId lo = corners[m], hi = corners[m | (std::size_t(1) << axis)];
                    auto it = edge_at.find({std::min(lo, hi), std::max(lo, hi)});
                    if (it == edge_at.end())
                        throw std::logic_error("sageev_dual: cube edge missing from the edge list");
                    cb.edges[Cube::edge_index(dim, axis, unsigned(m))] = {it->second, lo < hi};
                }
            }
            cubes.emplace_back(std::move(corners), std::move(cb));
        }
    }
    std::sort(cubes.begin(), cubes.end(), [](const auto& a, const auto& b) {
        return std::tie(a.second.dim, a.first) < std::tie(b.second.dim, b.first);
    });
    for (auto& [corners, cb] : cubes) d.cubes.push_back(std::move(cb));

    dual.complex = CubeComplex::from_data(std::move(d));
    return dual;
}

VertexId dual_to_ambient(const CubeComplex& x, const HalfspacePoset& p,
                         const std::vector<std::uint32_t>& orientation, VertexId q) {
    if (q >= x.num_vertices()) throw std::invalid_argument("dual_to_ambient: vertex out of range");
    std::size_t k = p.hyperplane_ids.size();
    if (orientation.size() != k)
        throw std::invalid_argument("dual_to_ambient: orientation has the wrong length");
    for (std::size_t i = 0; i < k; ++i)
        if (orientation[i] >> 1 != i)
            throw std::invalid_argument("dual_to_ambient: entry " + std::to_string(i) +
                                        " does not pick a side of its hyperplane");

    std::vector<char> keep(x.num_vertices(), 0);
    std::vector<char> mark(x.num_vertices(), 0);
    std::fill(keep.begin(), keep.end(), 1);
    auto intersect = [&](const std::vector<VertexId>& vs) {
        std::fill(mark.begin(), mark.end(), 0);
        for (VertexId v : vs) mark[v] = 1;
        for (VertexId v = 0; v < x.num_vertices(); ++v) keep[v] &= mark[v];
    };
    for (std::size_t i = 0; i < k; ++i) intersect(p.halfspaces[orientation[i]].vertices);

    std::set<std::uint32_t> in_poset(p.hyperplane_ids.begin(), p.hyperplane_ids.end());
    auto hps = hyperplanes(x);
    for (std::uint32_t hid = 0; hid < hps.size(); ++hid) {
        if (in_poset.count(hid)) continue;
        auto sides = hyperplane_sides(x, hps[hid]);
        bool q_first = std::binary_search(sides.first.begin(), sides.first.end(), q);
        intersect(q_first ? sides.first : sides.second);
    }

    VertexId found = kNoVertex;
    for (VertexId v = 0; v < x.num_vertices(); ++v) {
        if (!keep[v]) continue;
        if (found != kNoVertex)
            throw std::invalid_argument("dual_to_ambient: several ambient vertices match");
        found = v;
    }
    if (found == kNoVertex)
        throw std::invalid_argument("dual_to_ambient: no ambient vertex matches");
    return found;
}

// ------------------------------------------------------------- cover balls

namespace {

ComplexData data_of(const CubeComplex& x) {
    ComplexData d;
    d.num_vertices = x.num_vertices();
    for (EdgeId e = 0; e < x.num_edges(); ++e) d.edges.push_back(x.edge(e));
    for (CubeId c = 0; c < x.num_cubes(); ++c) d.cubes.push_back(x.cube(c));
    d.basepoint = x.basepoint();
    return d;
}

MapData map_data_of(const CubicalMap& f) {
    MapData m;
    const CubeComplex& x = f.domain();
    for (VertexId v = 0; v < x.num_vertices(); ++v) m.vertex_map.push_back(f.vertex_image(v));
    for (EdgeId e = 0; e < x.num_edges(); ++e) m.edge_map.push_back(f.edge_image(e));
    for (CubeId c = 0; c < x.num_cubes(); ++c) m.cube_map.push_back(f.cube_image(c).target);
    return m;
}

}  // namespace

CoverBall universal_cover_ball(ComplexPtr y, VertexId q, unsigned radius,
                               std::size_t cell_budget) {
    if (!y) throw std::invalid_argument("universal_cover_ball: null base complex");
    if (q >= y->num_vertices())
        throw std::invalid_argument("universal_cover_ball: base vertex out of range");
    for (std::uint32_t dv : distances_from(*y, q))
        if (dv == kUnreachable)
            throw std::invalid_argument("universal_cover_ball: base complex is not connected");
    if (!check_npc(*y).npc)
        throw std::invalid_argument("universal_cover_ball: base complex is not NPC");

    auto guard = [cell_budget](const CubeComplex& x) {
        if (x.cell_count() > cell_budget)
            throw std::runtime_error("universal_cover_ball: cell budget exceeded");
    };

    ComplexData seed;
    seed.num_vertices = 1;
    seed.basepoint = 0;
    MapData seed_map;
    seed_map.vertex_map.push_back(q);
    CubicalMap cur = CubicalMap::from_data(
        std::make_shared<CubeComplex>(CubeComplex::from_data(std::move(seed))), y,
        std::move(seed_map));

    // Grow the development one layer per stage.  Within a stage, folding and
    // cube gluing run to a fixpoint over the part built so far (attachments
    // only at vertices within the stage depth, so the frontier stays put);
    // then every vertex of the new layer gets the rest of its edge germs.
    for (unsigned t = 0; t < radius; ++t) {
        for (;;) {
            if (auto s = find_fold(cur)) {
                cur = fold(cur, *s);
                continue;
            }
            if (auto s = find_cube_identification(cur)) {
                cur = identify_cubes(cur, *s);
                continue;
            }
            auto depth = distances_from(cur.domain(), *cur.domain().basepoint());
            bool attached = false;
            for (const auto& s : attachment_sites(cur)) {
                if (depth[s.vertex] > t) continue;
                cur = attach_cube(cur, s);
                attached = true;
                break;
            }
            if (!attached) break;
            guard(cur.domain());
        }

        auto depth = distances_from(cur.domain(), *cur.domain().basepoint());
        ComplexData nd = data_of(cur.domain());
        MapData nm = map_data_of(cur);
        for (VertexId v = 0; v < cur.domain().num_vertices(); ++v) {
            if (depth[v] != t) continue;
            std::set<std::uint64_t> have;
            for (const auto& g : cur.domain().germs(v)) have.insert(cur.image(g).key());
            for (const auto& h : y->germs(cur.vertex_image(v))) {
                if (have.count(h.key())) continue;
                VertexId w = nd.num_vertices++;
                nm.vertex_map.push_back(y->target(h));
                nd.edges.push_back({v, w});
                nm.edge_map.push_back(h);
            }
        }
        cur = CubicalMap::from_data(std::make_shared<CubeComplex>(CubeComplex::from_data(std::move(nd))),
                                    y, std::move(nm));
        guard(cur.domain());
    }

    // The stage loop can overshoot the radius while completing cubes; trim
    // back to the full subcomplex on the ball's own vertices.
    auto depth = distances_from(cur.domain(), *cur.domain().basepoint());
    std::vector<VertexId> inside;
    for (VertexId v = 0; v < cur.domain().num_vertices(); ++v)
        if (depth[v] <= radius) inside.push_back(v);
    Subcomplex sub = full_subcomplex(cur.domain(), inside);

    MapData pm;
    for (VertexId v : sub.vertices) pm.vertex_map.push_back(cur.vertex_image(v));
    for (EdgeId e : sub.edges) pm.edge_map.push_back(cur.edge_image(e));
    for (CubeId c : sub.cubes) pm.cube_map.push_back(cur.cube_image(c).target);
    auto ball = std::make_shared<CubeComplex>(std::move(sub.complex));

    CoverBall out{CubicalMap::from_data(ball, std::move(y), std::move(pm)),
                  *ball->basepoint(), radius, {}};
    for (std::uint32_t dv : distances_from(*ball, out.center)) out.depth.push_back(dv);
    if (!is_immersion(out.projection).immersion)
        throw std::logic_error("universal_cover_ball: development is not an immersion");
    return out;
}

}  // namespace cubical
