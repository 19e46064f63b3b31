#include "cubical/completion.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cubical {

// ---------------------------------------------------------------- fold sites

// Every unordered germ pair at one vertex whose images agree, in site order.
std::vector<FoldSite> fold_sites(const CubicalMap& f) {
    std::vector<FoldSite> sites;
    const CubeComplex& x = f.domain();
    for (VertexId v = 0; v < x.num_vertices(); ++v) {
        const auto& gs = x.germs(v);
        // germs(v) is sorted by key, so pairs come out in lexicographic order
        for (std::size_t i = 0; i < gs.size(); ++i)
            for (std::size_t j = i + 1; j < gs.size(); ++j)
                if (f.image(gs[i]).key() == f.image(gs[j]).key())
                    sites.push_back({v, gs[i], gs[j]});
    }
    return sites;
}

std::vector<IdentifySite> identification_sites(const CubicalMap& f) {
    const CubeComplex& x = f.domain();
    // group cubes by canonical data; within a group every c1 < c2 pair folds
    std::map<std::vector<std::uint32_t>, std::vector<CubeId>> groups;
    for (CubeId c = 0; c < x.num_cubes(); ++c)
        groups[canonical_cube_key(x.cube(c))].push_back(c);
    std::vector<IdentifySite> sites;
    for (const auto& [key, ids] : groups)
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                sites.push_back({ids[i], ids[j]});
    // order by (dimension, smaller id, larger id)
    std::sort(sites.begin(), sites.end(), [&](const IdentifySite& a, const IdentifySite& b) {
        auto ka = std::make_tuple(x.cube(a.cube1).dim, a.cube1, a.cube2);
        auto kb = std::make_tuple(x.cube(b.cube1).dim, b.cube1, b.cube2);
        return ka < kb;
    });
    return sites;
}

// Every missing-simplex witness over every vertex, in site order.  Mirrors
// find_missing_simplex, which stops at the first vertex with a witness.
std::vector<AttachSite> attachment_sites(const CubicalMap& f) {
    std::vector<AttachSite> sites;
    const CubeComplex& x = f.domain();
    const CubeComplex& y = f.codomain();
    for (VertexId v = 0; v < x.num_vertices(); ++v) {
        LinkComplex dl = link(x, v);
        LinkComplex cl = link(y, f.vertex_image(v));
        std::map<std::uint64_t, DirectedEdge> preimage;
        for (const auto& g : dl.germs) preimage.emplace(f.image(g).key(), g);
        std::set<std::vector<std::uint64_t>> spanned;
        for (const auto& s : dl.simplices) {
            std::vector<std::uint64_t> keys;
            for (auto gi : s.germs) keys.push_back(f.image(dl.germs[gi]).key());
            std::sort(keys.begin(), keys.end());
            spanned.insert(std::move(keys));
        }
        std::set<std::vector<std::uint64_t>> seen;
        for (const auto& s : cl.simplices) {
            std::vector<std::uint64_t> keys;
            for (auto gi : s.germs) keys.push_back(cl.germs[gi].key());
            std::sort(keys.begin(), keys.end());
            if (!seen.insert(keys).second) continue;
            std::vector<DirectedEdge> lifted;
            for (auto k : keys) {
                auto it = preimage.find(k);
                if (it == preimage.end()) break;
                lifted.push_back(it->second);
            }
            if (lifted.size() != keys.size() || spanned.count(keys)) continue;
            std::sort(lifted.begin(), lifted.end());
            sites.push_back({v, std::move(lifted), s.cube, s.corner});
        }
    }
    std::sort(sites.begin(), sites.end());
    return sites;
}

namespace {

// Does some cube corner of the domain span exactly these germs at v?  Used
// to discard attachment sites that an earlier gluing in the same round
// already filled in.
bool site_now_spanned(const CubicalMap& f, const AttachSite& site) {
    LinkComplex lk = link(f.domain(), site.vertex);
    std::vector<std::uint64_t> want;
    want.reserve(site.germs.size());
    for (const auto& g : site.germs) want.push_back(g.key());
    std::sort(want.begin(), want.end());
    for (const auto& s : lk.simplices) {
        if (s.germs.size() != site.germs.size()) continue;
        std::vector<std::uint64_t> got;
        for (auto gi : s.germs) got.push_back(lk.germs[gi].key());
        std::sort(got.begin(), got.end());
        if (got == want) return true;
    }
    return false;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
    }
    template <class T>
    void shuffle(std::vector<T>& v) {
        std::shuffle(v.begin(), v.end(), gen);
    }
};

}  // namespace

// ------------------------------------------------------------------- bouquet

CubicalMap bouquet_from_words(ComplexPtr y, VertexId q,
                              const std::vector<std::vector<DirectedEdge>>& words) {
    if (!y) throw std::invalid_argument("bouquet_from_words: null codomain");
    if (q >= y->num_vertices()) throw std::invalid_argument("bouquet_from_words: bad basepoint");
    ComplexData d;
    MapData md;
    d.num_vertices = 1;
    d.basepoint = 0;
    md.vertex_map.push_back(q);
    for (std::size_t w = 0; w < words.size(); ++w) {
        const auto& word = words[w];
        if (word.empty()) continue;  // trivial petal contributes nothing
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (word[i].edge >= y->num_edges())
                throw std::invalid_argument("bouquet_from_words: letter out of range");
            VertexId expect = i == 0 ? q : y->target(word[i - 1]);
            if (y->source(word[i]) != expect)
                throw std::invalid_argument("bouquet_from_words: word " + std::to_string(w) +
                                            " is not an edge path");
        }
        if (y->target(word.back()) != q)
            throw std::invalid_argument("bouquet_from_words: word " + std::to_string(w) +
                                        " is not closed at the basepoint");
        // petal: basepoint, |word|-1 fresh vertices, |word| edges
        VertexId prev = 0;
        for (std::size_t i = 0; i < word.size(); ++i) {
            VertexId next = i + 1 == word.size() ? 0 : d.num_vertices++;
            if (next != 0) md.vertex_map.push_back(y->target(word[i]));
            d.edges.push_back({prev, next});
            md.edge_map.push_back(word[i]);
            prev = next;
        }
    }
    return CubicalMap::from_data(std::make_shared<CubeComplex>(CubeComplex::from_data(d)),
                                 std::move(y), md);
}

// ---------------------------------------------------------------------- fold

std::optional<FoldSite> find_fold(const CubicalMap& f) {
    auto sites = fold_sites(f);
    if (sites.empty()) return std::nullopt;
    return sites.front();
}

CubicalMap fold(const CubicalMap& f, const FoldSite& site, QuotientMaps* quotient) {
    const CubeComplex& x = f.domain();
    const EdgeId e1 = site.germ1.edge, e2 = site.germ2.edge;
    if (e1 == e2 || site.germ1.key() > site.germ2.key())
        throw std::invalid_argument("fold: malformed site");
    if (x.source(site.germ1) != site.vertex || x.source(site.germ2) != site.vertex)
        throw std::invalid_argument("fold: germs not based at the site vertex");
    if (f.image(site.germ1).key() != f.image(site.germ2).key())
        throw std::invalid_argument("fold: germ images differ");

    // e2 disappears into e1; flipped when the germs traverse them oppositely
    const bool flip = site.germ1.forward != site.germ2.forward;
    const VertexId t1 = x.target(site.germ1), t2 = x.target(site.germ2);
    const VertexId keep = std::min(t1, t2), drop = std::max(t1, t2);
    const bool merge_vertices = t1 != t2;

    auto new_vertex = [&](VertexId v) -> VertexId {
        if (merge_vertices && v == drop) v = keep;
        return merge_vertices && v > drop ? v - 1 : v;
    };
    auto new_edge = [&](DirectedEdge d) -> DirectedEdge {
        if (d.edge == e2) return {e1 > e2 ? e1 - 1 : e1, flip ? !d.forward : d.forward};
        return {d.edge > e2 ? d.edge - 1 : d.edge, d.forward};
    };

    ComplexData nd;
    MapData nm;
    nd.num_vertices = x.num_vertices() - (merge_vertices ? 1 : 0);
    if (x.basepoint()) nd.basepoint = new_vertex(*x.basepoint());
    nm.vertex_map.resize(nd.num_vertices);
    for (VertexId v = 0; v < x.num_vertices(); ++v)
        nm.vertex_map[new_vertex(v)] = f.vertex_image(v);
    for (EdgeId e = 0; e < x.num_edges(); ++e) {
        if (e == e2) continue;
        nd.edges.push_back({new_vertex(x.edge(e).src), new_vertex(x.edge(e).dst)});
        nm.edge_map.push_back(f.edge_image(e));
    }
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        Cube nc = x.cube(c);
        for (auto& v : nc.corners) v = new_vertex(v);
        for (auto& d : nc.edges) d = new_edge(d);
        nd.cubes.push_back(std::move(nc));
        nm.cube_map.push_back(f.cube_image(c).target);
    }

    if (quotient) {
        quotient->vertex_map.resize(x.num_vertices());
        for (VertexId v = 0; v < x.num_vertices(); ++v) quotient->vertex_map[v] = new_vertex(v);
        quotient->edge_map.resize(x.num_edges());
        for (EdgeId e = 0; e < x.num_edges(); ++e) quotient->edge_map[e] = new_edge({e, true});
        quotient->cube_map.resize(x.num_cubes());
        for (CubeId c = 0; c < x.num_cubes(); ++c) quotient->cube_map[c] = c;
    }
    return CubicalMap::from_data(std::make_shared<CubeComplex>(CubeComplex::from_data(nd)),
                                 f.codomain_ptr(), nm);
}

// ------------------------------------------------------------ identification

std::optional<IdentifySite> find_cube_identification(const CubicalMap& f) {
    auto sites = identification_sites(f);
    if (sites.empty()) return std::nullopt;
    return sites.front();
}

CubicalMap identify_cubes(const CubicalMap& f, const IdentifySite& site, QuotientMaps* quotient) {
    const CubeComplex& x = f.domain();
    if (site.cube1 >= site.cube2 || site.cube2 >= x.num_cubes())
        throw std::invalid_argument("identify_cubes: malformed site");
    if (canonical_cube_key(x.cube(site.cube1)) != canonical_cube_key(x.cube(site.cube2)))
        throw std::invalid_argument("identify_cubes: cubes are not copies of each other");

    ComplexData nd;
    MapData nm;
    nd.num_vertices = x.num_vertices();
    nd.basepoint = x.basepoint();
    nm.vertex_map = f.vertex_map();
    for (EdgeId e = 0; e < x.num_edges(); ++e) {
        nd.edges.push_back(x.edge(e));
        nm.edge_map.push_back(f.edge_image(e));
    }
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        if (c == site.cube2) continue;
        nd.cubes.push_back(x.cube(c));
        nm.cube_map.push_back(f.cube_image(c).target);
    }
    if (quotient) {
        quotient->vertex_map.resize(x.num_vertices());
        for (VertexId v = 0; v < x.num_vertices(); ++v) quotient->vertex_map[v] = v;
        quotient->edge_map.resize(x.num_edges());
        for (EdgeId e = 0; e < x.num_edges(); ++e) quotient->edge_map[e] = {e, true};
        quotient->cube_map.resize(x.num_cubes());
        for (CubeId c = 0; c < x.num_cubes(); ++c) {
            CubeId img = c == site.cube2 ? site.cube1 : c;
            quotient->cube_map[c] = img > site.cube2 ? img - 1 : img;
        }
    }
    return CubicalMap::from_data(std::make_shared<CubeComplex>(CubeComplex::from_data(nd)),
                                 f.codomain_ptr(), nm);
}

// ---------------------------------------------------------------- attachment

std::optional<AttachSite> find_cube_attachment(const CubicalMap& f) {
    return find_missing_simplex(f);
}

CubicalMap attach_cube(const CubicalMap& f, const AttachSite& site) {
    const CubeComplex& x = f.domain();
    const CubeComplex& y = f.codomain();
    const std::size_t n = site.germs.size();
    if (n < 2 || site.target_cube >= y.num_cubes())
        throw std::invalid_argument("attach_cube: malformed site");
    const Cube& target = y.cube(site.target_cube);
    if (target.dim != (int)n || site.target_corner >= target.corner_count())
        throw std::invalid_argument("attach_cube: target does not fit the site");
    const unsigned m0 = site.target_corner;

    // Match each site germ to the axis of the target cube carrying its image.
    std::map<std::uint64_t, unsigned> axis_of_image;
    for (unsigned a = 0; a < n; ++a) {
        unsigned base = m0 & ~(1u << a);
        DirectedEdge d = target.edges[Cube::edge_index(n, a, base)];
        if ((m0 >> a) & 1u) d = d.reversed();  // direct away from the corner
        axis_of_image[d.key()] = a;
    }
    std::vector<unsigned> axis(n);       // site axis i -> target axis
    std::vector<bool> away_is_down(n);   // target coordinate decreases leaving m0
    for (std::size_t i = 0; i < n; ++i) {
        auto it = axis_of_image.find(f.image(site.germs[i]).key());
        if (it == axis_of_image.end())
            throw std::invalid_argument("attach_cube: germ image is not a germ of the target corner");
        axis[i] = it->second;
        away_is_down[i] = (m0 >> axis[i]) & 1u;
    }

    // Model corner of the new cube -> corner of the target cube.
    auto target_corner = [&](unsigned mask) {
        unsigned tc = m0;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1u) tc ^= 1u << axis[i];
        return tc;
    };
    // Directed image of model edge (i, base), pointing from base to base|1<<i.
    auto required_image = [&](unsigned i, unsigned base) {
        unsigned tbase = target_corner(base) & ~(1u << axis[i]);
        DirectedEdge d = target.edges[Cube::edge_index(n, axis[i], tbase)];
        return away_is_down[i] ? d.reversed() : d;
    };

    const VertexId nx = x.num_vertices();
    const unsigned corners = 1u << n;
    std::vector<VertexId> corner_vertex(corners, kNoVertex);
    std::vector<std::optional<DirectedEdge>> edge_cell((std::size_t)n << (n - 1));
    std::set<EdgeId> used;  // domain edge cells already glued in this attachment
    std::vector<VertexId> fresh_vertex_image;
    std::vector<Edge> fresh_edges;
    std::vector<DirectedEdge> fresh_edge_image;
    VertexId next_vertex = nx;

    corner_vertex[0] = site.vertex;
    for (std::size_t i = 0; i < n; ++i) {
        corner_vertex[1u << i] = x.target(site.germs[i]);
        edge_cell[Cube::edge_index(n, (unsigned)i, 0)] = site.germs[i];
        used.insert(site.germs[i].edge);
    }

    // Least unused germ at u with the required image, optionally with a
    // prescribed far endpoint.
    auto lift = [&](VertexId u, DirectedEdge img,
                    std::optional<VertexId> to) -> std::optional<DirectedEdge> {
        if (u >= nx) return std::nullopt;  // fresh vertices carry no germs
        for (const auto& g : x.germs(u)) {
            if (used.count(g.edge)) continue;
            if (f.image(g).key() != img.key()) continue;
            if (to && x.target(g) != *to) continue;
            return g;
        }
        return std::nullopt;
    };

    std::vector<unsigned> order;  // corners of the new cube by (popcount, value)
    for (unsigned m = 0; m < corners; ++m)
        if (std::popcount(m) >= 2) order.push_back(m);
    std::sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
        return std::make_pair(std::popcount(a), a) < std::make_pair(std::popcount(b), b);
    });

    for (unsigned m : order) {
        for (unsigned i = 0; i < n; ++i) {
            if (!((m >> i) & 1u)) continue;
            unsigned base = m & ~(1u << i);
            std::size_t idx = Cube::edge_index(n, i, base);
            VertexId u = corner_vertex[base];
            if (corner_vertex[m] == kNoVertex) {
                if (auto g = lift(u, required_image(i, base), std::nullopt)) {
                    corner_vertex[m] = x.target(*g);
                    edge_cell[idx] = *g;
                    used.insert(g->edge);
                }
            } else if (!edge_cell[idx]) {
                if (auto g = lift(u, required_image(i, base), corner_vertex[m])) {
                    edge_cell[idx] = *g;
                    used.insert(g->edge);
                }
            }
        }
        if (corner_vertex[m] == kNoVertex) {
            corner_vertex[m] = next_vertex++;
            fresh_vertex_image.push_back(target.corners[target_corner(m)]);
        }
    }

    // Remaining model edges get fresh edge cells (after one more reuse try,
    // in case the far corner was pinned down only after the first visit).
    EdgeId next_edge = x.num_edges();
    for (unsigned m : order) {
        for (unsigned i = 0; i < n; ++i) {
            if (!((m >> i) & 1u)) continue;
            unsigned base = m & ~(1u << i);
            std::size_t idx = Cube::edge_index(n, i, base);
            if (edge_cell[idx]) continue;
            DirectedEdge img = required_image(i, base);
            if (auto g = lift(corner_vertex[base], img, corner_vertex[m])) {
                edge_cell[idx] = *g;
                used.insert(g->edge);
                continue;
            }
            fresh_edges.push_back({corner_vertex[base], corner_vertex[m]});
            fresh_edge_image.push_back(img);
            edge_cell[idx] = DirectedEdge{next_edge++, true};
        }
    }

    ComplexData nd;
    MapData nm;
    nd.num_vertices = next_vertex;
    nd.basepoint = x.basepoint();
    nm.vertex_map = f.vertex_map();
    for (VertexId img : fresh_vertex_image) nm.vertex_map.push_back(img);
    for (EdgeId e = 0; e < x.num_edges(); ++e) {
        nd.edges.push_back(x.edge(e));
        nm.edge_map.push_back(f.edge_image(e));
    }
    for (std::size_t i = 0; i < fresh_edges.size(); ++i) {
        nd.edges.push_back(fresh_edges[i]);
        nm.edge_map.push_back(fresh_edge_image[i]);
    }
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        nd.cubes.push_back(x.cube(c));
        nm.cube_map.push_back(f.cube_image(c).target);
    }

    // The new cube brings along any of its faces the domain is missing, each
    // mapped onto the matching face of the target.  Faces already present
    // (in the domain or created just now) are not duplicated.
    std::set<std::vector<std::uint32_t>> present;
    for (CubeId c = 0; c < x.num_cubes(); ++c)
        if (x.cube(c).dim >= 2) present.insert(canonical_cube_key(x.cube(c)));

    auto vertex_image = [&](VertexId v) { return nm.vertex_map[v]; };
    auto edge_image = [&](DirectedEdge d) {
        DirectedEdge img = *nm.edge_map[d.edge];
        return d.forward ? img : img.reversed();
    };

    // Axis subsets in size order; within a size, lexicographic.
    std::vector<std::vector<unsigned>> subsets;
    for (unsigned mask = 0; mask < corners; ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<unsigned> axes;
        for (unsigned i = 0; i < n; ++i)
            if ((mask >> i) & 1u) axes.push_back(i);
        subsets.push_back(std::move(axes));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        return std::make_pair(a.size(), a) < std::make_pair(b.size(), b);
    });

    for (const auto& axes : subsets) {
        const unsigned k = (unsigned)axes.size();
        unsigned free_mask = 0;
        for (unsigned i : axes) free_mask |= 1u << i;
        std::vector<unsigned> fixed;  // axes outside the face, ascending
        for (unsigned i = 0; i < n; ++i)
            if (!((free_mask >> i) & 1u)) fixed.push_back(i);
        for (unsigned b = 0; b < (1u << fixed.size()); ++b) {
            unsigned base_mask = 0;
            for (std::size_t j = 0; j < fixed.size(); ++j)
                if ((b >> j) & 1u) base_mask |= 1u << fixed[j];
            Cube face;
            face.dim = (int)k;
            face.corners.resize(std::size_t(1) << k);
            face.edges.resize(std::size_t(k) << (k - 1));
            for (unsigned lm = 0; lm < (1u << k); ++lm) {
                unsigned gm = base_mask;
                for (unsigned j = 0; j < k; ++j)
                    if ((lm >> j) & 1u) gm |= 1u << axes[j];
                face.corners[lm] = corner_vertex[gm];
            }
            for (unsigned j = 0; j < k; ++j) {
                for (unsigned lb = 0; lb < (1u << k); ++lb) {
                    if ((lb >> j) & 1u) continue;
                    unsigned gm = base_mask;
                    for (unsigned t = 0; t < k; ++t)
                        if ((lb >> t) & 1u) gm |= 1u << axes[t];
                    face.edges[Cube::edge_index(k, j, lb)] =
                        *edge_cell[Cube::edge_index(n, axes[j], gm)];
                }
            }
            auto key = canonical_cube_key(face);
            if (k < n && present.count(key)) continue;
            present.insert(std::move(key));
            // image: the face of the target spanned by the same data
            Cube pushed;
            pushed.dim = k;
            pushed.corners.resize(face.corners.size());
            pushed.edges.resize(face.edges.size());
            for (std::size_t t = 0; t < face.corners.size(); ++t)
                pushed.corners[t] = vertex_image(face.corners[t]);
            for (std::size_t t = 0; t < face.edges.size(); ++t)
                pushed.edges[t] = edge_image(face.edges[t]);
            auto matches = y.cubes_matching(pushed);
            if (matches.empty())
                throw std::logic_error("attach_cube: target complex is missing a face");
            nd.cubes.push_back(std::move(face));
            nm.cube_map.push_back(matches.front());
        }
    }

    return CubicalMap::from_data(std::make_shared<CubeComplex>(CubeComplex::from_data(nd)),
                                 f.codomain_ptr(), nm);
}

// ------------------------------------------------------------------ complete

CompletionResult complete(const CubicalMap& f, const CompletionOptions& options) {
    std::optional<Rng> rng;
    if (options.schedule_seed) rng.emplace(*options.schedule_seed);

    CompletionResult r{f, CompletionStatus::Finished, {}, 0};
    auto over_budget = [&] { return r.map.domain().cell_count() > options.budget; };
    auto give_up = [&] {
        r.status = CompletionStatus::BudgetExceeded;
        r.budget_used = r.map.domain().cell_count();
        return r;
    };
    if (over_budget()) return give_up();

    for (;;) {
        bool moved = false;
        for (;;) {
            auto sites = fold_sites(r.map);
            if (sites.empty()) break;
            const FoldSite& s = rng ? sites[rng->pick(sites.size())] : sites.front();
            r.map = fold(r.map, s);
            r.history.emplace_back(s);
            moved = true;
        }
        for (;;) {
            auto sites = identification_sites(r.map);
            if (sites.empty()) break;
            const IdentifySite& s = rng ? sites[rng->pick(sites.size())] : sites.front();
            r.map = identify_cubes(r.map, s);
            r.history.emplace_back(s);
            moved = true;
        }
        // attachments: snapshot the round's sites, then re-check each one,
        // since an earlier gluing can fill a later site in
        {
            auto sites = attachment_sites(r.map);
            if (rng) rng->shuffle(sites);
            for (const AttachSite& s : sites) {
                if (site_now_spanned(r.map, s)) continue;
                r.map = attach_cube(r.map, s);
                r.history.emplace_back(s);
                moved = true;
                if (over_budget()) return give_up();
            }
        }
        if (!moved) break;
    }

    r.budget_used = r.map.domain().cell_count();
    if (!is_local_isometry(r.map).local_isometry)
        throw std::logic_error("complete: no moves remain but the map is not a local isometry");
    return r;
}

// --------------------------------------------------------------- canonical

CubicalMap canonicalize(const CompletionResult& r) {
    if (r.status != CompletionStatus::Finished)
        throw std::invalid_argument("canonicalize: completion did not finish");
    return canonicalize(r.map);
}

CubicalMap canonicalize(const CubicalMap& f) {
    const CubeComplex& x = f.domain();
    if (!x.basepoint()) throw std::invalid_argument("canonicalize: domain has no basepoint");

    const VertexId unset = kNoVertex;
    std::vector<VertexId> new_vertex(x.num_vertices(), unset);
    std::vector<EdgeId> new_edge(x.num_edges(), kNoEdge);
    std::vector<bool> edge_flipped(x.num_edges(), false);
    std::vector<VertexId> vertex_order;
    std::vector<EdgeId> edge_order;

    new_vertex[*x.basepoint()] = 0;
    vertex_order.push_back(*x.basepoint());
    for (std::size_t head = 0; head < vertex_order.size(); ++head) {
        VertexId v = vertex_order[head];
        // outgoing germs in image-key order; for an immersion the keys at one
        // vertex are distinct, the second component only pads the order
        std::vector<DirectedEdge> gs = x.germs(v);
        std::sort(gs.begin(), gs.end(), [&](const DirectedEdge& a, const DirectedEdge& b) {
            return std::make_pair(f.image(a).key(), a.key()) <
                   std::make_pair(f.image(b).key(), b.key());
        });
        for (const auto& g : gs) {
            if (new_edge[g.edge] == kNoEdge) {
                new_edge[g.edge] = (EdgeId)edge_order.size();
                edge_order.push_back(g.edge);
                edge_flipped[g.edge] = !g.forward;  // canonical source = v
            }
            VertexId w = x.target(g);
            if (new_vertex[w] == unset) {
                new_vertex[w] = (VertexId)vertex_order.size();
                vertex_order.push_back(w);
            }
        }
    }
    if (vertex_order.size() != x.num_vertices() || edge_order.size() != x.num_edges())
        throw std::invalid_argument("canonicalize: domain is not connected");

    auto relabel = [&](DirectedEdge d) {
        return DirectedEdge{new_edge[d.edge], edge_flipped[d.edge] ? !d.forward : d.forward};
    };

    ComplexData nd;
    MapData nm;
    nd.num_vertices = x.num_vertices();
    nd.basepoint = 0;
    nm.vertex_map.resize(x.num_vertices());
    for (VertexId v = 0; v < x.num_vertices(); ++v)
        nm.vertex_map[new_vertex[v]] = f.vertex_image(v);
    nd.edges.resize(x.num_edges());
    nm.edge_map.resize(x.num_edges());
    for (EdgeId e = 0; e < x.num_edges(); ++e) {
        const Edge& old = x.edge(e);
        Edge ne{new_vertex[old.src], new_vertex[old.dst]};
        if (edge_flipped[e]) std::swap(ne.src, ne.dst);
        nd.edges[new_edge[e]] = ne;
        DirectedEdge img = f.edge_image(e);
        nm.edge_map[new_edge[e]] = edge_flipped[e] ? img.reversed() : img;
    }

    // relabel cube data, normalise each cube by its least symmetry, then
    // sort cubes by (dimension, data, target)
    struct Entry {
        Cube cube;
        CubeId target;
        std::vector<std::uint64_t> key;
    };
    auto serialize = [](const Cube& c) {
        std::vector<std::uint64_t> k;
        k.reserve(1 + c.corners.size() + c.edges.size());
        k.push_back((std::uint64_t)c.dim);
        for (auto v : c.corners) k.push_back(v);
        for (auto d : c.edges) k.push_back(d.key());
        return k;
    };
    std::vector<Entry> entries;
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        Cube nc = x.cube(c);
        for (auto& v : nc.corners) v = new_vertex[v];
        for (auto& d : nc.edges) d = relabel(d);
        Cube best_cube = nc;
        std::vector<std::uint64_t> best = serialize(nc);
        for (const auto& s : CubeSymmetry::all(nc.dim)) {
            Cube t = transform_cube(nc, s);
            auto k = serialize(t);
            if (k < best) {
                best = std::move(k);
                best_cube = std::move(t);
            }
        }
        entries.push_back({std::move(best_cube), f.cube_image(c).target, std::move(best)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.key != b.key ? a.key < b.key : a.target < b.target;
    });
    for (auto& e : entries) {
        nd.cubes.push_back(std::move(e.cube));
        nm.cube_map.push_back(e.target);
    }

    return CubicalMap::from_data(std::make_shared<CubeComplex>(CubeComplex::from_data(nd)),
                                 f.codomain_ptr(), nm);
}

std::string canonical_signature(const CubicalMap& f) {
    const CubeComplex& x = f.domain();
    const CubeComplex& y = f.codomain();
    std::ostringstream os;
    os << "over " << y.num_vertices() << ' ' << y.num_edges() << ' ' << y.num_cubes() << '\n';
    os << "vertices " << x.num_vertices() << '\n';
    if (x.basepoint()) os << "basepoint " << *x.basepoint() << '\n';
    for (VertexId v = 0; v < x.num_vertices(); ++v)
        os << "v " << v << " -> " << f.vertex_image(v) << '\n';
    for (EdgeId e = 0; e < x.num_edges(); ++e)
        os << "e " << x.edge(e).src << ' ' << x.edge(e).dst << " -> " << f.edge_image(e).key()
           << '\n';
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        const Cube& cu = x.cube(c);
        os << "c " << cu.dim;
        for (auto v : cu.corners) os << ' ' << v;
        for (auto d : cu.edges) os << ' ' << d.key();
        os << " -> " << f.cube_image(c).target << '\n';
    }
    return os.str();
}

}  // namespace cubical
