#include "cubical/cubical_map.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace cubical {

std::optional<CubeSymmetry> reconcile_cube(const Cube& pushed, const Cube& target) {
    if (pushed.dim != target.dim) return std::nullopt;
    for (const CubeSymmetry& s : CubeSymmetry::all(pushed.dim)) {
        Cube t = transform_cube(pushed, s);
        if (t.corners == target.corners && t.edges == target.edges) return s;
    }
    return std::nullopt;
}

std::variant<CubicalMap, std::vector<Violation>> CubicalMap::validate(ComplexPtr domain,
                                                                      ComplexPtr codomain,
                                                                      MapData data) {
    std::vector<Violation> violations;
    auto bad = [&](std::string cell, std::string what) {
        violations.push_back({std::move(cell), std::move(what)});
    };
    const CubeComplex& x = *domain;
    const CubeComplex& y = *codomain;

    if (data.vertex_map.size() != x.num_vertices()) bad("vertex map", "wrong size");
    if (data.edge_map.size() != x.edges().size()) bad("edge map", "wrong size");
    if (data.cube_map.size() != x.cubes().size()) bad("cube map", "wrong size");
    if (!violations.empty()) return violations;

    for (VertexId v = 0; v < x.num_vertices(); ++v)
        if (data.vertex_map[v] >= y.num_vertices())
            bad("vertex " + std::to_string(v), "image out of range");

    for (EdgeId e = 0; e < x.edges().size(); ++e) {
        if (!data.edge_map[e]) {
            bad("edge " + std::to_string(e), "missing image cell");
            continue;
        }
        const DirectedEdge& d = *data.edge_map[e];
        if (d.edge >= y.edges().size()) {
            bad("edge " + std::to_string(e), "image out of range");
            continue;
        }
        if (data.vertex_map[x.edge(e).src] != y.source(d) ||
            data.vertex_map[x.edge(e).dst] != y.target(d))
            bad("edge " + std::to_string(e), "endpoints do not commute with the vertex map");
    }
    if (!violations.empty()) return violations;

    CubicalMap f;
    f.domain_ = std::move(domain);
    f.codomain_ = std::move(codomain);
    f.vertex_map_ = std::move(data.vertex_map);
    f.edge_map_.reserve(x.edges().size());
    for (auto& d : data.edge_map) f.edge_map_.push_back(*d);

    for (CubeId c = 0; c < x.cubes().size(); ++c) {
        if (!data.cube_map[c]) {
            bad("cube " + std::to_string(c), "missing image cell");
            continue;
        }
        CubeId tc = *data.cube_map[c];
        if (tc >= y.cubes().size()) {
            bad("cube " + std::to_string(c), "image out of range");
            continue;
        }
        const Cube& src = x.cube(c);
        const Cube& dst = y.cube(tc);
        if (src.dim != dst.dim) {
            bad("cube " + std::to_string(c), "image has a different dimension");
            continue;
        }
        Cube pushed;
        pushed.dim = src.dim;
        pushed.corners.reserve(src.corners.size());
        for (VertexId v : src.corners) pushed.corners.push_back(f.vertex_map_[v]);
        pushed.edges.reserve(src.edges.size());
        for (const DirectedEdge& d : src.edges) pushed.edges.push_back(f.image(d));
        auto sym = reconcile_cube(pushed, dst);
        if (!sym) {
            bad("cube " + std::to_string(c), "no model symmetry reconciles the assignments");
            continue;
        }
        f.cube_map_.push_back({tc, *sym});
    }
    if (!violations.empty()) return violations;
    return f;
}

CubicalMap CubicalMap::from_data(ComplexPtr domain, ComplexPtr codomain, MapData data) {
    auto result = validate(std::move(domain), std::move(codomain), std::move(data));
    if (auto* v = std::get_if<std::vector<Violation>>(&result)) {
        std::string msg = "invalid map:";
        for (const auto& viol : *v) msg += " [" + viol.cell + ": " + viol.invariant + "]";
        throw std::invalid_argument(msg);
    }
    return std::get<CubicalMap>(std::move(result));
}

bool CubicalMap::basepoint_respecting() const {
    return domain_->basepoint() && codomain_->basepoint() &&
           vertex_map_[*domain_->basepoint()] == *codomain_->basepoint();
}

LinkMap induced_link_map(const CubicalMap& f, VertexId v) {
    LinkMap m;
    m.domain_link = link(f.domain(), v);
    m.codomain_link = link(f.codomain(), f.vertex_image(v));
    std::map<std::uint64_t, std::uint32_t> codomain_index;
    for (std::uint32_t i = 0; i < m.codomain_link.germs.size(); ++i)
        codomain_index[m.codomain_link.germs[i].key()] = i;
    for (const DirectedEdge& g : m.domain_link.germs)
        m.germ_image.push_back(codomain_index.at(f.image(g).key()));
    return m;
}

ImmersionResult is_immersion(const CubicalMap& f) {
    for (VertexId v = 0; v < f.domain().num_vertices(); ++v) {
        const auto& germs = f.domain().germs(v);
        std::map<std::uint64_t, DirectedEdge> seen;
        for (const DirectedEdge& g : germs) {
            auto key = f.image(g).key();
            auto [it, fresh] = seen.emplace(key, g);
            if (!fresh) return {false, ImmersionWitness{v, it->second, g}};
        }
    }
    return {true, std::nullopt};
}

bool operator<(const AttachSite& a, const AttachSite& b) {
    auto keyed = [](const AttachSite& s) {
        std::vector<std::uint64_t> k;
        k.push_back(s.vertex);
        k.push_back(s.germs.size());
        for (const DirectedEdge& g : s.germs) k.push_back(g.key());
        k.push_back(s.target_cube);
        k.push_back(s.target_corner);
        return k;
    };
    return keyed(a) < keyed(b);
}

std::optional<AttachSite> find_missing_simplex(const CubicalMap& f) {
    for (VertexId v = 0; v < f.domain().num_vertices(); ++v) {
        LinkComplex dl = link(f.domain(), v);
        LinkComplex cl = link(f.codomain(), f.vertex_image(v));

        // Domain germs by image key; an immersion makes this injective.
        std::map<std::uint64_t, DirectedEdge> preimage;
        for (const DirectedEdge& g : dl.germs) preimage.emplace(f.image(g).key(), g);

        // Image germ sets of the domain simplices, per size.
        std::set<std::vector<std::uint64_t>> spanned;
        for (const LinkSimplex& s : dl.simplices) {
            std::vector<std::uint64_t> keys;
            for (std::uint32_t gi : s.germs) keys.push_back(f.image(dl.germs[gi]).key());
            std::sort(keys.begin(), keys.end());
            spanned.insert(std::move(keys));
        }

        std::optional<AttachSite> best;
        std::set<std::vector<std::uint64_t>> considered;
        for (const LinkSimplex& s : cl.simplices) {
            std::vector<std::uint64_t> keys;
            for (std::uint32_t gi : s.germs) keys.push_back(cl.germs[gi].key());
            std::sort(keys.begin(), keys.end());
            if (!considered.insert(keys).second) continue;  // same simplex, later witness
            bool hit = true;
            std::vector<DirectedEdge> germs;
            for (std::uint64_t k : keys) {
                auto it = preimage.find(k);
                if (it == preimage.end()) {
                    hit = false;
                    break;
                }
                germs.push_back(it->second);
            }
            if (!hit) continue;
            if (spanned.count(keys)) continue;
            std::sort(germs.begin(), germs.end());
            AttachSite site{v, std::move(germs), s.cube, s.corner};
            if (!best || site < *best) best = std::move(site);
        }
        if (best) return best;
    }
    return std::nullopt;
}

LocalIsometryResult is_local_isometry(const CubicalMap& f) {
    LocalIsometryResult r;
    ImmersionResult imm = is_immersion(f);
    if (!imm.immersion) {
        r.local_isometry = false;
        r.fold_witness = imm.witness;
        return r;
    }
    r.missing = find_missing_simplex(f);
    r.local_isometry = !r.missing;
    return r;
}

CoveringResult is_covering(const CubicalMap& f) {
    const CubeComplex& y = f.codomain();
    if (!y.basepoint()) throw std::invalid_argument("is_covering: codomain has no basepoint");

    // Connectivity of the codomain.
    {
        std::vector<bool> seen(y.num_vertices(), false);
        std::vector<VertexId> queue{0};
        if (y.num_vertices() > 0) seen[0] = true;
        while (!queue.empty()) {
            VertexId u = queue.back();
            queue.pop_back();
            for (const DirectedEdge& g : y.germs(u)) {
                VertexId w = y.target(g);
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw std::invalid_argument("is_covering: codomain is not connected");
    }

    CoveringResult result;
    for (VertexId v = 0; v < f.domain().num_vertices(); ++v)
        if (f.vertex_image(v) == *y.basepoint()) ++result.fiber;

    std::vector<bool> vhit(y.num_vertices(), false), ehit(y.edges().size(), false),
        chit(y.cubes().size(), false);
    for (VertexId v = 0; v < f.domain().num_vertices(); ++v) vhit[f.vertex_image(v)] = true;
    for (EdgeId e = 0; e < f.domain().edges().size(); ++e) ehit[f.edge_image(e).edge] = true;
    for (CubeId c = 0; c < f.domain().cubes().size(); ++c) chit[f.cube_image(c).target] = true;
    auto all = [](const std::vector<bool>& v) {
        return std::find(v.begin(), v.end(), false) == v.end();
    };
    if (!all(vhit) || !all(ehit) || !all(chit)) return result;

    // Link maps must be isomorphisms: germ bijections carrying the simplex
    // list onto the codomain's, with multiplicity.
    for (VertexId v = 0; v < f.domain().num_vertices(); ++v) {
        LinkMap lm = induced_link_map(f, v);
        if (lm.domain_link.germs.size() != lm.codomain_link.germs.size()) return result;
        std::set<std::uint32_t> distinct(lm.germ_image.begin(), lm.germ_image.end());
        if (distinct.size() != lm.germ_image.size()) return result;
        auto bag = [](const LinkComplex& l, const std::vector<std::uint32_t>* image) {
            std::vector<std::vector<std::uint32_t>> sets;
            for (const LinkSimplex& s : l.simplices) {
                std::vector<std::uint32_t> germs;
                for (std::uint32_t g : s.germs) germs.push_back(image ? (*image)[g] : g);
                std::sort(germs.begin(), germs.end());
                sets.push_back(std::move(germs));
            }
            std::sort(sets.begin(), sets.end());
            return sets;
        };
        if (bag(lm.domain_link, &lm.germ_image) != bag(lm.codomain_link, nullptr)) return result;
    }
    result.covering = true;
    return result;
}

CubicalMap compose(const CubicalMap& outer, const CubicalMap& inner) {
    if (outer.domain_ptr().get() != inner.codomain_ptr().get())
        throw std::invalid_argument("compose: maps do not share the middle complex");
    MapData d;
    const CubeComplex& a = inner.domain();
    d.vertex_map.reserve(a.num_vertices());
    for (VertexId v = 0; v < a.num_vertices(); ++v)
        d.vertex_map.push_back(outer.vertex_image(inner.vertex_image(v)));
    for (EdgeId e = 0; e < a.num_edges(); ++e) d.edge_map.push_back(outer.image(inner.edge_image(e)));
    for (CubeId c = 0; c < a.num_cubes(); ++c)
        d.cube_map.push_back(outer.cube_image(inner.cube_image(c).target).target);
    return CubicalMap::from_data(inner.domain_ptr(), outer.codomain_ptr(), std::move(d));
}

}  // namespace cubical
