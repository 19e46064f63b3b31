#include "cubical/cube_complex.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cubical {

namespace {

// Insert a bit with the given value at position `pos`, shifting higher bits up.
unsigned expand_bit(unsigned m, int pos, unsigned bit) {
    unsigned low = m & ((1u << pos) - 1u);
    unsigned high = m >> pos;
    return (high << (pos + 1)) | (bit << pos) | low;
}

// Remove the bit at position `pos`, shifting higher bits down.
unsigned squeeze_bit(unsigned m, int pos) {
    unsigned low = m & ((1u << pos) - 1u);
    unsigned high = m >> (pos + 1);
    return (high << pos) | low;
}

std::string corner_bits(int dim, unsigned m) {
    std::string s(dim, '0');
    for (int k = 0; k < dim; ++k)
        if ((m >> k) & 1u) s[k] = '1';
    return s;
}

std::string model_edge_name(int dim, int axis, unsigned base) {
    std::string s = corner_bits(dim, base);
    s[axis] = '*';
    return s;
}

}  // namespace

std::size_t Cube::edge_index(int dim, int axis, unsigned base) {
    return (std::size_t(axis) << (dim - 1)) + squeeze_bit(base, axis);
}

std::pair<int, unsigned> Cube::edge_axis_base(int dim, std::size_t idx) {
    int axis = int(idx >> (dim - 1));
    unsigned packed = unsigned(idx & ((std::size_t(1) << (dim - 1)) - 1));
    return {axis, expand_bit(packed, axis, 0)};
}

unsigned CubeSymmetry::apply_corner(unsigned m) const {
    unsigned out = 0;
    for (std::size_t a = 0; a < perm.size(); ++a) {
        unsigned bit = ((m >> a) & 1u) ^ ((flip >> a) & 1u);
        out |= bit << perm[a];
    }
    return out;
}

void CubeSymmetry::apply_edge(int axis, unsigned base, int& out_axis, unsigned& out_base,
                              bool& reversed) const {
    out_axis = perm[axis];
    out_base = apply_corner(base) & ~(1u << out_axis);
    reversed = ((flip >> axis) & 1u) != 0;
}

CubeSymmetry CubeSymmetry::identity(int dim) {
    CubeSymmetry s;
    s.perm.resize(dim);
    std::iota(s.perm.begin(), s.perm.end(), std::uint8_t(0));
    s.flip = 0;
    return s;
}

const std::vector<CubeSymmetry>& CubeSymmetry::all(int dim) {
    static std::vector<std::vector<CubeSymmetry>> table;  // table[dim]
    if (int(table.size()) <= dim) table.resize(dim + 1);
    auto& entry = table[dim];
    if (!entry.empty() || dim == 0) return entry;
    std::vector<std::uint8_t> perm(dim);
    std::iota(perm.begin(), perm.end(), std::uint8_t(0));
    do {
        for (unsigned flip = 0; flip < (1u << dim); ++flip) {
            CubeSymmetry s;
            s.perm = perm;
            s.flip = flip;
            entry.push_back(std::move(s));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return entry;
}

Cube transform_cube(const Cube& c, const CubeSymmetry& s) {
    Cube out;
    out.dim = c.dim;
    out.corners.resize(c.corners.size());
    out.edges.resize(c.edges.size());
    for (unsigned m = 0; m < c.corner_count(); ++m)
        out.corners[s.apply_corner(m)] = c.corners[m];
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
        auto [axis, base] = Cube::edge_axis_base(c.dim, i);
        int na;
        unsigned nbase;
        bool rev;
        s.apply_edge(axis, base, na, nbase, rev);
        DirectedEdge d = c.edges[i];
        if (rev) d = d.reversed();
        out.edges[Cube::edge_index(c.dim, na, nbase)] = d;
    }
    return out;
}

namespace {

std::vector<std::uint32_t> serialize_cube(const Cube& c) {
    std::vector<std::uint32_t> key;
    key.reserve(1 + c.corners.size() + c.edges.size());
    key.push_back(std::uint32_t(c.dim));
    for (VertexId v : c.corners) key.push_back(v);
    for (const DirectedEdge& d : c.edges) key.push_back(std::uint32_t(d.key()));
    return key;
}

}  // namespace

std::vector<std::uint32_t> canonical_cube_key(const Cube& c) {
    std::vector<std::uint32_t> best;
    for (const CubeSymmetry& s : CubeSymmetry::all(c.dim)) {
        auto key = serialize_cube(transform_cube(c, s));
        if (best.empty() || key < best) best = std::move(key);
    }
    return best;
}

Cube cube_face(const Cube& c, int axis, int side) {
    Cube f;
    f.dim = c.dim - 1;
    f.corners.resize(std::size_t(1) << f.dim);
    f.edges.resize(std::size_t(f.dim) << (f.dim - 1));
    for (unsigned m = 0; m < f.corner_count(); ++m)
        f.corners[m] = c.corners[expand_bit(m, axis, unsigned(side))];
    for (int a = 0; a < f.dim; ++a) {
        int parent_axis = a < axis ? a : a + 1;
        for (unsigned packed = 0; packed < (1u << (f.dim - 1)); ++packed) {
            unsigned base = expand_bit(packed, a, 0);  // face-local base corner
            unsigned parent_base = expand_bit(base, axis, unsigned(side));
            f.edges[Cube::edge_index(f.dim, a, base)] =
                c.edges[Cube::edge_index(c.dim, parent_axis, parent_base)];
        }
    }
    return f;
}

std::variant<CubeComplex, std::vector<Violation>> CubeComplex::validate(ComplexData data) {
    std::vector<Violation> violations;
    auto bad = [&](std::string cell, std::string what) {
        violations.push_back({std::move(cell), std::move(what)});
    };

    for (std::size_t i = 0; i < data.edges.size(); ++i) {
        if (data.edges[i].src >= data.num_vertices || data.edges[i].dst >= data.num_vertices)
            bad("edge " + std::to_string(i), "endpoint out of range");
    }
    if (data.basepoint && *data.basepoint >= data.num_vertices)
        bad("basepoint", "vertex out of range");

    // Structural checks first; a malformed table makes the later checks
    // meaningless for that cube.
    std::vector<bool> shaped(data.cubes.size(), true);
    for (std::size_t i = 0; i < data.cubes.size(); ++i) {
        const Cube& c = data.cubes[i];
        std::string name = "cube " + std::to_string(i);
        if (c.dim < 2) {
            bad(name, "dimension below 2");
            shaped[i] = false;
            continue;
        }
        if (c.corners.size() != c.corner_count() || c.edges.size() != c.edge_count()) {
            bad(name, "corner or edge table has the wrong size");
            shaped[i] = false;
            continue;
        }
        for (VertexId v : c.corners)
            if (v >= data.num_vertices) {
                bad(name, "corner vertex out of range");
                shaped[i] = false;
            }
        for (const DirectedEdge& d : c.edges)
            if (d.edge >= data.edges.size()) {
                bad(name, "model edge names an unknown edge");
                shaped[i] = false;
            }
        if (!shaped[i]) continue;
    }
    if (!violations.empty()) return violations;

    auto src = [&](const DirectedEdge& d) {
        return d.forward ? data.edges[d.edge].src : data.edges[d.edge].dst;
    };
    auto dst = [&](const DirectedEdge& d) {
        return d.forward ? data.edges[d.edge].dst : data.edges[d.edge].src;
    };

    for (std::size_t i = 0; i < data.cubes.size(); ++i) {
        const Cube& c = data.cubes[i];
        for (std::size_t k = 0; k < c.edges.size(); ++k) {
            auto [axis, base] = Cube::edge_axis_base(c.dim, k);
            const DirectedEdge& d = c.edges[k];
            if (src(d) != c.corners[base] || dst(d) != c.corners[base | (1u << axis)])
                bad("cube " + std::to_string(i) + " edge " + model_edge_name(c.dim, axis, base),
                    "directed edge endpoints disagree with the corner map");
        }
    }

    // Face presence: each codimension-1 face of an n-cube (n >= 3) must be a
    // declared (n-1)-cube up to model symmetry.
    std::set<std::vector<std::uint32_t>> declared;
    for (const Cube& c : data.cubes) declared.insert(canonical_cube_key(c));
    for (std::size_t i = 0; i < data.cubes.size(); ++i) {
        const Cube& c = data.cubes[i];
        if (c.dim < 3) continue;
        for (int axis = 0; axis < c.dim; ++axis)
            for (int side = 0; side < 2; ++side) {
                Cube f = cube_face(c, axis, side);
                if (!declared.count(canonical_cube_key(f)))
                    bad("cube " + std::to_string(i),
                        "face (axis " + std::to_string(axis) + ", side " + std::to_string(side) +
                            ") is not a declared cube");
            }
    }
    if (!violations.empty()) return violations;

    CubeComplex x;
    x.num_vertices_ = data.num_vertices;
    x.edges_ = std::move(data.edges);
    x.cubes_ = std::move(data.cubes);
    x.basepoint_ = data.basepoint;
    x.build_caches();
    return x;
}

CubeComplex CubeComplex::from_data(ComplexData data) {
    auto result = validate(std::move(data));
    if (auto* v = std::get_if<std::vector<Violation>>(&result)) {
        std::string msg = "invalid complex:";
        for (const auto& viol : *v) msg += " [" + viol.cell + ": " + viol.invariant + "]";
        throw std::invalid_argument(msg);
    }
    return std::get<CubeComplex>(std::move(result));
}

void CubeComplex::build_caches() {
    germs_.assign(num_vertices_, {});
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        germs_[edges_[e].src].push_back({e, true});
        germs_[edges_[e].dst].push_back({e, false});
    }
    for (auto& g : germs_) std::sort(g.begin(), g.end());
    for (CubeId c = 0; c < cubes_.size(); ++c)
        cube_index_[canonical_cube_key(cubes_[c])].push_back(c);
}

std::vector<CubeId> CubeComplex::cubes_matching(const Cube& c) const {
    auto it = cube_index_.find(canonical_cube_key(c));
    if (it == cube_index_.end()) return {};
    return it->second;
}

int CubeComplex::max_dim() const {
    int d = edges_.empty() ? 0 : 1;
    for (const Cube& c : cubes_) d = std::max(d, c.dim);
    return d;
}

LinkComplex link(const CubeComplex& x, VertexId v) {
    if (v >= x.num_vertices()) throw std::out_of_range("link: unknown vertex");
    LinkComplex l;
    l.center = v;
    l.germs = x.germs(v);

    std::map<std::uint64_t, std::uint32_t> germ_index;
    for (std::uint32_t i = 0; i < l.germs.size(); ++i) germ_index[l.germs[i].key()] = i;

    for (CubeId c = 0; c < x.cubes().size(); ++c) {
        const Cube& cb = x.cube(c);
        for (unsigned m = 0; m < cb.corner_count(); ++m) {
            if (cb.corners[m] != v) continue;
            LinkSimplex s;
            s.cube = c;
            s.corner = m;
            for (int a = 0; a < cb.dim; ++a) {
                unsigned base = m & ~(1u << a);
                DirectedEdge d = cb.edges[Cube::edge_index(cb.dim, a, base)];
                if ((m >> a) & 1u) d = d.reversed();
                s.germs.push_back(germ_index.at(d.key()));
            }
            std::sort(s.germs.begin(), s.germs.end());
            l.simplices.push_back(std::move(s));
        }
    }

    std::set<std::vector<std::uint32_t>> seen;
    for (const LinkSimplex& s : l.simplices) {
        if (std::adjacent_find(s.germs.begin(), s.germs.end()) != s.germs.end())
            l.simplicial = false;
        else if (!seen.insert(s.germs).second)
            l.simplicial = false;
    }
    return l;
}

FlagResult is_flag(const LinkComplex& l) {
    if (!l.simplicial) throw std::invalid_argument("is_flag: link is not simplicial");

    // Recorded germ sets by simplex size (size = dimension + 1).
    std::map<std::size_t, std::set<std::vector<std::uint32_t>>> recorded;
    for (const LinkSimplex& s : l.simplices) recorded[s.germs.size()].insert(s.germs);

    // Grow cliques level by level.  A candidate k-set all of whose (k-1)-subsets
    // are recorded simplices is automatically a clique with every proper
    // subset spanning, so the first unrecorded candidate is a minimal witness.
    for (std::size_t k = 3; k <= l.germs.size(); ++k) {
        const auto& below = recorded[k - 1];
        if (below.empty()) break;
        std::set<std::vector<std::uint32_t>> candidates;
        for (const auto& a : below) {
            for (std::uint32_t g = a.back() + 1; g < l.germs.size(); ++g) {
                std::vector<std::uint32_t> x = a;
                x.push_back(g);
                bool clique = true;
                for (std::size_t drop = 0; drop + 1 < x.size() && clique; ++drop) {
                    std::vector<std::uint32_t> sub;
                    for (std::size_t i = 0; i < x.size(); ++i)
                        if (i != drop) sub.push_back(x[i]);
                    if (!below.count(sub)) clique = false;
                }
                if (clique) candidates.insert(std::move(x));
            }
        }
        for (const auto& x : candidates)
            if (!recorded[k].count(x)) return {false, x};
    }
    return {true, {}};
}

NpcReport check_npc(const CubeComplex& x) {
    NpcReport report;
    for (VertexId v = 0; v < x.num_vertices(); ++v) {
        LinkComplex l = link(x, v);
        NpcVertexReport entry;
        entry.vertex = v;
        entry.simplicial = l.simplicial;
        if (l.simplicial) {
            FlagResult f = is_flag(l);
            entry.flag = f.flag;
            for (std::uint32_t g : f.witness) entry.witness.push_back(l.germs[g]);
        } else {
            entry.flag = false;
        }
        if (!entry.simplicial || !entry.flag) report.npc = false;
        report.vertices.push_back(std::move(entry));
    }
    return report;
}

std::vector<Hyperplane> hyperplanes(const CubeComplex& x) {
    std::vector<EdgeId> parent(x.edges().size());
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<EdgeId(EdgeId)> find = [&](EdgeId e) {
        while (parent[e] != e) {
            parent[e] = parent[parent[e]];
            e = parent[e];
        }
        return e;
    };
    auto unite = [&](EdgeId a, EdgeId b) { parent[find(a)] = find(b); };

    for (const Cube& c : x.cubes()) {
        if (c.dim != 2) continue;
        unite(c.edges[Cube::edge_index(2, 0, 0)].edge, c.edges[Cube::edge_index(2, 0, 2)].edge);
        unite(c.edges[Cube::edge_index(2, 1, 0)].edge, c.edges[Cube::edge_index(2, 1, 1)].edge);
    }

    std::map<EdgeId, std::vector<EdgeId>> classes;  // keyed by root: iteration order by least member below
    for (EdgeId e = 0; e < x.edges().size(); ++e) classes[find(e)].push_back(e);

    std::vector<Hyperplane> out;
    std::vector<std::vector<EdgeId>> sorted_classes;
    for (auto& [root, members] : classes) {
        std::sort(members.begin(), members.end());
        sorted_classes.push_back(std::move(members));
    }
    std::sort(sorted_classes.begin(), sorted_classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (std::uint32_t i = 0; i < sorted_classes.size(); ++i)
        out.push_back({i, std::move(sorted_classes[i])});
    return out;
}

}  // namespace cubical
