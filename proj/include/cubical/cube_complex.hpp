// Core data model for finite cube complexes: cells, links, the Gromov flag
// test and hyperplanes.  Complexes are immutable once built; every mutating
// algorithm elsewhere in the library produces a fresh complex.
#ifndef CUBICAL_CUBE_COMPLEX_HPP
#define CUBICAL_CUBE_COMPLEX_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cubical {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using CubeId = std::uint32_t;

/// Sentinels for "no cell"; never valid ids (complexes are far smaller).
inline constexpr VertexId kNoVertex = 0xFFFFFFFFu;
inline constexpr EdgeId kNoEdge = 0xFFFFFFFFu;
inline constexpr CubeId kNoCube = 0xFFFFFFFFu;

/// An edge cell together with a direction of traversal.
struct DirectedEdge {
    EdgeId edge = 0;
    bool forward = true;

    DirectedEdge() = default;
    DirectedEdge(EdgeId e, bool f) : edge(e), forward(f) {}

    DirectedEdge reversed() const { return {edge, !forward}; }

    /// Total order used everywhere a canonical germ order is needed:
    /// by edge id, forward germ before backward.
    std::uint64_t key() const { return (std::uint64_t(edge) << 1) | (forward ? 0u : 1u); }

    friend bool operator==(const DirectedEdge& a, const DirectedEdge& b) {
        return a.edge == b.edge && a.forward == b.forward;
    }
    friend bool operator!=(const DirectedEdge& a, const DirectedEdge& b) { return !(a == b); }
    friend bool operator<(const DirectedEdge& a, const DirectedEdge& b) { return a.key() < b.key(); }
};

struct Edge {
    VertexId src = 0;
    VertexId dst = 0;
};

/// An n-cube (n >= 2) stored by its characteristic maps: one vertex per model
/// corner and one directed edge per model edge.  Corners are indexed by the
/// bitmask of model coordinates; the model edge along `axis` starting at a
/// base corner with that bit clear runs from the star=0 to the star=1 corner.
/// Nothing requires the corner map to be injective, so non-embedded cubes
/// (which folding routinely creates) are representable.
struct Cube {
    int dim = 2;
    std::vector<VertexId> corners;     // size 1 << dim
    std::vector<DirectedEdge> edges;   // size dim << (dim - 1)

    std::size_t corner_count() const { return std::size_t(1) << dim; }
    std::size_t edge_count() const { return std::size_t(dim) << (dim - 1); }

    /// Flat index of the model edge along `axis` whose base corner (bit of
    /// `axis` cleared) is `base`.
    static std::size_t edge_index(int dim, int axis, unsigned base);

    /// Base corner bitmask of the model edge with flat index `idx`.
    static std::pair<int, unsigned> edge_axis_base(int dim, std::size_t idx);
};

/// A symmetry of the model n-cube: permute axes, then flip a subset.  The
/// action sends corner m to the corner whose perm[a] bit is bit a of m xor
/// bit a of flip.
struct CubeSymmetry {
    std::vector<std::uint8_t> perm;  // image axis of each axis
    unsigned flip = 0;               // bit a set: axis a reverses

    unsigned apply_corner(unsigned m) const;
    /// Image of the model edge (axis, base); `reversed` reports whether the
    /// star direction flips.
    void apply_edge(int axis, unsigned base, int& out_axis, unsigned& out_base,
                    bool& reversed) const;

    static CubeSymmetry identity(int dim);
    /// All 2^n n! symmetries in a fixed deterministic order (lexicographic in
    /// (perm, flip)).
    static const std::vector<CubeSymmetry>& all(int dim);
};

/// Cube data re-parametrised by a model symmetry: the same geometric cube
/// read off in different model coordinates.
Cube transform_cube(const Cube& c, const CubeSymmetry& s);

/// Lexicographically least serialisation of the cube data over all model
/// symmetries; equal keys mean equal cubes up to symmetry.
std::vector<std::uint32_t> canonical_cube_key(const Cube& c);

struct Violation {
    std::string cell;       // offending cell, e.g. "edge 3" or "cube 1 edge *01"
    std::string invariant;  // what failed
};

struct ComplexData {
    std::uint32_t num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<Cube> cubes;
    std::optional<VertexId> basepoint;
};

/// A finite cube complex.  Cell ids are dense integers per kind, stable for
/// the lifetime of the complex; quotients and other rewrites build new
/// complexes with re-compacted ids.
class CubeComplex {
public:
    /// The empty complex.
    CubeComplex() = default;

    /// Checks the cell data invariants: ids in range, directed-edge endpoints
    /// matching the corner maps, and every codimension-1 face of a cube of
    /// dimension >= 3 present (up to model symmetry) as a declared cube.
    static std::variant<CubeComplex, std::vector<Violation>> validate(ComplexData data);

    /// validate(), throwing std::invalid_argument on any violation.
    static CubeComplex from_data(ComplexData data);

    std::uint32_t num_vertices() const { return num_vertices_; }
    std::uint32_t num_edges() const { return (std::uint32_t)edges_.size(); }
    std::uint32_t num_cubes() const { return (std::uint32_t)cubes_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Cube>& cubes() const { return cubes_; }
    const Cube& cube(CubeId c) const { return cubes_[c]; }
    std::optional<VertexId> basepoint() const { return basepoint_; }

    VertexId source(const DirectedEdge& d) const { return d.forward ? edges_[d.edge].src : edges_[d.edge].dst; }
    VertexId target(const DirectedEdge& d) const { return d.forward ? edges_[d.edge].dst : edges_[d.edge].src; }

    /// Germs at v: every directed edge with source v, sorted by key().  Loop
    /// edges contribute both directions.
    const std::vector<DirectedEdge>& germs(VertexId v) const { return germs_[v]; }

    /// Ids of declared cubes whose data equals `c` up to model symmetry.
    std::vector<CubeId> cubes_matching(const Cube& c) const;

    /// Total cell count (vertices + edges + cubes); the completion budget
    /// is measured in these units.
    std::size_t cell_count() const { return std::size_t(num_vertices_) + edges_.size() + cubes_.size(); }

    int max_dim() const;

private:
    void build_caches();

    std::uint32_t num_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<Cube> cubes_;
    std::optional<VertexId> basepoint_;

    std::vector<std::vector<DirectedEdge>> germs_;
    std::map<std::vector<std::uint32_t>, std::vector<CubeId>> cube_index_;
};

/// Corner/edge data of the codimension-1 face of `c` with `axis` frozen to
/// `side`; a (dim-1)-cube in the same complex.
Cube cube_face(const Cube& c, int axis, int side);

/// One simplex of a vertex link: the germs read off at one corner of one
/// cube, tagged with that witness.  `germs` are indices into the link's germ
/// list, sorted; a corner whose axes repeat a germ is recorded as-is and
/// makes the link non-simplicial.
struct LinkSimplex {
    std::vector<std::uint32_t> germs;
    CubeId cube = 0;
    std::uint32_t corner = 0;
};

/// The link of a vertex: germ vertices plus one (n-1)-simplex per corner of
/// each n-cube at the vertex.  `simplicial` records both no-repeated-vertex
/// and no-duplicate-simplex (two witnesses of equal dimension with the same
/// germ set), which is exactly what cube identification restores.
struct LinkComplex {
    VertexId center = 0;
    std::vector<DirectedEdge> germs;
    std::vector<LinkSimplex> simplices;
    bool simplicial = true;
};

LinkComplex link(const CubeComplex& x, VertexId v);

struct FlagResult {
    bool flag = true;
    /// On failure, a minimal non-spanning clique (every proper subset spans a
    /// recorded simplex), as germ indices into the link.
    std::vector<std::uint32_t> witness;
};

/// Gromov condition on one link: every clique of germs spans a recorded
/// simplex.  Throws std::invalid_argument on a non-simplicial link.
FlagResult is_flag(const LinkComplex& l);

struct NpcVertexReport {
    VertexId vertex = 0;
    bool simplicial = true;
    bool flag = true;
    std::vector<DirectedEdge> witness;  // germs of a minimal non-spanning clique
};

struct NpcReport {
    bool npc = true;
    std::vector<NpcVertexReport> vertices;  // one entry per vertex
};

/// Non-positive curvature: every vertex link simplicial and flag.
NpcReport check_npc(const CubeComplex& x);

/// A hyperplane: one class of the equivalence generated by "opposite edges
/// of a common square".  Classes partition the edges; ids are assigned by
/// least dual edge.
struct Hyperplane {
    std::uint32_t id = 0;
    std::vector<EdgeId> dual_edges;  // sorted
};

std::vector<Hyperplane> hyperplanes(const CubeComplex& x);

}  // namespace cubical

#endif
