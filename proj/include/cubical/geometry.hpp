// Universal-cover balls, combinatorial geodesics, halfspaces, cubical convex
// hulls, and the finite dual complex of a halfspace poset.
#ifndef CUBICAL_GEOMETRY_HPP
#define CUBICAL_GEOMETRY_HPP

#include <stdexcept>

#include "cubical/cubical_map.hpp"

namespace cubical {

/// Raised when a ball is too small to answer a query about the infinite
/// cover it approximates.  Callers can retry with a larger radius.
struct IncompleteBallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A radius-r piece of the universal cover of a based NPC complex: the full
/// subcomplex on all cover vertices within distance r of the lift of the
/// base vertex.  The projection restricts the covering map; links are
/// complete at depth <= r-2 but may be truncated on the two outermost
/// layers.
struct CoverBall {
    CubicalMap projection;  // ball onto the base complex
    VertexId center = 0;    // also the ball's basepoint
    unsigned radius = 0;
    std::vector<unsigned> depth;  // distance to the center, per ball vertex

    const CubeComplex& complex() const { return projection.domain(); }
    ComplexPtr complex_ptr() const { return projection.domain_ptr(); }
};

/// Develops the ball of the given radius around a lift of q.  Requires a
/// connected NPC base.  `cell_budget` bounds the intermediate development
/// (std::runtime_error beyond it); the default is far above desk scale.
CoverBall universal_cover_ball(ComplexPtr y, VertexId q, unsigned radius,
                               std::size_t cell_budget = 500000);

inline constexpr std::uint32_t kUnreachable = 0xFFFFFFFFu;

/// Edge-path distances from u to every vertex (kUnreachable where none).
std::vector<std::uint32_t> distances_from(const CubeComplex& x, VertexId u);

/// Every shortest edge path from u to v in x's 1-skeleton, ordered by the
/// key sequence of their edges.  Throws std::invalid_argument when v is not
/// reachable from u.
std::vector<std::vector<DirectedEdge>> combinatorial_geodesics(const CubeComplex& x, VertexId u,
                                                               VertexId v);

/// Geodesics certified against the infinite cover: valid whenever
/// d(u,v) + depth(u) + depth(v) <= 2 * radius, which forces every cover
/// geodesic between u and v to stay inside the ball.  Throws
/// IncompleteBallError otherwise.
std::vector<std::vector<DirectedEdge>> combinatorial_geodesics(const CoverBall& b, VertexId u,
                                                               VertexId v);

/// A subcomplex of an ambient complex: sorted ambient cell ids plus the
/// induced complex (cell k of `complex` is the k-th listed ambient id).
struct Subcomplex {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
    std::vector<CubeId> cubes;
    CubeComplex complex;
};

/// Edges with both endpoints, and cubes with all corners, inside the given
/// vertex set.  The ambient basepoint carries over when it is in the set.
Subcomplex full_subcomplex(const CubeComplex& x, std::vector<VertexId> vertices);

/// Vertex sets of the two components left by deleting the hyperplane's dual
/// edges.  The first side contains the smaller minimal vertex.  Throws
/// std::invalid_argument unless exactly two components result (the CAT(0)
/// separation property; fails on complexes with essential loops).
std::pair<std::vector<VertexId>, std::vector<VertexId>> hyperplane_sides(const CubeComplex& x,
                                                                         const Hyperplane& h);

/// Smallest cubically convex subcomplex containing the seeds: the full
/// subcomplex on the intersection of every halfspace containing all seeds.
/// Meaningful when x is simply connected and NPC (a cover ball or a grid).
Subcomplex convex_hull(const CubeComplex& x, const std::vector<VertexId>& seeds);

struct Halfspace {
    std::uint32_t hyperplane = 0;      // index into the poset's hyperplane list
    int side = 0;                      // 0 or 1, as ordered by hyperplane_sides
    std::vector<VertexId> vertices;    // sorted
};

/// Both orientations of every hyperplane separating a vertex set, with the
/// inclusion order of the halfspaces as vertex sets.  Entries 2k and 2k+1
/// are the two sides of the k-th listed hyperplane.
struct HalfspacePoset {
    std::vector<Halfspace> halfspaces;
    std::vector<std::uint32_t> hyperplane_ids;     // ambient hyperplane id per pair
    std::vector<std::vector<bool>> leq;            // leq[i][j]: halfspace i inside j

    std::size_t complement(std::size_t i) const { return i ^ 1; }
};

HalfspacePoset halfspaces_meeting(const CubeComplex& x, const std::vector<VertexId>& s);

/// The dual complex of a halfspace poset: one vertex per orientation (one
/// side of every hyperplane, closed upward under inclusion), edges between
/// orientations differing on a single hyperplane, cubes wherever a cube's
/// full vertex set is present.
struct SageevDual {
    CubeComplex complex;
    /// Per dual vertex: the chosen halfspace index for each hyperplane pair.
    std::vector<std::vector<std::uint32_t>> orientations;
};

SageevDual sageev_dual(const HalfspacePoset& p);

/// The unique ambient vertex on the orientation's side of every poset
/// hyperplane and on q's side of every other hyperplane.  Throws
/// std::invalid_argument when no unique such vertex exists.
VertexId dual_to_ambient(const CubeComplex& x, const HalfspacePoset& p,
                         const std::vector<std::uint32_t>& orientation, VertexId q);

}  // namespace cubical

#endif
