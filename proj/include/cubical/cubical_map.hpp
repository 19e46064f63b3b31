// Cubical maps between complexes: cell assignments with model-cube symmetry
// reconciliation, induced link maps, and the immersion / local isometry /
// covering predicates.
#ifndef CUBICAL_CUBICAL_MAP_HPP
#define CUBICAL_CUBICAL_MAP_HPP

#include <memory>
#include <optional>

#include "cubical/cube_complex.hpp"

namespace cubical {

using ComplexPtr = std::shared_ptr<const CubeComplex>;

/// Raw cell assignments before validation.  Missing entries (nullopt) are
/// reported as violations; there is deliberately no way to write a
/// dimension-collapsing map (an edge must go to a directed edge).
struct MapData {
    std::vector<VertexId> vertex_map;
    std::vector<std::optional<DirectedEdge>> edge_map;
    std::vector<std::optional<CubeId>> cube_map;
};

struct CubeAssignment {
    CubeId target = 0;
    CubeSymmetry sym;  // model coordinates of the target cube per domain coordinates
};

/// A validated cubical map.  For each domain cube the stored symmetry is the
/// lexicographically least one reconciling the corner and edge assignments
/// with the target cube, so equal maps have equal representations.
class CubicalMap {
public:
    static std::variant<CubicalMap, std::vector<Violation>> validate(ComplexPtr domain,
                                                                     ComplexPtr codomain,
                                                                     MapData data);
    static CubicalMap from_data(ComplexPtr domain, ComplexPtr codomain, MapData data);

    const CubeComplex& domain() const { return *domain_; }
    const CubeComplex& codomain() const { return *codomain_; }
    ComplexPtr domain_ptr() const { return domain_; }
    ComplexPtr codomain_ptr() const { return codomain_; }

    VertexId vertex_image(VertexId v) const { return vertex_map_[v]; }
    DirectedEdge edge_image(EdgeId e) const { return edge_map_[e]; }
    const CubeAssignment& cube_image(CubeId c) const { return cube_map_[c]; }

    /// Image of a directed edge; germs at v map to germs at the image of v.
    DirectedEdge image(const DirectedEdge& d) const {
        return d.forward ? edge_map_[d.edge] : edge_map_[d.edge].reversed();
    }

    const std::vector<VertexId>& vertex_map() const { return vertex_map_; }
    const std::vector<DirectedEdge>& edge_map() const { return edge_map_; }
    const std::vector<CubeAssignment>& cube_map() const { return cube_map_; }

    /// True when both complexes carry basepoints and the map respects them.
    bool basepoint_respecting() const;

private:
    CubicalMap() = default;

    ComplexPtr domain_;
    ComplexPtr codomain_;
    std::vector<VertexId> vertex_map_;
    std::vector<DirectedEdge> edge_map_;
    std::vector<CubeAssignment> cube_map_;
};

/// Finds the lexicographically least model symmetry under which `target`'s
/// data equals `pushed` (a source cube's data with all cells replaced by
/// their images), or nullopt if none does.
std::optional<CubeSymmetry> reconcile_cube(const Cube& pushed, const Cube& target);

/// outer after inner.  The two maps must share the middle complex instance.
CubicalMap compose(const CubicalMap& outer, const CubicalMap& inner);

/// The simplicial map lk(v) -> lk(f(v)) induced at one vertex.
struct LinkMap {
    LinkComplex domain_link;
    LinkComplex codomain_link;
    /// For each domain germ index, the codomain germ index of its image.
    std::vector<std::uint32_t> germ_image;
};

LinkMap induced_link_map(const CubicalMap& f, VertexId v);

struct ImmersionWitness {
    VertexId vertex = 0;
    DirectedEdge germ1, germ2;  // distinct germs with equal images
};

struct ImmersionResult {
    bool immersion = true;
    std::optional<ImmersionWitness> witness;
};

/// Injectivity of every induced link map on germs.  A witness is exactly a
/// fold site.
ImmersionResult is_immersion(const CubicalMap& f);

/// A place where a cube is missing: the germs at `vertex` map onto the germ
/// set of a simplex of the codomain link (witnessed by `target_cube` at
/// `target_corner`) but span no simplex in the domain link.  Witnesses are
/// ordered so "least" is well-defined across a whole map.
struct AttachSite {
    VertexId vertex = 0;
    std::vector<DirectedEdge> germs;  // sorted by key
    CubeId target_cube = 0;
    std::uint32_t target_corner = 0;

    friend bool operator<(const AttachSite& a, const AttachSite& b);
};

/// Least missing-simplex witness over all vertices, or nullopt when every
/// induced link image is a full subcomplex.  Meaningful for immersions.
std::optional<AttachSite> find_missing_simplex(const CubicalMap& f);

struct LocalIsometryResult {
    bool local_isometry = true;
    std::optional<ImmersionWitness> fold_witness;    // set when not an immersion
    std::optional<AttachSite> missing;               // set when image not full
};

/// Immersion plus fullness of every link image.
LocalIsometryResult is_local_isometry(const CubicalMap& f);

struct CoveringResult {
    bool covering = false;
    std::size_t fiber = 0;  // vertices over the codomain basepoint
};

/// Surjectivity on cells plus link-map isomorphism at every vertex.  Requires
/// a connected codomain with a basepoint (the fiber is counted over it).
CoveringResult is_covering(const CubicalMap& f);

}  // namespace cubical

#endif
