// Fundamental-group machinery on top of completions: cubical words and
// presentations, reduced forms through cover balls, and the decision
// procedures for membership, powers, normality, and finite index.
#ifndef CUBICAL_GROUP_ALGORITHMS_HPP
#define CUBICAL_GROUP_ALGORITHMS_HPP

#include <map>
#include <optional>

#include "cubical/completion.hpp"
#include "cubical/geometry.hpp"

namespace cubical {

/// An edge path: a start vertex and endpoint-compatible directed edges.
/// Closed words based at the basepoint represent fundamental group elements.
struct CubicalWord {
    VertexId base = 0;
    std::vector<DirectedEdge> letters;
};

/// Checks base and letters against x and returns the path's endpoint.
/// Throws std::invalid_argument when the letters do not chain.
VertexId word_endpoint(const CubeComplex& x, const CubicalWord& w);

/// The same path backwards, based at the original endpoint.
CubicalWord inverse_word(const CubeComplex& x, const CubicalWord& w);

/// BFS tree of the 1-skeleton from the basepoint, tie-broken toward lower
/// edge keys.  Requires a connected, based complex.
struct SpanningTree {
    VertexId root = 0;
    std::vector<EdgeId> edges;  // sorted tree edge ids
    /// Per vertex, the germ leading one step toward the root (none at it).
    std::vector<std::optional<DirectedEdge>> to_parent;
};

SpanningTree spanning_tree(const CubeComplex& x);
SpanningTree spanning_tree(const CubeComplex& x, VertexId root);

/// Generators and relators for the fundamental group at the basepoint: one
/// generator per edge, one length-1 relator per tree edge, and one boundary
/// word per square.
struct CubicalPresentation {
    SpanningTree tree;
    std::vector<EdgeId> generators;
    std::vector<CubicalWord> relators;
};

CubicalPresentation cubical_presentation(const CubeComplex& x, const SpanningTree& tree);

/// Closes an arbitrary letter sequence into a based word by splicing tree
/// paths at every discontinuity and at both ends.
CubicalWord word_to_cubical(const CubeComplex& x, const SpanningTree& tree,
                            const std::vector<DirectedEdge>& letters);

/// Shared environment for the procedures below: one base complex with a
/// marked vertex, plus a cache of the cover balls developed so far.
class GroupContext {
public:
    GroupContext(ComplexPtr base, VertexId q);

    const CubeComplex& base() const { return *base_; }
    ComplexPtr base_ptr() const { return base_; }
    VertexId basepoint() const { return q_; }

    /// The cover ball around a lift of `center`, developed on first use.
    const CoverBall& ball(VertexId center, unsigned radius);

    /// Cap on intermediate development size, forwarded to the ball builder.
    std::size_t ball_cell_budget = 500000;

private:
    ComplexPtr base_;
    VertexId q_;
    std::map<std::pair<VertexId, unsigned>, CoverBall> balls_;
};

/// Every geodesic word equal to w rel endpoints, in letter-key order.
/// Computed in a ball of radius |w| + 1 around w's start.
std::vector<CubicalWord> reduced_forms(GroupContext& ctx, const CubicalWord& w);

/// Whether two words from the same start vertex reach the same point of the
/// cover (equality in the fundamental groupoid).
bool words_equal(GroupContext& ctx, const CubicalWord& w1, const CubicalWord& w2);

/// Whether the closed word g lies in the subgroup completed by z.  Lifts a
/// geodesic representative through z's local isometry; requires z finished.
bool membership(GroupContext& ctx, const CompletionResult& z, const CubicalWord& g);

/// Least k with g^k in the subgroup, if one exists with k at most the vertex
/// count of z's domain.  Walks the basepoint orbit one geodesic segment per
/// power; leaving the domain means no power ever returns.
std::optional<std::uint32_t> power_membership(GroupContext& ctx, const CompletionResult& z,
                                              const CubicalWord& g);

/// The part of z's domain traversed by some geodesic representative of some
/// generator, as sorted domain cell ids.  The basepoint always belongs.
struct CoreGraph {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
};

CoreGraph core_graph(GroupContext& ctx, const CompletionResult& z,
                     const std::vector<CubicalWord>& generators);

enum class Decision { Yes, No, Undecided };

/// Whether conjugation by g preserves the subgroup completed by z (given by
/// the words in `generators`).  Both generating sets, the original and the
/// conjugated one, are replaced by geodesic representatives and recompleted;
/// the completion of a geodesic bouquet depends only on the subgroup and the
/// basepoint, so comparing the two canonical forms decides equality of the
/// subgroups.  The verdict is cross-checked against direct membership of the
/// conjugates in z; Undecided when either recompletion exhausts its budget.
Decision normalized_by(GroupContext& ctx, const CompletionResult& z,
                       const std::vector<CubicalWord>& generators, const CubicalWord& g,
                       const CompletionOptions& options = {});

/// normalized_by over both orientations of every non-tree edge loop.
Decision is_normal(GroupContext& ctx, const CompletionResult& z,
                   const std::vector<CubicalWord>& generators,
                   const CompletionOptions& options = {});

/// The subgroup's index when z covers the base (fiber size) or when coset
/// enumeration closes within `coset_budget` cosets; nullopt when the budget
/// runs out (infinite or merely large).  Disabling the covering shortcut
/// forces the enumeration path (the two always agree; tests check that).
std::optional<std::uint64_t> finite_index(GroupContext& ctx, const CompletionResult& z,
                                          std::size_t coset_budget,
                                          bool covering_shortcut = true);

}  // namespace cubical

#endif
