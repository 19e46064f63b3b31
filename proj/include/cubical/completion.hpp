// Completion of a subgroup representation into a local isometry: fold,
// cube-identification and cube-attachment moves, the budgeted completion
// loop, and canonical forms of finished completions.
#ifndef CUBICAL_COMPLETION_HPP
#define CUBICAL_COMPLETION_HPP

#include <cstdint>
#include <random>
#include <string>

#include "cubical/cubical_map.hpp"

namespace cubical {

/// Cell budget (total vertices + edges + cubes of the evolving domain) used
/// when a caller does not pick one.
inline constexpr std::size_t kDefaultBudget = 4096;

/// Two distinct germs at one vertex with equal images; folding identifies
/// the two edge cells (respecting the germ directions) and their far
/// endpoints.
struct FoldSite {
    VertexId vertex = 0;
    DirectedEdge germ1, germ2;
};

/// Two distinct cubes with the same corner and edge assignments up to model
/// symmetry; identification keeps the smaller id.
struct IdentifySite {
    CubeId cube1 = 0, cube2 = 0;
};

using Move = std::variant<FoldSite, IdentifySite, AttachSite>;

enum class CompletionStatus { Finished, BudgetExceeded };

struct CompletionResult {
    CubicalMap map;  // evolving domain over the fixed codomain
    CompletionStatus status = CompletionStatus::Finished;
    std::vector<Move> history;
    std::size_t budget_used = 0;  // final cell count of the domain
};

struct CompletionOptions {
    std::size_t budget = kDefaultBudget;
    /// When set, legal moves are applied in a seeded random order instead of
    /// the canonical least-site order.  Finished results must agree with the
    /// canonical schedule up to canonical form.
    std::optional<std::uint64_t> schedule_seed;
};

/// Old-cell to new-cell maps of a quotient move, for callers that track how
/// cells flow through a completion.
struct QuotientMaps {
    std::vector<VertexId> vertex_map;
    std::vector<DirectedEdge> edge_map;  // old edge traversed forward
    std::vector<CubeId> cube_map;
};

/// Wedge of subdivided circles at a fresh basepoint, one petal per word,
/// mapped letter-by-letter.  Every word must be a closed edge path at q.
CubicalMap bouquet_from_words(ComplexPtr y, VertexId q,
                              const std::vector<std::vector<DirectedEdge>>& words);

std::optional<FoldSite> find_fold(const CubicalMap& f);
CubicalMap fold(const CubicalMap& f, const FoldSite& site, QuotientMaps* quotient = nullptr);

std::optional<IdentifySite> find_cube_identification(const CubicalMap& f);
CubicalMap identify_cubes(const CubicalMap& f, const IdentifySite& site,
                          QuotientMaps* quotient = nullptr);

/// Exhaustive site enumerations in canonical order; the find_* functions
/// above return the respective heads.
std::vector<FoldSite> fold_sites(const CubicalMap& f);
std::vector<IdentifySite> identification_sites(const CubicalMap& f);
std::vector<AttachSite> attachment_sites(const CubicalMap& f);

/// Least missing-simplex witness; meaningful when f is an immersion with no
/// pending identifications (otherwise results may be stale).
std::optional<AttachSite> find_cube_attachment(const CubicalMap& f);

/// Glues a fresh cube of dimension |site.germs| along the witnessing vertex
/// and germs.  Cells beyond the site are reused when they lift uniquely
/// through the map (an edge cell is glued to at most one model edge per
/// attachment); everything else is created fresh and mapped onto the
/// corresponding cells of the target cube.
CubicalMap attach_cube(const CubicalMap& f, const AttachSite& site);

/// Runs rounds of [all folds; all identifications; all attachments] until no
/// move applies or the cell budget is exceeded.  Attachment sites are
/// snapshotted per round and re-checked for staleness before each gluing.
CompletionResult complete(const CubicalMap& f, const CompletionOptions& options = {});

/// Basepoint-rooted relabeling of an immersion with connected, based domain:
/// vertices in breadth-first discovery order with germs explored by image
/// key, edges oriented by first traversal, cubes sorted by relabeled data.
/// Maps with isomorphic labeled domains agree cell-for-cell after this.
CubicalMap canonicalize(const CubicalMap& f);

/// The relabeling above for a finished completion; two finished completions
/// of the same subgroup become equal.  Throws unless r finished.
CubicalMap canonicalize(const CompletionResult& r);

/// Byte serialisation of a map's domain and cell assignments; equal strings
/// mean equal labeled complexes over the same codomain.
std::string canonical_signature(const CubicalMap& f);

}  // namespace cubical

#endif
