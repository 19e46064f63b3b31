// Independent brute-force reference implementations used by tests only.
// Everything here re-derives its answers from first principles (classical
// folding, integer lattices, exhaustive closure) so the main modules can be
// checked against code that shares none of their machinery.
#ifndef CUBICAL_ORACLES_HPP
#define CUBICAL_ORACLES_HPP

#include <optional>

#include "cubical/cube_complex.hpp"

namespace cubical::oracles {

/// A word over a rose or torus alphabet: nonzero letters, +k for the k-th
/// generator and -k for its inverse (1-based).
using Word = std::vector<int>;

/// A folded based labeled graph over a free alphabet.
struct StallingsGraph {
    struct Arc {
        std::uint32_t tail = 0;
        std::uint32_t head = 0;
        std::uint32_t letter = 0;
    };
    std::size_t alphabet = 0;
    std::uint32_t basepoint = 0;
    std::uint32_t num_vertices = 0;
    std::vector<Arc> arcs;  // sorted, no duplicates after folding
};

/// Textbook folding of the wedge of the given words.
StallingsGraph classic_fold(std::size_t alphabet, const std::vector<Word>& words);

/// Canonical form for comparisons: vertices renumbered by BFS from the
/// basepoint (arcs taken by letter, forward before backward), arcs sorted.
StallingsGraph canonical_form(const StallingsGraph& g);

/// Whether the word traces a closed path at the basepoint.
bool member(const StallingsGraph& g, const Word& w);

/// Vertex count when the graph covers the rose (finite index); nothing
/// otherwise.
std::optional<std::uint64_t> rose_index(const StallingsGraph& g);

/// Least k <= limit whose k-th power is a member, walking the basepoint
/// orbit; falling off the graph ends the search.
std::optional<std::uint32_t> power(const StallingsGraph& g, const Word& w, std::uint32_t limit);

/// Whether conjugation by every single letter preserves membership of every
/// given generator (normality of the subgroup the words generate).
bool normal(const StallingsGraph& g, std::size_t alphabet, const std::vector<Word>& words);

/// The exponent lattice of a subgroup of Z^rank, held as an integer
/// row-echelon basis.
struct Lattice {
    std::size_t rank = 0;
    std::vector<std::vector<long long>> rows;  // echelon, positive pivots
};

Lattice lattice_oracle(std::size_t rank, const std::vector<Word>& words);

bool member(const Lattice& l, const Word& w);

/// |determinant| of the basis when full rank (the subgroup index); nothing
/// when the rank is deficient (infinite index).
std::optional<std::uint64_t> index(const Lattice& l);

/// Least k <= limit with k times the exponent vector in the lattice.
std::optional<std::uint32_t> power(const Lattice& l, const Word& w, std::uint32_t limit);

/// Cells of the geodesic closure of a seed set: grow the vertex set with
/// every vertex between two members (additive distances along some shortest
/// path) until stable, then take every edge and cube inside.
struct Hull {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
    std::vector<CubeId> cubes;
};

Hull brute_hull(const CubeComplex& x, const std::vector<VertexId>& seeds);

}  // namespace cubical::oracles

#endif
