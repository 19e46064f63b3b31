// Shared builders for the test suite: standard small complexes (roses, tori,
// one-vertex square complexes, grids) plus helpers for turning signed-integer
// words into cubical words and completions.
#ifndef CUBICAL_TESTS_FIXTURES_HPP
#define CUBICAL_TESTS_FIXTURES_HPP

#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cubical/completion.hpp"
#include "cubical/cube_complex.hpp"
#include "cubical/group_algorithms.hpp"
#include "cubical/io.hpp"

namespace fixtures {

using namespace cubical;

inline ComplexPtr build(ComplexData data) {
    auto v = CubeComplex::validate(std::move(data));
    if (auto* violations = std::get_if<std::vector<Violation>>(&v)) {
        std::string msg = "fixture is invalid:";
        for (const auto& viol : *violations) msg += " [" + viol.cell + ": " + viol.invariant + "]";
        throw std::logic_error(msg);
    }
    return std::make_shared<const CubeComplex>(std::get<CubeComplex>(std::move(v)));
}

/// Square at a single vertex whose parallel edge pairs are the loops i and j.
inline Cube loop_square(EdgeId i, EdgeId j) {
    Cube s;
    s.dim = 2;
    s.corners.assign(4, 0);
    s.edges.assign(4, DirectedEdge{});
    s.edges[Cube::edge_index(2, 0, 0b00)] = {i, true};
    s.edges[Cube::edge_index(2, 0, 0b10)] = {i, true};
    s.edges[Cube::edge_index(2, 1, 0b00)] = {j, true};
    s.edges[Cube::edge_index(2, 1, 0b01)] = {j, true};
    return s;
}

/// One vertex, n loops, no squares.
inline ComplexPtr rose(int n) {
    ComplexData d;
    d.num_vertices = 1;
    for (int i = 0; i < n; ++i) d.edges.push_back({0, 0});
    d.basepoint = 0;
    return build(std::move(d));
}

/// One vertex, loops for the listed generators, one square per commuting
/// pair.  The pair graph must be triangle-free for the result to be NPC.
inline ComplexPtr salvetti(int n, const std::vector<std::pair<int, int>>& commuting) {
    ComplexData d;
    d.num_vertices = 1;
    for (int i = 0; i < n; ++i) d.edges.push_back({0, 0});
    for (auto [i, j] : commuting) d.cubes.push_back(loop_square(EdgeId(i), EdgeId(j)));
    d.basepoint = 0;
    return build(std::move(d));
}

inline ComplexPtr torus() { return salvetti(2, {{0, 1}}); }

/// The 3-torus: three loops, all three squares, and the solid 3-cube.
inline ComplexPtr torus3() {
    ComplexData d;
    d.num_vertices = 1;
    for (int i = 0; i < 3; ++i) d.edges.push_back({0, 0});
    d.cubes.push_back(loop_square(0, 1));
    d.cubes.push_back(loop_square(0, 2));
    d.cubes.push_back(loop_square(1, 2));
    Cube c;
    c.dim = 3;
    c.corners.assign(8, 0);
    c.edges.assign(12, DirectedEdge{});
    for (int axis = 0; axis < 3; ++axis)
        for (unsigned base = 0; base < 8; ++base)
            if (!(base & (1u << axis)))
                c.edges[Cube::edge_index(3, axis, base)] = {EdgeId(axis), true};
    d.cubes.push_back(std::move(c));
    d.basepoint = 0;
    return build(std::move(d));
}

/// Axis-aligned box grid on nx * ny * nz vertices with all unit squares and
/// unit 3-cubes.  Simply connected and NPC; the basepoint is the origin.
inline VertexId grid_id(int nx, int ny, int nz, int i, int j, int k) {
    (void)nx;
    return VertexId((i * ny + j) * nz + k);
}

inline ComplexPtr grid(int nx, int ny, int nz) {
    ComplexData d;
    d.num_vertices = std::uint32_t(nx * ny * nz);
    int dims[3] = {nx, ny, nz};
    int strides[3] = {ny * nz, nz, 1};
    // edge_at[axis][v] is the edge leaving v along axis, if any
    std::vector<std::vector<EdgeId>> edge_at(3, std::vector<EdgeId>(d.num_vertices, kNoEdge));
    for (int axis = 0; axis < 3; ++axis)
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                for (int k = 0; k < nz; ++k) {
                    int coord[3] = {i, j, k};
                    if (coord[axis] + 1 >= dims[axis]) continue;
                    VertexId v = grid_id(nx, ny, nz, i, j, k);
                    edge_at[axis][v] = EdgeId(d.edges.size());
                    d.edges.push_back({v, VertexId(v + strides[axis])});
                }
    for (int p = 0; p < 3; ++p)
        for (int q = p + 1; q < 3; ++q)
            for (VertexId v = 0; v < d.num_vertices; ++v) {
                if (edge_at[p][v] == kNoEdge || edge_at[q][v] == kNoEdge) continue;
                VertexId vp = v + strides[p], vq = v + strides[q];
                if (edge_at[q][vp] == kNoEdge || edge_at[p][vq] == kNoEdge) continue;
                Cube s;
                s.dim = 2;
                s.corners = {v, vp, vq, VertexId(vp + strides[q])};
                s.edges.assign(4, DirectedEdge{});
                s.edges[Cube::edge_index(2, 0, 0b00)] = {edge_at[p][v], true};
                s.edges[Cube::edge_index(2, 0, 0b10)] = {edge_at[p][vq], true};
                s.edges[Cube::edge_index(2, 1, 0b00)] = {edge_at[q][v], true};
                s.edges[Cube::edge_index(2, 1, 0b01)] = {edge_at[q][vp], true};
                d.cubes.push_back(std::move(s));
            }
    for (VertexId v = 0; v < d.num_vertices; ++v) {
        bool room = true;
        for (int axis = 0; axis < 3 && room; ++axis)
            if (edge_at[axis][v] == kNoEdge) room = false;
        if (!room) continue;
        Cube c;
        c.dim = 3;
        c.corners.assign(8, 0);
        c.edges.assign(12, DirectedEdge{});
        bool complete_box = true;
        for (unsigned m = 0; m < 8; ++m) {
            VertexId corner = v;
            for (int axis = 0; axis < 3; ++axis)
                if (m & (1u << axis)) corner += strides[axis];
            c.corners[m] = corner;
        }
        for (int axis = 0; axis < 3 && complete_box; ++axis)
            for (unsigned base = 0; base < 8; ++base) {
                if (base & (1u << axis)) continue;
                EdgeId e = edge_at[axis][c.corners[base]];
                if (e == kNoEdge) {
                    complete_box = false;
                    break;
                }
                c.edges[Cube::edge_index(3, axis, base)] = {e, true};
            }
        if (complete_box) d.cubes.push_back(std::move(c));
    }
    d.basepoint = 0;
    return build(std::move(d));
}

/// Three squares sharing a corner with no 3-cube filling: the standard
/// failure of the flag condition at the shared vertex.
inline ComplexPtr corner_squares() {
    ComplexData d;
    d.num_vertices = 7;  // origin, 3 axis neighbours, 3 diagonal corners
    // edges 0,1,2 leave the origin along the axes
    d.edges.push_back({0, 1});
    d.edges.push_back({0, 2});
    d.edges.push_back({0, 3});
    auto side = [&](VertexId from, VertexId to) {
        d.edges.push_back({from, to});
        return EdgeId(d.edges.size() - 1);
    };
    EdgeId e12 = side(1, 4), e21 = side(2, 4);  // square on axes 0,1 closes at 4
    EdgeId e13 = side(1, 5), e31 = side(3, 5);
    EdgeId e23 = side(2, 6), e32 = side(3, 6);
    auto square = [&](EdgeId a, EdgeId b, EdgeId a_far, EdgeId b_far, VertexId v_a, VertexId v_b,
                      VertexId far) {
        Cube s;
        s.dim = 2;
        s.corners = {0, v_a, v_b, far};
        s.edges.assign(4, DirectedEdge{});
        s.edges[Cube::edge_index(2, 0, 0b00)] = {a, true};
        s.edges[Cube::edge_index(2, 0, 0b10)] = {a_far, true};
        s.edges[Cube::edge_index(2, 1, 0b00)] = {b, true};
        s.edges[Cube::edge_index(2, 1, 0b01)] = {b_far, true};
        d.cubes.push_back(std::move(s));
    };
    square(0, 1, e21, e12, 1, 2, 4);  // axes x,y
    square(0, 2, e31, e13, 1, 3, 5);  // axes x,z
    square(1, 2, e32, e23, 2, 3, 6);  // axes y,z
    d.basepoint = 0;
    return build(std::move(d));
}

/// Default file names: vertices v<i>, single-letter edges up to z then e<i>,
/// cubes q<i>.
inline NamedComplex with_names(ComplexPtr x) {
    NamedComplex n{x, {}, {}, {}};
    for (VertexId v = 0; v < x->num_vertices(); ++v) n.vertex_names.push_back("v" + std::to_string(v));
    for (EdgeId e = 0; e < x->num_edges(); ++e)
        n.edge_names.push_back(e < 26 ? std::string(1, char('a' + e)) : "e" + std::to_string(e));
    for (CubeId c = 0; c < x->num_cubes(); ++c) n.cube_names.push_back("q" + std::to_string(c));
    return n;
}

// ---- signed-integer words (letter i>0 is edge i-1 forward, -i backward) ---

inline std::vector<DirectedEdge> to_letters(const std::vector<int>& word) {
    std::vector<DirectedEdge> out;
    for (int l : word) {
        if (l == 0) throw std::invalid_argument("letter 0");
        out.push_back({EdgeId(std::abs(l) - 1), l > 0});
    }
    return out;
}

inline CubicalWord based_word(const std::vector<int>& word, VertexId base = 0) {
    return {base, to_letters(word)};
}

inline std::vector<int> inverse(const std::vector<int>& w) {
    std::vector<int> out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
}

inline std::vector<int> repeat(const std::vector<int>& w, int k) {
    std::vector<int> out;
    for (int i = 0; i < k; ++i) out.insert(out.end(), w.begin(), w.end());
    return out;
}

/// Bouquet-and-complete over a one-vertex base (or any base where the words
/// are closed at the basepoint as given).
inline CompletionResult complete_words(ComplexPtr y, const std::vector<std::vector<int>>& words,
                                       const CompletionOptions& options = {}) {
    std::vector<std::vector<DirectedEdge>> paths;
    for (const auto& w : words) paths.push_back(to_letters(w));
    return complete(bouquet_from_words(std::move(y), 0, paths), options);
}

/// Freely reduced random word over rank letters, length in [min_len, max_len].
inline std::vector<int> random_word(std::mt19937_64& rng, int rank, int min_len, int max_len) {
    std::uniform_int_distribution<int> len_dist(min_len, max_len);
    std::uniform_int_distribution<int> letter_dist(0, 2 * rank - 1);
    int len = len_dist(rng);
    std::vector<int> out;
    while (int(out.size()) < len) {
        int raw = letter_dist(rng);
        int letter = raw < rank ? raw + 1 : -(raw - rank + 1);
        if (!out.empty() && out.back() == -letter) continue;
        out.push_back(letter);
    }
    return out;
}

inline std::vector<std::vector<int>> random_words(std::mt19937_64& rng, int rank, int max_words,
                                                  int max_len) {
    std::uniform_int_distribution<int> count_dist(1, max_words);
    std::vector<std::vector<int>> out;
    int count = count_dist(rng);
    for (int i = 0; i < count; ++i) out.push_back(random_word(rng, rank, 1, max_len));
    return out;
}

}  // namespace fixtures

#endif
