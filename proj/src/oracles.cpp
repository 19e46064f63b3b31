#include "cubical/oracles.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace cubical::oracles {
namespace {

bool arc_less(const StallingsGraph::Arc& a, const StallingsGraph::Arc& b) {
    return std::tie(a.tail, a.head, a.letter) < std::tie(b.tail, b.head, b.letter);
}

bool arc_eq(const StallingsGraph::Arc& a, const StallingsGraph::Arc& b) {
    return std::tie(a.tail, a.head, a.letter) == std::tie(b.tail, b.head, b.letter);
}

void check_word(std::size_t alphabet, const Word& w, const char* who) {
    for (int s : w)
        if (s == 0 || std::size_t(std::abs(s)) > alphabet)
            throw std::invalid_argument(std::string(who) + ": letter out of range");
}

// Follow one letter from a vertex; folded graphs have at most one choice.
std::optional<std::uint32_t> trace_step(const StallingsGraph& g, std::uint32_t at, int s) {
    std::uint32_t letter = std::uint32_t(std::abs(s)) - 1;
    for (const auto& a : g.arcs) {
        if (a.letter != letter) continue;
        if (s > 0 && a.tail == at) return a.head;
        if (s < 0 && a.head == at) return a.tail;
    }
    return std::nullopt;
}

std::optional<std::uint32_t> trace_word(const StallingsGraph& g, std::uint32_t from, const Word& w) {
    std::uint32_t cur = from;
    for (int s : w) {
        auto next = trace_step(g, cur, s);
        if (!next) return std::nullopt;
        cur = *next;
    }
    return cur;
}

}  // namespace

// ---------------------------------------------------------------- folding

StallingsGraph classic_fold(std::size_t alphabet, const std::vector<Word>& words) {
    StallingsGraph g;
    g.alphabet = alphabet;
    g.basepoint = 0;
    std::uint32_t next = 1;
    for (const auto& w : words) {
        check_word(alphabet, w, "classic_fold");
        std::uint32_t prev = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::uint32_t to = (i + 1 == w.size()) ? 0 : next++;
            int s = w[i];
            if (s > 0)
                g.arcs.push_back({prev, to, std::uint32_t(s) - 1});
            else
                g.arcs.push_back({to, prev, std::uint32_t(-s) - 1});
            prev = to;
        }
    }
    g.num_vertices = next;

    // fold: two arcs with one label sharing a tail (or a head) force their
    // other endpoints together
    auto merge = [&](std::uint32_t a, std::uint32_t b) {
        std::uint32_t keep = std::min(a, b), drop = std::max(a, b);
        for (auto& arc : g.arcs) {
            if (arc.tail == drop) arc.tail = keep;
            if (arc.head == drop) arc.head = keep;
        }
        if (g.basepoint == drop) g.basepoint = keep;
    };
    for (bool changed = true; changed;) {
        changed = false;
        std::sort(g.arcs.begin(), g.arcs.end(), arc_less);
        g.arcs.erase(std::unique(g.arcs.begin(), g.arcs.end(), arc_eq), g.arcs.end());
        for (std::size_t i = 0; i < g.arcs.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < g.arcs.size() && !changed; ++j) {
                if (g.arcs[i].letter != g.arcs[j].letter) continue;
                if (g.arcs[i].tail == g.arcs[j].tail && g.arcs[i].head != g.arcs[j].head) {
                    merge(g.arcs[i].head, g.arcs[j].head);
                    changed = true;
                } else if (g.arcs[i].head == g.arcs[j].head && g.arcs[i].tail != g.arcs[j].tail) {
                    merge(g.arcs[i].tail, g.arcs[j].tail);
                    changed = true;
                }
            }
        }
    }

    // compact the vertex ids left alive
    std::set<std::uint32_t> alive{g.basepoint};
    for (const auto& a : g.arcs) alive.insert({a.tail, a.head});
    std::map<std::uint32_t, std::uint32_t> dense;
    for (std::uint32_t v : alive) dense.emplace(v, std::uint32_t(dense.size()));
    for (auto& a : g.arcs) {
        a.tail = dense[a.tail];
        a.head = dense[a.head];
    }
    g.basepoint = dense[g.basepoint];
    g.num_vertices = std::uint32_t(dense.size());
    std::sort(g.arcs.begin(), g.arcs.end(), arc_less);
    return g;
}

StallingsGraph canonical_form(const StallingsGraph& g) {
    std::vector<std::uint32_t> order(g.num_vertices, 0xFFFFFFFFu);
    std::uint32_t next = 0;
    order[g.basepoint] = next++;
    std::deque<std::uint32_t> queue{g.basepoint};
    while (!queue.empty()) {
        std::uint32_t v = queue.front();
        queue.pop_front();
        // neighbors by letter, forward arc before backward arc
        for (std::uint32_t letter = 0; letter < g.alphabet; ++letter) {
            for (int dir = 0; dir < 2; ++dir) {
                for (const auto& a : g.arcs) {
                    if (a.letter != letter) continue;
                    std::uint32_t w;
                    if (dir == 0 && a.tail == v)
                        w = a.head;
                    else if (dir == 1 && a.head == v)
                        w = a.tail;
                    else
                        continue;
                    if (order[w] != 0xFFFFFFFFu) continue;
                    order[w] = next++;
                    queue.push_back(w);
                }
            }
        }
    }
    if (next != g.num_vertices)
        throw std::invalid_argument("canonical_form: graph is not connected");
    StallingsGraph out;
    out.alphabet = g.alphabet;
    out.basepoint = order[g.basepoint];
    out.num_vertices = g.num_vertices;
    for (const auto& a : g.arcs) out.arcs.push_back({order[a.tail], order[a.head], a.letter});
    std::sort(out.arcs.begin(), out.arcs.end(), arc_less);
    return out;
}

bool member(const StallingsGraph& g, const Word& w) {
    check_word(g.alphabet, w, "member");
    auto end = trace_word(g, g.basepoint, w);
    return end && *end == g.basepoint;
}

std::optional<std::uint64_t> rose_index(const StallingsGraph& g) {
    for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
        for (std::uint32_t letter = 0; letter < g.alphabet; ++letter) {
            bool has_out = false, has_in = false;
            for (const auto& a : g.arcs) {
                if (a.letter != letter) continue;
                has_out = has_out || a.tail == v;
                has_in = has_in || a.head == v;
            }
            if (!has_out || !has_in) return std::nullopt;
        }
    }
    return g.num_vertices;
}

std::optional<std::uint32_t> power(const StallingsGraph& g, const Word& w, std::uint32_t limit) {
    check_word(g.alphabet, w, "power");
    if (w.empty()) return 1;
    std::uint32_t at = g.basepoint;
    for (std::uint32_t k = 1; k <= limit; ++k) {
        auto next = trace_word(g, at, w);
        if (!next) return std::nullopt;
        at = *next;
        if (at == g.basepoint) return k;
    }
    return std::nullopt;
}

bool normal(const StallingsGraph& g, std::size_t alphabet, const std::vector<Word>& words) {
    for (int x = 1; std::size_t(x) <= alphabet; ++x) {
        for (const auto& s : words) {
            Word left{-x};
            left.insert(left.end(), s.begin(), s.end());
            left.push_back(x);
            Word right{x};
            right.insert(right.end(), s.begin(), s.end());
            right.push_back(-x);
            if (!member(g, left) || !member(g, right)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- lattices

Lattice lattice_oracle(std::size_t rank, const std::vector<Word>& words) {
    Lattice l;
    l.rank = rank;
    std::vector<std::vector<long long>> rows;
    for (const auto& w : words) {
        check_word(rank, w, "lattice_oracle");
        std::vector<long long> v(rank, 0);
        for (int s : w) v[std::size_t(std::abs(s)) - 1] += s > 0 ? 1 : -1;
        rows.push_back(std::move(v));
    }

    // integer row echelon by repeated remainder reduction per column
    std::size_t top = 0;
    for (std::size_t col = 0; col < rank && top < rows.size(); ++col) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t r = top; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                if (best == rows.size() ||
                    std::llabs(rows[r][col]) < std::llabs(rows[best][col]))
                    best = r;
            }
            if (best == rows.size()) break;  // column clear below top
            std::swap(rows[top], rows[best]);
            bool clean = true;
            for (std::size_t r = top + 1; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                long long q = rows[r][col] / rows[top][col];
                for (std::size_t c = 0; c < rank; ++c) rows[r][c] -= q * rows[top][c];
                if (rows[r][col] != 0) clean = false;
            }
            if (clean) {
                if (rows[top][col] < 0)
                    for (std::size_t c = 0; c < rank; ++c) rows[top][c] = -rows[top][c];
                ++top;
                break;
            }
        }
    }
    rows.resize(top);
    l.rows = std::move(rows);
    return l;
}

bool member(const Lattice& l, const Word& w) {
    check_word(l.rank, w, "member");
    std::vector<long long> v(l.rank, 0);
    for (int s : w) v[std::size_t(std::abs(s)) - 1] += s > 0 ? 1 : -1;
    for (const auto& row : l.rows) {
        std::size_t col = 0;
        while (col < l.rank && row[col] == 0) ++col;
        if (col == l.rank) continue;
        if (v[col] % row[col] != 0) return false;
        long long q = v[col] / row[col];
        for (std::size_t c = 0; c < l.rank; ++c) v[c] -= q * row[c];
    }
    for (long long c : v)
        if (c != 0) return false;
    return true;
}

std::optional<std::uint64_t> index(const Lattice& l) {
    if (l.rows.size() != l.rank) return std::nullopt;
    std::uint64_t det = 1;
    for (std::size_t r = 0; r < l.rank; ++r) {
        std::size_t col = 0;
        while (col < l.rank && l.rows[r][col] == 0) ++col;
        if (col == l.rank) return std::nullopt;
        det *= std::uint64_t(std::llabs(l.rows[r][col]));
    }
    return det;
}

std::optional<std::uint32_t> power(const Lattice& l, const Word& w, std::uint32_t limit) {
    check_word(l.rank, w, "power");
    for (std::uint32_t k = 1; k <= limit; ++k) {
        Word repeated;
        for (std::uint32_t i = 0; i < k; ++i) repeated.insert(repeated.end(), w.begin(), w.end());
        if (member(l, repeated)) return k;
    }
    return std::nullopt;
}

// ------------------------------------------------------------------- hulls

Hull brute_hull(const CubeComplex& x, const std::vector<VertexId>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("brute_hull: no seed vertices");
    for (VertexId v : seeds)
        if (v >= x.num_vertices()) throw std::invalid_argument("brute_hull: vertex out of range");

    // plain adjacency lists, rebuilt here on purpose
    std::vector<std::vector<VertexId>> adj(x.num_vertices());
    for (EdgeId e = 0; e < x.num_edges(); ++e) {
        adj[x.edge(e).src].push_back(x.edge(e).dst);
        adj[x.edge(e).dst].push_back(x.edge(e).src);
    }
    auto bfs = [&](VertexId from) {
        std::vector<std::uint32_t> dist(x.num_vertices(), 0xFFFFFFFFu);
        dist[from] = 0;
        std::deque<VertexId> queue{from};
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (VertexId w : adj[v]) {
                if (dist[w] != 0xFFFFFFFFu) continue;
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
        return dist;
    };

    std::set<VertexId> members(seeds.begin(), seeds.end());
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<VertexId> current(members.begin(), members.end());
        std::map<VertexId, std::vector<std::uint32_t>> dists;
        for (VertexId u : current) dists.emplace(u, bfs(u));
        for (std::size_t i = 0; i < current.size(); ++i) {
            for (std::size_t j = i + 1; j < current.size(); ++j) {
                const auto& du = dists[current[i]];
                const auto& dv = dists[current[j]];
                std::uint32_t d = du[current[j]];
                if (d == 0xFFFFFFFFu)
                    throw std::invalid_argument("brute_hull: seeds in different components");
                for (VertexId w = 0; w < x.num_vertices(); ++w) {
                    if (members.count(w) || du[w] == 0xFFFFFFFFu || dv[w] == 0xFFFFFFFFu) continue;
                    if (du[w] + dv[w] == d) {
                        members.insert(w);
                        grew = true;
                    }
                }
            }
        }
    }

    Hull h;
    h.vertices.assign(members.begin(), members.end());
    for (EdgeId e = 0; e < x.num_edges(); ++e)
        if (members.count(x.edge(e).src) && members.count(x.edge(e).dst)) h.edges.push_back(e);
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        bool inside = true;
        for (VertexId v : x.cube(c).corners) inside = inside && members.count(v) > 0;
        if (inside) h.cubes.push_back(c);
    }
    return h;
}

}  // namespace cubical::oracles
