#include "cubical/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>

namespace cubical {
namespace {

void check_name(const std::string& name, std::size_t line) {
    if (name.empty()) throw ParseError("empty name", line);
    for (char c : name)
        if (c == ',' || c == '^' || c == '#' || std::isspace(static_cast<unsigned char>(c)))
            throw ParseError("name '" + name + "' contains a reserved character", line);
}

std::uint32_t lookup(const std::map<std::string, std::uint32_t>& names, const std::string& name,
                     const char* kind, std::size_t line) {
    auto it = names.find(name);
    if (it == names.end())
        throw ParseError(std::string("unknown ") + kind + " '" + name + "'", line);
    return it->second;
}

// Corner mask of a bit string, axis 0 leftmost.
unsigned parse_bits(const std::string& bits, int dim, std::size_t line) {
    if (int(bits.size()) != dim) throw ParseError("bit string '" + bits + "' has the wrong length", line);
    unsigned mask = 0;
    for (int axis = 0; axis < dim; ++axis) {
        if (bits[axis] == '1')
            mask |= 1u << axis;
        else if (bits[axis] != '0')
            throw ParseError("bit string '" + bits + "' must be over 0/1", line);
    }
    return mask;
}

std::string corner_bits(unsigned mask, int dim) {
    std::string bits(std::size_t(dim), '0');
    for (int axis = 0; axis < dim; ++axis)
        if (mask >> axis & 1) bits[std::size_t(axis)] = '1';
    return bits;
}

std::string starred_bits(int axis, unsigned base, int dim) {
    std::string bits = corner_bits(base, dim);
    bits[std::size_t(axis)] = '*';
    return bits;
}

}  // namespace

ComplexText parse_complex_records(const std::string& text) {
    ComplexText out;
    std::map<std::string, std::uint32_t> vertex_ids, edge_ids, cube_ids;
    bool based = false;

    std::istringstream input(text);
    std::string raw;
    std::size_t line = 0;

    // the cube whose corner/cubeedge lines are still owed, if any
    Cube* open_cube = nullptr;
    std::size_t owed_corners = 0, owed_edges = 0;
    std::vector<char> seen_corner, seen_edge;

    while (std::getline(input, raw)) {
        ++line;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::string kind;
        if (!(fields >> kind)) continue;

        auto want = [&](std::string& into, const char* what) {
            if (!(fields >> into))
                throw ParseError(std::string("expected ") + what + " after '" + kind + "'", line);
        };
        auto done = [&] {
            std::string extra;
            if (fields >> extra) throw ParseError("unexpected trailing '" + extra + "'", line);
        };

        if (kind == "corner" || kind == "cubeedge") {
            if (!open_cube) throw ParseError("'" + kind + "' outside a cube block", line);
            Cube& cube = *open_cube;
            if (kind == "corner") {
                std::string bits, vertex;
                want(bits, "corner bits");
                want(vertex, "a vertex name");
                done();
                unsigned mask = parse_bits(bits, cube.dim, line);
                if (seen_corner[mask]) throw ParseError("corner '" + bits + "' repeated", line);
                seen_corner[mask] = 1;
                cube.corners[mask] = lookup(vertex_ids, vertex, "vertex", line);
                --owed_corners;
            } else {
                std::string star, edge, sign;
                want(star, "starred bits");
                want(edge, "an edge name");
                want(sign, "+ or -");
                done();
                if (int(star.size()) != cube.dim)
                    throw ParseError("bit string '" + star + "' has the wrong length", line);
                int axis = -1;
                std::string bits = star;
                for (int a = 0; a < cube.dim; ++a) {
                    if (star[std::size_t(a)] != '*') continue;
                    if (axis != -1) throw ParseError("'" + star + "' stars two axes", line);
                    axis = a;
                    bits[std::size_t(a)] = '0';
                }
                if (axis == -1) throw ParseError("'" + star + "' stars no axis", line);
                unsigned base = parse_bits(bits, cube.dim, line);
                if (sign != "+" && sign != "-")
                    throw ParseError("direction must be + or -, got '" + sign + "'", line);
                std::size_t idx = Cube::edge_index(cube.dim, axis, base);
                if (seen_edge[idx]) throw ParseError("cube edge '" + star + "' repeated", line);
                seen_edge[idx] = 1;
                cube.edges[idx] = {lookup(edge_ids, edge, "edge", line), sign == "+"};
                --owed_edges;
            }
            if (owed_corners == 0 && owed_edges == 0) open_cube = nullptr;
            continue;
        }
        if (open_cube)
            throw ParseError("cube '" + out.cube_names.back() + "' is missing corner or cubeedge lines",
                             line);

        if (kind == "vertex") {
            std::string name;
            want(name, "a name");
            done();
            check_name(name, line);
            if (!vertex_ids.emplace(name, out.data.num_vertices).second)
                throw ParseError("vertex '" + name + "' repeated", line);
            out.vertex_names.push_back(name);
            ++out.data.num_vertices;
        } else if (kind == "edge") {
            std::string name, src, dst;
            want(name, "a name");
            want(src, "a vertex name");
            want(dst, "a vertex name");
            done();
            check_name(name, line);
            if (!edge_ids.emplace(name, std::uint32_t(out.data.edges.size())).second)
                throw ParseError("edge '" + name + "' repeated", line);
            out.edge_names.push_back(name);
            out.data.edges.push_back(
                {lookup(vertex_ids, src, "vertex", line), lookup(vertex_ids, dst, "vertex", line)});
        } else if (kind == "cube") {
            std::string name, dim_text;
            want(name, "a name");
            want(dim_text, "a dimension");
            done();
            check_name(name, line);
            int dim = 0;
            try {
                std::size_t used = 0;
                dim = std::stoi(dim_text, &used);
                if (used != dim_text.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError("dimension '" + dim_text + "' is not a number", line);
            }
            if (dim < 2 || dim > 20) throw ParseError("dimension must be between 2 and 20", line);
            if (!cube_ids.emplace(name, std::uint32_t(out.data.cubes.size())).second)
                throw ParseError("cube '" + name + "' repeated", line);
            out.cube_names.push_back(name);
            Cube cube;
            cube.dim = dim;
            cube.corners.assign(cube.corner_count(), 0);
            cube.edges.assign(cube.edge_count(), DirectedEdge{});
            out.data.cubes.push_back(std::move(cube));
            open_cube = &out.data.cubes.back();
            owed_corners = out.data.cubes.back().corner_count();
            owed_edges = out.data.cubes.back().edge_count();
            seen_corner.assign(owed_corners, 0);
            seen_edge.assign(owed_edges, 0);
        } else if (kind == "base") {
            std::string name;
            want(name, "a vertex name");
            done();
            if (based) throw ParseError("base declared twice", line);
            based = true;
            out.data.basepoint = lookup(vertex_ids, name, "vertex", line);
        } else {
            throw ParseError("unknown record '" + kind + "'", line);
        }
    }
    if (open_cube)
        throw ParseError("cube '" + out.cube_names.back() + "' is missing corner or cubeedge lines",
                         line + 1);
    return out;
}

NamedComplex parse_complex(const std::string& text) {
    ComplexText records = parse_complex_records(text);
    auto checked = CubeComplex::validate(std::move(records.data));
    if (auto* violations = std::get_if<std::vector<Violation>>(&checked)) {
        std::string merged = "invalid complex";
        for (const auto& v : violations->size() > 3
                                 ? std::vector<Violation>(violations->begin(), violations->begin() + 3)
                                 : *violations)
            merged += "; " + v.cell + ": " + v.invariant;
        throw ParseError(merged, 0);
    }
    return {std::make_shared<CubeComplex>(std::move(std::get<CubeComplex>(checked))),
            std::move(records.vertex_names), std::move(records.edge_names),
            std::move(records.cube_names)};
}

std::string emit_complex(const CubeComplex& x, const std::vector<std::string>& vertex_names,
                         const std::vector<std::string>& edge_names,
                         const std::vector<std::string>& cube_names) {
    if (vertex_names.size() != x.num_vertices() || edge_names.size() != x.num_edges() ||
        cube_names.size() != x.num_cubes())
        throw std::invalid_argument("emit_complex: name lists do not fit the complex");
    std::ostringstream out;
    for (VertexId v = 0; v < x.num_vertices(); ++v) out << "vertex " << vertex_names[v] << "\n";
    for (EdgeId e = 0; e < x.num_edges(); ++e)
        out << "edge " << edge_names[e] << " " << vertex_names[x.edge(e).src] << " "
            << vertex_names[x.edge(e).dst] << "\n";
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        const Cube& cube = x.cube(c);
        out << "cube " << cube_names[c] << " " << cube.dim << "\n";
        for (unsigned mask = 0; mask < cube.corner_count(); ++mask)
            out << "corner " << corner_bits(mask, cube.dim) << " " << vertex_names[cube.corners[mask]]
                << "\n";
        for (std::size_t idx = 0; idx < cube.edge_count(); ++idx) {
            auto [axis, base] = Cube::edge_axis_base(cube.dim, idx);
            const DirectedEdge& d = cube.edges[idx];
            out << "cubeedge " << starred_bits(axis, base, cube.dim) << " " << edge_names[d.edge]
                << " " << (d.forward ? "+" : "-") << "\n";
        }
    }
    if (x.basepoint()) out << "base " << vertex_names[*x.basepoint()] << "\n";
    return out.str();
}

NamedComplex name_over_base(const CubicalMap& f, const NamedComplex& base) {
    const CubeComplex& x = f.domain();
    NamedComplex named{f.domain_ptr(), {}, {}, {}};
    std::map<std::string, std::size_t> counters;
    auto next_name = [&counters](const std::string& image) {
        std::size_t k = counters[image]++;
        return image + "." + std::to_string(k);
    };
    for (VertexId v = 0; v < x.num_vertices(); ++v)
        named.vertex_names.push_back(next_name(base.vertex_names[f.vertex_image(v)]));
    counters.clear();
    for (EdgeId e = 0; e < x.num_edges(); ++e)
        named.edge_names.push_back(next_name(base.edge_names[f.edge_image(e).edge]));
    counters.clear();
    for (CubeId c = 0; c < x.num_cubes(); ++c)
        named.cube_names.push_back(next_name(base.cube_names[f.cube_image(c).target]));
    return named;
}

NamedComplex name_subset(ComplexPtr sub, const std::vector<VertexId>& vertices,
                         const std::vector<EdgeId>& edges, const std::vector<CubeId>& cubes,
                         const NamedComplex& ambient) {
    NamedComplex named{std::move(sub), {}, {}, {}};
    for (VertexId v : vertices) named.vertex_names.push_back(ambient.vertex_names[v]);
    for (EdgeId e : edges) named.edge_names.push_back(ambient.edge_names[e]);
    for (CubeId c : cubes) named.cube_names.push_back(ambient.cube_names[c]);
    return named;
}

std::vector<std::vector<DirectedEdge>> parse_words(const std::string& text,
                                                   const NamedComplex& base) {
    std::map<std::string, std::uint32_t> edge_ids;
    for (std::uint32_t e = 0; e < base.edge_names.size(); ++e)
        edge_ids.emplace(base.edge_names[e], e);

    std::vector<std::vector<DirectedEdge>> words;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return words;

    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        std::string segment =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::vector<DirectedEdge> word;
        std::istringstream tokens(segment);
        std::string token;
        while (tokens >> token) {
            std::string name = token;
            long long exponent = 1;
            auto caret = token.find('^');
            if (caret != std::string::npos) {
                name = token.substr(0, caret);
                std::string power = token.substr(caret + 1);
                try {
                    std::size_t used = 0;
                    exponent = std::stoll(power, &used);
                    if (used != power.size() || exponent == 0) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw ParseError("bad exponent in '" + token + "'", 0);
                }
            }
            auto it = edge_ids.find(name);
            if (it == edge_ids.end()) throw ParseError("unknown edge '" + name + "'", 0);
            for (long long i = 0; i < std::llabs(exponent); ++i)
                word.push_back({it->second, exponent > 0});
        }
        words.push_back(std::move(word));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return words;
}

std::string emit_word(const std::vector<DirectedEdge>& letters, const NamedComplex& base) {
    std::string out;
    for (const auto& l : letters) {
        if (!out.empty()) out += " ";
        out += base.edge_names[l.edge];
        if (!l.forward) out += "^-1";
    }
    return out;
}

}  // namespace cubical
