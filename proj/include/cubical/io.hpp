// The text wire format: line-based complex files and word arguments.
//
//   # comment
//   vertex <name>
//   edge <name> <src> <dst>
//   cube <name> <dim>
//   corner <bits> <vertex>            one line per corner, 2^dim in all
//   cubeedge <bits-with-one-*> <edge> <+|->
//   base <vertex>
//
// Corner bit strings read axis 0 first (leftmost character).  A cubeedge
// stars the axis it runs along; `+` means the starred 0->1 direction is the
// edge's forward direction.  Words are comma-separated lists of whitespace-
// separated tokens `name`, `name^k`, or `name^-k` over edge names.
#ifndef CUBICAL_IO_HPP
#define CUBICAL_IO_HPP

#include <stdexcept>
#include <string>

#include "cubical/cubical_map.hpp"

namespace cubical {

/// Grammar or validation failure; `line` is 1-based, 0 for word arguments.
struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t line_number)
        : std::runtime_error(line_number ? "line " + std::to_string(line_number) + ": " + message
                                         : message),
          line(line_number) {}
    std::size_t line = 0;
};

/// Record-level content of a complex file, before structural validation.
struct ComplexText {
    ComplexData data;
    std::vector<std::string> vertex_names;
    std::vector<std::string> edge_names;
    std::vector<std::string> cube_names;
};

ComplexText parse_complex_records(const std::string& text);

/// A validated complex together with the names its cells carry in files.
struct NamedComplex {
    ComplexPtr complex;
    std::vector<std::string> vertex_names;
    std::vector<std::string> edge_names;
    std::vector<std::string> cube_names;
};

/// parse_complex_records plus structural validation; violations surface as
/// ParseError as well.
NamedComplex parse_complex(const std::string& text);

/// Canonical text: vertices, edges, cubes, base, each in id order.
/// parse_complex of the result reproduces the complex and names exactly.
std::string emit_complex(const CubeComplex& x, const std::vector<std::string>& vertex_names,
                         const std::vector<std::string>& edge_names,
                         const std::vector<std::string>& cube_names);

/// Names for a computed complex mapping onto a named base: each cell is
/// called after its image with a per-image counter ("a.0", "a.1", ...).
NamedComplex name_over_base(const CubicalMap& f, const NamedComplex& base);

/// Names for an induced subcomplex listed by ambient ids: names carry over.
NamedComplex name_subset(ComplexPtr sub, const std::vector<VertexId>& vertices,
                         const std::vector<EdgeId>& edges, const std::vector<CubeId>& cubes,
                         const NamedComplex& ambient);

/// Comma-separated words over the base's edge names; all-whitespace input
/// means no words at all.
std::vector<std::vector<DirectedEdge>> parse_words(const std::string& text,
                                                   const NamedComplex& base);

/// One token per letter: `name` or `name^-1`.
std::string emit_word(const std::vector<DirectedEdge>& letters, const NamedComplex& base);

}  // namespace cubical

#endif
