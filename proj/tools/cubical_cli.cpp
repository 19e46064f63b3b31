// Command line front end.  Reads complex files and word lists, runs the
// completion and the decision procedures, and prints deterministic output
// meant for scripts: answers on stdout, diagnostics on stderr, and exit
// codes that distinguish "no" from "could not decide".
//
// Exit codes: 0 success or a positive answer, 1 a negative answer, 2 bad
// input, 3 a budget ran out before an answer, 4 cross-check disagreement
// (the hidden --oracle flag only).
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cubical/completion.hpp"
#include "cubical/cube_complex.hpp"
#include "cubical/cubical_map.hpp"
#include "cubical/geometry.hpp"
#include "cubical/group_algorithms.hpp"
#include "cubical/io.hpp"
#include "cubical/oracles.hpp"

namespace {

using namespace cubical;

constexpr int kExitNo = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitOracle = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

VertexId require_base(const NamedComplex& named) {
    auto q = named.complex->basepoint();
    if (!q) throw ParseError("complex declares no base vertex", 0);
    return *q;
}

VertexId vertex_by_name(const NamedComplex& named, const std::string& name) {
    for (VertexId v = 0; v < named.complex->num_vertices(); ++v)
        if (named.vertex_names[v] == name) return v;
    throw ParseError("unknown vertex: " + name, 0);
}

std::vector<VertexId> vertices_by_names(const NamedComplex& named, const std::string& list) {
    std::vector<VertexId> out;
    std::istringstream in(list);
    std::string token;
    while (std::getline(in, token, ',')) {
        auto b = token.find_first_not_of(" \t");
        auto e = token.find_last_not_of(" \t");
        if (b == std::string::npos) throw ParseError("empty vertex name in list", 0);
        out.push_back(vertex_by_name(named, token.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ParseError("empty vertex list", 0);
    return out;
}

/// Generator words are letter sequences over the edge names; sequences that
/// do not chain or close are spliced through the spanning tree.
std::vector<CubicalWord> based_words(const NamedComplex& named, const SpanningTree& tree,
                                     const std::string& text) {
    std::vector<CubicalWord> out;
    for (const auto& letters : parse_words(text, named))
        out.push_back(word_to_cubical(*named.complex, tree, letters));
    return out;
}

CubicalWord one_based_word(const NamedComplex& named, const SpanningTree& tree,
                           const std::string& text) {
    auto words = based_words(named, tree, text);
    if (words.size() != 1) throw ParseError("expected exactly one word", 0);
    return words.front();
}

struct SubgroupRun {
    std::vector<CubicalWord> generators;
    CompletionResult result;
};

SubgroupRun complete_subgroup(const NamedComplex& named, const std::string& words_text,
                              const CompletionOptions& options) {
    VertexId q = require_base(named);
    auto tree = spanning_tree(*named.complex, q);
    auto generators = based_words(named, tree, words_text);
    std::vector<std::vector<DirectedEdge>> loops;
    for (const auto& w : generators) loops.push_back(w.letters);
    auto result = complete(bouquet_from_words(named.complex, q, loops), options);
    return {std::move(generators), std::move(result)};
}

std::string germ_str(const DirectedEdge& d) {
    return std::to_string(d.edge) + (d.forward ? "+" : "-");
}

/// One line per move, with cell ids as they were at the time of the move.
void write_log(const std::string& path, const std::vector<Move>& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path, 0);
    for (const auto& move : history) {
        if (const auto* f = std::get_if<FoldSite>(&move)) {
            out << "fold " << f->vertex << " " << germ_str(f->germ1) << " " << germ_str(f->germ2)
                << "\n";
        } else if (const auto* i = std::get_if<IdentifySite>(&move)) {
            out << "identify " << i->cube1 << " " << i->cube2 << "\n";
        } else {
            const auto& a = std::get<AttachSite>(move);
            out << "attach " << a.vertex;
            for (const auto& g : a.germs) out << " " << germ_str(g);
            out << " via " << a.target_cube << "/" << a.target_corner << "\n";
        }
    }
}

// ---- oracle cross-checks (hidden --oracle flag) --------------------------
//
// The oracles only know two shapes of base complex: roses (free groups) and
// standard tori (free abelian groups).  On anything else the flag warns and
// changes nothing.

bool rose_like(const CubeComplex& x) {
    return x.num_vertices() == 1 && x.num_edges() > 0 && x.num_cubes() == 0;
}

bool torus_like(const CubeComplex& x) {
    if (x.num_vertices() != 1 || x.num_edges() < 2) return false;
    std::size_t d = x.num_edges();
    if (d >= 20) return false;
    if (x.num_cubes() != (std::size_t(1) << d) - 1 - d) return false;
    // every unordered pair of distinct edges spans exactly one square
    std::vector<std::vector<int>> pair_count(d, std::vector<int>(d, 0));
    for (CubeId c = 0; c < x.num_cubes(); ++c) {
        const Cube& s = x.cube(c);
        if (s.dim != 2) continue;
        EdgeId e0 = s.edges[Cube::edge_index(2, 0, 0)].edge;
        EdgeId e1 = s.edges[Cube::edge_index(2, 1, 0)].edge;
        if (e0 == e1) return false;
        ++pair_count[std::min(e0, e1)][std::max(e0, e1)];
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (pair_count[i][j] != 1) return false;
    return true;
}

oracles::Word to_oracle_word(const CubicalWord& w) {
    oracles::Word out;
    for (const auto& l : w.letters) out.push_back(l.forward ? int(l.edge) + 1 : -(int(l.edge) + 1));
    return out;
}

std::vector<oracles::Word> to_oracle_words(const std::vector<CubicalWord>& words) {
    std::vector<oracles::Word> out;
    for (const auto& w : words) out.push_back(to_oracle_word(w));
    return out;
}

int oracle_mismatch(const std::string& what) {
    std::cerr << "oracle mismatch: " << what << "\n";
    return kExitOracle;
}

void oracle_skip(const CubeComplex& x) {
    std::cerr << "note: no oracle covers this base complex (" << x.num_vertices() << " vertices, "
              << x.num_edges() << " edges)\n";
}

// ---- command bodies ------------------------------------------------------

int cmd_check(const std::string& path) {
    auto records = parse_complex_records(read_file(path));
    auto validated = CubeComplex::validate(records.data);
    if (auto* violations = std::get_if<std::vector<Violation>>(&validated)) {
        for (const auto& v : *violations) std::cout << "invalid " << v.cell << ": " << v.invariant << "\n";
        return kExitNo;
    }
    const auto& x = std::get<CubeComplex>(validated);
    std::cout << x.num_vertices() << " vertices, " << x.num_edges() << " edges, " << x.num_cubes()
              << " cubes\n";
    auto report = check_npc(x);
    std::cout << "npc: " << (report.npc ? "yes" : "no") << "\n";
    if (report.npc) return 0;
    NamedComplex named{nullptr, records.vertex_names, records.edge_names, records.cube_names};
    for (const auto& vr : report.vertices) {
        if (vr.simplicial && vr.flag) continue;
        std::cout << "vertex " << records.vertex_names[vr.vertex] << ": ";
        if (!vr.simplicial) {
            std::cout << "link is not simplicial\n";
        } else {
            std::cout << "link is not flag (" << emit_word(vr.witness, named) << ")\n";
        }
    }
    return kExitNo;
}

int cmd_complete(const std::string& path, const std::string& words, const CompletionOptions& opt,
                 const std::string& log_path) {
    auto named = parse_complex(read_file(path));
    auto run = complete_subgroup(named, words, opt);
    if (!log_path.empty()) write_log(log_path, run.result.history);
    auto out = name_over_base(run.result.map, named);
    std::cout << emit_complex(*out.complex, out.vertex_names, out.edge_names, out.cube_names);
    return run.result.status == CompletionStatus::Finished ? 0 : kExitBudget;
}

int cmd_member(const std::string& path, const std::string& sub, const std::string& g_text,
               const CompletionOptions& opt, bool oracle) {
    auto named = parse_complex(read_file(path));
    auto run = complete_subgroup(named, sub, opt);
    if (run.result.status != CompletionStatus::Finished) {
        std::cout << "undecided\n";
        return kExitBudget;
    }
    VertexId q = require_base(named);
    auto tree = spanning_tree(*named.complex, q);
    auto g = one_based_word(named, tree, g_text);
    GroupContext ctx(named.complex, q);
    bool yes = membership(ctx, run.result, g);
    if (oracle) {
        if (rose_like(*named.complex)) {
            auto sg = oracles::classic_fold(named.complex->num_edges(), to_oracle_words(run.generators));
            if (oracles::member(sg, to_oracle_word(g)) != yes) return oracle_mismatch("member");
        } else if (torus_like(*named.complex)) {
            auto l = oracles::lattice_oracle(named.complex->num_edges(), to_oracle_words(run.generators));
            if (oracles::member(l, to_oracle_word(g)) != yes) return oracle_mismatch("member");
        } else {
            oracle_skip(*named.complex);
        }
    }
    std::cout << (yes ? "yes" : "no") << "\n";
    return yes ? 0 : kExitNo;
}

int cmd_power_member(const std::string& path, const std::string& sub, const std::string& g_text,
                     const CompletionOptions& opt, bool oracle) {
    auto named = parse_complex(read_file(path));
    auto run = complete_subgroup(named, sub, opt);
    if (run.result.status != CompletionStatus::Finished) {
        std::cout << "undecided\n";
        return kExitBudget;
    }
    VertexId q = require_base(named);
    auto tree = spanning_tree(*named.complex, q);
    auto g = one_based_word(named, tree, g_text);
    GroupContext ctx(named.complex, q);
    auto k = power_membership(ctx, run.result, g);
    if (oracle) {
        std::uint32_t limit = run.result.map.domain().num_vertices();
        std::optional<std::uint32_t> expected;
        bool have_oracle = true;
        if (rose_like(*named.complex)) {
            auto sg = oracles::classic_fold(named.complex->num_edges(), to_oracle_words(run.generators));
            expected = oracles::power(sg, to_oracle_word(g), limit);
        } else if (torus_like(*named.complex)) {
            auto l = oracles::lattice_oracle(named.complex->num_edges(), to_oracle_words(run.generators));
            expected = oracles::power(l, to_oracle_word(g), limit);
        } else {
            have_oracle = false;
            oracle_skip(*named.complex);
        }
        if (have_oracle && expected != k) return oracle_mismatch("power-member");
    }
    if (k) {
        std::cout << *k << "\n";
        return 0;
    }
    std::cout << "none\n";
    return kExitNo;
}

int cmd_normal(const std::string& path, const std::string& sub, const CompletionOptions& opt,
               bool oracle) {
    auto named = parse_complex(read_file(path));
    auto run = complete_subgroup(named, sub, opt);
    if (run.result.status != CompletionStatus::Finished) {
        std::cout << "undecided\n";
        return kExitBudget;
    }
    GroupContext ctx(named.complex, require_base(named));
    auto d = is_normal(ctx, run.result, run.generators, opt);
    if (oracle && d != Decision::Undecided) {
        bool ours = d == Decision::Yes;
        if (rose_like(*named.complex)) {
            auto words = to_oracle_words(run.generators);
            auto sg = oracles::classic_fold(named.complex->num_edges(), words);
            if (oracles::normal(sg, named.complex->num_edges(), words) != ours)
                return oracle_mismatch("normal");
        } else if (torus_like(*named.complex)) {
            if (!ours) return oracle_mismatch("normal");  // abelian: everything is normal
        } else {
            oracle_skip(*named.complex);
        }
    }
    switch (d) {
        case Decision::Yes: std::cout << "normal\n"; return 0;
        case Decision::No: std::cout << "not-normal\n"; return kExitNo;
        default: std::cout << "undecided\n"; return kExitBudget;
    }
}

int cmd_index(const std::string& path, const std::string& sub, const CompletionOptions& opt,
              std::size_t coset_budget, bool oracle) {
    auto named = parse_complex(read_file(path));
    auto run = complete_subgroup(named, sub, opt);
    if (run.result.status != CompletionStatus::Finished) {
        std::cout << "undecided\n";
        return kExitBudget;
    }
    GroupContext ctx(named.complex, require_base(named));
    auto n = finite_index(ctx, run.result, coset_budget);
    if (oracle) {
        std::optional<std::uint64_t> expected;
        bool have_oracle = true;
        if (rose_like(*named.complex)) {
            auto sg = oracles::classic_fold(named.complex->num_edges(), to_oracle_words(run.generators));
            expected = oracles::rose_index(sg);
        } else if (torus_like(*named.complex)) {
            auto l = oracles::lattice_oracle(named.complex->num_edges(), to_oracle_words(run.generators));
            expected = oracles::index(l);
        } else {
            have_oracle = false;
            oracle_skip(*named.complex);
        }
        if (have_oracle) {
            // our nullopt is "ran out of cosets": consistent with a large or
            // infinite true index, never with a small finite one
            bool consistent = n ? expected == n : (!expected || *expected > coset_budget);
            if (!consistent) return oracle_mismatch("index");
        }
    }
    if (n) {
        std::cout << *n << "\n";
        return 0;
    }
    std::cout << "infinite-or->budget\n";
    return kExitBudget;
}

int cmd_hull(const std::string& path, const std::string& vertex_list) {
    auto named = parse_complex(read_file(path));
    auto seeds = vertices_by_names(named, vertex_list);
    auto sub = convex_hull(*named.complex, seeds);
    auto out = name_subset(std::make_shared<const CubeComplex>(std::move(sub.complex)),
                           sub.vertices, sub.edges, sub.cubes, named);
    std::cout << emit_complex(*out.complex, out.vertex_names, out.edge_names, out.cube_names);
    return 0;
}

int cmd_ball(const std::string& path, unsigned radius, const std::string& center,
             std::size_t cell_budget) {
    auto named = parse_complex(read_file(path));
    VertexId c = center.empty() ? require_base(named) : vertex_by_name(named, center);
    auto ball = universal_cover_ball(named.complex, c, radius, cell_budget);
    auto out = name_over_base(ball.projection, named);
    std::cout << emit_complex(*out.complex, out.vertex_names, out.edge_names, out.cube_names);
    return 0;
}

int cmd_geodesics(const std::string& path, const std::string& from, const std::string& to) {
    auto named = parse_complex(read_file(path));
    auto paths = combinatorial_geodesics(*named.complex, vertex_by_name(named, from),
                                         vertex_by_name(named, to));
    for (const auto& p : paths) std::cout << emit_word(p, named) << "\n";
    return 0;
}

int cmd_dual(const std::string& path, const std::string& vertex_list) {
    auto named = parse_complex(read_file(path));
    auto seeds = vertices_by_names(named, vertex_list);
    auto dual = sageev_dual(halfspaces_meeting(*named.complex, seeds));
    std::vector<std::string> vnames, enames, cnames;
    for (VertexId v = 0; v < dual.complex.num_vertices(); ++v)
        vnames.push_back("o" + std::to_string(v));
    for (EdgeId e = 0; e < dual.complex.num_edges(); ++e) enames.push_back("e" + std::to_string(e));
    for (CubeId c = 0; c < dual.complex.num_cubes(); ++c) cnames.push_back("c" + std::to_string(c));
    std::cout << emit_complex(dual.complex, vnames, enames, cnames);
    return 0;
}

int cmd_reduce(const std::string& path, const std::string& word) {
    auto named = parse_complex(read_file(path));
    VertexId q = require_base(named);
    auto tree = spanning_tree(*named.complex, q);
    auto w = one_based_word(named, tree, word);
    GroupContext ctx(named.complex, q);
    for (const auto& form : reduced_forms(ctx, w)) std::cout << emit_word(form.letters, named) << "\n";
    return 0;
}

int cmd_present(const std::string& path) {
    auto named = parse_complex(read_file(path));
    auto tree = spanning_tree(*named.complex, require_base(named));
    auto p = cubical_presentation(*named.complex, tree);
    std::cout << "generators:";
    for (EdgeId e : p.generators) std::cout << " " << named.edge_names[e];
    std::cout << "\n";
    for (const auto& r : p.relators) std::cout << "relator: " << emit_word(r.letters, named) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stallings-style completions and decision procedures on cube complexes"};
    app.require_subcommand(1);

    std::string file, words, g_text, log_path, center, from, to, vertex_list, word;
    std::size_t budget = kDefaultBudget;
    std::optional<std::uint64_t> seed;
    std::size_t coset_budget = 32;
    std::size_t cell_budget = 500000;
    unsigned radius = 0;
    bool oracle = false;
    int rc = 0;

    auto completion_options = [&] {
        CompletionOptions opt;
        opt.budget = budget;
        opt.schedule_seed = seed;
        return opt;
    };

    auto add_budget = [&](CLI::App* cmd) {
        cmd->add_option("--budget", budget, "completion cell budget");
        cmd->add_option("--seed", seed, "randomize the move schedule with this seed");
    };
    auto add_oracle = [&](CLI::App* cmd) {
        cmd->add_flag("--oracle", oracle, "cross-check against independent oracles")->group("");
    };

    auto* check = app.add_subcommand("check", "validate a complex file and test the link conditions");
    check->add_option("file", file)->required();
    check->callback([&] { rc = cmd_check(file); });

    auto* complete_cmd = app.add_subcommand("complete", "complete a subgroup to a local isometry");
    complete_cmd->add_option("file", file)->required();
    complete_cmd->add_option("words", words, "comma-separated generator words")->required();
    add_budget(complete_cmd);
    complete_cmd->add_option("--log", log_path, "write one line per move to this file");
    complete_cmd->callback([&] { rc = cmd_complete(file, words, completion_options(), log_path); });

    auto* member = app.add_subcommand("member", "decide subgroup membership");
    member->add_option("file", file)->required();
    member->add_option("--sub", words, "subgroup generator words")->required();
    member->add_option("--g", g_text, "the word to test")->required();
    add_budget(member);
    add_oracle(member);
    member->callback([&] { rc = cmd_member(file, words, g_text, completion_options(), oracle); });

    auto* power = app.add_subcommand("power-member", "least power of a word in the subgroup");
    power->add_option("file", file)->required();
    power->add_option("--sub", words, "subgroup generator words")->required();
    power->add_option("--g", g_text, "the word to test")->required();
    add_budget(power);
    add_oracle(power);
    power->callback([&] { rc = cmd_power_member(file, words, g_text, completion_options(), oracle); });

    auto* normal = app.add_subcommand("normal", "decide whether the subgroup is normal");
    normal->add_option("file", file)->required();
    normal->add_option("--sub", words, "subgroup generator words")->required();
    add_budget(normal);
    add_oracle(normal);
    normal->callback([&] { rc = cmd_normal(file, words, completion_options(), oracle); });

    auto* index = app.add_subcommand("index", "compute the subgroup's index when finite");
    index->add_option("file", file)->required();
    index->add_option("--sub", words, "subgroup generator words")->required();
    add_budget(index);
    index->add_option("--coset-budget", coset_budget, "cap on enumerated cosets");
    add_oracle(index);
    index->callback([&] { rc = cmd_index(file, words, completion_options(), coset_budget, oracle); });

    auto* hull = app.add_subcommand("hull", "convex hull of vertices in a simply connected complex");
    hull->add_option("file", file)->required();
    hull->add_option("--vertices", vertex_list, "comma-separated vertex names")->required();
    hull->callback([&] { rc = cmd_hull(file, vertex_list); });

    auto* ball = app.add_subcommand("ball", "develop a metric ball in the universal cover");
    ball->add_option("file", file)->required();
    ball->add_option("--radius", radius)->required();
    ball->add_option("--center", center, "center vertex name (default: the base vertex)");
    ball->add_option("--cell-budget", cell_budget, "cap on intermediate complex size");
    ball->callback([&] { rc = cmd_ball(file, radius, center, cell_budget); });

    auto* geo = app.add_subcommand("geodesics", "list all shortest edge paths between two vertices");
    geo->add_option("file", file)->required();
    geo->add_option("--from", from)->required();
    geo->add_option("--to", to)->required();
    geo->callback([&] { rc = cmd_geodesics(file, from, to); });

    auto* dual = app.add_subcommand("dual", "dual cube complex of the hyperplanes separating a vertex set");
    dual->add_option("file", file)->required();
    dual->add_option("--vertices", vertex_list, "comma-separated vertex names")->required();
    dual->callback([&] { rc = cmd_dual(file, vertex_list); });

    auto* reduce = app.add_subcommand("reduce", "list the geodesic forms of a word");
    reduce->add_option("file", file)->required();
    reduce->add_option("--word", word)->required();
    reduce->callback([&] { rc = cmd_reduce(file, word); });

    auto* present = app.add_subcommand("present", "print a fundamental group presentation");
    present->add_option("file", file)->required();
    present->callback([&] { rc = cmd_present(file); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    } catch (const cubical::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const cubical::IncompleteBallError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::runtime_error& e) {
        // the remaining runtime errors are resource caps (cover ball budget)
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    }
    return rc;
}
