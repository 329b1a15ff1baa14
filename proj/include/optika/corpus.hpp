#pragma once

// The corpus: a directory of JSON documents, one per file, dispatched on "kind".
// bundle_corpus() produces the shipped instances; load_corpus() reads them back.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "optika/catalog.hpp"
#include "optika/json_io.hpp"
#include "optika/kan.hpp"
#include "optika/poly.hpp"
#include "optika/prof.hpp"
#include "optika/simple_optics.hpp"

namespace optika::corpus {

using json_io::json;
using json_io::Node;

template <class T>
struct Named {
    std::string file;
    T value;
};

// Lan along p, then along q.
struct KanChain {
    CoPresheaf copresheaf;
    FinFunctor p, q;
};

// Composable functors, first to last.
struct PiChain {
    std::vector<FinFunctor> functors;
};

// p: N ⇸ M, q: M ⇸ L, r: L ⇸ K and a on N.
struct ProfCase {
    FinProfunctor p, q, r;
    CoPresheaf a;
};

struct MatrixAction {
    FinProfunctor p;
    CoPresheaf a;
    std::size_t object = 0;
    std::size_t expected = 0;
};

// h: p ⇒ p2 and h2: p2 ⇒ p3, acted on a.
struct TwoCellCase {
    FinProfunctor p, p2, p3;
    ProfNat h, h2;
    CoPresheaf a;
};

struct NatCount {
    PolyFunctor source, target;
    std::size_t expected = 0;
};

// Composable compound optics, innermost first.
struct CompoundChain {
    std::vector<CompoundOptic> optics;
};

struct Document {
    std::string file;
    std::string kind;
    json value;
};

struct Corpus {
    std::vector<Document> documents;
    std::vector<Named<FinCategory>> categories;
    std::vector<Named<FinFunctor>> functors;
    std::vector<Named<CoPresheaf>> copresheaves;
    std::vector<Named<FinBifunctor>> bifunctors;
    std::vector<Named<KanChain>> kan_chains;
    std::vector<Named<PiChain>> pi_chains;
    std::vector<Named<ProfCase>> prof_cases;
    std::vector<Named<MatrixAction>> matrix_actions;
    std::vector<Named<TwoCellCase>> two_cells;
    std::vector<Named<MonoidalAction>> actions;
    std::vector<Named<json_io::ExactOpticDocument>> optics;
    std::vector<Named<ConcreteLens>> lenses;
    std::vector<Named<ConcretePrism>> prisms;
    std::vector<Named<PolyFunctor>> polys;
    std::vector<Named<NatCount>> nat_counts;
    std::vector<Named<CompoundChain>> compound_chains;
};

// --- case documents ---------------------------------------------------------------

inline KanChain read_kan_chain(const Node& n) {
    n.expect_object("kan_chain", {"copresheaf", "inner", "outer"});
    KanChain k{json_io::read_copresheaf(n["copresheaf"]), json_io::read_functor(n["inner"]),
               json_io::read_functor(n["outer"])};
    if (!(k.copresheaf.base == k.p.source)) n["inner"].fail("source is not the base of the co-presheaf");
    if (!(k.p.target == k.q.source)) n["outer"].fail("source is not the target of the inner functor");
    return k;
}

inline json write_kan_chain(const KanChain& k) {
    return {{"kind", "kan_chain"}, {"copresheaf", json_io::write_copresheaf(k.copresheaf)},
            {"inner", json_io::write_functor(k.p)}, {"outer", json_io::write_functor(k.q)}};
}

inline PiChain read_pi_chain(const Node& n) {
    n.expect_object("pi_chain", {"functors"});
    PiChain c;
    for (const auto& f : n["functors"].items()) {
        c.functors.push_back(json_io::read_functor(f));
        if (c.functors.size() > 1 && !(c.functors[c.functors.size() - 2].target == c.functors.back().source)) {
            f.fail("functor is not composable with the previous one");
        }
    }
    if (c.functors.empty()) n["functors"].fail("expected at least one functor");
    return c;
}

inline json write_pi_chain(const PiChain& c) {
    json fs = json::array();
    for (const auto& f : c.functors) fs.push_back(json_io::write_functor(f));
    return {{"kind", "pi_chain"}, {"functors", fs}};
}

inline ProfCase read_prof_case(const Node& n) {
    n.expect_object("prof_case", {"p", "q", "r", "a"});
    ProfCase c{json_io::read_profunctor(n["p"]), json_io::read_profunctor(n["q"]), json_io::read_profunctor(n["r"]),
               json_io::read_copresheaf(n["a"])};
    if (!(c.p.target == c.q.source)) n["q"].fail("source is not the target of p");
    if (!(c.q.target == c.r.source)) n["r"].fail("source is not the target of q");
    if (!(c.a.base == c.p.source)) n["a"].fail("base is not the source of p");
    return c;
}

inline json write_prof_case(const ProfCase& c) {
    return {{"kind", "prof_case"},
            {"p", json_io::write_profunctor(c.p)},
            {"q", json_io::write_profunctor(c.q)},
            {"r", json_io::write_profunctor(c.r)},
            {"a", json_io::write_copresheaf(c.a)}};
}

inline MatrixAction read_matrix_action(const Node& n) {
    n.expect_object("matrix_action", {"profunctor", "copresheaf", "object", "expected"});
    MatrixAction m{json_io::read_profunctor(n["profunctor"]), json_io::read_copresheaf(n["copresheaf"]), 0,
                   n["expected"].uint()};
    if (!(m.a.base == m.p.source)) n["copresheaf"].fail("base is not the source of the profunctor");
    m.object = json_io::read_object(n["object"], m.p.target);
    return m;
}

inline json write_matrix_action(const MatrixAction& m) {
    return {{"kind", "matrix_action"},
            {"profunctor", json_io::write_profunctor(m.p)},
            {"copresheaf", json_io::write_copresheaf(m.a)},
            {"object", m.p.target.object(m.object)},
            {"expected", m.expected}};
}

inline TwoCellCase read_two_cell(const Node& n) {
    n.expect_object("two_cell", {"p", "p2", "p3", "h", "h2", "copresheaf"});
    TwoCellCase c{json_io::read_profunctor(n["p"]), json_io::read_profunctor(n["p2"]), json_io::read_profunctor(n["p3"]),
                  {}, {}, json_io::read_copresheaf(n["copresheaf"])};
    c.h = json_io::read_prof_components(n["h"], c.p, c.p2);
    c.h2 = json_io::read_prof_components(n["h2"], c.p2, c.p3);
    if (!(c.a.base == c.p.source)) n["copresheaf"].fail("base is not the source of the profunctors");
    return c;
}

inline json write_two_cell(const TwoCellCase& c) {
    return {{"kind", "two_cell"},
            {"p", json_io::write_profunctor(c.p)},
            {"p2", json_io::write_profunctor(c.p2)},
            {"p3", json_io::write_profunctor(c.p3)},
            {"h", json_io::write_prof_components(c.h, c.p, c.p2)},
            {"h2", json_io::write_prof_components(c.h2, c.p2, c.p3)},
            {"copresheaf", json_io::write_copresheaf(c.a)}};
}

inline NatCount read_nat_count(const Node& n) {
    n.expect_object("nat_count", {"source", "target", "expected"});
    return {json_io::read_poly(n["source"]), json_io::read_poly(n["target"]), n["expected"].uint()};
}

inline json write_nat_count(const NatCount& c) {
    return {{"kind", "nat_count"}, {"source", json_io::write_poly(c.source)}, {"target", json_io::write_poly(c.target)},
            {"expected", c.expected}};
}

inline CompoundChain read_compound_chain(const Node& n) {
    n.expect_object("compound_chain", {"optics"});
    CompoundChain c;
    for (const auto& o : n["optics"].items()) {
        c.optics.push_back(json_io::read_compound(o));
        if (c.optics.size() > 1) {
            const auto& prev = c.optics[c.optics.size() - 2];
            if (!(prev.s == c.optics.back().a) || !(prev.t == c.optics.back().b)) {
                o.fail("optic does not start where the previous one ends");
            }
        }
    }
    return c;
}

inline json write_compound_chain(const CompoundChain& c) {
    json os = json::array();
    for (const auto& o : c.optics) os.push_back(json_io::write_compound(o));
    return {{"kind", "compound_chain"}, {"optics", os}};
}

// --- loading ----------------------------------------------------------------------

inline const std::vector<std::string>& known_kinds() {
    static const std::vector<std::string> kinds{
        "action",        "bifunctor",  "category", "compound_chain", "copresheaf", "functor", "kan_chain", "lens",
        "matrix_action", "nat_count",  "optic",    "pi_chain",       "polynomial", "prism",   "prof_case", "two_cell"};
    return kinds;
}

// Parses one document into the corpus.
inline void add_document(Corpus& c, const std::string& file, const json& value) {
    const Node n(value, file);
    const auto kind = json_io::kind_of(n);
    if (kind == "category") c.categories.push_back({file, json_io::read_category(n)});
    else if (kind == "functor") c.functors.push_back({file, json_io::read_functor(n)});
    else if (kind == "copresheaf") c.copresheaves.push_back({file, json_io::read_copresheaf(n)});
    else if (kind == "bifunctor") c.bifunctors.push_back({file, json_io::read_bifunctor(n)});
    else if (kind == "kan_chain") c.kan_chains.push_back({file, read_kan_chain(n)});
    else if (kind == "pi_chain") c.pi_chains.push_back({file, read_pi_chain(n)});
    else if (kind == "prof_case") c.prof_cases.push_back({file, read_prof_case(n)});
    else if (kind == "matrix_action") c.matrix_actions.push_back({file, read_matrix_action(n)});
    else if (kind == "two_cell") c.two_cells.push_back({file, read_two_cell(n)});
    else if (kind == "action") c.actions.push_back({file, json_io::read_action(n)});
    else if (kind == "optic") c.optics.push_back({file, json_io::read_exact_optic(n)});
    else if (kind == "lens") c.lenses.push_back({file, json_io::read_lens(n)});
    else if (kind == "prism") c.prisms.push_back({file, json_io::read_prism(n)});
    else if (kind == "polynomial") c.polys.push_back({file, json_io::read_poly(n)});
    else if (kind == "nat_count") c.nat_counts.push_back({file, read_nat_count(n)});
    else if (kind == "compound_chain") c.compound_chains.push_back({file, read_compound_chain(n)});
    else n["kind"].fail("unknown kind '" + kind + "'");
    c.documents.push_back({file, kind, value});
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.generic_string(), "cannot open file");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Adds every *.json below `root` (or `root` itself if it is a file). Files are named
// relative to `root`, so reports do not depend on where the corpus lives.
inline void load_into(Corpus& c, const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::exists(root)) throw ParseError(root.generic_string(), "no such file or directory");
    std::vector<std::pair<std::string, fs::path>> files;
    if (fs::is_directory(root)) {
        for (const auto& e : fs::recursive_directory_iterator(root)) {
            if (e.is_regular_file() && e.path().extension() == ".json") {
                files.emplace_back(fs::relative(e.path(), root).generic_string(), e.path());
            }
        }
        std::sort(files.begin(), files.end());
    } else {
        files.emplace_back(root.filename().generic_string(), root);
    }
    for (const auto& [name, path] : files) add_document(c, name, json_io::parse_text(read_text(path), name));
}

inline Corpus load_corpus(const std::vector<std::filesystem::path>& roots) {
    Corpus c;
    for (const auto& r : roots) load_into(c, r);
    return c;
}

// --- the bundled instances ----------------------------------------------------------

namespace shipped {

inline FinCategory point() { return catalog::discrete({"*"}); }

inline FinFunctor to_point(const FinCategory& c) { return catalog::constant_functor(c, point(), "*"); }

inline FinFunctor long_arrow() {
    return catalog::functor(catalog::walking_arrow(), catalog::chain3(), {{"0", "0"}, {"1", "2"}}, {{"u", "ba"}});
}

inline FinFunctor collapse_chain() {
    return catalog::functor(catalog::chain3(), catalog::walking_arrow(), {{"0", "0"}, {"1", "1"}, {"2", "1"}},
                            {{"a", "u"}, {"b", "id_1"}, {"ba", "u"}});
}

inline FinFunctor arrow_into_iso() {
    return catalog::functor(catalog::walking_arrow(), catalog::walking_iso(), {{"0", "0"}, {"1", "1"}}, {{"u", "u"}});
}

inline FinFunctor span_to_arrow() {
    return catalog::functor(catalog::span(), catalog::walking_arrow(), {{"0", "0"}, {"x", "1"}, {"y", "1"}},
                            {{"l", "u"}, {"r", "u"}});
}

inline FinFunctor parallel_to_arrow() {
    return catalog::functor(catalog::parallel_pair(), catalog::walking_arrow(), {{"0", "0"}, {"1", "1"}},
                            {{"s", "u"}, {"t", "u"}});
}

inline FinFunctor arrow_into_idempotent() {
    return catalog::functor(catalog::walking_arrow(), catalog::idempotent(), {{"0", "*"}, {"1", "*"}}, {{"u", "e"}});
}

inline FinFunctor discrete_merge() {
    return catalog::functor(catalog::discrete({"a", "b", "c"}), catalog::discrete({"x", "y"}),
                            {{"a", "x"}, {"b", "x"}, {"c", "y"}}, {});
}

inline FinFunctor discrete_to_point() {
    return catalog::functor(catalog::discrete({"x", "y"}), catalog::discrete({"z"}), {{"x", "z"}, {"y", "z"}}, {});
}

// Z/4 -> Z/2, g ↦ g.
inline FinFunctor cyclic_quotient() {
    return catalog::functor(catalog::cyclic_group(4), catalog::cyclic_group(2), {{"*", "*"}},
                            {{"g1", "g1"}, {"g2", "e"}, {"g3", "g1"}});
}

inline CoPresheaf arrow_two_to_three() {
    return catalog::copresheaf(catalog::walking_arrow(), {{"0", {"x", "y"}}, {"1", {"p", "q", "r"}}},
                               {{"u", {{"x", "p"}, {"y", "p"}}}});
}

inline CoPresheaf arrow_empty_source() {
    return catalog::copresheaf(catalog::walking_arrow(), {{"0", {}}, {"1", {"p"}}}, {{"u", {}}});
}

inline CoPresheaf arrow_terminal() {
    return catalog::copresheaf(catalog::walking_arrow(), {{"0", {"*"}}, {"1", {"*"}}}, {{"u", {{"*", "*"}}}});
}

inline CoPresheaf iso_pairs() {
    return catalog::copresheaf(catalog::walking_iso(), {{"0", {"a", "b"}}, {"1", {"c", "d"}}},
                               {{"u", {{"a", "c"}, {"b", "d"}}}, {"v", {{"c", "a"}, {"d", "b"}}}});
}

inline CoPresheaf chain3_counts() {
    return catalog::copresheaf(catalog::chain3(), {{"0", {"a"}}, {"1", {"b", "c"}}, {"2", {"d", "e", "f"}}},
                               {{"a", {{"a", "b"}}}, {"b", {{"b", "d"}, {"c", "e"}}}, {"ba", {{"a", "d"}}}});
}

inline CoPresheaf parallel_pair_copresheaf() {
    return catalog::copresheaf(catalog::parallel_pair(), {{"0", {"x", "y"}}, {"1", {"p", "q"}}},
                               {{"s", {{"x", "p"}, {"y", "q"}}}, {"t", {{"x", "q"}, {"y", "q"}}}});
}

inline CoPresheaf cyclic2_flip() {
    return catalog::copresheaf(catalog::cyclic_group(2), {{"*", {"a", "b"}}}, {{"g1", {{"a", "b"}, {"b", "a"}}}});
}

inline CoPresheaf cyclic3_rotate() {
    return catalog::copresheaf(catalog::cyclic_group(3), {{"*", {"a", "b", "c"}}},
                               {{"g1", {{"a", "b"}, {"b", "c"}, {"c", "a"}}}, {"g2", {{"a", "c"}, {"b", "a"}, {"c", "b"}}}});
}

inline CoPresheaf cyclic4_rotate() {
    return catalog::copresheaf(catalog::cyclic_group(4), {{"*", {"a", "b", "c", "d"}}},
                               {{"g1", {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}}},
                                {"g2", {{"a", "c"}, {"b", "d"}, {"c", "a"}, {"d", "b"}}},
                                {"g3", {{"a", "d"}, {"b", "a"}, {"c", "b"}, {"d", "c"}}}});
}

inline CoPresheaf idempotent_collapse() {
    return catalog::copresheaf(catalog::idempotent(), {{"*", {"a", "b", "c"}}}, {{"e", {{"a", "a"}, {"b", "a"}, {"c", "c"}}}});
}

inline CoPresheaf span_glue() {
    return catalog::copresheaf(catalog::span(), {{"0", {"z"}}, {"x", {"a", "b"}}, {"y", {"c"}}},
                               {{"l", {{"z", "a"}}}, {"r", {{"z", "c"}}}});
}

inline CoPresheaf discrete_two() {
    return catalog::copresheaf(catalog::discrete({"a", "b"}), {{"a", {"1", "2"}}, {"b", {}}}, {});
}

inline CoPresheaf discrete_three() {
    return catalog::copresheaf(catalog::discrete({"a", "b", "c"}), {{"a", {"1"}}, {"b", {"2", "3"}}, {"c", {"4", "5", "6"}}},
                               {});
}

// c(-, -) as a bifunctor; its coend is the set of endomorphisms up to conjugacy-like sliding.
inline FinBifunctor hom_bifunctor(const FinCategory& c) {
    const auto h = hom_profunctor(c);
    return {c, h.fiber, h.contra, h.co};
}

inline FinProfunctor terminal_profunctor(const FinCategory& n, const FinCategory& k) {
    FinProfunctor p{n, k, std::vector<std::vector<FinSet>>(n.num_objects(), std::vector<FinSet>(k.num_objects(), FinSet({"*"}))),
                    {}, {}};
    p.contra.assign(n.num_morphisms(), std::vector<Table>(k.num_objects(), Table{0}));
    p.co.assign(k.num_morphisms(), std::vector<Table>(n.num_objects(), Table{0}));
    return p;
}

// Fibers {a, b} everywhere, every action the identity.
inline FinProfunctor constant_pair_profunctor(const FinCategory& c) {
    FinProfunctor p{c, c, std::vector<std::vector<FinSet>>(c.num_objects(), std::vector<FinSet>(c.num_objects(), FinSet({"a", "b"}))),
                    {}, {}};
    p.contra.assign(c.num_morphisms(), std::vector<Table>(c.num_objects(), identity_table(2)));
    p.co.assign(c.num_morphisms(), std::vector<Table>(c.num_objects(), identity_table(2)));
    return p;
}

// The unique 2-cell into the terminal profunctor.
inline ProfNat to_terminal_nat(const FinProfunctor& p) {
    ProfNat h;
    for (const auto& row : p.fiber) {
        h.components.emplace_back();
        for (const auto& s : row) h.components.back().push_back(Table(s.size(), 0));
    }
    return h;
}

inline ProfNat constant_prof_nat(const FinProfunctor& p, const Table& t) {
    ProfNat h;
    for (const auto& row : p.fiber) h.components.emplace_back(row.size(), t);
    return h;
}

// The lens on two-bit strings focusing on the first bit.
inline ConcreteLens first_bit_lens() {
    const FinSet s({"00", "01", "10", "11"}), bit({"0", "1"});
    ConcreteLens l{s, s, bit, bit, {}, {}};
    const TupleSet sb(s, bit);
    l.put.assign(sb.size(), 0);
    for (std::size_t x = 0; x < s.size(); ++x) {
        l.get.push_back(bit.index_of(s[x].substr(0, 1)));
        for (std::size_t b = 0; b < bit.size(); ++b) l.put[sb.encode(x, b)] = s.index_of(bit[b] + s[x].substr(1));
    }
    return l;
}

inline ConcreteLens forget_lens() {
    const FinSet s({"0", "1"}), one({"*"});
    return {s, s, one, one, {0, 0}, {0, 1}};
}

inline ConcreteLens identity_lens() {
    const FinSet s({"0", "1"});
    return lens_concretize(identity_set_optic(OpticKind::lens, s, s));
}

// {0, 1} inside {0, 1, 2}.
inline ConcretePrism lower_prism() {
    const FinSet s({"0", "1", "2"}), a({"0", "1"});
    const auto ta = coproduct_action(s, a);
    return {s, s, a, a, {ta.encode(1, 0), ta.encode(1, 1), ta.encode(0, 2)}, {0, 1}};
}

// {1} inside {0, 1}.
inline ConcretePrism one_prism() {
    const FinSet s({"0", "1"}), a({"1"});
    const auto ta = coproduct_action(s, a);
    return {s, s, a, a, {ta.encode(0, 0), ta.encode(1, 0)}, {1}};
}

inline ConcretePrism identity_prism() {
    const FinSet s({"0", "1"});
    return prism_concretize(identity_set_optic(OpticKind::prism, s, s));
}

inline std::vector<std::pair<std::string, PolyFunctor>> polys() {
    return {{"zero", monomials({})},
            {"one", monomials({{1, 0}})},
            {"y", monomials({{1, 1}})},
            {"y2", monomials({{1, 2}})},
            {"y2_plus_y", monomials({{1, 2}, {1, 1}})},
            {"two_y", monomials({{2, 1}})},
            {"y_plus_one", monomials({{1, 1}, {1, 0}})},
            {"y3", monomials({{1, 3}})}};
}

// An optic over p with the middle natural transformations of each enumeration.
inline CompoundOptic middle_compound(const FinProfunctor& p, const CoPresheaf& a, const CoPresheaf& b,
                                     const CoPresheaf& s, const CoPresheaf& t) {
    const auto fw = enumerate_nats(s, prof_action(p, a));
    const auto bw = enumerate_nats(prof_action(p, b), t);
    if (fw.empty() || bw.empty()) throw KernelError("middle_compound: no natural transformation");
    return {p, a, b, s, t, fw[fw.size() / 2], bw[bw.size() / 2]};
}

} // namespace shipped

// Relative path and document of every shipped file.
inline std::vector<std::pair<std::string, json>> bundle_corpus() {
    using namespace shipped;
    namespace cat = catalog;
    std::vector<std::pair<std::string, json>> out;
    auto add = [&](const std::string& path, json j) { out.emplace_back(path, std::move(j)); };

    const std::vector<std::pair<std::string, FinCategory>> categories{
        {"walking_arrow", cat::walking_arrow()}, {"walking_iso", cat::walking_iso()},
        {"chain3", cat::chain3()},               {"parallel_pair", cat::parallel_pair()},
        {"cyclic_group_2", cat::cyclic_group(2)}, {"cyclic_group_3", cat::cyclic_group(3)},
        {"idempotent", cat::idempotent()},       {"span", cat::span()},
        {"discrete_2", cat::discrete({"a", "b"})}, {"empty", cat::empty_category()}};
    for (const auto& [name, c] : categories) add("category/" + name + ".json", json_io::write_category(c));

    const std::vector<std::pair<std::string, FinFunctor>> functors{
        {"long_arrow", long_arrow()},
        {"collapse_chain", collapse_chain()},
        {"arrow_into_iso", arrow_into_iso()},
        {"span_to_arrow", span_to_arrow()},
        {"parallel_to_arrow", parallel_to_arrow()},
        {"arrow_into_idempotent", arrow_into_idempotent()},
        {"discrete_merge", discrete_merge()},
        {"cyclic_quotient", cyclic_quotient()},
        {"iso_to_point", to_point(cat::walking_iso())},
        {"identity_chain3", identity_functor(cat::chain3())}};
    for (const auto& [name, f] : functors) add("functor/" + name + ".json", json_io::write_functor(f));

    const std::vector<std::pair<std::string, CoPresheaf>> copresheaves{
        {"arrow_two_to_three", arrow_two_to_three()},
        {"arrow_empty_source", arrow_empty_source()},
        {"arrow_representable_0", yoneda(cat::walking_arrow(), "0")},
        {"iso_pairs", iso_pairs()},
        {"chain3_counts", chain3_counts()},
        {"chain3_representable_1", yoneda(cat::chain3(), "1")},
        {"parallel_pair", parallel_pair_copresheaf()},
        {"cyclic2_flip", cyclic2_flip()},
        {"cyclic3_rotate", cyclic3_rotate()},
        {"idempotent_collapse", idempotent_collapse()},
        {"span_glue", span_glue()},
        {"discrete_two", discrete_two()}};
    for (const auto& [name, f] : copresheaves) add("copresheaf/" + name + ".json", json_io::write_copresheaf(f));

    const std::vector<std::pair<std::string, FinBifunctor>> bifunctors{
        {"hom_walking_iso", hom_bifunctor(cat::walking_iso())},
        {"hom_cyclic_group_3", hom_bifunctor(cat::cyclic_group(3))},
        {"hom_idempotent", hom_bifunctor(cat::idempotent())},
        {"hom_span", hom_bifunctor(cat::span())},
        {"coyoneda_arrow_at_1",
         external_product(cat::walking_arrow(), contravariant_hom(cat::walking_arrow(), 1), family_of(arrow_two_to_three()))
             .bifunctor}};
    for (const auto& [name, d] : bifunctors) add("bifunctor/" + name + ".json", json_io::write_bifunctor(d));

    const auto arrow = cat::walking_arrow();
    const std::vector<std::pair<std::string, KanChain>> kan{
        {"identity_arrow", {arrow_two_to_three(), identity_functor(arrow), identity_functor(arrow)}},
        {"identity_chain3", {chain3_counts(), identity_functor(cat::chain3()), collapse_chain()}},
        {"discrete", {discrete_three(), discrete_merge(), discrete_to_point()}},
        {"arrow_long_then_collapse", {arrow_two_to_three(), long_arrow(), collapse_chain()}},
        {"arrow_iso_then_point", {arrow_two_to_three(), arrow_into_iso(), to_point(cat::walking_iso())}},
        {"arrow_long_then_point", {yoneda(arrow, "0"), long_arrow(), to_point(cat::chain3())}},
        {"arrow_identity_then_iso", {arrow_empty_source(), identity_functor(arrow), arrow_into_iso()}},
        {"chain3_collapse_then_iso", {chain3_counts(), collapse_chain(), arrow_into_iso()}},
        {"span_to_arrow_then_iso", {span_glue(), span_to_arrow(), arrow_into_iso()}},
        {"parallel_to_arrow_then_point", {parallel_pair_copresheaf(), parallel_to_arrow(), to_point(arrow)}},
        {"cyclic_quotient_then_point", {cyclic4_rotate(), cyclic_quotient(), to_point(cat::cyclic_group(2))}},
        {"arrow_idempotent_then_point", {arrow_two_to_three(), arrow_into_idempotent(), to_point(cat::idempotent())}}};
    for (const auto& [name, k] : kan) add("kan_chain/" + name + ".json", write_kan_chain(k));

    const std::vector<std::pair<std::string, PiChain>> pis{
        {"long_collapse_iso", {{long_arrow(), collapse_chain(), arrow_into_iso()}}},
        {"iso_to_point", {{arrow_into_iso(), to_point(cat::walking_iso())}}},
        {"collapse_then_iso", {{collapse_chain(), arrow_into_iso()}}},
        {"discrete", {{discrete_merge(), discrete_to_point()}}},
        {"span_arrow_idempotent", {{span_to_arrow(), arrow_into_idempotent(), to_point(cat::idempotent())}}},
        {"cyclic", {{cyclic_quotient(), to_point(cat::cyclic_group(2))}}}};
    for (const auto& [name, c] : pis) add("pi_chain/" + name + ".json", write_pi_chain(c));

    {
        const auto n = cat::discrete({"n1", "n2"}), m = cat::discrete({"m"}), l = cat::discrete({"l1", "l2"}),
                   k = cat::discrete({"k"});
        const auto a = cat::copresheaf(n, {{"n1", {"a"}}, {"n2", {"b", "c"}}}, {});
        add("prof_case/discrete_matrices.json",
            write_prof_case({matrix_profunctor(n, m, {{2}, {3}}), matrix_profunctor(m, l, {{1, 2}}),
                             matrix_profunctor(l, k, {{1}, {2}}), a}));
        add("prof_case/walking_arrow_homs.json",
            write_prof_case({hom_profunctor(arrow), representable_profunctor(arrow_into_iso()),
                             hom_profunctor(cat::walking_iso()), arrow_two_to_three()}));
        add("prof_case/representables.json",
            write_prof_case({representable_profunctor(long_arrow()), representable_profunctor(collapse_chain()),
                             representable_profunctor(to_point(arrow)), yoneda(arrow, "0")}));
        add("prof_case/cyclic.json",
            write_prof_case({hom_profunctor(cat::cyclic_group(2)), hom_profunctor(cat::cyclic_group(2)),
                             representable_profunctor(to_point(cat::cyclic_group(2))), cyclic2_flip()}));

        const auto k1 = cat::discrete({"k1"}), k12 = cat::discrete({"k1", "k2"});
        add("matrix_action/two_by_one.json",
            write_matrix_action({matrix_profunctor(n, k1, {{2}, {3}}), a, 0, 8}));
        add("matrix_action/two_by_two.json",
            write_matrix_action({matrix_profunctor(n, k12, {{1, 0}, {2, 2}}),
                                 cat::copresheaf(n, {{"n1", {"a", "b"}}, {"n2", {"c"}}}, {}), 0, 4}));
    }

    {
        const auto h = hom_profunctor(arrow);
        const auto term = terminal_profunctor(arrow, arrow);
        add("two_cell/hom_to_terminal.json",
            write_two_cell({h, term, term, to_terminal_nat(h), identity_prof_nat(term), arrow_two_to_three()}));
        const auto pair = constant_pair_profunctor(arrow);
        add("two_cell/constant_swap.json",
            write_two_cell({pair, pair, pair, constant_prof_nat(pair, {1, 0}), constant_prof_nat(pair, {1, 0}),
                            yoneda(arrow, "0")}));
    }

    const std::vector<std::pair<std::string, MonoidalAction>> actions{
        {"trivial_on_arrow", cat::trivial_action(cat::trivial_monoidal(), arrow)},
        {"discrete_cyclic_2_trivial_on_arrow", cat::trivial_action(cat::discrete_cyclic_monoidal(2), arrow)},
        {"walking_iso_xor_regular", cat::regular_action(cat::walking_iso_xor(), arrow)},
        {"cyclic_group_2_regular", cat::regular_action(cat::cyclic_group_monoidal(2), arrow)},
        {"cyclic_shift_2_4", cat::cyclic_shift_action(2, 4)},
        {"cyclic_shift_3_3", cat::cyclic_shift_action(3, 3)}};
    for (const auto& [name, act] : actions) add("action/" + name + ".json", json_io::write_action(act));

    {
        const auto shift = cat::cyclic_shift_action(2, 4);
        const auto& c = shift.on;
        json_io::ExactOpticDocument d{shift, shift, {0, c.morphism_index("g1"), c.morphism_index("g3"), 0, 0, 0, 0}};
        add("optic/cyclic_shift_rotation.json", json_io::write_exact_optic(d));
        const auto reg = cat::regular_action(cat::walking_iso_xor(), arrow);
        // The endpoints with the most classes, first in index order.
        const auto n = reg.on.num_objects();
        std::size_t best = 0, best_size = 0;
        for (std::size_t i = 0; i < n * n * n * n; ++i) {
            const auto size = optic_coend(reg, reg, i / (n * n * n), i / (n * n) % n, i / n % n, i % n).quotient.size();
            if (size > best_size) {
                best = i;
                best_size = size;
            }
        }
        const auto sp = optic_coend(reg, reg, best / (n * n * n), best / (n * n) % n, best / n % n, best % n);
        add("optic/walking_iso_xor_regular.json",
            json_io::write_exact_optic({reg, reg, sp.member(sp.quotient.representative(sp.quotient.size() - 1))}));
    }

    add("lens/first_bit.json", json_io::write_lens(first_bit_lens()));
    add("lens/forget.json", json_io::write_lens(forget_lens()));
    add("lens/identity.json", json_io::write_lens(identity_lens()));
    add("prism/lower.json", json_io::write_prism(lower_prism()));
    add("prism/one.json", json_io::write_prism(one_prism()));
    add("prism/identity.json", json_io::write_prism(identity_prism()));

    for (const auto& [name, p] : polys()) add("poly/" + name + ".json", json_io::write_poly(p));
    add("nat_count/y2_to_y.json", write_nat_count({monomials({{1, 2}}), monomials({{1, 1}}), 2}));
    add("nat_count/y_to_y2.json", write_nat_count({monomials({{1, 1}}), monomials({{1, 2}}), 1}));

    {
        // ⟨X, T⟩ -> ⟨X, T⟩ -> ⟨R, T⟩ -> ⟨R, T⟩ over hom, terminal, hom.
        const auto x = arrow_two_to_three(), t = arrow_terminal(), r = yoneda(arrow, "0");
        const auto h = hom_profunctor(arrow);
        const auto o1 = middle_compound(h, x, t, x, t);
        const auto o2 = middle_compound(terminal_profunctor(arrow, arrow), x, t, r, t);
        const auto o3 = middle_compound(h, r, t, r, t);
        add("compound_chain/walking_arrow.json", write_compound_chain({{o1, o2, o3}}));
    }

    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

inline void write_corpus(const std::filesystem::path& dir) {
    for (const auto& [path, doc] : bundle_corpus()) {
        const auto full = dir / path;
        std::filesystem::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary);
        if (!out) throw Error("cannot write " + full.generic_string());
        out << json_io::dump(doc);
    }
}

} // namespace optika::corpus
