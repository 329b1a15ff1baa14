#pragma once

// Law suites over a corpus. Every law reports PASS or FAIL with the first
// counterexample and the file it came from.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "optika/corpus.hpp"

namespace optika::laws {

using corpus::Corpus;
using corpus::Named;

struct Config {
    std::size_t max_card = 4;
};

struct LawResult {
    std::string name;
    bool pass = true;
    std::string detail;
    std::size_t instances = 0;
};

struct SuiteReport {
    std::string name;
    std::string corpus;
    std::vector<LawResult> laws;
    double wall_ms = 0;

    bool ok() const {
        return std::all_of(laws.begin(), laws.end(), [](const LawResult& l) { return l.pass; });
    }
};

// --- registry ---------------------------------------------------------------------

struct Invariant {
    std::string module;
    std::string statement;
};

inline const std::vector<Invariant>& module_invariants() {
    static const std::vector<Invariant> inv{
        {"fincat", "functors preserve composition (exhaustive)"},
        {"fincat", "|Nat(Y_a, G)| = |G(a)|"},
        {"fincat", "(c x d)^op = c^op x d^op"},
        {"coend", "co-wedge condition"},
        {"coend", "idempotence on a quotiented discrete restriction"},
        {"coend", "co-Yoneda bijection"},
        {"coend", "products preserve coends"},
        {"kan", "pi_compose is well defined on classes"},
        {"kan", "pi_compose is associative"},
        {"kan", "identity classes are units for pi_compose"},
        {"kan", "left_kan of a representable is pi"},
        {"prof", "composition is associative via fubini"},
        {"prof", "the action is functorial in 2-cells"},
        {"prof", "discrete coends are plain coproducts"},
        {"simple_optics", "coend soundness of compose_optics"},
        {"simple_optics", "associativity of compose_optics"},
        {"simple_optics", "unit laws with identity_optic"},
        {"simple_optics", "concretization is a bijection"},
        {"poly", "polylens count = nat_oracle count"},
        {"poly", "polylens_to_nat is injective and respects composition"},
        {"poly", "ommatidium normal form is invariant under zig-zags"},
        {"poly", "discrete compound composition = polylens composition"},
        {"poly", "compound identity and associativity"},
    };
    return inv;
}

struct LawSpec {
    LawSpec(std::string s, std::string l, int inv = -1, std::string r = {})
        : suite(std::move(s)), law(std::move(l)), invariant(inv), regime(std::move(r)) {}

    std::string suite;
    std::string law;
    int invariant;       // index into module_invariants(), or -1
    std::string regime;  // "exact", "normalform" or empty
};

inline const std::vector<LawSpec>& registry() {
    static const std::vector<LawSpec> specs{
        {"corpus", "round_trip"},
        {"corpus", "loads"},
        {"fincat", "category_axioms"},
        {"fincat", "functoriality", 0},
        {"fincat", "yoneda_count", 1},
        {"fincat", "opposite_product", 2},
        {"fincat", "copresheaf_axioms"},
        {"coend", "cowedge", 3},
        {"coend", "idempotence", 4},
        {"coend", "products_preserve", 6},
        {"coyoneda", "bijection", 5},
        {"kan", "composition"},
        {"kan", "lan_yoneda_is_pi", 10},
        {"pi", "well_defined", 7},
        {"pi", "associativity", 8},
        {"pi", "unit", 9},
        {"prof", "matrix_action"},
        {"prof", "unit"},
        {"prof", "associativity", 11},
        {"prof", "action_composite"},
        {"prof", "two_cell_functoriality", 12},
        {"prof", "discrete_collapse", 13},
        {"simple_optics", "monoidal_axioms", -1, "exact"},
        {"simple_optics", "classes_match_zigzag", -1, "exact"},
        {"simple_optics", "coend_soundness", 14, "exact"},
        {"simple_optics", "unit_exact", 16, "exact"},
        {"simple_optics", "associativity_exact", 15, "exact"},
        {"simple_optics", "unit_normalform", 16, "normalform"},
        {"simple_optics", "associativity_normalform", 15, "normalform"},
        {"simple_optics", "lens_roundtrip", 17, "normalform"},
        {"simple_optics", "prism_roundtrip", 17, "normalform"},
        {"simple_optics", "concretization_cardinality", 17, "normalform"},
        {"poly", "nat_counts"},
        {"poly", "formula_vs_oracle", 18},
        {"poly", "nat_injective", 19},
        {"poly", "pointwise_composition", 19},
        {"poly", "ommatidium_invariance", 20},
        {"compound", "discrete_vs_polylens", 21},
        {"compound", "identity_unit", 22},
        {"compound", "associativity", 22},
        {"compound", "witness_accept_reject"},
    };
    return specs;
}

inline std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& s : registry()) {
        if (out.empty() || out.back() != s.suite) out.push_back(s.suite);
    }
    return out;
}

inline const LawSpec* find_spec(const std::string& suite, const std::string& law) {
    for (const auto& s : registry()) {
        if (s.suite == suite && s.law == law) return &s;
    }
    return nullptr;
}

// Suites covering each module invariant. A well-formed registry has exactly one.
inline std::vector<std::vector<std::string>> invariant_suites() {
    std::vector<std::vector<std::string>> out(module_invariants().size());
    for (const auto& s : registry()) {
        if (s.invariant < 0) continue;
        auto& v = out[static_cast<std::size_t>(s.invariant)];
        if (std::find(v.begin(), v.end(), s.suite) == v.end()) v.push_back(s.suite);
    }
    return out;
}

// --- bookkeeping --------------------------------------------------------------------

// Counts checked instances and keeps the first counterexample.
class Tally {
public:
    template <class Fn>
    void check(bool ok, const std::string& where, Fn&& what) {
        ++instances;
        if (!ok) fail(where, what());
    }

    void fail(const std::string& where, const std::string& what) {
        if (failures++ == 0) first = where.empty() ? what : where + ": " + what;
    }

    // Runs fn, turning a library error into a failure at `where`.
    template <class Fn>
    void guard(const std::string& where, Fn&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            fail(where, std::string("error: ") + e.what());
        }
    }

    std::size_t instances = 0;
    std::size_t failures = 0;
    std::string first;
    std::string note;
};

class SuiteRun {
public:
    SuiteRun(std::string name, std::function<bool(const std::string&)> want)
        : want_(std::move(want)), start_(std::chrono::steady_clock::now()) {
        report_.name = std::move(name);
    }

    // Runs one law. `min_instances` is the fewest instances that count as coverage.
    template <class Fn>
    void law(const std::string& name, std::size_t min_instances, Fn&& body) {
        if (want_ && !want_(name)) return;
        Tally t;
        t.guard("", [&] { body(t); });
        LawResult r{name, true, {}, t.instances};
        if (t.failures > 0) {
            r.pass = false;
            r.detail = t.first;
            if (t.failures > 1) r.detail += " (" + std::to_string(t.failures - 1) + " more)";
        } else if (t.instances < min_instances) {
            r.pass = false;
            r.detail = std::to_string(t.instances) + " instances, need at least " + std::to_string(min_instances);
        } else if (t.instances == 0) {
            r.detail = "vacuous: no instances in the corpus";
        } else {
            r.detail = std::to_string(t.instances) + " instances";
            if (!t.note.empty()) r.detail += ", " + t.note;
        }
        report_.laws.push_back(std::move(r));
    }

    void describe(std::string corpus) { report_.corpus = std::move(corpus); }

    SuiteReport finish() {
        report_.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        return std::move(report_);
    }

private:
    std::function<bool(const std::string&)> want_;
    std::chrono::steady_clock::time_point start_;
    SuiteReport report_;
};

// --- small helpers ------------------------------------------------------------------

inline FinSet atoms(std::size_t n, const std::string& prefix = "e") {
    std::vector<Atom> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(prefix + std::to_string(i));
    return FinSet(std::move(xs));
}

inline std::string first_violation(const ValidationReport& r) { return r.violations.empty() ? "" : r.violations.front(); }

inline std::size_t ipow(std::size_t x, std::size_t e) {
    std::size_t r = 1;
    while (e-- > 0) r *= x;
    return r;
}

// The i-th function n -> m in lexicographic order (last argument fastest).
inline Table nth_table(std::size_t i, std::size_t n, std::size_t m) {
    Table t(n, 0);
    for (std::size_t k = n; k-- > 0;) {
        t[k] = i % m;
        i /= m;
    }
    return t;
}

inline Table random_table(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    Table t(n, 0);
    for (auto& v : t) v = rng() % m;
    return t;
}

template <class T>
std::string count_of(const std::vector<T>& v, const std::string& what) {
    return std::to_string(v.size()) + " " + what;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

inline std::vector<std::vector<ClassMember>> sorted_classes(std::vector<std::vector<ClassMember>> classes) {
    for (auto& c : classes) std::sort(c.begin(), c.end());
    std::sort(classes.begin(), classes.end());
    return classes;
}

// Classes of diagonal elements under the generating relation, by breadth-first search
// over an explicit adjacency list.
inline std::vector<std::vector<ClassMember>> zigzag_classes(const FinBifunctor& d) {
    const auto& c = d.base;
    const auto n = c.num_objects();
    std::vector<ClassMember> nodes;
    std::vector<std::vector<std::size_t>> index(n);
    for (std::size_t o = 0; o < n; ++o) {
        for (std::size_t e = 0; e < d.at(o, o).size(); ++e) {
            index[o].push_back(nodes.size());
            nodes.push_back({o, e});
        }
    }
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        const auto s = c.src(f), t = c.tgt(f);
        for (std::size_t x = 0; x < d.at(t, s).size(); ++x) {
            const auto u = index[s][d.left[f][s][x]];
            const auto v = index[t][d.right[f][t][x]];
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    }
    std::vector<bool> seen(nodes.size(), false);
    std::vector<std::vector<ClassMember>> out;
    for (std::size_t start = 0; start < nodes.size(); ++start) {
        if (seen[start]) continue;
        out.emplace_back();
        std::deque<std::size_t> queue{start};
        seen[start] = true;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            out.back().push_back(nodes[u]);
            for (auto v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    return sorted_classes(std::move(out));
}

// --- corpus views -------------------------------------------------------------------

inline std::vector<Named<FinFunctor>> all_functors(const Corpus& c) {
    auto out = c.functors;
    for (const auto& k : c.kan_chains) {
        out.push_back({k.file + "#inner", k.value.p});
        out.push_back({k.file + "#outer", k.value.q});
    }
    for (const auto& p : c.pi_chains) {
        for (std::size_t i = 0; i < p.value.functors.size(); ++i) {
            out.push_back({p.file + "#" + std::to_string(i), p.value.functors[i]});
        }
    }
    return out;
}

template <class T>
std::vector<Named<T>> dedupe(const std::vector<Named<T>>& xs) {
    std::vector<Named<T>> out;
    for (const auto& x : xs) {
        if (std::none_of(out.begin(), out.end(), [&](const Named<T>& y) { return y.value == x.value; })) out.push_back(x);
    }
    return out;
}

// Every co-presheaf mentioned anywhere in the corpus, first occurrence kept.
inline std::vector<Named<CoPresheaf>> all_copresheaves(const Corpus& c) {
    auto out = c.copresheaves;
    for (const auto& k : c.kan_chains) out.push_back({k.file, k.value.copresheaf});
    for (const auto& p : c.prof_cases) out.push_back({p.file, p.value.a});
    for (const auto& m : c.matrix_actions) out.push_back({m.file, m.value.a});
    for (const auto& t : c.two_cells) out.push_back({t.file, t.value.a});
    for (const auto& ch : c.compound_chains) {
        for (const auto& o : ch.value.optics) {
            for (const auto* x : {&o.a, &o.b, &o.s, &o.t}) out.push_back({ch.file, *x});
        }
    }
    return dedupe(out);
}

inline bool valid(const FinCategory& c) { return validate_category(c).ok(); }
inline bool valid(const FinFunctor& f) { return valid(f.source) && valid(f.target) && validate_functor(f).ok(); }
inline bool valid(const CoPresheaf& f) { return valid(f.base) && validate_copresheaf(f).ok(); }
inline bool valid(const FinProfunctor& p) {
    return valid(p.source) && valid(p.target) && validate_profunctor(p).ok();
}

// --- corpus -----------------------------------------------------------------------

inline json_io::json reserialize(const corpus::Document& d) {
    using namespace json_io;
    const Node n(d.value, d.file);
    const auto& k = d.kind;
    if (k == "category") return write_category(read_category(n));
    if (k == "functor") return write_functor(read_functor(n));
    if (k == "copresheaf") return write_copresheaf(read_copresheaf(n));
    if (k == "bifunctor") return write_bifunctor(read_bifunctor(n));
    if (k == "kan_chain") return corpus::write_kan_chain(corpus::read_kan_chain(n));
    if (k == "pi_chain") return corpus::write_pi_chain(corpus::read_pi_chain(n));
    if (k == "prof_case") return corpus::write_prof_case(corpus::read_prof_case(n));
    if (k == "matrix_action") return corpus::write_matrix_action(corpus::read_matrix_action(n));
    if (k == "two_cell") return corpus::write_two_cell(corpus::read_two_cell(n));
    if (k == "action") return write_action(read_action(n));
    if (k == "optic") return write_exact_optic(read_exact_optic(n));
    if (k == "lens") return write_lens(read_lens(n));
    if (k == "prism") return write_prism(read_prism(n));
    if (k == "polynomial") return write_poly(read_poly(n));
    if (k == "nat_count") return corpus::write_nat_count(corpus::read_nat_count(n));
    if (k == "compound_chain") return corpus::write_compound_chain(corpus::read_compound_chain(n));
    n["kind"].fail("unknown kind '" + k + "'");
}

inline SuiteReport corpus_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("corpus", std::move(want));
    run.describe(count_of(c.documents, "documents"));
    // serialize∘parse is the identity on the stored document, and parse∘serialize on
    // the value: reading the reserialized text gives the same text again.
    run.law("round_trip", 1, [&](Tally& t) {
        for (const auto& d : c.documents) {
            t.guard(d.file, [&] {
                const auto once = reserialize(d);
                const auto text = json_io::dump(once);
                const auto twice = reserialize({d.file, d.kind, json_io::parse_text(text, d.file)});
                t.check(once == d.value && json_io::dump(twice) == text, d.file,
                        [] { return std::string("document differs after serialize∘parse"); });
            });
        }
    });
    run.law("loads", 1, [&](Tally& t) {
        std::map<std::string, std::size_t> kinds;
        for (const auto& d : c.documents) {
            ++kinds[d.kind];
            t.check(true, d.file, [] { return std::string(); });
        }
        std::vector<std::string> parts;
        for (const auto& [k, n] : kinds) parts.push_back(k + " " + std::to_string(n));
        t.note = join(parts);
    });
    return run.finish();
}

// --- fincat -----------------------------------------------------------------------

// Functoriality checked from the definition, independently of validate_functor.
inline std::optional<std::string> functoriality_counterexample(const FinFunctor& p) {
    const auto& c = p.source;
    const auto& d = p.target;
    if (p.obj_map.size() != c.num_objects() || p.mor_map.size() != c.num_morphisms()) {
        return "tables do not cover the source category";
    }
    for (auto o : p.obj_map) {
        if (o >= d.num_objects()) return "an object image is out of range";
    }
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        const auto pf = p.mor_map[f];
        if (pf >= d.num_morphisms()) return "image of " + c.morphism(f).id + " is out of range";
        if (d.src(pf) != p.obj_map[c.src(f)] || d.tgt(pf) != p.obj_map[c.tgt(f)]) {
            return "image of " + c.morphism(f).id + " is " + d.morphism(pf).id + " with the wrong endpoints";
        }
    }
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        const auto img = p.mor_map[c.identity(o)];
        if (img != d.identity(p.obj_map[o])) return "identity of " + c.object(o) + " goes to " + d.morphism(img).id;
    }
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
            if (c.tgt(f) != c.src(g)) continue;
            const auto gf = c.compose(g, f);
            const auto& gn = c.morphism(g).id;
            const auto& fn = c.morphism(f).id;
            if (gf == npos) return "source composite " + gn + "∘" + fn + " missing";
            const auto lhs = p.mor_map[gf];
            const auto rhs = d.compose(p.mor_map[g], p.mor_map[f]);
            if (lhs != rhs) {
                return "F(" + gn + "∘" + fn + ") = " + d.morphism(lhs).id + " but F(" + gn + ")∘F(" + fn +
                       ") = " + (rhs == npos ? std::string("undefined") : d.morphism(rhs).id);
            }
        }
    }
    return std::nullopt;
}

inline SuiteReport fincat_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("fincat", std::move(want));
    const auto functors = all_functors(c);
    const auto copresheaves = all_copresheaves(c);
    run.describe(count_of(c.categories, "categories") + ", " + count_of(functors, "functors") + ", " +
                 count_of(copresheaves, "co-presheaves"));

    run.law("category_axioms", 1, [&](Tally& t) {
        for (const auto& [file, cat] : c.categories) {
            const auto r = validate_category(cat);
            t.check(r.ok(), file, [&] { return first_violation(r); });
        }
    });
    run.law("functoriality", 1, [&](Tally& t) {
        for (const auto& [file, f] : functors) {
            if (!valid(f.source) || !valid(f.target)) continue;
            const auto bad = functoriality_counterexample(f);
            t.check(!bad, file, [&] { return *bad; });
        }
    });
    run.law("yoneda_count", 1, [&](Tally& t) {
        for (const auto& [file, cat] : c.categories) {
            if (!valid(cat)) continue;
            std::vector<Named<CoPresheaf>> gs;
            for (std::size_t b = 0; b < cat.num_objects(); ++b) gs.push_back({"Y_" + cat.object(b), yoneda(cat, b)});
            for (const auto& g : copresheaves) {
                if (g.value.base == cat && valid(g.value)) gs.push_back(g);
            }
            for (const auto& [gname, g] : gs) {
                for (std::size_t a = 0; a < cat.num_objects(); ++a) {
                    const auto n = enumerate_nats(yoneda(cat, a), g).size();
                    t.check(n == g.fiber[a].size(), file, [&] {
                        return "|Nat(Y_" + cat.object(a) + ", " + gname + ")| = " + std::to_string(n) + " but |G(" +
                               cat.object(a) + ")| = " + std::to_string(g.fiber[a].size());
                    });
                }
            }
        }
    });
    run.law("opposite_product", 1, [&](Tally& t) {
        for (const auto& x : c.categories) {
            if (!valid(x.value)) continue;
            for (const auto& y : c.categories) {
                if (!valid(y.value)) continue;
                const bool ok = opposite(product_category(x.value, y.value)) ==
                                product_category(opposite(x.value), opposite(y.value));
                t.check(ok, x.file + " x " + y.file, [] { return std::string("(c x d)^op differs from c^op x d^op"); });
            }
        }
    });
    run.law("copresheaf_axioms", 1, [&](Tally& t) {
        for (const auto& [file, f] : copresheaves) {
            if (!valid(f.base)) continue;
            const auto r = validate_copresheaf(f);
            t.check(r.ok(), file, [&] { return first_violation(r); });
        }
    });
    return run.finish();
}

// --- coend ------------------------------------------------------------------------

inline SuiteReport coend_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("coend", std::move(want));
    run.describe(count_of(c.bifunctors, "bifunctors"));

    run.law("cowedge", 1, [&](Tally& t) {
        for (const auto& [file, d] : c.bifunctors) {
            const auto r = validate_bifunctor(d);
            if (!valid(d.base) || !r.ok()) {
                t.fail(file, "not a bifunctor: " + first_violation(r));
                continue;
            }
            const auto q = coend(d);
            const auto& cat = d.base;
            for (std::size_t f = 0; f < cat.num_morphisms(); ++f) {
                const auto s = cat.src(f), u = cat.tgt(f);
                for (std::size_t x = 0; x < d.at(u, s).size(); ++x) {
                    const auto l = q.inject[s][d.left[f][s][x]];
                    const auto rr = q.inject[u][d.right[f][u][x]];
                    t.check(l == rr, file, [&] {
                        return "inject(" + cat.object(s) + ")(left " + cat.morphism(f).id + " " + d.at(u, s)[x] +
                               ") = " + q.carrier[l] + " but inject(" + cat.object(u) + ")(right ...) = " + q.carrier[rr];
                    });
                }
            }
            t.check(sorted_classes(q.classes) == zigzag_classes(d), file,
                    [] { return std::string("classes differ from the breadth-first zig-zag partition"); });
        }
    });
    run.law("idempotence", 1, [&](Tally& t) {
        for (const auto& [file, d] : c.bifunctors) {
            if (!valid(d.base) || !validate_bifunctor(d).ok()) continue;
            const auto q = coend(d);
            // The carrier as a bifunctor on the one-object discrete category.
            const auto one = catalog::discrete({"*"});
            const FinBifunctor again{one, {{q.carrier}}, {{identity_table(q.size())}}, {{identity_table(q.size())}}};
            const auto q2 = coend(again);
            Table fwd(q.size()), bwd(q2.size(), npos);
            for (std::size_t k = 0; k < q.size(); ++k) fwd[k] = q2.inject[0][k];
            for (std::size_t k = 0; k < q.size(); ++k) {
                if (fwd[k] < bwd.size()) bwd[fwd[k]] = k;
            }
            const auto err = check_inverse(fwd, bwd, q.size(), q2.size());
            t.check(!err, file, [&] { return "no bijection with the re-quotiented carrier: " + *err; });
        }
    });
    run.law("products_preserve", 1, [&](Tally& t) {
        for (const auto& [file, d] : c.bifunctors) {
            if (!valid(d.base) || !validate_bifunctor(d).ok()) continue;
            for (std::size_t n = 0; n <= 2; ++n) {
                const auto w = product_preservation_check(atoms(n, "s"), d);
                t.check(w.verified, file, [&] { return "|S| = " + std::to_string(n) + ": " + w.detail; });
            }
        }
    });
    return run.finish();
}

inline SuiteReport coyoneda_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("coyoneda", std::move(want));
    const auto fs = all_copresheaves(c);
    run.describe(count_of(fs, "co-presheaves"));
    run.law("bijection", 20, [&](Tally& t) {
        std::size_t largest = 0;
        for (const auto& [file, f] : fs) {
            if (!valid(f)) continue;
            for (const auto& s : f.fiber) largest = std::max(largest, s.size());
            for (std::size_t a = 0; a < f.base.num_objects(); ++a) {
                const auto res = coyoneda(f, a);
                t.check(res.witness.verified && res.coend.size() == f.fiber[a].size(), file, [&] {
                    return "at " + f.base.object(a) + ": " +
                           (res.witness.verified ? "carrier has the wrong size" : res.witness.detail);
                });
            }
        }
        t.note = "fibers <= " + std::to_string(largest);
    });
    return run.finish();
}

// --- kan and pi ---------------------------------------------------------------------

// Π_P(c, d) as a partition of the triples (c1, h: P c1 -> d, k: c -> c1), found by
// breadth-first search over (c1, h∘P f, k) ~ (c2, h, f∘k) for f: c1 -> c2.
inline std::vector<std::set<std::tuple<std::size_t, std::size_t, std::size_t>>> pi_oracle(const FinFunctor& p,
                                                                                          std::size_t c,
                                                                                          std::size_t d) {
    using Triple = std::tuple<std::size_t, std::size_t, std::size_t>;
    const auto& cc = p.source;
    const auto& dc = p.target;
    std::vector<Triple> nodes;
    std::map<Triple, std::size_t> index;
    for (std::size_t c1 = 0; c1 < cc.num_objects(); ++c1) {
        for (auto h : dc.hom(p.obj_map[c1], d)) {
            for (auto k : cc.hom(c, c1)) {
                index[{c1, h, k}] = nodes.size();
                nodes.push_back({c1, h, k});
            }
        }
    }
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (std::size_t f = 0; f < cc.num_morphisms(); ++f) {
        const auto c1 = cc.src(f), c2 = cc.tgt(f);
        for (auto h : dc.hom(p.obj_map[c2], d)) {
            for (auto k : cc.hom(c, c1)) {
                const auto u = index.at({c1, dc.compose(h, p.mor_map[f]), k});
                const auto v = index.at({c2, h, cc.compose(f, k)});
                adj[u].push_back(v);
                adj[v].push_back(u);
            }
        }
    }
    std::vector<bool> seen(nodes.size(), false);
    std::vector<std::set<Triple>> out;
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        if (seen[s]) continue;
        out.emplace_back();
        std::deque<std::size_t> queue{s};
        seen[s] = true;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            out.back().insert(nodes[u]);
            for (auto v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_identity_functor(const FinFunctor& f) { return f.source == f.target && f == identity_functor(f.source); }

inline SuiteReport kan_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("kan", std::move(want));
    const auto functors = dedupe(all_functors(c));
    run.describe(count_of(c.kan_chains, "chains") + ", " + count_of(functors, "functors"));

    run.law("composition", 10, [&](Tally& t) {
        std::size_t identity = 0, discrete = 0, arrow = 0;
        const auto walking_arrow = catalog::walking_arrow();
        for (const auto& [file, k] : c.kan_chains) {
            if (!valid(k.copresheaf) || !valid(k.p) || !valid(k.q)) {
                t.fail(file, "chain has an invalid functor or co-presheaf");
                continue;
            }
            const auto w = kan_composition_check(k.copresheaf, k.p, k.q);
            t.check(w.verified, file, [&] { return w.detail; });
            identity += is_identity_functor(k.p) || is_identity_functor(k.q);
            discrete += k.p.source.is_discrete() && k.p.target.is_discrete() && k.q.target.is_discrete();
            arrow += k.p.source == walking_arrow;
        }
        if (identity == 0) t.fail("", "no identity chain in the corpus");
        if (discrete == 0) t.fail("", "no discrete chain in the corpus");
        if (arrow == 0) t.fail("", "no walking-arrow chain in the corpus");
        t.note = "identity " + std::to_string(identity) + ", discrete " + std::to_string(discrete) + ", walking arrow " +
                 std::to_string(arrow);
    });
    run.law("lan_yoneda_is_pi", 1, [&](Tally& t) {
        for (const auto& [file, p] : functors) {
            if (!valid(p)) continue;
            const auto pp = pi_profunctor(p);
            const auto& cc = p.source;
            const auto& dc = p.target;
            for (std::size_t cobj = 0; cobj < cc.num_objects(); ++cobj) {
                const auto lan = left_kan(yoneda(cc, cobj), p);
                for (std::size_t d = 0; d < dc.num_objects(); ++d) {
                    std::vector<std::set<std::tuple<std::size_t, std::size_t, std::size_t>>> got;
                    for (const auto& cls : lan.fibers[d].classes) {
                        got.emplace_back();
                        for (const auto& m : cls) {
                            auto [h, k] = lan.integrands[d].at(m.object, m.object).decode_pair(m.element);
                            got.back().insert({m.object, dc.hom(p.obj_map[m.object], d)[h], cc.hom(cobj, m.object)[k]});
                        }
                    }
                    std::sort(got.begin(), got.end());
                    const bool ok = lan.copresheaf.fiber[d] == pp.profunctor.at(cobj, d) && got == pi_oracle(p, cobj, d);
                    t.check(ok, file, [&] {
                        return "Lan of Y_" + cc.object(cobj) + " at " + dc.object(d) + " differs from pi";
                    });
                }
                for (std::size_t g = 0; g < dc.num_morphisms(); ++g) {
                    t.check(lan.copresheaf.action[g] == pp.profunctor.co[g][cobj], file, [&] {
                        return "action of " + dc.morphism(g).id + " on Lan of Y_" + cc.object(cobj) + " differs from pi";
                    });
                }
            }
        }
    });
    return run.finish();
}

inline SuiteReport pi_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("pi", std::move(want));
    run.describe(count_of(c.pi_chains, "chains"));
    auto usable = [](const corpus::PiChain& ch) {
        return std::all_of(ch.functors.begin(), ch.functors.end(), [](const FinFunctor& f) { return valid(f); });
    };

    run.law("well_defined", 1, [&](Tally& t) {
        for (const auto& [file, ch] : c.pi_chains) {
            if (!usable(ch)) continue;
            for (std::size_t i = 0; i + 1 < ch.functors.size(); ++i) {
                const auto& p = ch.functors[i];
                const auto& q = ch.functors[i + 1];
                const auto pp = pi_profunctor(p), pq = pi_profunctor(q), pqp = pi_profunctor(compose_functors(p, q));
                for (std::size_t a = 0; a < p.source.num_objects(); ++a) {
                    for (std::size_t b = 0; b < p.target.num_objects(); ++b) {
                        for (std::size_t e = 0; e < q.target.num_objects(); ++e) {
                            const auto& qx = pp.entry(a, b);
                            const auto& qy = pq.entry(b, e);
                            for (std::size_t x = 0; x < qx.size(); ++x) {
                                for (std::size_t y = 0; y < qy.size(); ++y) {
                                    const auto expected = pi_compose(pp, pq, pqp, a, b, e, x, y);
                                    for (const auto& mx : qx.classes[x]) {
                                        for (const auto& my : qy.classes[y]) {
                                            const auto got = pi_compose_members(pp, pq, pqp, a, b, e, mx, my);
                                            t.check(got == expected, file, [&] {
                                                return "members of " + qx.carrier[x] + " and " + qy.carrier[y] +
                                                       " compose to different classes";
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    });
    run.law("associativity", 1, [&](Tally& t) {
        for (const auto& [file, ch] : c.pi_chains) {
            if (!usable(ch)) continue;
            for (std::size_t i = 0; i + 2 < ch.functors.size(); ++i) {
                const auto& p = ch.functors[i];
                const auto& q = ch.functors[i + 1];
                const auto& r = ch.functors[i + 2];
                const auto qp_f = compose_functors(p, q), rq_f = compose_functors(q, r);
                if (!(compose_functors(qp_f, r) == compose_functors(p, rq_f))) {
                    t.fail(file, "(R∘Q)∘P and R∘(Q∘P) differ");
                    continue;
                }
                const auto pp = pi_profunctor(p), pq = pi_profunctor(q), pr = pi_profunctor(r);
                const auto qp = pi_profunctor(qp_f), rq = pi_profunctor(rq_f), rqp = pi_profunctor(compose_functors(qp_f, r));
                for (std::size_t a = 0; a < p.source.num_objects(); ++a) {
                    for (std::size_t b = 0; b < q.source.num_objects(); ++b) {
                        for (std::size_t cc = 0; cc < r.source.num_objects(); ++cc) {
                            for (std::size_t d = 0; d < r.target.num_objects(); ++d) {
                                for (std::size_t x = 0; x < pp.entry(a, b).size(); ++x) {
                                    for (std::size_t y = 0; y < pq.entry(b, cc).size(); ++y) {
                                        for (std::size_t z = 0; z < pr.entry(cc, d).size(); ++z) {
                                            const auto left =
                                                pi_compose(qp, pr, rqp, a, cc, d, pi_compose(pp, pq, qp, a, b, cc, x, y), z);
                                            const auto right =
                                                pi_compose(pp, rq, rqp, a, b, d, x, pi_compose(pq, pr, rq, b, cc, d, y, z));
                                            t.check(left == right, file, [&] {
                                                return "(x;y);z = " + rqp.entry(a, d).carrier[left] + " but x;(y;z) = " +
                                                       rqp.entry(a, d).carrier[right];
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    });
    run.law("unit", 1, [&](Tally& t) {
        for (const auto& [file, ch] : c.pi_chains) {
            if (!usable(ch)) continue;
            for (const auto& p : ch.functors) {
                const auto pp = pi_profunctor(p);
                const auto idc = pi_profunctor(identity_functor(p.source));
                const auto idd = pi_profunctor(identity_functor(p.target));
                for (std::size_t a = 0; a < p.source.num_objects(); ++a) {
                    for (std::size_t d = 0; d < p.target.num_objects(); ++d) {
                        for (std::size_t x = 0; x < pp.entry(a, d).size(); ++x) {
                            const auto left = pi_compose(idc, pp, pp, a, a, d, pi_unit(idc, a), x);
                            const auto right = pi_compose(pp, idd, pp, a, d, d, x, pi_unit(idd, d));
                            t.check(left == x && right == x, file, [&] {
                                return "unit moves " + pp.entry(a, d).carrier[x];
                            });
                        }
                    }
                }
            }
        }
    });
    return run.finish();
}

// --- prof -------------------------------------------------------------------------

inline bool discrete_profunctor(const FinProfunctor& p) { return p.source.is_discrete() && p.target.is_discrete(); }

inline SuiteReport prof_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("prof", std::move(want));
    run.describe(count_of(c.prof_cases, "cases") + ", " + count_of(c.matrix_actions, "matrix actions") + ", " +
                 count_of(c.two_cells, "2-cell cases"));
    auto usable = [](const corpus::ProfCase& pc) { return valid(pc.p) && valid(pc.q) && valid(pc.r) && valid(pc.a); };

    run.law("matrix_action", 1, [&](Tally& t) {
        for (const auto& [file, m] : c.matrix_actions) {
            if (!valid(m.p) || !valid(m.a)) {
                t.fail(file, "invalid profunctor or co-presheaf");
                continue;
            }
            const auto act = prof_action_full(m.p, m.a);
            const auto got = act.result.fiber[m.object].size();
            std::size_t sum = 0;
            for (std::size_t n = 0; n < m.p.source.num_objects(); ++n) sum += m.p.at(n, m.object).size() * m.a.fiber[n].size();
            // The witness: classes are singletons hitting every (n, x, α) exactly once.
            std::set<std::tuple<std::size_t, std::size_t, std::size_t>> hit;
            bool singletons = true;
            for (const auto& cls : act.quotients[m.object].classes) {
                singletons = singletons && cls.size() == 1;
                auto [x, al] = act.integrands[m.object].at(cls.front().object, cls.front().object).decode_pair(cls.front().element);
                hit.insert({cls.front().object, x, al});
            }
            const bool discrete = discrete_profunctor(m.p);
            const bool ok = got == m.expected && (!discrete || (got == sum && singletons && hit.size() == sum));
            t.check(ok, file, [&] {
                return "|(p•a)(" + m.p.target.object(m.object) + ")| = " + std::to_string(got) + ", expected " +
                       std::to_string(m.expected) + ", matrix product " + std::to_string(sum);
            });
        }
    });
    run.law("unit", 1, [&](Tally& t) {
        for (const auto& [file, pc] : c.prof_cases) {
            if (!usable(pc)) continue;
            for (const auto* p : {&pc.p, &pc.q, &pc.r}) {
                const auto w = unit_check(*p);
                t.check(w.verified, file, [&] { return "hom ⋄ p ≅ p ≅ p ⋄ hom: " + w.detail; });
            }
            const auto w = action_unit_check(pc.a);
            t.check(w.verified, file, [&] { return "hom • a ≅ a: " + w.detail; });
        }
    });
    run.law("associativity", 1, [&](Tally& t) {
        for (const auto& [file, pc] : c.prof_cases) {
            if (!usable(pc)) continue;
            const auto w = associativity_check(pc.p, pc.q, pc.r);
            t.check(w.verified, file, [&] { return w.detail; });
        }
    });
    run.law("action_composite", 1, [&](Tally& t) {
        for (const auto& [file, pc] : c.prof_cases) {
            if (!usable(pc)) continue;
            const auto w = action_composition_check(pc.p, pc.q, pc.a);
            t.check(w.verified, file, [&] { return "(p⋄q)•a ≅ q•(p•a): " + w.detail; });
            const auto pa = prof_action(pc.p, pc.a);
            const auto w2 = action_composition_check(pc.q, pc.r, pa);
            t.check(w2.verified, file, [&] { return "(q⋄r)•(p•a) ≅ r•(q•(p•a)): " + w2.detail; });
        }
    });
    run.law("two_cell_functoriality", 1, [&](Tally& t) {
        for (const auto& [file, tc] : c.two_cells) {
            if (!valid(tc.p) || !valid(tc.p2) || !valid(tc.p3) || !valid(tc.a)) {
                t.fail(file, "invalid profunctor or co-presheaf");
                continue;
            }
            const auto r1 = validate_prof_nat(tc.p, tc.p2, tc.h);
            const auto r2 = validate_prof_nat(tc.p2, tc.p3, tc.h2);
            if (!r1.ok() || !r2.ok()) {
                t.fail(file, "2-cell is not natural: " + first_violation(r1.ok() ? r2 : r1));
                continue;
            }
            const auto pa = prof_action(tc.p, tc.a);
            const auto p2a = prof_action(tc.p2, tc.a);
            const auto ha = act_on_prof_nat(tc.p, tc.p2, tc.h, tc.a);
            const auto rn = validate_nat(pa, p2a, ha);
            t.check(rn.ok(), file, [&] { return "h • a is not natural: " + first_violation(rn); });
            t.check(act_on_prof_nat(tc.p, tc.p, identity_prof_nat(tc.p), tc.a) == identity_nat(pa), file,
                    [] { return std::string("identity 2-cell does not act as the identity"); });
            ProfNat hh;
            for (std::size_t n = 0; n < tc.h.components.size(); ++n) {
                hh.components.emplace_back();
                for (std::size_t k = 0; k < tc.h.components[n].size(); ++k) {
                    hh.components.back().push_back(compose_tables(tc.h2.components[n][k], tc.h.components[n][k]));
                }
            }
            t.check(act_on_prof_nat(tc.p, tc.p3, hh, tc.a) ==
                        compose_nats(ha, act_on_prof_nat(tc.p2, tc.p3, tc.h2, tc.a)),
                    file, [] { return std::string("(h2∘h) • a differs from (h2 • a)∘(h • a)"); });
        }
    });
    run.law("discrete_collapse", 1, [&](Tally& t) {
        auto composite = [&](const std::string& file, const FinProfunctor& p, const FinProfunctor& q) {
            if (!discrete_profunctor(p) || !discrete_profunctor(q)) return;
            const auto pq = prof_compose(p, q);
            const auto& m = p.target;
            for (std::size_t a = 0; a < p.source.num_objects(); ++a) {
                for (std::size_t b = 0; b < q.target.num_objects(); ++b) {
                    std::vector<Atom> expected;
                    for (std::size_t mm = 0; mm < m.num_objects(); ++mm) {
                        for (const auto& y : q.at(mm, b).elements()) {
                            for (const auto& x : p.at(a, mm).elements()) {
                                const Atom parts[2] = {y, x};
                                expected.push_back(class_label(m, mm, tuple_label(parts)));
                            }
                        }
                    }
                    t.check(pq.at(a, b) == FinSet(expected), file, [&] {
                        return "(p⋄q)(" + p.source.object(a) + ", " + q.target.object(b) + ") is not the coproduct";
                    });
                }
            }
        };
        auto action = [&](const std::string& file, const FinProfunctor& p, const CoPresheaf& a) {
            if (!discrete_profunctor(p)) return;
            const auto pa = prof_action(p, a);
            for (std::size_t k = 0; k < p.target.num_objects(); ++k) {
                std::vector<Atom> expected;
                for (std::size_t n = 0; n < p.source.num_objects(); ++n) {
                    for (const auto& x : p.at(n, k).elements()) {
                        for (const auto& al : a.fiber[n].elements()) {
                            const Atom parts[2] = {x, al};
                            expected.push_back(class_label(p.source, n, tuple_label(parts)));
                        }
                    }
                }
                t.check(pa.fiber[k] == FinSet(expected), file,
                        [&] { return "(p•a)(" + p.target.object(k) + ") is not the coproduct"; });
            }
        };
        for (const auto& [file, pc] : c.prof_cases) {
            if (!usable(pc)) continue;
            composite(file, pc.p, pc.q);
            composite(file, pc.q, pc.r);
            action(file, pc.p, pc.a);
        }
        for (const auto& [file, m] : c.matrix_actions) {
            if (valid(m.p) && valid(m.a)) action(file, m.p, m.a);
        }
    });
    return run.finish();
}

// --- simple optics ------------------------------------------------------------------

inline std::vector<std::size_t> sample_objects(const FinCategory& c) {
    const auto n = c.num_objects();
    if (n <= 2) {
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < n; ++i) all.push_back(i);
        return all;
    }
    return {0, 1, n - 1};
}

inline std::vector<ExistentialOptic> all_members(const OpticSpace& sp) {
    std::vector<ExistentialOptic> out;
    for (const auto& cls : sp.quotient.classes) {
        for (const auto& mem : cls) out.push_back(sp.member(mem));
    }
    return out;
}

inline std::vector<ExistentialOptic> representatives(const OpticSpace& sp) {
    std::vector<ExistentialOptic> out;
    for (std::size_t k = 0; k < sp.quotient.size(); ++k) out.push_back(sp.member(sp.quotient.representative(k)));
    return out;
}

// Lenses and prisms by index among all (get, put) or (match, build) tables.
inline std::size_t lens_count(std::size_t s, std::size_t t, std::size_t a, std::size_t b) {
    return ipow(a, s) * ipow(t, s * b);
}

inline std::size_t prism_count(std::size_t s, std::size_t t, std::size_t a, std::size_t b) {
    return ipow(t + a, s) * ipow(t, b);
}

inline ConcreteLens nth_lens(std::size_t i, const FinSet& s, const FinSet& t, const FinSet& a, const FinSet& b) {
    const auto puts = ipow(t.size(), s.size() * b.size());
    return {s, t, a, b, nth_table(i / puts, s.size(), a.size()), nth_table(i % puts, s.size() * b.size(), t.size())};
}

inline ConcretePrism nth_prism(std::size_t i, const FinSet& s, const FinSet& t, const FinSet& a, const FinSet& b) {
    const auto builds = ipow(t.size(), b.size());
    return {s, t, a, b, nth_table(i / builds, s.size(), t.size() + a.size()), nth_table(i % builds, b.size(), t.size())};
}

// Indices to check out of `count`: all of them when few, otherwise a fixed-seed sample.
inline std::vector<std::size_t> sample_indices(std::size_t count, std::uint64_t seed, std::size_t exhaustive_up_to = 4096,
                                               std::size_t samples = 256) {
    std::vector<std::size_t> out;
    if (count <= exhaustive_up_to) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(i);
        return out;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) out.push_back(rng() % count);
    return out;
}

struct SetSizes {
    std::size_t s, t, a, b;
};

inline std::vector<SetSizes> size_tuples(std::size_t max) {
    std::vector<SetSizes> out;
    for (std::size_t s = 0; s <= max; ++s) {
        for (std::size_t t = 0; t <= max; ++t) {
            for (std::size_t a = 0; a <= max; ++a) {
                for (std::size_t b = 0; b <= max; ++b) out.push_back({s, t, a, b});
            }
        }
    }
    return out;
}

inline std::string sizes_label(const SetSizes& z) {
    return "|s|,|t|,|a|,|b| = " + std::to_string(z.s) + "," + std::to_string(z.t) + "," + std::to_string(z.a) + "," +
           std::to_string(z.b);
}

// Generated set optics at small sizes, for the unit and associativity laws.
inline std::vector<SetOptic> sample_set_optics(OpticKind kind, std::size_t max) {
    std::vector<SetOptic> out;
    for (const auto& z : size_tuples(std::min<std::size_t>(max, 2))) {
        if (z.s == 0 || z.t == 0 || z.a == 0 || z.b == 0) continue;
        // Shared atom names, so optics with matching sizes compose.
        const auto s = atoms(z.s, "x"), t = atoms(z.t, "x"), a = atoms(z.a, "x"), b = atoms(z.b, "x");
        const auto seed = ((z.s * 5 + z.t) * 5 + z.a) * 5 + z.b;
        if (kind == OpticKind::lens) {
            for (auto i : sample_indices(lens_count(z.s, z.t, z.a, z.b), seed, 0, 2)) {
                out.push_back(lens_abstract(nth_lens(i, s, t, a, b)));
            }
        } else {
            for (auto i : sample_indices(prism_count(z.s, z.t, z.a, z.b), seed, 0, 2)) {
                out.push_back(prism_abstract(nth_prism(i, s, t, a, b)));
            }
        }
    }
    return out;
}

inline bool composable(const SetOptic& o1, const SetOptic& o2) { return o1.s == o2.a && o1.t == o2.b; }

inline SuiteReport simple_optics_suite(const Corpus& c, const Config& cfg,
                                       std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("simple_optics", std::move(want));
    run.describe(count_of(c.actions, "actions") + ", " + count_of(c.optics, "optics") + ", " +
                 count_of(c.lenses, "lenses") + ", " + count_of(c.prisms, "prisms") + ", max-card " +
                 std::to_string(cfg.max_card));
    auto usable = [](const MonoidalAction& act) {
        return valid(act.acting.underlying) && valid(act.on) && validate_monoidal(act.acting).ok() &&
               validate_action(act).ok();
    };

    // Exact regime.
    run.law("monoidal_axioms", 1, [&](Tally& t) {
        auto one = [&](const std::string& file, const MonoidalAction& act) {
            const auto rm = validate_monoidal(act.acting);
            t.check(rm.ok(), file, [&] { return "monoidal category: " + first_violation(rm); });
            const auto ra = validate_action(act);
            t.check(ra.ok(), file, [&] { return "action: " + first_violation(ra); });
        };
        for (const auto& [file, act] : c.actions) one(file, act);
        for (const auto& [file, d] : c.optics) {
            one(file + "#action1", d.act1);
            one(file + "#action2", d.act2);
        }
    });
    run.law("classes_match_zigzag", 1, [&](Tally& t) {
        for (const auto& [file, act] : c.actions) {
            if (!usable(act)) continue;
            const auto n = act.on.num_objects();
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    for (std::size_t s = 0; s < n; ++s) {
                        for (std::size_t u = 0; u < n; ++u) {
                            const auto sp = optic_coend(act, act, a, b, s, u);
                            t.check(sorted_classes(sp.quotient.classes) == zigzag_classes(sp.integrand.bifunctor), file,
                                    [&] {
                                        return "optic classes at <" + act.on.object(a) + "," + act.on.object(b) + "> -> <" +
                                               act.on.object(s) + "," + act.on.object(u) + "> differ from the zig-zag oracle";
                                    });
                        }
                    }
                }
            }
        }
    });
    run.law("coend_soundness", 1, [&](Tally& t) {
        for (const auto& [file, act] : c.actions) {
            if (!usable(act)) continue;
            const auto objs = sample_objects(act.on);
            for (auto x : objs) {
                for (auto y : objs) {
                    for (auto z : objs) {
                        const auto sp1 = optic_coend(act, act, x, x, y, y);
                        const auto sp2 = optic_coend(act, act, y, y, z, z);
                        const auto sp = optic_coend(act, act, x, x, z, z);
                        for (std::size_t k1 = 0; k1 < sp1.quotient.size(); ++k1) {
                            for (std::size_t k2 = 0; k2 < sp2.quotient.size(); ++k2) {
                                // The class-level composite, through representatives.
                                const auto expected = sp.class_of(compose_optics(act, act, sp1.member(sp1.quotient.representative(k1)),
                                                                                 sp2.member(sp2.quotient.representative(k2))));
                                for (const auto& m1 : sp1.quotient.classes[k1]) {
                                    for (const auto& m2 : sp2.quotient.classes[k2]) {
                                        const auto got = sp.class_of(compose_optics(act, act, sp1.member(m1), sp2.member(m2)));
                                        t.check(got == expected, file, [&] {
                                            return "members of " + sp1.quotient.carrier[k1] + " and " +
                                                   sp2.quotient.carrier[k2] + " compose into " + sp.quotient.carrier[got] +
                                                   " and " + sp.quotient.carrier[expected];
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    });
    run.law("unit_exact", 1, [&](Tally& t) {
        auto check_units = [&](const std::string& file, const MonoidalAction& act1, const MonoidalAction& act2,
                               const ExistentialOptic& o) {
            const auto sp = optic_coend(act1, act2, o.a, o.b, o.s, o.t);
            const auto k = sp.class_of(o);
            const auto left = sp.class_of(compose_optics(act1, act2, identity_optic(act1, act2, o.a, o.b), o));
            const auto right = sp.class_of(compose_optics(act1, act2, o, identity_optic(act1, act2, o.s, o.t)));
            t.check(left == k && right == k, file, [&] {
                return "identity composites of " + sp.quotient.carrier[k] + " are " + sp.quotient.carrier[left] + " and " +
                       sp.quotient.carrier[right];
            });
        };
        for (const auto& [file, act] : c.actions) {
            if (!usable(act)) continue;
            for (auto a : sample_objects(act.on)) {
                for (auto s : sample_objects(act.on)) {
                    for (const auto& o : all_members(optic_coend(act, act, a, a, s, s))) check_units(file, act, act, o);
                }
            }
        }
        for (const auto& [file, d] : c.optics) {
            if (usable(d.act1) && usable(d.act2)) check_units(file, d.act1, d.act2, d.optic);
        }
    });
    run.law("associativity_exact", 1, [&](Tally& t) {
        for (const auto& [file, act] : c.actions) {
            if (!usable(act)) continue;
            const auto objs = sample_objects(act.on);
            const auto x = objs.front(), y = objs.back();
            const auto r1 = representatives(optic_coend(act, act, x, x, y, y));
            const auto r2 = representatives(optic_coend(act, act, y, y, x, x));
            const auto sp = optic_coend(act, act, x, x, y, y);
            for (const auto& o1 : r1) {
                for (const auto& o2 : r2) {
                    for (const auto& o3 : r1) {
                        const auto left = sp.class_of(compose_optics(act, act, compose_optics(act, act, o1, o2), o3));
                        const auto right = sp.class_of(compose_optics(act, act, o1, compose_optics(act, act, o2, o3)));
                        t.check(left == right, file, [&] {
                            return "(o3∘o2)∘o1 is " + sp.quotient.carrier[left] + " but o3∘(o2∘o1) is " +
                                   sp.quotient.carrier[right];
                        });
                    }
                }
            }
        }
    });

    // Normal-form regime.
    std::vector<Named<SetOptic>> set_optics;
    for (const auto& [file, l] : c.lenses) set_optics.push_back({file, lens_abstract(l)});
    for (const auto& [file, p] : c.prisms) set_optics.push_back({file, prism_abstract(p)});
    for (auto kind : {OpticKind::lens, OpticKind::prism}) {
        for (const auto& o : sample_set_optics(kind, cfg.max_card)) set_optics.push_back({std::string("generated ") + kind_name(kind), o});
    }

    run.law("unit_normalform", 1, [&](Tally& t) {
        for (const auto& [file, o] : set_optics) {
            const auto left = compose_set_optics(identity_set_optic(o.kind, o.a, o.b), o);
            const auto right = compose_set_optics(o, identity_set_optic(o.kind, o.s, o.t));
            t.check(same_normal_form(left, o) && same_normal_form(right, o), file,
                    [] { return std::string("composite with the identity has another normal form"); });
        }
    });
    run.law("associativity_normalform", 1, [&](Tally& t) {
        // Every composable triple among the corpus optics, and a sample of generated ones.
        const auto n = set_optics.size();
        std::size_t generated = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!composable(set_optics[i].value, set_optics[j].value)) continue;
                if (set_optics[i].value.kind != set_optics[j].value.kind) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    const auto& o1 = set_optics[i].value;
                    const auto& o2 = set_optics[j].value;
                    const auto& o3 = set_optics[k].value;
                    if (!composable(o2, o3) || o2.kind != o3.kind) continue;
                    const bool from_corpus = set_optics[i].file.rfind("generated", 0) != 0 ||
                                             set_optics[k].file.rfind("generated", 0) != 0;
                    if (!from_corpus && (generated++ % 3) != 0) continue;
                    const auto left = compose_set_optics(compose_set_optics(o1, o2), o3);
                    const auto right = compose_set_optics(o1, compose_set_optics(o2, o3));
                    t.check(same_normal_form(left, right), set_optics[i].file + ", " + set_optics[j].file + ", " + set_optics[k].file,
                            [] { return std::string("(o3∘o2)∘o1 and o3∘(o2∘o1) have different normal forms"); });
                }
            }
        }
    });
    run.law("lens_roundtrip", 1, [&](Tally& t) {
        for (const auto& [file, l] : c.lenses) {
            t.check(lens_concretize(lens_abstract(l)) == l, file, [] { return std::string("concretize∘abstract is not the identity"); });
        }
        for (const auto& z : size_tuples(cfg.max_card)) {
            const auto s = atoms(z.s, "s"), tt = atoms(z.t, "t"), a = atoms(z.a, "a"), b = atoms(z.b, "b");
            const auto seed = ((z.s * 7 + z.t) * 7 + z.a) * 7 + z.b;
            for (auto i : sample_indices(lens_count(z.s, z.t, z.a, z.b), seed)) {
                const auto l = nth_lens(i, s, tt, a, b);
                t.check(lens_concretize(lens_abstract(l)) == l, sizes_label(z),
                        [&] { return "lens #" + std::to_string(i) + ": concretize∘abstract is not the identity"; });
            }
            // An optic with a two-element residual is one zig-zag away from abstract∘concretize.
            if (z.s > 0 && z.a > 0 && z.t > 0) {
                std::mt19937_64 rng(seed);
                const auto m = atoms(2, "m");
                SetOptic o{OpticKind::lens, m, a, b, s, tt, random_table(rng, z.s, 2 * z.a),
                           random_table(rng, 2 * z.b, z.t)};
                const auto ma = product_action(m, a);
                Table h;
                for (auto v : o.forward) h.push_back(ma.decode_pair(v).first);
                t.check(zigzag_related(lens_abstract(lens_concretize(o)), o, h), sizes_label(z),
                        [] { return std::string("abstract∘concretize is not one zig-zag from the optic"); });
            }
        }
    });
    run.law("prism_roundtrip", 1, [&](Tally& t) {
        for (const auto& [file, p] : c.prisms) {
            t.check(prism_concretize(prism_abstract(p)) == p, file, [] { return std::string("concretize∘abstract is not the identity"); });
        }
        for (const auto& z : size_tuples(cfg.max_card)) {
            const auto s = atoms(z.s, "s"), tt = atoms(z.t, "t"), a = atoms(z.a, "a"), b = atoms(z.b, "b");
            const auto seed = ((z.s * 7 + z.t) * 7 + z.a) * 7 + z.b + 1;
            for (auto i : sample_indices(prism_count(z.s, z.t, z.a, z.b), seed)) {
                const auto p = nth_prism(i, s, tt, a, b);
                t.check(prism_concretize(prism_abstract(p)) == p, sizes_label(z),
                        [&] { return "prism #" + std::to_string(i) + ": concretize∘abstract is not the identity"; });
            }
            if ((z.s == 0 || z.a + 2 > 0) && (z.b == 0 || z.t > 0) && z.t > 0) {
                std::mt19937_64 rng(seed);
                const auto m = atoms(2, "m");
                SetOptic o{OpticKind::prism, m, a, b, s, tt, random_table(rng, z.s, 2 + z.a), random_table(rng, 2 + z.b, z.t)};
                const auto mb = coproduct_action(m, b);
                Table h;
                for (std::size_t u = 0; u < 2; ++u) h.push_back(o.backward[mb.encode(0, u)]);
                t.check(zigzag_related(o, prism_abstract(prism_concretize(o)), h), sizes_label(z),
                        [] { return std::string("abstract∘concretize is not one zig-zag from the optic"); });
            }
        }
    });
    run.law("concretization_cardinality", 1, [&](Tally& t) {
        struct Case {
            OpticKind kind;
            std::size_t s, a, b, t, k;
        };
        const std::vector<Case> cases{
            {OpticKind::lens, 1, 1, 1, 1, 1},  {OpticKind::lens, 1, 2, 2, 2, 2},  {OpticKind::lens, 2, 2, 1, 2, 2},
            {OpticKind::lens, 2, 1, 2, 2, 2},  {OpticKind::lens, 0, 2, 2, 2, 1},  {OpticKind::prism, 1, 1, 1, 1, 1},
            {OpticKind::prism, 2, 1, 1, 2, 2}, {OpticKind::prism, 1, 2, 2, 2, 2}, {OpticKind::prism, 2, 0, 1, 1, 1}};
        for (const auto& z : cases) {
            if (std::max({z.s, z.a, z.b, z.t, z.k}) > cfg.max_card) continue;
            const auto s = atoms(z.s, "s"), a = atoms(z.a, "a"), b = atoms(z.b, "b"), tt = atoms(z.t, "t");
            const auto fc = finset_optic_coend(z.kind, z.k, a, b, s, tt);
            const auto expected =
                z.kind == OpticKind::lens ? lens_count(z.s, z.t, z.a, z.b) : prism_count(z.s, z.t, z.a, z.b);
            std::set<std::pair<Table, Table>> seen;
            bool consistent = true;
            for (const auto& cls : fc.quotient.classes) {
                std::set<std::pair<Table, Table>> in_class;
                for (const auto& mem : cls) {
                    const auto o = member_optic(z.kind, fc, mem, a, b, s, tt);
                    if (z.kind == OpticKind::lens) {
                        const auto l = lens_concretize(o);
                        in_class.insert({l.get, l.put});
                    } else {
                        const auto p = prism_concretize(o);
                        in_class.insert({p.match, p.build});
                    }
                }
                consistent = consistent && in_class.size() == 1;
                seen.insert(*in_class.begin());
            }
            const std::string where = std::string(kind_name(z.kind)) + " " + sizes_label({z.s, z.t, z.a, z.b}) +
                                      ", residuals <= " + std::to_string(z.k);
            t.check(consistent && fc.quotient.size() == expected && seen.size() == expected, where, [&] {
                return std::to_string(fc.quotient.size()) + " classes, " + std::to_string(seen.size()) +
                       " distinct tables, expected " + std::to_string(expected);
            });
        }
    });
    return run.finish();
}

// --- poly -------------------------------------------------------------------------

inline std::size_t max_arity(const PolyFunctor& p) {
    std::size_t m = 0;
    for (const auto& s : p.positions) m = std::max(m, s.size());
    for (const auto& s : p.directions) m = std::max(m, s.size());
    return m;
}

inline std::vector<Named<PolyFunctor>> corpus_polys(const Corpus& c) {
    auto out = c.polys;
    for (const auto& n : c.nat_counts) {
        out.push_back({n.file, n.value.source});
        out.push_back({n.file, n.value.target});
    }
    std::vector<Named<PolyFunctor>> keep;
    for (const auto& p : dedupe(out)) {
        if (validate_poly(p.value).ok()) keep.push_back(p);
    }
    return keep;
}

inline std::vector<Table> induced_family(const PolyLens& l, std::size_t y_max) {
    std::vector<Table> fam;
    for (std::size_t n = 0; n <= y_max; ++n) fam.push_back(polylens_to_nat(l, oracle_set(n)));
    return fam;
}

// All residual families with entries of size ≤ max over an nn × nk index.
inline std::vector<std::vector<std::vector<FinSet>>> residual_families(std::size_t nn, std::size_t nk, std::size_t max) {
    const auto cells = nn * nk;
    std::vector<std::vector<std::vector<FinSet>>> out;
    for (std::size_t i = 0; i < ipow(max + 1, cells); ++i) {
        const auto sizes = nth_table(i, cells, max + 1);
        std::vector<std::vector<FinSet>> fam(nn, std::vector<FinSet>(nk));
        for (std::size_t j = 0; j < cells; ++j) fam[j / nk][j % nk] = atoms(sizes[j], "c");
        out.push_back(std::move(fam));
    }
    return out;
}

// Every family h[n][k]: c[n][k] -> c2[n][k].
inline std::vector<std::vector<std::vector<Table>>> all_transports(const std::vector<std::vector<FinSet>>& c,
                                                                   const std::vector<std::vector<FinSet>>& c2) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::size_t total = 1;
    for (std::size_t n = 0; n < c.size(); ++n) {
        for (std::size_t k = 0; k < c[n].size(); ++k) {
            cells.push_back({c[n][k].size(), c2[n][k].size()});
            total *= ipow(c2[n][k].size(), c[n][k].size());
        }
    }
    std::vector<std::vector<std::vector<Table>>> out;
    for (std::size_t i = 0; i < total; ++i) {
        std::vector<std::vector<Table>> h(c.size());
        std::size_t rest = i, cell = 0;
        for (std::size_t n = 0; n < c.size(); ++n) {
            for (std::size_t k = 0; k < c[n].size(); ++k, ++cell) {
                const auto [from, to] = cells[cell];
                const auto count = ipow(to, from);
                h[n].push_back(nth_table(rest % count, from, to));
                rest /= count;
            }
        }
        out.push_back(std::move(h));
    }
    return out;
}

inline SuiteReport poly_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("poly", std::move(want));
    const auto polys = corpus_polys(c);
    run.describe(count_of(polys, "polynomials") + ", " + count_of(c.nat_counts, "expected counts"));
    std::vector<Named<PolyFunctor>> small;
    for (const auto& p : polys) {
        if (max_arity(p.value) <= 3) small.push_back(p);
    }

    run.law("nat_counts", 1, [&](Tally& t) {
        for (const auto& [file, n] : c.nat_counts) {
            const auto formula = count_polylenses(n.source, n.target);
            const auto listed = enumerate_polylenses(n.source, n.target).size();
            const auto oracle = nat_oracle(n.source, n.target, nat_oracle_min_bound(n.source), false).count;
            t.check(formula == n.expected && listed == n.expected && oracle == n.expected, file, [&] {
                return "expected " + std::to_string(n.expected) + ", formula " + std::to_string(formula) + ", enumeration " +
                       std::to_string(listed) + ", oracle " + std::to_string(oracle);
            });
        }
    });
    run.law("formula_vs_oracle", 1, [&](Tally& t) {
        for (const auto& p : small) {
            for (const auto& q : small) {
                const auto bound = nat_oracle_min_bound(p.value);
                const auto oracle = nat_oracle(p.value, q.value, bound);
                const auto lenses = enumerate_polylenses(p.value, q.value);
                std::set<std::vector<Table>> families(oracle.solutions.begin(), oracle.solutions.end());
                bool all_found = true;
                for (const auto& l : lenses) all_found = all_found && families.count(induced_family(l, bound)) > 0;
                t.check(lenses.size() == oracle.count && count_polylenses(p.value, q.value) == oracle.count && all_found,
                        p.file + " -> " + q.file, [&] {
                            return "formula " + std::to_string(lenses.size()) + ", oracle " + std::to_string(oracle.count) +
                                   (all_found ? "" : ", a lens induces no oracle family");
                        });
            }
        }
    });
    run.law("nat_injective", 1, [&](Tally& t) {
        for (const auto& p : small) {
            for (const auto& q : small) {
                const auto lenses = enumerate_polylenses(p.value, q.value);
                std::set<std::vector<Table>> induced;
                for (const auto& l : lenses) induced.insert(induced_family(l, 3));
                t.check(induced.size() == lenses.size(), p.file + " -> " + q.file, [&] {
                    return std::to_string(lenses.size()) + " lenses induce " + std::to_string(induced.size()) +
                           " transformations at y <= 3";
                });
            }
        }
    });
    run.law("pointwise_composition", 1, [&](Tally& t) {
        for (const auto& p : small) {
            for (const auto& q : small) {
                const auto l1s = enumerate_polylenses(p.value, q.value);
                for (const auto& r : small) {
                    const auto l2s = enumerate_polylenses(q.value, r.value);
                    for (std::size_t i = 0; i < l1s.size(); i += 1 + l1s.size() / 3) {
                        for (std::size_t j = 0; j < l2s.size(); j += 1 + l2s.size() / 3) {
                            const auto comp = compose_polylens(l1s[i], l2s[j]);
                            for (std::size_t n = 0; n <= 3; ++n) {
                                const auto y = oracle_set(n);
                                t.check(polylens_to_nat(comp, y) ==
                                            compose_tables(polylens_to_nat(l2s[j], y), polylens_to_nat(l1s[i], y)),
                                        p.file + " -> " + q.file + " -> " + r.file,
                                        [&] { return "composite differs from pointwise composition at |y| = " + std::to_string(n); });
                            }
                        }
                    }
                }
            }
        }
    });
    run.law("ommatidium_invariance", 1, [&](Tally& t) {
        std::mt19937_64 rng(17);
        for (const auto& src : polys) {
            for (const auto& tgt : polys) {
                const auto nn = tgt.value.index.size(), nk = src.value.index.size();
                if (nn * nk > 2 || max_arity(src.value) > 2 || max_arity(tgt.value) > 2) continue;
                const auto fams = residual_families(nn, nk, 2);
                for (const auto& cr : fams) {
                    for (const auto& cr2 : fams) {
                        for (const auto& h : all_transports(cr, cr2)) {
                            for (int draw = 0; draw < 2; ++draw) {
                                const Ommatidium probe{src.value, tgt.value, cr, {}, {}}, probe2{src.value, tgt.value, cr2, {}, {}};
                                std::vector<Table> f, g;
                                bool possible = true;
                                for (std::size_t k = 0; k < nk; ++k) {
                                    const auto fs = probe.forward_set(k).size();
                                    const auto bs = probe2.backward_set(k).size();
                                    const auto ps = src.value.positions[k].size();
                                    const auto ds = src.value.directions[k].size();
                                    possible = possible && (fs > 0 || ps == 0) && (ds > 0 || bs == 0);
                                    if (!possible) break;
                                    f.push_back(fs ? random_table(rng, ps, fs) : Table{});
                                    g.push_back(ds ? random_table(rng, bs, ds) : Table{});
                                }
                                if (!possible) break;
                                auto [left, right] = ommatidium_zigzag(src.value, tgt.value, cr, cr2, h, f, g);
                                const bool ok = validate_ommatidium(left).ok() && validate_ommatidium(right).ok() &&
                                                ommatidium_related(left, right, h) &&
                                                ommatidium_to_polylens(left) == ommatidium_to_polylens(right);
                                t.check(ok, src.file + " -> " + tgt.file,
                                        [] { return std::string("a zig-zag step changes the polylens normal form"); });
                            }
                        }
                    }
                }
            }
        }
    });
    return run.finish();
}

// --- compound -----------------------------------------------------------------------

inline CompoundOptic compound_of(const PolyLens& l) { return ommatidium_to_compound(polylens_to_ommatidium(l)); }

// h with components from the forward tables of an associativity witness.
inline ProfNat associator_prof_nat(const CompoundOptic& o1, const CompoundOptic& o2, const CompoundOptic& o3) {
    const auto assoc = associativity(o1.residual, o2.residual, o3.residual);
    if (!assoc.witness) throw KernelError("associativity witness failed: " + assoc.witness.detail);
    const auto nn = o1.residual.source.num_objects(), nk = o3.residual.target.num_objects();
    ProfNat h;
    for (std::size_t n = 0; n < nn; ++n) {
        h.components.emplace_back();
        for (std::size_t k = 0; k < nk; ++k) h.components.back().push_back(assoc.witness.forward[n * nk + k]);
    }
    return h;
}

inline SuiteReport compound_suite(const Corpus& c, const Config&, std::function<bool(const std::string&)> want = {}) {
    SuiteRun run("compound", std::move(want));
    std::vector<Named<PolyFunctor>> polys;
    for (const auto& p : corpus_polys(c)) {
        if (max_arity(p.value) <= 2 && p.value.index.size() <= 2 && p.value.index.size() > 0) polys.push_back(p);
    }
    run.describe(count_of(polys, "polynomials") + ", " + count_of(c.compound_chains, "chains"));
    std::map<std::pair<std::size_t, std::size_t>, std::vector<PolyLens>> lens_cache;
    auto lenses = [&](std::size_t i, std::size_t j) -> const std::vector<PolyLens>& {
        auto it = lens_cache.find({i, j});
        if (it == lens_cache.end()) it = lens_cache.emplace(std::make_pair(i, j), enumerate_polylenses(polys[i].value, polys[j].value)).first;
        return it->second;
    };
    auto chain_ok = [](const corpus::CompoundChain& ch) {
        return std::all_of(ch.optics.begin(), ch.optics.end(), [](const CompoundOptic& o) {
            return valid(o.residual) && valid(o.a) && valid(o.b) && valid(o.s) && valid(o.t) && validate_compound(o).ok();
        });
    };
    const auto np = polys.size();

    run.law("discrete_vs_polylens", 1, [&](Tally& t) {
        for (std::size_t u = 0; u < np; ++u) {
            for (std::size_t s = 0; s < np; ++s) {
                for (std::size_t a = 0; a < np; ++a) {
                    const auto& l2s = lenses(u, s);  // optic ⟨s⟩ -> ⟨u⟩
                    const auto& l1s = lenses(s, a);  // optic ⟨a⟩ -> ⟨s⟩
                    for (std::size_t i = 0; i < l1s.size(); ++i) {
                        for (std::size_t j = 0; j < l2s.size(); ++j) {
                            const auto o = compound_compose(compound_of(l1s[i]), compound_of(l2s[j]));
                            const auto r = validate_compound(o);
                            t.check(r.ok() && compound_normal_form(o, polys[u].value, polys[a].value) ==
                                                  compose_polylens(l2s[j], l1s[i]),
                                    polys[a].file + " -> " + polys[s].file + " -> " + polys[u].file, [&] {
                                        return r.ok() ? "normal form of the composite differs from the polylens composite"
                                                      : "composite is not a compound optic: " + first_violation(r);
                                    });
                        }
                    }
                }
            }
        }
    });
    run.law("identity_unit", 1, [&](Tally& t) {
        for (std::size_t i = 0; i < np; ++i) {
            for (std::size_t j = 0; j < np; ++j) {
                const auto& ls = lenses(i, j);
                for (std::size_t k = 0; k < ls.size(); ++k) {
                    const auto o = compound_of(ls[k]);
                    const auto left = compound_compose(identity_compound(o.a, o.b), o);
                    const auto right = compound_compose(o, identity_compound(o.s, o.t));
                    const bool ok = compound_normal_form(left, polys[i].value, polys[j].value) == ls[k] &&
                                    compound_normal_form(right, polys[i].value, polys[j].value) == ls[k] &&
                                    coend_witness_check(left, o, unit_prof_nat(o.residual, true)) &&
                                    coend_witness_check(right, o, unit_prof_nat(o.residual, false));
                    t.check(ok, polys[j].file + " -> " + polys[i].file,
                            [] { return std::string("identity is not a two-sided unit"); });
                }
            }
        }
        for (const auto& [file, ch] : c.compound_chains) {
            if (!chain_ok(ch)) {
                t.fail(file, "chain contains an invalid compound optic");
                continue;
            }
            for (const auto& o : ch.optics) {
                const auto left = compound_compose(identity_compound(o.a, o.b), o);
                const auto right = compound_compose(o, identity_compound(o.s, o.t));
                t.check(coend_witness_check(left, o, unit_prof_nat(o.residual, true)) &&
                            coend_witness_check(right, o, unit_prof_nat(o.residual, false)),
                        file, [] { return std::string("unit 2-cells do not witness the unit laws"); });
            }
        }
    });
    run.law("associativity", 1, [&](Tally& t) {
        std::size_t index = 0;
        for (std::size_t w = 0; w < np; ++w) {
            for (std::size_t u = 0; u < np; ++u) {
                for (std::size_t s = 0; s < np; ++s) {
                    for (std::size_t a = 0; a < np; ++a) {
                        if (index++ % 5 != 0) continue;
                        const auto& l1s = lenses(s, a);
                        const auto& l2s = lenses(u, s);
                        const auto& l3s = lenses(w, u);
                        if (l1s.empty() || l2s.empty() || l3s.empty()) continue;
                        const auto o1 = compound_of(l1s[l1s.size() / 2]);
                        const auto o2 = compound_of(l2s[l2s.size() / 2]);
                        const auto o3 = compound_of(l3s[l3s.size() / 2]);
                        const auto left = compound_compose(compound_compose(o1, o2), o3);
                        const auto right = compound_compose(o1, compound_compose(o2, o3));
                        t.check(compound_normal_form(left, polys[w].value, polys[a].value) ==
                                    compound_normal_form(right, polys[w].value, polys[a].value),
                                polys[a].file + " -> " + polys[s].file + " -> " + polys[u].file + " -> " + polys[w].file,
                                [] { return std::string("bracketings have different normal forms"); });
                    }
                }
            }
        }
        for (const auto& [file, ch] : c.compound_chains) {
            if (!chain_ok(ch)) continue;
            for (std::size_t i = 0; i + 2 < ch.optics.size(); ++i) {
                const auto& o1 = ch.optics[i];
                const auto& o2 = ch.optics[i + 1];
                const auto& o3 = ch.optics[i + 2];
                const auto left = compound_compose(compound_compose(o1, o2), o3);
                const auto right = compound_compose(o1, compound_compose(o2, o3));
                t.check(coend_witness_check(left, right, associator_prof_nat(o1, o2, o3)), file,
                        [] { return std::string("the associator does not witness the bracketings equal"); });
            }
        }
    });
    run.law("witness_accept_reject", 1, [&](Tally& t) {
        // A zig-zag along a swap is witnessed by the swap and by nothing else tried here.
        const auto y2 = monomials({{1, 2}}), y1 = monomials({{1, 1}});
        const std::vector<std::vector<FinSet>> cr{{atoms(2, "c")}};
        const std::vector<std::vector<Table>> swap{{{1, 0}}};
        const Ommatidium probe{y2, y1, cr, {}, {}};
        auto [left, right] = ommatidium_zigzag(y2, y1, cr, cr, swap, {{probe.forward_set(0).encode(0, 0, 0)}}, {{0, 1}});
        const auto ol = ommatidium_to_compound(left), orr = ommatidium_to_compound(right);
        t.check(coend_witness_check(ol, orr, ProfNat{swap}), "swap", [] { return std::string("valid witness rejected"); });
        t.check(!coend_witness_check(ol, orr, identity_prof_nat(ol.residual)), "swap",
                [] { return std::string("identity accepted as a witness for a swap"); });
        t.check(!coend_witness_check(ol, orr, ProfNat{{{{0}}}}), "swap",
                [] { return std::string("ill-typed witness accepted"); });
        for (const auto& [file, ch] : c.compound_chains) {
            if (!chain_ok(ch)) continue;
            for (const auto& o : ch.optics) {
                t.check(coend_witness_check(o, o, identity_prof_nat(o.residual)), file,
                        [] { return std::string("identity 2-cell rejected on equal optics"); });
                // Changing the forward part breaks any witness built from the identity.
                const auto alts = enumerate_nats(o.s, prof_action(o.residual, o.a));
                for (const auto& fw : alts) {
                    if (fw == o.forward) continue;
                    CompoundOptic other = o;
                    other.forward = fw;
                    t.check(!coend_witness_check(o, other, identity_prof_nat(o.residual)), file,
                            [] { return std::string("identity accepted between different optics"); });
                    break;
                }
            }
        }
    });
    return run.finish();
}

// --- running ------------------------------------------------------------------------

using SuiteFn = SuiteReport (*)(const Corpus&, const Config&, std::function<bool(const std::string&)>);

inline SuiteFn suite_function(const std::string& name) {
    if (name == "corpus") return corpus_suite;
    if (name == "fincat") return fincat_suite;
    if (name == "coend") return coend_suite;
    if (name == "coyoneda") return coyoneda_suite;
    if (name == "kan") return kan_suite;
    if (name == "pi") return pi_suite;
    if (name == "prof") return prof_suite;
    if (name == "simple_optics") return simple_optics_suite;
    if (name == "poly") return poly_suite;
    if (name == "compound") return compound_suite;
    return nullptr;
}

// Runs suites in registry order. An empty list means all of them.
inline std::vector<SuiteReport> run_suites(const Corpus& c, const Config& cfg, const std::vector<std::string>& names = {},
                                           std::function<bool(const std::string&, const std::string&)> want = {}) {
    std::vector<SuiteReport> out;
    for (const auto& name : suite_names()) {
        if (!names.empty() && std::find(names.begin(), names.end(), name) == names.end()) continue;
        std::function<bool(const std::string&)> filter;
        if (want) filter = [&, name](const std::string& law) { return want(name, law); };
        out.push_back(suite_function(name)(c, cfg, filter));
    }
    return out;
}

inline bool all_pass(const std::vector<SuiteReport>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const SuiteReport& r) { return r.ok(); });
}

inline std::string render_text(const std::vector<SuiteReport>& rs, bool timing = false) {
    std::string out;
    for (const auto& r : rs) {
        out += "# suite " + r.name + ": " + r.corpus;
        if (timing) out += " (" + std::to_string(static_cast<long long>(r.wall_ms)) + " ms)";
        out += '\n';
        for (const auto& l : r.laws) {
            out += r.name + "/" + l.name + ": " + (l.pass ? "PASS" : "FAIL") + " (" + l.detail + ")\n";
        }
    }
    return out;
}

inline json_io::json render_json(const std::vector<SuiteReport>& rs, bool timing = false) {
    json_io::json suites = json_io::json::array();
    for (const auto& r : rs) {
        json_io::json laws = json_io::json::array();
        for (const auto& l : r.laws) {
            laws.push_back({{"name", l.name}, {"status", l.pass ? "PASS" : "FAIL"}, {"detail", l.detail}, {"instances", l.instances}});
        }
        json_io::json s{{"name", r.name}, {"corpus", r.corpus}, {"laws", laws}};
        if (timing) s["wall_ms"] = static_cast<long long>(r.wall_ms);
        suites.push_back(s);
    }
    return {{"suites", suites}, {"ok", all_pass(rs)}};
}

// The coverage map: for each module invariant, the suite and laws covering it, with
// the number of corpus instances the laws ran on.
struct CoverageRow {
    Invariant invariant;
    std::vector<std::string> suites;
    std::vector<std::string> laws;
    std::size_t instances = 0;
};

inline std::vector<CoverageRow> coverage(const std::vector<SuiteReport>& rs) {
    std::vector<CoverageRow> rows;
    const auto suites = invariant_suites();
    for (std::size_t i = 0; i < module_invariants().size(); ++i) {
        CoverageRow row{module_invariants()[i], suites[i], {}, 0};
        for (const auto& spec : registry()) {
            if (spec.invariant != static_cast<int>(i)) continue;
            row.laws.push_back(spec.suite + "/" + spec.law);
            for (const auto& r : rs) {
                if (r.name != spec.suite) continue;
                for (const auto& l : r.laws) {
                    if (l.name == spec.law) row.instances += l.instances;
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Every invariant in exactly one suite, exercised by at least one instance.
inline bool coverage_complete(const std::vector<CoverageRow>& rows) {
    return std::all_of(rows.begin(), rows.end(),
                       [](const CoverageRow& r) { return r.suites.size() == 1 && r.instances > 0; });
}

inline std::string render_coverage(const std::vector<CoverageRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += r.invariant.module + ": " + r.invariant.statement + " -> " + join(r.laws) + " [" +
               std::to_string(r.instances) + " instances]";
        if (r.suites.size() != 1) out += " (in " + std::to_string(r.suites.size()) + " suites)";
        out += '\n';
    }
    out += std::string("coverage: ") + (coverage_complete(rows) ? "COMPLETE" : "INCOMPLETE") + "\n";
    return out;
}

} // namespace optika::laws
