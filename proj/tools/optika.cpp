// optika: load JSON inputs, run operations and law suites.
//
// Exit status: 0 when every check passes, 1 when a law or validation fails, 2 on
// malformed input or usage.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optika/corpus.hpp"
#include "optika/laws.hpp"

namespace {

using namespace optika;
using json_io::json;
using json_io::Node;

#ifndef OPTIKA_CORPUS_DIR
#define OPTIKA_CORPUS_DIR "corpus"
#endif

struct Options {
    bool json_out = false;
    std::size_t max_card = 4;
    std::vector<std::string> corpus;
};

// A parsed input file. The JSON value outlives every Node pointing into it.
struct Input {
    std::string file;
    json value;
    Node node() const { return Node(value, file); }
    std::string kind() const { return json_io::kind_of(node()); }
};

Input load(const std::string& path) {
    return {path, json_io::parse_text(corpus::read_text(path), path)};
}

void expect_kind(const Input& in, std::initializer_list<std::string_view> kinds) {
    const auto k = in.kind();
    for (auto want : kinds) {
        if (k == want) return;
    }
    std::string list;
    for (auto want : kinds) list += (list.empty() ? "" : ", ") + std::string(want);
    in.node()["kind"].fail("expected kind " + list + ", got '" + k + "'");
}

void emit(const json& j) { std::cout << json_io::dump(j); }

std::string violations_text(const ValidationReport& r) {
    std::string out;
    for (const auto& v : r.violations) out += (out.empty() ? "" : "; ") + v;
    return out;
}

// --- check --------------------------------------------------------------------------

ValidationReport validate_input(const Input& in) {
    const auto n = in.node();
    const auto k = in.kind();
    if (k == "category") return validate_category(json_io::read_category(n));
    if (k == "functor") {
        const auto f = json_io::read_functor(n);
        auto r = validate_category(f.source);
        if (r.ok()) r = validate_category(f.target);
        if (r.ok()) r = validate_functor(f);
        return r;
    }
    if (k == "copresheaf") {
        const auto f = json_io::read_copresheaf(n);
        auto r = validate_category(f.base);
        return r.ok() ? validate_copresheaf(f) : r;
    }
    if (k == "bifunctor") {
        const auto d = json_io::read_bifunctor(n);
        auto r = validate_category(d.base);
        return r.ok() ? validate_bifunctor(d) : r;
    }
    if (k == "profunctor") {
        const auto p = json_io::read_profunctor(n);
        auto r = validate_category(p.source);
        if (r.ok()) r = validate_category(p.target);
        return r.ok() ? validate_profunctor(p) : r;
    }
    if (k == "nat") {
        const auto d = json_io::read_nat(n);
        return validate_nat(d.source, d.target, d.nat);
    }
    if (k == "monoidal") return validate_monoidal(json_io::read_monoidal(n));
    if (k == "action") {
        const auto act = json_io::read_action(n);
        auto r = validate_monoidal(act.acting);
        return r.ok() ? validate_action(act) : r;
    }
    if (k == "polynomial") return validate_poly(json_io::read_poly(n));
    if (k == "polylens") return validate_polylens(json_io::read_polylens(n));
    if (k == "ommatidium") return validate_ommatidium(json_io::read_ommatidium(n));
    if (k == "compound") return validate_compound(json_io::read_compound(n));
    // The remaining kinds are checked structurally while parsing.
    corpus::Corpus c;
    corpus::add_document(c, in.file, in.value);
    return {};
}

int run_check(const Options& opt, const std::vector<std::string>& files) {
    bool ok = true;
    json results = json::array();
    for (const auto& f : files) {
        const auto in = load(f);
        const auto r = validate_input(in);
        ok = ok && r.ok();
        if (opt.json_out) {
            results.push_back({{"file", f}, {"kind", in.kind()}, {"status", r.ok() ? "PASS" : "FAIL"}, {"violations", r.violations}});
        } else {
            std::cout << "check/" << f << ": " << (r.ok() ? "PASS" : "FAIL") << " ("
                      << (r.ok() ? in.kind() : violations_text(r)) << ")\n";
        }
    }
    if (opt.json_out) emit({{"checks", results}, {"ok", ok}});
    return ok ? 0 : 1;
}

// --- coend and kan --------------------------------------------------------------------

int run_coend(const Options& opt, const std::string& file) {
    const auto in = load(file);
    expect_kind(in, {"bifunctor"});
    const auto d = json_io::read_bifunctor(in.node());
    if (const auto r = validate_bifunctor(d); !r.ok()) throw ValidationError(file + ": " + violations_text(r));
    const auto q = coend(d);
    const auto& c = d.base;
    if (opt.json_out) {
        json classes = json::object(), inject = json::object();
        for (std::size_t k = 0; k < q.size(); ++k) {
            json members = json::array();
            for (const auto& m : q.classes[k]) members.push_back({c.object(m.object), d.at(m.object, m.object)[m.element]});
            classes[q.carrier[k]] = members;
        }
        for (std::size_t o = 0; o < c.num_objects(); ++o) {
            json row = json::object();
            for (std::size_t x = 0; x < q.inject[o].size(); ++x) row[d.at(o, o)[x]] = q.carrier[q.inject[o][x]];
            inject[c.object(o)] = row;
        }
        emit({{"carrier", q.carrier.elements()}, {"classes", classes}, {"inject", inject}});
        return 0;
    }
    std::cout << "carrier (" << q.size() << "):";
    for (const auto& e : q.carrier.elements()) std::cout << ' ' << e;
    std::cout << '\n';
    for (std::size_t k = 0; k < q.size(); ++k) {
        std::cout << "class " << q.carrier[k] << ":";
        for (const auto& m : q.classes[k]) std::cout << ' ' << c.object(m.object) << '|' << d.at(m.object, m.object)[m.element];
        std::cout << '\n';
    }
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        std::cout << "inject " << c.object(o) << ":";
        for (std::size_t x = 0; x < q.inject[o].size(); ++x) {
            std::cout << ' ' << d.at(o, o)[x] << "->" << q.carrier[q.inject[o][x]];
        }
        std::cout << '\n';
    }
    return 0;
}

int run_kan(const Options& opt, const std::vector<std::string>& files, const std::string& chain_file) {
    if (!chain_file.empty()) {
        const auto in = load(chain_file);
        expect_kind(in, {"kan_chain"});
        const auto k = corpus::read_kan_chain(in.node());
        const auto w = kan_composition_check(k.copresheaf, k.p, k.q);
        const auto& target = k.q.target;
        if (opt.json_out) {
            json fwd = json::object();
            for (std::size_t e = 0; e < w.forward.size() && e < target.num_objects(); ++e) fwd[target.object(e)] = w.forward[e];
            emit({{"verified", w.verified}, {"detail", w.detail}, {"forward", fwd}});
        } else {
            std::cout << "kan/composition: " << (w.verified ? "PASS" : "FAIL") << " ("
                      << (w.verified ? "mutually inverse at every object" : w.detail) << ")\n";
            for (std::size_t e = 0; e < w.forward.size() && e < target.num_objects(); ++e) {
                std::cout << "forward " << target.object(e) << ":";
                for (auto v : w.forward[e]) std::cout << ' ' << v;
                std::cout << '\n';
            }
        }
        return w.verified ? 0 : 1;
    }
    if (files.size() != 2) throw CLI::ValidationError("kan", "expects <copresheaf> <functor> or --check-composition <chain>");
    const auto fin = load(files[0]), pin = load(files[1]);
    expect_kind(fin, {"copresheaf"});
    expect_kind(pin, {"functor"});
    const auto f = json_io::read_copresheaf(fin.node());
    const auto p = json_io::read_functor(pin.node());
    if (const auto r = validate_copresheaf(f); !r.ok()) throw ValidationError(files[0] + ": " + violations_text(r));
    if (const auto r = validate_functor(p); !r.ok()) throw ValidationError(files[1] + ": " + violations_text(r));
    emit(json_io::write_copresheaf(left_kan(f, p).copresheaf));
    return 0;
}

// --- laws ---------------------------------------------------------------------------

corpus::Corpus load_corpus(const Options& opt) {
    std::vector<std::filesystem::path> roots(opt.corpus.begin(), opt.corpus.end());
    if (roots.empty()) roots.emplace_back(OPTIKA_CORPUS_DIR);
    return corpus::load_corpus(roots);
}

int report(const Options& opt, const std::vector<laws::SuiteReport>& rs, bool timing) {
    if (opt.json_out) emit(laws::render_json(rs, timing));
    else std::cout << laws::render_text(rs, timing);
    return laws::all_pass(rs) ? 0 : 1;
}

int run_laws(const Options& opt, std::vector<std::string> suites, bool coverage, bool timing,
             std::function<bool(const std::string&, const std::string&)> want = {}) {
    for (const auto& s : suites) {
        if (!laws::suite_function(s)) throw CLI::ValidationError("--suite", "unknown suite '" + s + "'");
    }
    const auto c = load_corpus(opt);
    const auto rs = laws::run_suites(c, {opt.max_card}, suites, std::move(want));
    int code = report(opt, rs, timing);
    if (coverage) {
        const auto rows = laws::coverage(rs);
        if (opt.json_out) {
            json j = json::array();
            for (const auto& r : rows) {
                j.push_back({{"module", r.invariant.module}, {"invariant", r.invariant.statement}, {"suites", r.suites},
                             {"laws", r.laws}, {"instances", r.instances}});
            }
            emit({{"coverage", j}, {"complete", laws::coverage_complete(rows)}});
        } else {
            std::cout << laws::render_coverage(rows);
        }
        if (!laws::coverage_complete(rows)) code = 1;
    }
    return code;
}

// --- prof ---------------------------------------------------------------------------

FinProfunctor read_valid_profunctor(const std::string& file) {
    const auto in = load(file);
    expect_kind(in, {"profunctor"});
    auto p = json_io::read_profunctor(in.node());
    if (const auto r = validate_profunctor(p); !r.ok()) throw ValidationError(file + ": " + violations_text(r));
    return p;
}

int run_prof_compose(const std::string& pf, const std::string& qf) {
    emit(json_io::write_profunctor(prof_compose(read_valid_profunctor(pf), read_valid_profunctor(qf))));
    return 0;
}

int run_prof_act(const std::string& pf, const std::string& af) {
    const auto p = read_valid_profunctor(pf);
    const auto in = load(af);
    expect_kind(in, {"copresheaf"});
    const auto a = json_io::read_copresheaf(in.node());
    if (const auto r = validate_copresheaf(a); !r.ok()) throw ValidationError(af + ": " + violations_text(r));
    emit(json_io::write_copresheaf(prof_action(p, a)));
    return 0;
}

// --- optic --------------------------------------------------------------------------

int run_optic_compose(const std::string& f1, const std::string& f2) {
    const auto i1 = load(f1), i2 = load(f2);
    const auto k = i1.kind();
    expect_kind(i2, {k});
    if (k == "lens") {
        emit(json_io::write_lens(compose_lenses(json_io::read_lens(i1.node()), json_io::read_lens(i2.node()))));
    } else if (k == "prism") {
        emit(json_io::write_prism(compose_prisms(json_io::read_prism(i1.node()), json_io::read_prism(i2.node()))));
    } else if (k == "set_optic") {
        emit(json_io::write_set_optic(
            compose_set_optics(json_io::read_set_optic(i1.node()), json_io::read_set_optic(i2.node()))));
    } else if (k == "optic") {
        auto d1 = json_io::read_exact_optic(i1.node());
        const auto d2 = json_io::read_exact_optic(i2.node());
        if (json_io::write_action(d1.act1) != json_io::write_action(d2.act1) ||
            json_io::write_action(d1.act2) != json_io::write_action(d2.act2)) {
            i2.node().fail("optics act through different actions");
        }
        d1.optic = compose_optics(d1.act1, d1.act2, d1.optic, d2.optic);
        emit(json_io::write_exact_optic(d1));
    } else {
        expect_kind(i1, {"lens", "prism", "set_optic", "optic"});
    }
    return 0;
}

int run_optic_normalize(const Options& opt, const std::string& file) {
    const auto in = load(file);
    expect_kind(in, {"lens", "prism", "set_optic", "optic"});
    const auto k = in.kind();
    if (k == "lens") {
        emit(json_io::write_lens(lens_concretize(lens_abstract(json_io::read_lens(in.node())))));
    } else if (k == "prism") {
        emit(json_io::write_prism(prism_concretize(prism_abstract(json_io::read_prism(in.node())))));
    } else if (k == "set_optic") {
        const auto o = json_io::read_set_optic(in.node());
        if (o.kind == OpticKind::lens) emit(json_io::write_lens(lens_concretize(o)));
        else emit(json_io::write_prism(prism_concretize(o)));
    } else {
        auto d = json_io::read_exact_optic(in.node());
        const auto& o = d.optic;
        const auto sp = optic_coend(d.act1, d.act2, o.a, o.b, o.s, o.t);
        const auto cls = sp.class_of(o);
        d.optic = sp.member(sp.quotient.representative(cls));
        if (opt.json_out) {
            emit({{"class", sp.quotient.carrier[cls]}, {"classes", sp.quotient.size()}, {"representative", json_io::write_exact_optic(d)}});
        } else {
            std::cout << "class " << sp.quotient.carrier[cls] << " of " << sp.quotient.size() << '\n';
            emit(json_io::write_exact_optic(d));
        }
    }
    return 0;
}

// --- poly ---------------------------------------------------------------------------

PolyFunctor read_valid_poly(const std::string& file) {
    const auto in = load(file);
    expect_kind(in, {"polynomial"});
    auto p = json_io::read_poly(in.node());
    if (const auto r = validate_poly(p); !r.ok()) throw ValidationError(file + ": " + violations_text(r));
    return p;
}

PolyLens read_valid_polylens(const std::string& file) {
    const auto in = load(file);
    expect_kind(in, {"polylens"});
    auto l = json_io::read_polylens(in.node());
    if (const auto r = validate_polylens(l); !r.ok()) throw ValidationError(file + ": " + violations_text(r));
    return l;
}

int run_poly_eval(const Options& opt, const std::string& file, std::size_t n) {
    const auto ev = eval_poly(read_valid_poly(file), oracle_set(n));
    if (opt.json_out) {
        emit({{"y", n}, {"size", ev.size()}, {"elements", ev.set.elements()}});
        return 0;
    }
    std::cout << "|P(y)| at |y| = " << n << ": " << ev.size() << '\n';
    for (const auto& e : ev.set.elements()) std::cout << e << '\n';
    return 0;
}

int run_poly_nats(const Options& opt, const std::string& pf, const std::string& qf) {
    const auto p = read_valid_poly(pf), q = read_valid_poly(qf);
    const auto lenses = enumerate_polylenses(p, q);
    json list = json::array();
    for (const auto& l : lenses) list.push_back(json_io::write_polylens(l));
    if (opt.json_out) {
        emit({{"count", count_polylenses(p, q)}, {"polylenses", list}});
        return 0;
    }
    std::cout << "count: " << count_polylenses(p, q) << '\n';
    for (const auto& l : list) std::cout << l.dump() << '\n';
    return 0;
}

int run_poly_oracle(const Options& opt, const std::string& pf, const std::string& qf, std::size_t y_max) {
    const auto p = read_valid_poly(pf), q = read_valid_poly(qf);
    if (y_max == 0) y_max = nat_oracle_min_bound(p);
    const auto res = nat_oracle(p, q, y_max, false);
    const auto formula = count_polylenses(p, q);
    if (opt.json_out) {
        emit({{"y_max", res.y_max}, {"oracle", res.count}, {"formula", formula}, {"agree", res.count == formula}});
    } else {
        std::cout << "oracle: " << res.count << " (|y| <= " << res.y_max << ")\n";
        std::cout << "formula: " << formula << '\n';
        std::cout << "poly/oracle: " << (res.count == formula ? "PASS" : "FAIL") << '\n';
    }
    return res.count == formula ? 0 : 1;
}

int run_poly_compose(const std::string& f1, const std::string& f2) {
    emit(json_io::write_polylens(compose_polylens(read_valid_polylens(f1), read_valid_polylens(f2))));
    return 0;
}

int run_poly_normalize(const std::string& file, const std::string& source, const std::string& target) {
    const auto in = load(file);
    expect_kind(in, {"ommatidium", "compound"});
    if (in.kind() == "ommatidium") {
        const auto o = json_io::read_ommatidium(in.node());
        if (const auto r = validate_ommatidium(o); !r.ok()) throw ValidationError(file + ": " + violations_text(r));
        emit(json_io::write_polylens(ommatidium_to_polylens(o)));
        return 0;
    }
    if (source.empty() || target.empty()) {
        throw CLI::ValidationError("poly normalize", "a compound optic needs --source and --target polynomials");
    }
    const auto o = json_io::read_compound(in.node());
    if (const auto r = validate_compound(o); !r.ok()) throw ValidationError(file + ": " + violations_text(r));
    emit(json_io::write_polylens(compound_normal_form(o, read_valid_poly(source), read_valid_poly(target))));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optika: finite coends, Kan extensions, profunctors and optics"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    Options opt;
    app.add_flag("--json", opt.json_out, "JSON output");
    app.add_option("--max-card", opt.max_card, "largest set size for brute-force checks")->capture_default_str();
    app.add_option("--corpus", opt.corpus, "corpus directory or file (repeatable)");

    std::function<int()> action;

    auto* check = app.add_subcommand("check", "parse and validate input files");
    std::vector<std::string> check_files;
    check->add_option("files", check_files)->required();
    check->callback([&] { action = [&] { return run_check(opt, check_files); }; });

    auto* co = app.add_subcommand("coend", "coend of a bifunctor");
    std::string coend_file;
    co->add_option("file", coend_file)->required();
    co->callback([&] { action = [&] { return run_coend(opt, coend_file); }; });

    auto* kan = app.add_subcommand("kan", "left Kan extension of a co-presheaf");
    std::vector<std::string> kan_files;
    std::string chain_file;
    kan->add_option("files", kan_files, "<copresheaf> <functor>");
    kan->add_option("--check-composition", chain_file, "kan_chain file");
    kan->callback([&] { action = [&] { return run_kan(opt, kan_files, chain_file); }; });

    auto* prof = app.add_subcommand("prof", "profunctor composition and action");
    prof->require_subcommand(1);
    std::string prof_p, prof_q;
    auto* pc = prof->add_subcommand("compose", "p ⋄ q");
    pc->add_option("p", prof_p)->required();
    pc->add_option("q", prof_q)->required();
    pc->callback([&] { action = [&] { return run_prof_compose(prof_p, prof_q); }; });
    auto* pa = prof->add_subcommand("act", "p • a");
    pa->add_option("p", prof_p)->required();
    pa->add_option("a", prof_q)->required();
    pa->callback([&] { action = [&] { return run_prof_act(prof_p, prof_q); }; });
    auto* pl = prof->add_subcommand("laws", "the prof suite");
    pl->callback([&] { action = [&] { return run_laws(opt, {"prof"}, false, false); }; });

    auto* optic = app.add_subcommand("optic", "optics");
    optic->require_subcommand(1);
    std::string optic_1, optic_2, regime = "exact";
    auto* oc = optic->add_subcommand("compose", "o2 ∘ o1, with o1 applied first");
    oc->add_option("first", optic_1)->required();
    oc->add_option("second", optic_2)->required();
    oc->callback([&] { action = [&] { return run_optic_compose(optic_1, optic_2); }; });
    auto* on = optic->add_subcommand("normalize", "concrete normal form or class representative");
    on->add_option("file", optic_1)->required();
    on->callback([&] { action = [&] { return run_optic_normalize(opt, optic_1); }; });
    auto* ol = optic->add_subcommand("laws", "the simple_optics suite in one regime");
    ol->add_option("--regime", regime)->check(CLI::IsMember({"exact", "normalform"}))->capture_default_str();
    ol->callback([&] {
        action = [&] {
            return run_laws(opt, {"simple_optics"}, false, false, [&](const std::string& s, const std::string& l) {
                const auto* spec = laws::find_spec(s, l);
                return spec && spec->regime == regime;
            });
        };
    });

    auto* poly = app.add_subcommand("poly", "polynomial functors and polylenses");
    poly->require_subcommand(1);
    std::string poly_1, poly_2, poly_source, poly_target;
    std::size_t poly_n = 2, y_max = 0;
    auto* pe = poly->add_subcommand("eval", "P(y) at a set of the given size");
    pe->add_option("poly", poly_1)->required();
    pe->add_option("size", poly_n)->required();
    pe->callback([&] { action = [&] { return run_poly_eval(opt, poly_1, poly_n); }; });
    auto* pn = poly->add_subcommand("nats", "polylenses p -> q");
    pn->add_option("p", poly_1)->required();
    pn->add_option("q", poly_2)->required();
    pn->callback([&] { action = [&] { return run_poly_nats(opt, poly_1, poly_2); }; });
    auto* po = poly->add_subcommand("oracle", "count natural transformations by brute force");
    po->add_option("p", poly_1)->required();
    po->add_option("q", poly_2)->required();
    po->add_option("--y-max", y_max, "largest |y| (default: the smallest sufficient bound)");
    po->callback([&] { action = [&] { return run_poly_oracle(opt, poly_1, poly_2, y_max); }; });
    auto* pcmp = poly->add_subcommand("compose", "l2 ∘ l1");
    pcmp->add_option("first", poly_1)->required();
    pcmp->add_option("second", poly_2)->required();
    pcmp->callback([&] { action = [&] { return run_poly_compose(poly_1, poly_2); }; });
    auto* pnorm = poly->add_subcommand("normalize", "polylens normal form of an ommatidium or compound optic");
    pnorm->add_option("file", poly_1)->required();
    pnorm->add_option("--source", poly_source, "polynomial for a compound optic's source");
    pnorm->add_option("--target", poly_target, "polynomial for a compound optic's target");
    pnorm->callback([&] { action = [&] { return run_poly_normalize(poly_1, poly_source, poly_target); }; });

    auto* lw = app.add_subcommand("laws", "run law suites over the corpus");
    bool all = false, coverage = false, timing = false;
    std::vector<std::string> suites;
    lw->add_flag("--all", all, "every suite");
    lw->add_option("--suite", suites, "one suite (repeatable)");
    lw->add_flag("--coverage", coverage, "print the invariant coverage map");
    lw->add_flag("--timing", timing, "include wall time per suite");
    lw->callback([&] {
        action = [&] {
            if (!all && suites.empty()) throw CLI::ValidationError("laws", "give --all or --suite");
            return run_laws(opt, all ? std::vector<std::string>{} : suites, coverage, timing);
        };
    });

    auto* cw = app.add_subcommand("corpus", "the bundled corpus");
    cw->require_subcommand(1);
    std::string out_dir;
    auto* cww = cw->add_subcommand("write", "write the bundled corpus to a directory");
    cww->add_option("dir", out_dir)->required();
    cww->callback([&] {
        action = [&] {
            corpus::write_corpus(out_dir);
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return action();
    } catch (const CLI::Error& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
