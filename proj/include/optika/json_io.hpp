#pragma once

// JSON reading and writing for every input type. Tables are keyed by element ids, so a
// function a -> b is an object {x: f(x)}. Unknown fields are rejected. Errors carry the
// file and either line:column (syntax) or a JSON pointer (structure).

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "optika/errors.hpp"
#include "optika/fincat.hpp"
#include "optika/coend.hpp"
#include "optika/poly.hpp"
#include "optika/prof.hpp"
#include "optika/simple_optics.hpp"

namespace optika::json_io {

using json = nlohmann::json;

inline std::string pointer_token(const std::string& key) {
    std::string out;
    for (char ch : key) {
        if (ch == '~') out += "~0";
        else if (ch == '/') out += "~1";
        else out += ch;
    }
    return out;
}

// A JSON value together with where it came from.
class Node {
public:
    Node(const json& v, std::string file, std::string path = {})
        : v_(&v), file_(std::move(file)), path_(std::move(path)) {}

    const json& value() const { return *v_; }
    const std::string& file() const { return file_; }
    std::string where() const { return file_ + ":" + (path_.empty() ? std::string("/") : path_); }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(where(), what); }

    // Checks that this is an object with the required keys and nothing beyond the
    // optional ones. "kind" is always allowed, and must equal `kind` when present.
    void expect_object(std::string_view kind, std::initializer_list<std::string_view> required,
                       std::initializer_list<std::string_view> optional = {}) const {
        if (!v_->is_object()) fail("expected an object");
        for (auto k : required) {
            if (!v_->contains(std::string(k))) fail("missing field '" + std::string(k) + "'");
        }
        for (const auto& [k, val] : v_->items()) {
            if (k == "kind") {
                if (!val.is_string() || val.get<std::string>() != kind) {
                    child("kind").fail("expected kind '" + std::string(kind) + "'");
                }
                continue;
            }
            bool known = false;
            for (auto r : required) known = known || k == r;
            for (auto o : optional) known = known || k == o;
            if (!known) child(k).fail("unknown field '" + k + "'");
        }
    }

    bool has(const std::string& key) const { return v_->is_object() && v_->contains(key); }

    Node operator[](const std::string& key) const {
        if (!has(key)) fail("missing field '" + key + "'");
        return child(key);
    }

    std::string str() const {
        if (!v_->is_string()) fail("expected a string");
        return v_->get<std::string>();
    }

    std::size_t uint() const {
        if (!v_->is_number_unsigned()) fail("expected a non-negative integer");
        return v_->get<std::size_t>();
    }

    std::vector<Node> items() const {
        if (!v_->is_array()) fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < v_->size(); ++i) out.emplace_back((*v_)[i], file_, path_ + "/" + std::to_string(i));
        return out;
    }

    std::vector<std::pair<std::string, Node>> entries() const {
        if (!v_->is_object()) fail("expected an object");
        std::vector<std::pair<std::string, Node>> out;
        for (const auto& [k, val] : v_->items()) out.emplace_back(k, child(k));
        return out;
    }

    std::vector<Atom> atoms() const {
        std::vector<Atom> out;
        for (const auto& it : items()) out.push_back(it.str());
        return out;
    }

    FinSet set() const {
        return guard([&] { return FinSet(atoms()); });
    }

    // Runs f, turning library validation errors into parse errors at this node.
    template <class F>
    auto guard(F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            fail(e.what());
        } catch (const MismatchError& e) {
            fail(e.what());
        }
    }

private:
    Node child(const std::string& key) const { return Node((*v_)[key], file_, path_ + "/" + pointer_token(key)); }

    const json* v_;
    std::string file_;
    std::string path_;
};

// Parses text; syntax errors report line and column.
inline json parse_text(const std::string& text, const std::string& file) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const auto stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError(file + ":" + std::to_string(line) + ":" + std::to_string(col), msg);
    }
}

inline json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

inline std::string kind_of(const Node& n) {
    if (!n.value().is_object()) n.fail("expected an object");
    if (!n.has("kind")) n.fail("missing field 'kind'");
    return n["kind"].str();
}

// --- functions between finite sets ----------------------------------------------------

inline Table read_function(const Node& n, const FinSet& dom, const FinSet& cod) {
    Table t(dom.size(), npos);
    for (const auto& [k, v] : n.entries()) {
        const auto i = dom.find(k);
        if (!i) v.fail("'" + k + "' is not an element of the domain");
        const auto j = cod.find(v.str());
        if (!j) v.fail("'" + v.str() + "' is not an element of the codomain");
        t[*i] = *j;
    }
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (t[i] == npos) n.fail("no image given for '" + dom[i] + "'");
    }
    return t;
}

inline json write_function(const FinSet& dom, const FinSet& cod, const Table& t) {
    json out = json::object();
    for (std::size_t i = 0; i < dom.size(); ++i) out[dom[i]] = cod[t.at(i)];
    return out;
}

inline json write_set(const FinSet& s) { return s.elements(); }

inline std::size_t read_object(const Node& n, const FinCategory& c) {
    const auto id = n.str();
    if (auto i = c.find_object(id)) return *i;
    n.fail("unknown object '" + id + "'");
}

inline std::size_t read_morphism(const Node& n, const FinCategory& c) {
    const auto id = n.str();
    if (auto i = c.find_morphism(id)) return *i;
    n.fail("unknown morphism '" + id + "'");
}

inline std::size_t read_element(const Node& n, const FinSet& s) {
    const auto id = n.str();
    if (auto i = s.find(id)) return *i;
    n.fail("'" + id + "' is not an element of the set");
}

// Entries of an object keyed by the objects (or morphisms) of a category; every key
// must be known. Returns the index for each entry.
template <class Fn>
void for_objects(const Node& n, const FinCategory& c, Fn&& fn) {
    for (const auto& [k, v] : n.entries()) {
        const auto o = c.find_object(k);
        if (!o) v.fail("unknown object '" + k + "'");
        fn(*o, v);
    }
}

template <class Fn>
void for_morphisms(const Node& n, const FinCategory& c, Fn&& fn) {
    for (const auto& [k, v] : n.entries()) {
        const auto f = c.find_morphism(k);
        if (!f) v.fail("unknown morphism '" + k + "'");
        fn(*f, v);
    }
}

// --- categories and functors ---------------------------------------------------------

inline FinCategory read_category(const Node& n) {
    n.expect_object("category", {"objects", "morphisms", "identities"}, {"compose"});
    FinCategory::Builder b;
    for (const auto& o : n["objects"].atoms()) b.bare_object(o);
    for (const auto& m : n["morphisms"].items()) {
        m.expect_object("morphism", {"id", "src", "tgt"});
        b.morphism(m["id"].str(), m["src"].str(), m["tgt"].str());
    }
    for (const auto& [o, id] : n["identities"].entries()) b.identity(o, id.str());
    if (n.has("compose")) {
        for (const auto& row : n["compose"].items()) {
            const auto parts = row.atoms();
            if (parts.size() != 3) row.fail("expected [g, f, g∘f]");
            b.compose(parts[0], parts[1], parts[2]);
        }
    }
    return n.guard([&] { return b.build(); });
}

inline json write_category(const FinCategory& c) {
    json out = {{"kind", "category"}, {"objects", c.objects()}};
    json mors = json::array(), ids = json::object(), comp = json::array();
    for (const auto& m : c.morphisms()) mors.push_back({{"id", m.id}, {"src", c.object(m.src)}, {"tgt", c.object(m.tgt)}});
    for (std::size_t o = 0; o < c.num_objects(); ++o) ids[c.object(o)] = c.morphism(c.identity(o)).id;
    for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
        for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
            const auto gf = c.compose(g, f);
            if (gf == npos) continue;
            // The builder fills these in.
            if (g == c.identity(c.tgt(f)) && gf == f) continue;
            if (f == c.identity(c.src(g)) && gf == g) continue;
            comp.push_back({c.morphism(g).id, c.morphism(f).id, c.morphism(gf).id});
        }
    }
    out["morphisms"] = mors;
    out["identities"] = ids;
    out["compose"] = comp;
    return out;
}

// Identity morphisms may be left out; they go to the identity of the image.
inline FinFunctor read_functor(const Node& n) {
    n.expect_object("functor", {"source", "target", "objects", "morphisms"});
    const auto src = read_category(n["source"]);
    const auto tgt = read_category(n["target"]);
    FinFunctor f{src, tgt, Table(src.num_objects(), npos), Table(src.num_morphisms(), npos)};
    for_objects(n["objects"], src, [&](std::size_t o, const Node& v) { f.obj_map[o] = read_object(v, tgt); });
    for_morphisms(n["morphisms"], src, [&](std::size_t m, const Node& v) { f.mor_map[m] = read_morphism(v, tgt); });
    for (std::size_t o = 0; o < src.num_objects(); ++o) {
        if (f.obj_map[o] == npos) n["objects"].fail("object '" + src.object(o) + "' is not mapped");
        if (f.mor_map[src.identity(o)] == npos) f.mor_map[src.identity(o)] = tgt.identity(f.obj_map[o]);
    }
    for (std::size_t m = 0; m < src.num_morphisms(); ++m) {
        if (f.mor_map[m] == npos) n["morphisms"].fail("morphism '" + src.morphism(m).id + "' is not mapped");
    }
    return f;
}

inline json write_functor(const FinFunctor& f) {
    json objs = json::object(), mors = json::object();
    for (std::size_t o = 0; o < f.source.num_objects(); ++o) objs[f.source.object(o)] = f.target.object(f.obj_map[o]);
    for (std::size_t m = 0; m < f.source.num_morphisms(); ++m) {
        const bool implied = f.source.is_identity(m) && f.mor_map[m] == f.target.identity(f.obj_map[f.source.src(m)]);
        if (!implied) mors[f.source.morphism(m).id] = f.target.morphism(f.mor_map[m]).id;
    }
    return {{"kind", "functor"}, {"source", write_category(f.source)}, {"target", write_category(f.target)},
            {"objects", objs}, {"morphisms", mors}};
}

// Identity actions may be left out.
inline CoPresheaf read_copresheaf(const Node& n) {
    n.expect_object("copresheaf", {"base", "fibers"}, {"actions"});
    CoPresheaf f{read_category(n["base"]), {}, {}};
    const auto& c = f.base;
    f.fiber.assign(c.num_objects(), FinSet());
    std::vector<bool> seen(c.num_objects(), false);
    for_objects(n["fibers"], c, [&](std::size_t o, const Node& v) {
        f.fiber[o] = v.set();
        seen[o] = true;
    });
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        if (!seen[o]) n["fibers"].fail("no fiber given for '" + c.object(o) + "'");
    }
    f.action.assign(c.num_morphisms(), Table{});
    std::vector<bool> given(c.num_morphisms(), false);
    if (n.has("actions")) {
        for_morphisms(n["actions"], c, [&](std::size_t m, const Node& v) {
            f.action[m] = read_function(v, f.fiber[c.src(m)], f.fiber[c.tgt(m)]);
            given[m] = true;
        });
    }
    for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
        if (given[m]) continue;
        if (!c.is_identity(m)) n.fail("no action given for '" + c.morphism(m).id + "'");
        f.action[m] = identity_table(f.fiber[c.src(m)].size());
    }
    return f;
}

inline json write_copresheaf(const CoPresheaf& f) {
    const auto& c = f.base;
    json fibers = json::object(), actions = json::object();
    for (std::size_t o = 0; o < c.num_objects(); ++o) fibers[c.object(o)] = write_set(f.fiber[o]);
    for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
        if (c.is_identity(m) && f.action[m] == identity_table(f.fiber[c.src(m)].size())) continue;
        actions[c.morphism(m).id] = write_function(f.fiber[c.src(m)], f.fiber[c.tgt(m)], f.action[m]);
    }
    return {{"kind", "copresheaf"}, {"base", write_category(c)}, {"fibers", fibers}, {"actions", actions}};
}

inline NatTransformation read_components(const Node& n, const CoPresheaf& f, const CoPresheaf& g) {
    if (!(f.base == g.base)) n.fail("source and target live on different categories");
    const auto& c = f.base;
    NatTransformation eta{std::vector<Table>(c.num_objects())};
    std::vector<bool> seen(c.num_objects(), false);
    for_objects(n, c, [&](std::size_t o, const Node& v) {
        eta.components[o] = read_function(v, f.fiber[o], g.fiber[o]);
        seen[o] = true;
    });
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        if (!seen[o]) n.fail("no component given at '" + c.object(o) + "'");
    }
    return eta;
}

inline json write_components(const NatTransformation& eta, const CoPresheaf& f, const CoPresheaf& g) {
    json out = json::object();
    for (std::size_t o = 0; o < f.base.num_objects(); ++o) {
        out[f.base.object(o)] = write_function(f.fiber[o], g.fiber[o], eta.components[o]);
    }
    return out;
}

struct NatDocument {
    CoPresheaf source, target;
    NatTransformation nat;
};

inline NatDocument read_nat(const Node& n) {
    n.expect_object("nat", {"source", "target", "components"});
    NatDocument d{read_copresheaf(n["source"]), read_copresheaf(n["target"]), {}};
    d.nat = read_components(n["components"], d.source, d.target);
    return d;
}

inline json write_nat(const NatDocument& d) {
    return {{"kind", "nat"}, {"source", write_copresheaf(d.source)}, {"target", write_copresheaf(d.target)},
            {"components", write_components(d.nat, d.source, d.target)}};
}

// --- bifunctors and profunctors -------------------------------------------------------

// fibers[m][p]; left[f][x] maps fiber(c', x) -> fiber(c, x) for f: c -> c'; right[f][x]
// maps fiber(x, c) -> fiber(x, c'). Identity entries may be left out.
inline FinBifunctor read_bifunctor(const Node& n) {
    n.expect_object("bifunctor", {"base", "fibers"}, {"left", "right"});
    FinBifunctor d{read_category(n["base"]), {}, {}, {}};
    const auto& c = d.base;
    const auto no = c.num_objects(), nm = c.num_morphisms();
    d.fiber.assign(no, std::vector<FinSet>(no));
    std::vector<std::vector<bool>> seen(no, std::vector<bool>(no, false));
    for_objects(n["fibers"], c, [&](std::size_t m, const Node& row) {
        for_objects(row, c, [&](std::size_t p, const Node& v) {
            d.fiber[m][p] = v.set();
            seen[m][p] = true;
        });
    });
    for (std::size_t m = 0; m < no; ++m) {
        for (std::size_t p = 0; p < no; ++p) {
            if (!seen[m][p]) n["fibers"].fail("no fiber at <" + c.object(m) + "," + c.object(p) + ">");
        }
    }
    auto read_side = [&](const char* key, bool contravariant) {
        std::vector<std::vector<Table>> side(nm, std::vector<Table>(no));
        std::vector<std::vector<bool>> given(nm, std::vector<bool>(no, false));
        if (n.has(key)) {
            for_morphisms(n[key], c, [&](std::size_t f, const Node& row) {
                for_objects(row, c, [&](std::size_t x, const Node& v) {
                    side[f][x] = contravariant ? read_function(v, d.at(c.tgt(f), x), d.at(c.src(f), x))
                                               : read_function(v, d.at(x, c.src(f)), d.at(x, c.tgt(f)));
                    given[f][x] = true;
                });
            });
        }
        for (std::size_t f = 0; f < nm; ++f) {
            for (std::size_t x = 0; x < no; ++x) {
                if (given[f][x]) continue;
                if (!c.is_identity(f)) {
                    n.fail(std::string("no ") + key + " action of '" + c.morphism(f).id + "' at '" + c.object(x) + "'");
                }
                side[f][x] = identity_table(contravariant ? d.at(c.src(f), x).size() : d.at(x, c.src(f)).size());
            }
        }
        return side;
    };
    d.left = read_side("left", true);
    d.right = read_side("right", false);
    return d;
}

inline json write_bifunctor(const FinBifunctor& d) {
    const auto& c = d.base;
    const auto no = c.num_objects();
    json fibers = json::object(), left = json::object(), right = json::object();
    for (std::size_t m = 0; m < no; ++m) {
        for (std::size_t p = 0; p < no; ++p) fibers[c.object(m)][c.object(p)] = write_set(d.at(m, p));
    }
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        for (std::size_t x = 0; x < no; ++x) {
            const auto& l = d.left[f][x];
            const auto& r = d.right[f][x];
            if (!(c.is_identity(f) && l == identity_table(l.size()))) {
                left[c.morphism(f).id][c.object(x)] = write_function(d.at(c.tgt(f), x), d.at(c.src(f), x), l);
            }
            if (!(c.is_identity(f) && r == identity_table(r.size()))) {
                right[c.morphism(f).id][c.object(x)] = write_function(d.at(x, c.src(f)), d.at(x, c.tgt(f)), r);
            }
        }
    }
    return {{"kind", "bifunctor"}, {"base", write_category(c)}, {"fibers", fibers}, {"left", left}, {"right", right}};
}

// fibers[n][k]; contra[f][k] maps p<n',k> -> p<n,k> for f: n -> n'; co[g][n] maps
// p<n,k> -> p<n,k'> for g: k -> k'. Identity entries may be left out.
inline FinProfunctor read_profunctor(const Node& n) {
    n.expect_object("profunctor", {"source", "target", "fibers"}, {"contra", "co"});
    FinProfunctor p{read_category(n["source"]), read_category(n["target"]), {}, {}, {}};
    const auto& nc = p.source;
    const auto& kc = p.target;
    p.fiber.assign(nc.num_objects(), std::vector<FinSet>(kc.num_objects()));
    std::vector<std::vector<bool>> seen(nc.num_objects(), std::vector<bool>(kc.num_objects(), false));
    for_objects(n["fibers"], nc, [&](std::size_t a, const Node& row) {
        for_objects(row, kc, [&](std::size_t b, const Node& v) {
            p.fiber[a][b] = v.set();
            seen[a][b] = true;
        });
    });
    for (std::size_t a = 0; a < nc.num_objects(); ++a) {
        for (std::size_t b = 0; b < kc.num_objects(); ++b) {
            if (!seen[a][b]) n["fibers"].fail("no fiber at <" + nc.object(a) + "," + kc.object(b) + ">");
        }
    }
    p.contra.assign(nc.num_morphisms(), std::vector<Table>(kc.num_objects()));
    std::vector<std::vector<bool>> gc(nc.num_morphisms(), std::vector<bool>(kc.num_objects(), false));
    if (n.has("contra")) {
        for_morphisms(n["contra"], nc, [&](std::size_t f, const Node& row) {
            for_objects(row, kc, [&](std::size_t b, const Node& v) {
                p.contra[f][b] = read_function(v, p.at(nc.tgt(f), b), p.at(nc.src(f), b));
                gc[f][b] = true;
            });
        });
    }
    for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
        for (std::size_t b = 0; b < kc.num_objects(); ++b) {
            if (gc[f][b]) continue;
            if (!nc.is_identity(f)) n.fail("no contra action of '" + nc.morphism(f).id + "' at '" + kc.object(b) + "'");
            p.contra[f][b] = identity_table(p.at(nc.src(f), b).size());
        }
    }
    p.co.assign(kc.num_morphisms(), std::vector<Table>(nc.num_objects()));
    std::vector<std::vector<bool>> gk(kc.num_morphisms(), std::vector<bool>(nc.num_objects(), false));
    if (n.has("co")) {
        for_morphisms(n["co"], kc, [&](std::size_t g, const Node& row) {
            for_objects(row, nc, [&](std::size_t a, const Node& v) {
                p.co[g][a] = read_function(v, p.at(a, kc.src(g)), p.at(a, kc.tgt(g)));
                gk[g][a] = true;
            });
        });
    }
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        for (std::size_t a = 0; a < nc.num_objects(); ++a) {
            if (gk[g][a]) continue;
            if (!kc.is_identity(g)) n.fail("no co action of '" + kc.morphism(g).id + "' at '" + nc.object(a) + "'");
            p.co[g][a] = identity_table(p.at(a, kc.src(g)).size());
        }
    }
    return p;
}

inline json write_profunctor(const FinProfunctor& p) {
    const auto& nc = p.source;
    const auto& kc = p.target;
    json fibers = json::object(), contra = json::object(), co = json::object();
    for (std::size_t a = 0; a < nc.num_objects(); ++a) {
        for (std::size_t b = 0; b < kc.num_objects(); ++b) fibers[nc.object(a)][kc.object(b)] = write_set(p.at(a, b));
    }
    for (std::size_t f = 0; f < nc.num_morphisms(); ++f) {
        for (std::size_t b = 0; b < kc.num_objects(); ++b) {
            const auto& t = p.contra[f][b];
            if (nc.is_identity(f) && t == identity_table(t.size())) continue;
            contra[nc.morphism(f).id][kc.object(b)] = write_function(p.at(nc.tgt(f), b), p.at(nc.src(f), b), t);
        }
    }
    for (std::size_t g = 0; g < kc.num_morphisms(); ++g) {
        for (std::size_t a = 0; a < nc.num_objects(); ++a) {
            const auto& t = p.co[g][a];
            if (kc.is_identity(g) && t == identity_table(t.size())) continue;
            co[kc.morphism(g).id][nc.object(a)] = write_function(p.at(a, kc.src(g)), p.at(a, kc.tgt(g)), t);
        }
    }
    return {{"kind", "profunctor"}, {"source", write_category(nc)}, {"target", write_category(kc)},
            {"fibers", fibers}, {"contra", contra}, {"co", co}};
}

inline ProfNat read_prof_components(const Node& n, const FinProfunctor& p, const FinProfunctor& p2) {
    if (!(p.source == p2.source) || !(p.target == p2.target)) n.fail("profunctors of different type");
    const auto& nc = p.source;
    const auto& kc = p.target;
    ProfNat h{std::vector<std::vector<Table>>(nc.num_objects(), std::vector<Table>(kc.num_objects()))};
    std::vector<std::vector<bool>> seen(nc.num_objects(), std::vector<bool>(kc.num_objects(), false));
    for_objects(n, nc, [&](std::size_t a, const Node& row) {
        for_objects(row, kc, [&](std::size_t b, const Node& v) {
            h.components[a][b] = read_function(v, p.at(a, b), p2.at(a, b));
            seen[a][b] = true;
        });
    });
    for (std::size_t a = 0; a < nc.num_objects(); ++a) {
        for (std::size_t b = 0; b < kc.num_objects(); ++b) {
            if (!seen[a][b]) n.fail("no component at <" + nc.object(a) + "," + kc.object(b) + ">");
        }
    }
    return h;
}

inline json write_prof_components(const ProfNat& h, const FinProfunctor& p, const FinProfunctor& p2) {
    json out = json::object();
    for (std::size_t a = 0; a < p.source.num_objects(); ++a) {
        for (std::size_t b = 0; b < p.target.num_objects(); ++b) {
            out[p.source.object(a)][p.target.object(b)] = write_function(p.at(a, b), p2.at(a, b), h.components[a][b]);
        }
    }
    return out;
}

// --- polynomials ----------------------------------------------------------------------

inline PolyFunctor read_poly(const Node& n) {
    n.expect_object("polynomial", {"index", "positions", "directions"});
    PolyFunctor p{n["index"].set(), {}, {}};
    p.positions.assign(p.index.size(), FinSet());
    p.directions.assign(p.index.size(), FinSet());
    for (const char* key : {"positions", "directions"}) {
        auto& dst = std::string(key) == "positions" ? p.positions : p.directions;
        std::vector<bool> seen(p.index.size(), false);
        for (const auto& [k, v] : n[key].entries()) {
            const auto i = p.index.find(k);
            if (!i) v.fail("'" + k + "' is not an index");
            dst[*i] = v.set();
            seen[*i] = true;
        }
        for (std::size_t i = 0; i < p.index.size(); ++i) {
            if (!seen[i]) n[key].fail("nothing given for index '" + p.index[i] + "'");
        }
    }
    return p;
}

inline json write_poly(const PolyFunctor& p) {
    json pos = json::object(), dir = json::object();
    for (std::size_t i = 0; i < p.index.size(); ++i) {
        pos[p.index[i]] = write_set(p.positions[i]);
        dir[p.index[i]] = write_set(p.directions[i]);
    }
    return {{"kind", "polynomial"}, {"index", write_set(p.index)}, {"positions", pos}, {"directions", dir}};
}

// entries[i][x] = {"index": j, "position": a, "direction": {b: t}}.
inline PolyLens read_polylens(const Node& n) {
    n.expect_object("polylens", {"source", "target", "entries"});
    PolyLens l{read_poly(n["source"]), read_poly(n["target"]), {}};
    const auto& p = l.source;
    const auto& q = l.target;
    l.entries.resize(p.index.size());
    const auto& en = n["entries"];
    std::vector<bool> seen(p.index.size(), false);
    for (const auto& [k, row] : en.entries()) {
        const auto i = p.index.find(k);
        if (!i) row.fail("'" + k + "' is not an index of the source");
        seen[*i] = true;
        l.entries[*i].assign(p.positions[*i].size(), PolyValue{});
        std::vector<bool> have(p.positions[*i].size(), false);
        for (const auto& [x, v] : row.entries()) {
            const auto xi = p.positions[*i].find(x);
            if (!xi) v.fail("'" + x + "' is not a position");
            v.expect_object("polyvalue", {"index", "position", "direction"});
            const auto j = read_element(v["index"], q.index);
            l.entries[*i][*xi] = {j, read_element(v["position"], q.positions[j]),
                                  read_function(v["direction"], q.directions[j], p.directions[*i])};
            have[*xi] = true;
        }
        for (std::size_t x = 0; x < have.size(); ++x) {
            if (!have[x]) row.fail("no value for position '" + p.positions[*i][x] + "'");
        }
    }
    for (std::size_t i = 0; i < p.index.size(); ++i) {
        if (!seen[i]) en.fail("no entries for index '" + p.index[i] + "'");
    }
    return l;
}

inline json write_polylens(const PolyLens& l) {
    const auto& p = l.source;
    const auto& q = l.target;
    json entries = json::object();
    for (std::size_t i = 0; i < p.index.size(); ++i) {
        json row = json::object();
        for (std::size_t x = 0; x < l.entries[i].size(); ++x) {
            const auto& v = l.entries[i][x];
            row[p.positions[i][x]] = {{"index", q.index[v.index]},
                                      {"position", q.positions[v.index][v.position]},
                                      {"direction", write_function(q.directions[v.index], p.directions[i], v.direction)}};
        }
        entries[p.index[i]] = row;
    }
    return {{"kind", "polylens"}, {"source", write_poly(p)}, {"target", write_poly(q)}, {"entries", entries}};
}

// residual[n][k]; forward[k] and backward[k] use the labels "<n,<x,c>>" of the Σ sets.
inline Ommatidium read_ommatidium(const Node& n) {
    n.expect_object("ommatidium", {"source", "target", "residual", "forward", "backward"});
    Ommatidium o{read_poly(n["source"]), read_poly(n["target"]), {}, {}, {}};
    const auto nn = o.target.index.size(), nk = o.source.index.size();
    o.residual.assign(nn, std::vector<FinSet>(nk));
    std::vector<std::vector<bool>> seen(nn, std::vector<bool>(nk, false));
    for (const auto& [a, row] : n["residual"].entries()) {
        const auto ai = o.target.index.find(a);
        if (!ai) row.fail("'" + a + "' is not an index of the target");
        for (const auto& [b, v] : row.entries()) {
            const auto bi = o.source.index.find(b);
            if (!bi) v.fail("'" + b + "' is not an index of the source");
            o.residual[*ai][*bi] = v.set();
            seen[*ai][*bi] = true;
        }
    }
    for (std::size_t a = 0; a < nn; ++a) {
        for (std::size_t b = 0; b < nk; ++b) {
            if (!seen[a][b]) n["residual"].fail("no residual at <" + o.target.index[a] + "," + o.source.index[b] + ">");
        }
    }
    o.forward.resize(nk);
    o.backward.resize(nk);
    for (const char* key : {"forward", "backward"}) {
        const bool fw = std::string(key) == "forward";
        std::vector<bool> have(nk, false);
        for (const auto& [b, v] : n[key].entries()) {
            const auto bi = o.source.index.find(b);
            if (!bi) v.fail("'" + b + "' is not an index of the source");
            if (fw) o.forward[*bi] = read_function(v, o.source.positions[*bi], o.forward_set(*bi).sum.set());
            else o.backward[*bi] = read_function(v, o.backward_set(*bi).sum.set(), o.source.directions[*bi]);
            have[*bi] = true;
        }
        for (std::size_t b = 0; b < nk; ++b) {
            if (!have[b]) n[key].fail("nothing given for index '" + o.source.index[b] + "'");
        }
    }
    return o;
}

inline json write_ommatidium(const Ommatidium& o) {
    json res = json::object(), fw = json::object(), bw = json::object();
    for (std::size_t a = 0; a < o.target.index.size(); ++a) {
        for (std::size_t b = 0; b < o.source.index.size(); ++b) res[o.target.index[a]][o.source.index[b]] = write_set(o.residual[a][b]);
    }
    for (std::size_t b = 0; b < o.source.index.size(); ++b) {
        fw[o.source.index[b]] = write_function(o.source.positions[b], o.forward_set(b).sum.set(), o.forward[b]);
        bw[o.source.index[b]] = write_function(o.backward_set(b).sum.set(), o.source.directions[b], o.backward[b]);
    }
    return {{"kind", "ommatidium"}, {"source", write_poly(o.source)}, {"target", write_poly(o.target)},
            {"residual", res}, {"forward", fw}, {"backward", bw}};
}

// Components of forward (s ⇒ p•a) and backward (p•b ⇒ t) use the element labels of the
// computed actions p•a and p•b.
inline CompoundOptic read_compound(const Node& n) {
    n.expect_object("compound", {"residual", "a", "b", "s", "t", "forward", "backward"});
    CompoundOptic o{read_profunctor(n["residual"]), read_copresheaf(n["a"]), read_copresheaf(n["b"]),
                    read_copresheaf(n["s"]), read_copresheaf(n["t"]), {}, {}};
    if (!(o.a.base == o.residual.source) || !(o.b.base == o.residual.source)) n.fail("a and b must live on the source");
    if (!(o.s.base == o.residual.target) || !(o.t.base == o.residual.target)) n.fail("s and t must live on the target");
    const auto pa = n.guard([&] { return prof_action(o.residual, o.a); });
    const auto pb = n.guard([&] { return prof_action(o.residual, o.b); });
    o.forward = read_components(n["forward"], o.s, pa);
    o.backward = read_components(n["backward"], pb, o.t);
    return o;
}

inline json write_compound(const CompoundOptic& o) {
    const auto pa = prof_action(o.residual, o.a);
    const auto pb = prof_action(o.residual, o.b);
    return {{"kind", "compound"},
            {"residual", write_profunctor(o.residual)},
            {"a", write_copresheaf(o.a)},
            {"b", write_copresheaf(o.b)},
            {"s", write_copresheaf(o.s)},
            {"t", write_copresheaf(o.t)},
            {"forward", write_components(o.forward, o.s, pa)},
            {"backward", write_components(o.backward, pb, o.t)}};
}

// --- monoidal categories, actions, optics ---------------------------------------------

// Tables keyed by ids: tensor_objects[m][n], tensor_morphisms[f][g]. Associator and
// unitors default to identities (strict).
inline FinMonoidalCategory read_monoidal(const Node& n) {
    n.expect_object("monoidal", {"category", "unit", "tensor_objects", "tensor_morphisms"},
                    {"associator", "left_unitor", "right_unitor"});
    const auto c = read_category(n["category"]);
    const auto no = c.num_objects(), nm = c.num_morphisms();
    Table to(no * no, npos), tm(nm * nm, npos);
    for_objects(n["tensor_objects"], c, [&](std::size_t x, const Node& row) {
        for_objects(row, c, [&](std::size_t y, const Node& v) { to[x * no + y] = read_object(v, c); });
    });
    for_morphisms(n["tensor_morphisms"], c, [&](std::size_t f, const Node& row) {
        for_morphisms(row, c, [&](std::size_t g, const Node& v) { tm[f * nm + g] = read_morphism(v, c); });
    });
    for (auto v : to) {
        if (v == npos) n["tensor_objects"].fail("tensor of objects is not total");
    }
    for (auto v : tm) {
        if (v == npos) n["tensor_morphisms"].fail("tensor of morphisms is not total");
    }
    auto mc = strict_monoidal(c, to, tm, read_object(n["unit"], c));
    if (n.has("associator")) {
        for_objects(n["associator"], c, [&](std::size_t x, const Node& r1) {
            for_objects(r1, c, [&](std::size_t y, const Node& r2) {
                for_objects(r2, c, [&](std::size_t z, const Node& v) { mc.associator[(x * no + y) * no + z] = read_morphism(v, c); });
            });
        });
    }
    if (n.has("left_unitor")) {
        for_objects(n["left_unitor"], c, [&](std::size_t x, const Node& v) { mc.left_unitor[x] = read_morphism(v, c); });
    }
    if (n.has("right_unitor")) {
        for_objects(n["right_unitor"], c, [&](std::size_t x, const Node& v) { mc.right_unitor[x] = read_morphism(v, c); });
    }
    return mc;
}

inline json write_monoidal(const FinMonoidalCategory& mc) {
    const auto& c = mc.underlying;
    const auto no = c.num_objects(), nm = c.num_morphisms();
    json to = json::object(), tm = json::object();
    for (std::size_t x = 0; x < no; ++x) {
        for (std::size_t y = 0; y < no; ++y) to[c.object(x)][c.object(y)] = c.object(mc.tensor(x, y));
    }
    for (std::size_t f = 0; f < nm; ++f) {
        for (std::size_t g = 0; g < nm; ++g) tm[c.morphism(f).id][c.morphism(g).id] = c.morphism(mc.tensor_arrow(f, g)).id;
    }
    json out = {{"kind", "monoidal"}, {"category", write_category(c)}, {"unit", c.object(mc.unit)},
                {"tensor_objects", to}, {"tensor_morphisms", tm}};
    const auto strict = strict_monoidal(c, mc.tensor_obj, mc.tensor_mor, mc.unit);
    if (mc.associator != strict.associator) {
        json a = json::object();
        for (std::size_t x = 0; x < no; ++x) {
            for (std::size_t y = 0; y < no; ++y) {
                for (std::size_t z = 0; z < no; ++z) a[c.object(x)][c.object(y)][c.object(z)] = c.morphism(mc.alpha(x, y, z)).id;
            }
        }
        out["associator"] = a;
    }
    auto unitor = [&](const Table& t) {
        json u = json::object();
        for (std::size_t x = 0; x < no; ++x) u[c.object(x)] = c.morphism(t[x]).id;
        return u;
    };
    if (mc.left_unitor != strict.left_unitor) out["left_unitor"] = unitor(mc.left_unitor);
    if (mc.right_unitor != strict.right_unitor) out["right_unitor"] = unitor(mc.right_unitor);
    return out;
}

// objects[m][c] = m•c, morphisms[f][g] = f•g; multiplicator[m][n][c] and unitor[c]
// default to identities.
inline MonoidalAction read_action(const Node& n) {
    n.expect_object("action", {"acting", "on", "objects", "morphisms"}, {"multiplicator", "unitor"});
    MonoidalAction act{read_monoidal(n["acting"]), read_category(n["on"]), {}, {}, {}, {}};
    const auto& m = act.acting.underlying;
    const auto& c = act.on;
    const auto mo = m.num_objects(), co = c.num_objects(), cm = c.num_morphisms();
    act.app.assign(mo * co, npos);
    act.app_mor.assign(m.num_morphisms() * cm, npos);
    for_objects(n["objects"], m, [&](std::size_t x, const Node& row) {
        for_objects(row, c, [&](std::size_t y, const Node& v) { act.app[x * co + y] = read_object(v, c); });
    });
    for_morphisms(n["morphisms"], m, [&](std::size_t f, const Node& row) {
        for_morphisms(row, c, [&](std::size_t g, const Node& v) { act.app_mor[f * cm + g] = read_morphism(v, c); });
    });
    for (auto v : act.app) {
        if (v == npos) n["objects"].fail("action on objects is not total");
    }
    for (auto v : act.app_mor) {
        if (v == npos) n["morphisms"].fail("action on morphisms is not total");
    }
    // Strict default: identity of (m⊗n)•c.
    act.multiplicator.assign(mo * mo * co, npos);
    for (std::size_t x = 0; x < mo; ++x) {
        for (std::size_t x2 = 0; x2 < mo; ++x2) {
            for (std::size_t y = 0; y < co; ++y) {
                act.multiplicator[(x * mo + x2) * co + y] = c.identity(act.act(act.acting.tensor(x, x2), y));
            }
        }
    }
    for (std::size_t y = 0; y < co; ++y) act.unitor.push_back(c.identity(act.act(act.acting.unit, y)));
    if (n.has("multiplicator")) {
        for_objects(n["multiplicator"], m, [&](std::size_t x, const Node& r1) {
            for_objects(r1, m, [&](std::size_t x2, const Node& r2) {
                for_objects(r2, c, [&](std::size_t y, const Node& v) {
                    act.multiplicator[(x * mo + x2) * co + y] = read_morphism(v, c);
                });
            });
        });
    }
    if (n.has("unitor")) {
        for_objects(n["unitor"], c, [&](std::size_t y, const Node& v) { act.unitor[y] = read_morphism(v, c); });
    }
    return act;
}

inline json write_action(const MonoidalAction& act) {
    const auto& m = act.acting.underlying;
    const auto& c = act.on;
    const auto mo = m.num_objects(), co = c.num_objects();
    json objs = json::object(), mors = json::object(), mult = json::object(), unit = json::object();
    bool strict = true;
    for (std::size_t x = 0; x < mo; ++x) {
        for (std::size_t y = 0; y < co; ++y) objs[m.object(x)][c.object(y)] = c.object(act.act(x, y));
    }
    for (std::size_t f = 0; f < m.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < c.num_morphisms(); ++g) mors[m.morphism(f).id][c.morphism(g).id] = c.morphism(act.act_mor(f, g)).id;
    }
    for (std::size_t x = 0; x < mo; ++x) {
        for (std::size_t x2 = 0; x2 < mo; ++x2) {
            for (std::size_t y = 0; y < co; ++y) {
                const auto mu = act.mu(x, x2, y);
                strict = strict && mu == c.identity(act.act(act.acting.tensor(x, x2), y));
                mult[m.object(x)][m.object(x2)][c.object(y)] = c.morphism(mu).id;
            }
        }
    }
    bool strict_unit = true;
    for (std::size_t y = 0; y < co; ++y) {
        strict_unit = strict_unit && act.unitor[y] == c.identity(act.act(act.acting.unit, y));
        unit[c.object(y)] = c.morphism(act.unitor[y]).id;
    }
    json out = {{"kind", "action"}, {"acting", write_monoidal(act.acting)}, {"on", write_category(c)},
                {"objects", objs}, {"morphisms", mors}};
    if (!strict) out["multiplicator"] = mult;
    if (!strict_unit) out["unitor"] = unit;
    return out;
}

// An optic in the exact regime, together with the two actions it lives over.
struct ExactOpticDocument {
    MonoidalAction act1, act2;
    ExistentialOptic optic;
};

inline ExactOpticDocument read_exact_optic(const Node& n) {
    n.expect_object("optic", {"action1", "action2", "residual", "forward", "backward", "a", "b", "s", "t"});
    ExactOpticDocument d{read_action(n["action1"]), read_action(n["action2"]), {}};
    const auto& c = d.act1.on;
    const auto& e = d.act2.on;
    if (!(d.act1.acting.underlying == d.act2.acting.underlying)) n.fail("actions of different monoidal categories");
    auto& o = d.optic;
    o.residual = read_object(n["residual"], d.act1.acting.underlying);
    o.forward = read_morphism(n["forward"], c);
    o.backward = read_morphism(n["backward"], e);
    o.a = read_object(n["a"], c);
    o.s = read_object(n["s"], c);
    o.b = read_object(n["b"], e);
    o.t = read_object(n["t"], e);
    const auto r = validate_optic(d.act1, d.act2, o);
    if (!r.ok()) n.fail(r.violations.front());
    return d;
}

inline json write_exact_optic(const ExactOpticDocument& d) {
    const auto& c = d.act1.on;
    const auto& e = d.act2.on;
    const auto& o = d.optic;
    return {{"kind", "optic"},
            {"action1", write_action(d.act1)},
            {"action2", write_action(d.act2)},
            {"residual", d.act1.acting.underlying.object(o.residual)},
            {"forward", c.morphism(o.forward).id},
            {"backward", e.morphism(o.backward).id},
            {"a", c.object(o.a)},
            {"s", c.object(o.s)},
            {"b", e.object(o.b)},
            {"t", e.object(o.t)}};
}

inline FinSet action_set(OpticKind kind, const FinSet& m, const FinSet& x) {
    return kind == OpticKind::lens ? product_action(m, x).set() : coproduct_action(m, x).set();
}

// Normal-form regime optic in Set; action sets use the labels "<m,x>" (lens) or
// "<inl,m>" / "<inr,x>" (prism).
inline SetOptic read_set_optic(const Node& n) {
    n.expect_object("set_optic", {"optic", "residual", "a", "b", "s", "t", "forward", "backward"});
    SetOptic o;
    const auto k = n["optic"].str();
    if (k == "lens") o.kind = OpticKind::lens;
    else if (k == "prism") o.kind = OpticKind::prism;
    else n["optic"].fail("expected 'lens' or 'prism'");
    o.residual = n["residual"].set();
    o.a = n["a"].set();
    o.b = n["b"].set();
    o.s = n["s"].set();
    o.t = n["t"].set();
    o.forward = read_function(n["forward"], o.s, action_set(o.kind, o.residual, o.a));
    o.backward = read_function(n["backward"], action_set(o.kind, o.residual, o.b), o.t);
    return o;
}

inline json write_set_optic(const SetOptic& o) {
    return {{"kind", "set_optic"},
            {"optic", kind_name(o.kind)},
            {"residual", write_set(o.residual)},
            {"a", write_set(o.a)},
            {"b", write_set(o.b)},
            {"s", write_set(o.s)},
            {"t", write_set(o.t)},
            {"forward", write_function(o.s, action_set(o.kind, o.residual, o.a), o.forward)},
            {"backward", write_function(action_set(o.kind, o.residual, o.b), o.t, o.backward)}};
}

// put[x][b] = t.
inline ConcreteLens read_lens(const Node& n) {
    n.expect_object("lens", {"s", "t", "a", "b", "get", "put"});
    ConcreteLens l{n["s"].set(), n["t"].set(), n["a"].set(), n["b"].set(), {}, {}};
    l.get = read_function(n["get"], l.s, l.a);
    const TupleSet sb(l.s, l.b);
    l.put.assign(sb.size(), npos);
    std::vector<bool> seen(l.s.size(), false);
    for (const auto& [x, row] : n["put"].entries()) {
        const auto xi = l.s.find(x);
        if (!xi) row.fail("'" + x + "' is not an element of s");
        const auto t = read_function(row, l.b, l.t);
        for (std::size_t b = 0; b < l.b.size(); ++b) l.put[sb.encode(*xi, b)] = t[b];
        seen[*xi] = true;
    }
    for (std::size_t x = 0; x < l.s.size(); ++x) {
        if (!seen[x]) n["put"].fail("no row for '" + l.s[x] + "'");
    }
    return l;
}

inline json write_lens(const ConcreteLens& l) {
    const TupleSet sb(l.s, l.b);
    json put = json::object();
    for (std::size_t x = 0; x < l.s.size(); ++x) {
        json row = json::object();
        for (std::size_t b = 0; b < l.b.size(); ++b) row[l.b[b]] = l.t[l.put[sb.encode(x, b)]];
        put[l.s[x]] = row;
    }
    return {{"kind", "lens"}, {"s", write_set(l.s)}, {"t", write_set(l.t)}, {"a", write_set(l.a)},
            {"b", write_set(l.b)}, {"get", write_function(l.s, l.a, l.get)}, {"put", put}};
}

// match[x] = {"inl": t} or {"inr": a}.
inline ConcretePrism read_prism(const Node& n) {
    n.expect_object("prism", {"s", "t", "a", "b", "match", "build"});
    ConcretePrism p{n["s"].set(), n["t"].set(), n["a"].set(), n["b"].set(), {}, {}};
    const auto ta = coproduct_action(p.t, p.a);
    p.match.assign(p.s.size(), npos);
    for (const auto& [x, v] : n["match"].entries()) {
        const auto xi = p.s.find(x);
        if (!xi) v.fail("'" + x + "' is not an element of s");
        if (!v.value().is_object() || v.value().size() != 1) v.fail("expected {\"inl\": t} or {\"inr\": a}");
        if (v.has("inl")) p.match[*xi] = ta.encode(0, read_element(v["inl"], p.t));
        else if (v.has("inr")) p.match[*xi] = ta.encode(1, read_element(v["inr"], p.a));
        else v.fail("expected {\"inl\": t} or {\"inr\": a}");
    }
    for (std::size_t x = 0; x < p.s.size(); ++x) {
        if (p.match[x] == npos) n["match"].fail("no match for '" + p.s[x] + "'");
    }
    p.build = read_function(n["build"], p.b, p.t);
    return p;
}

inline json write_prism(const ConcretePrism& p) {
    const auto ta = coproduct_action(p.t, p.a);
    json match = json::object();
    for (std::size_t x = 0; x < p.s.size(); ++x) {
        const auto [side, i] = ta.decode(p.match[x]);
        match[p.s[x]] = side == 0 ? json{{"inl", p.t[i]}} : json{{"inr", p.a[i]}};
    }
    return {{"kind", "prism"}, {"s", write_set(p.s)}, {"t", write_set(p.t)}, {"a", write_set(p.a)},
            {"b", write_set(p.b)}, {"match", match}, {"build", write_function(p.b, p.t, p.build)}};
}

// Canonical text of a document: sorted keys, two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace optika::json_io
