#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optika/fincat.hpp"
#include "optika/union_find.hpp"

namespace optika {

// A functor base^op x base -> Set.
//   fiber[m][p]  is the set at (m⁻ = m, p⁺ = p).
//   left[f][x]   for f: c -> c' maps fiber(c', x) -> fiber(c, x) (contravariant slot).
//   right[f][x]  for f: c -> c' maps fiber(x, c) -> fiber(x, c') (covariant slot).
struct FinBifunctor {
    FinCategory base;
    std::vector<std::vector<FinSet>> fiber;
    std::vector<std::vector<Table>> left;
    std::vector<std::vector<Table>> right;

    const FinSet& at(std::size_t minus, std::size_t plus) const { return fiber[minus][plus]; }
};

inline ValidationReport validate_bifunctor(const FinBifunctor& d) {
    ValidationReport r;
    const auto& c = d.base;
    const auto n = c.num_objects();
    const auto m = c.num_morphisms();
    if (d.fiber.size() != n || d.left.size() != m || d.right.size() != m) {
        r.add("bifunctor tables do not cover the base category");
        return r;
    }
    auto is_fn = [](const Table& t, std::size_t dom, std::size_t cod) {
        if (t.size() != dom) return false;
        return std::all_of(t.begin(), t.end(), [&](std::size_t v) { return v < cod; });
    };
    for (std::size_t f = 0; f < m; ++f) {
        if (d.left[f].size() != n || d.right[f].size() != n) {
            r.add("action tables of " + c.morphism(f).id + " do not cover the base");
            continue;
        }
        for (std::size_t x = 0; x < n; ++x) {
            if (!is_fn(d.left[f][x], d.at(c.tgt(f), x).size(), d.at(c.src(f), x).size())) {
                r.add("left action of " + c.morphism(f).id + " at " + c.object(x) + " is not a function");
            }
            if (!is_fn(d.right[f][x], d.at(x, c.src(f)).size(), d.at(x, c.tgt(f)).size())) {
                r.add("right action of " + c.morphism(f).id + " at " + c.object(x) + " is not a function");
            }
        }
    }
    if (!r.ok()) return r;
    for (std::size_t o = 0; o < n; ++o) {
        for (std::size_t x = 0; x < n; ++x) {
            if (d.left[c.identity(o)][x] != identity_table(d.at(o, x).size()) ||
                d.right[c.identity(o)][x] != identity_table(d.at(x, o).size())) {
                r.add("identity of " + c.object(o) + " does not act as the identity at " + c.object(x));
            }
        }
    }
    for (std::size_t g = 0; g < m; ++g) {
        for (std::size_t f = 0; f < m; ++f) {
            const auto gf = c.compose(g, f);
            if (gf == npos) continue;
            for (std::size_t x = 0; x < n; ++x) {
                // Contravariant: (g∘f)^* = f^* ∘ g^*.
                if (d.left[gf][x] != compose_tables(d.left[f][x], d.left[g][x])) {
                    r.add("left action not functorial for " + c.morphism(g).id + "∘" + c.morphism(f).id);
                }
                if (d.right[gf][x] != compose_tables(d.right[g][x], d.right[f][x])) {
                    r.add("right action not functorial for " + c.morphism(g).id + "∘" + c.morphism(f).id);
                }
            }
        }
    }
    // left(f) at the covariant end and right(g) at the contravariant end commute.
    for (std::size_t f = 0; f < m; ++f) {
        for (std::size_t g = 0; g < m; ++g) {
            const auto a = c.src(f), a2 = c.tgt(f), b = c.src(g), b2 = c.tgt(g);
            // fiber(a2, b) -> fiber(a, b2), both ways round.
            const auto one = compose_tables(d.right[g][a], d.left[f][b]);
            const auto two = compose_tables(d.left[f][b2], d.right[g][a2]);
            if (one != two) {
                r.add("actions of " + c.morphism(f).id + " and " + c.morphism(g).id + " do not commute");
            }
        }
    }
    return r;
}

// Fibers and actions of a functor out of a category or its opposite. Which variance is
// meant is fixed by the caller: for a contravariant family, action[f] with f: c -> c'
// maps fiber(c') -> fiber(c).
struct SetFamily {
    std::vector<FinSet> fiber;
    std::vector<Table> action;
};

inline SetFamily family_of(const CoPresheaf& f) { return {f.fiber, f.action}; }

// c(-, a) as a contravariant family; action is pre-composition.
inline SetFamily contravariant_hom(const FinCategory& c, std::size_t a) {
    SetFamily fam;
    for (std::size_t x = 0; x < c.num_objects(); ++x) fam.fiber.push_back(c.hom_set(x, a));
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        Table t;
        for (auto h : c.hom(c.tgt(f), a)) t.push_back(c.hom_position(c.compose(h, f)));
        fam.action.push_back(std::move(t));
    }
    return fam;
}

// The bifunctor (m⁻, m⁺) ↦ contra(m⁻) × co(m⁺). Elements are pairs <u,v> with u from
// the contravariant factor. Almost every coend in the library has this shape.
struct ProductIntegrand {
    FinBifunctor bifunctor;
    std::vector<TupleSet> tuples;  // [minus * n + plus]

    const TupleSet& at(std::size_t minus, std::size_t plus) const {
        return tuples[minus * bifunctor.base.num_objects() + plus];
    }
};

inline ProductIntegrand external_product(const FinCategory& c, const SetFamily& contra, const SetFamily& co) {
    const auto n = c.num_objects();
    const auto m = c.num_morphisms();
    ProductIntegrand pi;
    pi.bifunctor.base = c;
    pi.bifunctor.fiber.assign(n, std::vector<FinSet>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            pi.tuples.emplace_back(contra.fiber[a], co.fiber[b]);
            pi.bifunctor.fiber[a][b] = pi.tuples.back().set();
        }
    }
    pi.bifunctor.left.assign(m, std::vector<Table>(n));
    pi.bifunctor.right.assign(m, std::vector<Table>(n));
    for (std::size_t f = 0; f < m; ++f) {
        const auto s = c.src(f), t = c.tgt(f);
        for (std::size_t x = 0; x < n; ++x) {
            const auto& from_l = pi.at(t, x);
            const auto& to_l = pi.at(s, x);
            Table l(from_l.size());
            for (std::size_t e = 0; e < from_l.size(); ++e) {
                auto [u, v] = from_l.decode_pair(e);
                l[e] = to_l.encode(contra.action[f][u], v);
            }
            pi.bifunctor.left[f][x] = std::move(l);
            const auto& from_r = pi.at(x, s);
            const auto& to_r = pi.at(x, t);
            Table r(from_r.size());
            for (std::size_t e = 0; e < from_r.size(); ++e) {
                auto [u, v] = from_r.decode_pair(e);
                r[e] = to_r.encode(u, co.action[f][v]);
            }
            pi.bifunctor.right[f][x] = std::move(r);
        }
    }
    return pi;
}

struct ClassMember {
    std::size_t object;
    std::size_t element;

    friend bool operator==(const ClassMember&, const ClassMember&) = default;
    friend auto operator<=>(const ClassMember&, const ClassMember&) = default;
};

// The carrier of a coend: diagonal elements modulo the zig-zag relation.
struct QuotientSet {
    FinSet carrier;
    std::vector<std::vector<ClassMember>> classes;  // sorted members, per carrier element
    std::vector<Table> inject;                      // [object] fiber(c, c) -> carrier

    std::size_t size() const noexcept { return carrier.size(); }
    const ClassMember& representative(std::size_t cls) const { return classes[cls].front(); }
};

inline Atom class_label(const FinCategory& c, std::size_t obj, const Atom& elem) {
    return "[" + c.object(obj) + "|" + elem + "]";
}

// ∫^c d(c, c), by union-find over every (morphism, element) pair. Each class is
// represented by its least (object, element) member.
inline QuotientSet coend(const FinBifunctor& d) {
    const auto& c = d.base;
    const auto n = c.num_objects();
    std::vector<std::size_t> offset(n + 1, 0);
    for (std::size_t o = 0; o < n; ++o) offset[o + 1] = offset[o] + d.at(o, o).size();
    UnionFind uf(offset[n]);
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        if (c.is_identity(f)) continue;
        const auto s = c.src(f), t = c.tgt(f);
        const auto& l = d.left[f][s];
        const auto& r = d.right[f][t];
        for (std::size_t x = 0; x < d.at(t, s).size(); ++x) uf.unite(offset[s] + l[x], offset[t] + r[x]);
    }
    std::vector<std::size_t> slot(offset[n], npos);
    std::vector<std::vector<ClassMember>> groups;
    for (std::size_t o = 0; o < n; ++o) {
        for (std::size_t e = 0; e < d.at(o, o).size(); ++e) {
            const auto root = uf.find(offset[o] + e);
            if (slot[root] == npos) {
                slot[root] = groups.size();
                groups.emplace_back();
            }
            groups[slot[root]].push_back({o, e});
        }
    }
    std::vector<std::pair<Atom, std::size_t>> labelled;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& rep = groups[g].front();
        labelled.emplace_back(class_label(c, rep.object, d.at(rep.object, rep.object)[rep.element]), g);
    }
    std::sort(labelled.begin(), labelled.end());
    QuotientSet q;
    std::vector<Atom> labels;
    q.inject.resize(n);
    for (std::size_t o = 0; o < n; ++o) q.inject[o].assign(d.at(o, o).size(), npos);
    for (std::size_t k = 0; k < labelled.size(); ++k) {
        labels.push_back(labelled[k].first);
        q.classes.push_back(std::move(groups[labelled[k].second]));
        for (const auto& mem : q.classes.back()) q.inject[mem.object][mem.element] = k;
    }
    q.carrier = FinSet(std::move(labels));
    return q;
}

// An isomorphism given by explicit tables, one pair per component, together with the
// outcome of checking them. Isomorphism is never inferred from cardinalities.
struct IsoWitness {
    std::vector<Table> forward;
    std::vector<Table> backward;
    bool verified = false;
    std::string detail;

    explicit operator bool() const noexcept { return verified; }
};

inline std::optional<std::string> check_inverse(const Table& f, const Table& g, std::size_t dom, std::size_t cod) {
    if (f.size() != dom || g.size() != cod) return "table sizes do not match the sets";
    for (std::size_t i = 0; i < dom; ++i) {
        if (f[i] >= cod || g[f[i]] != i) return "backward∘forward differs from the identity at " + std::to_string(i);
    }
    for (std::size_t j = 0; j < cod; ++j) {
        if (g[j] >= dom || f[g[j]] != j) return "forward∘backward differs from the identity at " + std::to_string(j);
    }
    return std::nullopt;
}

inline IsoWitness make_witness(std::vector<Table> forward, std::vector<Table> backward,
                               const std::vector<std::size_t>& dom, const std::vector<std::size_t>& cod) {
    IsoWitness w{std::move(forward), std::move(backward), true, {}};
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (auto err = check_inverse(w.forward[i], w.backward[i], dom[i], cod[i])) {
            w.verified = false;
            w.detail = "component " + std::to_string(i) + ": " + *err;
            break;
        }
    }
    return w;
}

inline IsoWitness failed_witness(std::string why) { return IsoWitness{{}, {}, false, std::move(why)}; }

// A function on the carrier of q obtained by evaluating on_member at every member of
// every class. Returns nullopt, with the reason in *why, when members of one class
// disagree or on_member reports npos.
template <class Fn>
std::optional<Table> induced_map(const QuotientSet& q, Fn&& on_member, std::string* why = nullptr) {
    Table out(q.size(), npos);
    for (std::size_t k = 0; k < q.size(); ++k) {
        for (const auto& mem : q.classes[k]) {
            const std::size_t v = on_member(mem.object, mem.element);
            if (v == npos || (out[k] != npos && out[k] != v)) {
                if (why) *why = "not well defined on class " + q.carrier[k];
                return std::nullopt;
            }
            out[k] = v;
        }
    }
    return out;
}

// Like induced_map but a kernel bug when not well defined.
template <class Fn>
Table induced_map_or_throw(const QuotientSet& q, Fn&& on_member, const char* what) {
    std::string why;
    auto t = induced_map(q, std::forward<Fn>(on_member), &why);
    if (!t) throw KernelError(std::string(what) + ": " + why);
    return *t;
}

// ∫^c c(c, a) × F(c) ≅ F(a), with evaluation (h, x) ↦ F(h)(x) one way and
// y ↦ [a | (id_a, y)] the other.
struct CoyonedaResult {
    ProductIntegrand integrand;
    QuotientSet coend;
    IsoWitness witness;
};

inline CoyonedaResult coyoneda(const CoPresheaf& f, std::size_t a) {
    const auto& c = f.base;
    if (a >= c.num_objects()) throw ValidationError("coyoneda_check: unknown object");
    CoyonedaResult res{external_product(c, contravariant_hom(c, a), family_of(f)), {}, {}};
    res.coend = coend(res.integrand.bifunctor);
    std::string why;
    auto fwd = induced_map(
        res.coend,
        [&](std::size_t o, std::size_t e) {
            auto [h, x] = res.integrand.at(o, o).decode_pair(e);
            return f.action[c.hom(o, a)[h]][x];
        },
        &why);
    if (!fwd) {
        res.witness = failed_witness(why);
        return res;
    }
    Table bwd(f.fiber[a].size());
    const auto id_pos = c.hom_position(c.identity(a));
    for (std::size_t y = 0; y < bwd.size(); ++y) bwd[y] = res.coend.inject[a][res.integrand.at(a, a).encode(id_pos, y)];
    res.witness = make_witness({*fwd}, {bwd}, {res.coend.size()}, {f.fiber[a].size()});
    return res;
}

inline IsoWitness coyoneda_check(const CoPresheaf& f, std::size_t a) { return coyoneda(f, a).witness; }

// Restricts a bifunctor over C×D to D by fixing the C-coordinates (cm, cp).
inline FinBifunctor restrict_second(const FinCategory& c, const FinCategory& d, const FinBifunctor& big,
                                    std::size_t cm, std::size_t cp) {
    const ProductIndex ix{&c, &d, &big.base};
    FinBifunctor r;
    r.base = d;
    const auto n = d.num_objects();
    r.fiber.assign(n, std::vector<FinSet>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) r.fiber[a][b] = big.at(ix.object(cm, a), ix.object(cp, b));
    }
    r.left.assign(d.num_morphisms(), std::vector<Table>(n));
    r.right.assign(d.num_morphisms(), std::vector<Table>(n));
    for (std::size_t g = 0; g < d.num_morphisms(); ++g) {
        for (std::size_t x = 0; x < n; ++x) {
            r.left[g][x] = big.left[ix.morphism(c.identity(cm), g)][ix.object(cp, x)];
            r.right[g][x] = big.right[ix.morphism(c.identity(cp), g)][ix.object(cm, x)];
        }
    }
    return r;
}

// ∫^c ∫^d big(<c,d>, <c,d>): inner coends over d for every (c⁻, c⁺), then the outer
// coend over c of the induced bifunctor on inner carriers.
struct IteratedCoend {
    std::vector<QuotientSet> inner;  // [cm * |C| + cp]
    FinBifunctor outer_integrand;
    QuotientSet outer;

    const QuotientSet& inner_at(std::size_t cm, std::size_t cp) const {
        return inner[cm * outer_integrand.base.num_objects() + cp];
    }
};

inline IteratedCoend iterated_coend(const FinCategory& c, const FinCategory& d, const FinBifunctor& big) {
    const ProductIndex ix{&c, &d, &big.base};
    const auto n = c.num_objects();
    IteratedCoend it;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) it.inner.push_back(coend(restrict_second(c, d, big, a, b)));
    }
    auto& o = it.outer_integrand;
    o.base = c;
    o.fiber.assign(n, std::vector<FinSet>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) o.fiber[a][b] = it.inner[a * n + b].carrier;
    }
    o.left.assign(c.num_morphisms(), std::vector<Table>(n));
    o.right.assign(c.num_morphisms(), std::vector<Table>(n));
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        const auto s = c.src(f), t = c.tgt(f);
        for (std::size_t x = 0; x < n; ++x) {
            // Members (dd, e) of inner(t, x) have e ∈ big(<t,dd>, <x,dd>).
            const auto& from_l = it.inner[t * n + x];
            const auto& to_l = it.inner[s * n + x];
            o.left[f][x] = induced_map_or_throw(
                from_l,
                [&](std::size_t dd, std::size_t e) {
                    const auto v = big.left[ix.morphism(f, d.identity(dd))][ix.object(x, dd)][e];
                    return to_l.inject[dd][v];
                },
                "iterated_coend left action");
            const auto& from_r = it.inner[x * n + s];
            const auto& to_r = it.inner[x * n + t];
            o.right[f][x] = induced_map_or_throw(
                from_r,
                [&](std::size_t dd, std::size_t e) {
                    const auto v = big.right[ix.morphism(f, d.identity(dd))][ix.object(x, dd)][e];
                    return to_r.inject[dd][v];
                },
                "iterated_coend right action");
        }
    }
    it.outer = coend(o);
    return it;
}

// The same bifunctor viewed over D×C.
inline FinBifunctor swap_factors(const FinCategory& c, const FinCategory& d, const FinBifunctor& big) {
    const ProductIndex ix{&c, &d, &big.base};
    FinBifunctor s;
    s.base = product_category(d, c);
    const ProductIndex sx{&d, &c, &s.base};
    const auto n = s.base.num_objects();
    s.fiber.assign(n, std::vector<FinSet>(n));
    for (std::size_t a = 0; a < c.num_objects(); ++a) {
        for (std::size_t b = 0; b < d.num_objects(); ++b) {
            for (std::size_t a2 = 0; a2 < c.num_objects(); ++a2) {
                for (std::size_t b2 = 0; b2 < d.num_objects(); ++b2) {
                    s.fiber[sx.object(b, a)][sx.object(b2, a2)] = big.at(ix.object(a, b), ix.object(a2, b2));
                }
            }
        }
    }
    s.left.assign(s.base.num_morphisms(), std::vector<Table>(n));
    s.right.assign(s.base.num_morphisms(), std::vector<Table>(n));
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < d.num_morphisms(); ++g) {
            for (std::size_t a = 0; a < c.num_objects(); ++a) {
                for (std::size_t b = 0; b < d.num_objects(); ++b) {
                    s.left[sx.morphism(g, f)][sx.object(b, a)] = big.left[ix.morphism(f, g)][ix.object(a, b)];
                    s.right[sx.morphism(g, f)][sx.object(b, a)] = big.right[ix.morphism(f, g)][ix.object(a, b)];
                }
            }
        }
    }
    return s;
}

// (<c⁻,d⁻>, <c⁺,d⁺>) ↦ x(c⁻, c⁺) × y(d⁻, d⁺) over the product of the two bases.
inline FinBifunctor external_tensor(const FinBifunctor& x, const FinBifunctor& y) {
    const auto& c = x.base;
    const auto& d = y.base;
    FinBifunctor out;
    out.base = product_category(c, d);
    const ProductIndex ix{&c, &d, &out.base};
    const auto n = out.base.num_objects();
    out.fiber.assign(n, std::vector<FinSet>(n));
    std::vector<std::vector<TupleSet>> ts(n, std::vector<TupleSet>(n));
    for (std::size_t a = 0; a < c.num_objects(); ++a) {
        for (std::size_t b = 0; b < d.num_objects(); ++b) {
            for (std::size_t a2 = 0; a2 < c.num_objects(); ++a2) {
                for (std::size_t b2 = 0; b2 < d.num_objects(); ++b2) {
                    auto& t = ts[ix.object(a, b)][ix.object(a2, b2)];
                    t = TupleSet(x.at(a, a2), y.at(b, b2));
                    out.fiber[ix.object(a, b)][ix.object(a2, b2)] = t.set();
                }
            }
        }
    }
    out.left.assign(out.base.num_morphisms(), std::vector<Table>(n));
    out.right.assign(out.base.num_morphisms(), std::vector<Table>(n));
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < d.num_morphisms(); ++g) {
            const auto fg = ix.morphism(f, g);
            for (std::size_t a = 0; a < c.num_objects(); ++a) {
                for (std::size_t b = 0; b < d.num_objects(); ++b) {
                    const auto xo = ix.object(a, b);
                    const auto src = ix.object(c.src(f), d.src(g));
                    const auto tgt = ix.object(c.tgt(f), d.tgt(g));
                    {
                        const auto& from = ts[tgt][xo];
                        const auto& to = ts[src][xo];
                        Table t(from.size());
                        for (std::size_t e = 0; e < from.size(); ++e) {
                            auto [u, v] = from.decode_pair(e);
                            t[e] = to.encode(x.left[f][a][u], y.left[g][b][v]);
                        }
                        out.left[fg][xo] = std::move(t);
                    }
                    {
                        const auto& from = ts[xo][src];
                        const auto& to = ts[xo][tgt];
                        Table t(from.size());
                        for (std::size_t e = 0; e < from.size(); ++e) {
                            auto [u, v] = from.decode_pair(e);
                            t[e] = to.encode(x.right[f][a][u], y.right[g][b][v]);
                        }
                        out.right[fg][xo] = std::move(t);
                    }
                }
            }
        }
    }
    return out;
}

// Fubini for a bifunctor over C×D: component 0 relates the single coend with ∫^c∫^d,
// component 1 relates it with ∫^d∫^c.
struct FubiniResult {
    QuotientSet single;
    IteratedCoend c_then_d;
    IteratedCoend d_then_c;
    IsoWitness witness;
};

inline FubiniResult fubini(const FinCategory& c, const FinCategory& d, const FinBifunctor& big) {
    FubiniResult res;
    res.single = coend(big);
    res.c_then_d = iterated_coend(c, d, big);
    const auto swapped = swap_factors(c, d, big);
    res.d_then_c = iterated_coend(d, c, swapped);
    const ProductIndex ix{&c, &d, &big.base};

    // Coordinates of every object of C×D.
    std::vector<std::pair<std::size_t, std::size_t>> coords(big.base.num_objects());
    for (std::size_t a = 0; a < c.num_objects(); ++a) {
        for (std::size_t b = 0; b < d.num_objects(); ++b) coords[ix.object(a, b)] = {a, b};
    }

    std::string why;
    auto to_iterated = [&](const IteratedCoend& it, bool c_outer) {
        return induced_map(
            res.single,
            [&](std::size_t obj, std::size_t e) {
                const auto [a, b] = coords[obj];
                const auto outer_obj = c_outer ? a : b;
                const auto inner_obj = c_outer ? b : a;
                const auto& in = it.inner_at(outer_obj, outer_obj);
                return it.outer.inject[outer_obj][in.inject[inner_obj][e]];
            },
            &why);
    };
    auto from_iterated = [&](const IteratedCoend& it, bool c_outer) {
        return induced_map(
            it.outer,
            [&](std::size_t outer_obj, std::size_t inner_cls) {
                const auto& in = it.inner_at(outer_obj, outer_obj);
                std::size_t v = npos;
                for (const auto& mem : in.classes[inner_cls]) {
                    const auto obj = c_outer ? ix.object(outer_obj, mem.object) : ix.object(mem.object, outer_obj);
                    const auto w = res.single.inject[obj][mem.element];
                    if (v != npos && v != w) return npos;
                    v = w;
                }
                return v;
            },
            &why);
    };
    auto f1 = to_iterated(res.c_then_d, true);
    auto b1 = f1 ? from_iterated(res.c_then_d, true) : std::nullopt;
    auto f2 = b1 ? to_iterated(res.d_then_c, false) : std::nullopt;
    auto b2 = f2 ? from_iterated(res.d_then_c, false) : std::nullopt;
    if (!b2) {
        res.witness = failed_witness(why);
        return res;
    }
    res.witness = make_witness({*f1, *f2}, {*b1, *b2}, {res.single.size(), res.single.size()},
                               {res.c_then_d.outer.size(), res.d_then_c.outer.size()});
    return res;
}

inline IsoWitness fubini_check(const FinCategory& c, const FinCategory& d, const FinBifunctor& big) {
    if (!(big.base == product_category(c, d))) throw MismatchError("fubini_check: base is not the product category");
    return fubini(c, d, big).witness;
}

// S × d, with S acting trivially.
inline FinBifunctor product_with_set(const FinSet& s, const FinBifunctor& d, std::vector<TupleSet>* tuples = nullptr) {
    const auto n = d.base.num_objects();
    FinBifunctor out;
    out.base = d.base;
    out.fiber.assign(n, std::vector<FinSet>(n));
    std::vector<TupleSet> ts;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            ts.emplace_back(s, d.at(a, b));
            out.fiber[a][b] = ts.back().set();
        }
    }
    auto lift = [&](const Table& t, const TupleSet& from, const TupleSet& to) {
        Table r(from.size());
        for (std::size_t e = 0; e < from.size(); ++e) {
            auto [i, x] = from.decode_pair(e);
            r[e] = to.encode(i, t[x]);
        }
        return r;
    };
    const auto& c = d.base;
    out.left.assign(c.num_morphisms(), std::vector<Table>(n));
    out.right.assign(c.num_morphisms(), std::vector<Table>(n));
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        for (std::size_t x = 0; x < n; ++x) {
            out.left[f][x] = lift(d.left[f][x], ts[c.tgt(f) * n + x], ts[c.src(f) * n + x]);
            out.right[f][x] = lift(d.right[f][x], ts[x * n + c.src(f)], ts[x * n + c.tgt(f)]);
        }
    }
    if (tuples) *tuples = std::move(ts);
    return out;
}

// carrier(∫^c S × d) ≅ S × carrier(∫^c d).
inline IsoWitness product_preservation_check(const FinSet& s, const FinBifunctor& d) {
    std::vector<TupleSet> ts;
    const auto sd = product_with_set(s, d, &ts);
    const auto lhs = coend(sd);
    const auto base = coend(d);
    const TupleSet rhs(s, base.carrier);
    const auto n = d.base.num_objects();
    std::string why;
    auto fwd = induced_map(
        lhs,
        [&](std::size_t o, std::size_t e) {
            auto [i, x] = ts[o * n + o].decode_pair(e);
            return rhs.encode(i, base.inject[o][x]);
        },
        &why);
    if (!fwd) return failed_witness(why);
    Table bwd(rhs.size());
    for (std::size_t k = 0; k < rhs.size(); ++k) {
        auto [i, cls] = rhs.decode_pair(k);
        const auto& rep = base.representative(cls);
        bwd[k] = lhs.inject[rep.object][ts[rep.object * n + rep.object].encode(i, rep.element)];
    }
    return make_witness({*fwd}, {bwd}, {lhs.size()}, {rhs.size()});
}

} // namespace optika
