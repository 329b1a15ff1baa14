#pragma once

// Simple mixed optics. Two regimes:
//   exact       an explicit finite monoidal category acts on finite categories C and D,
//               and optics are classes of the coend computed by `coend`;
//   normal form lenses and prisms between finite sets (product and coproduct actions
//               of Set), compared through their get/put or match/build tables.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "optika/catalog.hpp"
#include "optika/coend.hpp"

namespace optika {

enum class Regime { exact, normal_form };

inline const char* regime_name(Regime r) { return r == Regime::exact ? "exact" : "normalform"; }

// Tensor tables are indexed [x * n + y]; associator [(m * n + p) * n + q] with n the
// object count. Strict instances store identities.
struct FinMonoidalCategory {
    FinCategory underlying;
    Table tensor_obj;
    Table tensor_mor;
    std::size_t unit = 0;
    Table associator;    // (m⊗n)⊗p -> m⊗(n⊗p)
    Table left_unitor;   // I⊗m -> m
    Table right_unitor;  // m⊗I -> m

    std::size_t tensor(std::size_t m, std::size_t n) const { return tensor_obj[m * underlying.num_objects() + n]; }
    std::size_t tensor_arrow(std::size_t f, std::size_t g) const {
        return tensor_mor[f * underlying.num_morphisms() + g];
    }
    std::size_t alpha(std::size_t m, std::size_t n, std::size_t p) const {
        const auto k = underlying.num_objects();
        return associator[(m * k + n) * k + p];
    }
};

inline ValidationReport validate_monoidal(const FinMonoidalCategory& mc) {
    ValidationReport r;
    const auto& c = mc.underlying;
    const auto no = c.num_objects(), nm = c.num_morphisms();
    if (mc.tensor_obj.size() != no * no || mc.tensor_mor.size() != nm * nm || mc.associator.size() != no * no * no ||
        mc.left_unitor.size() != no || mc.right_unitor.size() != no || (no > 0 && mc.unit >= no)) {
        r.add("monoidal tables do not cover the category");
        return r;
    }
    for (auto v : mc.tensor_obj) {
        if (v >= no) r.add("tensor of objects out of range");
    }
    for (auto v : mc.tensor_mor) {
        if (v >= nm) r.add("tensor of morphisms out of range");
    }
    for (const auto* t : {&mc.associator, &mc.left_unitor, &mc.right_unitor}) {
        for (auto v : *t) {
            if (v >= nm) r.add("structure morphism out of range");
        }
    }
    if (!r.ok()) return r;
    auto name = [&](std::size_t f) { return c.morphism(f).id; };
    for (std::size_t f = 0; f < nm; ++f) {
        for (std::size_t g = 0; g < nm; ++g) {
            const auto fg = mc.tensor_arrow(f, g);
            if (c.src(fg) != mc.tensor(c.src(f), c.src(g)) || c.tgt(fg) != mc.tensor(c.tgt(f), c.tgt(g))) {
                r.add("tensor " + name(f) + "⊗" + name(g) + " has wrong endpoints");
            }
        }
    }
    for (std::size_t m = 0; m < no; ++m) {
        for (std::size_t n = 0; n < no; ++n) {
            if (mc.tensor_arrow(c.identity(m), c.identity(n)) != c.identity(mc.tensor(m, n))) {
                r.add("tensor does not preserve identities at " + c.object(m) + "," + c.object(n));
            }
        }
    }
    if (!r.ok()) return r;
    for (std::size_t f2 = 0; f2 < nm; ++f2) {
        for (std::size_t f = 0; f < nm; ++f) {
            const auto ff = c.compose(f2, f);
            if (ff == npos) continue;
            for (std::size_t g2 = 0; g2 < nm; ++g2) {
                for (std::size_t g = 0; g < nm; ++g) {
                    const auto gg = c.compose(g2, g);
                    if (gg == npos) continue;
                    if (mc.tensor_arrow(ff, gg) != c.compose(mc.tensor_arrow(f2, g2), mc.tensor_arrow(f, g))) {
                        r.add("tensor not functorial at (" + name(f2) + "∘" + name(f) + ")⊗(" + name(g2) + "∘" +
                              name(g) + ")");
                    }
                }
            }
        }
    }
    const auto i = mc.unit;
    for (std::size_t m = 0; m < no; ++m) {
        for (std::size_t n = 0; n < no; ++n) {
            for (std::size_t p = 0; p < no; ++p) {
                const auto a = mc.alpha(m, n, p);
                if (c.src(a) != mc.tensor(mc.tensor(m, n), p) || c.tgt(a) != mc.tensor(m, mc.tensor(n, p))) {
                    r.add("associator at " + c.object(m) + "," + c.object(n) + "," + c.object(p) + " has wrong endpoints");
                } else if (!c.inverse(a)) {
                    r.add("associator " + name(a) + " is not invertible");
                }
            }
        }
        const auto l = mc.left_unitor[m], rr = mc.right_unitor[m];
        if (c.src(l) != mc.tensor(i, m) || c.tgt(l) != m || !c.inverse(l)) {
            r.add("left unitor at " + c.object(m) + " is not an isomorphism I⊗m -> m");
        }
        if (c.src(rr) != mc.tensor(m, i) || c.tgt(rr) != m || !c.inverse(rr)) {
            r.add("right unitor at " + c.object(m) + " is not an isomorphism m⊗I -> m");
        }
    }
    if (!r.ok()) return r;
    // Naturality.
    for (std::size_t f = 0; f < nm; ++f) {
        for (std::size_t g = 0; g < nm; ++g) {
            for (std::size_t h = 0; h < nm; ++h) {
                const auto lhs = c.compose(mc.alpha(c.tgt(f), c.tgt(g), c.tgt(h)),
                                           mc.tensor_arrow(mc.tensor_arrow(f, g), h));
                const auto rhs = c.compose(mc.tensor_arrow(f, mc.tensor_arrow(g, h)),
                                           mc.alpha(c.src(f), c.src(g), c.src(h)));
                if (lhs != rhs) r.add("associator not natural at " + name(f) + "," + name(g) + "," + name(h));
            }
        }
        const auto idi = c.identity(i);
        if (c.compose(mc.left_unitor[c.tgt(f)], mc.tensor_arrow(idi, f)) != c.compose(f, mc.left_unitor[c.src(f)])) {
            r.add("left unitor not natural at " + name(f));
        }
        if (c.compose(mc.right_unitor[c.tgt(f)], mc.tensor_arrow(f, idi)) != c.compose(f, mc.right_unitor[c.src(f)])) {
            r.add("right unitor not natural at " + name(f));
        }
    }
    // Pentagon and triangle.
    for (std::size_t m = 0; m < no; ++m) {
        for (std::size_t n = 0; n < no; ++n) {
            for (std::size_t p = 0; p < no; ++p) {
                for (std::size_t q = 0; q < no; ++q) {
                    const auto lhs = c.compose(
                        mc.tensor_arrow(c.identity(m), mc.alpha(n, p, q)),
                        c.compose(mc.alpha(m, mc.tensor(n, p), q), mc.tensor_arrow(mc.alpha(m, n, p), c.identity(q))));
                    const auto rhs = c.compose(mc.alpha(m, n, mc.tensor(p, q)), mc.alpha(mc.tensor(m, n), p, q));
                    if (lhs != rhs) {
                        r.add("pentagon fails at " + c.object(m) + "," + c.object(n) + "," + c.object(p) + "," +
                              c.object(q));
                    }
                }
            }
            const auto lhs = c.compose(mc.tensor_arrow(c.identity(m), mc.left_unitor[n]), mc.alpha(m, i, n));
            const auto rhs = mc.tensor_arrow(mc.right_unitor[m], c.identity(n));
            if (lhs != rhs) r.add("triangle fails at " + c.object(m) + "," + c.object(n));
        }
    }
    return r;
}

// Fills in identity structure morphisms for a strict monoidal category.
inline FinMonoidalCategory strict_monoidal(FinCategory c, Table tensor_obj, Table tensor_mor, std::size_t unit) {
    FinMonoidalCategory mc{std::move(c), std::move(tensor_obj), std::move(tensor_mor), unit, {}, {}, {}};
    const auto no = mc.underlying.num_objects();
    for (std::size_t m = 0; m < no; ++m) {
        for (std::size_t n = 0; n < no; ++n) {
            for (std::size_t p = 0; p < no; ++p) {
                mc.associator.push_back(mc.underlying.identity(mc.tensor(mc.tensor(m, n), p)));
            }
        }
        mc.left_unitor.push_back(mc.underlying.identity(m));
        mc.right_unitor.push_back(mc.underlying.identity(m));
    }
    return mc;
}

namespace catalog {

// One object I and only its identity.
inline FinMonoidalCategory trivial_monoidal() {
    auto c = discrete({"I"});
    return strict_monoidal(c, {0}, {0}, 0);
}

// Objects "0".."n-1" with identities only; tensor is addition mod n.
inline FinMonoidalCategory discrete_cyclic_monoidal(std::size_t n) {
    std::vector<Atom> objs;
    for (std::size_t k = 0; k < n; ++k) objs.push_back(std::to_string(k));
    auto c = discrete(objs);
    Table to(n * n), tm(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            const auto xo = c.object_index(std::to_string(x)), yo = c.object_index(std::to_string(y));
            const auto z = c.object_index(std::to_string((x + y) % n));
            to[xo * n + yo] = z;
            tm[c.identity(xo) * n + c.identity(yo)] = c.identity(z);
        }
    }
    return strict_monoidal(c, to, tm, c.object_index("0"));
}

// The walking isomorphism 0 <-> 1 with xor on objects; every hom-set is a singleton, so
// the tensor of two morphisms is the unique morphism between the tensored endpoints.
inline FinMonoidalCategory walking_iso_xor() {
    auto c = walking_iso();
    const auto no = c.num_objects(), nm = c.num_morphisms();
    Table to(no * no), tm(nm * nm);
    for (std::size_t x = 0; x < no; ++x) {
        for (std::size_t y = 0; y < no; ++y) to[x * no + y] = c.object_index(std::to_string((std::stoi(c.object(x)) ^ std::stoi(c.object(y)))));
    }
    for (std::size_t f = 0; f < nm; ++f) {
        for (std::size_t g = 0; g < nm; ++g) {
            tm[f * nm + g] = c.hom(to[c.src(f) * no + c.src(g)], to[c.tgt(f) * no + c.tgt(g)]).front();
        }
    }
    return strict_monoidal(c, to, tm, c.object_index("0"));
}

// Z/n as a one-object category; the tensor of morphisms is their composite.
inline FinMonoidalCategory cyclic_group_monoidal(std::size_t n) {
    auto c = cyclic_group(n);
    const auto nm = c.num_morphisms();
    Table tm(nm * nm);
    for (std::size_t f = 0; f < nm; ++f) {
        for (std::size_t g = 0; g < nm; ++g) tm[f * nm + g] = c.compose(f, g);
    }
    return strict_monoidal(c, {0}, tm, 0);
}

} // namespace catalog

// An action • : M × C -> C with structure isomorphisms
//   multiplicator μ_{m,n,c}: (m⊗n)•c -> m•(n•c),   unitor η_c: I•c -> c.
struct MonoidalAction {
    FinMonoidalCategory acting;
    FinCategory on;
    Table app;            // [m * |Ob C| + c]
    Table app_mor;        // [f * |Mor C| + g]
    Table multiplicator;  // [(m * |Ob M| + n) * |Ob C| + c]
    Table unitor;         // [c]

    std::size_t act(std::size_t m, std::size_t c) const { return app[m * on.num_objects() + c]; }
    std::size_t act_mor(std::size_t f, std::size_t g) const { return app_mor[f * on.num_morphisms() + g]; }
    std::size_t mu(std::size_t m, std::size_t n, std::size_t c) const {
        return multiplicator[(m * acting.underlying.num_objects() + n) * on.num_objects() + c];
    }
};

inline ValidationReport validate_action(const MonoidalAction& act) {
    ValidationReport r;
    const auto& mc = act.acting;
    const auto& m = mc.underlying;
    const auto& c = act.on;
    const auto mo = m.num_objects(), mm = m.num_morphisms(), co = c.num_objects(), cm = c.num_morphisms();
    if (act.app.size() != mo * co || act.app_mor.size() != mm * cm || act.multiplicator.size() != mo * mo * co ||
        act.unitor.size() != co) {
        r.add("action tables do not cover the categories");
        return r;
    }
    for (auto v : act.app) {
        if (v >= co) r.add("action on objects out of range");
    }
    for (const auto* t : {&act.app_mor, &act.multiplicator, &act.unitor}) {
        for (auto v : *t) {
            if (v >= cm) r.add("action morphism out of range");
        }
    }
    if (!r.ok()) return r;
    auto mname = [&](std::size_t f) { return m.morphism(f).id; };
    auto cname = [&](std::size_t g) { return c.morphism(g).id; };
    for (std::size_t f = 0; f < mm; ++f) {
        for (std::size_t g = 0; g < cm; ++g) {
            const auto fg = act.act_mor(f, g);
            if (c.src(fg) != act.act(m.src(f), c.src(g)) || c.tgt(fg) != act.act(m.tgt(f), c.tgt(g))) {
                r.add("action " + mname(f) + "•" + cname(g) + " has wrong endpoints");
            }
        }
    }
    for (std::size_t x = 0; x < mo; ++x) {
        for (std::size_t y = 0; y < co; ++y) {
            if (act.act_mor(m.identity(x), c.identity(y)) != c.identity(act.act(x, y))) {
                r.add("action does not preserve identities at " + m.object(x) + "," + c.object(y));
            }
        }
    }
    if (!r.ok()) return r;
    for (std::size_t f2 = 0; f2 < mm; ++f2) {
        for (std::size_t f = 0; f < mm; ++f) {
            const auto ff = m.compose(f2, f);
            if (ff == npos) continue;
            for (std::size_t g2 = 0; g2 < cm; ++g2) {
                for (std::size_t g = 0; g < cm; ++g) {
                    const auto gg = c.compose(g2, g);
                    if (gg == npos) continue;
                    if (act.act_mor(ff, gg) != c.compose(act.act_mor(f2, g2), act.act_mor(f, g))) {
                        r.add("action not functorial at (" + mname(f2) + "∘" + mname(f) + ")•(" + cname(g2) + "∘" +
                              cname(g) + ")");
                    }
                }
            }
        }
    }
    const auto i = mc.unit;
    for (std::size_t x = 0; x < mo; ++x) {
        for (std::size_t y = 0; y < mo; ++y) {
            for (std::size_t z = 0; z < co; ++z) {
                const auto mu = act.mu(x, y, z);
                if (c.src(mu) != act.act(mc.tensor(x, y), z) || c.tgt(mu) != act.act(x, act.act(y, z)) || !c.inverse(mu)) {
                    r.add("multiplicator at " + m.object(x) + "," + m.object(y) + "," + c.object(z) +
                          " is not an isomorphism (m⊗n)•c -> m•(n•c)");
                }
            }
        }
    }
    for (std::size_t z = 0; z < co; ++z) {
        const auto e = act.unitor[z];
        if (c.src(e) != act.act(i, z) || c.tgt(e) != z || !c.inverse(e)) {
            r.add("unitor at " + c.object(z) + " is not an isomorphism I•c -> c");
        }
    }
    if (!r.ok()) return r;
    for (std::size_t f = 0; f < mm; ++f) {
        for (std::size_t g = 0; g < mm; ++g) {
            for (std::size_t h = 0; h < cm; ++h) {
                const auto lhs = c.compose(act.mu(m.tgt(f), m.tgt(g), c.tgt(h)), act.act_mor(mc.tensor_arrow(f, g), h));
                const auto rhs = c.compose(act.act_mor(f, act.act_mor(g, h)), act.mu(m.src(f), m.src(g), c.src(h)));
                if (lhs != rhs) r.add("multiplicator not natural at " + mname(f) + "," + mname(g) + "," + cname(h));
            }
        }
    }
    for (std::size_t h = 0; h < cm; ++h) {
        if (c.compose(act.unitor[c.tgt(h)], act.act_mor(m.identity(i), h)) != c.compose(h, act.unitor[c.src(h)])) {
            r.add("unitor not natural at " + cname(h));
        }
    }
    for (std::size_t x = 0; x < mo; ++x) {
        for (std::size_t y = 0; y < mo; ++y) {
            for (std::size_t p = 0; p < mo; ++p) {
                for (std::size_t z = 0; z < co; ++z) {
                    const auto lhs = c.compose(act.mu(x, y, act.act(p, z)), act.mu(mc.tensor(x, y), p, z));
                    const auto rhs = c.compose(
                        act.act_mor(m.identity(x), act.mu(y, p, z)),
                        c.compose(act.mu(x, mc.tensor(y, p), z), act.act_mor(mc.alpha(x, y, p), c.identity(z))));
                    if (lhs != rhs) {
                        r.add("multiplicator incoherent with the associator at " + m.object(x) + "," + m.object(y) +
                              "," + m.object(p) + "," + c.object(z));
                    }
                }
            }
        }
        for (std::size_t z = 0; z < co; ++z) {
            if (c.compose(act.act_mor(m.identity(x), act.unitor[z]), act.mu(x, i, z)) !=
                act.act_mor(mc.right_unitor[x], c.identity(z))) {
                r.add("right unit coherence fails at " + m.object(x) + "," + c.object(z));
            }
            if (c.compose(act.unitor[act.act(x, z)], act.mu(i, x, z)) != act.act_mor(mc.left_unitor[x], c.identity(z))) {
                r.add("left unit coherence fails at " + m.object(x) + "," + c.object(z));
            }
        }
    }
    return r;
}

namespace catalog {

// m • c = c and f • g = g.
inline MonoidalAction trivial_action(const FinMonoidalCategory& mc, const FinCategory& c) {
    const auto& m = mc.underlying;
    MonoidalAction act{mc, c, {}, {}, {}, {}};
    for (std::size_t x = 0; x < m.num_objects(); ++x) {
        for (std::size_t y = 0; y < c.num_objects(); ++y) act.app.push_back(y);
    }
    for (std::size_t f = 0; f < m.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < c.num_morphisms(); ++g) act.app_mor.push_back(g);
    }
    for (std::size_t x = 0; x < m.num_objects() * m.num_objects(); ++x) {
        for (std::size_t y = 0; y < c.num_objects(); ++y) act.multiplicator.push_back(c.identity(y));
    }
    for (std::size_t y = 0; y < c.num_objects(); ++y) act.unitor.push_back(c.identity(y));
    return act;
}

// M acting on M × C0 by m • <n, c> = <m⊗n, c>.
inline MonoidalAction regular_action(const FinMonoidalCategory& mc, const FinCategory& c0) {
    const auto& m = mc.underlying;
    auto c = product_category(m, c0);
    const ProductIndex ix{&m, &c0, &c};
    MonoidalAction act{mc, c, Table(m.num_objects() * c.num_objects()), Table(m.num_morphisms() * c.num_morphisms()),
                       Table(m.num_objects() * m.num_objects() * c.num_objects()), Table(c.num_objects())};
    const auto co = c.num_objects(), cm = c.num_morphisms(), mo = m.num_objects();
    for (std::size_t n = 0; n < mo; ++n) {
        for (std::size_t z = 0; z < c0.num_objects(); ++z) {
            const auto nz = ix.object(n, z);
            for (std::size_t x = 0; x < mo; ++x) act.app[x * co + nz] = ix.object(mc.tensor(x, n), z);
            act.unitor[nz] = ix.morphism(mc.left_unitor[n], c0.identity(z));
            for (std::size_t x = 0; x < mo; ++x) {
                for (std::size_t y = 0; y < mo; ++y) {
                    act.multiplicator[(x * mo + y) * co + nz] = ix.morphism(mc.alpha(x, y, n), c0.identity(z));
                }
            }
        }
    }
    for (std::size_t g = 0; g < m.num_morphisms(); ++g) {
        for (std::size_t h = 0; h < c0.num_morphisms(); ++h) {
            const auto gh = ix.morphism(g, h);
            for (std::size_t f = 0; f < m.num_morphisms(); ++f) act.app_mor[f * cm + gh] = ix.morphism(mc.tensor_arrow(f, g), h);
        }
    }
    return act;
}

// Z/n, as cyclic_group_monoidal(n), acting on the one-object category Z/k (n divides k)
// through g ↦ g^(k/n).
inline MonoidalAction cyclic_shift_action(std::size_t n, std::size_t k) {
    if (n == 0 || k % n != 0) throw ValidationError("cyclic_shift_action: n must divide k");
    const auto mc = catalog::cyclic_group_monoidal(n);
    const auto c = cyclic_group(k);
    auto power = [](std::size_t e) { return e == 0 ? std::string("e") : "g" + std::to_string(e); };
    auto exponent = [](const Atom& id) -> std::size_t { return id == "e" ? 0 : std::stoul(id.substr(1)); };
    MonoidalAction act{mc, c, {0}, {}, {c.identity(0)}, {c.identity(0)}};
    const auto& m = mc.underlying;
    act.app_mor.resize(m.num_morphisms() * c.num_morphisms());
    for (std::size_t f = 0; f < m.num_morphisms(); ++f) {
        for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
            const auto e = (exponent(m.morphism(f).id) * (k / n) + exponent(c.morphism(g).id)) % k;
            act.app_mor[f * c.num_morphisms() + g] = c.morphism_index(power(e));
        }
    }
    return act;
}

} // namespace catalog

// ⟨m, forward: s -> m•₁a in C, backward: m•₂b -> t in D⟩ with endpoints a, b (foci) and
// s, t (sources). Morphisms are indices into C and D.
struct ExistentialOptic {
    static constexpr Regime regime = Regime::exact;

    std::size_t residual = 0;
    std::size_t forward = 0;
    std::size_t backward = 0;
    std::size_t a = 0, b = 0, s = 0, t = 0;

    friend bool operator==(const ExistentialOptic&, const ExistentialOptic&) = default;
};

inline ValidationReport validate_optic(const MonoidalAction& act1, const MonoidalAction& act2,
                                       const ExistentialOptic& o) {
    ValidationReport r;
    const auto& c = act1.on;
    const auto& d = act2.on;
    if (o.forward >= c.num_morphisms() || o.backward >= d.num_morphisms()) {
        r.add("optic morphisms out of range");
        return r;
    }
    if (c.src(o.forward) != o.s || c.tgt(o.forward) != act1.act(o.residual, o.a)) {
        r.add("forward part is not a morphism s -> m•a");
    }
    if (d.src(o.backward) != act2.act(o.residual, o.b) || d.tgt(o.backward) != o.t) {
        r.add("backward part is not a morphism m•b -> t");
    }
    return r;
}

// ∫^m D(m•₂b, t) × C(s, m•₁a). Elements of the integrand are <backward, forward> hom
// positions.
struct OpticSpace {
    MonoidalAction act1;
    MonoidalAction act2;
    std::size_t a, b, s, t;
    ProductIntegrand integrand;
    QuotientSet quotient;

    std::size_t class_of(const ExistentialOptic& o) const {
        if (o.a != a || o.b != b || o.s != s || o.t != t) throw MismatchError("optic has other endpoints");
        const auto e = integrand.at(o.residual, o.residual)
                           .encode(act2.on.hom_position(o.backward), act1.on.hom_position(o.forward));
        return quotient.inject[o.residual][e];
    }

    ExistentialOptic member(const ClassMember& mem) const {
        auto [g, f] = integrand.at(mem.object, mem.object).decode_pair(mem.element);
        return {mem.object, act1.on.hom(s, act1.act(mem.object, a))[f], act2.on.hom(act2.act(mem.object, b), t)[g], a,
                b, s, t};
    }
};

inline OpticSpace optic_coend(const MonoidalAction& act1, const MonoidalAction& act2, std::size_t a, std::size_t b,
                              std::size_t s, std::size_t t) {
    if (!(act1.acting.underlying == act2.acting.underlying)) {
        throw MismatchError("optic_coend: actions of different monoidal categories");
    }
    const auto& m = act1.acting.underlying;
    const auto& c = act1.on;
    const auto& d = act2.on;
    if (a >= c.num_objects() || s >= c.num_objects() || b >= d.num_objects() || t >= d.num_objects()) {
        throw ValidationError("optic_coend: unknown endpoint");
    }
    SetFamily contra, co;
    for (std::size_t x = 0; x < m.num_objects(); ++x) {
        contra.fiber.push_back(d.hom_set(act2.act(x, b), t));
        co.fiber.push_back(c.hom_set(s, act1.act(x, a)));
    }
    for (std::size_t f = 0; f < m.num_morphisms(); ++f) {
        Table l, r;
        const auto fb = act2.act_mor(f, d.identity(b));
        for (auto h : d.hom(act2.act(m.tgt(f), b), t)) l.push_back(d.hom_position(d.compose(h, fb)));
        const auto fa = act1.act_mor(f, c.identity(a));
        for (auto k : c.hom(s, act1.act(m.src(f), a))) r.push_back(c.hom_position(c.compose(fa, k)));
        contra.action.push_back(std::move(l));
        co.action.push_back(std::move(r));
    }
    OpticSpace sp{act1, act2, a, b, s, t, external_product(m, contra, co), {}};
    sp.quotient = coend(sp.integrand.bifunctor);
    return sp;
}

// o2 ∘ o1 for o1: ⟨a,b⟩ -> ⟨s,t⟩ with residual m and o2: ⟨s,t⟩ -> ⟨s',t'⟩ with residual
// n. The residual is n⊗m:
//   forward  = μ⁻¹_{n,m,a} ∘ (n • f1) ∘ f2
//   backward = g2 ∘ (n • g1) ∘ μ_{n,m,b}
inline ExistentialOptic compose_optics(const MonoidalAction& act1, const MonoidalAction& act2,
                                       const ExistentialOptic& o1, const ExistentialOptic& o2) {
    if (o1.s != o2.a || o1.t != o2.b) throw MismatchError("compose_optics: middle endpoints differ");
    const auto& mc = act1.acting;
    const auto& c = act1.on;
    const auto& d = act2.on;
    const auto m = o1.residual, n = o2.residual;
    const auto idn = mc.underlying.identity(n);
    const auto mu_inv = c.inverse(act1.mu(n, m, o1.a));
    if (!mu_inv) throw KernelError("compose_optics: multiplicator is not invertible");
    ExistentialOptic out;
    out.residual = mc.tensor(n, m);
    out.forward = c.compose(*mu_inv, c.compose(act1.act_mor(idn, o1.forward), o2.forward));
    out.backward = d.compose(o2.backward, d.compose(act2.act_mor(idn, o1.backward), act2.mu(n, m, o1.b)));
    out.a = o1.a;
    out.b = o1.b;
    out.s = o2.s;
    out.t = o2.t;
    return out;
}

// ⟨I, η⁻¹_a, η_b⟩.
inline ExistentialOptic identity_optic(const MonoidalAction& act1, const MonoidalAction& act2, std::size_t a,
                                       std::size_t b) {
    const auto inv = act1.on.inverse(act1.unitor[a]);
    if (!inv) throw KernelError("identity_optic: unitor is not invertible");
    return {act1.acting.unit, *inv, act2.unitor[b], a, b, a, b};
}

// --- Normal-form regime: lenses and prisms between finite sets ---------------------

enum class OpticKind { lens, prism };

inline const char* kind_name(OpticKind k) { return k == OpticKind::lens ? "lens" : "prism"; }

// m × x or m + x, the action of the residual on a focus.
inline TupleSet product_action(const FinSet& m, const FinSet& x) { return TupleSet(m, x); }
inline SumSet coproduct_action(const FinSet& m, const FinSet& x) { return SumSet({"inl", "inr"}, {m, x}); }

// An optic ⟨m, forward: s -> m•a, backward: m•b -> t⟩ in Set, with • the cartesian
// product (lens) or the coproduct (prism). Tables index into the sorted action sets.
struct SetOptic {
    static constexpr Regime regime = Regime::normal_form;

    OpticKind kind = OpticKind::lens;
    FinSet residual, a, b, s, t;
    Table forward;
    Table backward;

    std::size_t act_size(const FinSet& x) const {
        return kind == OpticKind::lens ? residual.size() * x.size() : residual.size() + x.size();
    }
};

inline ValidationReport validate_set_optic(const SetOptic& o) {
    ValidationReport r;
    auto is_fn = [](const Table& t, std::size_t dom, std::size_t cod) {
        if (t.size() != dom) return false;
        for (auto v : t) {
            if (v >= cod) return false;
        }
        return true;
    };
    if (!is_fn(o.forward, o.s.size(), o.act_size(o.a))) r.add("forward part is not a function s -> m•a");
    if (!is_fn(o.backward, o.act_size(o.b), o.t.size())) r.add("backward part is not a function m•b -> t");
    return r;
}

struct ConcreteLens {
    FinSet s, t, a, b;
    Table get;  // s -> a
    Table put;  // s × b -> t, indexed by TupleSet(s, b)

    friend bool operator==(const ConcreteLens&, const ConcreteLens&) = default;
};

struct ConcretePrism {
    FinSet s, t, a, b;
    Table match;  // s -> t + a, indexed into SumSet({"inl","inr"}, {t, a})
    Table build;  // b -> t

    friend bool operator==(const ConcretePrism&, const ConcretePrism&) = default;
};

inline void require_kind(const SetOptic& o, OpticKind k, const char* what) {
    if (o.kind != k) throw MismatchError(std::string(what) + ": optic is a " + kind_name(o.kind));
}

inline ConcreteLens lens_concretize(const SetOptic& o) {
    require_kind(o, OpticKind::lens, "lens_concretize");
    const auto ma = product_action(o.residual, o.a);
    const auto mb = product_action(o.residual, o.b);
    const TupleSet sb(o.s, o.b);
    ConcreteLens l{o.s, o.t, o.a, o.b, Table(o.s.size()), Table(sb.size())};
    for (std::size_t x = 0; x < o.s.size(); ++x) {
        auto [m, y] = ma.decode_pair(o.forward[x]);
        l.get[x] = y;
        for (std::size_t b = 0; b < o.b.size(); ++b) l.put[sb.encode(x, b)] = o.backward[mb.encode(m, b)];
    }
    return l;
}

// Residual s; forward x ↦ <x, get x>, backward <x, y> ↦ put(x, y).
inline SetOptic lens_abstract(const ConcreteLens& l) {
    SetOptic o{OpticKind::lens, l.s, l.a, l.b, l.s, l.t, {}, {}};
    const auto ma = product_action(l.s, l.a);
    const auto mb = product_action(l.s, l.b);
    const TupleSet sb(l.s, l.b);
    for (std::size_t x = 0; x < l.s.size(); ++x) o.forward.push_back(ma.encode(x, l.get[x]));
    o.backward.assign(mb.size(), 0);
    for (std::size_t x = 0; x < l.s.size(); ++x) {
        for (std::size_t y = 0; y < l.b.size(); ++y) o.backward[mb.encode(x, y)] = l.put[sb.encode(x, y)];
    }
    return o;
}

inline ConcretePrism prism_concretize(const SetOptic& o) {
    require_kind(o, OpticKind::prism, "prism_concretize");
    const auto ma = coproduct_action(o.residual, o.a);
    const auto mb = coproduct_action(o.residual, o.b);
    const auto ta = coproduct_action(o.t, o.a);
    ConcretePrism p{o.s, o.t, o.a, o.b, Table(o.s.size()), Table(o.b.size())};
    for (std::size_t x = 0; x < o.s.size(); ++x) {
        auto [side, v] = ma.decode(o.forward[x]);
        p.match[x] = side == 0 ? ta.encode(0, o.backward[mb.encode(0, v)]) : ta.encode(1, v);
    }
    for (std::size_t y = 0; y < o.b.size(); ++y) p.build[y] = o.backward[mb.encode(1, y)];
    return p;
}

// Residual t; forward is match, backward is [id, build].
inline SetOptic prism_abstract(const ConcretePrism& p) {
    SetOptic o{OpticKind::prism, p.t, p.a, p.b, p.s, p.t, p.match, {}};
    const auto mb = coproduct_action(p.t, p.b);
    o.backward.assign(mb.size(), 0);
    for (std::size_t x = 0; x < p.t.size(); ++x) o.backward[mb.encode(0, x)] = x;
    for (std::size_t y = 0; y < p.b.size(); ++y) o.backward[mb.encode(1, y)] = p.build[y];
    return o;
}

// Equality of set optics: equality of their normal forms.
inline bool same_normal_form(const SetOptic& x, const SetOptic& y) {
    if (x.kind != y.kind) return false;
    if (x.kind == OpticKind::lens) return lens_concretize(x) == lens_concretize(y);
    return prism_concretize(x) == prism_concretize(y);
}

// ⟨1, x ↦ <*, x>, <*, y> ↦ y⟩ for lenses, ⟨∅, inr, [!, id]⟩ for prisms.
inline SetOptic identity_set_optic(OpticKind kind, const FinSet& a, const FinSet& b) {
    SetOptic o{kind, kind == OpticKind::lens ? FinSet({"*"}) : FinSet{}, a, b, a, b, {}, {}};
    for (std::size_t x = 0; x < a.size(); ++x) {
        o.forward.push_back(kind == OpticKind::lens ? product_action(o.residual, a).encode(0, x)
                                                    : coproduct_action(o.residual, a).encode(1, x));
    }
    o.backward.assign(o.act_size(b), 0);
    for (std::size_t y = 0; y < b.size(); ++y) {
        const auto at = kind == OpticKind::lens ? product_action(o.residual, b).encode(0, y)
                                                : coproduct_action(o.residual, b).encode(1, y);
        o.backward[at] = y;
    }
    return o;
}

// o2 ∘ o1 with residual n × m (lens) or n + m (prism), n the residual of o2.
inline SetOptic compose_set_optics(const SetOptic& o1, const SetOptic& o2) {
    if (o1.kind != o2.kind) throw MismatchError("compose_set_optics: a lens and a prism");
    if (!(o1.s == o2.a) || !(o1.t == o2.b)) throw MismatchError("compose_set_optics: middle endpoints differ");
    SetOptic o{o1.kind, {}, o1.a, o1.b, o2.s, o2.t, {}, {}};
    if (o1.kind == OpticKind::lens) {
        const TupleSet nm(o2.residual, o1.residual);
        o.residual = nm.set();
        const auto f1 = product_action(o1.residual, o1.a), f2 = product_action(o2.residual, o2.a);
        const auto g1 = product_action(o1.residual, o1.b), g2 = product_action(o2.residual, o2.b);
        const auto out_a = product_action(o.residual, o.a), out_b = product_action(o.residual, o.b);
        for (std::size_t x = 0; x < o.s.size(); ++x) {
            auto [n, mid] = f2.decode_pair(o2.forward[x]);
            auto [m, y] = f1.decode_pair(o1.forward[mid]);
            o.forward.push_back(out_a.encode(nm.encode(n, m), y));
        }
        o.backward.assign(out_b.size(), 0);
        for (std::size_t e = 0; e < out_b.size(); ++e) {
            auto [nmi, y] = out_b.decode_pair(e);
            auto [n, m] = nm.decode_pair(nmi);
            o.backward[e] = o2.backward[g2.encode(n, o1.backward[g1.encode(m, y)])];
        }
        return o;
    }
    const SumSet nm({"inl", "inr"}, {o2.residual, o1.residual});
    o.residual = nm.set();
    const auto f1 = coproduct_action(o1.residual, o1.a), f2 = coproduct_action(o2.residual, o2.a);
    const auto g1 = coproduct_action(o1.residual, o1.b), g2 = coproduct_action(o2.residual, o2.b);
    const auto out_a = coproduct_action(o.residual, o.a), out_b = coproduct_action(o.residual, o.b);
    for (std::size_t x = 0; x < o.s.size(); ++x) {
        auto [side2, v2] = f2.decode(o2.forward[x]);
        if (side2 == 0) {
            o.forward.push_back(out_a.encode(0, nm.encode(0, v2)));
            continue;
        }
        auto [side1, v1] = f1.decode(o1.forward[v2]);
        o.forward.push_back(side1 == 0 ? out_a.encode(0, nm.encode(1, v1)) : out_a.encode(1, v1));
    }
    o.backward.assign(out_b.size(), 0);
    for (std::size_t e = 0; e < out_b.size(); ++e) {
        auto [side, v] = out_b.decode(e);
        if (side == 1) {
            o.backward[e] = o2.backward[g2.encode(1, o1.backward[g1.encode(1, v)])];
            continue;
        }
        auto [which, w] = nm.decode(v);
        o.backward[e] = which == 0 ? o2.backward[g2.encode(0, w)] : o2.backward[g2.encode(1, o1.backward[g1.encode(0, w)])];
    }
    return o;
}

// get = get1 ∘ get2, put(x, y) = put2(x, put1(get2 x, y)).
inline ConcreteLens compose_lenses(const ConcreteLens& l1, const ConcreteLens& l2) {
    if (!(l1.s == l2.a) || !(l1.t == l2.b)) throw MismatchError("compose_lenses: middle endpoints differ");
    const TupleSet sb1(l1.s, l1.b), sb2(l2.s, l2.b), sb(l2.s, l1.b);
    ConcreteLens l{l2.s, l2.t, l1.a, l1.b, compose_tables(l1.get, l2.get), Table(sb.size())};
    for (std::size_t x = 0; x < l2.s.size(); ++x) {
        for (std::size_t y = 0; y < l1.b.size(); ++y) {
            l.put[sb.encode(x, y)] = l2.put[sb2.encode(x, l1.put[sb1.encode(l2.get[x], y)])];
        }
    }
    return l;
}

// match: inl t' stays, inr s goes through match1 with inl t ↦ inl build2 t;
// build = build2 ∘ build1.
inline ConcretePrism compose_prisms(const ConcretePrism& p1, const ConcretePrism& p2) {
    if (!(p1.s == p2.a) || !(p1.t == p2.b)) throw MismatchError("compose_prisms: middle endpoints differ");
    const auto ta1 = coproduct_action(p1.t, p1.a), ta2 = coproduct_action(p2.t, p2.a), ta = coproduct_action(p2.t, p1.a);
    ConcretePrism p{p2.s, p2.t, p1.a, p1.b, Table(p2.s.size()), compose_tables(p2.build, p1.build)};
    for (std::size_t x = 0; x < p2.s.size(); ++x) {
        auto [side2, v2] = ta2.decode(p2.match[x]);
        if (side2 == 0) {
            p.match[x] = ta.encode(0, v2);
            continue;
        }
        auto [side1, v1] = ta1.decode(p1.match[v2]);
        p.match[x] = side1 == 0 ? ta.encode(0, p2.build[v1]) : ta.encode(1, v1);
    }
    return p;
}

// h • x for h: m -> m', on the action sets of the optic's kind.
inline Table act_residual_map(OpticKind kind, const FinSet& m, const FinSet& m2, const Table& h, const FinSet& x) {
    Table out;
    if (kind == OpticKind::lens) {
        const auto from = product_action(m, x), to = product_action(m2, x);
        out.resize(from.size());
        for (std::size_t e = 0; e < from.size(); ++e) {
            auto [u, v] = from.decode_pair(e);
            out[e] = to.encode(h[u], v);
        }
    } else {
        const auto from = coproduct_action(m, x), to = coproduct_action(m2, x);
        out.resize(from.size());
        for (std::size_t e = 0; e < from.size(); ++e) {
            auto [side, v] = from.decode(e);
            out[e] = to.encode(side, side == 0 ? h[v] : v);
        }
    }
    return out;
}

// The two optics related by one generating step of the coend relation: given
// f: s -> m•a, g: m'•b -> t and h: m -> m', they are ⟨m, f, g ∘ (h•b)⟩ and
// ⟨m', (h•a) ∘ f, g⟩.
inline std::pair<SetOptic, SetOptic> zigzag_step(OpticKind kind, const FinSet& m, const FinSet& m2, const Table& h,
                                                 const FinSet& a, const FinSet& b, const FinSet& s, const FinSet& t,
                                                 const Table& f, const Table& g) {
    SetOptic left{kind, m, a, b, s, t, f, compose_tables(g, act_residual_map(kind, m, m2, h, b))};
    SetOptic right{kind, m2, a, b, s, t, compose_tables(act_residual_map(kind, m, m2, h, a), f), g};
    return {left, right};
}

// True iff o2 is obtained from o1 by sliding the residual along h: o1.residual -> o2.residual.
inline bool zigzag_related(const SetOptic& o1, const SetOptic& o2, const Table& h) {
    if (o1.kind != o2.kind || !(o1.a == o2.a) || !(o1.b == o2.b) || !(o1.s == o2.s) || !(o1.t == o2.t)) return false;
    if (h.size() != o1.residual.size()) return false;
    for (auto v : h) {
        if (v >= o2.residual.size()) return false;
    }
    return o2.forward == compose_tables(act_residual_map(o1.kind, o1.residual, o2.residual, h, o1.a), o1.forward) &&
           o1.backward == compose_tables(o2.backward, act_residual_map(o1.kind, o1.residual, o2.residual, h, o1.b));
}

// --- lens and prism classes over a finite category of sets -------------------------

inline std::vector<Atom> residual_atoms(std::size_t n) {
    std::vector<Atom> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back("r" + std::to_string(i));
    return xs;
}

// The coend over the finite category of sets of size ≤ K of
//   (m⁻, m⁺) ↦ Set(m⁻ • b, t) × Set(s, m⁺ • a)
// with • the product or coproduct, built directly from function sets. Because s (lens)
// or t (prism) is one of the objects, its classes are the concrete lenses or prisms.
struct FinSetOpticCoend {
    FinCategory base;
    std::vector<FinSet> residuals;
    std::vector<FunctionSet> backs, fores;
    ProductIntegrand integrand;
    QuotientSet quotient;
};

inline std::vector<std::size_t> finset_object_sizes(const FinCategory& c) {
    std::vector<std::size_t> out;
    for (std::size_t o = 0; o < c.num_objects(); ++o) out.push_back(std::stoul(c.object(o)));
    return out;
}

inline Table finset_table_of(const Atom& id) {
    // "n:m:d0,d1,..."
    const auto p = id.find(':', id.find(':') + 1);
    Table t;
    std::size_t i = p + 1;
    while (i < id.size()) {
        auto j = id.find(',', i);
        if (j == std::string::npos) j = id.size();
        t.push_back(std::stoul(id.substr(i, j - i)));
        i = j + 1;
    }
    return t;
}

inline FinSetOpticCoend finset_optic_coend(OpticKind kind, std::size_t k, const FinSet& a, const FinSet& b,
                                          const FinSet& s, const FinSet& t) {
    FinSetOpticCoend res{catalog::finset_category(k), {}, {}, {}, {}, {}};
    const auto& c = res.base;
    const auto sizes = finset_object_sizes(c);
    auto act_set = [&](const FinSet& m, const FinSet& x) {
        return kind == OpticKind::lens ? product_action(m, x).set() : coproduct_action(m, x).set();
    };
    SetFamily contra, co;
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
        res.residuals.push_back(FinSet(residual_atoms(sizes[o])));
        res.backs.emplace_back(act_set(res.residuals[o], b), t);
        res.fores.emplace_back(s, act_set(res.residuals[o], a));
        contra.fiber.push_back(res.backs.back().set());
        co.fiber.push_back(res.fores.back().set());
    }
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        const auto x = c.src(f), y = c.tgt(f);
        const auto table = finset_table_of(c.morphism(f).id);
        const auto fb = act_residual_map(kind, res.residuals[x], res.residuals[y], table, b);
        const auto fa = act_residual_map(kind, res.residuals[x], res.residuals[y], table, a);
        Table l, r;
        for (std::size_t e = 0; e < res.backs[y].size(); ++e) {
            l.push_back(res.backs[x].index_of(compose_tables(res.backs[y].table(e), fb)));
        }
        for (std::size_t e = 0; e < res.fores[x].size(); ++e) {
            r.push_back(res.fores[y].index_of(compose_tables(fa, res.fores[x].table(e))));
        }
        contra.action.push_back(std::move(l));
        co.action.push_back(std::move(r));
    }
    res.integrand = external_product(c, contra, co);
    res.quotient = coend(res.integrand.bifunctor);
    return res;
}

inline SetOptic member_optic(OpticKind kind, const FinSetOpticCoend& fc, const ClassMember& mem, const FinSet& a,
                             const FinSet& b, const FinSet& s, const FinSet& t) {
    auto [g, f] = fc.integrand.at(mem.object, mem.object).decode_pair(mem.element);
    return {kind, fc.residuals[mem.object], a, b, s, t, fc.fores[mem.object].table(f), fc.backs[mem.object].table(g)};
}

} // namespace optika
