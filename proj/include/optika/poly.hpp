#pragma once

// Polynomial functors P(y) = Σ_n s_n × y^{t_n} over finite index sets, the lenses
// between them, ommatidia (their existential form with a residual family c_{n,k}),
// and compound optics whose residual is a profunctor.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "optika/catalog.hpp"
#include "optika/functional_csp.hpp"
#include "optika/prof.hpp"

namespace optika {

struct PolyFunctor {
    FinSet index;
    std::vector<FinSet> positions;   // s_n
    std::vector<FinSet> directions;  // t_n

    friend bool operator==(const PolyFunctor&, const PolyFunctor&) = default;
};

inline ValidationReport validate_poly(const PolyFunctor& p) {
    ValidationReport r;
    if (p.positions.size() != p.index.size() || p.directions.size() != p.index.size()) {
        r.add("positions and directions must be given for every index");
    }
    return r;
}

// Σ_n s_n y^{t_n} with one summand per entry of `summands` ({|s_n|, |t_n|}); index
// atoms are "0", "1", ... and elements "x0".., "d0"...
inline PolyFunctor monomials(const std::vector<std::pair<std::size_t, std::size_t>>& summands) {
    auto atoms = [](std::size_t n, const std::string& stem) {
        std::vector<Atom> xs;
        for (std::size_t i = 0; i < n; ++i) xs.push_back(stem + std::to_string(i));
        return FinSet(std::move(xs));
    };
    if (summands.size() > 10) throw ValidationError("monomials: at most 10 summands");
    PolyFunctor p{atoms(summands.size(), ""), {}, {}};
    for (const auto& [s, t] : summands) {
        p.positions.push_back(atoms(s, "x"));
        p.directions.push_back(atoms(t, "d"));
    }
    return p;
}

// (n, position, direction map t_n -> y).
struct PolyValue {
    std::size_t index = 0;
    std::size_t position = 0;
    Table direction;

    friend bool operator==(const PolyValue&, const PolyValue&) = default;
    friend auto operator<=>(const PolyValue&, const PolyValue&) = default;
};

inline std::string function_label(const FinSet& a, const FinSet& b, const Table& f) {
    std::string s = "{";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += ',';
        s += a[i] + ":" + b[f[i]];
    }
    return s + "}";
}

// P(y) with its elements decoded.
struct PolyEval {
    FinSet set;
    std::vector<PolyValue> values;  // in the order of set
    std::map<PolyValue, std::size_t> lookup;

    std::size_t size() const { return values.size(); }
    std::size_t index_of(const PolyValue& v) const {
        auto it = lookup.find(v);
        if (it == lookup.end()) throw ValidationError("value is not an element of P(y)");
        return it->second;
    }
};

inline PolyEval eval_poly(const PolyFunctor& p, const FinSet& y) {
    std::vector<std::pair<Atom, PolyValue>> all;
    for (std::size_t n = 0; n < p.index.size(); ++n) {
        const auto dirs = all_functions(p.directions[n].size(), y.size());
        for (std::size_t x = 0; x < p.positions[n].size(); ++x) {
            for (const auto& d : dirs) {
                const Atom parts[3] = {p.index[n], p.positions[n][x], function_label(p.directions[n], y, d)};
                all.push_back({tuple_label(parts), PolyValue{n, x, d}});
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    PolyEval out;
    std::vector<Atom> labels;
    for (auto& [label, v] : all) {
        out.lookup.emplace(v, out.values.size());
        out.values.push_back(std::move(v));
        labels.push_back(std::move(label));
    }
    out.set = FinSet(std::move(labels));
    return out;
}

inline Table eval_poly_mor(const PolyEval& from, const PolyEval& to, const Table& f) {
    Table out;
    for (const auto& v : from.values) out.push_back(to.index_of({v.index, v.position, compose_tables(f, v.direction)}));
    return out;
}

// P(f) for f: y -> y2 post-composes direction maps.
inline Table eval_poly_mor(const PolyFunctor& p, const FinSet& y, const FinSet& y2, const Table& f) {
    if (f.size() != y.size()) throw ValidationError("eval_poly_mor: map does not have domain y");
    for (auto v : f) {
        if (v >= y2.size()) throw ValidationError("eval_poly_mor: map does not land in y2");
    }
    return eval_poly_mor(eval_poly(p, y), eval_poly(p, y2), f);
}

// A natural transformation P ⇒ Q in the form ∏_i Set(s_i, Σ_j a_j × Set(b_j, t_i)):
// entries[i][x] picks j, an element of a_j and a direction map b_j -> t_i.
struct PolyLens {
    PolyFunctor source;
    PolyFunctor target;
    std::vector<std::vector<PolyValue>> entries;

    friend bool operator==(const PolyLens&, const PolyLens&) = default;
};

inline ValidationReport validate_polylens(const PolyLens& l) {
    ValidationReport r;
    r.append(validate_poly(l.source), "source: ");
    r.append(validate_poly(l.target), "target: ");
    if (!r.ok()) return r;
    if (l.entries.size() != l.source.index.size()) {
        r.add("one entry list per source index is required");
        return r;
    }
    for (std::size_t i = 0; i < l.entries.size(); ++i) {
        if (l.entries[i].size() != l.source.positions[i].size()) {
            r.add("entries at " + l.source.index[i] + " do not cover the positions");
            continue;
        }
        for (const auto& e : l.entries[i]) {
            if (e.index >= l.target.index.size() || e.position >= l.target.positions[e.index].size() ||
                e.direction.size() != l.target.directions[e.index].size()) {
                r.add("entry at " + l.source.index[i] + " is not an element of Q(t)");
                continue;
            }
            for (auto v : e.direction) {
                if (v >= l.source.directions[i].size()) r.add("direction map at " + l.source.index[i] + " out of range");
            }
        }
    }
    return r;
}

// ∏_i |Q(t_i)|^|s_i|, saturating at SIZE_MAX.
inline std::size_t count_polylenses(const PolyFunctor& p, const PolyFunctor& q) {
    std::size_t total = 1;
    auto mul = [&](std::size_t x) {
        if (x == 0) {
            total = 0;
        } else if (total > SIZE_MAX / x) {
            total = SIZE_MAX;
        } else {
            total *= x;
        }
    };
    for (std::size_t i = 0; i < p.index.size(); ++i) {
        const auto q_t = eval_poly(q, p.directions[i]).size();
        for (std::size_t x = 0; x < p.positions[i].size() && total != 0; ++x) mul(q_t);
    }
    return total;
}

inline std::vector<PolyLens> enumerate_polylenses(const PolyFunctor& p, const PolyFunctor& q,
                                                  std::size_t limit = 1u << 20) {
    const auto count = count_polylenses(p, q);
    if (count > limit) throw ValidationError("enumerate_polylenses: " + std::to_string(count) + " lenses exceed the limit");
    std::vector<PolyEval> qt;
    std::vector<std::vector<Table>> choices;
    for (std::size_t i = 0; i < p.index.size(); ++i) {
        qt.push_back(eval_poly(q, p.directions[i]));
        choices.push_back(all_functions(p.positions[i].size(), qt.back().size()));
    }
    std::vector<PolyLens> out;
    if (count == 0) return out;
    std::vector<std::size_t> pick(p.index.size(), 0);
    while (true) {
        PolyLens l{p, q, {}};
        for (std::size_t i = 0; i < p.index.size(); ++i) {
            std::vector<PolyValue> row;
            for (auto v : choices[i][pick[i]]) row.push_back(qt[i].values[v]);
            l.entries.push_back(std::move(row));
        }
        out.push_back(std::move(l));
        std::size_t i = p.index.size();
        while (i > 0) {
            --i;
            if (++pick[i] < choices[i].size()) break;
            pick[i] = 0;
            if (i == 0) return out;
        }
        if (p.index.size() == 0) return out;
    }
}

// The component at y: (i, x, d) ↦ (j, a', d ∘ direction).
inline Table polylens_to_nat(const PolyLens& l, const FinSet& y) {
    const auto from = eval_poly(l.source, y);
    const auto to = eval_poly(l.target, y);
    Table out;
    for (const auto& v : from.values) {
        const auto& e = l.entries[v.index][v.position];
        out.push_back(to.index_of({e.index, e.position, compose_tables(v.direction, e.direction)}));
    }
    return out;
}

inline PolyLens identity_polylens(const PolyFunctor& p) {
    PolyLens l{p, p, {}};
    for (std::size_t i = 0; i < p.index.size(); ++i) {
        l.entries.emplace_back();
        for (std::size_t x = 0; x < p.positions[i].size(); ++x) {
            l.entries.back().push_back({i, x, identity_table(p.directions[i].size())});
        }
    }
    return l;
}

// l1: P ⇒ Q then l2: Q ⇒ R.
inline PolyLens compose_polylens(const PolyLens& l1, const PolyLens& l2) {
    if (!(l1.target == l2.source)) throw MismatchError("compose_polylens: middle polynomials differ");
    PolyLens l{l1.source, l2.target, {}};
    for (const auto& row : l1.entries) {
        l.entries.emplace_back();
        for (const auto& e1 : row) {
            const auto& e2 = l2.entries[e1.index][e1.position];
            l.entries.back().push_back({e2.index, e2.position, compose_tables(e1.direction, e2.direction)});
        }
    }
    return l;
}

// Sets of size 0..y_max used by the oracle.
inline FinSet oracle_set(std::size_t n) {
    std::vector<Atom> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back("y" + std::to_string(i));
    return FinSet(std::move(xs));
}

// Every family of maps P(y) -> Q(y), |y| ≤ y_max, natural against every function
// between those sets. components[y] is the map at the set of size y.
struct NatOracleResult {
    std::size_t y_max = 0;
    std::size_t count = 0;
    std::vector<std::vector<Table>> solutions;  // empty unless requested
};

inline std::size_t nat_oracle_min_bound(const PolyFunctor& p) {
    std::size_t m = 0;
    for (const auto& t : p.directions) m = std::max(m, t.size());
    return m + 1;
}

// A family is determined by its values at the sets t_i (Yoneda), so any bound above
// every |t_i| certifies the count; the bound is checked and too-small bounds refused.
inline NatOracleResult nat_oracle(const PolyFunctor& p, const PolyFunctor& q, std::size_t y_max,
                                  bool keep_solutions = true, std::size_t limit = 1u << 20) {
    if (y_max < nat_oracle_min_bound(p)) {
        throw ValidationError("nat_oracle: bound " + std::to_string(y_max) + " is below " +
                              std::to_string(nat_oracle_min_bound(p)));
    }
    std::vector<PolyEval> ps, qs;
    std::vector<std::size_t> offset{0};
    std::vector<std::size_t> domains;
    for (std::size_t n = 0; n <= y_max; ++n) {
        ps.push_back(eval_poly(p, oracle_set(n)));
        qs.push_back(eval_poly(q, oracle_set(n)));
        for (std::size_t e = 0; e < ps.back().size(); ++e) domains.push_back(qs.back().size());
        offset.push_back(domains.size());
    }
    FunctionalCsp csp(domains);
    for (std::size_t n = 0; n <= y_max; ++n) {
        for (std::size_t m = 0; m <= y_max; ++m) {
            for (const auto& f : all_functions(n, m)) {
                const auto pf = eval_poly_mor(ps[n], ps[m], f);
                const auto qf = eval_poly_mor(qs[n], qs[m], f);
                const auto map = csp.add_map(qf);
                for (std::size_t e = 0; e < pf.size(); ++e) csp.require(offset[n] + e, offset[m] + pf[e], map);
            }
        }
    }
    NatOracleResult out{y_max, 0, {}};
    bool overflow = false;
    csp.solve([&](const std::vector<std::size_t>& value) {
        if (out.count >= limit) {
            overflow = true;
            return false;
        }
        ++out.count;
        if (!keep_solutions) return true;
        std::vector<Table> family;
        for (std::size_t n = 0; n <= y_max; ++n) family.emplace_back(value.begin() + offset[n], value.begin() + offset[n + 1]);
        out.solutions.push_back(std::move(family));
        return true;
    });
    if (overflow) throw ValidationError("nat_oracle: more than " + std::to_string(limit) + " solutions");
    return out;
}

// Σ_n x_n × c_n with elements <tag, <x, c>> for the index tags.
struct SigmaSet {
    SumSet sum;
    std::vector<TupleSet> parts;

    SigmaSet(const FinSet& index, const std::vector<FinSet>& xs, const std::vector<FinSet>& cs) {
        std::vector<FinSet> summands;
        for (std::size_t n = 0; n < index.size(); ++n) {
            parts.emplace_back(xs[n], cs[n]);
            summands.push_back(parts.back().set());
        }
        sum = SumSet(index.elements(), summands);
    }

    std::size_t size() const { return sum.size(); }
    std::size_t encode(std::size_t n, std::size_t x, std::size_t c) const { return sum.encode(n, parts[n].encode(x, c)); }
    std::tuple<std::size_t, std::size_t, std::size_t> decode(std::size_t idx) const {
        auto [n, e] = sum.decode(idx);
        auto [x, c] = parts[n].decode_pair(e);
        return {n, x, c};
    }
};

// An ommatidium ⟨a,b⟩ -> ⟨s,t⟩ where source = Σ_k s_k y^{t_k} and target = Σ_n a_n y^{b_n}:
//   forward[k]:  s_k -> Σ_n a_n × c_{n,k}
//   backward[k]: Σ_n b_n × c_{n,k} -> t_k
struct Ommatidium {
    PolyFunctor source;
    PolyFunctor target;
    std::vector<std::vector<FinSet>> residual;  // [n][k]
    std::vector<Table> forward;                 // [k]
    std::vector<Table> backward;                // [k]

    std::vector<FinSet> column(std::size_t k) const {
        std::vector<FinSet> out;
        for (const auto& row : residual) out.push_back(row[k]);
        return out;
    }
    SigmaSet forward_set(std::size_t k) const { return SigmaSet(target.index, target.positions, column(k)); }
    SigmaSet backward_set(std::size_t k) const { return SigmaSet(target.index, target.directions, column(k)); }
};

inline ValidationReport validate_ommatidium(const Ommatidium& o) {
    ValidationReport r;
    r.append(validate_poly(o.source), "source: ");
    r.append(validate_poly(o.target), "target: ");
    if (!r.ok()) return r;
    const auto nk = o.source.index.size(), nn = o.target.index.size();
    if (o.residual.size() != nn || o.forward.size() != nk || o.backward.size() != nk) {
        r.add("ommatidium tables do not cover the indices");
        return r;
    }
    for (const auto& row : o.residual) {
        if (row.size() != nk) {
            r.add("residual family does not cover the indices");
            return r;
        }
    }
    for (std::size_t k = 0; k < nk; ++k) {
        const auto fs = o.forward_set(k).size(), bs = o.backward_set(k).size();
        const auto& name = o.source.index[k];
        if (o.forward[k].size() != o.source.positions[k].size()) r.add("forward at " + name + " is not total");
        for (auto v : o.forward[k]) {
            if (v >= fs) r.add("forward at " + name + " out of range");
        }
        if (o.backward[k].size() != bs) r.add("backward at " + name + " is not total");
        for (auto v : o.backward[k]) {
            if (v >= o.source.directions[k].size()) r.add("backward at " + name + " out of range");
        }
    }
    return r;
}

// At (k, x): with forward_k(x) = (n, a', c), emit (n, a', β ↦ backward_k(n, β, c)).
inline PolyLens ommatidium_to_polylens(const Ommatidium& o) {
    PolyLens l{o.source, o.target, {}};
    for (std::size_t k = 0; k < o.source.index.size(); ++k) {
        const auto fs = o.forward_set(k);
        const auto bs = o.backward_set(k);
        l.entries.emplace_back();
        for (auto v : o.forward[k]) {
            auto [n, a, c] = fs.decode(v);
            Table dir;
            for (std::size_t beta = 0; beta < o.target.directions[n].size(); ++beta) {
                dir.push_back(o.backward[k][bs.encode(n, beta, c)]);
            }
            l.entries.back().push_back({n, a, std::move(dir)});
        }
    }
    return l;
}

// Residual c_{n,k} = Set(b_n, t_k) with evaluation as backward map.
inline Ommatidium polylens_to_ommatidium(const PolyLens& l) {
    const auto& p = l.source;
    const auto& q = l.target;
    Ommatidium o{p, q, std::vector<std::vector<FinSet>>(q.index.size()), {}, {}};
    std::vector<std::vector<FunctionSet>> fns(q.index.size());
    for (std::size_t n = 0; n < q.index.size(); ++n) {
        for (std::size_t k = 0; k < p.index.size(); ++k) {
            fns[n].emplace_back(q.directions[n], p.directions[k]);
            o.residual[n].push_back(fns[n].back().set());
        }
    }
    for (std::size_t k = 0; k < p.index.size(); ++k) {
        const auto fs = o.forward_set(k);
        const auto bs = o.backward_set(k);
        Table fw;
        for (const auto& e : l.entries[k]) fw.push_back(fs.encode(e.index, e.position, fns[e.index][k].index_of(e.direction)));
        Table bw(bs.size());
        for (std::size_t v = 0; v < bs.size(); ++v) {
            auto [n, beta, c] = bs.decode(v);
            bw[v] = fns[n][k].table(c)[beta];
        }
        o.forward.push_back(std::move(fw));
        o.backward.push_back(std::move(bw));
    }
    return o;
}

// Equality of ommatidia: equality of normal forms.
inline bool same_normal_form(const Ommatidium& x, const Ommatidium& y) {
    return ommatidium_to_polylens(x) == ommatidium_to_polylens(y);
}

// (a × h) or (b × h) on the component k of Σ_n x_n × c_{n,k}.
inline Table sigma_map(const SigmaSet& from, const SigmaSet& to, const std::vector<std::vector<Table>>& h,
                       std::size_t k) {
    Table out;
    for (std::size_t v = 0; v < from.size(); ++v) {
        auto [n, x, c] = from.decode(v);
        out.push_back(to.encode(n, x, h[n][k][c]));
    }
    return out;
}

// Checks that h[n][k]: c_{n,k} -> c'_{n,k} relates o1 (residual c) and o2 (residual c')
// by one step of the coend relation:
//   o2.forward = (a × h) ∘ o1.forward   and   o1.backward = o2.backward ∘ (b × h).
inline bool ommatidium_related(const Ommatidium& o1, const Ommatidium& o2, const std::vector<std::vector<Table>>& h) {
    if (!(o1.source == o2.source) || !(o1.target == o2.target)) return false;
    const auto nn = o1.target.index.size(), nk = o1.source.index.size();
    if (h.size() != nn) return false;
    for (std::size_t n = 0; n < nn; ++n) {
        if (h[n].size() != nk) return false;
        for (std::size_t k = 0; k < nk; ++k) {
            if (h[n][k].size() != o1.residual[n][k].size()) return false;
            for (auto v : h[n][k]) {
                if (v >= o2.residual[n][k].size()) return false;
            }
        }
    }
    for (std::size_t k = 0; k < nk; ++k) {
        if (o2.forward[k] != compose_tables(sigma_map(o1.forward_set(k), o2.forward_set(k), h, k), o1.forward[k])) {
            return false;
        }
        if (o1.backward[k] != compose_tables(o2.backward[k], sigma_map(o1.backward_set(k), o2.backward_set(k), h, k))) {
            return false;
        }
    }
    return true;
}

// Given forward tables over c and backward tables over c', builds the pair
// ⟨c, f, g ∘ (b × h)⟩ and ⟨c', (a × h) ∘ f, g⟩.
inline std::pair<Ommatidium, Ommatidium> ommatidium_zigzag(const PolyFunctor& source, const PolyFunctor& target,
                                                           const std::vector<std::vector<FinSet>>& c,
                                                           const std::vector<std::vector<FinSet>>& c2,
                                                           const std::vector<std::vector<Table>>& h,
                                                           const std::vector<Table>& f, const std::vector<Table>& g) {
    Ommatidium left{source, target, c, f, {}};
    Ommatidium right{source, target, c2, {}, g};
    for (std::size_t k = 0; k < source.index.size(); ++k) {
        left.backward.push_back(compose_tables(g[k], sigma_map(left.backward_set(k), right.backward_set(k), h, k)));
        right.forward.push_back(compose_tables(sigma_map(left.forward_set(k), right.forward_set(k), h, k), f[k]));
    }
    return {left, right};
}

// --- Compound optics ----------------------------------------------------------------

// ⟨a,b⟩ -> ⟨s,t⟩ with a, b on N and s, t on K, residual p: N ⇸ K,
//   forward: s ⇒ p • a,   backward: p • b ⇒ t.
struct CompoundOptic {
    FinProfunctor residual;
    CoPresheaf a, b, s, t;
    NatTransformation forward;
    NatTransformation backward;
};

inline ValidationReport validate_compound(const CompoundOptic& o) {
    ValidationReport r;
    r.append(validate_profunctor(o.residual), "residual: ");
    if (!r.ok()) return r;
    if (!(o.a.base == o.residual.source) || !(o.b.base == o.residual.source)) r.add("a and b must live on the source");
    if (!(o.s.base == o.residual.target) || !(o.t.base == o.residual.target)) r.add("s and t must live on the target");
    if (!r.ok()) return r;
    r.append(validate_nat(o.s, prof_action(o.residual, o.a), o.forward), "forward: ");
    r.append(validate_nat(prof_action(o.residual, o.b), o.t, o.backward), "backward: ");
    return r;
}

// o2 ∘ o1 for o1 over p: N ⇸ K and o2 over q: K ⇸ L. The residual is p ⋄ q and
//   forward  = w_a⁻¹ ∘ (q • f1) ∘ f2
//   backward = g2 ∘ (q • g1) ∘ w_b
// with w_x: (p ⋄ q) • x ≅ q • (p • x) from action_composition.
inline CompoundOptic compound_compose(const CompoundOptic& o1, const CompoundOptic& o2) {
    if (!(o1.s == o2.a) || !(o1.t == o2.b)) throw MismatchError("compound_compose: middle co-presheaves differ");
    const auto& p = o1.residual;
    const auto& q = o2.residual;
    const auto wa = action_composition(p, q, o1.a);
    const auto wb = action_composition(p, q, o1.b);
    if (!wa.witness || !wb.witness) throw KernelError("compound_compose: action composition failed");
    CompoundOptic out{wa.pq.result, o1.a, o1.b, o2.s, o2.t, {}, {}};
    const auto qf = act_on_nat(q, o1.s, wa.inner.result, o1.forward);
    const auto qg = act_on_nat(q, wb.inner.result, o1.t, o1.backward);
    out.forward = compose_nats(compose_nats(o2.forward, qf), NatTransformation{wa.witness.backward});
    out.backward = compose_nats(compose_nats(NatTransformation{wb.witness.forward}, qg), o2.backward);
    return out;
}

// Residual hom(-, -) on the base of a; components from hom • x ≅ x.
inline CompoundOptic identity_compound(const CoPresheaf& a, const CoPresheaf& b) {
    if (!(a.base == b.base)) throw MismatchError("identity_compound: a and b live on different categories");
    const auto ua = action_unit_check(a);
    const auto ub = action_unit_check(b);
    if (!ua || !ub) throw KernelError("identity_compound: unit isomorphism failed");
    return {hom_profunctor(a.base), a, b, a, b, NatTransformation{ua.backward}, NatTransformation{ub.forward}};
}

// One zig-zag step along h: o1.residual ⇒ o2.residual:
//   o2.forward = (h • a) ∘ o1.forward   and   o1.backward = o2.backward ∘ (h • b).
// This checks a witness; it does not decide equality.
inline bool coend_witness_check(const CompoundOptic& o1, const CompoundOptic& o2, const ProfNat& h) {
    if (!(o1.a == o2.a) || !(o1.b == o2.b) || !(o1.s == o2.s) || !(o1.t == o2.t)) {
        throw MismatchError("coend_witness_check: optics have different endpoints");
    }
    if (!(o1.residual.source == o2.residual.source) || !(o1.residual.target == o2.residual.target)) return false;
    if (!validate_prof_nat(o1.residual, o2.residual, h).ok()) return false;
    const auto ha = act_on_prof_nat(o1.residual, o2.residual, h, o1.a);
    const auto hb = act_on_prof_nat(o1.residual, o2.residual, h, o1.b);
    return o2.forward == compose_nats(o1.forward, ha) && o1.backward == compose_nats(hb, o2.backward);
}

// The left or right unit isomorphism of p as a 2-cell hom ⋄ p ⇒ p or p ⋄ hom ⇒ p.
inline ProfNat unit_prof_nat(const FinProfunctor& p, bool left) {
    const auto w = unit_check(p);
    if (!w) throw KernelError("unit_prof_nat: unit isomorphism failed");
    const auto nn = p.source.num_objects(), nk = p.target.num_objects();
    ProfNat h;
    for (std::size_t n = 0; n < nn; ++n) {
        h.components.emplace_back();
        for (std::size_t k = 0; k < nk; ++k) h.components.back().push_back(w.forward[(left ? 0 : nn * nk) + n * nk + k]);
    }
    return h;
}

// Discrete categories and co-presheaves from polynomial data.
inline FinCategory index_category(const PolyFunctor& p) { return catalog::discrete(p.index.elements()); }

inline CoPresheaf discrete_copresheaf(const FinCategory& c, const std::vector<FinSet>& fibers) {
    CoPresheaf f{c, fibers, {}};
    for (std::size_t m = 0; m < c.num_morphisms(); ++m) f.action.push_back(identity_table(fibers[c.src(m)].size()));
    return f;
}

inline bool is_discrete(const FinCategory& c) { return c.num_morphisms() == c.num_objects(); }

// The ommatidium of a compound optic between discrete categories: c_{n,k} = p⟨n,k⟩.
inline Ommatidium compound_to_ommatidium(const CompoundOptic& o, const PolyFunctor& source, const PolyFunctor& target) {
    const auto& p = o.residual;
    if (!is_discrete(p.source) || !is_discrete(p.target)) {
        throw MismatchError("compound_to_ommatidium: categories are not discrete");
    }
    if (o.s.fiber != source.positions || o.t.fiber != source.directions || o.a.fiber != target.positions ||
        o.b.fiber != target.directions) {
        throw MismatchError("compound_to_ommatidium: polynomials do not match the endpoints");
    }
    Ommatidium om{source, target, p.fiber, {}, {}};
    const auto pa = prof_action_full(p, o.a);
    const auto pb = prof_action_full(p, o.b);
    for (std::size_t k = 0; k < p.target.num_objects(); ++k) {
        const auto fs = om.forward_set(k);
        const auto bs = om.backward_set(k);
        Table fw;
        for (auto cls : o.forward.components[k]) {
            const auto& mem = pa.quotients[k].representative(cls);
            auto [x, al] = pa.integrands[k].at(mem.object, mem.object).decode_pair(mem.element);
            fw.push_back(fs.encode(mem.object, al, x));
        }
        Table bw(bs.size());
        for (std::size_t v = 0; v < bs.size(); ++v) {
            auto [n, beta, x] = bs.decode(v);
            bw[v] = o.backward.components[k][pb.quotients[k].inject[n][pb.integrands[k].at(n, n).encode(x, beta)]];
        }
        om.forward.push_back(std::move(fw));
        om.backward.push_back(std::move(bw));
    }
    return om;
}

inline CompoundOptic ommatidium_to_compound(const Ommatidium& om) {
    const auto nc = index_category(om.target);
    const auto kc = index_category(om.source);
    FinProfunctor p{nc, kc, om.residual, {}, {}};
    for (std::size_t n = 0; n < nc.num_objects(); ++n) {
        p.contra.emplace_back();
        for (std::size_t k = 0; k < kc.num_objects(); ++k) p.contra.back().push_back(identity_table(p.at(n, k).size()));
    }
    for (std::size_t k = 0; k < kc.num_objects(); ++k) {
        p.co.emplace_back();
        for (std::size_t n = 0; n < nc.num_objects(); ++n) p.co.back().push_back(identity_table(p.at(n, k).size()));
    }
    CompoundOptic o{p,
                    discrete_copresheaf(nc, om.target.positions),
                    discrete_copresheaf(nc, om.target.directions),
                    discrete_copresheaf(kc, om.source.positions),
                    discrete_copresheaf(kc, om.source.directions),
                    {},
                    {}};
    const auto pa = prof_action_full(p, o.a);
    const auto pb = prof_action_full(p, o.b);
    for (std::size_t k = 0; k < kc.num_objects(); ++k) {
        const auto fs = om.forward_set(k);
        const auto bs = om.backward_set(k);
        Table fw;
        for (auto v : om.forward[k]) {
            auto [n, al, x] = fs.decode(v);
            fw.push_back(pa.quotients[k].inject[n][pa.integrands[k].at(n, n).encode(x, al)]);
        }
        Table bw(pb.quotients[k].size());
        for (std::size_t cls = 0; cls < bw.size(); ++cls) {
            const auto& mem = pb.quotients[k].representative(cls);
            auto [x, beta] = pb.integrands[k].at(mem.object, mem.object).decode_pair(mem.element);
            bw[cls] = om.backward[k][bs.encode(mem.object, beta, x)];
        }
        o.forward.components.push_back(std::move(fw));
        o.backward.components.push_back(std::move(bw));
    }
    return o;
}

// The polylens normal form of a compound optic between discrete categories. The optic
// ⟨a,b⟩ -> ⟨s,t⟩ gives a lens from Σ s_k y^{t_k} to Σ a_n y^{b_n}, so composites come
// out reversed: normal_form(compound_compose(o1, o2)) = compose_polylens(nf(o2), nf(o1)).
inline PolyLens compound_normal_form(const CompoundOptic& o, const PolyFunctor& source, const PolyFunctor& target) {
    return ommatidium_to_polylens(compound_to_ommatidium(o, source, target));
}

} // namespace optika
