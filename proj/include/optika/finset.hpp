#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "optika/errors.hpp"

namespace optika {

using Atom = std::string;

// A function between finite sets, stored as the image index of every domain index.
using Table = std::vector<std::size_t>;

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Finite set of atoms kept in sorted order, so that indices are canonical.
class FinSet {
public:
    FinSet() = default;

    explicit FinSet(std::vector<Atom> elements, std::string label = {})
        : elements_(std::move(elements)), label_(std::move(label)) {
        std::sort(elements_.begin(), elements_.end());
        auto dup = std::adjacent_find(elements_.begin(), elements_.end());
        if (dup != elements_.end()) {
            throw ValidationError("duplicate atom '" + *dup + "' in set '" + label_ + "'");
        }
    }

    // {"0", "1", ..., "n-1"}; note that "10" sorts before "2".
    static FinSet range(std::size_t n, std::string label = {}) {
        std::vector<Atom> xs;
        xs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) xs.push_back(std::to_string(i));
        return FinSet(std::move(xs), std::move(label));
    }

    const std::vector<Atom>& elements() const noexcept { return elements_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    const Atom& operator[](std::size_t i) const { return elements_[i]; }

    std::optional<std::size_t> find(const Atom& a) const {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), a);
        if (it == elements_.end() || *it != a) return std::nullopt;
        return static_cast<std::size_t>(it - elements_.begin());
    }

    std::size_t index_of(const Atom& a) const {
        if (auto i = find(a)) return *i;
        throw ValidationError("atom '" + a + "' is not an element of set '" + label_ + "'");
    }

    // Labels are descriptive only.
    friend bool operator==(const FinSet& x, const FinSet& y) { return x.elements_ == y.elements_; }

private:
    std::vector<Atom> elements_;
    std::string label_;
};

inline std::string tuple_label(std::span<const Atom> parts) {
    std::string out = "<";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    out += '>';
    return out;
}

// Cartesian product of finite sets. Elements are labelled "<x,y,...>" and sorted like
// any other FinSet; encode/decode translate between factor indices and set indices.
class TupleSet {
public:
    TupleSet() = default;

    explicit TupleSet(std::vector<FinSet> factors) : factors_(std::move(factors)) {
        std::size_t total = 1;
        for (const auto& f : factors_) total *= f.size();
        std::vector<Atom> labels;
        labels.reserve(total);
        std::vector<Atom> parts(factors_.size());
        for (std::size_t r = 0; r < total; ++r) {
            auto digits = radix_decode(r);
            for (std::size_t i = 0; i < factors_.size(); ++i) parts[i] = factors_[i][digits[i]];
            labels.push_back(tuple_label(parts));
        }
        std::vector<std::size_t> order(total);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
        to_sorted_.assign(total, 0);
        from_sorted_ = order;
        std::vector<Atom> sorted;
        sorted.reserve(total);
        for (std::size_t k = 0; k < total; ++k) {
            to_sorted_[order[k]] = k;
            sorted.push_back(std::move(labels[order[k]]));
        }
        set_ = FinSet(std::move(sorted));
    }

    TupleSet(FinSet a, FinSet b) : TupleSet(std::vector<FinSet>{std::move(a), std::move(b)}) {}

    const FinSet& set() const noexcept { return set_; }
    const std::vector<FinSet>& factors() const noexcept { return factors_; }
    std::size_t size() const noexcept { return set_.size(); }

    std::size_t encode(std::span<const std::size_t> digits) const {
        std::size_t r = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) r = r * factors_[i].size() + digits[i];
        return to_sorted_[r];
    }
    std::size_t encode(std::size_t x, std::size_t y) const {
        const std::size_t d[2] = {x, y};
        return encode(std::span<const std::size_t>(d, 2));
    }

    std::vector<std::size_t> decode(std::size_t idx) const { return radix_decode(from_sorted_[idx]); }
    std::pair<std::size_t, std::size_t> decode_pair(std::size_t idx) const {
        auto d = decode(idx);
        return {d[0], d[1]};
    }

private:
    std::vector<std::size_t> radix_decode(std::size_t r) const {
        std::vector<std::size_t> digits(factors_.size());
        for (std::size_t i = factors_.size(); i-- > 0;) {
            digits[i] = r % factors_[i].size();
            r /= factors_[i].size();
        }
        return digits;
    }

    std::vector<FinSet> factors_;
    FinSet set_;
    Table to_sorted_;
    Table from_sorted_;
};

// Tagged disjoint union. Elements are labelled "<tag,x>".
class SumSet {
public:
    SumSet() = default;

    SumSet(std::vector<Atom> tags, std::vector<FinSet> summands)
        : tags_(std::move(tags)), summands_(std::move(summands)) {
        if (tags_.size() != summands_.size()) throw ValidationError("SumSet: tag/summand count mismatch");
        std::vector<std::pair<Atom, std::pair<std::size_t, std::size_t>>> all;
        for (std::size_t s = 0; s < summands_.size(); ++s) {
            for (std::size_t i = 0; i < summands_[s].size(); ++i) {
                const Atom parts[2] = {tags_[s], summands_[s][i]};
                all.push_back({tuple_label(parts), {s, i}});
            }
        }
        std::sort(all.begin(), all.end());
        offsets_.assign(summands_.size() + 1, 0);
        for (std::size_t s = 0; s < summands_.size(); ++s) offsets_[s + 1] = offsets_[s] + summands_[s].size();
        to_sorted_.assign(all.size(), 0);
        std::vector<Atom> labels;
        for (std::size_t k = 0; k < all.size(); ++k) {
            parts_.push_back(all[k].second);
            to_sorted_[offsets_[all[k].second.first] + all[k].second.second] = k;
            labels.push_back(std::move(all[k].first));
        }
        set_ = FinSet(std::move(labels));
    }

    const FinSet& set() const noexcept { return set_; }
    const std::vector<FinSet>& summands() const noexcept { return summands_; }
    const std::vector<Atom>& tags() const noexcept { return tags_; }
    std::size_t size() const noexcept { return set_.size(); }

    std::size_t encode(std::size_t summand, std::size_t i) const { return to_sorted_[offsets_[summand] + i]; }
    std::pair<std::size_t, std::size_t> decode(std::size_t idx) const { return parts_[idx]; }

private:
    std::vector<Atom> tags_;
    std::vector<FinSet> summands_;
    FinSet set_;
    std::vector<std::size_t> offsets_;
    Table to_sorted_;
    std::vector<std::pair<std::size_t, std::size_t>> parts_;
};

// All functions from a set of size `dom` to a set of size `cod`, as tables in
// lexicographic order. There are cod^dom of them.
inline std::vector<Table> all_functions(std::size_t dom, std::size_t cod) {
    std::vector<Table> out;
    if (cod == 0 && dom > 0) return out;
    Table f(dom, 0);
    while (true) {
        out.push_back(f);
        std::size_t i = dom;
        while (i > 0) {
            --i;
            if (++f[i] < cod) break;
            f[i] = 0;
            if (i == 0) return out;
        }
        if (dom == 0) return out;
    }
}

inline Table compose_tables(const Table& g, const Table& f) {
    Table out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = g[f[i]];
    return out;
}

inline Table identity_table(std::size_t n) {
    Table t(n);
    std::iota(t.begin(), t.end(), 0);
    return t;
}

// The set of all functions a -> b. Each element is labelled "{x:y,...}" listing the
// images of a's elements in order.
class FunctionSet {
public:
    FunctionSet() = default;

    FunctionSet(const FinSet& a, const FinSet& b) {
        auto fs = all_functions(a.size(), b.size());
        std::vector<std::pair<Atom, Table>> labelled;
        labelled.reserve(fs.size());
        for (auto& f : fs) {
            std::string s = "{";
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (i) s += ',';
                s += a[i] + ":" + b[f[i]];
            }
            s += '}';
            labelled.emplace_back(std::move(s), std::move(f));
        }
        std::sort(labelled.begin(), labelled.end());
        std::vector<Atom> labels;
        for (auto& [label, table] : labelled) {
            labels.push_back(label);
            index_.emplace_back(table, tables_.size());
            tables_.push_back(std::move(table));
        }
        std::sort(index_.begin(), index_.end());
        set_ = FinSet(std::move(labels));
    }

    const FinSet& set() const noexcept { return set_; }
    std::size_t size() const noexcept { return set_.size(); }
    const Table& table(std::size_t i) const { return tables_[i]; }

    std::size_t index_of(const Table& f) const {
        auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(f, std::size_t{0}));
        if (it == index_.end() || it->first != f) throw ValidationError("function table is not total or out of range");
        return it->second;
    }

private:
    FinSet set_;
    std::vector<Table> tables_;
    std::vector<std::pair<Table, std::size_t>> index_;
};

} // namespace optika
