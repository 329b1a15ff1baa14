#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "optika/finset.hpp"

namespace optika {

// Enumerates assignments variable -> value subject to constraints of the form
// value[to] == map[value[from]]. Natural-transformation enumeration is exactly this
// problem: each naturality square is one such constraint per element.
//
// Assigning a variable forces the value of every constraint target, so the search
// only branches on variables that nothing determines.
class FunctionalCsp {
public:
    explicit FunctionalCsp(std::vector<std::size_t> domain_sizes)
        : domains_(std::move(domain_sizes)), out_(domains_.size()), in_(domains_.size()) {}

    std::size_t add_map(Table map) {
        maps_.push_back(std::move(map));
        return maps_.size() - 1;
    }

    void require(std::size_t from, std::size_t to, std::size_t map) {
        out_[from].push_back({to, map});
        in_[to].push_back({from, map});
    }

    // Calls visit(assignment) for every solution in lexicographic order of the
    // branching variables; visit returns false to stop early.
    template <class Visit>
    void solve(Visit&& visit) {
        value_.assign(domains_.size(), npos);
        trail_.clear();
        stop_ = false;
        search(0, visit);
    }

    std::size_t count() {
        std::size_t n = 0;
        solve([&](const std::vector<std::size_t>&) {
            ++n;
            return true;
        });
        return n;
    }

private:
    struct Edge {
        std::size_t other;
        std::size_t map;
    };

    bool assign(std::size_t var, std::size_t val) {
        std::deque<std::pair<std::size_t, std::size_t>> queue{{var, val}};
        while (!queue.empty()) {
            auto [v, x] = queue.front();
            queue.pop_front();
            if (value_[v] != npos) {
                if (value_[v] != x) return false;
                continue;
            }
            if (x >= domains_[v]) return false;
            value_[v] = x;
            trail_.push_back(v);
            for (const auto& e : in_[v]) {
                if (value_[e.other] != npos && maps_[e.map][value_[e.other]] != x) return false;
            }
            for (const auto& e : out_[v]) queue.emplace_back(e.other, maps_[e.map][x]);
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            value_[trail_.back()] = npos;
            trail_.pop_back();
        }
    }

    template <class Visit>
    void search(std::size_t from, Visit& visit) {
        std::size_t v = from;
        while (v < domains_.size() && value_[v] != npos) ++v;
        if (v == domains_.size()) {
            if (!visit(static_cast<const std::vector<std::size_t>&>(value_))) stop_ = true;
            return;
        }
        for (std::size_t x = 0; x < domains_[v] && !stop_; ++x) {
            const std::size_t mark = trail_.size();
            if (assign(v, x)) search(v + 1, visit);
            undo(mark);
        }
    }

    std::vector<std::size_t> domains_;
    std::vector<Table> maps_;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<Edge>> in_;
    std::vector<std::size_t> value_;
    std::vector<std::size_t> trail_;
    bool stop_ = false;
};

} // namespace optika
