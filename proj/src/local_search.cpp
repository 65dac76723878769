// Copyright 2026 The edgesel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "edgesel/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgesel {

    int move_variants(MoveKind kind) {
        return kind == MoveKind::kRelocate ? 3 : 2;
    }

    TabuEdgeFilter::TabuEdgeFilter(const EdgeSet& fixed, double aspiration_threshold, std::uint64_t seed)
        : fixed_(fixed), p_theta_(aspiration_threshold), rng_(seed) {
        for (const auto& e : fixed_) {
            keys_.insert(e.key());
        }
    }

    BlockResult TabuEdgeFilter::check(const Move& move) {
        BlockResult r;
        if (keys_.empty()) {
            return r;
        }
        for (const auto& e : move.removed()) {
            if (keys_.contains(e.key())) {
                r.blocked = true;
                break;
            }
        }
        if (r.blocked) {
            ++blocked_;
            r.aspired = rng_.uniform01() > p_theta_;
            if (r.aspired) {
                ++aspired_;
            }
        }
        return r;
    }

    namespace {

        // Multiset cancellation of edges that are both removed and re-added, plus the delta over what remains.
        void finalize(const Instance& inst, Move& m, std::span<const Edge> removed, std::span<const Edge> added) {
            std::array<bool, 4> used{};
            m.num_removed = 0;
            m.num_added = 0;
            for (const auto& r : removed) {
                bool cancelled = false;
                for (std::size_t k = 0; k < added.size(); ++k) {
                    if (!used[k] && added[k] == r) {
                        used[k] = true;
                        cancelled = true;
                        break;
                    }
                }
                if (!cancelled) {
                    m.removed_buf[static_cast<std::size_t>(m.num_removed++)] = r;
                }
            }
            for (std::size_t k = 0; k < added.size(); ++k) {
                if (!used[k]) {
                    m.added_buf[static_cast<std::size_t>(m.num_added++)] = added[k];
                }
            }
            double delta = 0.0;
            for (const auto& e : m.added()) {
                delta += inst.distance(e.a, e.b);
            }
            for (const auto& e : m.removed()) {
                delta -= inst.distance(e.a, e.b);
            }
            m.delta = delta;
        }

        struct EdgeList {
            std::array<Edge, 4> e{};
            std::size_t n = 0;
            void push(int i, int j) {
                // Depot-to-depot "edges" of an emptied route do not exist.
                if (i == Instance::depot() && j == Instance::depot()) {
                    return;
                }
                e[n++] = Edge::make(i, j);
            }
            std::span<const Edge> span() const {
                return {e.data(), n};
            }
        };

    }  // namespace

    SearchState::SearchState(const Solution& sol, ConstraintPolicy policy)
        : inst_(&sol.instance()), policy_(policy) {
        const auto n = static_cast<std::size_t>(inst_->size());
        route_of_.assign(n, -1);
        pos_.assign(n, -1);
        for (const auto& r : sol.routes()) {
            routes_.emplace_back();
            prefix_load_.emplace_back();
            loads_.push_back(0);
            lengths_.push_back(0.0);
            warps_.push_back(0.0);
            set_route(static_cast<int>(routes_.size()) - 1, r.customers);
        }
    }

    void SearchState::set_policy(ConstraintPolicy p) {
        policy_ = p;
    }

    void SearchState::set_route(int r, std::vector<int> customers) {
        const auto ri = static_cast<std::size_t>(r);
        distance_cost_ -= lengths_[ri];
        auto& prefix = prefix_load_[ri];
        prefix.resize(customers.size());
        int load = 0;
        for (std::size_t k = 0; k < customers.size(); ++k) {
            const int c = customers[k];
            load += inst_->demand(c);
            prefix[k] = load;
            route_of_[static_cast<std::size_t>(c)] = r;
            pos_[static_cast<std::size_t>(c)] = static_cast<int>(k);
        }
        loads_[ri] = load;
        lengths_[ri] = route_length(*inst_, customers);
        warps_[ri] = inst_->has_time_windows() ? time_warp(*inst_, customers) : 0.0;
        distance_cost_ += lengths_[ri];
        routes_[ri] = std::move(customers);
    }

    Solution SearchState::to_solution() const {
        Solution sol(*inst_);
        for (const auto& r : routes_) {
            sol.add_route(r);
        }
        return sol;
    }

    double SearchState::penalty() const {
        double p = 0.0;
        for (std::size_t r = 0; r < routes_.size(); ++r) {
            p += policy_.capacity_weight * excess(loads_[r]) + policy_.time_warp_weight * warps_[r];
        }
        return policy_.hard ? 0.0 : p;
    }

    bool SearchState::feasible() const {
        for (std::size_t r = 0; r < routes_.size(); ++r) {
            if (loads_[r] > inst_->capacity() || warps_[r] > 0.0) {
                return false;
            }
        }
        return true;
    }

    int SearchState::num_routes() const {
        return static_cast<int>(std::ranges::count_if(routes_, [](const auto& r) { return !r.empty(); }));
    }

    int SearchState::pred(int c) const {
        const int p = pos(c);
        return p > 0 ? routes_[static_cast<std::size_t>(route_of(c))][static_cast<std::size_t>(p - 1)] : 0;
    }

    int SearchState::succ(int c) const {
        const auto& r = routes_[static_cast<std::size_t>(route_of(c))];
        const auto p = static_cast<std::size_t>(pos(c));
        return p + 1 < r.size() ? r[p + 1] : 0;
    }

    std::optional<Move> SearchState::make_move(MoveKind kind, int u, int v, int variant) const {
        if (u <= 0 || u == v || route_of(u) < 0) {
            return std::nullopt;
        }
        Move m;
        m.kind = kind;
        m.u = u;
        m.v = v;
        m.variant = variant;
        EdgeList removed;
        EdgeList added;
        const int pu = pred(u);
        const int su = succ(u);

        switch (kind) {
            case MoveKind::kRelocate: {
                if (variant == 2) {
                    if (v != Instance::depot() || (pu == 0 && su == 0)) {
                        return std::nullopt;
                    }
                    removed.push(pu, u);
                    removed.push(u, su);
                    added.push(pu, su);
                    added.push(0, u);
                    added.push(u, 0);
                    break;
                }
                if (v == Instance::depot()) {
                    return std::nullopt;
                }
                const int a = variant == 0 ? v : pred(v);
                const int b = variant == 0 ? succ(v) : v;
                if (a == u || b == u) {
                    return std::nullopt;
                }
                removed.push(pu, u);
                removed.push(u, su);
                removed.push(a, b);
                added.push(pu, su);
                added.push(a, u);
                added.push(u, b);
                break;
            }
            case MoveKind::kSwap: {
                if (v == Instance::depot()) {
                    return std::nullopt;
                }
                const int w = variant == 0 ? succ(v) : pred(v);
                if (w == Instance::depot() || w == u) {
                    return std::nullopt;
                }
                m.v = w;
                const int pw = pred(w);
                const int sw = succ(w);
                if (route_of(u) == route_of(w) && w == su) {
                    removed.push(pu, u);
                    removed.push(w, sw);
                    added.push(pu, w);
                    added.push(u, sw);
                } else if (route_of(u) == route_of(w) && w == pu) {
                    removed.push(pw, w);
                    removed.push(u, su);
                    added.push(pw, u);
                    added.push(w, su);
                } else {
                    removed.push(pu, u);
                    removed.push(u, su);
                    removed.push(pw, w);
                    removed.push(w, sw);
                    added.push(pu, w);
                    added.push(w, su);
                    added.push(pw, u);
                    added.push(u, sw);
                }
                // Keep the granular anchor so that rebuild() knows the swap partner.
                break;
            }
            case MoveKind::kTwoOpt: {
                if (v == Instance::depot() || route_of(u) != route_of(v)) {
                    return std::nullopt;
                }
                const int x = pos(u) < pos(v) ? u : v;
                const int y = x == u ? v : u;
                if (variant == 0) {
                    const int sx = succ(x);
                    if (sx == y) {
                        return std::nullopt;
                    }
                    removed.push(x, sx);
                    removed.push(y, succ(y));
                    added.push(x, y);
                    added.push(sx, succ(y));
                } else {
                    const int py = pred(y);
                    if (py == x) {
                        return std::nullopt;
                    }
                    removed.push(pred(x), x);
                    removed.push(py, y);
                    added.push(pred(x), py);
                    added.push(x, y);
                }
                break;
            }
            case MoveKind::kTwoOptStar: {
                if (v == Instance::depot() || route_of(u) == route_of(v)) {
                    return std::nullopt;
                }
                if (variant == 0) {
                    const int pv = pred(v);
                    removed.push(u, su);
                    removed.push(pv, v);
                    added.push(u, v);
                    added.push(pv, su);
                } else {
                    const int sv = succ(v);
                    removed.push(u, su);
                    removed.push(v, sv);
                    added.push(u, v);
                    added.push(su, sv);
                }
                break;
            }
        }
        finalize(*inst_, m, removed.span(), added.span());
        if (m.num_removed == 0 && m.num_added == 0) {
            return std::nullopt;
        }
        return m;
    }

    std::array<SearchState::RouteChange, 2> SearchState::rebuild(const Move& m, int& count) const {
        std::array<RouteChange, 2> out{};
        const int u = m.u;
        const int ru = route_of(u);
        const auto& a = routes_[static_cast<std::size_t>(ru)];
        const auto pu = static_cast<std::size_t>(pos(u));
        count = 0;

        switch (m.kind) {
            case MoveKind::kRelocate: {
                std::vector<int> without = a;
                without.erase(without.begin() + static_cast<std::ptrdiff_t>(pu));
                if (m.variant == 2) {
                    out[0] = {ru, std::move(without)};
                    out[1] = {-1, {u}};
                    count = 2;
                    break;
                }
                const int rv = route_of(m.v);
                const int anchor = m.variant == 0 ? m.v : pred(m.v);
                auto insert_into = [&](std::vector<int> seq) {
                    if (anchor == Instance::depot()) {
                        const auto it = std::ranges::find(seq, m.v);
                        seq.insert(it, u);
                    } else {
                        const auto it = std::ranges::find(seq, anchor);
                        seq.insert(it + 1, u);
                    }
                    return seq;
                };
                if (rv == ru) {
                    out[0] = {ru, insert_into(std::move(without))};
                    count = 1;
                } else {
                    out[0] = {ru, std::move(without)};
                    out[1] = {rv, insert_into(routes_[static_cast<std::size_t>(rv)])};
                    count = 2;
                }
                break;
            }
            case MoveKind::kSwap: {
                const int w = m.v;
                const int rw = route_of(w);
                if (rw == ru) {
                    std::vector<int> seq = a;
                    std::swap(seq[pu], seq[static_cast<std::size_t>(pos(w))]);
                    out[0] = {ru, std::move(seq)};
                    count = 1;
                } else {
                    std::vector<int> sa = a;
                    std::vector<int> sb = routes_[static_cast<std::size_t>(rw)];
                    sa[pu] = w;
                    sb[static_cast<std::size_t>(pos(w))] = u;
                    out[0] = {ru, std::move(sa)};
                    out[1] = {rw, std::move(sb)};
                    count = 2;
                }
                break;
            }
            case MoveKind::kTwoOpt: {
                std::vector<int> seq = a;
                const auto px = static_cast<std::size_t>(std::min(pos(u), pos(m.v)));
                const auto py = static_cast<std::size_t>(std::max(pos(u), pos(m.v)));
                if (m.variant == 0) {
                    std::reverse(seq.begin() + static_cast<std::ptrdiff_t>(px + 1),
                                 seq.begin() + static_cast<std::ptrdiff_t>(py + 1));
                } else {
                    std::reverse(seq.begin() + static_cast<std::ptrdiff_t>(px),
                                 seq.begin() + static_cast<std::ptrdiff_t>(py));
                }
                out[0] = {ru, std::move(seq)};
                count = 1;
                break;
            }
            case MoveKind::kTwoOptStar: {
                const int rv = route_of(m.v);
                const auto& b = routes_[static_cast<std::size_t>(rv)];
                const auto pv = static_cast<std::size_t>(pos(m.v));
                std::vector<int> na(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(pu + 1));
                std::vector<int> nb;
                if (m.variant == 0) {
                    na.insert(na.end(), b.begin() + static_cast<std::ptrdiff_t>(pv), b.end());
                    nb.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(pv));
                    nb.insert(nb.end(), a.begin() + static_cast<std::ptrdiff_t>(pu + 1), a.end());
                } else {
                    na.insert(na.end(), std::make_reverse_iterator(b.begin() + static_cast<std::ptrdiff_t>(pv + 1)),
                              b.rend());
                    nb.assign(a.rbegin(), std::make_reverse_iterator(a.begin() + static_cast<std::ptrdiff_t>(pu + 1)));
                    nb.insert(nb.end(), b.begin() + static_cast<std::ptrdiff_t>(pv + 1), b.end());
                }
                out[0] = {ru, std::move(na)};
                out[1] = {rv, std::move(nb)};
                count = 2;
                break;
            }
        }
        return out;
    }

    int SearchState::new_route_load(const Move& m, int which) const {
        const int u = m.u;
        const int ru = route_of(u);
        const int qu = inst_->demand(u);
        const int la = loads_[static_cast<std::size_t>(ru)];
        switch (m.kind) {
            case MoveKind::kRelocate:
                if (m.variant == 2) {
                    return which == 0 ? la - qu : qu;
                }
                return which == 0 ? la - qu : loads_[static_cast<std::size_t>(route_of(m.v))] + qu;
            case MoveKind::kSwap: {
                const int qw = inst_->demand(m.v);
                return which == 0 ? la - qu + qw : loads_[static_cast<std::size_t>(route_of(m.v))] - qw + qu;
            }
            case MoveKind::kTwoOpt:
                return la;
            case MoveKind::kTwoOptStar: {
                const int rv = route_of(m.v);
                const int lb = loads_[static_cast<std::size_t>(rv)];
                const int pre_u = prefix_load_[static_cast<std::size_t>(ru)][static_cast<std::size_t>(pos(u))];
                const int pre_v = prefix_load_[static_cast<std::size_t>(rv)][static_cast<std::size_t>(pos(m.v))];
                if (m.variant == 0) {
                    const int pre_pv = pre_v - inst_->demand(m.v);
                    return which == 0 ? pre_u + (lb - pre_pv) : pre_pv + (la - pre_u);
                }
                return which == 0 ? pre_u + pre_v : (la - pre_u) + (lb - pre_v);
            }
        }
        return 0;
    }

    SearchState::MoveEval SearchState::evaluate(const Move& m) const {
        MoveEval ev;
        ev.penalized_delta = m.delta;
        const int ru = route_of(m.u);
        const bool two_routes = (m.kind == MoveKind::kRelocate && (m.variant == 2 || route_of(m.v) != ru)) ||
                                (m.kind == MoveKind::kSwap && route_of(m.v) != ru) || m.kind == MoveKind::kTwoOptStar;
        const int rv = m.kind == MoveKind::kRelocate && m.variant == 2 ? -1 : route_of(m.v);

        if (two_routes) {
            const int na = new_route_load(m, 0);
            const int nb = new_route_load(m, 1);
            const int oa = loads_[static_cast<std::size_t>(ru)];
            const int ob = rv >= 0 ? loads_[static_cast<std::size_t>(rv)] : 0;
            if (policy_.hard) {
                if ((na > inst_->capacity() && na > oa) || (nb > inst_->capacity() && nb > ob)) {
                    ev.feasible = false;
                    return ev;
                }
            } else {
                ev.penalized_delta += policy_.capacity_weight * (excess(na) + excess(nb) - excess(oa) - excess(ob));
            }
        }

        if (inst_->has_time_windows()) {
            int count = 0;
            const auto changes = rebuild(m, count);
            double old_warp = 0.0;
            double new_warp = 0.0;
            for (int k = 0; k < count; ++k) {
                const auto& ch = changes[static_cast<std::size_t>(k)];
                if (ch.route >= 0) {
                    old_warp += warps_[static_cast<std::size_t>(ch.route)];
                }
                const double w = time_warp(*inst_, ch.customers);
                if (policy_.hard && w > 0.0 &&
                    (ch.route < 0 || w > warps_[static_cast<std::size_t>(ch.route)])) {
                    ev.feasible = false;
                    return ev;
                }
                new_warp += w;
            }
            if (!policy_.hard) {
                ev.penalized_delta += policy_.time_warp_weight * (new_warp - old_warp);
            }
        }
        return ev;
    }

    void SearchState::apply(const Move& m) {
        int count = 0;
        auto changes = rebuild(m, count);
        for (int k = 0; k < count; ++k) {
            auto& ch = changes[static_cast<std::size_t>(k)];
            int r = ch.route;
            if (r < 0) {
                const auto it = std::ranges::find_if(routes_, [](const auto& seq) { return seq.empty(); });
                if (it != routes_.end()) {
                    r = static_cast<int>(it - routes_.begin());
                } else {
                    routes_.emplace_back();
                    prefix_load_.emplace_back();
                    loads_.push_back(0);
                    lengths_.push_back(0.0);
                    warps_.push_back(0.0);
                    r = static_cast<int>(routes_.size()) - 1;
                }
            }
            set_route(r, std::move(ch.customers));
        }
    }

    std::vector<Move> enumerate_moves(const Solution& sol, MoveKind kind, int gamma) {
        std::vector<Move> out;
        if (gamma <= 0) {
            return out;
        }
        const SearchState state(sol);
        const auto& inst = sol.instance();
        for (int u = 1; u < inst.size(); ++u) {
            const auto nbrs = inst.neighbors(u);
            const auto limit = std::min<std::size_t>(nbrs.size(), static_cast<std::size_t>(gamma));
            for (std::size_t r = 0; r < limit; ++r) {
                for (int var = 0; var < move_variants(kind); ++var) {
                    if (auto m = state.make_move(kind, u, nbrs[r], var)) {
                        out.push_back(*m);
                    }
                }
            }
        }
        return out;
    }

    Solution apply_move(const Solution& sol, const Move& move) {
        SearchState state(sol);
        state.apply(move);
        return state.to_solution();
    }

    namespace {
        constexpr double kImprovementEps = 1e-9;
    }

    std::size_t descend(SearchState& state, TabuEdgeFilter* filter, const SearchOptions& options) {
        const auto& inst = state.instance();
        std::vector<int> order(static_cast<std::size_t>(inst.num_customers()));
        std::iota(order.begin(), order.end(), 1);
        Rng rng(options.seed);
        std::size_t applied = 0;
        if (options.gamma <= 0 || options.kinds.empty()) {
            return 0;
        }
        bool improved = true;
        while (improved) {
            improved = false;
            if (options.shuffle) {
                rng.shuffle(order);
            }
            for (int u : order) {
                const auto nbrs = inst.neighbors(u);
                const auto limit = std::min<std::size_t>(nbrs.size(), static_cast<std::size_t>(options.gamma));
                for (std::size_t r = 0; r < limit; ++r) {
                    const int v = nbrs[r];
                    for (const auto kind : options.kinds) {
                        for (int var = 0; var < move_variants(kind); ++var) {
                            const auto m = state.make_move(kind, u, v, var);
                            if (!m) {
                                continue;
                            }
                            const auto ev = state.evaluate(*m);
                            if (!ev.feasible || ev.penalized_delta >= -kImprovementEps) {
                                continue;
                            }
                            if (filter && !filter->check(*m).allowed()) {
                                continue;
                            }
                            state.apply(*m);
                            ++applied;
                            improved = true;
                            if (options.on_accept) {
                                options.on_accept(state, *m);
                            }
                        }
                    }
                }
            }
        }
        return applied;
    }

    namespace {
        void anneal(SearchState& state, TabuEdgeFilter* filter, const SearchOptions& options, Rng& rng) {
            const auto& inst = state.instance();
            const auto& p = options.annealing;
            double temperature = p.initial_temperature > 0.0
                                     ? p.initial_temperature
                                     : 0.1 * state.penalized_cost() / std::max(1, inst.num_customers());
            const int gamma = std::min(options.gamma, inst.neighbor_count());
            if (gamma <= 0 || options.kinds.empty()) {
                return;
            }
            for (int step = 0; step < p.steps; ++step) {
                const int u = rng.uniform_int(1, inst.num_customers());
                const int v = inst.neighbors(u)[static_cast<std::size_t>(rng.uniform_int(0, gamma - 1))];
                const auto kind =
                    options.kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(options.kinds.size()) - 1))];
                const auto m = state.make_move(kind, u, v, rng.uniform_int(0, move_variants(kind) - 1));
                if (!m) {
                    continue;
                }
                const auto ev = state.evaluate(*m);
                if (!ev.feasible) {
                    continue;
                }
                const bool accept =
                    ev.penalized_delta < 0.0 || rng.uniform01() < std::exp(-ev.penalized_delta / temperature);
                if (!accept || (filter && !filter->check(*m).allowed())) {
                    continue;
                }
                state.apply(*m);
                temperature = std::max(p.floor, temperature * p.cooling);
                if (options.on_accept) {
                    options.on_accept(state, *m);
                }
            }
        }
    }  // namespace

    Solution descend(const Solution& sol, TabuEdgeFilter* filter, const SearchOptions& options) {
        SearchState state(sol, options.policy);
        if (options.acceptance == Acceptance::kSimulatedAnnealing) {
            Rng rng(options.seed ^ 0x5a5a5a5aULL);
            anneal(state, filter, options, rng);
        }
        descend(state, filter, options);
        return state.to_solution();
    }

    std::size_t random_walk(SearchState& state, TabuEdgeFilter* filter, int steps, int gamma, Rng& rng,
                            std::span<const MoveKind> kinds) {
        const auto& inst = state.instance();
        gamma = std::min(gamma, inst.neighbor_count());
        if (gamma <= 0 || kinds.empty()) {
            return 0;
        }
        std::size_t applied = 0;
        // Bounded number of attempts so heavily constrained states cannot stall the walk.
        const int attempts = steps * 20;
        for (int a = 0; a < attempts && static_cast<int>(applied) < steps; ++a) {
            const int u = rng.uniform_int(1, inst.num_customers());
            const int v = inst.neighbors(u)[static_cast<std::size_t>(rng.uniform_int(0, gamma - 1))];
            const auto kind = kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(kinds.size()) - 1))];
            const auto m = state.make_move(kind, u, v, rng.uniform_int(0, move_variants(kind) - 1));
            if (!m || !state.evaluate(*m).feasible) {
                continue;
            }
            if (filter && !filter->check(*m).allowed()) {
                continue;
            }
            state.apply(*m);
            ++applied;
        }
        return applied;
    }

}  // namespace edgesel
