#include "fiberwalk/toric_gb.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fiberwalk::toric {

namespace {

using Vec = std::vector<Count>;

Count total_degree(const Vec& a) { return std::accumulate(a.begin(), a.end(), Count{0}); }

bool divides(const Vec& a, const Vec& b) {  // x^a | x^b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

bool coprime(const Vec& a, const Vec& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

struct Binomial {
    Vec v;           // lead - tail as a kernel vector
    Vec lead, tail;  // disjoint-support exponent vectors
};

void split(const Vec& v, Vec& pos, Vec& neg) {
    pos.assign(v.size(), 0);
    neg.assign(v.size(), 0);
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0) pos[i] = v[i];
        if (v[i] < 0) neg[i] = -v[i];
    }
}

// Orients v so its positive part is the leading monomial. False if v == 0.
bool orient(Binomial& b, const TermOrder& order) {
    split(b.v, b.lead, b.tail);
    const int c = compare_monomials(b.lead, b.tail, order);
    if (c == 0) return false;
    if (c < 0) {
        for (auto& x : b.v) x = -x;
        std::swap(b.lead, b.tail);
    }
    return true;
}

// Full normal form: top- and tail-reduces; returns false when v reduced to 0.
bool normal_form(Binomial& b, const std::vector<Binomial>& G, const TermOrder& order) {
    if (!orient(b, order)) return false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& g : G) {
            if (divides(g.lead, b.lead)) {
                for (size_t i = 0; i < b.v.size(); ++i) b.v[i] -= g.v[i];
                if (!orient(b, order)) return false;
                changed = true;
                break;
            }
            if (divides(g.lead, b.tail)) {
                for (size_t i = 0; i < b.v.size(); ++i) b.v[i] += g.v[i];
                if (!orient(b, order)) return false;
                changed = true;
                break;
            }
        }
    }
    return true;
}

}  // namespace

int compare_monomials(const Vec& a, const Vec& b, const TermOrder& order) {
    if (order.kind != TermOrder::Kind::Lex) {
        const Count da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db ? -1 : 1;
    }
    if (order.kind == TermOrder::Kind::DegRevLex) {
        for (auto it = order.var_order.rbegin(); it != order.var_order.rend(); ++it) {
            if (a[*it] != b[*it]) return a[*it] > b[*it] ? -1 : 1;
        }
        return 0;
    }
    for (int v : order.var_order) {
        if (a[v] != b[v]) return a[v] > b[v] ? 1 : -1;
    }
    return 0;
}

std::vector<Vec> reduced_groebner_basis(const std::vector<Vec>& lattice_gens,
                                        const TermOrder& order) {
    std::vector<Binomial> G;
    for (const auto& v : lattice_gens) {
        if (v.size() != order.var_order.size())
            throw std::invalid_argument("reduced_groebner_basis: generator length mismatch");
        Binomial b{v, {}, {}};
        if (orient(b, order)) G.push_back(std::move(b));
    }
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = i + 1; j < G.size(); ++j) pairs.emplace_back(i, j);

    for (size_t qi = 0; qi < pairs.size(); ++qi) {
        const auto [i, j] = pairs[qi];
        if (coprime(G[i].lead, G[j].lead)) continue;
        Binomial s{Vec(G[i].v.size()), {}, {}};
        for (size_t t = 0; t < s.v.size(); ++t) s.v[t] = G[j].v[t] - G[i].v[t];
        if (!normal_form(s, G, order)) continue;
        const size_t idx = G.size();
        G.push_back(std::move(s));
        for (size_t t = 0; t < idx; ++t) pairs.emplace_back(t, idx);
    }

    // Minimal basis: keep elements whose lead no kept lead divides.
    std::vector<size_t> by_lead(G.size());
    std::iota(by_lead.begin(), by_lead.end(), size_t{0});
    std::sort(by_lead.begin(), by_lead.end(), [&](size_t x, size_t y) {
        const int c = compare_monomials(G[x].lead, G[y].lead, order);
        if (c != 0) return c < 0;
        return G[x].v < G[y].v;
    });
    std::vector<Binomial> minimal;
    for (size_t idx : by_lead) {
        bool divisible = false;
        for (const auto& m : minimal)
            if (divides(m.lead, G[idx].lead)) {
                divisible = true;
                break;
            }
        if (!divisible) minimal.push_back(G[idx]);
    }

    // Tail-reduce each element against the others.
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < minimal.size(); ++i) {
            for (size_t j = 0; j < minimal.size(); ++j) {
                if (i == j) continue;
                if (divides(minimal[j].lead, minimal[i].tail)) {
                    for (size_t t = 0; t < minimal[i].v.size(); ++t)
                        minimal[i].v[t] += minimal[j].v[t];
                    orient(minimal[i], order);
                    changed = true;
                }
            }
        }
    }

    std::vector<Vec> out;
    out.reserve(minimal.size());
    for (auto& b : minimal) out.push_back(std::move(b.v));
    std::sort(out.begin(), out.end());
    return out;
}

TermOrder partial_lift_order(int cell_count, int total_vars) {
    (void)cell_count;
    TermOrder order;
    order.kind = TermOrder::Kind::DegRevLex;
    order.var_order.resize(total_vars);
    std::iota(order.var_order.begin(), order.var_order.end(), 0);
    return order;
}

}  // namespace fiberwalk::toric
