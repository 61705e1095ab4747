#include "fiberwalk/lattice.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>

#include "fiberwalk/toric_gb.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fiberwalk {

using boost::multiprecision::cpp_int;

IntMatrix IntMatrix::identity(int n) {
    IntMatrix M = zero(n, n);
    for (int i = 0; i < n; ++i) M.at(i, i) = 1;
    return M;
}

IntMatrix IntMatrix::from_design(const DesignMatrix& A) {
    return IntMatrix{A.s, A.k, A.entries};
}

namespace {

using BigRow = std::vector<cpp_int>;

// Row reduction of [A^T | I] over the first `lead` columns by Euclidean
// pivoting. Returns the pivot count; rows whose lead part vanished hold a
// kernel basis of A in their identity part.
int reduce_transpose(std::vector<BigRow>& W, int lead) {
    const int n = static_cast<int>(W.size());
    int pivot_row = 0;
    for (int col = 0; col < lead && pivot_row < n; ++col) {
        while (true) {
            int best = -1;
            for (int r = pivot_row; r < n; ++r)
                if (W[r][col] != 0 &&
                    (best < 0 || abs(W[r][col]) < abs(W[best][col])))
                    best = r;
            if (best < 0) break;
            std::swap(W[best], W[pivot_row]);
            bool others = false;
            for (int r = pivot_row + 1; r < n; ++r) {
                if (W[r][col] == 0) continue;
                cpp_int q = W[r][col] / W[pivot_row][col];
                if (q != 0)
                    for (size_t c = 0; c < W[r].size(); ++c) W[r][c] -= q * W[pivot_row][c];
                if (W[r][col] != 0) others = true;
            }
            if (!others) {
                ++pivot_row;
                break;
            }
        }
    }
    return pivot_row;
}

Count to_count(const cpp_int& v) {
    if (v > std::numeric_limits<Count>::max() || v < std::numeric_limits<Count>::min())
        throw std::overflow_error("lattice: entry exceeds 64-bit range");
    return static_cast<Count>(v);
}

}  // namespace

int int_rank(const IntMatrix& A) {
    std::vector<BigRow> W(A.cols, BigRow(A.rows));
    for (int r = 0; r < A.rows; ++r)
        for (int c = 0; c < A.cols; ++c) W[c][r] = A.at(r, c);
    return reduce_transpose(W, A.rows);
}

std::vector<LatticeVector> kernel_basis(const IntMatrix& A) {
    const int k = A.cols, s = A.rows;
    std::vector<BigRow> W(k, BigRow(s + k));
    for (int c = 0; c < k; ++c) {
        for (int r = 0; r < s; ++r) W[c][r] = A.at(r, c);
        W[c][s + c] = 1;
    }
    const int rank = reduce_transpose(W, s);
    std::vector<LatticeVector> basis;
    for (int r = rank; r < k; ++r) {
        LatticeVector v(k);
        for (int c = 0; c < k; ++c) v[c] = to_count(W[r][s + c]);
        // orientation only; basis rows of a saturated lattice are primitive
        for (int c = 0; c < k; ++c) {
            if (v[c] == 0) continue;
            if (v[c] < 0)
                for (auto& x : v) x = -x;
            break;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

IntMatrix lawrence_lift(const IntMatrix& A) {
    const int s = A.rows, k = A.cols;
    IntMatrix L = IntMatrix::zero(s + k, 2 * k);
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < k; ++c) L.at(r, c) = A.at(r, c);
    for (int h = 0; h < k; ++h) {
        L.at(s + h, h) = 1;
        L.at(s + h, k + h) = 1;
    }
    return L;
}

LiftSpec LiftSpec::all_bounded(IntMatrix A) {
    std::vector<int> all(A.cols);
    std::iota(all.begin(), all.end(), 0);
    return LiftSpec{std::move(A), std::move(all)};
}

IntMatrix partial_lawrence_lift(const LiftSpec& spec) {
    const auto& B = spec.bounded_cells;
    for (size_t t = 0; t < B.size(); ++t) {
        if (B[t] < 0 || B[t] >= spec.base.cols)
            throw std::invalid_argument("partial_lawrence_lift: bounded cell out of range");
        if (t > 0 && B[t] <= B[t - 1])
            throw std::invalid_argument("partial_lawrence_lift: cells must be sorted unique");
    }
    const int s = spec.base.rows, k = spec.base.cols, nb = static_cast<int>(B.size());
    IntMatrix L = IntMatrix::zero(s + nb, k + nb);
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < k; ++c) L.at(r, c) = spec.base.at(r, c);
    for (int t = 0; t < nb; ++t) {
        L.at(s + t, B[t]) = 1;
        L.at(s + t, k + t) = 1;
    }
    return L;
}

namespace detail {

bool conformal_dominates(const LatticeVector& g, const LatticeVector& v) {
    for (size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0) continue;
        if (g[i] > 0 && v[i] < g[i]) return false;
        if (g[i] < 0 && v[i] > g[i]) return false;
    }
    return true;
}

MoveSet vectors_to_moveset(std::vector<LatticeVector> vecs, int k) {
    MoveSet out{0, 0, k, {}};
    out.moves.reserve(vecs.size());
    for (auto& v : vecs) out.moves.push_back(make_move_dense(v));
    out.normalize();
    return out;
}

}  // namespace detail

namespace {

Count one_norm(const LatticeVector& v) {
    Count n = 0;
    for (Count x : v) n += std::abs(x);
    return n;
}

bool is_zero(const LatticeVector& v) {
    return std::all_of(v.begin(), v.end(), [](Count x) { return x == 0; });
}

void canonical_sign(LatticeVector& v) {
    for (Count x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        return;
    }
}

bool vec_less(const LatticeVector& a, const LatticeVector& b) {
    const Count na = one_norm(a), nb = one_norm(b);
    if (na != nb) return na < nb;
    return a < b;
}

// True when f and g never clash in sign; their sum then reduces trivially.
bool conformal_pair(const LatticeVector& f, const LatticeVector& g) {
    for (size_t i = 0; i < f.size(); ++i)
        if ((f[i] > 0 && g[i] < 0) || (f[i] < 0 && g[i] > 0)) return false;
    return true;
}

// Reduce v by sign-compatible subtraction against G (either sign of each g).
// Returns the fully reduced vector (possibly zero).
void normal_form(LatticeVector& v, const std::vector<LatticeVector>& G) {
    bool changed = true;
    while (changed && !is_zero(v)) {
        changed = false;
        for (const auto& g : G) {
            if (detail::conformal_dominates(g, v)) {
                for (size_t i = 0; i < v.size(); ++i) v[i] -= g[i];
                changed = true;
                break;
            }
            bool neg = true;
            for (size_t i = 0; i < g.size(); ++i) {
                if (g[i] == 0) continue;
                if (g[i] > 0 ? v[i] > -g[i] : v[i] < -g[i]) {
                    neg = false;
                    break;
                }
            }
            if (neg && !is_zero(g)) {
                for (size_t i = 0; i < v.size(); ++i) v[i] += g[i];
                changed = true;
                break;
            }
        }
    }
}

std::vector<LatticeVector> completion_seeds(const IntMatrix& A) {
    auto seeds = kernel_basis(A);
    for (auto& v : seeds) canonical_sign(v);
    std::sort(seeds.begin(), seeds.end(), vec_less);
    return seeds;
}

void check_cap(const LatticeVector& v, Count norm_cap, size_t basis_size) {
    if (one_norm(v) > norm_cap)
        throw CapExceeded("graver_basis: intermediate 1-norm exceeded cap " +
                              std::to_string(norm_cap) + " (set incomplete)",
                          static_cast<std::int64_t>(basis_size));
}

// Keep only vectors not dominated by another element (either sign).
std::vector<LatticeVector> minimal_filter(std::vector<LatticeVector> G) {
    std::sort(G.begin(), G.end(), vec_less);
    G.erase(std::unique(G.begin(), G.end()), G.end());
    const size_t n = G.size();
    std::vector<char> keep(n, 1);
#pragma omp parallel for schedule(dynamic)
    for (size_t i = 0; i < n; ++i) {
        LatticeVector neg = G[i];
        for (auto& x : neg) x = -x;
        for (size_t j = 0; j < n && keep[i]; ++j) {
            if (j == i) continue;
            if (detail::conformal_dominates(G[j], G[i]) || detail::conformal_dominates(G[j], neg))
                keep[i] = 0;
        }
    }
    std::vector<LatticeVector> out;
    for (size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(std::move(G[i]));
    return out;
}

}  // namespace

MoveSet graver_basis_serial(const IntMatrix& A, Count norm_cap) {
    std::vector<LatticeVector> G;
    for (auto& s : completion_seeds(A)) {
        normal_form(s, G);
        if (!is_zero(s)) {
            canonical_sign(s);
            G.push_back(std::move(s));
        }
    }
    std::vector<std::pair<size_t, size_t>> queue;
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = i + 1; j < G.size(); ++j) queue.emplace_back(i, j);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const auto [i, j] = queue[qi];
        for (int variant = 0; variant < 2; ++variant) {
            LatticeVector v(G[i].size());
            const int sg = variant == 0 ? 1 : -1;
            LatticeVector other = G[j];
            if (sg < 0)
                for (auto& x : other) x = -x;
            if (conformal_pair(G[i], other)) continue;
            for (size_t t = 0; t < v.size(); ++t) v[t] = G[i][t] + other[t];
            normal_form(v, G);
            if (is_zero(v)) continue;
            check_cap(v, norm_cap, G.size());
            canonical_sign(v);
            const size_t idx = G.size();
            G.push_back(std::move(v));
            for (size_t t = 0; t < idx; ++t) queue.emplace_back(t, idx);
        }
    }
    return detail::vectors_to_moveset(minimal_filter(std::move(G)), A.cols);
}

MoveSet graver_basis(const IntMatrix& A, Count norm_cap) {
    std::vector<LatticeVector> G;
    for (auto& s : completion_seeds(A)) {
        normal_form(s, G);
        if (!is_zero(s)) {
            canonical_sign(s);
            G.push_back(std::move(s));
        }
    }
    std::vector<std::pair<size_t, size_t>> frontier;
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = i + 1; j < G.size(); ++j) frontier.emplace_back(i, j);

    while (!frontier.empty()) {
        // Evaluate the whole round against a snapshot, then insert in a
        // canonical order so the result is thread-count independent.
        const std::vector<LatticeVector> snapshot = G;
        std::vector<LatticeVector> found;
#pragma omp parallel
        {
            std::vector<LatticeVector> local;
#pragma omp for schedule(dynamic, 16) nowait
            for (size_t qi = 0; qi < frontier.size(); ++qi) {
                const auto [i, j] = frontier[qi];
                for (int variant = 0; variant < 2; ++variant) {
                    LatticeVector other = snapshot[j];
                    if (variant == 1)
                        for (auto& x : other) x = -x;
                    if (conformal_pair(snapshot[i], other)) continue;
                    LatticeVector v(other.size());
                    for (size_t t = 0; t < v.size(); ++t) v[t] = snapshot[i][t] + other[t];
                    normal_form(v, snapshot);
                    if (!is_zero(v)) {
                        canonical_sign(v);
                        local.push_back(std::move(v));
                    }
                }
            }
#pragma omp critical
            found.insert(found.end(), std::make_move_iterator(local.begin()),
                         std::make_move_iterator(local.end()));
        }
        std::sort(found.begin(), found.end(), vec_less);
        found.erase(std::unique(found.begin(), found.end()), found.end());

        frontier.clear();
        for (auto& v : found) {
            normal_form(v, G);
            if (is_zero(v)) continue;
            check_cap(v, norm_cap, G.size());
            canonical_sign(v);
            const size_t idx = G.size();
            G.push_back(std::move(v));
            for (size_t t = 0; t < idx; ++t) frontier.emplace_back(t, idx);
        }
    }
    return detail::vectors_to_moveset(minimal_filter(std::move(G)), A.cols);
}

namespace {

// Fraction-free determinant, exact.
cpp_int bareiss_det(std::vector<BigRow> M) {
    const int n = static_cast<int>(M.size());
    if (n == 0) return 1;
    cpp_int prev = 1;
    int sign = 1;
    for (int t = 0; t < n - 1; ++t) {
        int pivot = -1;
        for (int r = t; r < n; ++r)
            if (M[r][t] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return 0;
        if (pivot != t) {
            std::swap(M[pivot], M[t]);
            sign = -sign;
        }
        for (int r = t + 1; r < n; ++r) {
            for (int c = t + 1; c < n; ++c)
                M[r][c] = (M[r][c] * M[t][t] - M[r][t] * M[t][c]) / prev;
            M[r][t] = 0;
        }
        prev = M[t][t];
    }
    return sign * M[n - 1][n - 1];
}

// Independent row indices spanning the row space.
std::vector<int> row_basis(const IntMatrix& A) {
    std::vector<int> rows;
    std::vector<BigRow> W;
    for (int r = 0; r < A.rows; ++r) {
        BigRow cand(A.cols);
        for (int c = 0; c < A.cols; ++c) cand[c] = A.at(r, c);
        std::vector<BigRow> trial = W;
        trial.push_back(cand);
        std::vector<BigRow> work = trial;
        if (reduce_transpose(work, A.cols) == static_cast<int>(trial.size())) {
            W = std::move(trial);
            rows.push_back(r);
        }
    }
    return rows;
}

std::int64_t binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    cpp_int b = 1;
    for (int t = 0; t < r; ++t) b = b * (n - t) / (t + 1);
    if (b > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(b);
}

// idx-th r-subset of {0..n-1} in lexicographic order.
std::vector<int> unrank_subset(std::int64_t idx, int n, int r) {
    std::vector<int> out;
    int start = 0;
    for (int pos = 0; pos < r; ++pos) {
        for (int v = start; v <= n - (r - pos); ++v) {
            const std::int64_t block = binomial(n - v - 1, r - pos - 1);
            if (idx < block) {
                out.push_back(v);
                start = v + 1;
                break;
            }
            idx -= block;
        }
    }
    return out;
}

}  // namespace

MoveSet circuits_general(const IntMatrix& A, std::int64_t subset_limit) {
    const int k = A.cols;
    const std::vector<int> rows = row_basis(A);
    const int r = static_cast<int>(rows.size());
    MoveSet out{0, 0, k, {}};
    if (r >= k) return out;  // trivial kernel
    const std::int64_t nsub = binomial(k, r + 1);
    if (nsub > subset_limit)
        throw CapExceeded("circuits_general: C(k, rank+1) = " + std::to_string(nsub) +
                              " exceeds subset limit " + std::to_string(subset_limit),
                          nsub);

    std::vector<std::vector<Move>> buckets(static_cast<size_t>(nsub));
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t idx = 0; idx < nsub; ++idx) {
        const std::vector<int> S = unrank_subset(idx, k, r + 1);
        std::vector<cpp_int> coeff(r + 1);
        bool all_zero = true;
        for (int drop = 0; drop <= r; ++drop) {
            std::vector<BigRow> M(r, BigRow(r));
            for (int rr = 0; rr < r; ++rr) {
                int cc = 0;
                for (int t = 0; t <= r; ++t) {
                    if (t == drop) continue;
                    M[rr][cc++] = A.at(rows[rr], S[t]);
                }
            }
            coeff[drop] = (drop % 2 == 0 ? 1 : -1) * bareiss_det(std::move(M));
            if (coeff[drop] != 0) all_zero = false;
        }
        if (all_zero) continue;
        cpp_int g = 0;
        for (const auto& c : coeff) g = gcd(g, abs(c));
        LatticeVector v(k, 0);
        for (int t = 0; t <= r; ++t) v[S[t]] = to_count(coeff[t] / g);
        canonical_sign(v);
        buckets[idx].push_back(make_move_dense(v));
    }
    for (auto& b : buckets)
        out.moves.insert(out.moves.end(), std::make_move_iterator(b.begin()),
                         std::make_move_iterator(b.end()));
    out.normalize();
    return out;
}

UniversalBasisResult universal_markov_basis(const LiftSpec& spec, Count norm_cap) {
    const int k = spec.base.cols;
    UniversalBasisResult result;
    if (spec.bounded_cells.empty() ||
        static_cast<int>(spec.bounded_cells.size()) == k) {
        // Full Lawrence lifting: the Graver basis of the lift is the Graver
        // basis of the base with slack parts -g, so compute on the base. The
        // unbounded case degenerates to the base matrix as well.
        MoveSet g = graver_basis(spec.base, norm_cap);
        result.pre_dedupe_count = static_cast<std::int64_t>(g.size());
        result.moves = std::move(g);
        return result;
    }
    // Partially bounded: the projected Graver basis of the lift collapses to
    // the unbounded Graver basis, so it over-reports. Use the reduced
    // Groebner basis of the lift's lattice ideal instead (see toric_gb).
    const IntMatrix L = partial_lawrence_lift(spec);
    const MoveSet lifted = graver_basis(L, norm_cap);
    std::vector<LatticeVector> gens;
    gens.reserve(lifted.size());
    for (const auto& m : lifted.moves) gens.push_back(to_dense(m, L.cols));
    const auto gb = toric::reduced_groebner_basis(gens, toric::partial_lift_order(k, L.cols));
    MoveSet out{0, 0, k, {}};
    for (const auto& v : gb) {
        LatticeVector cellpart(v.begin(), v.begin() + k);
        if (is_zero(cellpart)) continue;
        out.moves.push_back(make_move_dense(cellpart));
    }
    result.pre_dedupe_count = static_cast<std::int64_t>(out.moves.size());
    out.normalize();
    result.moves = std::move(out);
    return result;
}

}  // namespace fiberwalk
