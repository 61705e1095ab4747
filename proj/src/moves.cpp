#include "fiberwalk/moves.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fiberwalk {

Count Move::degree() const {
    Count d = 0;
    for (const auto& [h, v] : cells)
        if (v > 0) d += v;
    return d;
}

bool Move::touches(int cell_index) const {
    for (const auto& [h, v] : cells)
        if (h == cell_index) return v != 0;
    return false;
}

Move Move::negated() const {
    Move out = *this;
    for (auto& [h, v] : out.cells) v = -v;
    return out;
}

Move make_move(const std::vector<std::pair<int, Count>>& deltas) {
    std::map<int, Count> acc;
    for (const auto& [h, v] : deltas) acc[h] += v;
    Move m;
    for (const auto& [h, v] : acc)
        if (v != 0) m.cells.emplace_back(h, v);
    if (!m.cells.empty() && m.cells.front().second < 0)
        for (auto& [h, v] : m.cells) v = -v;
    return m;
}

Move make_move_dense(const std::vector<Count>& dense) {
    std::vector<std::pair<int, Count>> deltas;
    for (size_t h = 0; h < dense.size(); ++h)
        if (dense[h] != 0) deltas.emplace_back(static_cast<int>(h), dense[h]);
    return make_move(deltas);
}

std::vector<Count> to_dense(const Move& m, int k) {
    std::vector<Count> out(k, 0);
    for (const auto& [h, v] : m.cells) out.at(h) = v;
    return out;
}

bool move_less(const Move& a, const Move& b) {
    const Count da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    if (a.cells.size() != b.cells.size()) return a.cells.size() < b.cells.size();
    for (size_t t = 0; t < a.cells.size(); ++t) {
        if (a.cells[t].first != b.cells[t].first) return a.cells[t].first < b.cells[t].first;
    }
    for (size_t t = 0; t < a.cells.size(); ++t) {
        if (a.cells[t].second != b.cells[t].second) return a.cells[t].second < b.cells[t].second;
    }
    return false;
}

void MoveSet::normalize() {
    std::sort(moves.begin(), moves.end(), move_less);
    moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
}

std::map<int, std::int64_t> MoveSet::support_histogram() const {
    std::map<int, std::int64_t> h;
    for (const auto& m : moves) ++h[m.support_size()];
    return h;
}

bool in_kernel(const Move& m, const DesignMatrix& A) {
    for (int r = 0; r < A.s; ++r) {
        Count acc = 0;
        for (const auto& [h, v] : m.cells) acc += A.at(r, h) * v;
        if (acc != 0) return false;
    }
    return true;
}

MoveSet basic_moves(Shape shape) {
    if (shape.rows < 1 || shape.cols < 1)
        throw std::invalid_argument("basic_moves: degenerate shape");
    MoveSet out{shape.rows, shape.cols, shape.cell_count(), {}};
    for (int i1 = 0; i1 < shape.rows; ++i1)
        for (int i2 = i1 + 1; i2 < shape.rows; ++i2)
            for (int j1 = 0; j1 < shape.cols; ++j1)
                for (int j2 = j1 + 1; j2 < shape.cols; ++j2)
                    out.moves.push_back(make_move({{shape.index(i1, j1), +1},
                                                   {shape.index(i1, j2), -1},
                                                   {shape.index(i2, j1), -1},
                                                   {shape.index(i2, j2), +1}}));
    out.normalize();
    return out;
}

Move loop_move(Shape shape, const std::vector<int>& rows, const std::vector<int>& cols) {
    const size_t r = rows.size();
    if (r < 2 || cols.size() != r)
        throw std::invalid_argument("loop_move: need r >= 2 rows and as many cols");
    auto distinct = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!distinct(rows) || !distinct(cols))
        throw std::invalid_argument("loop_move: repeated row or column index");
    for (int i : rows)
        if (i < 0 || i >= shape.rows) throw std::invalid_argument("loop_move: row out of range");
    for (int j : cols)
        if (j < 0 || j >= shape.cols) throw std::invalid_argument("loop_move: col out of range");
    std::vector<std::pair<int, Count>> deltas;
    for (size_t t = 0; t < r; ++t) {
        deltas.emplace_back(shape.index(rows[t], cols[t]), +1);
        deltas.emplace_back(shape.index(rows[t], cols[(t + 1) % r]), -1);
    }
    return make_move(deltas);
}

namespace {

// Subsets of {0..n-1} of size r, lexicographic.
std::vector<std::vector<int>> subsets_of(int n, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(r);
    std::iota(cur.begin(), cur.end(), 0);
    if (r > n) return out;
    while (true) {
        out.push_back(cur);
        int t = r - 1;
        while (t >= 0 && cur[t] == n - r + t) --t;
        if (t < 0) break;
        ++cur[t];
        for (int u = t + 1; u < r; ++u) cur[u] = cur[u - 1] + 1;
    }
    return out;
}

// Builds the move of the cycle visiting rowSeq[0], colSeq[0], rowSeq[1], ...
// +1 on (rowSeq[t], colSeq[t]), -1 on (rowSeq[t+1], colSeq[t]) cyclically.
Move cycle_to_move(Shape shape, const std::vector<int>& rowSeq, const std::vector<int>& colSeq) {
    const size_t s = rowSeq.size();
    std::vector<std::pair<int, Count>> deltas;
    deltas.reserve(2 * s);
    for (size_t t = 0; t < s; ++t) {
        deltas.emplace_back(shape.index(rowSeq[t], colSeq[t]), +1);
        deltas.emplace_back(shape.index(rowSeq[(t + 1) % s], colSeq[t]), -1);
    }
    return make_move(deltas);
}

// Enumerates every cycle of K_{R,C} exactly once: the row sequence starts at
// R[0], and orientation is fixed by colSeq.front() < colSeq.back().
template <typename Fn>
void cycles_on(const std::vector<int>& R, const std::vector<int>& C, Fn&& fn) {
    std::vector<int> rowSeq(R), colSeq(C);
    std::sort(rowSeq.begin() + 1, rowSeq.end());
    do {
        std::sort(colSeq.begin(), colSeq.end());
        do {
            if (colSeq.front() < colSeq.back()) fn(rowSeq, colSeq);
        } while (std::next_permutation(colSeq.begin(), colSeq.end()));
    } while (std::next_permutation(rowSeq.begin() + 1, rowSeq.end()));
}

struct CycleTask {
    std::vector<int> rows, cols;
};

std::vector<CycleTask> cycle_tasks(Shape shape) {
    std::vector<CycleTask> tasks;
    const int smax = std::min(shape.rows, shape.cols);
    for (int s = 2; s <= smax; ++s)
        for (const auto& R : subsets_of(shape.rows, s))
            for (const auto& C : subsets_of(shape.cols, s)) tasks.push_back({R, C});
    return tasks;
}

}  // namespace

MoveSet circuit_moves(Shape shape) {
    if (shape.rows < 1 || shape.cols < 1)
        throw std::invalid_argument("circuit_moves: degenerate shape");
    MoveSet out{shape.rows, shape.cols, shape.cell_count(), {}};
    const auto tasks = cycle_tasks(shape);
    std::vector<std::vector<Move>> buckets(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (size_t t = 0; t < tasks.size(); ++t) {
        cycles_on(tasks[t].rows, tasks[t].cols,
                  [&](const std::vector<int>& rs, const std::vector<int>& cs) {
                      buckets[t].push_back(cycle_to_move(shape, rs, cs));
                  });
    }
    for (auto& b : buckets)
        out.moves.insert(out.moves.end(), std::make_move_iterator(b.begin()),
                         std::make_move_iterator(b.end()));
    out.normalize();
    return out;
}

CycleCounts count_circuit_moves(Shape shape) {
    if (shape.rows < 1 || shape.cols < 1)
        throw std::invalid_argument("count_circuit_moves: degenerate shape");
    const auto tasks = cycle_tasks(shape);
    std::vector<std::int64_t> totals(tasks.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (size_t t = 0; t < tasks.size(); ++t) {
        std::int64_t n = 0;
        cycles_on(tasks[t].rows, tasks[t].cols,
                  [&](const std::vector<int>&, const std::vector<int>&) { ++n; });
        totals[t] = n;
    }
    CycleCounts counts;
    for (size_t t = 0; t < tasks.size(); ++t) {
        counts.total += totals[t];
        counts.by_support[2 * static_cast<int>(tasks[t].rows.size())] += totals[t];
    }
    return counts;
}

void visit_circuit_moves(Shape shape, const std::function<void(const Move&)>& fn) {
    for (const auto& task : cycle_tasks(shape))
        cycles_on(task.rows, task.cols,
                  [&](const std::vector<int>& rs, const std::vector<int>& cs) {
                      fn(cycle_to_move(shape, rs, cs));
                  });
}

namespace {

// Shortest cycle length of the bipartite graph (R, C, edges), or INT_MAX.
// BFS from every row vertex; vertices are few (<= 7 + 7).
int bipartite_girth(const std::vector<std::vector<int>>& adjRow,
                    const std::vector<std::vector<int>>& adjCol) {
    const int nr = static_cast<int>(adjRow.size());
    const int nc = static_cast<int>(adjCol.size());
    const int n = nr + nc;  // rows then cols
    int best = INT_MAX;
    std::vector<int> dist(n), parent(n);
    for (int src = 0; src < nr; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::vector<int> queue{src};
        dist[src] = 0;
        for (size_t qh = 0; qh < queue.size(); ++qh) {
            int u = queue[qh];
            const auto& nbrs = u < nr ? adjRow[u] : adjCol[u - nr];
            for (int raw : nbrs) {
                int v = u < nr ? nr + raw : raw;
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if (parent[u] != v) {
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
    }
    return best;
}

}  // namespace

Df1Result df1_loops(Shape shape, const CellSet& zeros) {
    Df1Result result;
    result.moves = MoveSet{shape.rows, shape.cols, shape.cell_count(), {}};
    std::vector<char> open(shape.cell_count(), 1);
    for (const auto& [i, j] : zeros) {
        if (i < 0 || i >= shape.rows || j < 0 || j >= shape.cols)
            throw std::invalid_argument("df1_loops: zero cell out of range");
        open[shape.index(i, j)] = 0;
    }
    for (int i = 0; i < shape.rows; ++i) {
        bool any = false;
        for (int j = 0; j < shape.cols; ++j) any |= open[shape.index(i, j)] != 0;
        if (!any) result.zeroed_rows.push_back(i);
    }
    for (int j = 0; j < shape.cols; ++j) {
        bool any = false;
        for (int i = 0; i < shape.rows; ++i) any |= open[shape.index(i, j)] != 0;
        if (!any) result.zeroed_cols.push_back(j);
    }

    const int smax = std::min(shape.rows, shape.cols);
    for (int r = 2; r <= smax; ++r) {
        for (const auto& R : subsets_of(shape.rows, r)) {
            for (const auto& C : subsets_of(shape.cols, r)) {
                // Open-cell bipartite graph of the rectangle R x C.
                std::vector<std::vector<int>> adjRow(r), adjCol(r);
                for (int a = 0; a < r; ++a)
                    for (int b = 0; b < r; ++b)
                        if (open[shape.index(R[a], C[b])]) {
                            adjRow[a].push_back(b);
                            adjCol[b].push_back(a);
                        }
                // df-1 precisely when no shorter loop fits in the rectangle.
                if (r > 2 && bipartite_girth(adjRow, adjCol) < 2 * r) continue;
                cycles_on(R, C, [&](const std::vector<int>& rs, const std::vector<int>& cs) {
                    const size_t s = rs.size();
                    for (size_t t = 0; t < s; ++t) {
                        if (!open[shape.index(rs[t], cs[t])]) return;
                        if (!open[shape.index(rs[(t + 1) % s], cs[t])]) return;
                    }
                    result.moves.moves.push_back(cycle_to_move(shape, rs, cs));
                });
            }
        }
    }
    result.moves.normalize();
    return result;
}

MoveSet filter_structural_zeros(const MoveSet& moves, const CellSet& zeros) {
    Shape shape = moves.shape();
    MoveSet out{moves.rows, moves.cols, moves.cell_count, {}};
    for (const auto& m : moves.moves) {
        bool clean = true;
        for (const auto& [h, v] : m.cells) {
            (void)v;
            if (zeros.count(shape.cell(h))) {
                clean = false;
                break;
            }
        }
        if (clean) out.moves.push_back(m);
    }
    return out;
}

std::optional<Table> apply_move(const Table& table, const Move& move, int sign,
                                const BoundsGrid& bounds) {
    if (table.shape != bounds.shape)
        throw std::invalid_argument("apply_move: shape mismatch");
    Table out = table;
    for (const auto& [h, v] : move.cells) {
        const Count next = out.counts[h] + sign * v;
        if (next < 0) return std::nullopt;
        if (bounds.bounds[h] && next > *bounds.bounds[h]) return std::nullopt;
        out.counts[h] = next;
    }
    return out;
}

}  // namespace fiberwalk
