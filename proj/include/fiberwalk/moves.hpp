#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fiberwalk/core.hpp"

namespace fiberwalk {

/// Sparse integer table move: (cell index, delta) pairs sorted by index,
/// deltas nonzero. Sign canonical: the first entry's delta is positive,
/// which identifies a move with its negation.
struct Move {
    std::vector<std::pair<int, Count>> cells;

    int support_size() const { return static_cast<int>(cells.size()); }
    /// Sum of positive deltas (the binomial degree; r for a degree-r loop).
    Count degree() const;
    bool touches(int cell_index) const;
    Move negated() const;

    bool operator==(const Move&) const = default;
    auto operator<=>(const Move&) const = default;
};

/// Builds a sign-canonical move from raw deltas, dropping zeros.
Move make_move(const std::vector<std::pair<int, Count>>& deltas);
Move make_move_dense(const std::vector<Count>& dense);
std::vector<Count> to_dense(const Move& m, int k);

/// Ordering: ascending degree, then support size, then support cells
/// row-major, then deltas.
bool move_less(const Move& a, const Move& b);

/// Ordered duplicate-free collection of canonical moves.
/// rows/cols describe the table grid; rows == 0 marks a set over a plain
/// index space of cell_count cells (general design matrices).
struct MoveSet {
    int rows = 0;
    int cols = 0;
    int cell_count = 0;
    std::vector<Move> moves;

    Shape shape() const { return Shape{rows, cols}; }
    size_t size() const { return moves.size(); }
    /// Sorts by move_less and removes duplicates.
    void normalize();
    /// Support-size histogram (support size -> number of moves).
    std::map<int, std::int64_t> support_histogram() const;
};

/// True iff A * m == 0.
bool in_kernel(const Move& m, const DesignMatrix& A);

/// The +1/-1 pattern on every 2x2 minor. C(I,2)*C(J,2) moves.
MoveSet basic_moves(Shape shape);

/// Degree-r loop: +1 at (i_t, j_t), -1 at (i_t, j_{t+1}) cyclically.
/// Indices 0-based, pairwise distinct within rows and within cols.
Move loop_move(Shape shape, const std::vector<int>& rows, const std::vector<int>& cols);

/// One move per cycle of the complete bipartite graph K_{I,J}.
MoveSet circuit_moves(Shape shape);

/// Support-size histogram of circuit_moves without materializing the set.
struct CycleCounts {
    std::int64_t total = 0;
    std::map<int, std::int64_t> by_support;
};
CycleCounts count_circuit_moves(Shape shape);

/// Streams circuit moves in deterministic order (single-threaded).
void visit_circuit_moves(Shape shape, const std::function<void(const Move&)>& fn);

/// df-1 loops of degree 2..min(I,J) on the cells outside `zeros`.
struct Df1Result {
    MoveSet moves;
    std::vector<int> zeroed_rows;  // rows fully covered by structural zeros
    std::vector<int> zeroed_cols;
};
Df1Result df1_loops(Shape shape, const CellSet& zeros);

/// Subset of `moves` whose support avoids `zeros`; order preserved.
MoveSet filter_structural_zeros(const MoveSet& moves, const CellSet& zeros);

/// Applies sign*move if the result stays nonnegative and within bounds.
std::optional<Table> apply_move(const Table& table, const Move& move, int sign,
                                const BoundsGrid& bounds);

}  // namespace fiberwalk
