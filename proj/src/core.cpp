#include "fiberwalk/core.hpp"

#include <numeric>

namespace fiberwalk {

BoundsGrid BoundsGrid::with_zeros(Shape s, const CellSet& zeros) {
    BoundsGrid g = BoundsGrid::unbounded(s);
    for (const auto& [i, j] : zeros) {
        if (i < 0 || i >= s.rows || j < 0 || j >= s.cols)
            throw std::invalid_argument("structural zero cell out of range");
        g.bounds[s.index(i, j)] = 0;
    }
    return g;
}

CellSet BoundsGrid::structural_zeros() const {
    CellSet out;
    for (int h = 0; h < shape.cell_count(); ++h)
        if (is_structural_zero(h)) out.insert(shape.cell(h));
    return out;
}

Count Table::total() const {
    return std::accumulate(counts.begin(), counts.end(), Count{0});
}

DesignMatrix two_way_design(Shape shape) {
    if (shape.rows < 1 || shape.cols < 1)
        throw std::invalid_argument("two_way_design: degenerate shape");
    const int I = shape.rows, J = shape.cols, k = I * J;
    DesignMatrix A{I + J, k, std::vector<Count>(static_cast<size_t>(I + J) * k, 0)};
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j) {
            A.at(i, shape.index(i, j)) = 1;      // row-sum rows
            A.at(I + j, shape.index(i, j)) = 1;  // column-sum rows
        }
    return A;
}

std::vector<int> quasi_cells(Shape shape, const CellSet& zeros) {
    std::vector<int> cells;
    for (int h = 0; h < shape.cell_count(); ++h)
        if (!zeros.count(shape.cell(h))) cells.push_back(h);
    return cells;
}

DesignMatrix quasi_independence_design(Shape shape, const CellSet& zeros) {
    const auto cells = quasi_cells(shape, zeros);
    if (cells.empty())
        throw std::invalid_argument("quasi_independence_design: all cells are structural zeros");
    DesignMatrix full = two_way_design(shape);
    DesignMatrix A{full.s, static_cast<int>(cells.size()), {}};
    A.entries.resize(static_cast<size_t>(A.s) * A.k);
    for (int r = 0; r < A.s; ++r)
        for (int c = 0; c < A.k; ++c) A.at(r, c) = full.at(r, cells[c]);
    return A;
}

std::vector<Count> margins(const Table& table, const DesignMatrix& matrix) {
    if (static_cast<int>(table.counts.size()) != matrix.k)
        throw std::invalid_argument("margins: table/matrix dimension mismatch");
    std::vector<Count> t(matrix.s, 0);
    for (int r = 0; r < matrix.s; ++r) {
        Count acc = 0;
        for (int c = 0; c < matrix.k; ++c) acc += matrix.at(r, c) * table.counts[c];
        t[r] = acc;
    }
    return t;
}

bool satisfies_bounds(const Table& table, const BoundsGrid& bounds) {
    if (table.shape != bounds.shape)
        throw std::invalid_argument("satisfies_bounds: shape mismatch");
    for (size_t h = 0; h < table.counts.size(); ++h)
        if (bounds.bounds[h] && table.counts[h] > *bounds.bounds[h]) return false;
    return true;
}

}  // namespace fiberwalk
