#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberwalk {

using Count = std::int64_t;

/// Grid dimensions of a two-way table.
struct Shape {
    int rows = 0;
    int cols = 0;

    int cell_count() const { return rows * cols; }
    int index(int i, int j) const { return i * cols + j; }  // 0-based
    std::pair<int, int> cell(int h) const { return {h / cols, h % cols}; }

    bool operator==(const Shape&) const = default;
};

/// A cell (i, j), 0-based.
using Cell = std::pair<int, int>;
using CellSet = std::set<Cell>;

/// Per-cell upper bound: nullopt means unbounded, 0 is a structural zero.
using CellBound = std::optional<Count>;

struct BoundsGrid {
    Shape shape;
    std::vector<CellBound> bounds;  // length rows*cols, row-major

    static BoundsGrid unbounded(Shape s) {
        return BoundsGrid{s, std::vector<CellBound>(s.cell_count(), std::nullopt)};
    }
    static BoundsGrid uniform(Shape s, Count b) {
        return BoundsGrid{s, std::vector<CellBound>(s.cell_count(), CellBound(b))};
    }
    /// Structural zeros on `zeros`, everything else unbounded.
    static BoundsGrid with_zeros(Shape s, const CellSet& zeros);

    bool is_structural_zero(int h) const { return bounds[h].has_value() && *bounds[h] == 0; }
    CellSet structural_zeros() const;
};

/// Dense nonnegative integer table, row-major.
struct Table {
    Shape shape;
    std::vector<Count> counts;

    Count& at(int i, int j) { return counts[shape.index(i, j)]; }
    Count at(int i, int j) const { return counts[shape.index(i, j)]; }
    Count total() const;

    bool operator==(const Table&) const = default;
};

/// s x k nonnegative integer matrix mapping tables to sufficient statistics.
struct DesignMatrix {
    int s = 0;
    int k = 0;
    std::vector<Count> entries;  // row-major, length s*k

    Count at(int r, int c) const { return entries[r * k + c]; }
    Count& at(int r, int c) { return entries[r * k + c]; }
};

/// Margin vector + bounds identifying a bounded fiber.
struct FiberSpec {
    DesignMatrix matrix;
    std::vector<Count> target;  // length s, componentwise >= 0
    BoundsGrid bounds;          // shape.cell_count() == matrix.k
};

/// Row-and-column-sums design for an I x J table: (I+J) x (I*J), 0/1 entries.
DesignMatrix two_way_design(Shape shape);

/// two_way_design restricted to the columns of cells outside `zeros`.
DesignMatrix quasi_independence_design(Shape shape, const CellSet& zeros);

/// Row-major list of the cells kept by quasi_independence_design.
std::vector<int> quasi_cells(Shape shape, const CellSet& zeros);

/// A_T * n.
std::vector<Count> margins(const Table& table, const DesignMatrix& matrix);

/// True iff every bounded cell is within its bound.
bool satisfies_bounds(const Table& table, const BoundsGrid& bounds);

}  // namespace fiberwalk
