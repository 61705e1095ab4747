#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fiberwalk/core.hpp"
#include "fiberwalk/lattice.hpp"
#include "fiberwalk/moves.hpp"

namespace fiberwalk {

/// Complete bounded fiber, tables in row-major lexicographic order.
struct Fiber {
    FiberSpec spec;
    std::vector<Table> tables;

    size_t size() const { return tables.size(); }
};

/// All tables n >= 0 with A*n = target and n <= bounds. Throws CapExceeded
/// (carrying the count found so far) when the fiber outgrows size_cap.
Fiber enumerate_fiber(const FiberSpec& spec, std::int64_t size_cap = 200'000);

struct ConnectivityReport {
    int component_count = 0;
    std::vector<int> component;  // per table index, in fiber order
    /// Table indices in two different components, present iff count > 1.
    std::optional<std::pair<int, int>> witness;
};

/// Exact component structure of the fiber graph under +/- moves with bound
/// checks. BFS neighbor order: MoveSet order, + before -.
ConnectivityReport connectivity(const Fiber& fiber, const MoveSet& moves);

struct DisconnectionWitness {
    FiberSpec spec;
    Table a, b;  // members of different components
};

struct SubbasisReport {
    enum class Status { ConnectedUpToCap, Disconnected };
    Status status = Status::ConnectedUpToCap;
    std::optional<DisconnectionWitness> witness;
    std::int64_t fibers_checked = 0;
    std::int64_t empty_fibers = 0;
    std::int64_t inconclusive = 0;  // fibers whose enumeration exceeded cap
};

struct SweepOptions {
    Count margin_total_cap = 8;
    bool require_positive_margins = false;
    std::int64_t fiber_size_cap = 200'000;
};

/// Sweeps every realizable margin vector with total <= cap (two-way designs
/// enumerate row/column compositions; small general designs enumerate the
/// image of all tables) against every bounds grid in the family, and runs
/// connectivity on each nonempty fiber. Returns the first disconnection
/// witness in sweep order, if any.
SubbasisReport verify_subbasis(const DesignMatrix& A, Shape shape, const MoveSet& moves,
                               const std::vector<BoundsGrid>& bounds_family,
                               const SweepOptions& options);

struct PatternVerdict {
    CellSet zeros;  // canonical representative under row/column permutations
    SubbasisReport report;
};

struct PatternSearchOptions {
    int max_zero_cells = 3;
    SweepOptions sweep;
};

/// Classifies structural-zero patterns (up to row/column permutation) by
/// whether the basic moves connect all fibers with positive margins.
std::vector<PatternVerdict> pattern_search(Shape shape, const PatternSearchOptions& options);

/// Lexicographically minimal representative of a zero pattern under row and
/// column permutations.
CellSet canonical_zero_pattern(Shape shape, const CellSet& zeros);

/// Row/column-sum vectors (rows then cols) with equal totals <= cap.
std::vector<std::vector<Count>> two_way_targets(Shape shape, Count total_cap, bool positive);

}  // namespace fiberwalk
