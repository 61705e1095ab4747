#include <doctest.h>

#include <algorithm>
#include <random>

#include "fiberwalk/fiber.hpp"
#include "fiberwalk/moves.hpp"

using namespace fiberwalk;

namespace {

FiberSpec two_way_spec(Shape shape, std::vector<Count> row_sums, std::vector<Count> col_sums,
                       BoundsGrid bounds) {
    std::vector<Count> target = std::move(row_sums);
    target.insert(target.end(), col_sums.begin(), col_sums.end());
    return FiberSpec{two_way_design(shape), std::move(target), std::move(bounds)};
}

}  // namespace

TEST_CASE("enumerate_fiber small cases") {
    const Shape s22{2, 2};
    const Fiber f = enumerate_fiber(two_way_spec(s22, {1, 1}, {1, 1}, BoundsGrid::unbounded(s22)));
    REQUIRE(f.size() == 2);
    CHECK(f.tables[0].counts == std::vector<Count>{0, 1, 1, 0});
    CHECK(f.tables[1].counts == std::vector<Count>{1, 0, 0, 1});

    const Shape s33{3, 3};
    const Fiber perms =
        enumerate_fiber(two_way_spec(s33, {1, 1, 1}, {1, 1, 1}, BoundsGrid::unbounded(s33)));
    CHECK(perms.size() == 6);

    const Fiber derangements = enumerate_fiber(two_way_spec(
        s33, {1, 1, 1}, {1, 1, 1}, BoundsGrid::with_zeros(s33, {{0, 0}, {1, 1}, {2, 2}})));
    REQUIRE(derangements.size() == 2);
    CHECK(derangements.tables[0].counts == std::vector<Count>{0, 0, 1, 1, 0, 0, 0, 1, 0});
    CHECK(derangements.tables[1].counts == std::vector<Count>{0, 1, 0, 0, 0, 1, 1, 0, 0});
}

TEST_CASE("enumerate_fiber output is sorted, margin-correct, bound-correct") {
    const Shape shape{3, 3};
    const FiberSpec spec =
        two_way_spec(shape, {3, 2, 1}, {2, 2, 2}, BoundsGrid::uniform(shape, 2));
    const Fiber f = enumerate_fiber(spec);
    CHECK(f.size() > 0);
    CHECK(std::is_sorted(f.tables.begin(), f.tables.end(),
                         [](const Table& a, const Table& b) { return a.counts < b.counts; }));
    for (const auto& t : f.tables) {
        CHECK(margins(t, spec.matrix) == spec.target);
        CHECK(satisfies_bounds(t, spec.bounds));
    }
}

TEST_CASE("enumerate_fiber infeasible and capped") {
    const Shape shape{2, 2};
    // row total 2 vs column total 1: infeasible, empty fiber is a valid result
    const Fiber empty =
        enumerate_fiber(two_way_spec(shape, {1, 1}, {1, 0}, BoundsGrid::unbounded(shape)));
    CHECK(empty.size() == 0);

    CHECK_THROWS_AS(
        enumerate_fiber(two_way_spec(shape, {3, 3}, {3, 3}, BoundsGrid::unbounded(shape)), 2),
        CapExceeded);
}

TEST_CASE("connectivity on tiny fibers") {
    const Shape s22{2, 2};
    const Fiber f22 =
        enumerate_fiber(two_way_spec(s22, {1, 1}, {1, 1}, BoundsGrid::unbounded(s22)));
    CHECK(connectivity(f22, basic_moves(s22)).component_count == 1);

    // all 6 permutation tables under unit bounds stay connected
    const Shape s33{3, 3};
    const Fiber perms =
        enumerate_fiber(two_way_spec(s33, {1, 1, 1}, {1, 1, 1}, BoundsGrid::uniform(s33, 1)));
    REQUIRE(perms.size() == 6);
    CHECK(connectivity(perms, basic_moves(s33)).component_count == 1);

    // the two derangement tables split under the basic moves
    const Fiber der = enumerate_fiber(two_way_spec(
        s33, {1, 1, 1}, {1, 1, 1}, BoundsGrid::with_zeros(s33, {{0, 0}, {1, 1}, {2, 2}})));
    const ConnectivityReport r = connectivity(der, basic_moves(s33));
    CHECK(r.component_count == 2);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->first == 0);
    CHECK(r.witness->second == 1);

    // ... and rejoin under the df-1 loop for that pattern
    const Df1Result df1 = df1_loops(s33, {{0, 0}, {1, 1}, {2, 2}});
    MoveSet with_loop = basic_moves(s33);
    with_loop.moves.insert(with_loop.moves.end(), df1.moves.moves.begin(),
                           df1.moves.moves.end());
    with_loop.normalize();
    CHECK(connectivity(der, with_loop).component_count == 1);
}

TEST_CASE("larger move sets never increase component counts") {
    const Shape shape{3, 3};
    std::mt19937_64 rng(99);
    const MoveSet circuits = circuit_moves(shape);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Count> rows(3), cols(3);
        Count total = 0;
        for (auto& r : rows) {
            r = 1 + static_cast<Count>(rng() % 3);
            total += r;
        }
        Count rem = total;
        for (int j = 0; j < 3; ++j) {
            cols[j] = j == 2 ? rem : std::min<Count>(rem, static_cast<Count>(rng() % (rem + 1)));
            rem -= cols[j];
        }
        const FiberSpec spec = two_way_spec(shape, rows, cols, BoundsGrid::uniform(shape, 2));
        const Fiber fiber = enumerate_fiber(spec);
        if (fiber.size() == 0) continue;

        MoveSet small{3, 3, 9, {}};
        for (const auto& m : circuits.moves)
            if (rng() % 2) small.moves.push_back(m);
        MoveSet big = small;
        for (const auto& m : circuits.moves)
            if (rng() % 2) big.moves.push_back(m);
        big.normalize();
        small.normalize();
        CHECK(connectivity(fiber, big).component_count <=
              connectivity(fiber, small).component_count);
    }
}

TEST_CASE("verify_subbasis: positive bounds keep basics connected at desk scale") {
    const Shape shape{3, 3};
    const DesignMatrix A = two_way_design(shape);
    const std::vector<BoundsGrid> bounds = {BoundsGrid::uniform(shape, 1),
                                            BoundsGrid::uniform(shape, 2)};
    SweepOptions opts;
    opts.margin_total_cap = 6;
    const SubbasisReport r = verify_subbasis(A, shape, basic_moves(shape), bounds, opts);
    CHECK(r.status == SubbasisReport::Status::ConnectedUpToCap);
    CHECK(r.inconclusive == 0);
    CHECK(r.fibers_checked > 0);
}

TEST_CASE("verify_subbasis: diagonal zeros disconnect, witness is the derangement pair") {
    const Shape shape{3, 3};
    const DesignMatrix A = two_way_design(shape);
    const BoundsGrid zeros = BoundsGrid::with_zeros(shape, {{0, 0}, {1, 1}, {2, 2}});
    SweepOptions opts;
    opts.margin_total_cap = 6;
    opts.require_positive_margins = true;
    const SubbasisReport r = verify_subbasis(A, shape, basic_moves(shape), {zeros}, opts);
    REQUIRE(r.status == SubbasisReport::Status::Disconnected);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->a.counts == std::vector<Count>{0, 0, 1, 1, 0, 0, 0, 1, 0});
    CHECK(r.witness->b.counts == std::vector<Count>{0, 1, 0, 0, 0, 1, 1, 0, 0});
}

TEST_CASE("verify_subbasis: single move of the 4-cell fraction connects its fibers") {
    // cells (-1,-1,-1), (-1,-1,1), (1,1,-1), (1,1,1) under one-way margins
    DesignMatrix frac{6, 4, {1, 1, 0, 0,   // A = -1
                             0, 0, 1, 1,   // A = +1
                             1, 1, 0, 0,   // B = -1
                             0, 0, 1, 1,   // B = +1
                             1, 0, 1, 0,   // C = -1
                             0, 1, 0, 1}}; // C = +1
    MoveSet single{0, 0, 4, {make_move_dense({1, -1, -1, 1})}};
    SweepOptions opts;
    opts.margin_total_cap = 8;
    const Shape flat{1, 4};
    const SubbasisReport r =
        verify_subbasis(frac, flat, single, {BoundsGrid::unbounded(flat)}, opts);
    CHECK(r.status == SubbasisReport::Status::ConnectedUpToCap);
    CHECK(r.inconclusive == 0);
}

TEST_CASE("canonical_zero_pattern is permutation invariant") {
    const Shape shape{3, 3};
    std::mt19937_64 rng(512);
    for (int trial = 0; trial < 40; ++trial) {
        CellSet zeros;
        const int nz = 1 + static_cast<int>(rng() % 4);
        while (static_cast<int>(zeros.size()) < nz)
            zeros.insert({static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)});
        const CellSet canon = canonical_zero_pattern(shape, zeros);

        std::vector<int> rp{0, 1, 2}, cp{0, 1, 2};
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        CellSet conj;
        for (const auto& [i, j] : zeros) conj.insert({rp[i], cp[j]});
        CHECK(canonical_zero_pattern(shape, conj) == canon);
    }
}

TEST_CASE("pattern_search 3x3: only the transversal pattern disconnects") {
    PatternSearchOptions opts;
    opts.max_zero_cells = 3;
    opts.sweep.margin_total_cap = 6;
    const auto verdicts = pattern_search(Shape{3, 3}, opts);
    int disconnected = 0;
    for (const auto& v : verdicts) {
        const bool bad = v.report.status == SubbasisReport::Status::Disconnected;
        if (static_cast<int>(v.zeros.size()) <= 2) CHECK_FALSE(bad);
        if (bad) {
            ++disconnected;
            CHECK(v.zeros == CellSet{{0, 0}, {1, 1}, {2, 2}});
        }
    }
    CHECK(disconnected == 1);
}

TEST_CASE("pattern verdicts are stable under conjugating the pattern") {
    const Shape shape{3, 3};
    const DesignMatrix A = two_way_design(shape);
    const MoveSet basics = basic_moves(shape);
    SweepOptions opts;
    opts.margin_total_cap = 6;
    opts.require_positive_margins = true;
    std::mt19937_64 rng(2024);
    const std::vector<CellSet> patterns = {{{0, 0}, {1, 1}, {2, 2}},
                                           {{0, 0}, {1, 1}, {2, 0}},
                                           {{0, 1}, {1, 2}}};
    for (const auto& zeros : patterns) {
        const auto base = verify_subbasis(A, shape, basics,
                                          {BoundsGrid::with_zeros(shape, zeros)}, opts);
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<int> rp{0, 1, 2}, cp{0, 1, 2};
            std::shuffle(rp.begin(), rp.end(), rng);
            std::shuffle(cp.begin(), cp.end(), rng);
            CellSet conj;
            for (const auto& [i, j] : zeros) conj.insert({rp[i], cp[j]});
            const auto alt = verify_subbasis(A, shape, basics,
                                             {BoundsGrid::with_zeros(shape, conj)}, opts);
            CHECK(alt.status == base.status);
        }
    }
}

TEST_CASE("connectivity soundness: BFS stays inside the enumerated fiber") {
    const Shape shape{3, 3};
    const FiberSpec spec =
        two_way_spec(shape, {2, 2, 1}, {2, 2, 1}, BoundsGrid::uniform(shape, 2));
    const Fiber fiber = enumerate_fiber(spec);
    const ConnectivityReport r = connectivity(fiber, circuit_moves(shape));
    for (size_t t = 0; t < fiber.size(); ++t) {
        CHECK(r.component[t] >= 0);
        CHECK(margins(fiber.tables[t], spec.matrix) == spec.target);
        CHECK(satisfies_bounds(fiber.tables[t], spec.bounds));
    }
}

TEST_CASE("universal bases connect every randomly bounded fiber") {
    // property sweep: random grids with entries in {0, 1, 2, unbounded},
    // margins with totals <= 6, connectivity under the universal basis for
    // the grid's bounded cells must give one component per nonempty fiber.
    std::mt19937_64 rng(424242);
    for (const Shape shape : {Shape{2, 2}, Shape{2, 3}, Shape{3, 3}}) {
        const DesignMatrix A = two_way_design(shape);
        const IntMatrix M = IntMatrix::from_design(A);
        const auto targets = two_way_targets(shape, 6, false);
        for (int trial = 0; trial < 12; ++trial) {
            BoundsGrid grid = BoundsGrid::unbounded(shape);
            LiftSpec lift{M, {}};
            if (trial > 0) {  // trial 0 keeps everything unbounded
                for (int h = 0; h < shape.cell_count(); ++h) {
                    const int roll = static_cast<int>(rng() % 4);
                    if (roll < 3) {
                        grid.bounds[h] = roll;
                        lift.bounded_cells.push_back(h);
                    }
                }
            }
            MoveSet universal = universal_markov_basis(lift).moves;
            universal.rows = shape.rows;
            universal.cols = shape.cols;
            for (const auto& t : targets) {
                const Fiber fiber = enumerate_fiber(FiberSpec{A, t, grid});
                if (fiber.size() == 0) continue;
                CHECK(connectivity(fiber, universal).component_count == 1);
            }
        }
    }
}

TEST_CASE("patterns of four zeros disconnect exactly when they hold a transversal") {
    const Shape shape{3, 3};
    PatternSearchOptions opts;
    opts.max_zero_cells = 4;
    opts.sweep.margin_total_cap = 5;
    const auto verdicts = pattern_search(shape, opts);
    auto has_transversal = [](const CellSet& zeros) {
        const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (const auto& p : perms) {
            bool all = true;
            for (int i = 0; i < 3 && all; ++i) all = zeros.count({i, p[i]}) > 0;
            if (all) return true;
        }
        return false;
    };
    for (const auto& v : verdicts) {
        if (v.zeros.size() != 4) continue;
        const bool bad = v.report.status == SubbasisReport::Status::Disconnected;
        CHECK(bad == has_transversal(v.zeros));
    }
}
