#include <doctest.h>

#include <random>
#include <set>

#include "fiberwalk/core.hpp"
#include "fiberwalk/moves.hpp"

using namespace fiberwalk;

namespace {

Move dense(const std::vector<Count>& v) { return make_move_dense(v); }

std::mt19937_64 test_rng(20240817);

}  // namespace

TEST_CASE("basic move counts") {
    CHECK(basic_moves({2, 2}).size() == 1);
    CHECK(basic_moves({3, 3}).size() == 9);
    CHECK(basic_moves({7, 7}).size() == 441);
    CHECK(basic_moves({1, 5}).size() == 0);  // no minors
}

TEST_CASE("basic moves lie in the design kernel") {
    for (int I = 2; I <= 4; ++I)
        for (int J = 2; J <= 4; ++J) {
            const DesignMatrix A = two_way_design({I, J});
            for (const auto& m : basic_moves({I, J}).moves) CHECK(in_kernel(m, A));
        }
}

TEST_CASE("loop_move") {
    // degree-2 loop is the basic move
    const Move basic = loop_move({3, 3}, {0, 1}, {0, 1});
    CHECK(basic == dense({1, -1, 0, -1, 1, 0, 0, 0, 0}));

    // M3(1,2,3;1,2,3): +1 on the diagonal, -1 on (1,2),(2,3),(3,1)
    const Move m3 = loop_move({3, 3}, {0, 1, 2}, {0, 1, 2});
    CHECK(m3 == dense({1, -1, 0, 0, 1, -1, -1, 0, 1}));

    CHECK_THROWS_AS(loop_move({3, 3}, {0, 0}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(loop_move({3, 3}, {0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(loop_move({3, 3}, {0, 3}, {0, 1}), std::invalid_argument);
}

TEST_CASE("loop moves have zero row and column sums") {
    const Shape shape{5, 6};
    for (int trial = 0; trial < 100; ++trial) {
        const int r = 2 + static_cast<int>(test_rng() % 4);
        std::vector<int> rows(shape.rows), cols(shape.cols);
        std::iota(rows.begin(), rows.end(), 0);
        std::iota(cols.begin(), cols.end(), 0);
        std::shuffle(rows.begin(), rows.end(), test_rng);
        std::shuffle(cols.begin(), cols.end(), test_rng);
        rows.resize(r);
        cols.resize(r);
        const Move m = loop_move(shape, rows, cols);
        std::vector<Count> rowsum(shape.rows, 0), colsum(shape.cols, 0);
        for (const auto& [h, v] : m.cells) {
            rowsum[h / shape.cols] += v;
            colsum[h % shape.cols] += v;
        }
        for (Count s : rowsum) CHECK(s == 0);
        for (Count s : colsum) CHECK(s == 0);
    }
}

TEST_CASE("circuit move counts match the cycle census") {
    CHECK(circuit_moves({3, 3}).size() == 15);
    const MoveSet c44 = circuit_moves({4, 4});
    CHECK(c44.size() == 204);
    const auto hist = c44.support_histogram();
    CHECK(hist.at(4) == 36);
    CHECK(hist.at(6) == 96);
    CHECK(hist.at(8) == 72);
    CHECK(count_circuit_moves({5, 5}).total == 3940);
}

TEST_CASE("circuit counts equal the closed-form cycle formula") {
    // sum over s of C(I,s) C(J,s) s!(s-1)!/2
    auto binom = [](std::int64_t n, std::int64_t r) {
        std::int64_t b = 1;
        for (int t = 0; t < r; ++t) b = b * (n - t) / (t + 1);
        return b;
    };
    auto factorial = [](std::int64_t n) {
        std::int64_t f = 1;
        for (std::int64_t t = 2; t <= n; ++t) f *= t;
        return f;
    };
    for (int I = 2; I <= 6; ++I)
        for (int J = I; J <= 6; ++J) {
            std::int64_t expected = 0;
            for (int s = 2; s <= I; ++s)
                expected += binom(I, s) * binom(J, s) * factorial(s) * factorial(s - 1) / 2;
            CHECK(count_circuit_moves({I, J}).total == expected);
        }
}

TEST_CASE("circuits are kernel moves, duplicate-free, contain the basics") {
    for (int I = 2; I <= 5; ++I) {
        const Shape shape{I, I};
        const DesignMatrix A = two_way_design(shape);
        const MoveSet circuits = circuit_moves(shape);
        std::set<Move> seen(circuits.moves.begin(), circuits.moves.end());
        CHECK(seen.size() == circuits.size());
        if (I <= 4)
            for (const auto& m : circuits.moves) CHECK(in_kernel(m, A));
        for (const auto& b : basic_moves(shape).moves) CHECK(seen.count(b) == 1);
    }
}

TEST_CASE("canonicalization is idempotent and identifies negations") {
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Count> v(12, 0);
        for (auto& x : v) x = static_cast<Count>(test_rng() % 7) - 3;
        const Move m = dense(v);
        std::vector<Count> neg(v.size());
        for (size_t h = 0; h < v.size(); ++h) neg[h] = -v[h];
        CHECK(dense(to_dense(m, 12)) == m);
        CHECK(dense(neg) == m);
        if (!m.cells.empty()) CHECK(m.cells.front().second > 0);
    }
}

TEST_CASE("filter_structural_zeros on the 4x4 universal basis") {
    const MoveSet universal = circuit_moves({4, 4});

    const MoveSet corner = filter_structural_zeros(universal, {{0, 0}});
    CHECK(corner.size() == 123);
    auto hist = corner.support_histogram();
    CHECK(hist.at(4) == 36 - 9);
    CHECK(hist.at(6) == 96 - 36);
    CHECK(hist.at(8) == 72 - 36);

    const MoveSet diag =
        filter_structural_zeros(universal, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK(diag.size() == 28);
    hist = diag.support_histogram();
    CHECK(hist.at(4) == 36 - 30);
    CHECK(hist.at(6) == 96 - 80);
    CHECK(hist.at(8) == 72 - 66);

    const MoveSet same = filter_structural_zeros(universal, {});
    CHECK(same.moves == universal.moves);
}

TEST_CASE("df1 loops: complete 3x3 grid reduces to the basic moves") {
    const Df1Result r = df1_loops({3, 3}, {});
    CHECK(r.moves.moves == basic_moves({3, 3}).moves);
    CHECK(r.zeroed_rows.empty());

    // independent check: every degree-3 loop rectangle holds a 2x2 minor
    for (const auto& m : circuit_moves({3, 3}).moves)
        if (m.support_size() == 6) {
            std::set<int> rows, cols;
            for (const auto& [h, v] : m.cells) {
                (void)v;
                rows.insert(h / 3);
                cols.insert(h % 3);
            }
            CHECK(rows.size() * cols.size() >= 4);
        }
}

TEST_CASE("df1 loops: 3x3 diagonal zeros yield the off-diagonal degree-3 loop") {
    const CellSet diag{{0, 0}, {1, 1}, {2, 2}};
    const Df1Result r = df1_loops({3, 3}, diag);
    const Move expected = loop_move({3, 3}, {0, 1, 2}, {1, 2, 0});
    REQUIRE(r.moves.size() == 1);
    CHECK(r.moves.moves[0] == expected);
}

TEST_CASE("df1 loops: quasi-independence 6x6 pattern has 3 basics + 20 degree-3") {
    // 0 . . 0 0 .      (0 marks a structural zero)
    // . 0 . . 0 0
    // . . 0 0 . 0
    // 0 0 . 0 . .
    // . 0 0 . 0 .
    // 0 . 0 . . 0
    const CellSet zeros{{0, 0}, {0, 3}, {0, 4}, {1, 1}, {1, 4}, {1, 5},
                        {2, 2}, {2, 3}, {2, 5}, {3, 0}, {3, 1}, {3, 3},
                        {4, 1}, {4, 2}, {4, 4}, {5, 0}, {5, 2}, {5, 5}};
    REQUIRE(zeros.size() == 18);
    const Df1Result r = df1_loops({6, 6}, zeros);
    const auto hist = r.moves.support_histogram();
    CHECK(r.moves.size() == 23);
    CHECK(hist.at(4) == 3);
    CHECK(hist.at(6) == 20);
}

TEST_CASE("df1 flags fully zeroed rows and columns") {
    const CellSet zeros{{0, 0}, {0, 1}, {0, 2}};
    const Df1Result r = df1_loops({3, 3}, zeros);
    CHECK(r.zeroed_rows == std::vector<int>{0});
    CHECK(r.zeroed_cols.empty());
}

TEST_CASE("apply_move") {
    const Shape shape{2, 2};
    const BoundsGrid open = BoundsGrid::unbounded(shape);
    const Move m = dense({1, -1, -1, 1});

    auto next = apply_move(Table{shape, {1, 0, 0, 1}}, m, -1, open);
    REQUIRE(next);
    CHECK(next->counts == std::vector<Count>{0, 1, 1, 0});

    CHECK_FALSE(apply_move(Table{shape, {0, 1, 1, 0}}, m, -1, open));

    BoundsGrid capped = open;
    capped.bounds[shape.index(0, 1)] = 0;
    CHECK_FALSE(apply_move(Table{shape, {1, 0, 0, 1}}, m, -1, capped));
}

TEST_CASE("moveset ordering ascends by degree then support") {
    const MoveSet c = circuit_moves({3, 3});
    for (size_t t = 1; t < c.size(); ++t) {
        CHECK_FALSE(move_less(c.moves[t], c.moves[t - 1]));
        CHECK(c.moves[t - 1].degree() <= c.moves[t].degree());
    }
}

TEST_CASE("basic moves are circuits on every shape up to 5x5") {
    for (int I = 2; I <= 5; ++I)
        for (int J = 2; J <= 5; ++J) {
            const MoveSet circuits = circuit_moves({I, J});
            const std::set<Move> cset(circuits.moves.begin(), circuits.moves.end());
            for (const auto& b : basic_moves({I, J}).moves) CHECK(cset.count(b) == 1);
        }
}

TEST_CASE("df1 output lies in the quasi-independence kernel") {
    const CellSet zeros{{0, 0}, {0, 3}, {0, 4}, {1, 1}, {1, 4}, {1, 5},
                        {2, 2}, {2, 3}, {2, 5}, {3, 0}, {3, 1}, {3, 3},
                        {4, 1}, {4, 2}, {4, 4}, {5, 0}, {5, 2}, {5, 5}};
    const DesignMatrix full = two_way_design({6, 6});
    for (const auto& m : df1_loops({6, 6}, zeros).moves.moves) {
        CHECK(in_kernel(m, full));
        for (const auto& [h, v] : m.cells) {
            (void)v;
            CHECK(zeros.count({h / 6, h % 6}) == 0);
        }
    }
}
