// Compares the serial reference implementations against the OpenMP kernels
// and checks that both produce identical results.
#include <chrono>
#include <cstdio>
#include <string>

#include "fiberwalk/core.hpp"
#include "fiberwalk/fiber.hpp"
#include "fiberwalk/lattice.hpp"
#include "fiberwalk/moves.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fiberwalk;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename Fn>
double timed(Fn&& fn) {
    const double t0 = now_seconds();
    fn();
    return now_seconds() - t0;
}

void report(const std::string& name, double serial, double parallel, bool equal) {
    std::printf("%-38s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name.c_str(),
                serial, parallel, parallel > 0 ? serial / parallel : 0.0,
                equal ? "results match" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : max_threads();
    std::printf("comparing 1 thread vs %d threads\n\n", threads);

    {
        CycleCounts a, b;
        set_threads(1);
        const double ts = timed([&] { a = count_circuit_moves({7, 7}); });
        set_threads(threads);
        const double tp = timed([&] { b = count_circuit_moves({7, 7}); });
        report("cycle census 7x7 (4662231 moves)", ts, tp,
               a.total == b.total && a.by_support == b.by_support);
    }
    {
        MoveSet a, b;
        set_threads(1);
        const double ts = timed([&] { a = circuit_moves({6, 6}); });
        set_threads(threads);
        const double tp = timed([&] { b = circuit_moves({6, 6}); });
        report("circuit moves 6x6 (materialized)", ts, tp, a.moves == b.moves);
    }
    {
        const IntMatrix A = IntMatrix::from_design(two_way_design({4, 4}));
        MoveSet a, b;
        const double ts = timed([&] { a = graver_basis_serial(A); });
        set_threads(threads);
        const double tp = timed([&] { b = graver_basis(A); });
        report("graver basis, two-way 4x4 (204)", ts, tp, a.moves == b.moves);
    }
    {
        const IntMatrix A = IntMatrix::from_design(two_way_design({4, 4}));
        MoveSet a, b;
        set_threads(1);
        const double ts = timed([&] { a = circuits_general(A); });
        set_threads(threads);
        const double tp = timed([&] { b = circuits_general(A); });
        report("circuits via subset scan, 4x4 (204)", ts, tp, a.moves == b.moves);
    }
    {
        const Shape shape{4, 4};
        const DesignMatrix A = two_way_design(shape);
        const MoveSet basics = basic_moves(shape);
        const std::vector<BoundsGrid> bounds = {BoundsGrid::uniform(shape, 1),
                                                BoundsGrid::uniform(shape, 2),
                                                BoundsGrid::uniform(shape, 3)};
        SweepOptions opts;
        opts.margin_total_cap = 8;
        opts.require_positive_margins = true;
        SubbasisReport a, b;
        set_threads(1);
        const double ts =
            timed([&] { a = verify_subbasis(A, shape, basics, bounds, opts); });
        set_threads(threads);
        const double tp =
            timed([&] { b = verify_subbasis(A, shape, basics, bounds, opts); });
        report("connectivity sweep 4x4, totals <= 8", ts, tp,
               a.status == b.status && a.fibers_checked == b.fibers_checked);
    }
    return 0;
}
