#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fiberwalk/core.hpp"
#include "fiberwalk/moves.hpp"

namespace fiberwalk {

/// Thrown when a configured resource cap is exceeded. `count_so_far` carries
/// whatever partial tally the aborted computation had (basis size, fiber
/// size, subset count) so callers can report it.
struct CapExceeded : std::runtime_error {
    std::int64_t count_so_far;
    CapExceeded(const std::string& what, std::int64_t count)
        : std::runtime_error(what), count_so_far(count) {}
};

/// General signed integer matrix.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Count> a;  // row-major

    Count at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    Count& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }

    static IntMatrix zero(int rows, int cols) {
        return IntMatrix{rows, cols, std::vector<Count>(static_cast<size_t>(rows) * cols, 0)};
    }
    static IntMatrix identity(int n);
    static IntMatrix from_design(const DesignMatrix& A);
};

using LatticeVector = std::vector<Count>;

/// Exact integer rank.
int int_rank(const IntMatrix& A);

/// Basis of ker(A) as a saturated sublattice of Z^cols. Size cols - rank(A);
/// every vector satisfies A*v = 0.
std::vector<LatticeVector> kernel_basis(const IntMatrix& A);

/// The (s+k) x 2k block matrix ((A, 0), (I_k, I_k)).
IntMatrix lawrence_lift(const IntMatrix& A);

/// Base matrix plus the subset of cells carrying an upper bound.
struct LiftSpec {
    IntMatrix base;
    std::vector<int> bounded_cells;  // sorted, unique, 0-based column indices

    static LiftSpec all_bounded(IntMatrix A);
};

/// Identity-block rows (and slack columns) kept only for bounded cells:
/// shape (s+|B|) x (k+|B|). With B empty this is the base matrix itself.
IntMatrix partial_lawrence_lift(const LiftSpec& spec);

/// Graver basis: the primitive kernel vectors of A minimal under
/// sign-compatible componentwise domination. Completion-based; vectors whose
/// 1-norm exceeds norm_cap abort the run.
MoveSet graver_basis(const IntMatrix& A, Count norm_cap = 64);

/// Straightforward single-queue completion, kept as the reference
/// implementation for the parallel round-based one.
MoveSet graver_basis_serial(const IntMatrix& A, Count norm_cap = 64);

/// All support-minimal primitive kernel vectors, via Cramer vectors of
/// (rank+1)-column subsets. Refuses when the subset count exceeds the limit.
MoveSet circuits_general(const IntMatrix& A, std::int64_t subset_limit = 5'000'000);

/// Move set valid under every pattern of upper bounds on the bounded cells.
struct UniversalBasisResult {
    MoveSet moves;               // projected to the k table cells
    std::int64_t pre_dedupe_count = 0;
};
UniversalBasisResult universal_markov_basis(const LiftSpec& spec, Count norm_cap = 64);

namespace detail {
/// Sign-compatible domination: every nonzero g_i matches v_i's sign and
/// |g_i| <= |v_i|.
bool conformal_dominates(const LatticeVector& g, const LatticeVector& v);
MoveSet vectors_to_moveset(std::vector<LatticeVector> vecs, int k);
}  // namespace detail

}  // namespace fiberwalk
