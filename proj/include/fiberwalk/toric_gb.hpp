#pragma once

#include <vector>

#include "fiberwalk/core.hpp"

namespace fiberwalk::toric {

/// Graded (or plain lex) monomial order over a permutation of the variables.
/// var_order[0] is the most significant variable index.
struct TermOrder {
    enum class Kind { DegRevLex, DegLex, Lex };
    Kind kind = Kind::DegRevLex;
    std::vector<int> var_order;
};

/// x^a vs x^b: positive when x^a is the larger monomial.
int compare_monomials(const std::vector<Count>& a, const std::vector<Count>& b,
                      const TermOrder& order);

/// Reduced Groebner basis of the lattice ideal spanned by the given kernel
/// vectors (binomial x^{v+} - x^{v-} per vector). The lattice must be
/// saturated, which holds for integer-matrix kernels; common monomial
/// factors are stripped during reduction, so every element is returned as a
/// plain kernel vector. Output is the unique reduced basis for the order.
std::vector<std::vector<Count>> reduced_groebner_basis(
    const std::vector<std::vector<Count>>& lattice_gens, const TermOrder& order);

/// Order used for partially bounded liftings: table cells (row-major) are
/// more significant than slack variables, graded reverse lexicographic.
TermOrder partial_lift_order(int cell_count, int total_vars);

}  // namespace fiberwalk::toric
