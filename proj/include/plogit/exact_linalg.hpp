#pragma once

#include "plogit/rational_matrix.hpp"

#include <cstddef>

/// Exact linear algebra over the rationals. Every routine first scales
/// each row to integers (which changes neither rank nor nullspace) and then
/// runs fraction-free Bareiss elimination, pivoting on the first nonzero
/// entry of the current column.
namespace plogit::linalg {

std::size_t rank(const RationalMatrix& m);

/// Basis B of {x : m x = 0} with cols(B) = cols(m) - rank(m), returned in
/// the canonical form of rref_canonicalize.
RationalMatrix nullspace(const RationalMatrix& m);

/// Unique reduced column echelon representative of the column space of b:
/// pivot rows are the lowest possible indices, pivot entries equal 1 and
/// every other column is zero on a pivot row. Dependent columns are dropped,
/// so the result has rank(b) columns.
RationalMatrix rref_canonicalize(const RationalMatrix& b);

/// Throws std::invalid_argument for non-square input.
Rational det(const RationalMatrix& m);

}  // namespace plogit::linalg
