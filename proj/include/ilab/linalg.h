#pragma once

#include "ilab/rational.h"

#include <optional>
#include <vector>

namespace ilab {

using RatMatrix = std::vector<RatVec>;

/// Reduces m in place to reduced row echelon form; returns the pivot columns.
/// Rows of m must share one length.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t cols);

std::size_t rank(RatMatrix m, std::size_t cols);

/// Kernel basis of m (vectors v with m v = 0). Each basis vector has a 1 in
/// its own free column and 0 in the other free columns; basis order follows
/// the free columns.
std::vector<RatVec> nullspace(RatMatrix m, std::size_t cols);

/// Some solution of m x = b, or nullopt when inconsistent. Free variables are 0.
std::optional<RatVec> solve(RatMatrix m, const RatVec& b, std::size_t cols);

/// Restricts a kernel basis by extra rows: returns a basis of
/// {v in span(basis) : rows v = 0}.
std::vector<RatVec> restrict_kernel(const std::vector<RatVec>& basis, const RatMatrix& rows);

Rational dot(const RatVec& a, const RatVec& b);

}  // namespace ilab
