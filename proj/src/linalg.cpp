#include "ilab/linalg.h"

namespace ilab {

std::vector<std::size_t> rref(RatMatrix& m, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        std::size_t piv = row;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[row]);
        const Rational inv = 1 / m[row][c];
        for (std::size_t k = c; k < cols; ++k) m[row][k] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][c] == 0) continue;
            const Rational f = m[r][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

std::size_t rank(RatMatrix m, std::size_t cols) { return rref(m, cols).size(); }

std::vector<RatVec> nullspace(RatMatrix m, std::size_t cols)
{
    auto pivots = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVec v(cols);
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RatVec> solve(RatMatrix m, const RatVec& b, std::size_t cols)
{
    if (b.size() != m.size()) throw DimensionMismatch("solve: right-hand side length differs from row count");
    for (std::size_t r = 0; r < m.size(); ++r) m[r].push_back(b[r]);
    auto pivots = rref(m, cols + 1);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    RatVec x(cols);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m[i][cols];
    return x;
}

std::vector<RatVec> restrict_kernel(const std::vector<RatVec>& basis, const RatMatrix& rows)
{
    if (basis.empty()) return {};
    // Coordinates c with rows * (basis^T c) = 0.
    RatMatrix reduced;
    reduced.reserve(rows.size());
    for (const auto& row : rows) {
        RatVec r(basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j) r[j] = dot(row, basis[j]);
        reduced.push_back(std::move(r));
    }
    auto coords = nullspace(std::move(reduced), basis.size());
    std::vector<RatVec> out;
    for (const auto& c : coords) {
        RatVec v(basis.front().size());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (c[j] == 0) continue;
            for (std::size_t k = 0; k < v.size(); ++k) v[k] += c[j] * basis[j][k];
        }
        out.push_back(std::move(v));
    }
    return out;
}

Rational dot(const RatVec& a, const RatVec& b)
{
    if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

}  // namespace ilab
