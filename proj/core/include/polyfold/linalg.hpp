#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "polyfold/matrix.hpp"

namespace polyfold {

// Exact rank by fraction-free (Bareiss) elimination after clearing row
// denominators.
std::size_t exact_rank(const Matrix<Rational>& m);

// Numerical rank: singular values above rel_threshold * sigma_max.
std::size_t numerical_rank(const Matrix<double>& m, double rel_threshold = 1e-9);

Rational determinant(Matrix<Rational> m);

// det(M_I M_I^T): squared volume of the parallelepiped spanned by rows I.
Rational gram_determinant(const Matrix<Rational>& m, std::span<const std::size_t> rows);

// Solves the square system a x = b exactly; nullopt when a is singular.
std::optional<std::vector<Rational>> solve_square(Matrix<Rational> a, std::vector<Rational> b);

}  // namespace polyfold
