#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lemnis {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// x_k = log|z_k|; entries may be -inf (coordinate hyperplanes), never +inf.
using LogPoint = std::vector<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LogPoint log_moduli(std::span<const Complex> z);
LogPoint log_moduli(std::span<const double> modulus);

// sum_k a_k x_k with the convention 0 * (-inf) = 0.
double log_dot(std::span<const double> a, std::span<const double> x);

bool is_zero_vector(std::span<const Complex> z);

}  // namespace lemnis

#include <random>

namespace lemnis {

// Uniform direction on the unit sphere of C^n.
CVector random_unit_sphere(std::mt19937_64& rng, std::size_t n);

double euclidean_norm(std::span<const Complex> z);

}  // namespace lemnis
