#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bconv {

/// Element of the multiplicative group R_{>0}^d acting diagonally on R^d.
class ScaleVector {
public:
    ScaleVector() = default;
    explicit ScaleVector(std::vector<double> entries);

    static ScaleVector uniform(std::size_t dim, double value);

    [[nodiscard]] std::size_t size() const noexcept { return r_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return r_[j]; }
    [[nodiscard]] const std::vector<double>& entries() const noexcept { return r_; }

    [[nodiscard]] ScaleVector operator*(const ScaleVector& other) const;
    [[nodiscard]] ScaleVector operator/(const ScaleVector& other) const;
    [[nodiscard]] ScaleVector inverse() const;
    [[nodiscard]] ScaleVector pow(double t) const;

    /// Componentwise partial order: true iff r_j <= other_j for all j.
    [[nodiscard]] bool leq(const ScaleVector& other) const;
    [[nodiscard]] double det() const;
    [[nodiscard]] double norm() const;
    /// Strictly decreasing entries inside (0,1).
    [[nodiscard]] bool in_omega() const;

    bool operator==(const ScaleVector&) const = default;

private:
    std::vector<double> r_;
};

/// The integral-ratio sequence s_0, s_1, ... attached to lambda.
///
/// s_0 = (1,...,1) and s_{n+1,j} = s_{n,j} / b_{n+1,j} where b_{n+1,j} is the
/// unique positive integer with s_{n,j}/b >= lambda_j^{n+1} > s_{n,j}/(b+1).
/// Construction is carried out in exact integer arithmetic on the binary
/// expansion of each lambda_j, so no tie can be misclassified.
struct SSequence {
    ScaleVector lambda;
    std::vector<ScaleVector> terms;                        // s_0..s_n
    std::vector<std::vector<std::uint64_t>> divisors;      // b_1..b_n (index k-1 holds b_k)
    std::vector<std::vector<boost::multiprecision::cpp_int>> denominators; // s_{k,j} = 1 / denominators[k][j]

    [[nodiscard]] std::size_t length() const noexcept { return terms.size() - 1; }
    [[nodiscard]] const ScaleVector& operator[](std::size_t n) const { return terms.at(n); }
};

[[nodiscard]] SSequence s_sequence(const ScaleVector& lambda, std::size_t n);

/// Cell index of a point in a non-conformal partition E_n, together with the level.
struct CellKey {
    std::vector<std::int64_t> index;
    int level = 0;

    bool operator==(const CellKey&) const = default;
};

/// chi_j = -log2(lambda_j).
[[nodiscard]] std::vector<double> lyapunov_exponents(const ScaleVector& lambda);

/// Per-axis dyadic depths floor(chi_j * n) of E_n. Depths whose magnitude
/// exceeds 1023 are rejected.
[[nodiscard]] std::vector<int> en_levels(std::span<const double> chi, int n);

/// Index of x in the level-`level` dyadic partition of R: floor(x * 2^level).
/// Values within 2^-45 (in cell units) below a boundary are moved across it.
[[nodiscard]] std::int64_t dyadic_index(double x, int level);

/// Index of x in the scaled grid with per-axis offset: floor(x / r + offset).
[[nodiscard]] std::int64_t grid_index(double x, double r, double offset);

[[nodiscard]] CellKey en_key(std::span<const double> x, int n, const ScaleVector& lambda);
[[nodiscard]] std::vector<std::int64_t> grid_key(std::span<const double> x, const ScaleVector& r,
                                                 std::span<const double> offset);

/// Number of keys nudged across a cell boundary by the 2^-45 hazard rule
/// since process start (or the last reset).
[[nodiscard]] std::uint64_t boundary_nudge_count() noexcept;
void reset_boundary_nudge_count() noexcept;

} // namespace bconv
