#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bconv/algebraic.hpp"
#include "bconv/scales.hpp"

namespace bconv {

/// x -> diag(lambda) x + a, chosen with probability p.
struct AffineMap {
    std::vector<std::int64_t> a;
    double p = 0.0;
};

/// Homogeneous diagonal iterated function system with a probability vector.
class SystemSpec {
public:
    /// Validates lambda in Omega, integral translations of a common dimension,
    /// p > 0 and sum p = 1 within 1e-12.
    SystemSpec(ScaleVector lambda, std::vector<AffineMap> maps);

    /// As above, with one minimal-polynomial candidate per axis; the root
    /// nearest lambda_j (within 1e-6) becomes the exact contraction on axis j.
    SystemSpec(ScaleVector lambda, std::vector<AffineMap> maps, const std::vector<IntPolynomial>& minpolys);

    SystemSpec(std::vector<AlgebraicNumber> exact, std::vector<AffineMap> maps);

    [[nodiscard]] std::size_t dim() const noexcept { return lambda_.size(); }
    [[nodiscard]] const ScaleVector& lambda() const noexcept { return lambda_; }
    [[nodiscard]] const std::vector<AffineMap>& maps() const noexcept { return maps_; }
    [[nodiscard]] std::size_t size() const noexcept { return maps_.size(); }
    [[nodiscard]] const std::vector<double>& chi() const noexcept { return chi_; }
    [[nodiscard]] std::int64_t L0() const noexcept { return l0_; }
    /// Entropy of p in bits.
    [[nodiscard]] double entropy_p() const noexcept { return hp_; }

    [[nodiscard]] bool has_exact() const noexcept { return !exact_.empty(); }
    [[nodiscard]] const std::vector<AlgebraicNumber>& exact() const noexcept { return exact_; }

    /// Per-axis differences {a_{i1,j} - a_{i2,j}}, sorted, including 0.
    [[nodiscard]] std::vector<long long> difference_set(std::size_t axis) const;

    /// The same maps with a different contraction vector.
    [[nodiscard]] SystemSpec with_lambda(const ScaleVector& lambda) const;

private:
    void validate();

    ScaleVector lambda_;
    std::vector<AffineMap> maps_;
    std::vector<AlgebraicNumber> exact_;
    std::vector<double> chi_;
    std::int64_t l0_ = 0;
    double hp_ = 0.0;
};

} // namespace bconv
