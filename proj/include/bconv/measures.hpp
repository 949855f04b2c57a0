#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bconv/scales.hpp"

namespace bconv {

using Point = std::vector<double>;

/// How coordinates are compared when atoms are merged.
enum class MergePolicy {
    Exact,     ///< bit-equal coordinates (+0 and -0 identified)
    Quantized, ///< coordinates keyed by round(x * 2^40); merged atoms sit on the 2^-40 lattice
};

inline constexpr int kQuantizeBits = 40;

/// Finitely supported nonnegative measure on R^d.
///
/// Atoms are stored in canonical form: sorted lexicographically by point,
/// merged under the active policy, zero weights removed. Values are immutable
/// after construction.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;

    /// Flat constructor: `coords` holds `weights.size()` points of length `dim`.
    static DiscreteMeasure from_flat(std::size_t dim, std::vector<double> coords,
                                     std::vector<double> weights,
                                     MergePolicy policy = MergePolicy::Exact);

    static DiscreteMeasure from_atoms(const std::vector<std::pair<Point, double>>& atoms,
                                      MergePolicy policy = MergePolicy::Exact);

    static DiscreteMeasure dirac(const Point& x, double weight = 1.0);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    [[nodiscard]] bool empty() const noexcept { return weights_.empty(); }
    [[nodiscard]] double mass() const noexcept { return mass_; }
    [[nodiscard]] MergePolicy policy() const noexcept { return policy_; }

    [[nodiscard]] std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

    /// The measure multiplied by a positive constant.
    [[nodiscard]] DiscreteMeasure scaled(double factor) const;
    /// The measure divided by its mass.
    [[nodiscard]] DiscreteMeasure normalized() const;

    bool operator==(const DiscreteMeasure& other) const;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<double> weights_;
    double mass_ = 0.0;
    MergePolicy policy_ = MergePolicy::Exact;
};

struct Translation {
    Point shift;
};

/// Coordinate projection onto the axes in `axes` (0-based, any order on input;
/// output coordinates follow increasing index order).
struct Projection {
    std::vector<std::size_t> axes;
};

/// S_r, T_x or pi_J.
using Transform = std::variant<ScaleVector, Translation, Projection>;

[[nodiscard]] DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
[[nodiscard]] DiscreteMeasure pushforward(const DiscreteMeasure& mu, const Transform& t);

/// zeta^{*k} for zeta = (delta_x + delta_y)/2, built directly from binomial weights.
[[nodiscard]] DiscreteMeasure bernoulli_power(const Point& x, const Point& y, std::size_t k);

/// mu + nu (same dimension).
[[nodiscard]] DiscreteMeasure add(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Sum of a range of doubles with Neumaier compensation.
[[nodiscard]] double compensated_sum(std::span<const double> values);

/// Atom list CSV: header `x1,...,xd,w`, one atom per row.
[[nodiscard]] DiscreteMeasure read_measure_csv(std::istream& in,
                                               MergePolicy policy = MergePolicy::Exact);
[[nodiscard]] DiscreteMeasure read_measure_csv(const std::string& path,
                                               MergePolicy policy = MergePolicy::Exact);
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu);

} // namespace bconv
