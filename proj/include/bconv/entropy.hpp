#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bconv/measures.hpp"
#include "bconv/scales.hpp"

namespace bconv {

/// A partition of R^d given by a key function. Two points lie in the same
/// cell iff their keys are equal.
class Keying {
public:
    using Fn = std::function<void(std::span<const double>, std::int64_t*)>;

    Keying(std::size_t width, Fn fn, std::string name = "custom");

    /// E_n for the exponents of `lambda` (n may be negative).
    static Keying en(int n, const ScaleVector& lambda);
    /// E_n v pi_J^{-1} E_{n+m}.
    static Keying en_join_projected(int n, int m, std::vector<std::size_t> axes,
                                    const ScaleVector& lambda);
    /// Cells of floor(x / r + offset).
    static Keying grid(const ScaleVector& r, Point offset);
    /// Every distinct point its own cell.
    static Keying identity(std::size_t dim);
    /// One cell.
    static Keying trivial();

    /// Common refinement: key is the pair of component keys.
    [[nodiscard]] Keying join(const Keying& other) const;

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    void apply(std::span<const double> x, std::int64_t* out) const { fn_(x, out); }

private:
    std::size_t width_;
    Fn fn_;
    std::string name_;
};

enum class QuadMethod {
    Auto,  ///< exact breakpoint integration, quasi-random fallback over budget
    Exact, ///< exact only; refuse over budget
    Qmc,   ///< quasi-random offsets only
};

struct QuadratureSpec {
    QuadMethod method = QuadMethod::Auto;
    std::size_t offsets = 4096;
    std::uint64_t seed = 0;
    std::uint64_t cell_budget = 10'000'000;
};

struct EntropyReport {
    double value = 0.0;          ///< bits
    QuadMethod method = QuadMethod::Exact; ///< Exact or Qmc: what was actually used
    std::size_t offsets_used = 0;          ///< offset cells (exact) or offset samples (qmc)
    double error_bound = 0.0;              ///< bits; a rounding bound for exact, a block estimate for qmc
};

[[nodiscard]] std::string method_name(QuadMethod m);
[[nodiscard]] QuadMethod parse_quad_method(const std::string& s);

/// Shannon entropy (bits) of the normalized measure with respect to a keying.
[[nodiscard]] double partition_entropy(const DiscreteMeasure& mu, const Keying& k);

/// H(mu, fine | coarse), computed as H(mu, fine v coarse) - H(mu, coarse).
[[nodiscard]] double conditional_entropy(const DiscreteMeasure& mu, const Keying& fine,
                                         const Keying& coarse);

/// Shannon entropy of mu as a discrete distribution (each atom its own class).
[[nodiscard]] double shannon_entropy(const DiscreteMeasure& mu);

/// Average entropy H(mu; r). For mass c != 1 this is c * H(mu / c; r).
[[nodiscard]] EntropyReport avg_entropy(const DiscreteMeasure& mu, const ScaleVector& r,
                                        const QuadratureSpec& q = {});

/// H(mu; r | r') = H(mu; r) - H(mu; r'), both evaluated on the same offsets.
[[nodiscard]] EntropyReport avg_cond_entropy(const DiscreteMeasure& mu, const ScaleVector& r,
                                             const ScaleVector& r_coarse,
                                             const QuadratureSpec& q = {});

/// Number of offset cells exact integration of mu at scale r would visit.
[[nodiscard]] double exact_cell_count(const DiscreteMeasure& mu, const ScaleVector& r);

/// Offsets in [0,1)^dim used by the quasi-random mode: a Halton sequence
/// with a Cranley-Patterson rotation drawn from `seed`.
[[nodiscard]] std::vector<double> qmc_offsets(std::size_t dim, std::size_t count,
                                              std::uint64_t seed);

} // namespace bconv
