#pragma once

// Discrete approximations of self-affine measures and the estimators built on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bconv/measures.hpp"
#include "bconv/system.hpp"

namespace bconv {

/// Float: points by Horner in double, atoms merged on bit equality.
/// Exact: words identified by their translation polynomials reduced modulo the
/// minimal polynomial of each lambda_j.
enum class Arithmetic { Float, Exact };

[[nodiscard]] std::string arithmetic_name(Arithmetic a);

struct BuildOptions {
    Arithmetic arithmetic = Arithmetic::Float;
    std::uint64_t budget = std::uint64_t{1} << 24; ///< words enumerated before merging
};

/// mu^(n) = sum over words u of length n of p_u delta at phi_u(0).
[[nodiscard]] DiscreteMeasure build_level_n(const SystemSpec& spec, int n, const BuildOptions& opt = {});

/// Law of sum_{a <= k < b} a_{xi_k} lambda^k, i.e. S_{lambda^a} mu^(b-a).
[[nodiscard]] DiscreteMeasure build_factor(const SystemSpec& spec, int a, int b, const BuildOptions& opt = {});

struct LyapunovReport {
    int m = 0;
    double dim = 0.0;
    double gamma = 0.0;
    /// bounds[j] = j + (H(p) - chi_1 - ... - chi_j) / chi_{j+1}, j = 0..d-1.
    std::vector<double> bounds;
};

[[nodiscard]] LyapunovReport lyapunov_dimension(const SystemSpec& spec);

struct KappaReport {
    int n = 0;
    double entropy_bits = 0.0; ///< H(mu^(n), E_n)
    double kappa = 0.0;
    int stability_n = 0;       ///< n + 5, or 0 when over budget
    double stability_kappa = 0.0; ///< (1/n) H(mu^(n+5), E_n)
    std::string warning;
};

[[nodiscard]] KappaReport kappa_estimate(const SystemSpec& spec, int n, const BuildOptions& opt = {});

/// (kappa + sum_{j<d} (chi_d - chi_j)) / chi_d clamped to [0, d]; meaningful as
/// a dimension estimate only when the projection to the first d-1 axes has
/// full dimension.
[[nodiscard]] double dim_from_kappa(double kappa, const ScaleVector& lambda);

struct RwReport {
    int n = 0;
    double value = 0.0;      ///< (1/n) H of the law of phi_u, bits
    std::size_t words = 0;
    std::size_t classes = 0;
    Arithmetic arithmetic = Arithmetic::Float;
    /// Float mode: "collision detected" / "no collision detected";
    /// exact mode: "exact overlap" / "no exact overlap".
    std::string verdict;
};

[[nodiscard]] RwReport rw_entropy_upper(const SystemSpec& spec, int n, const BuildOptions& opt = {});

struct NonSatRow {
    std::size_t axis = 0;
    int n = 0;
    double value = 0.0;     ///< (1/m) H(mu, E_{n+m} | E_n v pi^{-1} E_{n+m}), bits
    double threshold = 0.0; ///< chi_j - eps
    bool below = true;
};

struct NonSatReport {
    std::vector<NonSatRow> rows;
    bool non_saturated = true;
};

[[nodiscard]] NonSatReport non_saturation_profile(const DiscreteMeasure& mu, const ScaleVector& lambda,
                                                  double eps, int m, int n_lo, int n_hi);

struct SeparationRow {
    int n = 0;
    std::size_t axis = 0;
    double delta = 0.0; ///< min distance between distinct words, 0 on a collision
    double c = 0.0;     ///< delta^(1/n)
    bool exact_collision = false;
};

[[nodiscard]] std::vector<SeparationRow> separation_profile(const SystemSpec& spec, int n_max,
                                                            const BuildOptions& opt = {});

} // namespace bconv
