#pragma once

// Exact overlaps of systems with algebraic contractions, and approximation of
// contraction parameters by roots of small-coefficient polynomials.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bconv/algebraic.hpp"
#include "bconv/system.hpp"

namespace bconv {

struct OverlapReport {
    int n_max = 0;
    /// Smallest n with two distinct words whose maps coincide on axis j.
    std::vector<std::optional<int>> per_axis;
    /// Smallest n with a coincidence on every axis at once.
    std::optional<int> joint;
};

[[nodiscard]] OverlapReport exact_overlap_depth(const SystemSpec& spec, int n_max,
                                                std::uint64_t budget = std::uint64_t{1} << 24);

struct AxisApprox {
    std::size_t axis = 0;
    bool found = false;        ///< a candidate with a root in (0,1) was found
    IntPolynomial poly;        ///< witness (or nearest-root candidate on failure)
    long double value = 0.0L;  ///< |P(lambda_j)|
    double eta = 0.0;          ///< chosen root
    double distance = 0.0;     ///< |lambda_j - eta|
    std::optional<AlgebraicNumber> exact;
    std::size_t rank = 0;      ///< position of the witness in the value ordering
    std::string note;
};

struct ApproxOptions {
    SearchStrategy strategy = SearchStrategy::MeetInMiddle;
    std::size_t candidates = 16; ///< candidates examined per axis, in value order
    int rw_n = 0;                ///< level for the exact random-walk entropy of the result; 0 skips it
    std::uint64_t budget = std::uint64_t{1} << 26;
};

struct ApproxReport {
    int n = 0;
    std::vector<AxisApprox> axes;
    bool success = false; ///< every axis found and eta in Omega
    std::vector<double> eta;
    bool eta_in_omega = false;
    double max_distance = 0.0;
    std::optional<double> rw_entropy;
    std::string rw_note;
};

[[nodiscard]] ApproxReport approximate_parameters(const SystemSpec& spec, int n, const ApproxOptions& opt = {});

} // namespace bconv
