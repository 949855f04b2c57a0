#include <algorithm>
#include <cmath>
#include <set>

#include "bconv/errors.hpp"
#include "bconv/system.hpp"

namespace bconv {

SystemSpec::SystemSpec(ScaleVector lambda, std::vector<AffineMap> maps)
    : lambda_(std::move(lambda)), maps_(std::move(maps)) {
    validate();
}

SystemSpec::SystemSpec(ScaleVector lambda, std::vector<AffineMap> maps, const std::vector<IntPolynomial>& minpolys)
    : lambda_(std::move(lambda)), maps_(std::move(maps)) {
    validate();
    if (minpolys.size() != dim()) throw InputError("minpolys must have one entry per axis");
    for (std::size_t j = 0; j < dim(); ++j) {
        exact_.push_back(AlgebraicNumber::nearest_root(minpolys[j], lambda_[j], 1e-6));
    }
}

SystemSpec::SystemSpec(std::vector<AlgebraicNumber> exact, std::vector<AffineMap> maps)
    : maps_(std::move(maps)), exact_(std::move(exact)) {
    std::vector<double> lam;
    for (const auto& e : exact_) lam.push_back(e.to_double());
    if (lam.empty()) throw InputError("lambda must be nonempty");
    for (double v : lam) {
        if (!(v > 0.0)) throw InputError("lambda entries must lie in (0,1)");
    }
    lambda_ = ScaleVector(lam);
    validate();
}

void SystemSpec::validate() {
    const std::size_t d = lambda_.size();
    if (d == 0) throw InputError("lambda must be nonempty");
    for (std::size_t j = 0; j < d; ++j) {
        if (!(lambda_[j] > 0.0 && lambda_[j] < 1.0)) throw InputError("lambda entries must lie in (0,1)");
        if (j > 0 && !(lambda_[j] < lambda_[j - 1])) throw InputError("lambda must be strictly decreasing");
    }
    if (maps_.empty()) throw InputError("at least one map is required");
    double total = 0.0;
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        if (maps_[i].a.size() != d) {
            throw InputError("map " + std::to_string(i) + ": translation has dimension " +
                             std::to_string(maps_[i].a.size()) + ", expected " + std::to_string(d));
        }
        if (!(maps_[i].p > 0.0) || !std::isfinite(maps_[i].p)) {
            throw InputError("map " + std::to_string(i) + ": p must be positive");
        }
        total += maps_[i].p;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw InputError("p must sum to 1");
    chi_ = lyapunov_exponents(lambda_);
    l0_ = 0;
    for (std::size_t j = 0; j < d; ++j) {
        for (const auto& m1 : maps_) {
            for (const auto& m2 : maps_) l0_ = std::max(l0_, m1.a[j] - m2.a[j]);
        }
    }
    hp_ = 0.0;
    for (const auto& m : maps_) hp_ -= m.p * std::log2(m.p);
}

std::vector<long long> SystemSpec::difference_set(std::size_t axis) const {
    std::set<long long> s;
    for (const auto& m1 : maps_) {
        for (const auto& m2 : maps_) s.insert(m1.a.at(axis) - m2.a.at(axis));
    }
    return {s.begin(), s.end()};
}

SystemSpec SystemSpec::with_lambda(const ScaleVector& lambda) const { return SystemSpec(lambda, maps_); }

} // namespace bconv
