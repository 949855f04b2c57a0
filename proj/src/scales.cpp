#include "bconv/scales.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "bconv/errors.hpp"

namespace bconv {

namespace mp = boost::multiprecision;

namespace {

std::atomic<std::uint64_t> g_nudges{0};

constexpr double kNudgeWindow = 0x1p-45;
constexpr double kMaxIndex = 0x1p62;

std::int64_t floor_with_nudge(double t) {
    if (!std::isfinite(t) || std::fabs(t) >= kMaxIndex) {
        throw InputError("cell index out of 64-bit range (coordinate too large for partition level)");
    }
    const double f = std::floor(t);
    auto k = static_cast<std::int64_t>(f);
    if (t - f > 1.0 - kNudgeWindow) {
        ++k;
        g_nudges.fetch_add(1, std::memory_order_relaxed);
    }
    return k;
}

} // namespace

ScaleVector::ScaleVector(std::vector<double> entries) : r_(std::move(entries)) {
    for (double v : r_) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InputError("scale entries must be finite and positive");
        }
    }
}

ScaleVector ScaleVector::uniform(std::size_t dim, double value) {
    return ScaleVector(std::vector<double>(dim, value));
}

ScaleVector ScaleVector::operator*(const ScaleVector& other) const {
    if (other.size() != size()) throw InputError("scale dimension mismatch");
    std::vector<double> out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = r_[j] * other.r_[j];
    return ScaleVector(std::move(out));
}

ScaleVector ScaleVector::operator/(const ScaleVector& other) const {
    if (other.size() != size()) throw InputError("scale dimension mismatch");
    std::vector<double> out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = r_[j] / other.r_[j];
    return ScaleVector(std::move(out));
}

ScaleVector ScaleVector::inverse() const {
    std::vector<double> out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = 1.0 / r_[j];
    return ScaleVector(std::move(out));
}

ScaleVector ScaleVector::pow(double t) const {
    std::vector<double> out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = std::pow(r_[j], t);
    return ScaleVector(std::move(out));
}

bool ScaleVector::leq(const ScaleVector& other) const {
    if (other.size() != size()) throw InputError("scale dimension mismatch");
    for (std::size_t j = 0; j < size(); ++j) {
        if (r_[j] > other.r_[j]) return false;
    }
    return true;
}

double ScaleVector::det() const {
    return std::accumulate(r_.begin(), r_.end(), 1.0, std::multiplies<>());
}

double ScaleVector::norm() const {
    double s = 0.0;
    for (double v : r_) s += v * v;
    return std::sqrt(s);
}

bool ScaleVector::in_omega() const {
    if (r_.empty()) return false;
    for (std::size_t j = 0; j < r_.size(); ++j) {
        if (!(r_[j] > 0.0 && r_[j] < 1.0)) return false;
        if (j > 0 && !(r_[j] < r_[j - 1])) return false;
    }
    return true;
}

SSequence s_sequence(const ScaleVector& lambda, std::size_t n) {
    if (!lambda.in_omega()) {
        throw InputError("lambda must lie in Omega (strictly decreasing entries in (0,1))");
    }
    const std::size_t d = lambda.size();
    SSequence seq;
    seq.lambda = lambda;
    seq.terms.reserve(n + 1);
    seq.terms.push_back(ScaleVector::uniform(d, 1.0));
    seq.denominators.push_back(std::vector<mp::cpp_int>(d, mp::cpp_int(1)));

    // lambda_j = mantissa_j / 2^shift_j exactly.
    std::vector<mp::cpp_int> mantissa(d);
    std::vector<unsigned> shift(d);
    for (std::size_t j = 0; j < d; ++j) {
        int exp = 0;
        const double frac = std::frexp(lambda[j], &exp);
        auto m = static_cast<std::int64_t>(std::ldexp(frac, 53));
        int k = 53 - exp;
        while ((m & 1) == 0) {
            m >>= 1;
            --k;
        }
        mantissa[j] = m;
        shift[j] = static_cast<unsigned>(k);
    }

    std::vector<mp::cpp_int> mpow(d, mp::cpp_int(1));
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<std::uint64_t> b(d);
        std::vector<mp::cpp_int> den(d);
        std::vector<double> s(d);
        for (std::size_t j = 0; j < d; ++j) {
            mpow[j] *= mantissa[j];
            // b = floor(s_t / lambda^{t+1}) = floor(2^{k(t+1)} / (D_t * m^{t+1}))
            const mp::cpp_int num = mp::cpp_int(1) << (shift[j] * (t + 1));
            const mp::cpp_int q = num / (seq.denominators[t][j] * mpow[j]);
            if (q < 1 || q > std::numeric_limits<std::uint64_t>::max()) {
                throw InputError("s-sequence divisor out of range");
            }
            b[j] = static_cast<std::uint64_t>(q);
            den[j] = seq.denominators[t][j] * q;
            const mp::cpp_bin_float_50 inv = mp::cpp_bin_float_50(1) / mp::cpp_bin_float_50(den[j]);
            s[j] = static_cast<double>(inv);
            if (!(s[j] > 0.0) || !std::isnormal(s[j])) {
                throw InputError("s-sequence term below double range at n=" + std::to_string(t + 1));
            }
        }
        seq.divisors.push_back(std::move(b));
        seq.denominators.push_back(std::move(den));
        seq.terms.emplace_back(std::move(s));
    }
    return seq;
}

std::vector<double> lyapunov_exponents(const ScaleVector& lambda) {
    std::vector<double> chi(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) chi[j] = -std::log2(lambda[j]);
    return chi;
}

std::vector<int> en_levels(std::span<const double> chi, int n) {
    std::vector<int> levels(chi.size());
    for (std::size_t j = 0; j < chi.size(); ++j) {
        const double t = std::floor(chi[j] * static_cast<double>(n));
        if (std::fabs(t) > 1023.0) {
            throw InputError("partition level exceeds 1023 (beyond double exponent range)");
        }
        levels[j] = static_cast<int>(t);
    }
    return levels;
}

std::int64_t dyadic_index(double x, int level) {
    return floor_with_nudge(std::ldexp(x, level));
}

std::int64_t grid_index(double x, double r, double offset) {
    return floor_with_nudge(x / r + offset);
}

CellKey en_key(std::span<const double> x, int n, const ScaleVector& lambda) {
    if (x.size() != lambda.size()) throw InputError("point/lambda dimension mismatch");
    const auto levels = en_levels(lyapunov_exponents(lambda), n);
    CellKey key;
    key.level = n;
    key.index.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) key.index[j] = dyadic_index(x[j], levels[j]);
    return key;
}

std::vector<std::int64_t> grid_key(std::span<const double> x, const ScaleVector& r,
                                   std::span<const double> offset) {
    if (x.size() != r.size() || offset.size() != r.size()) {
        throw InputError("grid_key dimension mismatch");
    }
    std::vector<std::int64_t> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(offset[j] >= 0.0 && offset[j] < 1.0)) throw InputError("grid offset must lie in [0,1)");
        out[j] = grid_index(x[j], r[j], offset[j]);
    }
    return out;
}

std::uint64_t boundary_nudge_count() noexcept { return g_nudges.load(std::memory_order_relaxed); }
void reset_boundary_nudge_count() noexcept { g_nudges.store(0, std::memory_order_relaxed); }

} // namespace bconv
