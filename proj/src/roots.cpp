#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "bconv/algebraic.hpp"
#include "bconv/errors.hpp"
#include "poly_internal.hpp"

namespace bconv {

namespace mp = boost::multiprecision;

namespace {

template <unsigned Digits>
struct Solver {
    using R = mp::number<mp::cpp_bin_float<Digits>>;
    using C = mp::cpp_complex<Digits>;

    struct Root {
        C z;
        R radius;
    };

    std::vector<R> coeffs;  // constant first
    std::vector<R> dcoeffs; // derivative

    explicit Solver(const IntPolynomial& f) {
        for (const auto& c : f.coeffs()) coeffs.emplace_back(c);
        for (std::size_t k = 1; k < coeffs.size(); ++k) dcoeffs.push_back(coeffs[k] * static_cast<unsigned>(k));
    }

    static C horner(const std::vector<R>& c, const C& z) {
        C v(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + C(*it);
        return v;
    }

    std::vector<C> initial_guesses() const {
        const std::size_t n = coeffs.size() - 1;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const double lc = static_cast<double>(coeffs.back());
        for (std::size_t i = 0; i < n; ++i) {
            if (i + 1 < n) m(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -static_cast<double>(coeffs[i]) / lc;
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
        std::vector<C> z;
        const auto ev = es.eigenvalues();
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            double re = ev[i].real();
            double im = ev[i].imag();
            if (!std::isfinite(re) || !std::isfinite(im)) {
                re = std::cos(0.4 + static_cast<double>(i));
                im = std::sin(0.4 + static_cast<double>(i));
            }
            // A slight asymmetric nudge so that the iteration can leave the real axis.
            const double t = 1e-7 * static_cast<double>(i + 1);
            z.emplace_back(R(re + t), R(im + 0.5 * t));
        }
        return z;
    }

    std::optional<std::vector<Root>> solve() const {
        const std::size_t n = coeffs.size() - 1;
        std::vector<C> z = initial_guesses();
        const R tol = R(1) / mp::pow(R(10), static_cast<int>(Digits) - 8);
        for (int iter = 0; iter < 2000; ++iter) {
            R worst = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const C fz = horner(coeffs, z[i]);
                const C dz = horner(dcoeffs, z[i]);
                if (fz == C(0)) continue;
                if (dz == C(0)) {
                    z[i] += C(R(1e-6), R(1e-6));
                    worst = 1;
                    continue;
                }
                const C ratio = fz / dz;
                C s(0);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) s += C(1) / (z[i] - z[j]);
                }
                const C w = ratio / (C(1) - ratio * s);
                z[i] -= w;
                const R step = mp::abs(w) / std::max(R(1), R(mp::abs(z[i])));
                worst = std::max(worst, step);
            }
            if (worst < tol) break;
        }
        std::vector<Root> out;
        for (std::size_t i = 0; i < n; ++i) {
            const C fz = horner(coeffs, z[i]);
            const C dz = horner(dcoeffs, z[i]);
            if (dz == C(0)) return std::nullopt;
            out.push_back({z[i], R(static_cast<unsigned>(n)) * R(mp::abs(fz / dz))});
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!(R(mp::abs(out[i].z - out[j].z)) > out[i].radius + out[j].radius)) return std::nullopt;
            }
        }
        return out;
    }
};

template <unsigned Digits>
std::optional<std::vector<detail::CertifiedRoot>> to_certified(const IntPolynomial& f) {
    using S = Solver<Digits>;
    auto roots = S(f).solve();
    if (!roots) return std::nullopt;
    std::vector<detail::CertifiedRoot> out;
    for (const auto& r : *roots) {
        out.push_back({static_cast<long double>(mp::real(r.z)), static_cast<long double>(mp::imag(r.z)),
                       static_cast<long double>(r.radius), static_cast<long double>(mp::abs(r.z))});
    }
    return out;
}

// Positive divisors of |n| when n is small enough to factor by trial division.
std::vector<BigInt> small_divisors(const BigInt& n) {
    const BigInt a = mp::abs(n);
    if (a > BigInt(1'000'000'000'000LL)) return {BigInt(1), a};
    std::vector<BigInt> lo;
    std::vector<BigInt> hi;
    for (BigInt d = 1; d * d <= a; ++d) {
        if (a % d == 0) {
            lo.push_back(d);
            if (d * d != a) hi.push_back(a / d);
        }
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

template <unsigned Digits>
std::optional<IntPolynomial> minimal_factor_impl(const IntPolynomial& f, const RootInterval& iv) {
    using S = Solver<Digits>;
    using R = typename S::R;
    using C = typename S::C;
    auto roots = S(f).solve();
    if (!roots) return std::nullopt;
    const std::size_t n = roots->size();
    const RootInterval fine = detail::refine(f, iv, 100);
    const Rational sum = fine.lo + fine.hi;
    const R mid = R(mp::numerator(sum)) / R(mp::denominator(sum)) / 2;
    std::size_t alpha = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (mp::abs((*roots)[i].z - C(mid)) < mp::abs((*roots)[alpha].z - C(mid))) alpha = i;
    }
    // Group the remaining roots into conjugate-closed items.
    std::vector<std::vector<std::size_t>> items;
    std::vector<bool> used(n, false);
    used[alpha] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        const auto& r = (*roots)[i];
        if (mp::abs(mp::imag(r.z)) <= r.radius) {
            items.push_back({i});
            used[i] = true;
            continue;
        }
        std::size_t best = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j] || j == i) continue;
            if (best == n || mp::abs((*roots)[j].z - mp::conj(r.z)) < mp::abs((*roots)[best].z - mp::conj(r.z))) best = j;
        }
        if (best == n) return std::nullopt;
        items.push_back({i, best});
        used[i] = used[best] = true;
    }
    const auto divisors = small_divisors(f.leading());
    const R round_tol = R(1) / mp::pow(R(10), static_cast<int>(Digits) / 2);
    for (std::size_t target = 1; target < n; ++target) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << items.size()); ++mask) {
            std::size_t size = 1;
            for (std::size_t b = 0; b < items.size(); ++b) {
                if (mask >> b & 1u) size += items[b].size();
            }
            if (size != target) continue;
            std::vector<C> q{C(1)};
            auto mul = [&](const C& z) {
                q.push_back(C(0));
                for (std::size_t k = q.size() - 1; k > 0; --k) q[k] = q[k - 1] - z * q[k];
                q[0] = -z * q[0];
            };
            mul((*roots)[alpha].z);
            for (std::size_t b = 0; b < items.size(); ++b) {
                if (mask >> b & 1u) {
                    for (std::size_t i : items[b]) mul((*roots)[i].z);
                }
            }
            for (const auto& c : divisors) {
                std::vector<BigInt> coeffs;
                bool ok = true;
                for (const auto& qk : q) {
                    const R v = R(c) * mp::real(qk);
                    const R r = mp::round(v);
                    if (mp::abs(v - r) > round_tol * std::max(R(1), R(mp::abs(v)))) {
                        ok = false;
                        break;
                    }
                    coeffs.push_back(r.template convert_to<BigInt>());
                }
                if (!ok) continue;
                IntPolynomial cand = IntPolynomial(std::move(coeffs)).primitive();
                if (cand.degree() == static_cast<int>(target) && divides(cand, f) &&
                    count_real_roots(cand, iv.lo == iv.hi ? iv.lo - 1 : iv.lo, iv.hi) >= 1) {
                    return cand;
                }
            }
        }
    }
    return f;
}

struct Factored {
    std::vector<std::pair<std::vector<detail::CertifiedRoot>, int>> parts; // roots of f_i and multiplicity i
    std::size_t zero_roots = 0;
};

Factored factor_roots(const IntPolynomial& p) {
    if (p.is_zero()) throw InputError("roots of the zero polynomial are undefined");
    Factored out;
    const IntPolynomial q = p.strip_x(&out.zero_roots);
    const auto sq = squarefree_decomposition(q);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        if (sq[i].degree() <= 0) continue;
        out.parts.emplace_back(detail::certified_roots(sq[i]), static_cast<int>(i + 1));
    }
    return out;
}

} // namespace

std::vector<detail::CertifiedRoot> detail::certified_roots(const IntPolynomial& f) {
    if (f.degree() < 1) return {};
    if (f.degree() == 1) {
        const long double re = -f.coeffs()[0].convert_to<long double>() / f.coeffs()[1].convert_to<long double>();
        return {{re, 0.0L, 0.0L, std::fabs(re)}};
    }
    if (auto r = to_certified<50>(f)) return *r;
    if (auto r = to_certified<100>(f)) return *r;
    throw CertificationError("could not certify the roots of " + f.pretty());
}

std::optional<IntPolynomial> detail::minimal_factor(const IntPolynomial& f, const RootInterval& iv) {
    if (f.degree() <= 1) return f;
    if (iv.lo == iv.hi) {
        return IntPolynomial({-mp::numerator(iv.lo), mp::denominator(iv.lo)}).primitive();
    }
    if (f.degree() > 20) return std::nullopt;
    if (auto r = minimal_factor_impl<50>(f, iv)) return r;
    if (auto r = minimal_factor_impl<100>(f, iv)) return r;
    return std::nullopt;
}

double mahler_measure(const IntPolynomial& p) {
    const Factored fr = factor_roots(p);
    long double m = mp::abs(p.leading()).convert_to<long double>();
    for (const auto& [roots, mult] : fr.parts) {
        for (const auto& r : roots) {
            if (r.modulus > 1.0L) m *= std::pow(r.modulus, static_cast<long double>(mult));
        }
    }
    return static_cast<double>(m);
}

int count_roots_in_disk(const IntPolynomial& p, double rho) {
    if (!(rho > 0.0)) throw InputError("disk radius must be positive");
    const Factored fr = factor_roots(p);
    int count = 0;
    for (const auto& [roots, mult] : fr.parts) {
        for (const auto& r : roots) {
            const long double slack = std::max(r.radius, 1e-9L);
            if (std::fabs(r.modulus - static_cast<long double>(rho)) <= slack) {
                throw CertificationError("a root modulus lies within tolerance of rho; perturb rho");
            }
            if (r.modulus < static_cast<long double>(rho)) count += mult;
        }
    }
    return count;
}

std::vector<ComplexRoot> complex_roots(const IntPolynomial& p) {
    const Factored fr = factor_roots(p);
    std::vector<ComplexRoot> out(fr.zero_roots, ComplexRoot{});
    for (const auto& [roots, mult] : fr.parts) {
        for (const auto& r : roots) {
            for (int k = 0; k < mult; ++k) {
                out.push_back({static_cast<double>(r.re), static_cast<double>(r.im), static_cast<double>(r.radius)});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ComplexRoot& a, const ComplexRoot& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    });
    return out;
}

} // namespace bconv
