#include <cmath>
#include <limits>

#include "bconv/algebraic.hpp"
#include "bconv/errors.hpp"
#include "poly_internal.hpp"

namespace bconv {

namespace mp = boost::multiprecision;

namespace {

double midpoint(const RootInterval& iv) { return static_cast<double>(Rational((iv.lo + iv.hi) / 2)); }

} // namespace

AlgebraicNumber AlgebraicNumber::rational(const Rational& q) {
    AlgebraicNumber a;
    a.minpoly_ = IntPolynomial({-mp::numerator(q), mp::denominator(q)}).primitive();
    a.iv_ = {q, q};
    return a;
}

AlgebraicNumber AlgebraicNumber::from_interval(const IntPolynomial& p, const RootInterval& iv) {
    const IntPolynomial f = squarefree_part(p);
    if (iv.lo == iv.hi) {
        if (f.sign_at(iv.lo) != 0) throw InputError("interval endpoint is not a root of " + p.pretty());
        return rational(iv.lo);
    }
    if (count_real_roots(f, iv.lo, iv.hi) != 1) {
        throw InputError("interval does not isolate exactly one root of " + p.pretty());
    }
    AlgebraicNumber a;
    auto m = detail::minimal_factor(f, iv);
    a.minimal_ = m.has_value();
    a.minpoly_ = m ? *m : f;
    if (a.minpoly_.degree() == 1) {
        const auto& c = a.minpoly_.coeffs();
        return rational(Rational(-c[0], c[1]));
    }
    // Shrink until the interval isolates the root of the factor too.
    RootInterval cur = iv;
    int bits = 8;
    while (count_real_roots(a.minpoly_, cur.lo, cur.hi) != 1) {
        cur = detail::refine(f, iv, bits);
        bits *= 2;
        if (bits > 4096) throw CertificationError("could not isolate the root in its minimal factor");
        if (cur.lo == cur.hi) return rational(cur.lo);
    }
    a.iv_ = cur;
    return a;
}

AlgebraicNumber AlgebraicNumber::nearest_root(const IntPolynomial& p, double approx, double tol) {
    if (p.is_zero()) throw InputError("the zero polynomial does not define an algebraic number");
    const IntPolynomial f = squarefree_part(p);
    const auto roots = isolate_real_roots(f);
    double best = std::numeric_limits<double>::infinity();
    const RootInterval* pick = nullptr;
    std::vector<RootInterval> fine;
    fine.reserve(roots.size());
    for (const auto& iv : roots) fine.push_back(detail::refine(f, iv, 64));
    for (const auto& iv : fine) {
        const double dist = std::fabs(midpoint(iv) - approx);
        if (dist < best) {
            best = dist;
            pick = &iv;
        }
    }
    if (pick == nullptr || best > tol) {
        throw InputError("no real root of " + p.pretty() + " near " + std::to_string(approx));
    }
    return from_interval(f, *pick);
}

RootInterval AlgebraicNumber::refined(int bits) const { return detail::refine(minpoly_, iv_, bits); }

double AlgebraicNumber::to_double() const { return midpoint(refined(70)); }

std::vector<Rational> reduce_mod_minpoly(const IntPolynomial& expr, const AlgebraicNumber& alpha) {
    const auto& m = alpha.minpoly();
    const std::size_t d = static_cast<std::size_t>(m.degree());
    auto rem = detail::divmod(detail::to_rpoly(expr), detail::to_rpoly(m)).second;
    rem.resize(d, Rational(0));
    return rem;
}

PowerTable power_table(const AlgebraicNumber& alpha, std::size_t n) {
    const auto& m = alpha.minpoly().coeffs();
    const std::size_t d = m.size() - 1;
    const BigInt& c = m.back();
    PowerTable t;
    t.width = d;
    // r holds c^k (x^k mod m), always integral.
    std::vector<std::vector<BigInt>> r;
    std::vector<BigInt> cur(d, 0);
    cur[0] = 1;
    for (std::size_t k = 0; k < n; ++k) {
        r.push_back(cur);
        const BigInt top = cur[d - 1];
        std::vector<BigInt> next(d, 0);
        for (std::size_t i = 0; i < d; ++i) {
            next[i] = (i ? c * cur[i - 1] : BigInt(0)) - top * m[i];
        }
        cur = std::move(next);
    }
    BigInt scale = 1;
    t.rows.resize(n);
    for (std::size_t k = n; k-- > 0;) {
        t.rows[k] = r[k];
        for (auto& v : t.rows[k]) v *= scale;
        scale *= c;
    }
    return t;
}

} // namespace bconv
