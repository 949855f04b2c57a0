#include <algorithm>
#include <sstream>
#include <utility>

#include "bconv/algebraic.hpp"
#include "bconv/errors.hpp"
#include "poly_internal.hpp"

namespace bconv {

using boost::multiprecision::abs;
using boost::multiprecision::denominator;
using boost::multiprecision::gcd;
using boost::multiprecision::numerator;

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPolynomial IntPolynomial::from_ints(const std::vector<long long>& coeffs) {
    std::vector<BigInt> c(coeffs.begin(), coeffs.end());
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::parse(const std::string& text) {
    std::vector<BigInt> c;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw InputError("empty coefficient in polynomial \"" + text + "\"");
        tok = tok.substr(b, e - b + 1);
        std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
        if (i == tok.size() || tok.find_first_not_of("0123456789", i) != std::string::npos) {
            throw InputError("bad coefficient \"" + tok + "\" in polynomial \"" + text + "\"");
        }
        if (tok[0] == '+') tok = tok.substr(1);
        c.emplace_back(tok);
    }
    if (c.empty()) throw InputError("empty polynomial");
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::monomial(std::size_t k) {
    std::vector<BigInt> c(k + 1, 0);
    c[k] = 1;
    return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const BigInt& IntPolynomial::leading() const {
    if (c_.empty()) throw InputError("zero polynomial has no leading coefficient");
    return c_.back();
}

BigInt IntPolynomial::content() const {
    BigInt g = 0;
    for (const auto& v : c_) g = gcd(g, abs(v));
    return g;
}

IntPolynomial IntPolynomial::primitive() const {
    if (c_.empty()) return {};
    BigInt g = content();
    if (c_.back() < 0) g = -g;
    std::vector<BigInt> c = c_;
    for (auto& v : c) v /= g;
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigInt> c(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) c[k - 1] = c_[k] * static_cast<unsigned>(k);
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::strip_x(std::size_t* power) const {
    std::size_t k = 0;
    while (k < c_.size() && c_[k] == 0) ++k;
    if (power) *power = c_.empty() ? 0 : k;
    if (c_.empty()) return {};
    return IntPolynomial(std::vector<BigInt>(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end()));
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
    std::vector<BigInt> c(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t k = 0; k < c_.size(); ++k) c[k] += c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k) c[k] += o.c_[k];
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator-() const {
    std::vector<BigInt> c = c_;
    for (auto& v : c) v = -v;
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const { return *this + (-o); }

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
    if (c_.empty() || o.c_.empty()) return {};
    std::vector<BigInt> c(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    }
    return IntPolynomial(std::move(c));
}

double IntPolynomial::eval(double x) const {
    double v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + it->convert_to<double>();
    return v;
}

Rational IntPolynomial::eval(const Rational& x) const {
    // Horner on numerator with a common denominator power.
    const BigInt p = numerator(x);
    const BigInt q = denominator(x);
    BigInt acc = 0;
    BigInt qpow = 1;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * p + *it * qpow;
        qpow *= q;
    }
    if (c_.empty()) return 0;
    // acc = q^{deg} P(p/q)
    return Rational(acc, qpow / q);
}

int IntPolynomial::sign_at(const Rational& x) const {
    const Rational v = eval(x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

bool IntPolynomial::in_class(int n, const BigInt& l) const {
    if (degree() >= n) return false;
    return std::all_of(c_.begin(), c_.end(), [&](const BigInt& v) { return abs(v) <= l; });
}

std::string IntPolynomial::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (k) out += ',';
        out += c_[k].str();
    }
    return out;
}

std::string IntPolynomial::pretty() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
        const BigInt& v = c_[i];
        if (v == 0) continue;
        const bool neg = v < 0;
        const BigInt mag = neg ? BigInt(-v) : v;
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (mag != 1 || i == 0) out += mag.str();
        if (i >= 1) out += "x";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
}

namespace detail {

RPoly to_rpoly(const IntPolynomial& p) {
    RPoly r;
    r.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) r.emplace_back(c);
    return r;
}

void trim(RPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

RPoly derivative(const RPoly& a) {
    RPoly d;
    for (std::size_t k = 1; k < a.size(); ++k) d.push_back(a[k] * static_cast<unsigned>(k));
    trim(d);
    return d;
}

std::pair<RPoly, RPoly> divmod(RPoly a, const RPoly& b) {
    if (b.empty()) throw InputError("polynomial division by zero");
    trim(a);
    RPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const Rational f = a.back() / b.back();
        q[shift] = f;
        for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= f * b[k];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

RPoly monic(RPoly a) {
    trim(a);
    if (a.empty()) return a;
    const Rational lc = a.back();
    for (auto& v : a) v /= lc;
    return a;
}

RPoly gcd(RPoly a, RPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

IntPolynomial to_primitive(const RPoly& a) {
    BigInt l = 1;
    for (const auto& v : a) l = boost::multiprecision::lcm(l, denominator(v));
    std::vector<BigInt> c;
    c.reserve(a.size());
    for (const auto& v : a) c.push_back(numerator(v) * (l / denominator(v)));
    return IntPolynomial(std::move(c)).primitive();
}

int sign_at(const RPoly& a, const Rational& x) {
    Rational v = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * x + *it;
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

} // namespace detail

bool divides(const IntPolynomial& q, const IntPolynomial& p) {
    if (q.is_zero()) return p.is_zero();
    return detail::divmod(detail::to_rpoly(p), detail::to_rpoly(q)).second.empty();
}

std::vector<IntPolynomial> squarefree_decomposition(const IntPolynomial& p) {
    using namespace detail;
    if (p.is_zero()) throw InputError("squarefree decomposition of the zero polynomial");
    std::vector<IntPolynomial> out;
    if (p.degree() == 0) return out;
    // Yun's algorithm over Q.
    const RPoly f = to_rpoly(p);
    const RPoly fp = derivative(f);
    const RPoly a0 = gcd(f, fp);
    RPoly b = divmod(f, a0).first;
    RPoly c = divmod(fp, a0).first;
    RPoly d = c;
    {
        auto bp = derivative(b);
        for (std::size_t k = 0; k < std::max(d.size(), bp.size()); ++k) {
            if (k >= d.size()) d.push_back(0);
            if (k < bp.size()) d[k] -= bp[k];
        }
        trim(d);
    }
    while (b.size() > 1) {
        RPoly a = gcd(b, d);
        out.push_back(to_primitive(a));
        b = divmod(b, a).first;
        c = divmod(d, a).first;
        d = c;
        auto bp = derivative(b);
        for (std::size_t k = 0; k < std::max(d.size(), bp.size()); ++k) {
            if (k >= d.size()) d.push_back(0);
            if (k < bp.size()) d[k] -= bp[k];
        }
        trim(d);
    }
    while (!out.empty() && out.back().degree() == 0) out.pop_back();
    return out;
}

IntPolynomial squarefree_part(const IntPolynomial& p) {
    if (p.is_zero()) throw InputError("squarefree part of the zero polynomial");
    if (p.degree() <= 0) return IntPolynomial::from_ints({1});
    using namespace detail;
    const RPoly f = to_rpoly(p);
    const RPoly g = gcd(f, derivative(f));
    return to_primitive(divmod(f, g).first);
}

namespace {

struct Sturm {
    std::vector<detail::RPoly> seq;

    explicit Sturm(const IntPolynomial& p) {
        using namespace detail;
        seq.push_back(to_rpoly(p));
        seq.push_back(derivative(seq[0]));
        while (!seq.back().empty() && seq.back().size() > 1) {
            auto r = divmod(seq[seq.size() - 2], seq.back()).second;
            for (auto& v : r) v = -v;
            if (r.empty()) break;
            seq.push_back(std::move(r));
        }
    }

    int changes(const Rational& x) const {
        int count = 0;
        int last = 0;
        for (const auto& s : seq) {
            const int v = detail::sign_at(s, x);
            if (v == 0) continue;
            if (last != 0 && v != last) ++count;
            last = v;
        }
        return count;
    }
};

Rational root_bound(const IntPolynomial& p) {
    const BigInt lc = abs(p.leading());
    BigInt m = 0;
    for (int k = 0; k < p.degree(); ++k) m = std::max(m, BigInt(abs(p.coeffs()[static_cast<std::size_t>(k)])));
    // Cauchy: every root has modulus < 1 + max|c_k| / |c_n|.
    return Rational(1) + Rational(m, lc) + 1;
}

} // namespace

int count_real_roots(const IntPolynomial& p, const Rational& lo, const Rational& hi) {
    if (p.is_zero()) throw InputError("root count of the zero polynomial");
    if (!(lo < hi)) return 0;
    const Sturm s(squarefree_part(p));
    return s.changes(lo) - s.changes(hi);
}

std::vector<RootInterval> isolate_real_roots(const IntPolynomial& p) {
    if (p.is_zero()) throw InputError("real roots of the zero polynomial");
    std::vector<RootInterval> out;
    if (p.degree() <= 0) return out;
    const IntPolynomial f = squarefree_part(p);
    const Sturm s(f);
    const Rational b = root_bound(f);
    std::vector<std::pair<Rational, Rational>> stack{{-b, b}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        const int n = s.changes(lo) - s.changes(hi);
        if (n == 0) continue;
        if (n == 1) {
            RootInterval iv{lo, hi};
            if (f.sign_at(hi) == 0) iv.lo = hi;
            out.push_back(iv);
            continue;
        }
        const Rational mid = (lo + hi) / 2;
        stack.emplace_back(lo, mid);
        stack.emplace_back(mid, hi);
    }
    std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.hi < b.hi; });
    return out;
}

RootInterval detail::refine(const IntPolynomial& f, RootInterval iv, int bits) {
    if (iv.lo == iv.hi) return iv;
    const Rational width = Rational(1, BigInt(1) << bits);
    int s_hi = f.sign_at(iv.hi);
    while (iv.hi - iv.lo > width) {
        const Rational mid = (iv.lo + iv.hi) / 2;
        const int s_mid = f.sign_at(mid);
        if (s_mid == 0) return {mid, mid};
        if (s_mid * s_hi < 0) {
            iv.lo = mid;
        } else {
            iv.hi = mid;
            s_hi = s_mid;
        }
    }
    return iv;
}

} // namespace bconv
