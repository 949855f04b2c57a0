#pragma once

// Integer polynomials, real algebraic numbers, Mahler measure, root counting
// and the search for polynomials with small values at a point.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bconv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Polynomial with integer coefficients, constant term first.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> coeffs);
    static IntPolynomial from_ints(const std::vector<long long>& coeffs);
    /// Comma-separated coefficients, constant term first: "-1,-1,1" is x^2 - x - 1.
    static IntPolynomial parse(const std::string& text);
    static IntPolynomial monomial(std::size_t k);

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
    [[nodiscard]] const std::vector<BigInt>& coeffs() const noexcept { return c_; }
    [[nodiscard]] BigInt coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigInt(0); }
    [[nodiscard]] const BigInt& leading() const;

    [[nodiscard]] BigInt content() const;
    /// Divided by the content, leading coefficient made positive.
    [[nodiscard]] IntPolynomial primitive() const;
    [[nodiscard]] IntPolynomial derivative() const;
    /// Strips the factor x^k with k maximal; returns k through `power`.
    [[nodiscard]] IntPolynomial strip_x(std::size_t* power = nullptr) const;

    [[nodiscard]] IntPolynomial operator+(const IntPolynomial& o) const;
    [[nodiscard]] IntPolynomial operator-(const IntPolynomial& o) const;
    [[nodiscard]] IntPolynomial operator*(const IntPolynomial& o) const;
    [[nodiscard]] IntPolynomial operator-() const;
    bool operator==(const IntPolynomial&) const = default;

    [[nodiscard]] double eval(double x) const;
    [[nodiscard]] Rational eval(const Rational& x) const;
    [[nodiscard]] int sign_at(const Rational& x) const;

    /// Membership in the class of polynomials of degree < n with |c_k| <= l.
    [[nodiscard]] bool in_class(int n, const BigInt& l) const;

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::string pretty() const;

private:
    void trim();
    std::vector<BigInt> c_;
};

/// True when q divides p in Q[x].
[[nodiscard]] bool divides(const IntPolynomial& q, const IntPolynomial& p);

/// Squarefree decomposition p = c * f_1 * f_2^2 * ... ; entry i-1 holds f_i
/// (primitive, possibly constant 1).
[[nodiscard]] std::vector<IntPolynomial> squarefree_decomposition(const IntPolynomial& p);

/// Product of the distinct irreducible factors (primitive).
[[nodiscard]] IntPolynomial squarefree_part(const IntPolynomial& p);

/// Isolating interval (lo, hi] for one real root; lo == hi marks a rational root.
struct RootInterval {
    Rational lo;
    Rational hi;
};

/// Sturm-certified isolation of all distinct real roots, in increasing order.
[[nodiscard]] std::vector<RootInterval> isolate_real_roots(const IntPolynomial& p);

/// Number of distinct real roots in (lo, hi].
[[nodiscard]] int count_real_roots(const IntPolynomial& p, const Rational& lo, const Rational& hi);

/// A real algebraic number given by its minimal polynomial and an isolating interval.
class AlgebraicNumber {
public:
    AlgebraicNumber() = default;

    /// The real root of p nearest `approx`, with p reduced to its minimal
    /// factor. Throws InputError if no real root lies within `tol` of approx.
    static AlgebraicNumber nearest_root(const IntPolynomial& p, double approx, double tol = 1e-6);
    static AlgebraicNumber from_interval(const IntPolynomial& p, const RootInterval& iv);
    static AlgebraicNumber rational(const Rational& q);

    [[nodiscard]] const IntPolynomial& minpoly() const noexcept { return minpoly_; }
    [[nodiscard]] int degree() const noexcept { return minpoly_.degree(); }
    [[nodiscard]] const RootInterval& interval() const noexcept { return iv_; }
    /// False when the minimal factor could not be certified (degree too high);
    /// the stored polynomial is then only the squarefree part.
    [[nodiscard]] bool minimal() const noexcept { return minimal_; }

    /// Interval of width at most 2^-bits.
    [[nodiscard]] RootInterval refined(int bits) const;
    [[nodiscard]] double to_double() const;

private:
    IntPolynomial minpoly_;
    RootInterval iv_;
    bool minimal_ = true;
};

/// Remainder of expr modulo the minimal polynomial of alpha, as rationals,
/// length deg(minpoly). The zero vector iff expr(alpha) = 0.
[[nodiscard]] std::vector<Rational> reduce_mod_minpoly(const IntPolynomial& expr,
                                                       const AlgebraicNumber& alpha);

/// Integer representation of sums sum_{k<n} a_k x^k modulo the minimal
/// polynomial m of alpha: row k of the table is c^{n-1} (x^k mod m), with c
/// the leading coefficient of m, so every row is an integer vector.
struct PowerTable {
    std::size_t width = 0;                    // deg m
    std::vector<std::vector<BigInt>> rows;    // n rows
};
[[nodiscard]] PowerTable power_table(const AlgebraicNumber& alpha, std::size_t n);

/// Mahler measure |b| * prod max(1, |z|) over the complex roots z, with root
/// moduli certified by disjoint inclusion disks.
[[nodiscard]] double mahler_measure(const IntPolynomial& p);

/// Number of nonzero roots (with multiplicity) of modulus < rho. Throws
/// CertificationError if some root modulus is within 1e-9 of rho.
[[nodiscard]] int count_roots_in_disk(const IntPolynomial& p, double rho);

/// Complex roots (with multiplicity) as (re, im) pairs, for diagnostics.
struct ComplexRoot {
    double re = 0.0;
    double im = 0.0;
    double radius = 0.0; ///< certified inclusion radius
};
[[nodiscard]] std::vector<ComplexRoot> complex_roots(const IntPolynomial& p);

enum class SearchStrategy { Exhaustive, MeetInMiddle, BranchAndBound };

[[nodiscard]] std::string strategy_name(SearchStrategy s);
[[nodiscard]] SearchStrategy parse_strategy(const std::string& s);

struct PolyCandidate {
    IntPolynomial poly;
    long double value = 0.0L; ///< |P(xi)| by Horner in long double from the top coefficient
};

/// Search over nonzero P = sum_{k<n} c_k x^k with c_k in `coeffs` for the
/// smallest |P(xi)|. Ties are broken by the coefficient vector read from the
/// highest degree down, smallest first. All strategies return identical results.
[[nodiscard]] PolyCandidate min_value_poly_search(double xi, int n, const std::vector<long long>& coeffs,
                                                  SearchStrategy strategy = SearchStrategy::MeetInMiddle,
                                                  std::uint64_t budget = 1ull << 26);

/// The k best candidates in the same order.
[[nodiscard]] std::vector<PolyCandidate> smallest_value_polys(double xi, int n,
                                                              const std::vector<long long>& coeffs,
                                                              std::size_t k,
                                                              SearchStrategy strategy = SearchStrategy::MeetInMiddle,
                                                              std::uint64_t budget = 1ull << 26);

/// Value used for ranking: Horner in long double starting at c_{n-1}.
[[nodiscard]] long double canonical_value(const std::vector<long long>& coeffs_low_first, long double xi);

} // namespace bconv
