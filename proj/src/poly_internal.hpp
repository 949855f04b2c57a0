#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bconv/algebraic.hpp"

namespace bconv::detail {

using RPoly = std::vector<Rational>;

RPoly to_rpoly(const IntPolynomial& p);
void trim(RPoly& a);
RPoly derivative(const RPoly& a);
std::pair<RPoly, RPoly> divmod(RPoly a, const RPoly& b);
RPoly monic(RPoly a);
RPoly gcd(RPoly a, RPoly b);
IntPolynomial to_primitive(const RPoly& a);
int sign_at(const RPoly& a, const Rational& x);

/// Bisection of an isolating interval of a squarefree f down to width 2^-bits.
RootInterval refine(const IntPolynomial& f, RootInterval iv, int bits);

/// Roots of a squarefree polynomial with f(0) != 0, refined in extended
/// precision and certified by pairwise disjoint inclusion disks.
struct CertifiedRoot {
    long double re;
    long double im;
    long double radius;
    long double modulus;
};
std::vector<CertifiedRoot> certified_roots(const IntPolynomial& f);

/// The irreducible factor of the squarefree primitive f that vanishes at the
/// root isolated by iv, or nullopt when deg f is beyond the search limit.
std::optional<IntPolynomial> minimal_factor(const IntPolynomial& f, const RootInterval& iv);

} // namespace bconv::detail
