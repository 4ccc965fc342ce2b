#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <span>
#include <vector>

namespace crtnc {

using Int = boost::multiprecision::cpp_int;

// A residue class x ≡ residue (mod modulus), normalized to 0 <= residue < modulus.
struct CongruenceClass {
  Int residue;
  Int modulus;

  CongruenceClass(Int r, Int m);

  bool contains(const Int& x) const { return (x - residue) % modulus == 0; }

  bool operator==(const CongruenceClass&) const = default;
};

struct BezoutTriple {
  Int g;  // gcd(a, b)
  Int x;
  Int y;  // a*x + b*y == g
};

// Extended Euclidean algorithm over naturals. Throws std::invalid_argument
// when a and b are both zero (gcd undefined).
BezoutTriple ext_gcd(const Int& a, const Int& b);

// Merge two congruence classes into the unique class modulo lcm(m1, m2)
// satisfying both, or nullopt when gcd(m1, m2) does not divide a1 - a2.
// Incompatibility is expected data from a distributed sender, not a fault.
std::optional<CongruenceClass> merge(const CongruenceClass& c1, const CongruenceClass& c2);

// Left fold of merge. The list must be non-empty; the result modulus is the
// lcm of all input moduli.
std::optional<CongruenceClass> solve_system(std::span<const CongruenceClass> classes);

}  // namespace crtnc
