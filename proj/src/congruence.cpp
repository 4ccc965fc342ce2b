#include "crtnc/congruence.hpp"

#include <stdexcept>
#include <utility>

namespace crtnc {

CongruenceClass::CongruenceClass(Int r, Int m) : residue(std::move(r)), modulus(std::move(m)) {
  if (modulus < 1) throw std::invalid_argument("congruence modulus must be >= 1");
  residue %= modulus;
  if (residue < 0) residue += modulus;
}

BezoutTriple ext_gcd(const Int& a, const Int& b) {
  if (a == 0 && b == 0) throw std::invalid_argument("gcd(0, 0) is undefined");
  Int r0 = a, r1 = b;
  Int x0 = 1, x1 = 0;
  Int y0 = 0, y1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    x0 -= q * x1;
    std::swap(x0, x1);
    y0 -= q * y1;
    std::swap(y0, y1);
  }
  return {std::move(r0), std::move(x0), std::move(y0)};
}

std::optional<CongruenceClass> merge(const CongruenceClass& c1, const CongruenceClass& c2) {
  const Int& m1 = c1.modulus;
  const Int& m2 = c2.modulus;
  auto [g, u, v] = ext_gcd(m1, m2);
  Int diff = c2.residue - c1.residue;
  if (diff % g != 0) return std::nullopt;

  // x = a1 + m1*s with (m1/g)*s ≡ diff/g (mod m2/g); u inverts m1/g there.
  Int step = m2 / g;
  Int s = (u % step) * ((diff / g) % step) % step;
  Int lcm = m1 / g * m2;
  Int x = (c1.residue + m1 * s) % lcm;
  if (x < 0) x += lcm;
  return CongruenceClass(std::move(x), std::move(lcm));
}

std::optional<CongruenceClass> solve_system(std::span<const CongruenceClass> classes) {
  if (classes.empty()) throw std::invalid_argument("solve_system: empty system");
  CongruenceClass acc = classes.front();
  for (std::size_t i = 1; i < classes.size(); ++i) {
    auto merged = merge(acc, classes[i]);
    if (!merged) return std::nullopt;
    acc = std::move(*merged);
  }
  return acc;
}

}  // namespace crtnc
