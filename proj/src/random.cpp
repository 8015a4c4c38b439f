#include "plogit/random.hpp"

#include <algorithm>

namespace plogit {

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (auto tag : tags) h = mix(h ^ mix(tag));
  return h;
}

Rational draw_positive_rational(Rng& rng, long bound) {
  std::uniform_int_distribution<long> dist(1, bound);
  const long num = dist(rng);
  const long den = dist(rng);
  return make_rational(num, den);
}

std::vector<Rational> draw_distinct(Rng& rng, std::size_t n, std::span<const Rational> exclude) {
  std::vector<Rational> out;
  out.reserve(n);
  auto taken = [&](const Rational& q) {
    return std::find(out.begin(), out.end(), q) != out.end() ||
           std::find(exclude.begin(), exclude.end(), q) != exclude.end();
  };
  while (out.size() < n) {
    Rational q = draw_positive_rational(rng);
    if (!taken(q)) out.push_back(std::move(q));
  }
  return out;
}

std::vector<Rational> draw_lag_coefficients(Rng& rng, int p) {
  for (;;) {
    std::vector<Rational> c;
    for (int l = 0; l < p; ++l) c.push_back(draw_positive_rational(rng));
    bool degenerate = false;
    for (unsigned mask = 1; mask < (1U << p) && !degenerate; ++mask) {
      Rational prod(1);
      for (int l = 0; l < p; ++l)
        if (mask & (1U << l)) prod *= c[static_cast<std::size_t>(l)];
      degenerate = (prod == 1);
    }
    if (!degenerate) return c;
  }
}

}  // namespace plogit
