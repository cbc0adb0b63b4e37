#pragma once

// Cayley-Dickson doubling: R, C, H, O in dimensions 1, 2, 4, 8.
// (a1, a2)(b1, b2) = (a1 b1 - conj(b2) a2, b2 a1 + a2 conj(b1)).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace isogeo::cd {

template <class T>
std::vector<T> conj(std::span<const T> a) {
  std::vector<T> r(a.begin(), a.end());
  for (std::size_t i = 1; i < r.size(); ++i) r[i] = -r[i];
  return r;
}

template <class T>
std::vector<T> mul(std::span<const T> a, std::span<const T> b) {
  const std::size_t d = a.size();
  if (b.size() != d || d == 0 || (d & (d - 1)) != 0)
    throw std::invalid_argument("cd::mul: dimension must be a matching power of two");
  if (d == 1) return {a[0] * b[0]};
  const std::size_t h = d / 2;
  auto a1 = a.first(h), a2 = a.subspan(h), b1 = b.first(h), b2 = b.subspan(h);
  auto cb1 = conj<T>(b1), cb2 = conj<T>(b2);
  auto p = mul<T>(a1, b1), q = mul<T>(std::span<const T>(cb2), a2);
  auto r = mul<T>(b2, a1), s = mul<T>(a2, std::span<const T>(cb1));
  std::vector<T> out(d);
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = p[i] - q[i];
    out[h + i] = r[i] + s[i];
  }
  return out;
}

template <class T>
std::vector<T> unit(std::size_t d, std::size_t i) {
  std::vector<T> e(d, T(0));
  e[i] = T(1);
  return e;
}

} // namespace isogeo::cd
