#pragma once

#include <optional>
#include <variant>

#include "cmw/transforms.hpp"

namespace cmw {

// (Delta_v g)_u = sum over w subset of v of (-1)^{|w|} g_{u or w}, built one coordinate at a time.
template <class T>
SignedTable<T> delta(SignedTable<T> g, Mask v) {
  const Mask n = full_mask(g.dim());
  if (!is_subset_of(v, n)) throw DimensionError("difference set exceeds dimension");
  for (int j = 0; j < g.dim(); ++j) {
    const Mask bit = Mask{1} << j;
    if (!(v & bit)) continue;
    for (Mask u = 0; u <= n; ++u)
      if (!(u & bit)) g[u] -= g[u | bit];
    for (Mask u = 0; u <= n; ++u)
      if (u & bit) g[u] = T(0);
  }
  return g;
}

template <class T>
SignedTable<T> delta(const BasicWeightTable<T>& g, Mask v) {
  return delta(g.as_signed(), v);
}

// Single entry by direct inclusion-exclusion over the 2^{|v|} subsets of v.
template <class T>
T delta_at(const SignedTable<T>& g, Mask v, Mask u) {
  const Mask n = full_mask(g.dim());
  if (!is_subset_of(v, n) || !is_subset_of(u, n)) throw DimensionError("subset exceeds dimension");
  if (u & v) return T(0);
  T acc(0);
  Mask w = 0;
  do {
    if (cardinality(w) % 2 == 0)
      acc += g[u | w];
    else
      acc -= g[u | w];
    w = (w - v) & v;
  } while (w != 0);
  return acc;
}

template <class T>
T delta_at(const BasicWeightTable<T>& g, Mask v, Mask u) {
  return delta_at(g.as_signed(), v, u);
}

// Finite dimension: M_d and N_d coincide.
enum class MonotoneClass { M, N };

template <class T>
struct ViolationWitness {
  Mask u = 0;
  Mask v = 0;
  T value{0};  // (Delta_v g)_u < 0
};

template <class T>
struct MonotonicityCertificate {
  bool is_member = false;
  MonotoneClass cls = MonotoneClass::M;
  // Member: T_{d,1}^down g, entrywise >= -tolerance. Non-member: a violated difference.
  std::variant<SignedTable<T>, ViolationWitness<T>> witness;
  T min_value{0};
  T tolerance{0};
};

template <class T>
T default_monotone_tolerance(const SignedTable<T>& g) {
  if constexpr (is_exact_v<T>) {
    return T(0);
  } else {
    return 1e-12 * g.max_abs();
  }
}

// g is in M_d iff T_{d,1}^down g >= 0, since (T_{d,1}^down g)_u = (Delta_{[d]\u} g)_u.
template <class T>
MonotonicityCertificate<T> check_completely_monotone(const BasicWeightTable<T>& g, std::optional<T> tol = std::nullopt) {
  const T tolerance = tol ? *tol : default_monotone_tolerance(g.as_signed());
  SignedTable<T> down = t_down(g, TransformParams<T>{T(1)});
  MonotonicityCertificate<T> cert;
  cert.tolerance = tolerance;
  cert.min_value = down.min_value();
  const Mask n = full_mask(g.dim());
  for (Mask u = 0; u <= n; ++u) {
    if (down[u] < -tolerance) {
      const Mask v = n & ~u;
      cert.is_member = false;
      cert.witness = ViolationWitness<T>{u, v, delta_at(g, v, u)};
      return cert;
    }
  }
  cert.is_member = true;
  cert.witness = std::move(down);
  return cert;
}

inline constexpr int kMaxBruteForceDim = 6;

// Every (Delta_v g)_u evaluated directly; first violation in (v, u) mask order.
template <class T>
MonotonicityCertificate<T> check_monotone_bruteforce(const BasicWeightTable<T>& g, std::optional<T> tol = std::nullopt) {
  const int d = g.dim();
  check_dense_dim(d, kMaxBruteForceDim);
  const T tolerance = tol ? *tol : default_monotone_tolerance(g.as_signed());
  const Mask n = full_mask(d);
  MonotonicityCertificate<T> cert;
  cert.tolerance = tolerance;
  bool first = true;
  std::optional<ViolationWitness<T>> violation;
  for (Mask v = 0; v <= n; ++v) {
    for (Mask u = 0; u <= n; ++u) {
      if (u & v) continue;
      const T val = delta_at(g, v, u);
      if (first || val < cert.min_value) cert.min_value = val;
      first = false;
      if (!violation && val < -tolerance) violation = ViolationWitness<T>{u, v, val};
    }
  }
  if (violation) {
    cert.is_member = false;
    cert.witness = *violation;
    return cert;
  }
  SignedTable<T> down(d);
  for (Mask u = 0; u <= n; ++u) down[u] = delta_at(g, n & ~u, u);
  cert.is_member = true;
  cert.witness = std::move(down);
  return cert;
}

}  // namespace cmw
