#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cmw/table.hpp"

namespace cmw {

// Scale parameter of the sum operator. Only C^2 enters the formulas.
template <class T>
struct TransformParams {
  T c_squared{1};

  static TransformParams from_c(const T& c) {
    if (!(c > T(0))) throw PreconditionError("scale C must be positive");
    return TransformParams{c * c};
  }
  static TransformParams from_c_squared(const T& c2) {
    if (!(c2 > T(0))) throw PreconditionError("C^2 must be positive");
    return TransformParams{c2};
  }
};

namespace detail {

template <class T>
std::vector<T> scale_powers(const T& base, int d) {
  std::vector<T> p(static_cast<std::size_t>(d) + 1, T(1));
  for (int k = 1; k <= d; ++k) p[k] = p[k - 1] * base;
  return p;
}

template <class T>
void check_finite(const SignedTable<T>& t, const char* what) {
  if constexpr (!is_exact_v<T>) {
    for (const T& v : t.values())
      if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": floating-point overflow");
  }
}

}  // namespace detail

// (T_up g)_u = sum over v containing u of C^{2|v|} g_v.
template <class T>
SignedTable<T> t_up(SignedTable<T> g, const TransformParams<T>& p) {
  const int d = g.dim();
  const auto pw = detail::scale_powers(p.c_squared, d);
  const Mask n = full_mask(d);
  for (Mask u = 0; u <= n; ++u) g[u] *= pw[cardinality(u)];
  for (int j = 0; j < d; ++j) {
    const Mask bit = Mask{1} << j;
    for (Mask u = 0; u <= n; ++u)
      if (!(u & bit)) g[u] += g[u | bit];
  }
  detail::check_finite(g, "t_up");
  return g;
}

template <class T>
BasicWeightTable<T> t_up(const BasicWeightTable<T>& g, const TransformParams<T>& p) {
  return BasicWeightTable<T>::from_signed(t_up(g.as_signed(), p));
}

// (T_down g)_u = C^{-2|u|} sum over v containing u of (-1)^{|v|-|u|} g_v.
template <class T>
SignedTable<T> t_down(SignedTable<T> g, const TransformParams<T>& p) {
  const int d = g.dim();
  const Mask n = full_mask(d);
  for (int j = 0; j < d; ++j) {
    const Mask bit = Mask{1} << j;
    for (Mask u = 0; u <= n; ++u)
      if (!(u & bit)) g[u] -= g[u | bit];
  }
  const auto pw = detail::scale_powers(p.c_squared, d);
  for (Mask u = 0; u <= n; ++u) g[u] /= pw[cardinality(u)];
  detail::check_finite(g, "t_down");
  return g;
}

template <class T>
SignedTable<T> t_down(const BasicWeightTable<T>& g, const TransformParams<T>& p) {
  return t_down(g.as_signed(), p);
}

inline constexpr int kMaxNaiveDim = 8;

// Direct double sums over supersets, O(4^d). Reference implementation.
template <class T>
SignedTable<T> t_up_naive(const SignedTable<T>& g, const TransformParams<T>& p) {
  const int d = g.dim();
  check_dense_dim(d, kMaxNaiveDim);
  const auto pw = detail::scale_powers(p.c_squared, d);
  const Mask n = full_mask(d);
  SignedTable<T> out(d);
  for (Mask u = 0; u <= n; ++u) {
    T acc(0);
    for (Mask v = 0; v <= n; ++v)
      if (is_subset_of(u, v)) acc += pw[cardinality(v)] * g[v];
    out[u] = acc;
  }
  detail::check_finite(out, "t_up_naive");
  return out;
}

template <class T>
SignedTable<T> t_down_naive(const SignedTable<T>& g, const TransformParams<T>& p) {
  const int d = g.dim();
  check_dense_dim(d, kMaxNaiveDim);
  const auto pw = detail::scale_powers(p.c_squared, d);
  const Mask n = full_mask(d);
  SignedTable<T> out(d);
  for (Mask u = 0; u <= n; ++u) {
    T acc(0);
    for (Mask v = 0; v <= n; ++v) {
      if (!is_subset_of(u, v)) continue;
      if ((cardinality(v) - cardinality(u)) % 2 == 0)
        acc += g[v];
      else
        acc -= g[v];
    }
    out[u] = acc / pw[cardinality(u)];
  }
  return out;
}

template <class T>
struct RoundTripReport {
  T down_after_up;  // max |T_down T_up g - g|
  T up_after_down;  // max |T_up T_down g - g|
};

template <class T>
RoundTripReport<T> roundtrip_down_up(const SignedTable<T>& g, const TransformParams<T>& p) {
  auto deviation = [&](const SignedTable<T>& h) {
    T m(0);
    for (Mask u = 0; u < g.size(); ++u) m = std::max(m, abs_value(T(h[u] - g[u])));
    return m;
  };
  return {deviation(t_down(t_up(g, p), p)), deviation(t_up(t_down(g, p), p))};
}

template <class T>
RoundTripReport<T> roundtrip_down_up(const BasicWeightTable<T>& g, const TransformParams<T>& p) {
  return roundtrip_down_up(g.as_signed(), p);
}

// Both sides of sum_{v in U_q, u subset v} sum_{w in U_p, v subset w} (-1)^{|v|} rho_w
// = (-1)^{|u|} sum_{v subset [p] \ [q]} rho_{u + v} for q <= p <= d and u subset [q].
template <class T>
std::pair<T, T> auxiliary_identity_sides(const SignedTable<T>& rho, int p, int q, Mask u) {
  const int d = rho.dim();
  if (q < 0 || q > p || p > d) throw DimensionError("need 0 <= q <= p <= d");
  const Mask Q = full_mask(q), P = full_mask(p);
  if (!is_subset_of(u, Q)) throw DimensionError("u must lie in [q]");
  T left(0);
  for (Mask v = 0; v <= Q; ++v) {
    if (!is_subset_of(u, v)) continue;
    T inner(0);
    for (Mask w = 0; w <= P; ++w)
      if (is_subset_of(v, w)) inner += rho[w];
    if (cardinality(v) % 2 == 0)
      left += inner;
    else
      left -= inner;
  }
  T right(0);
  const Mask rest = P & ~Q;
  Mask v = 0;
  do {
    right += rho[u | v];
    v = (v - rest) & rest;
  } while (v != 0);
  if (cardinality(u) % 2 == 1) right = -right;
  return {left, right};
}

}  // namespace cmw
