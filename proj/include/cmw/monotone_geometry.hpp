#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cmw/difference.hpp"
#include "cmw/simplex.hpp"

namespace cmw {

inline constexpr int kMaxMinorantDim = 12;

namespace detail {

template <class T>
T geometry_tolerance(const SignedTable<T>& g) {
  if constexpr (is_exact_v<T>) {
    return T(0);
  } else {
    return 1e-9 * std::max(1.0, g.max_abs());
  }
}

// Rows (T_up x)_u for C = 1: coefficient 1 for every v containing u.
template <class T>
std::vector<T> superset_row(Mask u, int d) {
  std::vector<T> row(std::size_t{1} << d, T(0));
  for (Mask v = 0; v < row.size(); ++v)
    if (is_subset_of(u, v)) row[v] = T(1);
  return row;
}

// Candidates are parametrized by x = T_down g >= 0 so that complete monotonicity is linear.
template <class T>
LinearProgram<T> sandwich_program(const SignedTable<T>& lower, const SignedTable<T>& upper) {
  const int d = upper.dim();
  LinearProgram<T> lp;
  const std::size_t n = std::size_t{1} << d;
  for (Mask u = 0; u < n; ++u) {
    auto row = superset_row<T>(u, d);
    lp.add_row(row, RowSense::LessEqual, upper[u]);
    if (lower[u] > T(0)) lp.add_row(std::move(row), RowSense::GreaterEqual, lower[u]);
  }
  lp.objective.assign(n, T(0));
  return lp;
}

template <class T>
std::vector<T> total_mass_objective(int d) {
  std::vector<T> c(std::size_t{1} << d);
  for (Mask v = 0; v < c.size(); ++v) c[v] = T(std::int64_t{1} << cardinality(v));
  return c;
}

}  // namespace detail

template <class T>
struct MaximalityReport {
  bool is_minorant = false;
  bool is_monotone = false;
  bool is_maximal = false;
  std::vector<T> headroom;  // largest feasible increase per coordinate; all zero when maximal
};

// Whether no completely monotone family h != candidate satisfies candidate <= h <= g.
template <class T>
MaximalityReport<T> verify_maximal(const BasicWeightTable<T>& g, const BasicWeightTable<T>& candidate) {
  const int d = g.dim();
  check_dense_dim(d, kMaxMinorantDim);
  if (candidate.dim() != d) throw DimensionError("dimensions differ");
  const T tol = detail::geometry_tolerance(g.as_signed());
  const std::size_t n = g.size();
  MaximalityReport<T> rep;
  rep.headroom.assign(n, T(0));
  rep.is_minorant = true;
  for (Mask u = 0; u < n; ++u)
    if (candidate[u] > g[u] + tol) rep.is_minorant = false;
  rep.is_monotone = check_completely_monotone(candidate).is_member;
  if (!rep.is_minorant || !rep.is_monotone) return rep;

  // any strictly larger feasible family has strictly larger total mass
  LinearProgram<T> lp = detail::sandwich_program(candidate.as_signed(), g.as_signed());
  lp.objective = detail::total_mass_objective<T>(d);
  const LpResult<T> total = solve_lp(lp);
  if (total.status != LpStatus::Optimal) throw NumericalError("maximality program failed");
  T mass(0);
  for (Mask u = 0; u < n; ++u) mass += candidate[u];
  if (total.value <= mass + tol * T(static_cast<std::int64_t>(n))) {
    rep.is_maximal = true;
    return rep;
  }
  for (Mask u = 0; u < n; ++u) {
    if (!(candidate[u] < g[u] - tol)) continue;
    lp.objective = detail::superset_row<T>(u, d);
    const LpResult<T> r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) throw NumericalError("headroom program failed");
    rep.headroom[u] = std::max(T(0), T(r.value - candidate[u]));
  }
  rep.is_maximal = std::all_of(rep.headroom.begin(), rep.headroom.end(), [&](const T& h) { return h <= tol; });
  return rep;
}

template <class T>
struct MinorantResult {
  BasicWeightTable<T> minorant;
  T total_mass{0};
  MaximalityReport<T> verification;
};

// A maximal element of {h completely monotone : h <= g}, found by maximizing the total mass.
template <class T>
MinorantResult<T> maximal_monotone_minorant(const BasicWeightTable<T>& g) {
  const int d = g.dim();
  check_dense_dim(d, kMaxMinorantDim);
  LinearProgram<T> lp = detail::sandwich_program(SignedTable<T>(d), g.as_signed());
  lp.objective = detail::total_mass_objective<T>(d);
  const LpResult<T> r = solve_lp(lp);
  if (r.status != LpStatus::Optimal) throw NumericalError("minorant program failed");
  SignedTable<T> x(d, r.x);
  for (T& v : x.values())
    if (v < T(0)) v = T(0);
  SignedTable<T> h = t_up(std::move(x), TransformParams<T>{T(1)});
  for (Mask u = 0; u < g.size(); ++u) h[u] = std::min(h[u], g[u]);
  MinorantResult<T> out{BasicWeightTable<T>::from_signed(std::move(h)), r.value, {}};
  out.verification = verify_maximal(g, out.minorant);
  return out;
}

template <class T>
struct HypercubeViolation {
  Mask v = 0;
  Mask x = 0;
  Mask y = 0;
  T value{0};
};

template <class T>
struct HypercubeReport {
  bool cm_decreasing = true;
  std::optional<HypercubeViolation<T>> violation;
};

inline constexpr int kMaxHypercubeDim = 4;

// f(x) = g_{ {j : x_j = 1} } on {0,1}^d must satisfy sum_{w subset v} (-1)^{|w|} f(x_{-w} : y_w) >= 0
// for non-empty v and x_j <= y_j on v. Points of {0,1}^d are encoded as masks.
template <class T>
HypercubeReport<T> hypercube_extension_check(const BasicWeightTable<T>& g, std::optional<T> tol = std::nullopt) {
  const int d = g.dim();
  check_dense_dim(d, kMaxHypercubeDim);
  const T tolerance = tol ? *tol : default_monotone_tolerance(g.as_signed());
  const Mask n = full_mask(d);
  HypercubeReport<T> rep;
  for (Mask v = 1; v <= n; ++v) {
    for (Mask x = 0; x <= n; ++x) {
      for (Mask y = 0; y <= n; ++y) {
        if (!is_subset_of(x & v, y & v)) continue;
        T acc(0);
        Mask w = 0;
        do {
          const T f = g[(x & ~w) | (y & w)];
          if (cardinality(w) % 2 == 0)
            acc += f;
          else
            acc -= f;
          w = (w - v) & v;
        } while (w != 0);
        if (acc < -tolerance) {
          rep.cm_decreasing = false;
          rep.violation = HypercubeViolation<T>{v, x, y, acc};
          return rep;
        }
      }
    }
  }
  return rep;
}

// (Delta_v g)_u against (-1)^n (D_{s_n} ... D_{s_1} g)_u with (D_s h)_w = h_{w + s} - h_w.
template <class T>
std::pair<T, T> delta_prime_equivalence(const SignedTable<T>& g, const std::vector<int>& order, Mask u) {
  const int d = g.dim();
  Mask v = 0;
  for (int s : order) {
    if (s < 1 || s > d) throw DimensionError("coordinate outside 1..d");
    if (v & coordinate_bit(s)) throw PreconditionError("coordinates in the chain must be distinct");
    v |= coordinate_bit(s);
  }
  if (!is_subset_of(u, full_mask(d))) throw DimensionError("subset exceeds dimension");
  SignedTable<T> h = g;
  for (int s : order) {
    SignedTable<T> next(d);
    const Mask bit = coordinate_bit(s);
    for (Mask w = 0; w < h.size(); ++w) next[w] = h[w | bit] - h[w];
    h = std::move(next);
  }
  T right = h[u];
  if (order.size() % 2 == 1) right = -right;
  return {delta_at(g, v, u), right};
}

template <class T>
std::pair<T, T> delta_prime_equivalence(const BasicWeightTable<T>& g, const std::vector<int>& order, Mask u) {
  return delta_prime_equivalence(g.as_signed(), order, u);
}

// Sign condition (-1)^n D_{s_n} ... D_{s_1} g >= 0 over all chains of distinct singletons.
template <class T>
bool chain_sign_condition(const BasicWeightTable<T>& g, std::optional<T> tol = std::nullopt) {
  const int d = g.dim();
  check_dense_dim(d, kMaxHypercubeDim);
  const T tolerance = tol ? *tol : default_monotone_tolerance(g.as_signed());
  std::vector<int> chain;
  bool ok = true;
  auto recurse = [&](auto&& self, Mask used) -> void {
    if (!ok) return;
    if (!chain.empty()) {
      for (Mask u = 0; u < g.size() && ok; ++u)
        if (delta_prime_equivalence(g, chain, u).second < -tolerance) ok = false;
    }
    for (int s = 1; s <= d; ++s) {
      if (used & coordinate_bit(s)) continue;
      chain.push_back(s);
      self(self, used | coordinate_bit(s));
      chain.pop_back();
    }
  };
  recurse(recurse, 0);
  return ok;
}

template <class T>
struct MeasureViews {
  BasicWeightTable<T> density;
  BasicWeightTable<T> cdf;  // T_{d,1}^up of the density
  SignedTable<T> density_from_cdf;
};

// Non-negative weights as a measure on the subsets: the sum operator yields its upper distribution function.
template <class T>
MeasureViews<T> measure_views(const BasicWeightTable<T>& g) {
  const TransformParams<T> one{T(1)};
  BasicWeightTable<T> cdf = t_up(g, one);
  SignedTable<T> back = t_down(cdf, one);
  return {g, std::move(cdf), std::move(back)};
}

}  // namespace cmw
