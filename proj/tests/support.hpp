#pragma once

#include <random>
#include <vector>

#include "cmw/table.hpp"

namespace cmw::test {

inline WeightTable random_table(int d, std::mt19937_64& rng, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(0.0, hi);
  std::vector<double> v(std::size_t{1} << d);
  for (double& x : v) x = dist(rng);
  return WeightTable(d, std::move(v));
}

inline SignedTable<double> random_signed(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SignedTable<double> t(d);
  for (double& x : t.values()) x = dist(rng);
  return t;
}

// Small rationals p/q with p in [0, 20], q in [1, 7].
inline ExactWeightTable random_exact_table(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(0, 20), den(1, 7);
  std::vector<Rational> v(std::size_t{1} << d);
  for (Rational& x : v) x = Rational(num(rng), den(rng));
  return ExactWeightTable(d, std::move(v));
}

inline SignedTable<Rational> random_exact_signed(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
  SignedTable<Rational> t(d);
  for (Rational& x : t.values()) x = Rational(num(rng), den(rng));
  return t;
}

// (T_up g)_u = sum over supersets v of u of c2^{|v|} g_v, straight from the definition.
template <class T>
SignedTable<T> definition_up(const SignedTable<T>& g, const T& c2) {
  SignedTable<T> out(g.dim());
  for (Mask u = 0; u < g.size(); ++u) {
    T acc(0);
    for (Mask v = 0; v < g.size(); ++v) {
      if ((u & ~v) != 0) continue;
      T p(1);
      for (int k = 0; k < std::popcount(v); ++k) p *= c2;
      acc += p * g[v];
    }
    out[u] = acc;
  }
  return out;
}

template <class T>
T max_abs_diff(const SignedTable<T>& a, const SignedTable<T>& b) {
  T m(0);
  for (Mask u = 0; u < a.size(); ++u) {
    T d = a[u] - b[u];
    if (d < T(0)) d = -d;
    if (d > m) m = d;
  }
  return m;
}

}  // namespace cmw::test
