#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cmw/errors.hpp"
#include "cmw/scalar.hpp"

namespace cmw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A value together with a bound on its truncation error.
struct Certified {
  double value = 0.0;
  double error = 0.0;

  bool is_finite() const { return std::isfinite(value); }
  double lo() const { return value - error; }
  double hi() const { return value + error; }
  bool relative_error_below(double rel) const { return error <= rel * std::abs(value) || error == 0.0; }
};

// Sum over j >= n of j^{-s} for s > 1, n >= 1: direct head plus Euler-Maclaurin tail.
// The Euler-Maclaurin remainder for x^{-s} is bounded by the first omitted correction.
inline Certified power_tail_sum(double s, double n) {
  if (!(s > 1.0)) return {kInf, 0.0};
  if (n < 1.0) n = 1.0;
  const double start = std::max(n, std::max(64.0, 2.0 * std::ceil(s)));
  long double head = 0.0L;
  for (double j = n; j < start; j += 1.0) head += std::pow(static_cast<long double>(j), -static_cast<long double>(s));
  static constexpr double bernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6,
                                         -3617.0 / 510};
  const double N = start;
  long double tail = std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
  double rising = s;  // s (s+1) ... (s+2k-2)
  double fact = 2.0;  // (2k)!
  double last = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double term = bernoulli[k - 1] / fact * rising * std::pow(N, -s - 2.0 * k + 1.0);
    if (k == 8) {
      last = std::abs(term);
      break;
    }
    tail += term;
    rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  const double value = static_cast<double>(head + tail);
  return {value, last + 4.0 * std::numeric_limits<double>::epsilon() * value};
}

namespace detail {
inline std::string num(double x) { return format_scalar(x); }
}  // namespace detail

// Non-negative, non-increasing sequence x_1, x_2, ... of coordinate weights.
class Sequence {
 public:
  struct PowerLaw {
    double c, lambda;  // c j^{-lambda}
  };
  struct Geometric {
    double c, q;  // c q^j
  };
  struct Explicit {
    std::vector<double> values;  // zero beyond the list
  };
  struct Saturated {
    std::shared_ptr<const Sequence> base;
    double inner, outer;  // outer * inner b_j / (1 + inner b_j)
  };
  using Variant = std::variant<PowerLaw, Geometric, Explicit, Saturated>;

  static Sequence power_law(double c, double lambda) {
    if (!(c >= 0) || !(lambda >= 0) || !std::isfinite(c) || !std::isfinite(lambda))
      throw PreconditionError("power law needs c >= 0 and lambda >= 0");
    return Sequence(PowerLaw{c, lambda});
  }
  static Sequence geometric(double c, double q) {
    if (!(c >= 0) || !(q >= 0 && q <= 1) || !std::isfinite(c)) throw PreconditionError("geometric needs c >= 0, 0 <= q <= 1");
    return Sequence(Geometric{c, q});
  }
  static Sequence explicit_values(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] >= 0) || !std::isfinite(values[i])) throw PreconditionError("sequence entries must be finite and >= 0");
      if (i > 0 && values[i] > values[i - 1]) throw PreconditionError("sequence must be non-increasing");
    }
    while (!values.empty() && values.back() == 0.0) values.pop_back();
    return Sequence(Explicit{std::move(values)});
  }
  static Sequence saturated(const Sequence& base, double inner, double outer = 1.0) {
    if (!(inner > 0) || !(outer >= 0)) throw PreconditionError("saturation needs inner > 0, outer >= 0");
    return Sequence(Saturated{std::make_shared<const Sequence>(base), inner, outer});
  }

  const Variant& variant() const { return v_; }

  double operator()(std::size_t j) const {
    return std::visit(
        [j](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PowerLaw>) {
            return s.c == 0 ? 0.0 : s.c * std::pow(static_cast<double>(j), -s.lambda);
          } else if constexpr (std::is_same_v<S, Geometric>) {
            return s.c * std::pow(s.q, static_cast<double>(j));
          } else if constexpr (std::is_same_v<S, Explicit>) {
            return j >= 1 && j <= s.values.size() ? s.values[j - 1] : 0.0;
          } else {
            const double b = s.inner * (*s.base)(j);
            return s.outer * b / (1.0 + b);
          }
        },
        v_);
  }

  // Number of leading entries outside which the sequence vanishes, if finite.
  std::optional<std::size_t> support_size() const {
    if (auto* e = std::get_if<Explicit>(&v_)) return e->values.size();
    if (auto* p = std::get_if<PowerLaw>(&v_); p && p->c == 0) return 0;
    if (auto* g = std::get_if<Geometric>(&v_); g && (g->c == 0 || g->q == 0)) return 0;
    if (auto* s = std::get_if<Saturated>(&v_)) {
      if (s->outer == 0) return 0;
      return s->base->support_size();
    }
    return std::nullopt;
  }

  // sup{tau : sum_j x_j^{1/tau} < inf}.
  double decay() const {
    return std::visit(
        [](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PowerLaw>) {
            return s.c == 0 ? kInf : s.lambda;
          } else if constexpr (std::is_same_v<S, Geometric>) {
            return (s.c == 0 || s.q < 1) ? kInf : 0.0;
          } else if constexpr (std::is_same_v<S, Explicit>) {
            return kInf;
          } else {
            return s.outer == 0 ? kInf : s.base->decay();
          }
        },
        v_);
  }

  // Whether sum_j x_j^e is finite.
  bool summable(double e = 1.0) const {
    if (support_size()) return true;
    const double p = decay();
    if (std::isinf(p)) return true;
    // power laws diverge exactly at the decay exponent
    return 1.0 / e < p;
  }

  bool tends_to_zero() const {
    if (support_size()) return true;
    return std::visit(
        [](const auto& s) -> bool {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PowerLaw>) {
            return s.lambda > 0;
          } else if constexpr (std::is_same_v<S, Geometric>) {
            return s.q < 1;
          } else if constexpr (std::is_same_v<S, Explicit>) {
            return true;
          } else {
            return s.base->tends_to_zero();
          }
        },
        v_);
  }

  Sequence scaled(double t) const {
    if (!(t >= 0) || !std::isfinite(t)) throw PreconditionError("scale must be finite and >= 0");
    return std::visit(
        [t](const auto& s) -> Sequence {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PowerLaw>) {
            return Sequence(PowerLaw{s.c * t, s.lambda});
          } else if constexpr (std::is_same_v<S, Geometric>) {
            return Sequence(Geometric{s.c * t, s.q});
          } else if constexpr (std::is_same_v<S, Explicit>) {
            std::vector<double> v = s.values;
            for (double& x : v) x *= t;
            return explicit_values(std::move(v));
          } else {
            return Sequence(Saturated{s.base, s.inner, s.outer * t});
          }
        },
        v_);
  }

  // Entrywise power x_j^e.
  Sequence pow(double e) const {
    if (!(e > 0)) throw PreconditionError("exponent must be positive");
    return std::visit(
        [e](const auto& s) -> Sequence {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PowerLaw>) {
            return Sequence(PowerLaw{std::pow(s.c, e), s.lambda * e});
          } else if constexpr (std::is_same_v<S, Geometric>) {
            return Sequence(Geometric{std::pow(s.c, e), std::pow(s.q, e)});
          } else if constexpr (std::is_same_v<S, Explicit>) {
            std::vector<double> v = s.values;
            for (double& x : v) x = std::pow(x, e);
            return explicit_values(std::move(v));
          } else {
            throw PreconditionError("powers of saturated sequences are not supported");
          }
        },
        v_);
  }

  // Smallest J >= from with |t| x_{J+1} <= threshold (x is non-increasing).
  std::size_t first_index_below(double t, double threshold, std::size_t from, std::size_t cap = 10'000'000) const {
    const double at = std::abs(t);
    if (at == 0) return from;
    if (auto* p = std::get_if<PowerLaw>(&v_)) {
      if (p->c == 0) return from;
      if (p->lambda == 0) {
        if (at * p->c <= threshold) return from;
        throw NumericalError("sequence does not decay");
      }
      const double j = std::ceil(std::pow(at * p->c / threshold, 1.0 / p->lambda));
      if (j > static_cast<double>(cap)) throw NumericalError("sequence decays too slowly for certified evaluation");
      std::size_t J = std::max<std::size_t>(from, j > 1 ? static_cast<std::size_t>(j) - 1 : 0);
      while (at * (*this)(J + 1) > threshold) ++J;
      return J;
    }
    if (auto* e = std::get_if<Explicit>(&v_)) {
      std::size_t J = from;
      while (J < e->values.size() && at * e->values[J] > threshold) ++J;
      return J;
    }
    std::size_t J = from;
    while (at * (*this)(J + 1) > threshold) {
      if (++J > cap) throw NumericalError("sequence decays too slowly for certified evaluation");
    }
    return J;
  }

  // P_m = sum_{j > from} (t x_j)^m for m = 1..max_power (index 0 unused), with error bounds.
  struct PowerSums {
    std::vector<double> value;
    std::vector<double> error;
  };

  PowerSums tail_power_sums(double t, std::size_t from, int max_power) const {
    PowerSums out{std::vector<double>(max_power + 1, 0.0), std::vector<double>(max_power + 1, 0.0)};
    if (t == 0) return out;
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PowerLaw>) {
            if (s.c == 0) return;
            for (int m = 1; m <= max_power; ++m) {
              const double scale = std::pow(t * s.c, m);
              const Certified z = power_tail_sum(m * s.lambda, static_cast<double>(from) + 1.0);
              if (!z.is_finite()) {
                out.value[m] = scale > 0 ? kInf : -kInf;
                continue;
              }
              out.value[m] = scale * z.value;
              out.error[m] = std::abs(scale) * z.error;
            }
          } else if constexpr (std::is_same_v<S, Geometric>) {
            if (s.c == 0 || s.q == 0) return;
            for (int m = 1; m <= max_power; ++m) {
              const double scale = std::pow(t * s.c, m);
              if (s.q == 1) {
                out.value[m] = scale > 0 ? kInf : -kInf;
                continue;
              }
              const double qm = std::pow(s.q, m);
              out.value[m] = scale * std::pow(s.q, m * (static_cast<double>(from) + 1.0)) / (1.0 - qm);
              out.error[m] = 4 * std::numeric_limits<double>::epsilon() * std::abs(out.value[m]);
            }
          } else if constexpr (std::is_same_v<S, Explicit>) {
            for (int m = 1; m <= max_power; ++m) {
              long double acc = 0;
              for (std::size_t j = from; j < s.values.size(); ++j) acc += std::pow(static_cast<long double>(t * s.values[j]), m);
              out.value[m] = static_cast<double>(acc);
            }
          } else {
            saturated_power_sums(s, t, from, max_power, out);
          }
        },
        v_);
    return out;
  }

  // sum_{j > from} log(1 + t x_j); -inf when a factor vanishes.
  Certified log1p_sum(double t, std::size_t from = 0) const {
    if (t == 0) return {0.0, 0.0};
    const std::size_t J = first_index_below(t, 0.25, from);
    long double direct = 0;
    for (std::size_t j = from + 1; j <= J; ++j) {
      const double y = t * (*this)(j);
      if (y <= -1.0) {
        if (y == -1.0) return {-kInf, 0.0};
        throw PreconditionError("factor 1 + t x_j is negative");
      }
      direct += std::log1p(static_cast<long double>(y));
    }
    constexpr int M = 48;
    const PowerSums ps = tail_power_sums(t, J, M);
    if (!std::isfinite(ps.value[1])) return {t > 0 ? kInf : -kInf, 0.0};
    long double series = 0;
    double err = 0;
    for (int m = M; m >= 1; --m) {
      const long double term = ps.value[m] / m;
      series += (m % 2 == 1) ? term : -term;
      err += ps.error[m] / m;
    }
    // remainder of the log series, |t x_j| <= 1/4 beyond J
    err += std::abs(ps.value[1]) * std::pow(0.25, M) / (M + 1) * (4.0 / 3.0);
    const double value = static_cast<double>(direct + series);
    err += 8 * std::numeric_limits<double>::epsilon() * (std::abs(value) + static_cast<double>(J - from) * 1e-3);
    return {value, err};
  }

  // sum_{j > from} x_j^e.
  Certified sum(double e = 1.0, std::size_t from = 0) const {
    if (std::holds_alternative<Saturated>(v_)) {
      if (e != 1.0) throw PreconditionError("powers of saturated sequences are not supported");
      const PowerSums ps = tail_power_sums(1.0, from, 1);
      return {ps.value[1], ps.error[1]};
    }
    const Sequence s = e == 1.0 ? *this : pow(e);
    const PowerSums ps = s.tail_power_sums(1.0, from, 1);
    return {ps.value[1], ps.error[1]};
  }

  std::string describe() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PowerLaw>) {
            return "powerlaw c=" + detail::num(s.c) + " lambda=" + detail::num(s.lambda);
          } else if constexpr (std::is_same_v<S, Geometric>) {
            return "geometric c=" + detail::num(s.c) + " q=" + detail::num(s.q);
          } else if constexpr (std::is_same_v<S, Explicit>) {
            std::string out = "explicit";
            for (double x : s.values) out += " " + detail::num(x);
            return out;
          } else {
            return "saturated inner=" + detail::num(s.inner) + " outer=" + detail::num(s.outer) + " " + s.base->describe();
          }
        },
        v_);
  }

 private:
  explicit Sequence(Variant v) : v_(std::move(v)) {}

  // (t y_j)^m with y = o s b / (1 + s b) expands as (t o)^m sum_r (-1)^r C(m+r-1, r) (s b_j)^{m+r}.
  static void saturated_power_sums(const Saturated& s, double t, std::size_t from, int max_power, PowerSums& out) {
    if (s.outer == 0) return;
    const Sequence& base = *s.base;
    const std::size_t J = base.first_index_below(s.inner, 0.125, from);
    for (int m = 1; m <= max_power; ++m) {
      long double acc = 0;
      for (std::size_t j = from + 1; j <= J; ++j) {
        const double b = s.inner * base(j);
        acc += std::pow(static_cast<long double>(t * s.outer * b / (1.0 + b)), m);
      }
      out.value[m] = static_cast<double>(acc);
    }
    constexpr int R = 120;
    const PowerSums bs = base.tail_power_sums(s.inner, J, max_power + R);
    if (!std::isfinite(bs.value[1])) {
      for (int m = 1; m <= max_power; ++m) out.value[m] = std::pow(t, m) > 0 ? kInf : -kInf;
      return;
    }
    for (int m = 1; m <= max_power; ++m) {
      const double scale = std::pow(t * s.outer, m);
      long double series = 0;
      double err = 0;
      double binom = 1.0;  // C(m+r-1, r)
      int r = 0;
      for (; r < R && m + r <= max_power + R; ++r) {
        const double term = binom * bs.value[m + r];
        series += (r % 2 == 0) ? term : -term;
        err += binom * bs.error[m + r];
        if (r > 0 && std::abs(term) < 1e-18 * std::abs(static_cast<double>(series))) break;
        binom = binom * (m + r) / (r + 1);
      }
      // alternating tail beyond r is dominated by its first omitted term
      err += binom * bs.value[std::min(m + r, max_power + R)];
      out.value[m] += scale * static_cast<double>(series);
      out.error[m] += std::abs(scale) * err;
    }
  }

  Variant v_;
};

// Order-dependent factors Gamma_0, Gamma_1, ...
class OrderSequence {
 public:
  struct Constant {
    double c;
  };
  struct Factorial {
    double c, exponent;  // c (k!)^exponent
  };
  struct Explicit {
    std::vector<double> values;  // zero beyond the list
  };
  using Variant = std::variant<Constant, Factorial, Explicit>;

  static OrderSequence constant(double c) {
    if (!(c >= 0) || !std::isfinite(c)) throw PreconditionError("order factor must be finite and >= 0");
    return OrderSequence(Constant{c});
  }
  static OrderSequence factorial(double c, double exponent) {
    if (!(c >= 0) || !(exponent >= 0)) throw PreconditionError("factorial order sequence needs c, exponent >= 0");
    return OrderSequence(Factorial{c, exponent});
  }
  static OrderSequence explicit_values(std::vector<double> values) {
    for (double x : values)
      if (!(x >= 0) || !std::isfinite(x)) throw PreconditionError("order factors must be finite and >= 0");
    return OrderSequence(Explicit{std::move(values)});
  }
  // Gamma_k = 1 for k <= omega, 0 beyond.
  static OrderSequence indicator(int omega) { return explicit_values(std::vector<double>(omega + 1, 1.0)); }

  const Variant& variant() const { return v_; }

  double operator()(std::size_t k) const {
    if (auto* c = std::get_if<Constant>(&v_)) return c->c;
    if (auto* e = std::get_if<Explicit>(&v_)) return k < e->values.size() ? e->values[k] : 0.0;
    return std::exp(log_at(k));
  }

  double log_at(std::size_t k) const {
    return std::visit(
        [k](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Constant>) {
            return std::log(s.c);
          } else if constexpr (std::is_same_v<S, Factorial>) {
            return std::log(s.c) + s.exponent * std::lgamma(static_cast<double>(k) + 1.0);
          } else {
            return k < s.values.size() ? std::log(s.values[k]) : -kInf;
          }
        },
        v_);
  }

  // Index beyond which every factor is zero.
  std::optional<std::size_t> support_size() const {
    if (auto* e = std::get_if<Explicit>(&v_)) {
      std::size_t n = e->values.size();
      while (n > 0 && e->values[n - 1] == 0) --n;
      return n;
    }
    if (auto* c = std::get_if<Constant>(&v_); c && c->c == 0) return 0;
    if (auto* f = std::get_if<Factorial>(&v_); f && f->c == 0) return 0;
    return std::nullopt;
  }

  // Growth exponent g with Gamma_k <= const (k!)^g; -inf when eventually zero.
  double growth_exponent() const {
    if (support_size()) return -kInf;
    if (auto* f = std::get_if<Factorial>(&v_)) return f->exponent;
    return 0.0;
  }

  OrderSequence pow(double e) const {
    return std::visit(
        [e](const auto& s) -> OrderSequence {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Constant>) {
            return constant(std::pow(s.c, e));
          } else if constexpr (std::is_same_v<S, Factorial>) {
            return factorial(std::pow(s.c, e), s.exponent * e);
          } else {
            std::vector<double> v = s.values;
            for (double& x : v) x = std::pow(x, e);
            return explicit_values(std::move(v));
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Constant>) {
            return "constant c=" + detail::num(s.c);
          } else if constexpr (std::is_same_v<S, Factorial>) {
            return "factorial c=" + detail::num(s.c) + " a=" + detail::num(s.exponent);
          } else {
            std::string out = "explicit";
            for (double x : s.values) out += " " + detail::num(x);
            return out;
          }
        },
        v_);
  }

 private:
  explicit OrderSequence(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// e_0..e_L of a finite list.
inline std::vector<double> elementary_symmetric(const std::vector<double>& xs, std::size_t L) {
  std::vector<double> e(L + 1, 0.0);
  e[0] = 1.0;
  std::size_t count = 0;
  for (double x : xs) {
    ++count;
    for (std::size_t l = std::min(L, count); l >= 1; --l) e[l] += x * e[l - 1];
  }
  return e;
}

// e_0..e_L from power sums p_1..p_L (Newton's identities).
inline std::vector<double> elementary_from_power_sums(const std::vector<double>& p, std::size_t L) {
  std::vector<double> e(L + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t l = 1; l <= L; ++l) {
    long double acc = 0;
    for (std::size_t i = 1; i <= l && i < p.size(); ++i) {
      const long double term = static_cast<long double>(e[l - i]) * p[i];
      acc += (i % 2 == 1) ? term : -term;
    }
    e[l] = static_cast<double>(acc / static_cast<long double>(l));
  }
  return e;
}

inline std::vector<double> truncated_convolution(const std::vector<double>& a, const std::vector<double>& b, std::size_t L) {
  std::vector<double> c(L + 1, 0.0);
  for (std::size_t i = 0; i <= L && i < a.size(); ++i)
    for (std::size_t j = 0; i + j <= L && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace cmw
