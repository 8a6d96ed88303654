#pragma once

#include <cmath>
#include <string>

#include "cmw/transforms_spec.hpp"

namespace cmw {

// (Delta_v gamma)_u for product weights: gamma_u prod_{j in v} (1 - gamma_j), zero if u and v meet.
inline double product_delta_closed_form(const Sequence& gamma, const Subset& v, const Subset& u) {
  for (int j : v)
    if (detail::contains_coordinate(u, static_cast<std::size_t>(j))) return 0.0;
  double value = product_over(gamma, u);
  for (int j : v) value *= 1.0 - gamma(static_cast<std::size_t>(j));
  return value;
}

// Bounds on sum over u in U_j with j in u of C^{2|u|} gamma_u, as multiples of gamma_j.
struct OneCoordinateBounds {
  double lower = 0.0;  // C^2 Gamma_1 gamma_j
  double upper = 0.0;  // c gamma_j
  double c = 0.0;
  std::string route;
};

namespace detail {

struct PodParameters {
  Sequence gamma;
  OrderSequence order;
  double a;
  double C_a;
};

inline PodParameters pod_parameters(const WeightSpec& spec) {
  if (auto* p = spec.get<ProductWeights>()) return {p->gamma, OrderSequence::constant(1.0), 0.0, 1.0};
  if (auto* p = spec.get<PodWeights>()) return {p->gamma, p->order, p->a, p->C_a};
  throw PreconditionError("product or POD weights required");
}

// sum_{j <= d} x_j^e, certified for infinite d.
inline Certified coordinate_sum(const Sequence& x, double e, int d) {
  if (d == kInfiniteDim) return x.sum(e);
  long double s = 0;
  for (int j = 1; j <= d; ++j) s += std::pow(x(j), e);
  return {static_cast<double>(s), 0.0};
}

}  // namespace detail

inline OneCoordinateBounds pod_onecoordinate_sum_bounds(const WeightSpec& spec, double C, std::size_t j) {
  if (!(C > 0)) throw PreconditionError("scale C must be positive");
  if (j < 1 || (!spec.infinite() && j > static_cast<std::size_t>(spec.dim()))) throw DimensionError("coordinate out of range");
  const auto P = detail::pod_parameters(spec);
  const double c2 = C * C;
  const double gj = P.gamma(j);
  OneCoordinateBounds b;
  b.lower = c2 * P.order(1) * gj;
  const Sequence x = P.gamma.scaled(c2);
  const double r = std::max(1.0, P.a);
  const Certified T = detail::coordinate_sum(x, 1.0 / r, spec.dim());
  if (T.hi() < 1.0) {
    b.c = P.C_a * std::pow(1.0 - T.hi(), -2.0 * r) * c2;
    b.route = "direct: sum of (C^2 gamma_i)^{1/r} < 1, r = max(1, a)";
  } else {
    const double p = spec.infinite() ? P.gamma.decay() : kInf;
    if (!(p > P.a) || !P.gamma.summable())
      throw PreconditionError("needs decay > a with summable gamma_j, or sum of (C^2 gamma_j)^{1/max(1,a)} < 1");
    const double tau = P.a < 1.0 ? 1.0 : (std::isinf(p) ? P.a + 1.0 : 0.5 * (P.a + p));
    const Certified S = detail::coordinate_sum(x, 1.0 / tau, spec.dim());
    const double R = std::pow(2.0 * S.hi(), tau);
    if (R == 0.0) {
      b.c = 0.0;
    } else {
      b.c = P.C_a * std::exp(tau * std::pow(R, 1.0 / (tau - P.a))) * std::pow(4.0, tau) * c2 / R;
    }
    b.route = "rescaled: tau = " + format_scalar(tau) + ", R = " + format_scalar(R);
  }
  b.upper = b.c * gj;
  return b;
}

struct SandwichBounds {
  WeightSpec lower;
  WeightSpec upper;
  Certified constant;  // multiplies one side, see sandwich_up / sandwich_down
};

// eta <= T_up gamma <= c * upper; for product weights upper = eta, c = prod (1 + C^2 gamma_j),
// for POD weights upper_u = C_a (|u|!)^a prod (2^a C^2 gamma_j), c = sum_w (|w|!)^a prod_{j in w} (2^a C^2 gamma_j).
inline SandwichBounds sandwich_up(const WeightSpec& spec, double C) {
  if (!(C > 0)) throw PreconditionError("scale C must be positive");
  detail::require_summable(spec, C);
  const double c2 = C * C;
  const int d = spec.dim();
  if (auto* p = spec.get<ProductWeights>()) {
    const WeightSpec eta = WeightSpec::product(p->gamma.scaled(c2), d);
    return {eta, eta, detail::product_of_factors(p->gamma, c2, d)};
  }
  if (auto* p = spec.get<PodWeights>()) {
    const WeightSpec eta = WeightSpec::pod(p->gamma.scaled(c2), p->order, p->a, p->C_a, d);
    const Sequence scaled = p->gamma.scaled(std::pow(2.0, p->a) * c2);
    const WeightSpec xi = WeightSpec::pod(scaled, OrderSequence::factorial(p->C_a, p->a), p->a, p->C_a, d);
    const PodForm cf{scaled, OrderSequence::factorial(1.0, p->a), p->a, d};
    return {eta, xi, pod_order_sum(cf, 1.0, {})};
  }
  throw PreconditionError("sandwich bounds need product or POD weights");
}

// c' zeta <= T_down gamma <= zeta with zeta_u = C^{-2|u|} gamma_u; c' = prod (1 - gamma_j) for product weights, 0 for POD.
inline SandwichBounds sandwich_down(const WeightSpec& spec, double C) {
  if (!(C > 0)) throw PreconditionError("scale C must be positive");
  const double c2 = C * C;
  const int d = spec.dim();
  const SpecMembership m = membership_A_d(spec);
  if (m.in_M != Verdict::Holds)
    throw PreconditionError(std::string("weights must be completely monotone (") + to_string(m.in_M) + "): " + m.reason);
  if (auto* p = spec.get<ProductWeights>()) {
    const WeightSpec zeta = WeightSpec::product(p->gamma.scaled(1.0 / c2), d);
    Certified lower_constant{0.0, 0.0};
    if (spec.infinite() && !p->gamma.summable())
      lower_constant = {0.0, 0.0};
    else
      lower_constant = detail::product_of_factors(p->gamma, -1.0, d);
    return {zeta, zeta, lower_constant};
  }
  if (auto* p = spec.get<PodWeights>()) {
    const WeightSpec zeta = WeightSpec::pod(p->gamma.scaled(1.0 / c2), p->order, p->a, p->C_a, d);
    return {zeta, zeta, {0.0, 0.0}};
  }
  throw PreconditionError("sandwich bounds need product or POD weights");
}

struct DecayResult {
  enum class Kind { Exact, Interval, Infinite, Zero, Unknown };
  Kind kind = Kind::Unknown;
  double lo = 0.0;
  double hi = kInf;
  std::string reason;

  double value() const { return kind == Kind::Infinite ? kInf : (kind == Kind::Zero ? 0.0 : lo); }
  static DecayResult exact(double p, std::string why) {
    if (std::isinf(p)) return {Kind::Infinite, kInf, kInf, std::move(why)};
    if (p == 0.0) return {Kind::Zero, 0.0, 0.0, std::move(why)};
    return {Kind::Exact, p, p, std::move(why)};
  }
  static DecayResult interval(double lo, double hi, std::string why) { return {Kind::Interval, lo, hi, std::move(why)}; }
  static DecayResult unknown(std::string why) { return {Kind::Unknown, 0.0, kInf, std::move(why)}; }
};

inline std::string to_string(const DecayResult& r) {
  switch (r.kind) {
    case DecayResult::Kind::Exact:
      return format_scalar(r.lo);
    case DecayResult::Kind::Infinite:
      return "inf";
    case DecayResult::Kind::Zero:
      return "0";
    case DecayResult::Kind::Interval:
      return "[" + format_scalar(r.lo) + ", " + (std::isinf(r.hi) ? std::string("inf") : format_scalar(r.hi)) + "]";
    default:
      return "unknown";
  }
}

namespace detail {

inline bool has_positive_order_beyond_zero(const OrderSequence& order) {
  const auto support = order.support_size();
  if (!support) return true;
  for (std::size_t k = 1; k < *support; ++k)
    if (order(k) > 0) return true;
  return false;
}

// Bracket of sup{tau : gamma^{1/tau} summable} from summability tests on a grid of tau values.
inline DecayResult decay_on_grid(const WeightSpec& spec) {
  constexpr double step = 0.25;
  constexpr int points = 256;
  double lo = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double tau = step * i;
    const Verdict v = summability(pow_spec(spec, 1.0 / tau), 1.0).verdict;
    if (v == Verdict::Holds) {
      lo = tau;
    } else if (v == Verdict::Fails) {
      if (lo == 0.0) return DecayResult::interval(0.0, tau, "diverges at the first grid point");
      return DecayResult::interval(lo, tau, "grid of summability tests");
    } else {
      return DecayResult::interval(lo, kInf, "summability undecided at tau = " + format_scalar(tau));
    }
  }
  return DecayResult::interval(lo, kInf, "summable on the whole grid");
}

}  // namespace detail

// sup{tau > 0 : sum_u gamma_u^{1/tau} < inf}.
inline DecayResult decay(const WeightSpec& spec) {
  if (!spec.infinite()) return DecayResult::exact(kInf, "finitely many weights");
  if (detail::sparse_entries(spec)) return DecayResult::exact(kInf, "finitely supported");
  if (auto* p = spec.get<ProductWeights>()) return DecayResult::exact(p->gamma.decay(), "decay of the coordinate sequence");
  if (auto* p = spec.get<PodWeights>()) {
    if (!detail::has_positive_order_beyond_zero(p->order)) return DecayResult::exact(kInf, "only the empty set carries weight");
    const double seq_decay = p->gamma.decay();
    const double growth = p->order.growth_exponent();
    const double a_eff = std::isinf(growth) ? 0.0 : std::min(p->a, growth);
    if (p->order.support_size() || seq_decay > a_eff)
      return DecayResult::exact(seq_decay, "decay of the coordinate sequence");
    return DecayResult::interval(0.0, seq_decay, "order growth not dominated; only the upper bound is certified");
  }
  return detail::decay_on_grid(spec);
}

// Decay of T_up gamma under the invariance hypotheses; unknown otherwise.
inline DecayResult decay_after_up(const WeightSpec& spec, double C) {
  if (!(C > 0)) throw PreconditionError("scale C must be positive");
  if (spec.get<FinSupportWeights>())
    return DecayResult::unknown("finitely supported weights of unbounded order are outside the invariance results");
  if (!spec.infinite()) return DecayResult::exact(kInf, "finitely many weights");
  const SummabilityReport s = summability(spec, C);
  if (s.verdict == Verdict::Fails) throw PreconditionError("weights are not C-summable: " + s.reason);
  if (auto* f = spec.get<FiniteOrderWeights>()) {
    if (!f->gamma) return DecayResult::exact(kInf, "finitely supported finite-order weights");
    if (s.verdict != Verdict::Holds) return DecayResult::unknown("summability undecided");
    DecayResult r = decay(spec);
    r.lo = std::max(r.lo, 1.0);
    r.hi = std::max(r.hi, 1.0);
    r.reason = "finite-order weights: decay at least 1 and at least the decay of gamma";
    return r;
  }
  if (auto* p = spec.get<ProductWeights>()) return DecayResult::exact(p->gamma.decay(), "product weights keep their decay");
  if (auto* p = spec.get<PodWeights>()) {
    const double seq_decay = p->gamma.decay();
    if (p->order(1) > 0 && seq_decay > p->a && p->gamma.summable())
      return DecayResult::exact(seq_decay, "POD weights with Gamma_1 > 0, decay > a, summable gamma_j");
    return DecayResult::unknown("POD hypotheses (Gamma_1 > 0, decay > a, summable gamma_j) not met");
  }
  return DecayResult::unknown("unsupported family");
}

// gamma_{{1..2^j}} = 2^{-j} for j = 1..levels, zero elsewhere.
inline WeightSpec extremal_example(int levels) {
  if (levels < 1 || levels > 4) throw DimensionError("extremal example supports 1..4 levels");
  std::map<Subset, double> entries;
  for (int j = 1; j <= levels; ++j) {
    Subset u(static_cast<std::size_t>(1) << j);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = static_cast<int>(i) + 1;
    entries.emplace(std::move(u), std::ldexp(1.0, -j));
  }
  return WeightSpec::fin_support(std::move(entries), kInfiniteDim);
}

// Lower bound sum_{j <= levels} 2^{2^j} 2^{-(j+1)/tau} on sum_u (T_up gamma)_u^{1/tau} for the untruncated
// extremal weights: each of the 2^{2^j} sets between {1..2^j} and {1..2^{j+1}} carries at least 2^{-(j+1)}.
inline double extremal_lower_bound(int levels, double tau) {
  if (levels < 1 || !(tau > 0)) throw PreconditionError("needs levels >= 1 and tau > 0");
  double total = 0.0;
  for (int j = 1; j <= levels; ++j) {
    const double log2_term = std::ldexp(1.0, j) - (j + 1.0) / tau;
    total += std::exp2(log2_term);
  }
  return total;
}

struct PodRecognition {
  bool consistent = true;
  std::string reason;
};

// Necessary condition for gamma_u = Gamma_{|u|} prod gamma_j: for every coordinate i and sets A, B of equal size
// avoiding i, gamma_{A+i} gamma_B = gamma_{B+i} gamma_A.
inline PodRecognition looks_like_pod(const WeightTable& g, double rel_tol = 1e-9) {
  const int d = g.dim();
  check_dense_dim(d, 12);
  const Mask n = full_mask(d);
  for (int i = 0; i < d; ++i) {
    const Mask bit = Mask{1} << i;
    for (Mask A = 0; A <= n; ++A) {
      if (A & bit) continue;
      for (Mask B = A + 1; B <= n; ++B) {
        if ((B & bit) || cardinality(A) != cardinality(B)) continue;
        const double lhs = g[A | bit] * g[B];
        const double rhs = g[B | bit] * g[A];
        if (std::abs(lhs - rhs) > rel_tol * std::max(std::abs(lhs), std::abs(rhs)))
          return {false, "gamma" + format_subset(A | bit) + " * gamma" + format_subset(B) + " != gamma" +
                             format_subset(B | bit) + " * gamma" + format_subset(A)};
      }
    }
  }
  return {true, "ratio identities hold"};
}

}  // namespace cmw
