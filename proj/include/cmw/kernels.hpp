#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmw/points.hpp"
#include "cmw/transforms_spec.hpp"

namespace cmw {

// Reproducing kernel on [0,1] with optional integrals against Lebesgue measure.
struct UnivariateKernel {
  std::string name;
  std::function<double(double, double)> eval;
  std::function<double(double)> integral;  // x -> int k(x, y) dy
  std::optional<double> double_integral;   // int int k(x, y) dx dy
  double min_diagonal = 0.0;               // inf_x k(x, x)

  double operator()(double x, double y) const { return eval(x, y); }
  bool integrable() const { return static_cast<bool>(integral) && double_integral.has_value(); }
};

inline UnivariateKernel min_kernel() {
  return {"min", [](double x, double y) { return std::min(x, y); }, [](double x) { return x - 0.5 * x * x; },
          1.0 / 3.0, 0.0};
}

// Kernel of the zero-mean Sobolev functions with norm int f'^2.
inline UnivariateKernel anova_kernel() {
  return {"anova",
          [](double x, double y) { return std::min(x, y) - x - y + 0.5 * (x * x + y * y) + 1.0 / 3.0; },
          [](double) { return 0.0; }, 0.0, 1.0 / 12.0};
}

// m(x, y) = 1 iff x = y in (0, 1].
inline UnivariateKernel indicator_kernel() {
  return {"indicator", [](double x, double y) { return (x == y && x > 0.0) ? 1.0 : 0.0; }, {}, std::nullopt, 0.0};
}

// 1 + k.
inline UnivariateKernel plus_one(const UnivariateKernel& k) {
  UnivariateKernel out;
  out.name = "1+" + k.name;
  out.eval = [e = k.eval](double x, double y) { return 1.0 + e(x, y); };
  if (k.integral) out.integral = [f = k.integral](double x) { return 1.0 + f(x); };
  if (k.double_integral) out.double_integral = 1.0 + *k.double_integral;
  out.min_diagonal = 1.0 + k.min_diagonal;
  return out;
}

inline UnivariateKernel builtin_kernel(std::string_view name) {
  if (name == "min") return min_kernel();
  if (name == "anova") return anova_kernel();
  if (name == "indicator") return indicator_kernel();
  throw ParseError("unknown kernel '" + std::string(name) + "' (expected min, anova, indicator)");
}

using KernelWeights = std::variant<WeightTable, WeightSpec>;

inline int weights_dim(const KernelWeights& w) {
  if (auto* t = std::get_if<WeightTable>(&w)) return t->dim();
  return std::get<WeightSpec>(w).dim();
}

// F(t) = sum_u gamma_u prod_{j in u} t_j. Coordinates beyond head.size() take the value `tail`
// (only relevant in infinite dimension).
inline double weighted_subset_sum(const KernelWeights& weights, std::span<const double> head, double tail = 0.0) {
  if (auto* table = std::get_if<WeightTable>(&weights)) {
    const int d = table->dim();
    if (static_cast<int>(head.size()) != d) throw DimensionError("coordinate values do not match the dimension");
    std::vector<double> prod(table->size(), 1.0);
    long double acc = (*table)[0];
    for (Mask u = 1; u < table->size(); ++u) {
      prod[u] = prod[u & (u - 1)] * head[std::countr_zero(u)];
      acc += static_cast<long double>((*table)[u]) * prod[u];
    }
    return static_cast<double>(acc);
  }
  const WeightSpec& spec = std::get<WeightSpec>(weights);
  const std::size_t s = head.size();
  if (!spec.infinite() && static_cast<int>(s) != spec.dim())
    throw DimensionError("coordinate values do not match the dimension");
  auto value_at = [&](int j) { return static_cast<std::size_t>(j) <= s ? head[j - 1] : tail; };
  if (auto* entries = detail::sparse_entries(spec)) {
    long double acc = 0;
    for (const auto& [u, g] : *entries) {
      long double p = g;
      for (int j : u) p *= value_at(j);
      acc += p;
    }
    return static_cast<double>(acc);
  }
  if (auto* p = spec.get<ProductWeights>()) {
    long double prod = 1;
    for (std::size_t j = 1; j <= s; ++j) prod *= 1.0L + static_cast<long double>(p->gamma(j)) * head[j - 1];
    if (spec.infinite() && tail != 0.0) {
      const Certified rest = detail::exp_certified(p->gamma.log1p_sum(tail, s));
      if (!rest.is_finite()) throw NumericalError("infinite product diverges");
      prod *= rest.value;
    }
    return static_cast<double>(prod);
  }
  const PodForm f = *pod_form(spec);
  if (spec.infinite() && tail != 0.0)
    throw UndecidableError("order-dependent weights in infinite dimension need points with zero tail contribution");
  std::vector<double> xs(s);
  for (std::size_t j = 1; j <= s; ++j) xs[j - 1] = f.gamma(j) * head[j - 1];
  std::size_t L = s;
  if (auto sup = f.order.support_size()) L = std::min(L, *sup == 0 ? 0 : *sup - 1);
  const auto e = elementary_symmetric(xs, L);
  long double acc = 0;
  for (std::size_t l = 0; l <= L; ++l) {
    const double g = f.order(l);
    if (g != 0) acc += static_cast<long double>(g) * e[l];
  }
  return static_cast<double>(acc);
}

// Point of [0,1]^N that agrees with a constant anchor beyond a finite section.
struct InfinitePoint {
  std::vector<double> head;
  double tail = 0.0;
};

// M(x, y) = sum_u gamma_u prod_{j in u} m(x_j, y_j).
struct SuperpositionKernel {
  KernelWeights weights;
  UnivariateKernel m;

  int dim() const { return weights_dim(weights); }

  double operator()(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != y.size()) throw DimensionError("points have different dimensions");
    std::vector<double> t(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) t[j] = m(x[j], y[j]);
    return weighted_subset_sum(weights, t);
  }

  double operator()(const InfinitePoint& x, const InfinitePoint& y) const {
    const std::size_t s = std::max(x.head.size(), y.head.size());
    std::vector<double> t(s);
    for (std::size_t j = 0; j < s; ++j) {
      const double xj = j < x.head.size() ? x.head[j] : x.tail;
      const double yj = j < y.head.size() ? y.head[j] : y.tail;
      t[j] = m(xj, yj);
    }
    return weighted_subset_sum(weights, t, m(x.tail, y.tail));
  }
};

inline double superposition_eval(const SuperpositionKernel& K, std::span<const double> x, std::span<const double> y) {
  return K(x, y);
}

struct DomainMembership {
  Verdict member = Verdict::Unknown;
  std::string reason;
};

// Whether sum_u gamma_u prod_{j in u} m(x_j, x_j) < inf. Throws when this cannot be certified.
inline DomainMembership domain_membership(const WeightSpec& spec, const UnivariateKernel& m, const InfinitePoint& x) {
  if (!spec.infinite()) return {Verdict::Holds, "finite dimension"};
  if (detail::sparse_entries(spec)) return {Verdict::Holds, "finitely many nonzero weights"};
  const double tail_diag = m(x.tail, x.tail);
  const Sequence& gamma = *spec.sequence();
  if (spec.get<ProductWeights>()) {
    if (tail_diag == 0.0) return {Verdict::Holds, "diagonal vanishes beyond the section"};
    if (gamma.summable()) return {Verdict::Holds, "summable gamma_j with bounded diagonal"};
    return {Verdict::Fails, "sum of gamma_j m(x_j, x_j) diverges"};
  }
  double max_diag = tail_diag;
  for (double v : x.head) max_diag = std::max(max_diag, m(v, v));
  if (max_diag == 0.0) return {Verdict::Holds, "diagonal vanishes"};
  const SummabilityReport s = summability(spec, std::sqrt(max_diag));
  if (s.verdict == Verdict::Holds) return {Verdict::Holds, "weights summable at C^2 = sup of the diagonal"};
  const auto f = pod_form(spec);
  if (f && f->order(1) > 0 && tail_diag > 0 && !gamma.summable())
    return {Verdict::Fails, "first-order terms already diverge"};
  throw UndecidableError("domain membership cannot be certified: " + s.reason);
}

// Membership for the weights gamma_{{1..2^j}} = 2^{-j}, j >= 1: term j is 2^{-j} prod_{nu <= 2^j} m(x_nu, x_nu),
// with D = m(tail, tail) repeated beyond the section.
inline DomainMembership dyadic_chain_membership(const UnivariateKernel& m, const InfinitePoint& x) {
  double prefix = 1.0;
  for (double v : x.head) prefix *= m(v, v);
  const double D = m(x.tail, x.tail);
  if (prefix == 0.0 || D == 0.0) return {Verdict::Holds, "terms vanish beyond the section"};
  if (D <= 1.0) return {Verdict::Holds, "terms bounded by a multiple of 2^{-j}"};
  return {Verdict::Fails, "terms grow like 2^{-j} D^{2^j} with D > 1"};
}

inline Eigen::MatrixXd gram_matrix(const std::function<double(std::size_t, std::size_t)>& entry, std::size_t n) {
  Eigen::MatrixXd G(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) G(i, j) = G(j, i) = entry(i, j);
  return G;
}

inline Eigen::MatrixXd gram_matrix(const UnivariateKernel& k, const std::vector<double>& x) {
  return gram_matrix([&](std::size_t i, std::size_t j) { return k(x[i], x[j]); }, x.size());
}

inline Eigen::MatrixXd gram_matrix(const SuperpositionKernel& K, const PointSet& ps) {
  return gram_matrix([&](std::size_t i, std::size_t j) { return K(ps[i], ps[j]); }, ps.size());
}

struct EmbeddingBound {
  double C_lb = 0.0;
  std::size_t points = 0;
  bool converged = true;
};

// sqrt of the largest lambda with G_k G_{1+l}^{-1} G_k a = lambda G_k a: a lower bound on the norm of
// the embedding of H(k) into H(1 + l), from minimal-norm interpolation on the nodes.
inline EmbeddingBound embedding_norm_lower_bound(const UnivariateKernel& k, const UnivariateKernel& l,
                                                 const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) throw PreconditionError("need at least one node");
  Eigen::MatrixXd Gk = gram_matrix(k, x);
  Eigen::MatrixXd Gl = gram_matrix(plus_one(l), x);
  Gk.diagonal().array() += 1e-12 * Gk.trace() / static_cast<double>(n);
  Gl.diagonal().array() += 1e-12 * Gl.trace() / static_cast<double>(n);
  const Eigen::LLT<Eigen::MatrixXd> chol(Gl);
  if (chol.info() != Eigen::Success) throw NumericalError("Gram matrix of 1 + l is not positive definite");
  Eigen::MatrixXd A = Gk * chol.solve(Gk);
  A = 0.5 * (A + A.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, Gk, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw NumericalError("generalized eigenproblem failed");
  const double lambda = ges.eigenvalues().maxCoeff();
  return {std::sqrt(std::max(0.0, lambda)), n, true};
}

inline std::vector<double> lattice_nodes_1d(std::size_t n) {
  const PointSet ps = lattice_points(n, 1);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = ps[i][0];
  return x;
}

// Doubles nested lattice nodes until the bound changes by less than rel_change.
inline EmbeddingBound embedding_norm_converged(const UnivariateKernel& k, const UnivariateKernel& l,
                                               double rel_change = 1e-3, std::size_t start = 8,
                                               std::size_t max_points = 1024) {
  EmbeddingBound prev = embedding_norm_lower_bound(k, l, lattice_nodes_1d(start));
  for (std::size_t n = 2 * start; n <= max_points; n *= 2) {
    EmbeddingBound cur = embedding_norm_lower_bound(k, l, lattice_nodes_1d(n));
    if (std::abs(cur.C_lb - prev.C_lb) <= rel_change * std::abs(cur.C_lb)) return cur;
    prev = cur;
  }
  prev.converged = false;
  return prev;
}

// 1.05 times the converged lower bound.
inline double auto_embedding_constant(const UnivariateKernel& k, const UnivariateKernel& l) {
  return 1.05 * embedding_norm_converged(k, l).C_lb;
}

struct EmbeddingReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool passed = false;
  double C_lb = 0.0;  // univariate lower bound on the embedding norm
};

// Kernel of the sum-operator image: sum_u (T_up gamma)_u prod l = sum_v C^{2|v|} gamma_v prod_{j in v} (1 + l).
inline SuperpositionKernel up_kernel(const KernelWeights& weights, const UnivariateKernel& l, double C) {
  if (auto* table = std::get_if<WeightTable>(&weights))
    return {t_up(*table, TransformParams<double>{C * C}), l};
  const WeightSpec& spec = std::get<WeightSpec>(weights);
  if (auto* p = spec.get<ProductWeights>()) {
    const StructuredWeights up = t_up_spec(spec, C);
    return {std::get<WeightSpec>(up), l};
  }
  if (spec.infinite()) throw UndecidableError("dense sum-operator image needs finite dimension");
  return {t_up(truncate_to_table(spec, spec.dim()), TransformParams<double>{C * C}), l};
}

// Gram(M^{T_up gamma, l}) - Gram(M^{gamma, k}) must be positive semidefinite when H(k) embeds into H(1 + l)
// with norm at most C.
inline EmbeddingReport verify_embedding(const UnivariateKernel& k, const UnivariateKernel& l, double C,
                                        const KernelWeights& weights, const PointSet& ps, double tol_rel = 1e-8) {
  if (!(C > 0)) throw PreconditionError("scale C must be positive");
  check_points(ps);
  if (ps.d != weights_dim(weights)) throw DimensionError("point dimension differs from the weight dimension");
  const SuperpositionKernel K{weights, k};
  const SuperpositionKernel U = up_kernel(weights, l, C);
  const Eigen::MatrixXd diff = gram_matrix(U, ps) - gram_matrix(K, ps);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  EmbeddingReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.max_eigenvalue = es.eigenvalues().maxCoeff();
  const double scale = std::max(std::abs(rep.max_eigenvalue), std::numeric_limits<double>::min());
  rep.passed = rep.min_eigenvalue >= -tol_rel * scale;
  rep.C_lb = embedding_norm_lower_bound(k, l, lattice_nodes_1d(64)).C_lb;
  return rep;
}

}  // namespace cmw
