#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmw/kernels.hpp"
#include "cmw/monotone_geometry.hpp"

namespace cmw {

// A superposition kernel given through its weight function F(t) = sum_u w_u prod_{j in u} t_j.
struct KernelModel {
  std::function<double(std::span<const double>)> F;
  UnivariateKernel m;
  int d = 0;
  std::optional<WeightTable> table;  // the weights themselves when small enough to list
};

inline constexpr int kListedDim = 10;

inline KernelModel model_from_weights(const KernelWeights& w, const UnivariateKernel& m) {
  const int d = weights_dim(w);
  if (d == kInfiniteDim) throw DimensionError("error computations need finite dimension");
  KernelModel out{[w](std::span<const double> t) { return weighted_subset_sum(w, t); }, m, d, std::nullopt};
  if (d <= kListedDim) {
    if (auto* t = std::get_if<WeightTable>(&w))
      out.table = *t;
    else
      out.table = truncate_to_table(std::get<WeightSpec>(w), d);
  }
  return out;
}

// e(Q)^2 = int int K - (2/n) sum_i int K(x_i, .) + (1/n^2) sum_{i,j} K(x_i, x_j) for the equal-weight rule.
inline double wce_squared(const PointSet& ps, const KernelModel& K) {
  check_points(ps);
  if (ps.d != K.d) throw DimensionError("point dimension differs from the kernel dimension");
  if (!K.m.integrable()) throw PreconditionError("kernel '" + K.m.name + "' has no closed-form integrals");
  const std::size_t n = ps.size();
  const int d = K.d;
  std::vector<double> t(d, *K.m.double_integral);
  const long double total = K.F(t);
  long double single = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) t[j] = K.m.integral(ps[i][j]);
    single += K.F(t);
  }
  long double diag = 0, off = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k <= i; ++k) {
      for (int j = 0; j < d; ++j) t[j] = K.m(ps[i][j], ps[k][j]);
      (i == k ? diag : off) += K.F(t);
    }
  }
  const long double nn = static_cast<long double>(n);
  return static_cast<double>(total - 2.0L * single / nn + (diag + 2.0L * off) / (nn * nn));
}

inline double wce_integration(const PointSet& ps, const KernelModel& K) {
  const double e2 = wce_squared(ps, K);
  const double scale = std::max(1.0, K.F(std::vector<double>(K.d, *K.m.double_integral)));
  if (e2 < -1e-10 * scale) throw NumericalError("squared worst-case error is negative: " + format_scalar(e2));
  return std::sqrt(std::max(e2, 0.0));
}

inline double wce_integration(const PointSet& ps, const KernelWeights& w, const UnivariateKernel& k) {
  return wce_integration(ps, model_from_weights(w, k));
}

// M^{T_up gamma, l}.
inline KernelModel up_model(const KernelWeights& w, const UnivariateKernel& l, double C) {
  if (weights_dim(w) == kInfiniteDim) throw DimensionError("error computations need finite dimension");
  if (auto* spec = std::get_if<WeightSpec>(&w)) detail::require_summable(*spec, C);
  const SuperpositionKernel up = up_kernel(w, l, C);
  return model_from_weights(up.weights, l);
}

struct LowerModel {
  KernelModel model;
  bool minorant_used = false;
  bool vanishes = false;  // T_down of the minorant is identically zero
  std::string note;
};

// M^{T_down gamma*, l} with gamma* a completely monotone minorant of gamma (gamma itself when monotone).
inline LowerModel down_model(const KernelWeights& w, const UnivariateKernel& l, double C) {
  if (!(C > 0)) throw PreconditionError("scale C must be positive");
  const int d = weights_dim(w);
  if (d == kInfiniteDim) throw DimensionError("error computations need finite dimension");
  const double c2 = C * C;
  LowerModel out;
  const WeightSpec* spec = std::get_if<WeightSpec>(&w);
  if (spec && spec->get<ProductWeights>()) {
    std::vector<double> g(d);
    for (int j = 1; j <= d; ++j) {
      g[j - 1] = spec->get<ProductWeights>()->gamma(j);
      if (g[j - 1] > 1.0) {
        g[j - 1] = 1.0;
        out.minorant_used = true;
      }
    }
    if (out.minorant_used) out.note = "coordinate weights clipped at 1";
    out.model.F = [g, c2](std::span<const double> t) {
      long double p = 1;
      for (std::size_t j = 0; j < g.size(); ++j) p *= 1.0L - g[j] + g[j] * static_cast<long double>(t[j]) / c2;
      return static_cast<double>(p);
    };
    out.model.m = l;
    out.model.d = d;
    if (d <= kListedDim) {
      WeightTable tab(d);
      for (Mask u = 0; u < tab.size(); ++u) {
        double v = std::pow(c2, -cardinality(u));
        for (int j = 1; j <= d; ++j) v *= (u & coordinate_bit(j)) ? g[j - 1] : 1.0 - g[j - 1];
        tab.set(u, v);
      }
      out.model.table = tab;
    }
    return out;
  }
  WeightTable table = spec ? truncate_to_table(*spec, d) : std::get<WeightTable>(w);
  if (!check_completely_monotone(table).is_member) {
    table = maximal_monotone_minorant(table).minorant;
    out.minorant_used = true;
    out.note = "maximal completely monotone minorant";
  }
  const SignedTable<double> down = t_down(table, TransformParams<double>{c2});
  const double tol = default_monotone_tolerance(table.as_signed()) / std::min(1.0, std::pow(c2, d));
  const WeightTable clipped = WeightTable::from_signed(down, tol);
  out.vanishes = clipped.max_abs() == 0.0;
  if (out.vanishes) out.note += out.note.empty() ? "inverse image vanishes" : "; inverse image vanishes";
  out.model = model_from_weights(clipped, l);
  return out;
}

struct TransferReport {
  double wce_K = 0.0;
  double wce_up = 0.0;
  double wce_down = 0.0;
  double C_up = 0.0;
  double C_down = 0.0;
  bool upper_ok = false;
  bool lower_ok = false;
  bool ordering_ok = false;
  bool minorant_used = false;
  std::string lower_note;
  std::optional<WeightTable> weights, up_weights, down_weights;
};

inline constexpr double kTransferSlack = 1e-10;

inline TransferReport transfer_upper(const PointSet& ps, const KernelWeights& w, const UnivariateKernel& k,
                                     const UnivariateKernel& l, double C_up) {
  const KernelModel K = model_from_weights(w, k);
  const KernelModel U = up_model(w, l, C_up);
  TransferReport r;
  r.C_up = C_up;
  r.wce_K = wce_integration(ps, K);
  r.wce_up = wce_integration(ps, U);
  r.upper_ok = r.wce_K <= r.wce_up + kTransferSlack;
  r.lower_ok = true;
  r.ordering_ok = r.upper_ok;
  r.weights = K.table;
  r.up_weights = U.table;
  return r;
}

inline TransferReport transfer_lower(const PointSet& ps, const KernelWeights& w, const UnivariateKernel& k,
                                     const UnivariateKernel& l, double C_down) {
  const KernelModel K = model_from_weights(w, k);
  const LowerModel L = down_model(w, l, C_down);
  TransferReport r;
  r.C_down = C_down;
  r.wce_K = wce_integration(ps, K);
  r.wce_down = L.vanishes ? 0.0 : wce_integration(ps, L.model);
  r.lower_ok = r.wce_down <= r.wce_K + kTransferSlack;
  r.upper_ok = true;
  r.ordering_ok = r.lower_ok;
  r.minorant_used = L.minorant_used;
  r.lower_note = L.note;
  r.weights = K.table;
  r.down_weights = L.model.table;
  return r;
}

// wce_down <= wce_K <= wce_up.
inline TransferReport full_transfer(const PointSet& ps, const KernelWeights& w, const UnivariateKernel& k,
                                    const UnivariateKernel& l, double C_up, double C_down) {
  TransferReport r = transfer_upper(ps, w, k, l, C_up);
  const TransferReport lo = transfer_lower(ps, w, k, l, C_down);
  r.C_down = C_down;
  r.wce_down = lo.wce_down;
  r.lower_ok = lo.lower_ok;
  r.minorant_used = lo.minorant_used;
  r.lower_note = lo.lower_note;
  r.down_weights = lo.down_weights;
  r.ordering_ok = r.upper_ok && r.lower_ok;
  return r;
}

}  // namespace cmw
