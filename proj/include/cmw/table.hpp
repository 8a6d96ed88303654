#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmw/scalar.hpp"
#include "cmw/subset.hpp"

namespace cmw {

// Real-valued family indexed by U_d, stored in mask order.
template <class T>
class SignedTable {
 public:
  using value_type = T;

  SignedTable() = default;
  explicit SignedTable(int d) : d_(d) {
    check_dense_dim(d);
    values_.assign(std::size_t{1} << d, T(0));
  }
  SignedTable(int d, std::vector<T> values) : d_(d), values_(std::move(values)) {
    check_dense_dim(d);
    if (values_.size() != (std::size_t{1} << d))
      throw DimensionError("table of dimension " + std::to_string(d) + " needs " +
                           std::to_string(std::size_t{1} << d) + " entries");
  }

  int dim() const { return d_; }
  std::size_t size() const { return values_.size(); }
  const T& operator[](Mask u) const { return values_[u]; }
  T& operator[](Mask u) { return values_[u]; }
  std::span<const T> values() const { return values_; }
  std::span<T> values() { return values_; }

  T max_abs() const {
    T m(0);
    for (const T& v : values_) m = std::max(m, abs_value(v));
    return m;
  }
  T min_value() const { return values_.empty() ? T(0) : *std::min_element(values_.begin(), values_.end()); }

  bool operator==(const SignedTable&) const = default;

 private:
  int d_ = 0;
  std::vector<T> values_{T(0)};
};

// Non-negative weights on U_d.
template <class T>
class BasicWeightTable {
 public:
  using value_type = T;

  BasicWeightTable() : table_(0) {}
  explicit BasicWeightTable(int d) : table_(d) {}
  BasicWeightTable(int d, std::vector<T> values) : table_(d, std::move(values)) { validate(); }

  // Negative entries no smaller than -clamp_tol are set to zero; anything below is rejected.
  static BasicWeightTable from_signed(SignedTable<T> t, T clamp_tol = T(0)) {
    for (T& v : t.values()) {
      if (v < T(0)) {
        if (v >= -clamp_tol)
          v = T(0);
        else
          throw PreconditionError("negative weight " + format_scalar(v));
      }
    }
    BasicWeightTable w;
    w.table_ = std::move(t);
    w.validate();
    return w;
  }

  int dim() const { return table_.dim(); }
  std::size_t size() const { return table_.size(); }
  const T& operator[](Mask u) const { return table_[u]; }
  void set(Mask u, T value) {
    check_entry(value);
    table_[u] = std::move(value);
  }
  std::span<const T> values() const { return table_.values(); }
  const SignedTable<T>& as_signed() const { return table_; }
  T max_abs() const { return table_.max_abs(); }

  bool operator==(const BasicWeightTable&) const = default;

 private:
  static void check_entry(const T& v) {
    if constexpr (!is_exact_v<T>) {
      if (!std::isfinite(v)) throw PreconditionError("non-finite weight");
    }
    if (v < T(0)) throw PreconditionError("negative weight " + format_scalar(v));
  }
  void validate() const {
    for (const T& v : table_.values()) check_entry(v);
  }

  SignedTable<T> table_;
};

using WeightTable = BasicWeightTable<double>;
using ExactWeightTable = BasicWeightTable<Rational>;

inline ExactWeightTable to_exact(const WeightTable& w) {
  std::vector<Rational> v;
  v.reserve(w.size());
  for (double x : w.values()) v.push_back(exact_from_double(x));
  return ExactWeightTable(w.dim(), std::move(v));
}

inline WeightTable to_float(const ExactWeightTable& w) {
  std::vector<double> v;
  v.reserve(w.size());
  for (const Rational& x : w.values()) v.push_back(to_double(x));
  return WeightTable(w.dim(), std::move(v));
}

}  // namespace cmw
