#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cmw/errors.hpp"

namespace cmw {

// Bit j-1 of a mask is set iff coordinate j belongs to the set.
using Mask = std::uint32_t;

// A finite set of 1-based coordinates, sorted increasingly without duplicates.
using Subset = std::vector<int>;

inline constexpr int kMaxDenseDim = 24;
inline constexpr int kInfiniteDim = -1;

constexpr int cardinality(Mask u) { return std::popcount(u); }

// Largest element of u (1-based), 0 for the empty set.
constexpr int max_element(Mask u) { return u == 0 ? 0 : 32 - std::countl_zero(u); }

constexpr Mask full_mask(int d) { return d >= 32 ? ~Mask{0} : ((Mask{1} << d) - 1); }

constexpr Mask coordinate_bit(int j) { return Mask{1} << (j - 1); }

constexpr bool is_subset_of(Mask sub, Mask sup) { return (sub & ~sup) == 0; }

inline void check_dense_dim(int d, int limit = kMaxDenseDim) {
  if (d < 0 || d > limit)
    throw DimensionError("dimension " + std::to_string(d) + " outside [0, " + std::to_string(limit) + "]");
}

// Validated element of U_d.
class SubsetIndex {
 public:
  SubsetIndex(int d, Mask bits) : d_(d), bits_(bits) {
    check_dense_dim(d);
    if (!is_subset_of(bits, full_mask(d))) throw DimensionError("subset exceeds dimension");
  }
  int dim() const { return d_; }
  Mask bits() const { return bits_; }
  int size() const { return cardinality(bits_); }
  bool operator==(const SubsetIndex&) const = default;

 private:
  int d_;
  Mask bits_;
};

inline Subset to_subset(Mask u) {
  Subset s;
  for (int j = 1; u != 0; ++j, u >>= 1)
    if (u & 1u) s.push_back(j);
  return s;
}

inline Mask to_mask(const Subset& s, int d) {
  Mask m = 0;
  for (int j : s) {
    if (j < 1 || j > d) throw DimensionError("coordinate " + std::to_string(j) + " outside 1.." + std::to_string(d));
    m |= coordinate_bit(j);
  }
  return m;
}

inline std::string format_subset(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

inline std::string format_subset(Mask u) { return format_subset(to_subset(u)); }

// Parses "{}", "{1,3}". Elements must be strictly increasing and >= 1.
inline Subset parse_subset(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw ParseError("subset must be written as {i,j,...}");
  std::string_view body = text.substr(1, text.size() - 2);
  Subset s;
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string_view item = body.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw ParseError("empty subset element");
    long v = 0;
    for (char c : item) {
      if (c < '0' || c > '9') throw ParseError("subset element is not a positive integer");
      v = v * 10 + (c - '0');
      if (v > 1'000'000'000L) throw ParseError("subset element too large");
    }
    if (v < 1) throw ParseError("subset elements are 1-based");
    if (!s.empty() && v <= s.back()) throw ParseError("subset elements must be strictly increasing");
    s.push_back(static_cast<int>(v));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
    if (body.empty()) throw ParseError("trailing comma in subset");
  }
  return s;
}

}  // namespace cmw
