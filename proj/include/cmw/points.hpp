#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cmw/errors.hpp"
#include "cmw/scalar.hpp"

namespace cmw {

// n points in [0,1]^d, one row per point.
struct PointSet {
  int d = 0;
  std::vector<std::vector<double>> points;

  std::size_t size() const { return points.size(); }
  const std::vector<double>& operator[](std::size_t i) const { return points[i]; }
};

namespace detail {

inline constexpr std::uint64_t kGeneratingVector[] = {1,      182667, 469891, 498753, 110745, 446247, 250185,
                                                      118627, 245333, 283199, 408519, 391023, 246327, 126539,
                                                      399185, 461527, 518157, 67741,  2887,   452129};

inline double radical_inverse_base2(std::uint64_t i) {
  std::uint64_t r = 0;
  for (int b = 0; b < 64; ++b) r |= ((i >> b) & 1u) << (63 - b);
  return std::ldexp(static_cast<double>(r >> 11), -53);
}

}  // namespace detail

// Shifted extensible rank-1 lattice: point i is frac(phi_2(i) z + shift). The first 2^m points form a
// rank-1 lattice and point sets with growing n are nested.
inline PointSet lattice_points(std::size_t n, int d) {
  constexpr int max_dim = static_cast<int>(std::size(detail::kGeneratingVector));
  if (d < 1 || d > max_dim) throw DimensionError("lattice points support dimensions 1.." + std::to_string(max_dim));
  if (n == 0) throw PreconditionError("need at least one point");
  PointSet ps{d, {}};
  ps.points.reserve(n);
  const double golden = 0.6180339887498949;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = detail::radical_inverse_base2(i);
    std::vector<double> x(d);
    for (int j = 0; j < d; ++j) {
      const double shift = std::fmod((j + 1) * golden, 1.0);
      const double z = static_cast<double>(detail::kGeneratingVector[j] % (std::uint64_t{1} << 20));
      double v = std::fmod(phi * z + shift, 1.0);
      x[j] = v;
    }
    ps.points.push_back(std::move(x));
  }
  return ps;
}

// Independent uniform points from a fixed 64-bit Mersenne twister stream.
inline PointSet uniform_points(std::size_t n, int d, std::uint64_t seed) {
  if (d < 1) throw DimensionError("dimension must be >= 1");
  std::mt19937_64 rng(seed);
  PointSet ps{d, {}};
  ps.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(d);
    for (double& v : x) v = std::ldexp(static_cast<double>(rng() >> 11), -53);
    ps.points.push_back(std::move(x));
  }
  return ps;
}

// Points separated by ';', coordinates by ','.
inline PointSet explicit_points(const std::string& text, int d) {
  PointSet ps{d, {}};
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::stringstream cols(row);
    std::string c;
    std::vector<double> x;
    while (std::getline(cols, c, ',')) x.push_back(parse_scalar<double>(c));
    if (static_cast<int>(x.size()) != d)
      throw ParseError("point has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(d));
    ps.points.push_back(std::move(x));
  }
  if (ps.points.empty()) throw ParseError("no points given");
  return ps;
}

inline PointSet points_from_file(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open point file " + path);
  PointSet ps{d, {}};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> x;
    while (ss >> tok) x.push_back(parse_scalar<double>(tok));
    if (x.empty()) continue;
    if (static_cast<int>(x.size()) != d) throw ParseError("point file row has wrong number of coordinates");
    ps.points.push_back(std::move(x));
  }
  if (ps.points.empty()) throw ParseError("point file is empty");
  return ps;
}

inline void check_points(const PointSet& ps) {
  for (const auto& x : ps.points) {
    if (static_cast<int>(x.size()) != ps.d) throw DimensionError("point has wrong dimension");
    for (double v : x)
      if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("points must lie in [0,1]^d");
  }
}

}  // namespace cmw
