#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cmw/weight_spec.hpp"

namespace cmw {

// Text format:
//   format = 1
//   d = <n> | inf
//   family = dense | product | pod | finite-order | finite-support
//   arithmetic = float64 | exact
//   {i,j,...} <value>            (dense, finite-support, explicit finite-order)
//   gamma_seq = <sequence>       (product, pod, generated finite-order)
//   Gamma_seq = <order sequence> (pod)
//   a = <r>, C_a = <r>, order = <int>
// '#' starts a comment.
struct WeightFile {
  int d = 0;
  std::string family;
  bool exact = false;
  std::optional<WeightTable> table;        // dense family
  std::optional<ExactWeightTable> exact_table;
  std::optional<WeightSpec> spec;          // other families

  // Weights as a dense float table (finite d only).
  WeightTable dense() const {
    if (table) return *table;
    if (d == kInfiniteDim) throw DimensionError("infinite-dimensional weights have no dense table");
    check_dense_dim(d);
    return truncate_to_table(*spec, d);
  }

  ExactWeightTable dense_exact() const {
    if (exact_table) return *exact_table;
    return to_exact(dense());
  }
};

namespace detail {

inline std::map<std::string, std::string> key_values(std::istringstream& in, const std::string& what) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value in " + what + ", got '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

inline double required(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& what) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(what + " needs " + key + "=");
  return parse_scalar<double>(it->second);
}

inline std::vector<double> number_list(std::istringstream& in) {
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::istringstream parts(tok);
    std::string p;
    while (std::getline(parts, p, ','))
      if (!p.empty()) out.push_back(parse_scalar<double>(p));
  }
  return out;
}

}  // namespace detail

// "powerlaw c=<r> lambda=<r>", "geometric c=<r> q=<r>", "explicit v1 v2 ..." (entries from j = 1) or
// "saturated inner=<s> outer=<o> <sequence>" for o s x_j / (1 + s x_j).
inline Sequence parse_sequence(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  if (!(in >> kind)) throw ParseError("empty sequence");
  try {
    if (kind == "powerlaw") {
      auto kv = detail::key_values(in, kind);
      return Sequence::power_law(detail::required(kv, "c", kind), detail::required(kv, "lambda", kind));
    }
    if (kind == "geometric") {
      auto kv = detail::key_values(in, kind);
      return Sequence::geometric(detail::required(kv, "c", kind), detail::required(kv, "q", kind));
    }
    if (kind == "explicit") return Sequence::explicit_values(detail::number_list(in));
    if (kind == "saturated") {
      std::string inner, outer, rest;
      in >> inner >> outer;
      std::getline(in, rest);
      std::istringstream params(inner + " " + outer);
      auto kv = detail::key_values(params, kind);
      return Sequence::saturated(parse_sequence(rest), detail::required(kv, "inner", kind),
                                 detail::required(kv, "outer", kind));
    }
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid sequence: ") + e.what());
  }
  throw ParseError("unknown sequence kind '" + kind + "'");
}

// "constant c=<r>", "factorial c=<r> a=<r>" or "explicit v0 v1 ..." (entries from order 0).
inline OrderSequence parse_order_sequence(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  if (!(in >> kind)) throw ParseError("empty order sequence");
  try {
    if (kind == "constant") {
      auto kv = detail::key_values(in, kind);
      return OrderSequence::constant(detail::required(kv, "c", kind));
    }
    if (kind == "factorial") {
      auto kv = detail::key_values(in, kind);
      return OrderSequence::factorial(detail::required(kv, "c", kind), detail::required(kv, "a", kind));
    }
    if (kind == "explicit") return OrderSequence::explicit_values(detail::number_list(in));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid order sequence: ") + e.what());
  }
  throw ParseError("unknown order sequence kind '" + kind + "'");
}

inline WeightFile parse_weight_file(std::istream& in) {
  std::map<std::string, std::string> header;
  std::vector<std::pair<Subset, std::string>> entries;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '{') {
      const auto close = s.find('}');
      if (close == std::string_view::npos) fail("unterminated subset");
      Subset u;
      try {
        u = parse_subset(s.substr(0, close + 1));
      } catch (const ParseError& e) {
        fail(e.what());
      }
      std::string_view value = detail::trim(s.substr(close + 1));
      if (value.empty()) fail("missing value");
      entries.emplace_back(std::move(u), std::string(value));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value' or an entry line");
    const std::string key(detail::trim(s.substr(0, eq)));
    const std::string value(detail::trim(s.substr(eq + 1)));
    static const char* known[] = {"format", "d", "family", "arithmetic", "gamma_seq", "Gamma_seq", "a", "C_a", "order"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) fail("unknown key '" + key + "'");
    if (value.empty()) fail("empty value for '" + key + "'");
    if (!header.emplace(key, value).second) fail("duplicate key '" + key + "'");
  }

  auto need = [&](const std::string& key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw ParseError("missing '" + key + " ='");
    return it->second;
  };
  if (need("format") != "1") throw ParseError("unsupported format version '" + header["format"] + "'");
  WeightFile wf;
  const std::string& dtext = need("d");
  if (dtext == "inf") {
    wf.d = kInfiniteDim;
  } else {
    if (!detail::all_digits(dtext) || dtext.size() > 6) throw ParseError("d must be a non-negative integer or inf");
    wf.d = std::stoi(dtext);
  }
  wf.family = need("family");
  if (auto it = header.find("arithmetic"); it != header.end()) {
    if (it->second == "exact")
      wf.exact = true;
    else if (it->second != "float64")
      throw ParseError("arithmetic must be float64 or exact");
  }
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (header.count(k)) throw ParseError("'" + std::string(k) + "' is not allowed for family " + wf.family);
  };

  std::map<Subset, std::string> unique;
  for (auto& [u, v] : entries) {
    if (wf.d != kInfiniteDim && !u.empty() && u.back() > wf.d)
      throw ParseError("subset " + format_subset(u) + " exceeds d = " + std::to_string(wf.d));
    if (!unique.emplace(u, v).second) throw ParseError("duplicate subset " + format_subset(u));
  }
  auto float_entries = [&] {
    std::map<Subset, double> out;
    for (const auto& [u, v] : unique) {
      const double x = parse_scalar<double>(v);
      if (!(x >= 0) || !std::isfinite(x)) throw ParseError("weight for " + format_subset(u) + " must be finite and >= 0");
      out[u] = x;
    }
    return out;
  };
  if (wf.exact && wf.family != "dense") throw ParseError("exact arithmetic is supported for dense files only");

  try {
    if (wf.family == "dense") {
      forbid({"gamma_seq", "Gamma_seq", "a", "C_a", "order"});
      if (wf.d == kInfiniteDim) throw ParseError("dense weights need finite d");
      check_dense_dim(wf.d);
      if (wf.exact) {
        ExactWeightTable t(wf.d);
        for (const auto& [u, v] : unique) {
          const Rational x = parse_scalar<Rational>(v);
          if (x < 0) throw ParseError("weight for " + format_subset(u) + " must be >= 0");
          t.set(to_mask(u, wf.d), x);
        }
        wf.exact_table = t;
        wf.table = to_float(t);
      } else {
        WeightTable t(wf.d);
        for (const auto& [u, x] : float_entries()) t.set(to_mask(u, wf.d), x);
        wf.table = std::move(t);
      }
    } else if (wf.family == "product") {
      forbid({"Gamma_seq", "a", "C_a", "order"});
      if (!unique.empty()) throw ParseError("product weights take gamma_seq, not entry lines");
      wf.spec = WeightSpec::product(parse_sequence(need("gamma_seq")), wf.d);
    } else if (wf.family == "pod") {
      forbid({"order"});
      if (!unique.empty()) throw ParseError("pod weights take parameter lines, not entry lines");
      wf.spec = WeightSpec::pod(parse_sequence(need("gamma_seq")), parse_order_sequence(need("Gamma_seq")),
                                parse_scalar<double>(need("a")), parse_scalar<double>(need("C_a")), wf.d);
    } else if (wf.family == "finite-order") {
      forbid({"Gamma_seq", "a", "C_a"});
      const std::string& o = need("order");
      if (!detail::all_digits(o) || o.size() > 4) throw ParseError("order must be a non-negative integer");
      const int omega = std::stoi(o);
      if (header.count("gamma_seq")) {
        if (!unique.empty()) throw ParseError("give either gamma_seq or entry lines, not both");
        wf.spec = WeightSpec::finite_order(omega, parse_sequence(header["gamma_seq"]), wf.d);
      } else {
        wf.spec = WeightSpec::finite_order(omega, float_entries(), wf.d);
      }
    } else if (wf.family == "finite-support") {
      forbid({"gamma_seq", "Gamma_seq", "a", "C_a", "order"});
      wf.spec = WeightSpec::fin_support(float_entries(), wf.d);
    } else {
      throw ParseError("unknown family '" + wf.family + "'");
    }
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  }
  return wf;
}

inline WeightFile parse_weight_file(const std::string& text) {
  std::istringstream in(text);
  return parse_weight_file(in);
}

// Nonzero entries in mask order.
template <class T>
std::string serialize_table(const BasicWeightTable<T>& t) {
  std::string out = "format = 1\nd = " + std::to_string(t.dim()) + "\nfamily = dense\narithmetic = " +
                    (is_exact_v<T> ? "exact" : "float64") + "\n";
  for (Mask u = 0; u < t.size(); ++u)
    if (t[u] != T(0)) out += format_subset(u) + " " + format_scalar(t[u]) + "\n";
  return out;
}

inline std::string serialize_spec(const WeightSpec& spec) {
  std::string out = "format = 1\nd = " + (spec.infinite() ? std::string("inf") : std::to_string(spec.dim())) +
                    "\nfamily = " + spec.family_name() + "\narithmetic = float64\n";
  auto entry_lines = [&](const std::map<Subset, double>& entries) {
    for (const auto& [u, v] : entries)
      if (v != 0) out += format_subset(u) + " " + format_scalar(v) + "\n";
  };
  if (auto* p = spec.get<ProductWeights>()) {
    out += "gamma_seq = " + p->gamma.describe() + "\n";
  } else if (auto* p = spec.get<PodWeights>()) {
    out += "gamma_seq = " + p->gamma.describe() + "\nGamma_seq = " + p->order.describe() +
           "\na = " + format_scalar(p->a) + "\nC_a = " + format_scalar(p->C_a) + "\n";
  } else if (auto* f = spec.get<FiniteOrderWeights>()) {
    out += "order = " + std::to_string(f->omega) + "\n";
    if (f->gamma)
      out += "gamma_seq = " + f->gamma->describe() + "\n";
    else
      entry_lines(f->entries);
  } else {
    entry_lines(spec.get<FinSupportWeights>()->entries);
  }
  return out;
}

}  // namespace cmw
