#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cmw/error_transfer.hpp"
#include "cmw/families.hpp"
#include "cmw/weight_file.hpp"

namespace cmw::cli {

enum ExitCode : int { kOk = 0, kFails = 1, kParse = 2, kNumerical = 3, kUndecidable = 4 };

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << x;
  return s.str();
}

struct Input {
  std::string path;
  std::string text;
  WeightFile file;
};

inline Input load_input(const std::string& path, std::istream& stdin_stream) {
  Input in;
  in.path = path;
  if (path == "-") {
    in.text.assign(std::istreambuf_iterator<char>(stdin_stream), {});
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open weight file " + path);
    in.text.assign(std::istreambuf_iterator<char>(f), {});
  }
  in.file = parse_weight_file(in.text);
  return in;
}

// Accumulates "key: value" lines; `prefix` turns them into comments in weight-file output.
class Report {
 public:
  explicit Report(std::string prefix = "") : prefix_(std::move(prefix)) {}
  void line(const std::string& key, const std::string& value) { out_ << prefix_ << key << ": " << value << "\n"; }
  void raw(const std::string& text) {
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) out_ << prefix_ << l << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::string prefix_;
  std::ostringstream out_;
};

inline std::string verdict_word(bool ok) { return ok ? "PASS" : "FAIL"; }

inline double parse_positive(const std::string& text, const std::string& what) {
  const double v = parse_scalar<double>(text);
  if (!(v > 0) || !std::isfinite(v)) throw ParseError(what + " must be a positive number");
  return v;
}

template <class T>
std::string table_lines(const std::string& label, const SignedTable<T>& t) {
  std::string out;
  for (Mask u = 0; u < t.size(); ++u) out += label + " " + format_subset(u) + " " + format_scalar(t[u]) + "\n";
  return out;
}

// The weight file as kernel weights of finite dimension; --d fixes the dimension of d = inf files.
inline KernelWeights kernel_weights(const WeightFile& wf, int d_override) {
  if (wf.table) {
    if (d_override > 0 && d_override != wf.d) throw DimensionError("--d differs from the dimension of the dense file");
    return *wf.table;
  }
  int d = wf.d;
  if (d_override > 0) {
    if (d != kInfiniteDim && d != d_override) throw DimensionError("--d differs from the file dimension");
    d = d_override;
  }
  if (d == kInfiniteDim) throw DimensionError("infinite-dimensional weights need --d for kernel computations");
  return WeightSpec(wf.spec->variant(), d);
}

inline PointSet make_points(const std::string& spec, int d, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("--points expects kind:argument");
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  auto count = [&] {
    if (!detail::all_digits(arg) || arg.size() > 7) throw ParseError("point count must be a positive integer");
    const std::size_t n = std::stoul(arg);
    if (n == 0) throw ParseError("point count must be positive");
    return n;
  };
  PointSet ps;
  if (kind == "lattice")
    ps = lattice_points(count(), d);
  else if (kind == "uniform")
    ps = uniform_points(count(), d, seed);
  else if (kind == "file")
    ps = points_from_file(arg, d);
  else if (kind == "explicit")
    ps = explicit_points(arg, d);
  else
    throw ParseError("unknown point kind '" + kind + "'");
  try {
    check_points(ps);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  return ps;
}

struct Options {
  std::string direction, property, path, k = "min", l = "min", C = "1", Cup = "auto", Cdown = "auto";
  std::string points = "lattice:64", tol;
  bool exact = false, naive = false, C_given = false;
  int d = 0;
  std::uint64_t seed = 0;
};

inline std::string header(const std::vector<std::string>& args, const Input* in) {
  std::string cmd;
  for (const auto& a : args) cmd += (cmd.empty() ? "" : " ") + a;
  std::string out = "command: " + cmd + "\n";
  if (in) out += "input: " + in->path + " fnv1a64=" + hex64(fnv1a64(in->text)) + "\n";
  return out;
}

template <class T>
int transform_dense(const Options& o, const BasicWeightTable<T>& g, Report& rep, std::ostream& out) {
  const T c2 = [&] {
    if constexpr (is_exact_v<T>) {
      const T c = parse_scalar<T>(o.C);
      if (c <= 0) throw ParseError("--C must be positive");
      return T(c * c);
    } else {
      const double c = parse_positive(o.C, "--C");
      return c * c;
    }
  }();
  const TransformParams<T> p{c2};
  if (o.naive) check_dense_dim(g.dim(), kMaxNaiveDim);
  if (o.direction == "up") {
    const SignedTable<T> up = o.naive ? t_up_naive(g.as_signed(), p) : t_up(g.as_signed(), p);
    rep.line("result", "completely monotone image");
    out << rep.str() << serialize_table(BasicWeightTable<T>::from_signed(up));
    return kOk;
  }
  const auto cert = check_completely_monotone(g);
  if (!cert.is_member) {
    const auto& w = std::get<ViolationWitness<T>>(cert.witness);
    rep.line("verdict", "FAIL input is not completely monotone");
    rep.line("witness", "u=" + format_subset(w.u) + " v=" + format_subset(w.v) + " delta=" + format_scalar(w.value));
    out << rep.str();
    return kFails;
  }
  const SignedTable<T> down = o.naive ? t_down_naive(g.as_signed(), p) : t_down(g.as_signed(), p);
  T tol = cert.tolerance;
  if constexpr (!is_exact_v<T>) tol /= std::min(1.0, std::pow(c2, g.dim()));
  rep.line("result", "inverse image");
  out << rep.str() << serialize_table(BasicWeightTable<T>::from_signed(down, tol));
  return kOk;
}

inline int cmd_transform(const Options& o, const Input& in, Report& rep, std::ostream& out) {
  if (o.direction != "up" && o.direction != "down") throw ParseError("direction must be up or down");
  const WeightFile& wf = in.file;
  rep.line("arithmetic", o.exact || wf.exact ? "exact" : "float64");
  if (wf.d != kInfiniteDim) {
    if (o.exact || wf.exact) return transform_dense(o, wf.dense_exact(), rep, out);
    return transform_dense(o, wf.dense(), rep, out);
  }
  if (o.exact) throw ParseError("exact arithmetic needs finite d");
  const double C = parse_positive(o.C, "--C");
  const StructuredWeights w = o.direction == "up" ? t_up_spec(*wf.spec, C) : t_down_spec(*wf.spec, C);
  if (auto* spec = std::get_if<WeightSpec>(&w)) {
    rep.line("result", o.direction == "up" ? "structured sum-operator image" : "structured inverse image");
    out << rep.str() << serialize_spec(*spec);
    return kOk;
  }
  const auto& ev = std::get<EntryEvaluator>(w);
  if (o.d <= 0) throw UndecidableError(ev.description + " has no closed file form; pass --d to list a section");
  check_dense_dim(o.d);
  WeightTable section(o.d);
  for (Mask u = 0; u < section.size(); ++u) {
    const Certified c = ev(to_subset(u));
    section.set(u, c.value);
  }
  rep.line("result", "section on subsets of [" + std::to_string(o.d) + "] of the " + ev.description);
  out << rep.str() << serialize_table(section);
  return kOk;
}

template <class T>
int check_monotone_dense(const BasicWeightTable<T>& g, Report& rep) {
  const auto cert = check_completely_monotone(g);
  rep.line("class", "M_d");
  rep.line("tolerance", format_scalar(cert.tolerance));
  rep.line("verdict", verdict_word(cert.is_member));
  rep.line("min_certificate_entry", format_scalar(cert.min_value));
  if (cert.is_member) {
    rep.raw(table_lines("certificate", std::get<SignedTable<T>>(cert.witness)));
  } else {
    const auto& w = std::get<ViolationWitness<T>>(cert.witness);
    rep.line("witness", "u=" + format_subset(w.u) + " v=" + format_subset(w.v) + " delta=" + format_scalar(w.value));
  }
  return cert.is_member ? kOk : kFails;
}

inline int verdict_exit(Verdict v) { return v == Verdict::Holds ? kOk : v == Verdict::Fails ? kFails : kUndecidable; }

inline std::string verdict_text(Verdict v) {
  return v == Verdict::Holds ? "PASS" : v == Verdict::Fails ? "FAIL" : "UNKNOWN";
}

inline int cmd_check(const Options& o, const Input& in, Report& rep) {
  const WeightFile& wf = in.file;
  const bool finite = wf.d != kInfiniteDim;
  if (o.property == "monotone" || (o.property == "A_d" && finite)) {
    if (o.property == "A_d") rep.line("note", "in finite dimension the range of the sum operator is M_d");
    if (finite) {
      if (o.exact || wf.exact) return check_monotone_dense(wf.dense_exact(), rep);
      return check_monotone_dense(wf.dense(), rep);
    }
    const SpecMembership m = membership_A_d(*wf.spec);
    rep.line("class", "M_inf");
    rep.line("verdict", verdict_text(m.in_M));
    rep.line("reason", m.reason);
    return verdict_exit(m.in_M);
  }
  if (o.property == "A_d") {
    const SpecMembership m = membership_A_d(*wf.spec);
    rep.line("class", "A_inf");
    rep.line("in_M", to_string(m.in_M));
    rep.line("in_N", to_string(m.in_N));
    rep.line("verdict", verdict_text(m.in_A));
    rep.line("reason", m.reason);
    return verdict_exit(m.in_A);
  }
  const double C = parse_positive(o.C, "--C");
  rep.line("C", format_scalar(C));
  if (o.property == "summable") {
    if (wf.table) {
      const double c2 = C * C;
      long double s = 0;
      for (Mask u = 0; u < wf.table->size(); ++u) s += std::pow(c2, cardinality(u)) * (*wf.table)[u];
      rep.line("verdict", "PASS");
      rep.line("value", format_scalar(static_cast<double>(s)));
      rep.line("reason", "finite dimension");
      return kOk;
    }
    const SummabilityReport s = summability(*wf.spec, C);
    rep.line("verdict", verdict_text(s.verdict));
    if (s.verdict == Verdict::Holds) {
      rep.line("value", format_scalar(s.value.value));
      rep.line("error_bound", format_scalar(s.value.error));
    }
    rep.line("reason", s.reason);
    return verdict_exit(s.verdict);
  }
  if (o.property == "decay") {
    if (wf.table) {
      rep.line("decay", "inf");
      rep.line("reason", "finitely many weights");
      return kOk;
    }
    const DecayResult before = decay(*wf.spec);
    rep.line("decay", to_string(before));
    rep.line("decay_reason", before.reason);
    int code = before.kind == DecayResult::Kind::Unknown ? kUndecidable : kOk;
    try {
      const DecayResult after = decay_after_up(*wf.spec, C);
      rep.line("decay_after_up", to_string(after));
      rep.line("decay_after_up_reason", after.reason);
    } catch (const Error& e) {
      rep.line("decay_after_up", "unknown");
      rep.line("decay_after_up_reason", e.what());
    }
    return code;
  }
  throw ParseError("unknown property '" + o.property + "' (expected monotone, summable, A_d, decay)");
}

template <class T>
int minorant_dense(const BasicWeightTable<T>& g, Report& rep, std::ostream& out) {
  check_dense_dim(g.dim(), kMaxMinorantDim);
  BasicWeightTable<T> h = g;
  MaximalityReport<T> ver;
  if (check_completely_monotone(g).is_member) {
    rep.line("note", "input is completely monotone");
    ver = verify_maximal(g, g);
  } else {
    MinorantResult<T> r = maximal_monotone_minorant(g);
    h = r.minorant;
    ver = r.verification;
  }
  T mass(0);
  for (const T& v : h.values()) mass += v;
  rep.line("objective", format_scalar(mass));
  rep.line("is_minorant", ver.is_minorant ? "yes" : "no");
  rep.line("is_monotone", ver.is_monotone ? "yes" : "no");
  rep.line("verdict", verdict_word(ver.is_maximal) + " maximal");
  out << rep.str() << serialize_table(h);
  return ver.is_maximal ? kOk : kFails;
}

inline int cmd_minorant(const Options& o, const Input& in, Report& rep, std::ostream& out) {
  const WeightFile& wf = in.file;
  if (wf.d == kInfiniteDim) throw DimensionError("minorant needs a finite-dimensional file");
  if (o.exact || wf.exact) return minorant_dense(wf.dense_exact(), rep, out);
  return minorant_dense(wf.dense(), rep, out);
}

inline KernelWeights weights_or_default(const Input* in, int d) {
  if (in) return kernel_weights(in->file, d);
  const int dim = d > 0 ? d : 3;
  return WeightSpec::product(Sequence::power_law(1.0, 2.0), dim);
}

inline double resolve_constant(const std::string& text, const UnivariateKernel& from, const UnivariateKernel& into,
                               const std::string& what, Report& rep) {
  if (text != "auto") return parse_positive(text, what);
  const EmbeddingBound b = embedding_norm_converged(from, into);
  rep.line(what.substr(2) + "_lower_bound", format_scalar(b.C_lb));
  rep.line(what.substr(2) + "_lower_bound_points", std::to_string(b.points));
  return 1.05 * b.C_lb;
}

inline void describe_weights(const KernelWeights& w, Report& rep) {
  if (auto* s = std::get_if<WeightSpec>(&w)) {
    rep.line("weights", s->family_name() + " d=" + std::to_string(s->dim()));
    if (auto* seq = s->sequence()) rep.line("gamma_seq", seq->describe());
  } else {
    rep.line("weights", "dense d=" + std::to_string(weights_dim(w)));
  }
}

inline int cmd_verify_embedding(const Options& o, const Input* in, Report& rep) {
  const UnivariateKernel k = builtin_kernel(o.k), l = builtin_kernel(o.l);
  const KernelWeights w = weights_or_default(in, o.d);
  describe_weights(w, rep);
  rep.line("kernels", "k=" + k.name + " l=" + l.name);
  const double C = resolve_constant(o.C_given ? o.C : "auto", k, l, "--C", rep);
  rep.line("C", format_scalar(C));
  const PointSet ps = make_points(o.points, weights_dim(w), o.seed);
  rep.line("points", o.points + " n=" + std::to_string(ps.size()));
  const double tol = o.tol.empty() ? 1e-8 : parse_positive(o.tol, "--tol");
  const EmbeddingReport r = verify_embedding(k, l, C, w, ps, tol);
  rep.line("tolerance", format_scalar(tol));
  rep.line("min_eigenvalue", format_scalar(r.min_eigenvalue));
  rep.line("max_eigenvalue", format_scalar(r.max_eigenvalue));
  rep.line("C_lb", format_scalar(r.C_lb));
  rep.line("verdict", verdict_word(r.passed));
  return r.passed ? kOk : kFails;
}

inline int cmd_wce(const Options& o, const Input* in, Report& rep) {
  const UnivariateKernel k = builtin_kernel(o.k);
  const KernelWeights w = weights_or_default(in, o.d);
  describe_weights(w, rep);
  rep.line("kernel", k.name);
  const PointSet ps = make_points(o.points, weights_dim(w), o.seed);
  rep.line("points", o.points + " n=" + std::to_string(ps.size()));
  const KernelModel K = model_from_weights(w, k);
  const double e2 = wce_squared(ps, K);
  const double e = wce_integration(ps, K);
  rep.line("wce_squared", format_scalar(e2));
  rep.line("wce", format_scalar(e));
  return kOk;
}

inline int cmd_transfer(const Options& o, const Input* in, Report& rep) {
  const UnivariateKernel k = builtin_kernel(o.k), l = builtin_kernel(o.l);
  const KernelWeights w = weights_or_default(in, o.d);
  describe_weights(w, rep);
  rep.line("kernels", "k=" + k.name + " l=" + l.name);
  const double Cup = resolve_constant(o.Cup, k, l, "--Cup", rep);
  const double Cdown = resolve_constant(o.Cdown, l, k, "--Cdown", rep);
  const PointSet ps = make_points(o.points, weights_dim(w), o.seed);
  rep.line("points", o.points + " n=" + std::to_string(ps.size()));
  const TransferReport r = full_transfer(ps, w, k, l, Cup, Cdown);
  rep.line("C_up", format_scalar(r.C_up));
  rep.line("C_down", format_scalar(r.C_down));
  if (r.minorant_used) rep.line("minorant", r.lower_note);
  rep.line("wce_down", format_scalar(r.wce_down));
  rep.line("wce_K", format_scalar(r.wce_K));
  rep.line("wce_up", format_scalar(r.wce_up));
  rep.line("slack", format_scalar(kTransferSlack));
  if (r.weights) rep.raw(table_lines("weights", r.weights->as_signed()));
  if (r.up_weights) rep.raw(table_lines("weights_up", r.up_weights->as_signed()));
  if (r.down_weights) rep.raw(table_lines("weights_down", r.down_weights->as_signed()));
  rep.line("upper", verdict_word(r.upper_ok));
  rep.line("lower", verdict_word(r.lower_ok));
  rep.line("verdict", verdict_word(r.ordering_ok));
  return r.ordering_ok ? kOk : kFails;
}

inline int cmd_selftest(const Options& o, Report& rep) {
  bool all = true;
  auto record = [&](const std::string& name, bool ok) {
    rep.line(name, verdict_word(ok));
    all = all && ok;
  };
  {
    const WeightSpec pod = WeightSpec::pod(Sequence::explicit_values({3, 2, 1}), OrderSequence::explicit_values({1, 3, 4, 5}),
                                           0.0, 5.0, 3);
    const ExactWeightTable up = t_up(to_exact(truncate_to_table(pod, 3)), TransformParams<Rational>{Rational(1)});
    const bool values = up[to_mask({2}, 3)] == 68 && up[to_mask({3}, 3)] == 53 && up[to_mask({1, 2}, 3)] == 54 &&
                        up[to_mask({1, 3}, 3)] == 42;
    record("pod_table", values && !looks_like_pod(to_float(up)).consistent);
  }
  {
    const ExactWeightTable g(2, {5, 5, 3, 1});
    const TransformParams<Rational> one{Rational(1)};
    const SignedTable<Rational> down = t_down(g, one);
    const bool down_ok = down == SignedTable<Rational>(2, {-2, 4, 2, 1});
    const auto cert = check_completely_monotone(g);
    const MinorantResult<Rational> mr = maximal_monotone_minorant(g);
    const ExactWeightTable eta(2, {5, 5, 1, 1}), zeta(2, {5, 3, 3, 1});
    const bool incomparable = !(eta[1] <= zeta[1] && eta[2] <= zeta[2]) && !(zeta[1] <= eta[1] && zeta[2] <= eta[2]);
    record("minorant_example", down_ok && !cert.is_member && mr.total_mass == 12 && verify_maximal(g, eta).is_maximal &&
                                   verify_maximal(g, zeta).is_maximal && incomparable);
  }
  {
    const PointSet ps{1, {{0.5}}};
    const KernelWeights w = WeightSpec::fin_support({{Subset{1}, 1.0}}, 1);
    const double e = wce_integration(ps, w, min_kernel());
    rep.line("single_point_wce", format_scalar(e));
    record("single_point", std::abs(e - std::sqrt(1.0 / 12.0)) <= 1e-12);
  }
  {
    std::mt19937_64 rng(o.seed);
    std::vector<double> v(64);
    for (double& x : v) x = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const WeightTable g(6, v);
    const auto dev = roundtrip_down_up(g, TransformParams<double>{0.25});
    rep.line("seed", std::to_string(o.seed));
    rep.line("roundtrip_deviation", format_scalar(dev.down_after_up));
    record("roundtrip", dev.down_after_up <= 1e-9 * g.max_abs());
  }
  rep.line("verdict", verdict_word(all));
  return all ? kOk : kFails;
}

// Runs one command; `args` excludes the program name. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
  CLI::App app{"Calculus on subset-lattice weights and weighted kernel spaces", "cmw"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--d", o.d, "dimension for d = inf files or generated weights")->check(CLI::Range(1, kMaxDenseDim));
    sub->add_option("--seed", o.seed, "seed for uniform points");
    sub->add_option("--tol", o.tol, "tolerance override");
  };
  auto* transform = app.add_subcommand("transform", "apply the sum operator (up) or its inverse (down)");
  transform->add_option("direction", o.direction, "up or down")->required();
  transform->add_option("file", o.path, "weight file, - for stdin")->required();
  transform->add_option("--C", o.C, "scale C > 0");
  transform->add_flag("--exact", o.exact, "rational arithmetic");
  transform->add_flag("--naive", o.naive, "direct summation");
  add_common(transform);
  auto* check = app.add_subcommand("check", "test monotone, summable, A_d or decay");
  check->add_option("property", o.property, "monotone | summable | A_d | decay")->required();
  check->add_option("file", o.path, "weight file")->required();
  check->add_option("--C", o.C, "scale C > 0");
  check->add_flag("--exact", o.exact, "rational arithmetic");
  add_common(check);
  auto* minorant = app.add_subcommand("minorant", "maximal completely monotone minorant");
  minorant->add_option("file", o.path, "weight file")->required();
  minorant->add_flag("--exact", o.exact, "rational arithmetic");
  add_common(minorant);
  auto* embed = app.add_subcommand("verify-embedding", "Gram-difference test of the kernel embedding");
  embed->add_option("file", o.path, "weight file (default: product weights j^-2)");
  embed->add_option("--k", o.k, "kernel of the source space");
  embed->add_option("--l", o.l, "kernel of the target space");
  auto* c_opt = embed->add_option("--C", o.C, "embedding constant or auto");
  embed->add_option("--points", o.points, "lattice:n | uniform:n | file:path | explicit:x,y;...");
  add_common(embed);
  auto* wce = app.add_subcommand("wce", "worst-case integration error of an equal-weight rule");
  wce->add_option("file", o.path, "weight file (default: product weights j^-2)");
  wce->add_option("--k", o.k, "univariate kernel");
  wce->add_option("--points", o.points, "lattice:n | uniform:n | file:path | explicit:x,y;...");
  add_common(wce);
  auto* transfer = app.add_subcommand("transfer", "upper and lower error transfer");
  transfer->add_option("file", o.path, "weight file (default: product weights j^-2)");
  transfer->add_option("--k", o.k, "kernel of the original space");
  transfer->add_option("--l", o.l, "kernel of the transferred spaces");
  transfer->add_option("--Cup", o.Cup, "upper embedding constant or auto");
  transfer->add_option("--Cdown", o.Cdown, "lower embedding constant or auto");
  transfer->add_option("--points", o.points, "lattice:n | uniform:n | file:path | explicit:x,y;...");
  add_common(transfer);
  auto* selftest = app.add_subcommand("selftest", "built-in reference checks");
  add_common(selftest);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
  o.C_given = c_opt->count() > 0;

  try {
    const bool needs_file = transform->parsed() || check->parsed() || minorant->parsed();
    std::optional<Input> input;
    if (needs_file || !o.path.empty()) input = load_input(o.path, in);
    const Input* ip = input ? &*input : nullptr;
    const bool file_output = transform->parsed() || minorant->parsed();
    Report rep(file_output ? "# " : "");
    rep.raw(header(args, ip));
    int code = kOk;
    std::ostringstream body;
    if (transform->parsed()) {
      code = cmd_transform(o, *input, rep, body);
    } else if (minorant->parsed()) {
      code = cmd_minorant(o, *input, rep, body);
    } else {
      if (check->parsed())
        code = cmd_check(o, *input, rep);
      else if (embed->parsed())
        code = cmd_verify_embedding(o, ip, rep);
      else if (wce->parsed())
        code = cmd_wce(o, ip, rep);
      else if (transfer->parsed())
        code = cmd_transfer(o, ip, rep);
      else
        code = cmd_selftest(o, rep);
      body << rep.str();
    }
    out << body.str();
    return code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kParse;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const UndecidableError& e) {
    err << "undecidable: " << e.what() << "\n";
    return kUndecidable;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kFails;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFails;
  }
}

}  // namespace cmw::cli
