// Runs the eleven acceptance criteria and prints one PASS/FAIL line per criterion.
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cmw/error_transfer.hpp"
#include "cmw/families.hpp"
#include "cmw/monotone_geometry.hpp"
#include "support.hpp"

using namespace cmw;
using namespace cmw::test;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

WeightSpec inverse_square(int d) { return WeightSpec::product(Sequence::power_law(1, 2), d); }

Outcome pod_table() {
  Outcome v;
  const WeightSpec pod =
      WeightSpec::pod(Sequence::explicit_values({3, 2, 1}), OrderSequence::explicit_values({1, 3, 4, 5}), 0.0, 5.0, 3);
  const ExactWeightTable g = to_exact(truncate_to_table(pod, 3));
  v.require(g == ExactWeightTable(3, {1, 9, 6, 24, 3, 12, 8, 30}), "input table");
  const ExactWeightTable up = t_up(g, TransformParams<Rational>{Rational(1)});
  v.require(up[to_mask({2}, 3)] == 68 && up[to_mask({3}, 3)] == 53, "singleton entries");
  v.require(up[to_mask({1, 2}, 3)] == 54 && up[to_mask({1, 3}, 3)] == 42, "pair entries");
  v.require(Rational(54, 68) != Rational(42, 53), "ratio test");
  v.require(!looks_like_pod(to_float(up)).consistent, "recognizer rejects");
  return v;
}

Outcome counterexample_suite() {
  Outcome v;
  const ExactWeightTable g(2, {5, 5, 3, 1});
  const TransformParams<Rational> one{Rational(1)};
  v.require(t_down(g, one) == SignedTable<Rational>(2, {-2, 4, 2, 1}), "inverse image");
  const auto cert = check_completely_monotone(g);
  v.require(!cert.is_member, "monotonicity check fails");
  if (!cert.is_member) {
    const auto& w = std::get<ViolationWitness<Rational>>(cert.witness);
    v.require(w.value < 0 && delta_at(g, w.v, w.u) == w.value, "witness reproduces");
  }
  const MinorantResult<Rational> m = maximal_monotone_minorant(g);
  v.require(m.total_mass == 12 && m.verification.is_maximal, "objective 12, maximal");
  const ExactWeightTable eta(2, {5, 5, 1, 1}), zeta(2, {5, 3, 3, 1});
  v.require(verify_maximal(g, eta).is_maximal && verify_maximal(g, zeta).is_maximal, "both candidates maximal");
  const bool eta_le = eta[1] <= zeta[1] && eta[2] <= zeta[2];
  const bool zeta_le = zeta[1] <= eta[1] && zeta[2] <= eta[2];
  v.require(!eta_le && !zeta_le, "incomparable");
  return v;
}

Outcome bijection_suite() {
  Outcome v;
  std::mt19937_64 rng(2024);
  double worst_du = 0, worst_ud = 0;
  for (double C : {0.5, 1.0, 2.0}) {
    const TransformParams<double> p = TransformParams<double>::from_c(C);
    for (int rep = 0; rep < 100; ++rep) {
      const WeightTable g = random_table(8, rng);
      const double scale = g.max_abs();
      worst_du = std::max(worst_du, max_abs_diff(t_down(t_up(g.as_signed(), p), p), g.as_signed()) / scale);
      const WeightTable m = t_up(random_table(8, rng), TransformParams<double>{1.0});
      worst_ud = std::max(worst_ud, max_abs_diff(t_up(t_down(m.as_signed(), p), p), m.as_signed()) / m.max_abs());
    }
  }
  v.require(worst_du <= 1e-9, "down after up " + sci(worst_du));
  v.require(worst_ud <= 1e-9, "up after down " + sci(worst_ud));
  for (const Rational& c2 : {Rational(1, 4), Rational(1), Rational(9, 4)}) {
    const TransformParams<Rational> p{c2};
    for (int rep = 0; rep < 5; ++rep) {
      const SignedTable<Rational> g = random_exact_signed(6, rng);
      v.require(t_down(t_up(g, p), p) == g && t_up(t_down(g, p), p) == g, "exact round trip");
    }
  }
  v.note("max relative deviation " + sci(std::max(worst_du, worst_ud)));
  return v;
}

Outcome monotone_range_suite() {
  Outcome v;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> cd(0.5, 2.0);
  int agree = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 1 + rep % 6;
    const WeightTable up = t_up(random_table(d, rng), TransformParams<double>::from_c(cd(rng)));
    if (check_completely_monotone(up).is_member && check_monotone_bruteforce(up).is_member) ++agree;
  }
  v.require(agree == 200, std::to_string(agree) + "/200 images monotone");
  return v;
}

Outcome closed_form_suite() {
  Outcome v;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> cd(0.1, 1.0), ld(1.2, 4.0), Cd(0.5, 2.0);
  const int d = 10;
  double worst_up = 0, worst_down = 0;
  bool sandwich = true;
  for (int rep = 0; rep < 10; ++rep) {
    const double C = Cd(rng);
    const WeightSpec s = WeightSpec::product(Sequence::power_law(cd(rng), ld(rng)), d);
    const TransformParams<double> p = TransformParams<double>::from_c(C);
    const WeightTable g = truncate_to_table(s, d);
    const WeightTable up = t_up(g, p);
    const SignedTable<double> down = t_down(g, p);
    const StructuredWeights sup = t_up_spec(s, C), sdown = t_down_spec(s, C);
    for (Mask u = 0; u < g.size(); ++u) {
      const Subset us = to_subset(u);
      const double a = structured_entry(sup, us).value;
      worst_up = std::max(worst_up, std::abs(a - up[u]) / up[u]);
      const double b = structured_entry(sdown, us).value;
      if (b != 0.0) worst_down = std::max(worst_down, std::abs(b - down[u]) / std::abs(b));
    }
    const SandwichBounds su = sandwich_up(s, C), sd = sandwich_down(s, C);
    const WeightTable ul = truncate_to_table(su.lower, d), uh = truncate_to_table(su.upper, d);
    const WeightTable dl = truncate_to_table(sd.lower, d), dh = truncate_to_table(sd.upper, d);
    for (Mask u = 0; u < g.size(); ++u) {
      const double eps = 1e-12;
      sandwich = sandwich && ul[u] <= up[u] * (1 + eps) && up[u] <= su.constant.hi() * uh[u] * (1 + eps);
      sandwich = sandwich && sd.constant.value * dl[u] <= down[u] * (1 + eps) && down[u] <= dh[u] * (1 + eps);
    }
  }
  v.require(worst_up <= 1e-12, "up relative " + sci(worst_up));
  v.require(worst_down <= 1e-12, "down relative " + sci(worst_down));
  v.require(sandwich, "sandwich inequalities");
  v.note("max relative deviation " + sci(std::max(worst_up, worst_down)));
  return v;
}

Outcome auxiliary_identity_suite() {
  Outcome v;
  std::mt19937_64 rng(6);
  long checks = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const SignedTable<Rational> rho = random_exact_signed(5, rng);
    for (int p = 0; p <= 5; ++p)
      for (int q = 0; q <= p; ++q)
        for (Mask u = 0; u < (Mask{1} << q); ++u) {
          const auto [left, right] = auxiliary_identity_sides(rho, p, q, u);
          v.require(left == right, "p=" + std::to_string(p) + " q=" + std::to_string(q));
          ++checks;
        }
  }
  v.note(std::to_string(checks) + " exact comparisons");
  return v;
}

Outcome hypercube_suite() {
  Outcome v;
  std::mt19937_64 rng(7);
  int disagreements = 0, members = 0;
  for (auto [d, reps] : {std::pair{3, 500}, std::pair{4, 100}}) {
    for (int rep = 0; rep < reps; ++rep) {
      ExactWeightTable g = random_exact_table(d, rng);
      if (rep % 2 == 0) g = t_up(g, TransformParams<Rational>{Rational(1)});
      const bool brute = check_monotone_bruteforce(g).is_member;
      members += brute;
      if (hypercube_extension_check(g).cm_decreasing != brute) ++disagreements;
    }
  }
  v.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  long identities = 0;
  for (int d = 1; d <= 5; ++d) {
    const ExactWeightTable g = random_exact_table(d, rng);
    for (Mask vm = 1; vm < (Mask{1} << d); ++vm) {
      std::vector<int> order = to_subset(vm);
      std::shuffle(order.begin(), order.end(), rng);
      for (Mask u = 0; u < g.size(); ++u) {
        const auto [left, right] = delta_prime_equivalence(g, order, u);
        v.require(left == right, "difference identity");
        ++identities;
      }
    }
  }
  v.note(std::to_string(members) + "/600 members, " + std::to_string(identities) + " identities");
  return v;
}

Outcome decay_suite() {
  Outcome v;
  const WeightSpec prod = WeightSpec::product(Sequence::power_law(1, 2));
  const DecayResult before = decay(prod), after = decay_after_up(prod, 1.0);
  v.require(before.kind == DecayResult::Kind::Exact && before.value() == 2.0, "product decay");
  v.require(after.kind == DecayResult::Kind::Exact && after.value() == 2.0, "product decay after up");
  const WeightSpec pod = WeightSpec::pod(Sequence::power_law(1, 3), OrderSequence::factorial(1, 1), 1, 1);
  v.require(decay(pod).value() == 3.0, "order-dependent decay");
  v.require(decay_after_up(pod, 1.0).value() == 3.0, "order-dependent decay after up");
  const double bound = extremal_lower_bound(5, 1.0);
  v.require(bound > 1e6, "extremal bound " + sci(bound));
  v.note("extremal bound at level 5: " + sci(bound));
  return v;
}

Outcome embedding_suite() {
  Outcome v;
  for (int d : {2, 3}) {
    const EmbeddingReport r = verify_embedding(min_kernel(), min_kernel(), 1.0, inverse_square(d), lattice_points(200, d));
    v.require(r.min_eigenvalue >= -1e-8 * r.max_eigenvalue, "d=" + std::to_string(d) + " min eigenvalue " + sci(r.min_eigenvalue));
    v.note("d=" + std::to_string(d) + " min eigenvalue " + sci(r.min_eigenvalue));
  }
  const double C_lb = embedding_norm_converged(min_kernel(), min_kernel()).C_lb;
  const double C = 0.5 * C_lb;
  bool violated = false;
  for (int d : {2, 3}) {
    const EmbeddingReport r = verify_embedding(min_kernel(), min_kernel(), C, inverse_square(d), lattice_points(200, d));
    if (!r.passed) {
      violated = true;
      v.note("negative control d=" + std::to_string(d) + " min eigenvalue " + sci(r.min_eigenvalue));
      break;
    }
  }
  v.require(violated, "negative control found no violation");
  return v;
}

Outcome transfer_suite() {
  Outcome v;
  const double c_up = auto_embedding_constant(min_kernel(), anova_kernel());
  const double c_down = auto_embedding_constant(anova_kernel(), min_kernel());
  for (std::size_t n : {16, 64, 256}) {
    const TransferReport r = full_transfer(lattice_points(n, 3), inverse_square(3), min_kernel(), anova_kernel(), c_up, c_down);
    const bool ok = r.wce_down <= r.wce_K + 1e-10 && r.wce_K <= r.wce_up + 1e-10;
    v.require(ok && r.ordering_ok, "sandwich at n=" + std::to_string(n));
    v.note("n=" + std::to_string(n) + ": " + sci(r.wce_down) + " <= " + sci(r.wce_K) + " <= " + sci(r.wce_up));
  }
  const double e = wce_integration(explicit_points("0.5", 1), WeightTable(1, {0.0, 1.0}), min_kernel());
  v.require(std::abs(e - std::sqrt(1.0 / 12.0)) <= 1e-12, "single point " + sci(e - std::sqrt(1.0 / 12.0)));
  return v;
}

struct Process {
  int code = -1;
  std::string out;
};

Process run_tool(const std::string& args) {
  Process p;
  const std::string cmd = std::string(CMW_TOOL_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

Outcome cli_suite() {
  Outcome v;
  const Process a = run_tool("selftest --seed 11"), b = run_tool("selftest --seed 11");
  v.require(a.code == 0, "selftest exit " + std::to_string(a.code));
  v.require(a.out == b.out && !a.out.empty(), "selftest reports differ");
  for (const char* key : {"pod_table: PASS", "minorant_example: PASS", "single_point: PASS"})
    v.require(a.out.find(key) != std::string::npos, std::string("missing ") + key);

  const auto dir = std::filesystem::temp_directory_path() / ("cmw_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string garbage = write("garbage.w", "this is not a weight file\n");
  const std::string dup = write("dup.w", "format = 1\nd = 2\nfamily = dense\n{1} 1\n{1} 2\n");
  const std::string neg = write("neg.w", "format = 1\nd = 2\nfamily = dense\n{2} -1\n");
  const std::string outside = write("outside.w", "format = 1\nd = 2\nfamily = dense\n{3} 1\n");
  const std::string nonmono = write("nonmono.w", "format = 1\nd = 2\nfamily = dense\n{} 5\n{1} 5\n{2} 3\n{1,2} 1\n");
  const std::string huge = write("huge.w", "format = 1\nd = 3\nfamily = dense\n{1,2,3} 1e300\n");
  const std::string undecided =
      write("undecided.w", "format = 1\nd = inf\nfamily = pod\ngamma_seq = powerlaw c=1 lambda=2\n"
                           "Gamma_seq = factorial c=1 a=2\na = 2\nC_a = 1\n");
  const std::pair<std::string, int> cases[] = {
      {"transform up " + garbage, 2},          {"transform up " + dup, 2},
      {"transform up " + neg, 2},              {"transform up " + outside, 2},
      {"transform up " + dir.string() + "/none.w", 2}, {"bogus", 2},
      {"transform up " + nonmono + " --C -2", 2},
      {"transform down " + nonmono, 1},         {"check monotone " + nonmono, 1},
      {"transform up " + huge + " --C 1e100", 3}, {"check summable " + undecided, 4},
      {"check monotone " + nonmono + " --exact", 1},
  };
  int bad = 0;
  for (const auto& [args, expect] : cases) {
    const Process p = run_tool(args);
    if (p.code != expect) {
      ++bad;
      v.require(false, "'" + args + "' exit " + std::to_string(p.code) + " expected " + std::to_string(expect));
    }
  }
  std::filesystem::remove_all(dir);
  v.note(std::to_string(std::size(cases) - bad) + "/" + std::to_string(std::size(cases)) + " exit codes");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"POD transform table", 1e-3, pod_table},
      {"minorant counterexample suite", 0.1, counterexample_suite},
      {"bijection suite", 5, bijection_suite},
      {"monotone-range suite", 10, monotone_range_suite},
      {"closed-form agreement", 5, closed_form_suite},
      {"auxiliary identity", 10, auxiliary_identity_suite},
      {"hypercube equivalence", 20, hypercube_suite},
      {"decay suite", 1, decay_suite},
      {"embedding suite", 30, embedding_suite},
      {"transfer sandwich", 60, transfer_suite},
      {"CLI determinism", 60, cli_suite},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) v.require(false, "runtime " + sci(secs) + " s exceeds " + sci(c.limit_s) + " s");
    failures += !v.ok;
    std::cout << "criterion " << index << " (" << c.name << "): " << (v.ok ? "PASS" : "FAIL") << " [" << sci(secs)
              << " s] " << v.detail << "\n";
  }
  return failures == 0 ? 0 : 1;
}
