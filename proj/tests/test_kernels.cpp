#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <random>

#include "cmw/kernels.hpp"
#include "support.hpp"

using namespace cmw;
using namespace cmw::test;

namespace {

using Gauss = boost::math::quadrature::gauss<double, 30>;

// Integral over [0, 1] split at a kink.
template <class F>
double integrate_split(F f, double kink) {
  double s = 0.0;
  if (kink > 0.0) s += Gauss::integrate(f, 0.0, kink);
  if (kink < 1.0) s += Gauss::integrate(f, kink, 1.0);
  return s;
}

double min_eigenvalue(const Eigen::MatrixXd& G) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double max_eigenvalue(const Eigen::MatrixXd& G) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

WeightSpec product_weights(int d, double c = 1.0, double lambda = 2.0) {
  return WeightSpec::product(Sequence::power_law(c, lambda), d);
}

}  // namespace

TEST(Kernels, MinGramExample) {
  const Eigen::MatrixXd G = gram_matrix(min_kernel(), {0.25, 0.75});
  Eigen::MatrixXd expect(2, 2);
  expect << 0.25, 0.25, 0.25, 0.75;
  EXPECT_EQ(G, expect);
  // eigenvalues of [[a, a], [a, b]]: ((a + b) -+ sqrt((b - a)^2 + 4 a^2)) / 2
  const double lo = 0.5 * (1.0 - std::sqrt(0.25 + 0.25));
  EXPECT_NEAR(min_eigenvalue(G), lo, 1e-15);
  EXPECT_GT(lo, 0.0);
}

TEST(Kernels, ClosedFormIntegralsMatchQuadrature) {
  for (const UnivariateKernel& k : {min_kernel(), anova_kernel()}) {
    ASSERT_TRUE(k.integrable());
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
      const double q = integrate_split([&](double y) { return k(x, y); }, x);
      EXPECT_NEAR(k.integral(x), q, 1e-12) << k.name << " " << x;
    }
    const double q2 = Gauss::integrate([&](double x) { return integrate_split([&](double y) { return k(x, y); }, x); }, 0.0, 1.0);
    EXPECT_NEAR(*k.double_integral, q2, 1e-10) << k.name;
  }
  EXPECT_NEAR(*min_kernel().double_integral, 1.0 / 3.0, 1e-16);
  EXPECT_FALSE(indicator_kernel().integrable());
}

TEST(Kernels, AnovaReproducesZeroMeanPolynomials) {
  const UnivariateKernel k = anova_kernel();
  // <f, g> = int f' g' on zero-mean functions; d/dx k(x, y) = [x < y] - 1 + x
  const std::vector<std::pair<std::function<double(double)>, std::function<double(double)>>> tests = {
      {[](double x) { return x - 0.5; }, [](double) { return 1.0; }},
      {[](double x) { return x * x - 1.0 / 3.0; }, [](double x) { return 2.0 * x; }},
      {[](double x) { return x * x * x - 0.25; }, [](double x) { return 3.0 * x * x; }},
  };
  for (double y : {0.05, 0.3, 0.5, 0.77, 1.0}) {
    EXPECT_NEAR(integrate_split([&](double x) { return k(x, y); }, y), 0.0, 1e-13);
    for (const auto& [f, df] : tests) {
      const double inner = integrate_split([&](double x) { return ((x < y ? 1.0 : 0.0) - 1.0 + x) * df(x); }, y);
      EXPECT_NEAR(inner, f(y), 1e-12) << y;
    }
  }
  EXPECT_NEAR(k(0.5, 0.5), 1.0 / 12.0, 1e-15);
  EXPECT_DOUBLE_EQ(k.min_diagonal, 1.0 / 12.0);
}

TEST(Kernels, IndicatorAndRegistry) {
  const UnivariateKernel m = indicator_kernel();
  EXPECT_EQ(m(0.0, 0.0), 0.0);
  EXPECT_EQ(m(0.3, 0.3), 1.0);
  EXPECT_EQ(m(0.3, 0.4), 0.0);
  EXPECT_EQ(m.min_diagonal, 0.0);
  EXPECT_EQ(builtin_kernel("anova").name, "anova");
  EXPECT_THROW(builtin_kernel("gauss"), ParseError);
  EXPECT_DOUBLE_EQ(plus_one(min_kernel())(0.2, 0.7), 1.2);
}

TEST(Kernels, SymmetricAndPositiveSemidefinite) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const UnivariateKernel& k : {min_kernel(), anova_kernel(), indicator_kernel(), plus_one(anova_kernel())}) {
    std::vector<double> x(40);
    for (double& v : x) v = u(rng);
    x[5] = x[6];  // repeated node
    const Eigen::MatrixXd G = gram_matrix(k, x);
    EXPECT_TRUE(G.isApprox(G.transpose(), 0.0)) << k.name;
    EXPECT_GE(min_eigenvalue(G), -1e-10 * max_eigenvalue(G)) << k.name;
  }
  const SuperpositionKernel K{product_weights(4), anova_kernel()};
  const Eigen::MatrixXd G = gram_matrix(K, uniform_points(60, 4, 7));
  EXPECT_GE(min_eigenvalue(G), -1e-10 * max_eigenvalue(G));
}

TEST(Superposition, TrivialCases) {
  WeightTable delta0(3);
  delta0.set(0, 1.0);
  const SuperpositionKernel one{delta0, min_kernel()};
  const std::vector<double> x{0.2, 0.5, 0.9}, y{0.1, 0.6, 0.3};
  EXPECT_EQ(one(x, y), 1.0);
  const SuperpositionKernel K{WeightSpec::product(Sequence::explicit_values({1, 1}), 2), min_kernel()};
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_EQ(superposition_eval(K, ones, ones), 4.0);
}

TEST(Superposition, FamilyPathsAgreeWithDenseTables) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> c(0.1, 1.0), lam(1.0, 3.0), a(0.0, 1.5);
  const int d = 8;
  const PointSet ps = uniform_points(200, d, 5);
  for (int rep = 0; rep < 10; ++rep) {
    const WeightSpec prod = product_weights(d, c(rng), lam(rng));
    const double ae = a(rng);
    const WeightSpec pod = WeightSpec::pod(Sequence::power_law(c(rng), lam(rng)), OrderSequence::factorial(1, ae), ae, 1, d);
    for (const WeightSpec& s : {prod, pod}) {
      const SuperpositionKernel structured{s, min_kernel()};
      const SuperpositionKernel dense{truncate_to_table(s, d), min_kernel()};
      for (std::size_t i = 0; i + 1 < ps.size(); i += 2) {
        const double v = structured(ps[i], ps[i + 1]);
        EXPECT_NEAR(v, dense(ps[i], ps[i + 1]), 1e-12 * v) << s.family_name();
      }
    }
  }
}

TEST(Superposition, FiniteSupportInInfiniteDimension) {
  const WeightSpec s = WeightSpec::fin_support({{Subset{}, 1.0}, {Subset{2, 5}, 0.5}});
  const SuperpositionKernel K{s, min_kernel()};
  const InfinitePoint x{{0.3, 0.4}, 0.8}, y{{0.9, 0.2}, 0.6};
  EXPECT_DOUBLE_EQ(K(x, y), 1.0 + 0.5 * 0.2 * 0.6);
}

TEST(Superposition, CauchySchwarz) {
  std::mt19937_64 rng(43);
  const PointSet ps = uniform_points(100, 5, 9);
  const WeightTable g = random_table(5, rng);
  for (const UnivariateKernel& k : {min_kernel(), anova_kernel(), plus_one(min_kernel())}) {
    const SuperpositionKernel K{g, k};
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); j += 7) {
        const double kij = K(ps[i], ps[j]);
        EXPECT_LE(kij * kij, K(ps[i], ps[i]) * K(ps[j], ps[j]) * (1 + 1e-12));
      }
  }
}

TEST(Superposition, RearrangementIdentity) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> cd(0.3, 2.0);
  for (int d = 1; d <= 6; ++d) {
    const WeightTable g = random_table(d, rng);
    const double C = cd(rng);
    const UnivariateKernel l = anova_kernel();
    const SuperpositionKernel up = up_kernel(g, l, C);
    const PointSet ps = uniform_points(20, d, 100 + d);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      const auto& x = ps[i];
      const auto& y = ps[i + 1];
      long double rhs = 0;
      for (Mask u = 0; u < g.size(); ++u) {
        long double h = g[u];
        for (int j : to_subset(u)) h *= C * C * (1.0 + l(x[j - 1], y[j - 1]));
        rhs += h;
      }
      const double lhs = up(x, y);
      EXPECT_NEAR(lhs, static_cast<double>(rhs), 1e-10 * std::abs(lhs)) << d;
    }
  }
}

TEST(Domain, FiniteDimensionAndProducts) {
  const InfinitePoint x{{0.5, 0.5}, 0.5};
  EXPECT_EQ(domain_membership(product_weights(3), min_kernel(), x).member, Verdict::Holds);
  EXPECT_EQ(domain_membership(product_weights(kInfiniteDim), min_kernel(), x).member, Verdict::Holds);
  EXPECT_EQ(domain_membership(product_weights(kInfiniteDim, 1, 1), min_kernel(), x).member, Verdict::Fails);
  EXPECT_EQ(domain_membership(product_weights(kInfiniteDim, 1, 1), min_kernel(), InfinitePoint{{0.5}, 0.0}).member,
            Verdict::Holds);
  const WeightSpec undecided = WeightSpec::pod(Sequence::power_law(1, 2), OrderSequence::factorial(1, 2), 2, 1);
  EXPECT_THROW(domain_membership(undecided, plus_one(min_kernel()), x), UndecidableError);
}

TEST(Domain, DyadicChainSeparatesTheTwoDomains) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    InfinitePoint x{{u(rng), u(rng), u(rng)}, u(rng)};
    EXPECT_EQ(dyadic_chain_membership(indicator_kernel(), x).member, Verdict::Holds);
    if (x.tail > 0) EXPECT_EQ(dyadic_chain_membership(plus_one(indicator_kernel()), x).member, Verdict::Fails);
  }
  EXPECT_EQ(dyadic_chain_membership(indicator_kernel(), InfinitePoint{{}, 0.0}).member, Verdict::Holds);
  EXPECT_EQ(dyadic_chain_membership(plus_one(indicator_kernel()), InfinitePoint{{0.5}, 0.0}).member, Verdict::Holds);
}

TEST(Embedding, OnePointClosedForm) {
  for (const UnivariateKernel& k : {min_kernel(), anova_kernel()})
    for (const UnivariateKernel& l : {min_kernel(), anova_kernel()})
      for (double x : {0.2, 0.5, 0.9}) {
        const double expect = std::sqrt(k(x, x) / (1.0 + l(x, x)));
        EXPECT_NEAR(embedding_norm_lower_bound(k, l, {x}).C_lb, expect, 1e-10);
      }
}

TEST(Embedding, SameKernelIsContractive) {
  for (const UnivariateKernel& k : {min_kernel(), anova_kernel()})
    for (std::size_t n : {4, 16, 64, 256}) EXPECT_LE(embedding_norm_lower_bound(k, k, lattice_nodes_1d(n)).C_lb, 1.0 + 1e-6);
}

TEST(Embedding, MonotoneUnderRefinement) {
  double prev = 0.0;
  for (std::size_t n = 1; n <= 256; n *= 2) {
    const double c = embedding_norm_lower_bound(min_kernel(), plus_one(anova_kernel()), lattice_nodes_1d(n)).C_lb;
    EXPECT_GE(c, prev * (1 - 1e-6)) << n;
    prev = c;
  }
}

TEST(Embedding, MinAnovaRegressionAnchor) {
  // recorded after the first run; the bound converges towards sqrt(4/3)
  const EmbeddingBound b = embedding_norm_converged(min_kernel(), anova_kernel());
  EXPECT_TRUE(b.converged);
  EXPECT_NEAR(b.C_lb, 1.1544, 2e-3);
  const EmbeddingBound b32 = embedding_norm_lower_bound(min_kernel(), anova_kernel(), lattice_nodes_1d(32));
  EXPECT_GT(b32.C_lb, 1.0);
  EXPECT_LE(b32.C_lb, b.C_lb + 1e-9);
}

TEST(Embedding, SameKernelPasses) {
  for (int d : {2, 3}) {
    const EmbeddingReport r = verify_embedding(min_kernel(), min_kernel(), 1.0, product_weights(d), uniform_points(50, d, 3));
    EXPECT_TRUE(r.passed) << r.min_eigenvalue;
  }
}

TEST(Embedding, MinIntoAnovaWithAutoConstantPasses) {
  const double C = 1.1 * embedding_norm_converged(min_kernel(), anova_kernel()).C_lb;
  const EmbeddingReport r = verify_embedding(min_kernel(), anova_kernel(), C, product_weights(3), lattice_points(200, 3));
  EXPECT_TRUE(r.passed) << r.min_eigenvalue;
}

TEST(Embedding, UndersizedConstantFailsSomewhere) {
  const double C = 0.5 * embedding_norm_converged(min_kernel(), anova_kernel()).C_lb;
  bool violated = false;
  for (std::uint64_t seed = 1; seed <= 20 && !violated; ++seed)
    violated = !verify_embedding(min_kernel(), anova_kernel(), C, product_weights(3), uniform_points(100, 3, seed)).passed;
  EXPECT_TRUE(violated);
}

TEST(Embedding, DimensionMismatch) {
  EXPECT_THROW(verify_embedding(min_kernel(), min_kernel(), 1.0, product_weights(2), lattice_points(10, 3)),
               DimensionError);
  EXPECT_THROW(up_kernel(WeightSpec::pod(Sequence::power_law(1, 2), OrderSequence::constant(1), 0, 1), min_kernel(), 1.0),
               UndecidableError);
}
