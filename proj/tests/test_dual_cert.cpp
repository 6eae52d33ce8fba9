#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wcf/dual_cert.hpp"
#include "wcf/protocol.hpp"
#include "wcf/tree_eval.hpp"

using namespace wcf;

namespace {

const std::vector<double> kPublished3 = {0.74094, 0.479696, 0.186312};

double side_bound(const ProtocolParams& p, Side side) {
  const BoundReport b = bounds_at_constraint(p);
  return side == Side::B ? b.beta : b.alpha;
}

// Dense check of diag(z) >= v v^T straight from the definition.
double dense_min_eig(const DualCertificate& cert) {
  const int n = cert.params.n;
  const double c = oracle::bob_probability(cert.params.a);
  const double mass = cert.side == Side::B ? c : 1 - c;
  Eigen::VectorXcd v(Eigen::Index{1} << n);
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const bool bob = oracle::bob_wins(static_cast<std::uint64_t>(j), n);
    const bool in = cert.side == Side::B ? bob : !bob;
    v[j] = in ? std::sqrt(oracle::xi_sq(cert.params.a, static_cast<std::uint64_t>(j)) / mass) : 0.0;
  }
  Eigen::MatrixXcd m = -(v * v.adjoint());
  m.diagonal() += cert.z.d.cast<Complex>();
  return oracle::min_eig(m);
}

}  // namespace

TEST(DualCert, PublishedPointBothSides) {
  const ProtocolParams p = ProtocolParams::make(kPublished3);
  for (Side side : {Side::A, Side::B}) {
    const DualCertificate cert = build_certificate(p, side);
    const CertReport rep = verify_certificate(cert);
    EXPECT_TRUE(rep.accepted) << rep.diagnostic;
    EXPECT_LE(std::abs(rep.domination_margin), 1e-9);
    EXPECT_NEAR(cert.bound, side_bound(p, side), 1e-10);
    EXPECT_NEAR(cert.bound, 0.69905, 5e-5);
    ASSERT_TRUE(rep.psd_min_eig.has_value());
    EXPECT_GE(*rep.psd_min_eig, -1e-12);
    EXPECT_GE(dense_min_eig(cert), -1e-12);
  }
}

TEST(DualCert, RandomDrawsAllParitiesAndSides) {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 10; ++n) {
    for (int d = 0; d < 15; ++d) {
      const ProtocolParams p = oracle::self_consistent(oracle::random_weights(n, rng));
      for (Side side : {Side::A, Side::B}) {
        const DualCertificate cert = build_certificate(p, side);
        const CertReport rep = verify_certificate(cert);
        ASSERT_TRUE(rep.accepted) << "n=" << n << " side=" << side_char(side) << ": " << rep.diagnostic;
        ASSERT_LE(oracle::rel_err(cert.bound, side_bound(p, side)), 1e-10);
        ASSERT_LE(rep.balance_residual, 1e-9);
        ASSERT_LE(rep.tree_match_residual, 1e-9);
        if (n <= 8) ASSERT_GE(dense_min_eig(cert), -1e-10);
      }
    }
  }
}

TEST(DualCert, BoundEqualsSquaredKOverMass) {
  const ProtocolParams p = oracle::self_consistent({0.6, 0.3, 0.45, 0.2, 0.7});
  const DualCertificate cert = build_certificate(p, Side::B);
  EXPECT_NEAR(cert.bound, cert.K * cert.K / cert.honest_probability, 1e-15);
  EXPECT_EQ(cert.instance_n, 5);
  EXPECT_EQ(build_certificate(p, Side::A).instance_n, 7);
  EXPECT_FALSE(cert.sigma.empty());
}

TEST(DualCert, TwoMessageSymmetricPoint) {
  const double x = 1 / std::sqrt(2.0);
  const ProtocolParams p = ProtocolParams::make({x, 1 - x});
  for (Side side : {Side::A, Side::B}) {
    const DualCertificate cert = build_certificate(p, side);
    EXPECT_TRUE(verify_certificate(cert).accepted);
    EXPECT_NEAR(cert.bound, x, 1e-12);
  }
}

TEST(DualCert, TamperedEntryIsRejected) {
  DualCertificate cert = build_certificate(ProtocolParams::make(kPublished3), Side::B);
  Eigen::Index j = 0;
  while (cert.z[j] == 0.0) ++j;
  cert.z.d[j] *= 0.5;
  const CertReport rep = verify_certificate(cert);
  EXPECT_FALSE(rep.accepted);
  EXPECT_LT(rep.domination_margin, -1e-9);
  EXPECT_FALSE(rep.diagnostic.empty());

  DualCertificate zeroed = build_certificate(ProtocolParams::make(kPublished3), Side::B);
  zeroed.z.d[j] = 0.0;
  const CertReport rep0 = verify_certificate(zeroed);
  EXPECT_FALSE(rep0.accepted);
  EXPECT_FALSE(rep0.support_contained);
}

TEST(DualCert, InflatedBoundIsRejected) {
  DualCertificate cert = build_certificate(ProtocolParams::make(kPublished3), Side::A);
  cert.bound *= 1.01;
  EXPECT_FALSE(verify_certificate(cert).accepted);
}

TEST(DualCert, ScalingIsScaleInvariant) {
  const ProtocolParams p = oracle::self_consistent({0.7, 0.4, 0.25});
  const DualCertificate base = build_certificate(p, Side::B);
  DiagonalOperator scaled = base.s;
  scaled.d *= 3.7;
  const DualCertificate again = certificate_from_scaling(p, Side::B, scaled);
  EXPECT_NEAR(again.bound, base.bound, 1e-12);
  EXPECT_LE((again.z.d - base.z.d).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DualCert, AnyScalingGivesAValidWeakerBound) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int n = 2; n <= 7; ++n) {
    const ProtocolParams p = oracle::self_consistent(oracle::random_weights(n, rng));
    for (Side side : {Side::A, Side::B}) {
      Eigen::VectorXd s(Eigen::Index{1} << n);
      for (Eigen::Index j = 0; j < s.size(); ++j) s[j] = u(rng);
      const DualCertificate cert = certificate_from_scaling(p, side, DiagonalOperator(n, s));
      const CertReport rep = verify_certificate(cert);
      EXPECT_GE(rep.domination_margin, -1e-12);
      EXPECT_LE(rep.tree_match_residual, 1e-12);
      EXPECT_GE(cert.bound, side_bound(p, side) - 1e-12);
    }
  }
}

TEST(DualCert, ZeroScalingOnWeightedStringIsDegenerate) {
  const ProtocolParams p = ProtocolParams::make({0.6, 0.4});
  Eigen::VectorXd s = Eigen::VectorXd::Ones(4);
  s[1] = 0.0;  // "01" is Bob's only winning string
  EXPECT_THROW(certificate_from_scaling(p, Side::B, DiagonalOperator(2, s)), DegenerateCertificate);
}

TEST(DualCert, ErrorsAndLimits) {
  EXPECT_THROW(build_certificate(ProtocolParams::make(std::vector<double>(15, 0.5)), Side::B), ResourceLimit);
  EXPECT_THROW(build_certificate(ProtocolParams::make({1.0, 0.0}), Side::A), DegenerateProtocol);
}

TEST(RankOne, DominationMatchesEigenvalues) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(t % 12);
    Eigen::VectorXcd v(d);
    Eigen::VectorXd z(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      v[i] = Complex(g(rng), g(rng));
      z[i] = u(rng) * 3 * d;
    }
    const Domination dom = rank_one_domination(z, v);
    Eigen::MatrixXcd m = -(v * v.adjoint());
    m.diagonal() += z.cast<Complex>();
    const bool psd = oracle::min_eig(m) >= -1e-9;
    if (std::abs(dom.margin) > 1e-6) EXPECT_EQ(dom.margin >= 0, psd);
    EXPECT_NEAR(psd_min_eig(z, v), oracle::min_eig(m), 1e-9);
  }
}

TEST(LemmaMinTrace, OptimumAndFeasibility) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    const int k = 1 + t % 6;
    const Eigen::Index d = Eigen::Index{1} << k;
    Eigen::VectorXcd amp(d);
    for (Eigen::Index i = 0; i < d; ++i) amp[i] = Complex(g(rng), g(rng));
    amp.normalize();
    Eigen::VectorXd e(d);
    for (Eigen::Index i = 0; i < d; ++i) e[i] = (rng() & 1u) ? 1.0 : 0.0;
    const MinTraceResult r = lemma_min_trace(PureState(k, amp), DiagonalOperator(k, e));
    double overlap = 0;
    for (Eigen::Index i = 0; i < d; ++i) overlap += e[i] * std::norm(amp[i]);
    EXPECT_NEAR(r.optimum, 2 * overlap * overlap, 1e-12);
    EXPECT_NEAR(r.z.d.dot(amp.cwiseAbs2()), r.optimum, 1e-12);
    const Eigen::VectorXcd ev = e.cast<Complex>().cwiseProduct(amp);
    Eigen::MatrixXcd m = -2.0 * ev * ev.adjoint();
    m.diagonal() += r.z.d.cast<Complex>();
    EXPECT_GE(oracle::min_eig(m), -1e-12);
  }
  EXPECT_THROW(lemma_min_trace(PureState(1, Eigen::VectorXcd::Ones(2) / std::sqrt(2.0)),
                               DiagonalOperator(1, Eigen::Vector2d(0.5, 1.0))),
               InvalidArgument);
}

namespace {

Eigen::MatrixXcd random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd x(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = Complex(g(rng), g(rng));
  return (x + x.adjoint()) / 2.0;
}

Eigen::VectorXcd random_unit(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = Complex(g(rng), g(rng));
  return v.normalized();
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

}  // namespace

TEST(BlockAbsorb, DominatesAndKeepsPartialTrace) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index da = 1 + t % 3, dk = 1 + (t / 3) % 3, dc = 2 + t % 4;
    const Eigen::Index dim = da * dk * dc;
    const Eigen::MatrixXcd h = random_hermitian(dim, rng);
    const Eigen::VectorXcd phi = random_unit(dc, rng);
    const Eigen::MatrixXcd embed = kron(Eigen::MatrixXcd::Identity(da * dk, da * dk), phi);
    const Eigen::MatrixXcd th = embed.adjoint() * h * embed;
    // Smallest M of the form m I with m I (x) I_kept >= T(H), plus slack.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(th, Eigen::EigenvaluesOnly);
    Eigen::MatrixXcd m = (es.eigenvalues().maxCoeff() + 0.1) * Eigen::MatrixXcd::Identity(da, da);
    m += random_hermitian(da, rng) * 0.01;
    const double eps = 0.05;
    const AbsorbResult r = block_absorb_certificate(m, h, phi, static_cast<int>(dk), eps);
    ASSERT_TRUE(r.min_eig.has_value());
    EXPECT_GE(*r.min_eig, -1e-10);
    EXPECT_GE(oracle::min_eig(r.B - h), -1e-10);
    const Eigen::MatrixXcd tb = embed.adjoint() * r.B * embed;
    const Eigen::MatrixXcd expected =
        kron(m + eps * Eigen::MatrixXcd::Identity(da, da), Eigen::MatrixXcd::Identity(dk, dk));
    EXPECT_LE((tb - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(BlockAbsorb, PreconditionViolationNamesEigenvector) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXcd h = random_hermitian(8, rng) + 5.0 * Eigen::MatrixXcd::Identity(8, 8);
  const Eigen::VectorXcd phi = random_unit(2, rng);
  try {
    block_absorb_certificate(Eigen::MatrixXcd::Zero(2, 2), h, phi, 2, 0.1);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("eigenvector"), std::string::npos);
  }
  EXPECT_THROW(block_absorb_certificate(Eigen::MatrixXcd::Identity(2, 2), h, phi, 2, 0.0), InvalidArgument);
  EXPECT_THROW(block_absorb_certificate(Eigen::MatrixXcd::Identity(2, 2), h, phi, 3, 0.1), InvalidArgument);
}
