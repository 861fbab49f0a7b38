#include <gtest/gtest.h>

#include "ffgs/chain.hpp"
#include "ffgs/mps.hpp"
#include "ffgs/spectra.hpp"

namespace ffgs {
namespace {

const std::vector<double> kGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

double residual(const ChainHamiltonian& h, const Vector& psi) { return h.op()(psi).norm() / psi.norm(); }

Vector ground_vector(const ChainHamiltonian& h) {
  const auto e = hermitian_eig(h.dense());
  return e.vectors.col(0);
}

TEST(Mps, AkltAnnihilatedByEveryBondProjector) {
  const int n = 6;
  const Vector psi = aklt_mps(n).to_vector();
  ASSERT_GT(psi.norm(), 0.1);
  const std::vector<int> dims(n, 3);
  for (int j = 0; j < n; ++j) {
    const auto p = embed_term(aklt_bond_projector(), {j, (j + 1) % n}, dims);
    EXPECT_LT(p(psi).norm() / psi.norm(), 1e-10) << j;
  }
}

TEST(Mps, OverlapMatchesDenseInnerProduct) {
  const auto a = deformed_ground_state(0.4, 6);
  const auto g = ring_graph_mps(6);
  const cplx dense = g.to_vector().dot(a.to_vector());
  EXPECT_LT(std::abs(overlap(g, a) - dense), 1e-12);
  EXPECT_NEAR(overlap(a, a).real() / a.to_vector().squaredNorm(), 1.0, 1e-12);
}

TEST(Mps, DeformedStateIsFrustrationFree) {
  for (double delta : kGrid) {
    const Vector psi = deformed_ground_state(delta, 6).to_vector();
    EXPECT_LT(residual(build_chain(delta, 6, 2), psi), 1e-9) << delta;
    EXPECT_LT(residual(build_chain(delta, 6, 3), psi), 1e-9) << delta;
  }
}

TEST(Mps, EnergyExpectationVanishes) {
  const Vector psi = deformed_ground_state(0.3, 6).to_vector();
  const auto h = build_chain(0.3, 6, 2);
  EXPECT_LT(std::abs(psi.dot(h.op()(psi))) / psi.squaredNorm(), 1e-10);
}

TEST(Mps, SmallDeltaApproachesRingGraphState) {
  const auto g = ring_graph_mps(4);
  double last = 0.0;
  for (double delta : {0.3, 0.1, 1e-2, 1e-4}) {
    const double f = ring_fidelity(g, deformed_ground_state(delta, 4));
    EXPECT_GT(f, last);
    last = f;
  }
  EXPECT_GT(last, 1.0 - 1e-7);
}

TEST(Mps, RingGraphMpsMatchesEncodedState) {
  for (int n : {4, 6, 8}) {
    const Vector m = ring_graph_mps(n).to_vector();
    EXPECT_NEAR(std::abs(chain_graph_state(n).dot(m)) / m.norm(), 1.0, 1e-10) << n;
  }
}

TEST(Mps, Errors) {
  EXPECT_THROW(deformed_ground_state(0.5, 5), std::invalid_argument);
  EXPECT_THROW(deformed_ground_state(0.0, 4), std::invalid_argument);
  EXPECT_THROW(ring_graph_mps(5), std::invalid_argument);
  EXPECT_THROW(aklt_mps(16).to_vector(), std::invalid_argument);
}

TEST(Fidelity, ClosedForm) {
  EXPECT_NEAR(fidelity_per_site(1.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(error_per_site(1.0), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(fidelity_per_site(0.0), std::invalid_argument);
}

TEST(Fidelity, ErrorIsHalfDeltaSquaredPlusQuartic) {
  std::vector<double> ds, dev;
  for (double d : {0.02, 0.05, 0.1, 0.15, 0.2}) {
    ds.push_back(d);
    dev.push_back(std::abs(error_per_site(d) - 0.5 * d * d));
  }
  EXPECT_NEAR(loglog_slope(ds, dev), 4.0, 0.1);
}

TEST(Fidelity, TransferMatrixPerSiteValueMatchesFormula) {
  for (double delta : kGrid) EXPECT_NEAR(contracted_fidelity_per_site(delta), fidelity_per_site(delta), 1e-10) << delta;
}

TEST(Fidelity, DenseOracleAgreesWithContraction) {
  for (int n : {4, 6}) {
    const Vector g = chain_graph_state(n);
    const Vector psi = deformed_ground_state(0.5, n).to_vector();
    const double dense = std::norm(g.dot(psi)) / psi.squaredNorm();
    EXPECT_NEAR(fidelity_check(0.5, n).contracted, dense, 1e-12) << n;
  }
}

TEST(Fidelity, FiniteRingApproachesProductFormExponentially) {
  // The ring value differs from (2/(d^2+2))^N by a term that decays with the
  // subleading transfer-matrix eigenvalue.
  for (double delta : {0.2, 0.6, 1.0}) {
    double last = INFINITY;
    for (int n = 4; n <= 20; n += 4) {
      const auto f = fidelity_check(delta, n);
      const double rel = std::abs(f.contracted / f.formula - 1.0);
      EXPECT_LT(rel, last) << delta << " " << n;
      last = rel;
    }
    EXPECT_LT(last, 1e-7) << delta;
  }
}

TEST(ChainHamiltonian, UndeformedFourSiteRing) {
  const auto h = build_chain(1.0, 4, 2);
  EXPECT_EQ(h.op().dim(), 81u);
  const RealVector w = hermitian_eigenvalues(h.dense());
  EXPECT_NEAR(w(0), 0.0, 1e-10);
  EXPECT_GT(w(1), 0.1);
}

TEST(ChainHamiltonian, TermsAreProjectors) {
  for (double delta : kGrid) {
    for (int body : {2, 3}) {
      for (int first : {0, 1}) {
        const Matrix t = chain_term(first, body, delta);
        EXPECT_LT((t * t - t).norm(), 1e-10);
        EXPECT_LT(hermiticity_defect(t), 1e-12);
      }
    }
  }
}

TEST(ChainHamiltonian, TwoBodyLimitIsIdentityMinusProductProjector) {
  for (int first : {0, 1}) {
    const Matrix t = chain_term(first, 2, std::nullopt);
    const Matrix expect = Matrix::Identity(9, 9) - kron(chain_projector(first).matrix, chain_projector(first + 1).matrix);
    EXPECT_LT((t - expect).norm(), 1e-10);
    EXPECT_EQ(projector_rank(t), 5);
    EXPECT_LT((chain_term(first, 2, 1e-6) - t).norm(), 1e-4);
  }
}

TEST(ChainHamiltonian, TwoBodyLimitDegeneracy) {
  const RealVector w = hermitian_eigenvalues(build_chain_limit(4, 2).dense());
  int zeros = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) zeros += std::abs(w(i)) < 1e-9;
  EXPECT_EQ(zeros, 16);
}

TEST(ChainHamiltonian, ThreeBodyLimitTermsCommute) {
  const auto h = build_chain_limit(4, 3);
  std::vector<Matrix> full;
  for (const auto& t : h.terms) full.push_back(embed_term(t.matrix, t.sites, h.local_dims).to_dense());
  double worst = 0.0;
  for (std::size_t a = 0; a < full.size(); ++a)
    for (std::size_t b = a + 1; b < full.size(); ++b) worst = std::max(worst, (full[a] * full[b] - full[b] * full[a]).norm());
  EXPECT_LT(worst, 1e-12);
}

TEST(ChainHamiltonian, ThreeBodyLimitGroundStateIsGraphState) {
  const auto h = build_chain_limit(6, 3);
  EXPECT_LT(residual(h, chain_graph_state(6)), 1e-10);
  const RealVector w = hermitian_eigenvalues(h.dense());
  EXPECT_NEAR(w(0), 0.0, 1e-10);
  EXPECT_NEAR(w(1), 1.0, 1e-10);
}

TEST(ChainHamiltonian, TwoAndThreeBodyShareGroundState) {
  for (double delta : {0.3, 0.7, 1.0}) {
    const Vector a = ground_vector(build_chain(delta, 6, 2));
    const Vector b = ground_vector(build_chain(delta, 6, 3));
    EXPECT_NEAR(std::abs(a.dot(b)), 1.0, 1e-9) << delta;
  }
  const auto p2 = lowest_eigenpairs(build_chain(0.5, 8, 2).op(), 1);
  const auto p3 = lowest_eigenpairs(build_chain(0.5, 8, 3).op(), 1);
  EXPECT_NEAR(std::abs(p2.vectors[0].dot(p3.vectors[0])), 1.0, 1e-9);
}

TEST(ChainHamiltonian, ThreeSiteWindowsAndWrap) {
  const auto h = build_chain(0.5, 4, 3);
  ASSERT_EQ(h.terms.size(), 4u);
  EXPECT_EQ(h.terms[0].sites, (std::vector<int>{3, 0, 1}));
  EXPECT_EQ(h.terms[3].sites, (std::vector<int>{2, 3, 0}));
  const auto h2 = build_chain(0.5, 4, 2);
  EXPECT_EQ(h2.terms[3].sites, (std::vector<int>{3, 0}));
}

TEST(ChainHamiltonian, Errors) {
  EXPECT_THROW(build_chain(0.0, 4, 2), std::invalid_argument);
  EXPECT_THROW(build_chain(0.5, 5, 2), std::invalid_argument);
  EXPECT_THROW(build_chain(0.5, 4, 4), std::invalid_argument);
  EXPECT_THROW(build_chain(1.5, 4, 2), std::invalid_argument);
}

TEST(LambdaBounds, UndeformedValues) {
  const auto b = lambda_minmax(1.0);
  EXPECT_GT(b.lambda_min, 0.0);
  EXPECT_LE(b.lambda_max, 2.0 + 1e-12);
  EXPECT_LE(b.lambda_min, b.lambda_max);
  EXPECT_EQ(b.kernel_dim, 4);
}

TEST(LambdaBounds, FourDimensionalKernel) {
  for (double delta : kGrid) {
    EXPECT_EQ(lambda_minmax(delta, 0).kernel_dim, 4) << delta;
    EXPECT_EQ(lambda_minmax(delta, 1).kernel_dim, 4) << delta;
  }
}

TEST(LambdaBounds, QuarticScaling) {
  std::vector<double> ds, lm;
  for (double d = 0.05; d <= 0.5 + 1e-9; d += 0.05) {
    ds.push_back(d);
    lm.push_back(lambda_minmax(d).lambda_min);
  }
  EXPECT_NEAR(loglog_slope(ds, lm), 4.0, 0.3);
}

}  // namespace
}  // namespace ffgs
