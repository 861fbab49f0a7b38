#include <gtest/gtest.h>

#include <random>

#include "ffgs/mc.hpp"

namespace ffgs {
namespace {

double acceptance(double log_ratio) { return std::min(1.0, std::exp(log_ratio)); }

TEST(FlipDelta, MatchesFullRecomputeOnOpenLattice) {
  const auto lat = build_percolation_lattice(4, 3);
  for (bool with_loops : {true, false}) {
    ChainState chain(lat, 0.45, 17, with_loops);
    std::mt19937 gen(3);
    std::uniform_int_distribution<int> site(0, lat.num_sites() - 1), step(1, 2);
    for (int k = 0; k < 2000; ++k) {
      const Config sigma = chain.config();
      const int j = site(gen);
      const Label b = static_cast<Label>((sigma[static_cast<std::size_t>(j)] + step(gen)) % 3);
      Config next = sigma;
      next[static_cast<std::size_t>(j)] = b;
      const FlipDelta d = chain.flip_delta(j, b);
      const double w0 = config_log_weight(lat, sigma, 0.45, with_loops);
      const double w1 = config_log_weight(lat, next, 0.45, with_loops);
      ASSERT_EQ(d.valid, std::isfinite(w1));
      if (d.valid) EXPECT_NEAR(chain.log_ratio(d), w1 - w0, 1e-10);
      chain.step();
    }
  }
}

TEST(Metropolis, DetailedBalanceIsExact) {
  const auto lat = build_star_lattice(2, 2, Boundary::periodic);
  ChainState walker(lat, 0.7, 5);
  for (int s = 0; s < 50; ++s) walker.sweep();
  std::mt19937 gen(4);
  std::uniform_int_distribution<int> site(0, lat.num_sites() - 1), step(1, 2);
  int checked = 0;
  for (int k = 0; k < 500; ++k) {
    const Config sigma = walker.config();
    const int j = site(gen);
    const Label a = sigma[static_cast<std::size_t>(j)];
    const Label b = static_cast<Label>((a + step(gen)) % 3);
    ChainState fwd(lat, 0.7, 1), back(lat, 0.7, 1);
    fwd.set_config(sigma);
    const FlipDelta d = fwd.flip_delta(j, b);
    if (d.valid) {
      Config next = sigma;
      next[static_cast<std::size_t>(j)] = b;
      back.set_config(next);
      const FlipDelta r = back.flip_delta(j, a);
      ASSERT_TRUE(r.valid);
      // Proposal is symmetric (1 / 2N both ways).
      const double flow = acceptance(fwd.log_ratio(d)) / acceptance(back.log_ratio(r));
      EXPECT_NEAR(flow, config_weight(lat, next, 0.7) / config_weight(lat, sigma, 0.7), 1e-9);
      ++checked;
    }
    walker.step();
  }
  EXPECT_GT(checked, 100);
}

TEST(Metropolis, MonochromaticTriangleNeverAccepted) {
  const auto lat = build_star_lattice(2, 2, Boundary::periodic);
  ChainState chain(lat, 0.5, 1);
  Config sigma = lat.coloring();
  const auto& t = lat.triangles()[0];
  // Two corners of one triangle share a label; giving it to the third closes an odd cycle.
  const Label l = lat.color(t[0]);
  sigma[static_cast<std::size_t>(t[1])] = l;
  ASSERT_NE(sigma[static_cast<std::size_t>(t[2])], l);
  chain.set_config(sigma);
  EXPECT_FALSE(chain.flip_delta(t[2], l).valid);
}

TEST(Metropolis, EqualWeightMoveAlwaysAccepted) {
  const auto lat = build_star_lattice(2, 2, Boundary::periodic);
  ChainState chain(lat, 1.0, 1);
  // Relabelling a singleton that keeps it isolated leaves (h, L) unchanged.
  const int j = 0;
  const Config& c = chain.config();
  std::array<bool, 3> used{};
  for (int w : lat.neighbors(j)) used[c[static_cast<std::size_t>(w)]] = true;
  Label free = 0;
  while (used[free] || free == c[j]) ++free;
  const FlipDelta d = chain.flip_delta(j, free);
  ASSERT_TRUE(d.valid);
  EXPECT_EQ(d.loops, 0);
  EXPECT_EQ(acceptance(chain.log_ratio(d)), 1.0);
}

TEST(Metropolis, NeverVisitsZeroWeightAndCachesStayExact) {
  const auto lat = build_star_lattice(3, 3, Boundary::periodic);
  for (double delta : {0.3, 1.0}) {
    ChainState chain(lat, delta, 11);
    for (int s = 0; s < 200; ++s) {
      chain.sweep();
      const auto p = weight_parts(lat, chain.config());
      ASSERT_TRUE(p.h);
      ASSERT_EQ(p.loops, chain.loops());
      ASSERT_EQ(p.matches, chain.matches());
    }
    EXPECT_GT(chain.accepted(), 0u);
  }
}

TEST(Metropolis, RejectsBadInput) {
  const auto lat = build_star_lattice(1, 1, Boundary::periodic);
  EXPECT_THROW(ChainState(lat, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(ChainState(lat, 1.2, 1), std::invalid_argument);
  ChainState chain(lat, 0.5, 1);
  EXPECT_THROW(chain.set_config(Config(6, 0)), std::invalid_argument);
  ChainOptions opt;
  opt.sweeps = 0;
  EXPECT_THROW(run_chain(build_percolation_lattice(2, 2), 0.5, opt, 1), std::invalid_argument);
}

TEST(Metropolis, MatchesExhaustiveDistribution) {
  const auto lat = build_star_lattice(1, 1, Boundary::periodic);
  for (double delta : {0.3, 1.0}) {
    const auto exact = exhaustive_distribution(lat, delta);
    const auto emp = empirical_distribution(lat, delta, 100, 200000, 21);
    EXPECT_LT(total_variation(exact, emp), 0.015) << delta;
  }
}

TEST(Metropolis, LoopTermMatters) {
  // Without the 2^L factor the chain targets a different distribution.
  const auto lat = build_star_lattice(1, 1, Boundary::periodic);
  const auto exact = exhaustive_distribution(lat, 1.0);
  const auto plain = exhaustive_distribution(lat, 1.0, false);
  EXPECT_GT(total_variation(exact, plain), 0.05);
  const auto emp = empirical_distribution(lat, 1.0, 100, 200000, 22, false);
  EXPECT_LT(total_variation(plain, emp), 0.015);
}

TEST(RunChain, SameSeedSameRecords) {
  const auto lat = build_percolation_lattice(3, 3);
  ChainOptions opt;
  opt.burn_in = 20;
  opt.sweeps = 300;
  const auto a = run_chain(lat, 0.55, opt, 99);
  const auto b = run_chain(lat, 0.55, opt, 99);
  const auto c = run_chain(lat, 0.55, opt, 100);
  ASSERT_EQ(a.records.size(), 300u);
  bool differs = false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].cross1, b.records[i].cross1);
    EXPECT_EQ(a.records[i].cross2, b.records[i].cross2);
    EXPECT_EQ(a.records[i].max_domain, b.records[i].max_domain);
    EXPECT_EQ(a.records[i].mean_domain, b.records[i].mean_domain);
    differs |= a.records[i].mean_domain != c.records[i].mean_domain;
  }
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_TRUE(differs);
}

TEST(RunChain, SmallDeltaPercolatesWithSingletons) {
  const auto lat = build_percolation_lattice(4, 4);
  ChainOptions opt;
  opt.burn_in = 100;
  opt.sweeps = 500;
  double last = INFINITY;
  for (double delta : {0.05, 0.02, 0.005}) {
    const auto run = run_chain(lat, delta, opt, 7);
    EXPECT_EQ(estimate_p_span(run.records, 1).value, 1.0);
    EXPECT_EQ(estimate_p_span(run.records, 2).value, 1.0);
    double max_domain = 0.0;
    for (const auto& r : run.records) max_domain += r.max_domain;
    max_domain /= 500.0;
    EXPECT_LT(max_domain, last);
    last = max_domain;
  }
  EXPECT_LT(last, 1.05);
}

TEST(RunChain, UndeformedLargeLatticeRarelySpans) {
  const auto lat = build_percolation_lattice(10, 10);
  ChainOptions opt;
  opt.burn_in = 200;
  opt.sweeps = 500;
  const auto run = run_chain(lat, 1.0, opt, 8);
  EXPECT_LT(estimate_p_span(run.records, 1).value, 0.1);
  EXPECT_LT(estimate_p_span(run.records, 2).value, 0.1);
}

TEST(BinnedMean, AllTrue) {
  const auto e = binned_mean(std::vector<double>(400, 1.0));
  EXPECT_EQ(e.value, 1.0);
  EXPECT_EQ(e.stderr_, 0.0);
}

TEST(BinnedMean, FairCoinStandardError) {
  // Independent samples: the block estimate reproduces 1 / (2 sqrt(n)).
  Xoshiro256 rng(123);
  const int n = 40000;
  std::vector<double> x(n);
  double ratio = 0.0;
  const int repeats = 20;
  double value = 0.0;
  for (int r = 0; r < repeats; ++r) {
    for (auto& v : x) v = rng.below(2) ? 1.0 : 0.0;
    const auto e = binned_mean(x, 20);
    ratio += e.stderr_ / (0.5 / std::sqrt(static_cast<double>(n)));
    value += e.value;
  }
  EXPECT_NEAR(value / repeats, 0.5, 0.003);
  EXPECT_NEAR(ratio / repeats, 1.0, 0.1);
}

TEST(BinnedMean, CorrelatedSeriesGetsLargerError) {
  // Runs of 200 identical values: naive error underestimates, binning does not.
  Xoshiro256 rng(5);
  std::vector<double> x;
  for (int block = 0; block < 200; ++block) {
    const double v = rng.below(2) ? 1.0 : 0.0;
    for (int i = 0; i < 200; ++i) x.push_back(v);
  }
  const double naive = 0.5 / std::sqrt(static_cast<double>(x.size()));
  EXPECT_GT(binned_mean(x, 20).stderr_, 5.0 * naive);
}

TEST(BinnedMean, Errors) {
  EXPECT_THROW(binned_mean(std::vector<double>(99, 0.0)), std::invalid_argument);
  EXPECT_THROW(binned_mean(std::vector<double>(200, 0.0), 1), std::invalid_argument);
  EXPECT_THROW(estimate_p_span({}, 3), std::invalid_argument);
}

Curve logistic(double centre, double width, const std::vector<double>& grid, const std::string& label) {
  Curve c;
  c.label = label;
  c.delta = grid;
  for (double d : grid) c.p.push_back(1.0 / (1.0 + std::exp((d - centre) / width)));
  return c;
}

std::vector<double> fig_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 8; ++i) g.push_back(0.30 + 0.05 * i);
  return g;
}

TEST(DeltaC, SyntheticLogisticCurves) {
  const auto g = fig_grid();
  const auto est = estimate_delta_c({logistic(0.5, 0.08, g, "a"), logistic(0.5, 0.05, g, "b"), logistic(0.5, 0.03, g, "c")});
  ASSERT_EQ(est.crossings.size(), 3u);
  EXPECT_NEAR(est.delta_c, 0.5, 0.005);
  EXPECT_LT(est.error, 0.005);
}

TEST(DeltaC, OffGridCrossing) {
  const auto g = fig_grid();
  const auto est = estimate_delta_c({logistic(0.47, 0.08, g, "a"), logistic(0.47, 0.04, g, "b")});
  EXPECT_NEAR(est.delta_c, 0.47, 0.01);
}

TEST(DeltaC, Refusals) {
  const auto g = fig_grid();
  EXPECT_THROW(estimate_delta_c({logistic(0.5, 0.05, g, "a")}), std::invalid_argument);
  Curve shifted = logistic(0.5, 0.05, g, "b");
  for (auto& p : shifted.p) p = std::min(1.0, p + 0.5);
  // Larger curve lies above everywhere: no crossing.
  EXPECT_THROW(estimate_delta_c({logistic(0.5, 0.08, g, "a"), shifted}), std::runtime_error);
  const std::vector<double> few{0.3, 0.4, 0.5, 0.6};
  EXPECT_THROW(estimate_delta_c({logistic(0.5, 0.08, few, "a"), logistic(0.5, 0.04, few, "b")}), std::invalid_argument);
}

TEST(Exhaustive, NormalisedAndSupportedOnValidConfigs) {
  const auto lat = build_star_lattice(1, 1, Boundary::periodic);
  const auto p = exhaustive_distribution(lat, 0.6);
  ASSERT_EQ(p.size(), 729u);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += p[i];
    EXPECT_EQ(p[i] > 0.0, weight_parts(lat, config_from_index(i, 6)).h) << i;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Exhaustive, ColoringDominatesNearZero) {
  const auto lat = build_star_lattice(1, 1, Boundary::periodic);
  const auto p = exhaustive_distribution(lat, 0.01);
  EXPECT_GT(p[config_index(lat.coloring())], 0.999);
}

TEST(Exhaustive, RelabelSymmetricWhenUndeformed) {
  const auto lat = build_star_lattice(1, 1, Boundary::periodic);
  const auto p = exhaustive_distribution(lat, 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    Config s = config_from_index(i, 6);
    for (auto& l : s) l = static_cast<Label>((l + 1) % 3);
    EXPECT_NEAR(p[config_index(s)], p[i], 1e-15);
    for (auto& l : s) l = static_cast<Label>(l == 0 ? 1 : l == 1 ? 0 : 2);
    EXPECT_NEAR(p[config_index(s)], p[i], 1e-15);
  }
}

TEST(Exhaustive, IndexRoundTripAndLimits) {
  for (std::size_t i : {0u, 1u, 5u, 242u, 728u}) EXPECT_EQ(config_index(config_from_index(i, 6)), i);
  EXPECT_EQ(config_index(Config{1, 0, 0}), 1u);
  EXPECT_EQ(config_index(Config{0, 0, 1}), 9u);
  EXPECT_THROW(exhaustive_distribution(build_star_lattice(2, 2, Boundary::periodic), 0.5), std::invalid_argument);
  EXPECT_THROW(exhaustive_distribution(build_star_lattice(1, 1, Boundary::periodic), 0.0), std::invalid_argument);
}

TEST(LoopEstimate, IncrementalCountMatchesDirectCount) {
  const auto lat = build_star_lattice(2, 2, Boundary::periodic);
  const auto est = estimate_dodecagon_probability(lat, 1.0, 50, 3000, 77);
  ChainState chain(lat, 1.0, 77);
  for (int s = 0; s < 50; ++s) chain.sweep();
  std::uint64_t hits = 0;
  for (int s = 0; s < 3000; ++s) {
    chain.sweep([&](int) {
      for (int k = 0; k < static_cast<int>(lat.dodecagons().size()); ++k) hits += dodecagon_matched(lat, chain.config(), k);
    });
  }
  EXPECT_EQ(est.hits, hits);
  EXPECT_THROW(estimate_dodecagon_probability(build_percolation_lattice(2, 2), 1.0, 1, 1, 1), std::invalid_argument);
}

TEST(Scan, DeterministicAcrossThreadCounts) {
  ScanConfig cfg;
  cfg.deltas = {0.3, 0.5, 0.7};
  cfg.sizes = {{2, 2}, {3, 3}};
  cfg.chain.burn_in = 10;
  cfg.chain.sweeps = 200;
  cfg.seed = 42;
  cfg.threads = 1;
  const auto a = run_scan(cfg);
  cfg.threads = 3;
  const auto b = run_scan(cfg);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].p1.value, b[i].p1.value);
    EXPECT_EQ(a[i].p2.stderr_, b[i].p2.stderr_);
    EXPECT_EQ(a[i].max_domain, b[i].max_domain);
    EXPECT_EQ(a[i].seed, derive_seed(42, i));
    EXPECT_GE(a[i].p1.value, 0.0);
    EXPECT_LE(a[i].p1.value, 1.0);
  }
  EXPECT_EQ(a[3].l1, 3);
  EXPECT_EQ(a[3].delta, 0.3);
}

TEST(Scan, SpanProbabilityFallsWithDelta) {
  ScanConfig cfg;
  cfg.deltas = {0.2, 0.5, 0.9};
  cfg.sizes = {{5, 5}};
  cfg.chain.burn_in = 100;
  cfg.chain.sweeps = 1000;
  const auto pts = run_scan(cfg);
  EXPECT_GT(pts[0].p1.value, pts[1].p1.value);
  EXPECT_GT(pts[1].p1.value, pts[2].p1.value);
  EXPECT_LT(pts[0].max_domain, pts[2].max_domain);
}

}  // namespace
}  // namespace ffgs
