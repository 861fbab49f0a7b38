// Copyright 2026 The ffgs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FFGS_MC_HPP
#define FFGS_MC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffgs/parallel.hpp"
#include "ffgs/rng.hpp"
#include "ffgs/star_lattice.hpp"

namespace ffgs {

/// Change in the weight components from flipping one site.
struct FlipDelta {
  bool valid = true;  // false if the new configuration has h = 0
  int loops = 0;
  int matches = 0;
};

/// Metropolis chain over outcome configurations. Weight updates only look at
/// the like-outcome clusters next to the flipped site.
class ChainState {
 public:
  ChainState(const StarLattice& lat, double delta, std::uint64_t seed, bool with_loops = true)
      : lat_(&lat),
        sigma_(lat.coloring()),
        log_bias_(std::log(axis_bias(delta))),
        log_two_(with_loops ? std::log(2.0) : 0.0),
        delta_(delta),
        rng_(seed),
        stamp_(static_cast<std::size_t>(lat.num_sites()), 0),
        side_(static_cast<std::size_t>(lat.num_sites()), 0) {
    if (delta > 1.0) throw std::invalid_argument("ChainState: delta must lie in (0, 1]");
    const auto p = weight_parts(lat, sigma_);
    loops_ = p.loops;
    matches_ = p.matches;
  }

  const StarLattice& lattice() const { return *lat_; }
  const Config& config() const { return sigma_; }
  double delta() const { return delta_; }
  int loops() const { return loops_; }
  int matches() const { return matches_; }
  double log_weight() const { return loops_ * log_two_ + matches_ * log_bias_; }
  std::uint64_t proposed() const { return proposed_; }
  std::uint64_t accepted() const { return accepted_; }

  /// Replaces the configuration (must have h = 1) and resyncs the caches.
  void set_config(Config sigma) {
    check_config(*lat_, sigma);
    const auto p = weight_parts(*lat_, sigma);
    if (!p.h) throw std::invalid_argument("ChainState::set_config: configuration has zero weight");
    sigma_ = std::move(sigma);
    loops_ = p.loops;
    matches_ = p.matches;
  }

  /// Weight change for setting site j to label b (b != current label).
  FlipDelta flip_delta(int j, Label b) {
    const Label a = sigma_[static_cast<std::size_t>(j)];
    FlipDelta out;
    out.matches = (b == lat_->color(j)) - (a == lat_->color(j));
    std::array<int, 3> same{}, other{};
    int ns = 0, no = 0;
    const auto& nb = lat_->neighbors(j);
    for (int k = 0; k < lat_->degree(j); ++k) {
      const Label l = sigma_[static_cast<std::size_t>(nb[static_cast<std::size_t>(k)])];
      if (l == a) same[static_cast<std::size_t>(ns++)] = nb[static_cast<std::size_t>(k)];
      if (l == b) other[static_cast<std::size_t>(no++)] = nb[static_cast<std::size_t>(k)];
    }
    // Joining the b-domains next to j; also checks they stay two-colourable.
    int merged = 0;
    if (no > 0) {
      merged = count_groups(other, no, b, /*check_parity=*/true, -1);
      if (merged < 0) {
        out.valid = false;
        return out;
      }
    }
    const int dv_b = 1 - merged;
    // Splitting j's old domain.
    int dv_a = -1;
    if (ns == 1) {
      dv_a = 0;
    } else if (ns >= 2) {
      dv_a = count_groups(same, ns, a, /*check_parity=*/false, j) - 1;
    }
    out.loops = dv_a + dv_b - (ns - no);
    return out;
  }

  double log_ratio(const FlipDelta& d) const { return d.loops * log_two_ + d.matches * log_bias_; }

  /// One proposal. Returns the flipped site, or -1 if rejected.
  int step() {
    const int n = lat_->num_sites();
    const int j = static_cast<int>(rng_.below(static_cast<std::uint32_t>(n)));
    const Label a = sigma_[static_cast<std::size_t>(j)];
    const Label b = static_cast<Label>((a + 1 + rng_.below(2)) % 3);
    const double u = rng_.uniform();
    ++proposed_;
    const FlipDelta d = flip_delta(j, b);
    if (!d.valid) return -1;
    const double lr = log_ratio(d);
    if (lr < 0.0 && u >= std::exp(lr)) return -1;
    sigma_[static_cast<std::size_t>(j)] = b;
    loops_ += d.loops;
    matches_ += d.matches;
    ++accepted_;
    return j;
  }

  /// N proposals; `after(site)` runs after each (site = -1 when rejected).
  template <class Observer>
  void sweep(Observer&& after) {
    for (int i = 0; i < lat_->num_sites(); ++i) after(step());
  }
  void sweep() {
    for (int i = 0; i < lat_->num_sites(); ++i) step();
  }

 private:
  // Number of distinct like-labelled clusters among `seeds` (label l, site
  // `skip` excluded). With check_parity, returns -1 if two seeds in one
  // cluster sit on opposite sides of its two-colouring.
  int count_groups(const std::array<int, 3>& seeds, int count, Label l, bool check_parity, int skip) {
    if (count == 1) return 1;
    const std::uint32_t tag = next_tag();
    if (skip >= 0) stamp_[static_cast<std::size_t>(skip)] = tag;
    std::array<bool, 3> found{};
    int groups = 0;
    for (int s = 0; s < count; ++s) {
      if (found[static_cast<std::size_t>(s)]) continue;
      ++groups;
      found[static_cast<std::size_t>(s)] = true;
      int remaining = 0;
      for (int t = s + 1; t < count; ++t) remaining += !found[static_cast<std::size_t>(t)];
      if (remaining == 0) break;
      const int root = seeds[static_cast<std::size_t>(s)];
      queue_.assign(1, root);
      stamp_[static_cast<std::size_t>(root)] = tag;
      side_[static_cast<std::size_t>(root)] = 0;
      for (std::size_t q = 0; q < queue_.size() && remaining > 0; ++q) {
        const int u = queue_[q];
        const auto& nb = lat_->neighbors(u);
        for (int k = 0; k < lat_->degree(u); ++k) {
          const int w = nb[static_cast<std::size_t>(k)];
          if (stamp_[static_cast<std::size_t>(w)] == tag || sigma_[static_cast<std::size_t>(w)] != l) continue;
          stamp_[static_cast<std::size_t>(w)] = tag;
          side_[static_cast<std::size_t>(w)] = static_cast<std::uint8_t>(1 - side_[static_cast<std::size_t>(u)]);
          queue_.push_back(w);
          for (int t = s + 1; t < count; ++t) {
            if (!found[static_cast<std::size_t>(t)] && seeds[static_cast<std::size_t>(t)] == w) {
              found[static_cast<std::size_t>(t)] = true;
              --remaining;
              if (check_parity && side_[static_cast<std::size_t>(w)] != 0) return -1;
            }
          }
        }
      }
    }
    return groups;
  }

  std::uint32_t next_tag() {
    if (++tag_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      tag_ = 1;
    }
    return tag_;
  }

  const StarLattice* lat_;
  Config sigma_;
  double log_bias_, log_two_, delta_;
  int loops_ = 0, matches_ = 0;
  Xoshiro256 rng_;
  std::uint64_t proposed_ = 0, accepted_ = 0;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> side_;
  std::vector<int> queue_;
  std::uint32_t tag_ = 0;
};

/// Per-sweep observables of a chain.
struct SweepRecord {
  bool cross1 = false;
  bool cross2 = false;
  int max_domain = 0;
  double mean_domain = 0.0;
};

inline SweepRecord measure(const StarLattice& lat, const Config& sigma) {
  const auto d = decompose_domains(lat, sigma);
  const auto eg = encoded_graph(lat, d);
  const auto s = domain_stats(d);
  return {has_crossing_path(eg, lat, 1), has_crossing_path(eg, lat, 2), s.max_size, s.mean_size};
}

struct ChainOptions {
  int burn_in = 2000;
  int sweeps = 20000;
  bool with_loops = true;
};

struct ChainRun {
  std::vector<SweepRecord> records;
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;
  double acceptance() const { return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0; }
};

/// Chain started from sigma = c, measured once per sweep after burn-in.
inline ChainRun run_chain(const StarLattice& lat, double delta, const ChainOptions& opt, std::uint64_t seed) {
  if (opt.burn_in < 0 || opt.sweeps <= 0) throw std::invalid_argument("run_chain: sweep counts must be positive");
  ChainState chain(lat, delta, seed, opt.with_loops);
  for (int s = 0; s < opt.burn_in; ++s) chain.sweep();
  ChainRun run;
  run.records.reserve(static_cast<std::size_t>(opt.sweeps));
  const auto p0 = chain.proposed(), a0 = chain.accepted();
  for (int s = 0; s < opt.sweeps; ++s) {
    chain.sweep();
    run.records.push_back(measure(lat, chain.config()));
  }
  run.proposed = chain.proposed() - p0;
  run.accepted = chain.accepted() - a0;
  return run;
}

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Mean of x with a binned standard error: the series is cut into n_bins
/// consecutive blocks and the error is the standard error of block means.
inline Estimate binned_mean(const std::vector<double>& x, int n_bins = 20) {
  if (x.size() < 100) throw std::invalid_argument("binned_mean: need at least 100 measurements");
  if (n_bins < 2 || static_cast<std::size_t>(n_bins) > x.size()) throw std::invalid_argument("binned_mean: bad bin count");
  const std::size_t per = x.size() / static_cast<std::size_t>(n_bins);
  std::vector<double> means(static_cast<std::size_t>(n_bins), 0.0);
  for (int b = 0; b < n_bins; ++b) {
    for (std::size_t i = 0; i < per; ++i) means[static_cast<std::size_t>(b)] += x[static_cast<std::size_t>(b) * per + i];
    means[static_cast<std::size_t>(b)] /= static_cast<double>(per);
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double bm = 0.0;
  for (double m : means) bm += m;
  bm /= n_bins;
  double var = 0.0;
  for (double m : means) var += (m - bm) * (m - bm);
  var /= (n_bins - 1);
  return {mean, std::sqrt(var / n_bins)};
}

/// Spanning probability along `dimension` with a binned error bar.
inline Estimate estimate_p_span(const std::vector<SweepRecord>& records, int dimension, int n_bins = 20) {
  if (dimension != 1 && dimension != 2) throw std::invalid_argument("estimate_p_span: dimension must be 1 or 2");
  std::vector<double> x;
  x.reserve(records.size());
  for (const auto& r : records) x.push_back((dimension == 1 ? r.cross1 : r.cross2) ? 1.0 : 0.0);
  return binned_mean(x, n_bins);
}

struct Curve {
  std::string label;
  std::vector<double> delta;
  std::vector<double> p;
};

struct CriticalEstimate {
  double delta_c = 0.0;
  double error = 0.0;
  std::vector<double> crossings;  // one per pair of curves
};

/// Pairwise crossings of linearly interpolated curves, ordered from smaller
/// to larger system. For each pair the steepest downward crossing of
/// p_large - p_small is taken; the estimate is the mean with the half-range
/// as error.
inline CriticalEstimate estimate_delta_c(const std::vector<Curve>& curves) {
  if (curves.size() < 2) throw std::invalid_argument("estimate_delta_c: need at least two sizes");
  for (const auto& c : curves) {
    if (c.delta.size() < 5 || c.delta.size() != c.p.size()) {
      throw std::invalid_argument("estimate_delta_c: each curve needs >= 5 points");
    }
    if (c.delta != curves.front().delta) throw std::invalid_argument("estimate_delta_c: curves must share a delta grid");
  }
  const auto& x = curves.front().delta;
  CriticalEstimate est;
  for (std::size_t a = 0; a < curves.size(); ++a) {
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      double best_drop = 0.0, best_x = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double d0 = curves[b].p[i] - curves[a].p[i];
        const double d1 = curves[b].p[i + 1] - curves[a].p[i + 1];
        if (!(d0 >= 0.0 && d1 < 0.0) && !(d0 > 0.0 && d1 <= 0.0)) continue;
        const double drop = d0 - d1;
        if (drop > best_drop) {
          best_drop = drop;
          best_x = x[i] + (x[i + 1] - x[i]) * d0 / (d0 - d1);
        }
      }
      if (std::isnan(best_x)) continue;
      est.crossings.push_back(best_x);
    }
  }
  if (est.crossings.empty()) throw std::runtime_error("estimate_delta_c: curves do not cross in range");
  double sum = 0.0;
  for (double c : est.crossings) sum += c;
  est.delta_c = sum / static_cast<double>(est.crossings.size());
  const auto [lo, hi] = std::minmax_element(est.crossings.begin(), est.crossings.end());
  est.error = 0.5 * (*hi - *lo);
  return est;
}

inline constexpr int kMaxExhaustiveSites = 12;

/// Base-3 index of a configuration, site 0 least significant.
inline std::size_t config_index(const Config& sigma) {
  std::size_t idx = 0;
  for (std::size_t v = sigma.size(); v-- > 0;) idx = 3 * idx + sigma[v];
  return idx;
}

inline Config config_from_index(std::size_t idx, int n) {
  Config sigma(static_cast<std::size_t>(n));
  for (auto& l : sigma) {
    l = static_cast<Label>(idx % 3);
    idx /= 3;
  }
  return sigma;
}

/// Exact normalised p_delta over all 3^N configurations (by config_index).
inline std::vector<double> exhaustive_distribution(const StarLattice& lat, double delta, bool with_loops = true) {
  const int n = lat.num_sites();
  if (n > kMaxExhaustiveSites) throw std::invalid_argument("exhaustive_distribution: at most 12 sites");
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("exhaustive_distribution: delta must lie in (0, 1]");
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  std::vector<double> logw(total);
  double top = -INFINITY;
  for (std::size_t i = 0; i < total; ++i) {
    logw[i] = config_log_weight(lat, config_from_index(i, n), delta, with_loops);
    top = std::max(top, logw[i]);
  }
  std::vector<double> p(total);
  double z = 0.0;
  for (std::size_t i = 0; i < total; ++i) z += p[i] = std::exp(logw[i] - top);
  for (auto& v : p) v /= z;
  return p;
}

/// Visit frequencies of a chain on a small lattice, sampled after every proposal.
inline std::vector<double> empirical_distribution(const StarLattice& lat, double delta, int burn_in, int sweeps,
                                                  std::uint64_t seed, bool with_loops = true) {
  if (lat.num_sites() > kMaxExhaustiveSites) throw std::invalid_argument("empirical_distribution: at most 12 sites");
  std::size_t total = 1;
  for (int i = 0; i < lat.num_sites(); ++i) total *= 3;
  ChainState chain(lat, delta, seed, with_loops);
  for (int s = 0; s < burn_in; ++s) chain.sweep();
  std::vector<double> counts(total, 0.0);
  std::size_t idx = config_index(chain.config());
  for (int s = 0; s < sweeps; ++s) {
    chain.sweep([&](int site) {
      if (site >= 0) idx = config_index(chain.config());
      counts[idx] += 1.0;
    });
  }
  const double n = static_cast<double>(sweeps) * lat.num_sites();
  for (auto& c : counts) c /= n;
  return counts;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

struct LoopEstimate {
  double probability = 0.0;  // per dodecagon, per proposal
  std::uint64_t hits = 0;     // proposals x matched dodecagons
};

/// Fraction of (proposal, dodecagon) pairs where all twelve sites agree.
inline LoopEstimate estimate_dodecagon_probability(const StarLattice& lat, double delta, int burn_in, int sweeps,
                                                   std::uint64_t seed) {
  const auto& rings = lat.dodecagons();
  if (rings.empty()) throw std::invalid_argument("estimate_dodecagon_probability: lattice has no dodecagons");
  std::vector<std::vector<int>> rings_of(static_cast<std::size_t>(lat.num_sites()));
  for (std::size_t k = 0; k < rings.size(); ++k) {
    for (int v : rings[k]) rings_of[static_cast<std::size_t>(v)].push_back(static_cast<int>(k));
  }
  ChainState chain(lat, delta, seed);
  for (int s = 0; s < burn_in; ++s) chain.sweep();
  std::vector<std::uint8_t> matched(rings.size());
  std::uint64_t current = 0;
  for (std::size_t k = 0; k < rings.size(); ++k) {
    matched[k] = dodecagon_matched(lat, chain.config(), static_cast<int>(k));
    current += matched[k];
  }
  LoopEstimate est;
  for (int s = 0; s < sweeps; ++s) {
    chain.sweep([&](int site) {
      if (site >= 0) {
        for (int k : rings_of[static_cast<std::size_t>(site)]) {
          const auto now = static_cast<std::uint8_t>(dodecagon_matched(lat, chain.config(), k));
          current += now;
          current -= matched[static_cast<std::size_t>(k)];
          matched[static_cast<std::size_t>(k)] = now;
        }
      }
      est.hits += current;
    });
  }
  const double denom = static_cast<double>(sweeps) * lat.num_sites() * static_cast<double>(rings.size());
  est.probability = static_cast<double>(est.hits) / denom;
  return est;
}

struct ScanPoint {
  double delta = 0.0;
  int l1 = 0, l2 = 0;
  Estimate p1, p2;
  double max_domain = 0.0;   // mean over sweeps of the largest domain
  double mean_domain = 0.0;  // mean over sweeps of the mean domain size
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double acceptance = 0.0;
};

struct ScanConfig {
  std::vector<double> deltas;
  std::vector<std::array<int, 2>> sizes;
  ChainOptions chain;
  int bins = 20;
  std::uint64_t seed = 1;
  int threads = 0;
};

/// The (size, delta) grid; task index = size_index * |deltas| + delta_index.
inline std::vector<ScanPoint> run_scan(const ScanConfig& cfg) {
  if (cfg.deltas.empty() || cfg.sizes.empty()) throw std::invalid_argument("run_scan: empty grid");
  for (double d : cfg.deltas) {
    if (!(d > 0.0) || d > 1.0) throw std::invalid_argument("run_scan: delta must lie in (0, 1]");
  }
  std::vector<StarLattice> lattices;
  for (const auto& s : cfg.sizes) lattices.push_back(build_percolation_lattice(s[0], s[1]));
  const std::size_t nd = cfg.deltas.size();
  std::vector<ScanPoint> out(nd * cfg.sizes.size());
  parallel_for(out.size(), cfg.threads, [&](std::size_t t) {
    const std::size_t si = t / nd, di = t % nd;
    const std::uint64_t seed = derive_seed(cfg.seed, t);
    const auto run = run_chain(lattices[si], cfg.deltas[di], cfg.chain, seed);
    ScanPoint p;
    p.delta = cfg.deltas[di];
    p.l1 = cfg.sizes[si][0];
    p.l2 = cfg.sizes[si][1];
    p.p1 = estimate_p_span(run.records, 1, cfg.bins);
    p.p2 = estimate_p_span(run.records, 2, cfg.bins);
    for (const auto& r : run.records) {
      p.max_domain += r.max_domain;
      p.mean_domain += r.mean_domain;
    }
    p.max_domain /= static_cast<double>(run.records.size());
    p.mean_domain /= static_cast<double>(run.records.size());
    p.samples = run.records.size();
    p.seed = seed;
    p.acceptance = run.acceptance();
    out[t] = p;
  });
  return out;
}

/// p_span curves (average of both dimensions) per lattice size.
inline std::vector<Curve> scan_curves(const ScanConfig& cfg, const std::vector<ScanPoint>& pts) {
  std::vector<Curve> curves;
  const std::size_t nd = cfg.deltas.size();
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    Curve c;
    c.label = std::to_string(cfg.sizes[si][0]) + "x" + std::to_string(cfg.sizes[si][1]);
    for (std::size_t di = 0; di < nd; ++di) {
      const auto& p = pts[si * nd + di];
      c.delta.push_back(p.delta);
      c.p.push_back(0.5 * (p.p1.value + p.p2.value));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace ffgs

#endif  // FFGS_MC_HPP
