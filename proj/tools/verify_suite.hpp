#ifndef FFGS_TOOLS_VERIFY_SUITE_HPP
#define FFGS_TOOLS_VERIFY_SUITE_HPP

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ffgs/chain.hpp"
#include "ffgs/deform.hpp"
#include "ffgs/graph_state.hpp"
#include "ffgs/mc.hpp"
#include "ffgs/mps.hpp"
#include "ffgs/spectra.hpp"
#include "ffgs/star_lattice.hpp"
#include "run_config.hpp"

namespace ffgs::cli {

struct CheckResult {
  bool ok = false;
  std::string detail;
};

struct Check {
  std::string name;
  std::function<CheckResult()> run;
};

namespace detail {

inline CheckResult below(double value, double tol) { return {value < tol, fmt(value, 3) + " < " + fmt(tol, 3)}; }

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace detail

/// Oracle and invariant checks across all modules. Runs in well under a
/// minute on one core.
inline std::vector<Check> verification_checks(std::uint64_t seed, int threads) {
  using detail::below;
  std::vector<Check> checks;

  checks.push_back({"spin algebra and Casimir (s = 1, 3/2)", [] {
                      double worst = 0.0;
                      for (Spin s : {kSpinOne, kSpinThreeHalves}) {
                        const auto t = spin_operators(s);
                        const cplx i(0.0, 1.0);
                        worst = std::max(worst, max_abs(t.sx * t.sy - t.sy * t.sx - i * t.sz));
                        worst = std::max(worst, max_abs(t.sy * t.sz - t.sz * t.sy - i * t.sx));
                        const Matrix cas = t.sx * t.sx + t.sy * t.sy + t.sz * t.sz;
                        const double v = s.value();
                        worst = std::max(worst, max_abs(cas - v * (v + 1) * Matrix::Identity(s.dim(), s.dim())));
                      }
                      return below(worst, 1e-12);
                    }});

  checks.push_back({"deformed term equals range projector of D h D", [] {
                      double worst = 0.0;
                      for (double d : {0.2, 0.5, 0.9}) {
                        for (int first : {0, 1}) {
                          const std::vector<RankTwoProjector> p{chain_projector(first), chain_projector(first + 1)};
                          const Matrix dd = kron(DeformationOp(p[0], d).d, DeformationOp(p[1], d).d);
                          const Matrix direct = range_projector(dd * aklt_bond_projector() * dd);
                          worst = std::max(worst, (deform_term({{0, 1}, aklt_bond_projector()}, p, d).matrix - direct).norm());
                        }
                      }
                      return below(worst, 1e-9);
                    }});

  checks.push_back({"deformed terms are projectors of constant rank", [] {
                      bool ok = true;
                      double worst = 0.0;
                      for (int body : {2, 3}) {
                        for (int k = 1; k <= 10; ++k) {
                          const Matrix m = chain_term(k % 2, body, 0.1 * k);
                          worst = std::max(worst, (m * m - m).norm());
                          ok = ok && projector_rank(m) == (body == 2 ? 5 : 23);
                        }
                      }
                      auto r = below(worst, 1e-10);
                      r.ok = r.ok && ok;
                      r.detail += ok ? ", ranks 5 and 23" : ", rank changed";
                      return r;
                    }});

  checks.push_back({"two-body limit is I - P(x)P with rank 5", [] {
                      double worst = 0.0;
                      bool rank = true;
                      for (int first : {0, 1}) {
                        const Matrix t = chain_term(first, 2, std::nullopt);
                        const Matrix expect = Matrix::Identity(9, 9) -
                                              kron(chain_projector(first).matrix, chain_projector(first + 1).matrix);
                        worst = std::max(worst, (t - expect).norm());
                        rank = rank && projector_rank(t) == 5;
                      }
                      auto r = below(worst, 1e-10);
                      r.ok = r.ok && rank;
                      return r;
                    }});

  checks.push_back({"three-body limit is I - (PPP + ZXZ)/2", [] {
                      double worst = 0.0;
                      for (int first : {0, 1}) {
                        const auto& p0 = chain_projector(first);
                        const auto& p1 = chain_projector(first + 1);
                        const auto& p2 = chain_projector(first + 2);
                        const Matrix ppp = kron(kron(p0.matrix, p1.matrix), p2.matrix);
                        const Matrix zxz = kron(kron(p0.lift(detail::pauli_z()), p1.lift(detail::pauli_x())),
                                                p2.lift(detail::pauli_z()));
                        const Matrix expect = Matrix::Identity(27, 27) - 0.5 * (ppp + zxz);
                        worst = std::max(worst, max_abs(chain_term(first, 3, std::nullopt) - expect));
                      }
                      return below(worst, 1e-10);
                    }});

  checks.push_back({"three-body limit terms commute (N = 4)", [] {
                      const auto h = build_chain_limit(4, 3);
                      std::vector<Matrix> full;
                      for (const auto& t : h.terms) full.push_back(embed_term(t.matrix, t.sites, h.local_dims).to_dense());
                      double worst = 0.0;
                      for (std::size_t a = 0; a < full.size(); ++a)
                        for (std::size_t b = a + 1; b < full.size(); ++b)
                          worst = std::max(worst, (full[a] * full[b] - full[b] * full[a]).norm());
                      return below(worst, 1e-12);
                    }});

  checks.push_back({"two-body limit ground space has dimension 2^N (N = 4)", [] {
                      const RealVector w = hermitian_eigenvalues(build_chain_limit(4, 2).dense());
                      int zeros = 0;
                      for (Eigen::Index i = 0; i < w.size(); ++i) zeros += std::abs(w(i)) < 1e-9;
                      return CheckResult{zeros == 16, std::to_string(zeros) + " zero modes"};
                    }});

  checks.push_back({"reduction POVMs are complete", [] {
                      double worst = 0.0;
                      auto defect = [](const std::array<Matrix, 3>& f) {
                        Matrix sum = Matrix::Zero(4, 4);
                        for (const auto& m : f) sum += m.adjoint() * m;
                        return (sum - Matrix::Identity(4, 4)).norm();
                      };
                      worst = defect(reduction_povm_undeformed());
                      for (Axis c : kAxes)
                        for (double d : {0.1, 0.5, 1.0}) worst = std::max(worst, defect(reduction_povm_deformed(c, d)));
                      return below(worst, 1e-12);
                    }});

  checks.push_back({"graph-state stabilizers", [] {
                      double worst = 0.0;
                      for (const auto& g : {ring_graph(6), ring_graph(9), build_star_lattice(1, 1, Boundary::periodic).graph()})
                        worst = std::max(worst, stabilizer_defect(g, graph_state(g)));
                      return below(worst, 1e-12);
                    }});

  checks.push_back({"star-lattice torus two-site RDMs are I/4", [] {
                      const auto g = build_star_lattice(1, 1, Boundary::periodic).graph();
                      const Vector psi = graph_state(g);
                      const Matrix quarter = Matrix::Identity(4, 4) * 0.25;
                      double worst = 0.0;
                      for (int i = 0; i < 6; ++i)
                        for (int j = 0; j < 6; ++j)
                          if (i != j) worst = std::max(worst, (two_site_rdm(psi, 6, i, j) - quarter).norm());
                      return below(worst, 1e-12);
                    }});

  checks.push_back({"Z measurement deletes the vertex", [] {
                      double worst = 0.0;
                      const auto lat = build_star_lattice(1, 1, Boundary::periodic);
                      for (int v = 0; v < 6; ++v) worst = std::max(worst, z_measure_defect(lat.graph(), v));
                      worst = std::max(worst, z_measure_defect(ring_graph(7), 3));
                      return below(worst, 1e-12);
                    }});

  checks.push_back({"ring identity: encoded graph state, ring MPS, projected AKLT", [] {
                      double worst = 0.0;
                      for (int n : {4, 6, 8}) {
                        const Vector g = chain_graph_state(n);
                        const Vector m = ring_graph_mps(n).to_vector();
                        worst = std::max(worst, std::abs(1.0 - std::abs(g.dot(m)) / m.norm()));
                        const Vector p = projected_aklt(n).to_vector();
                        worst = std::max(worst, std::abs(1.0 - std::abs(g.dot(p)) / p.norm()));
                      }
                      return below(worst, 1e-10);
                    }});

  checks.push_back({"star lattice coloring, triangles and dodecagons", [] {
                      bool ok = true;
                      const auto lat = build_star_lattice(3, 3, Boundary::periodic);
                      for (const auto& [u, v] : lat.edges()) ok = ok && lat.color(u) != lat.color(v);
                      for (int v = 0; v < lat.num_sites(); ++v) ok = ok && lat.degree(v) == 3;
                      ok = ok && lat.triangles().size() == 18u && lat.dodecagons().size() == 9u;
                      return CheckResult{ok, ok ? "3x3 torus: proper 3-coloring, 18 triangles, 9 dodecagons"
                                                : "lattice structure mismatch"};
                    }});

  checks.push_back({"local weight update equals full recompute", [seed] {
                      const auto lat = build_percolation_lattice(4, 3);
                      ChainState chain(lat, 0.45, derive_seed(seed, 1));
                      std::mt19937_64 gen(derive_seed(seed, 2));
                      std::uniform_int_distribution<int> site(0, lat.num_sites() - 1), step(1, 2);
                      double worst = 0.0;
                      bool valid = true;
                      for (int k = 0; k < 3000; ++k) {
                        const Config sigma = chain.config();
                        const int j = site(gen);
                        const auto b = static_cast<Label>((sigma[static_cast<std::size_t>(j)] + step(gen)) % 3);
                        Config next = sigma;
                        next[static_cast<std::size_t>(j)] = b;
                        const FlipDelta d = chain.flip_delta(j, b);
                        const double w0 = config_log_weight(lat, sigma, 0.45), w1 = config_log_weight(lat, next, 0.45);
                        valid = valid && d.valid == std::isfinite(w1);
                        if (d.valid) worst = std::max(worst, std::abs(chain.log_ratio(d) - (w1 - w0)));
                        chain.step();
                      }
                      auto r = below(worst, 1e-10);
                      r.ok = r.ok && valid;
                      return r;
                    }});

  checks.push_back({"Metropolis frequencies match exhaustive weights (torus, delta = 0.6)", [seed] {
                      const auto lat = build_star_lattice(1, 1, Boundary::periodic);
                      const auto p = exhaustive_distribution(lat, 0.6);
                      const auto q = empirical_distribution(lat, 0.6, 1000, 200000, derive_seed(seed, 3));
                      return below(total_variation(p, q), 0.02);
                    }});

  checks.push_back({"deformed MPS is frustration free (N = 6, both bodies)", [] {
                      double worst = 0.0;
                      for (double d : {0.1, 0.4, 0.7, 1.0}) {
                        const Vector psi = deformed_ground_state(d, 6).to_vector().normalized();
                        for (int body : {2, 3}) worst = std::max(worst, build_chain(d, 6, body).op()(psi).norm());
                      }
                      return below(worst, 1e-9);
                    }});

  checks.push_back({"symmetry sectors reproduce the dense spectrum (N = 6)", [threads] {
                      double worst = 0.0;
                      for (int body : {2, 3}) {
                        const auto h = build_chain(0.5, 6, body);
                        SpectrumOptions opt;
                        opt.levels = 0;
                        opt.threads = threads;
                        const auto merged = merged_levels(sector_spectra(h, opt));
                        const RealVector dense = hermitian_eigenvalues(h.dense());
                        if (merged.size() != static_cast<std::size_t>(dense.size())) return CheckResult{false, "level count"};
                        for (Eigen::Index i = 0; i < dense.size(); ++i)
                          worst = std::max(worst, std::abs(merged[static_cast<std::size_t>(i)] - dense(i)));
                      }
                      return below(worst, 1e-8);
                    }});

  checks.push_back({"Lanczos agrees with dense diagonalization (N = 6)", [] {
                      const auto h = build_chain(0.3, 6, 2);
                      const auto it = lowest_eigs(h.op(), 8);
                      const RealVector dense = hermitian_eigenvalues(h.dense());
                      double worst = 0.0;
                      for (std::size_t i = 0; i < 8; ++i) worst = std::max(worst, std::abs(it[i] - dense(static_cast<Eigen::Index>(i))));
                      return below(worst, 1e-8);
                    }});

  checks.push_back({"two- and three-body ground states coincide (N = 6)", [] {
                      double worst = 0.0;
                      for (double d : {0.3, 0.7}) {
                        const Vector a = hermitian_eig(build_chain(d, 6, 2).dense()).vectors.col(0);
                        const Vector b = hermitian_eig(build_chain(d, 6, 3).dense()).vectors.col(0);
                        worst = std::max(worst, 1.0 - std::abs(a.dot(b)));
                      }
                      return below(worst, 1e-9);
                    }});

  checks.push_back({"lambda_min kernel is four dimensional", [] {
                      bool ok = true;
                      for (double d : {0.1, 0.5, 1.0})
                        for (int parity : {0, 1}) ok = ok && lambda_minmax(d, parity).kernel_dim == 4;
                      return CheckResult{ok, ok ? "kernel dimension 4" : "kernel dimension differs from 4"};
                    }});

  checks.push_back({"transfer-matrix fidelity per site equals 2/(delta^2 + 2)", [] {
                      double worst = 0.0;
                      for (int k = 1; k <= 10; ++k) {
                        const double d = 0.1 * k;
                        worst = std::max(worst, std::abs(contracted_fidelity_per_site(d) - fidelity_per_site(d)));
                      }
                      return below(worst, 1e-10);
                    }});

  checks.push_back({"MPS fidelity contraction equals dense overlap (N = 6)", [] {
                      const Vector g = chain_graph_state(6);
                      const Vector psi = deformed_ground_state(0.5, 6).to_vector();
                      const double dense = std::norm(g.dot(psi)) / psi.squaredNorm();
                      return below(std::abs(fidelity_check(0.5, 6).contracted - dense), 1e-12);
                    }});

  checks.push_back({"undeformed crackion triplet is degenerate (N = 6)", [threads] {
                      double worst = 0.0;
                      for (const auto& p : crackion_dispersion(6, threads))
                        worst = std::max({worst, std::abs(p.energy[0] - p.energy[1]), std::abs(p.energy[0] - p.energy[2])});
                      return below(worst, 1e-8);
                    }});

  checks.push_back({"three-body gap tends to 1 (N = 6, delta = 1e-3)", [threads] {
                      return below(std::abs(gap(build_chain(1e-3, 6, 3), threads) - 1.0), 1e-3);
                    }});

  checks.push_back({"gap sandwich inequality (N = 6)", [threads] {
                      double worst = INFINITY;
                      for (double d : {0.3, 0.6, 1.0}) {
                        const double g2 = gap(build_chain(d, 6, 2), threads), g3 = gap(build_chain(d, 6, 3), threads);
                        worst = std::min(worst, g2 - lambda_minmax(d).lambda_min * g3 / 2.0);
                      }
                      return CheckResult{worst >= 0.0, "min of gap2 - lambda_min gap3 / 2 = " + fmt(worst, 3)};
                    }});

  checks.push_back({"dodecagon loop heuristic is 6/3^12", [] {
                      return below(std::abs(dodecagon_loop_heuristic() - 6.0 / 531441.0), 1e-18);
                    }});

  return checks;
}

}  // namespace ffgs::cli

#endif  // FFGS_TOOLS_VERIFY_SUITE_HPP
