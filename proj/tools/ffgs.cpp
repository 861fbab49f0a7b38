// ffgs: command-line front end for the deformed AKLT library.
//
//   ffgs scan      percolation scan of the reduced star-lattice state
//   ffgs sample    GraphML / DOT snapshots of encoded graphs
//   ffgs spectrum  sector-resolved spectra of the deformed spin-1 ring
//   ffgs fidelity  graph-state fidelity table
//   ffgs verify    oracle and invariant checks
//
// Exit codes: 0 success, 1 failed check or computation, 2 bad configuration.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ffgs/chain.hpp"
#include "ffgs/graph.hpp"
#include "ffgs/mc.hpp"
#include "ffgs/mps.hpp"
#include "ffgs/parallel.hpp"
#include "ffgs/spectra.hpp"
#include "ffgs/star_lattice.hpp"
#include "run_config.hpp"
#include "svg_plot.hpp"
#include "verify_suite.hpp"

namespace ffgs::cli {
namespace {

struct Common {
  std::uint64_t seed = 42;
  std::string out = ".";
  int threads = 0;

  int worker_count() const { return threads > 0 ? threads : default_thread_count(); }
};

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) g.push_back(std::round((lo + step * i) * 1e9) / 1e9);
  return g;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

void check_deltas(const std::vector<double>& deltas) {
  require(!deltas.empty(), "delta grid is empty");
  for (double d : deltas) require(d > 0.0 && d <= 1.0, "delta " + fmt(d) + " outside (0, 1]");
  for (std::size_t i = 1; i < deltas.size(); ++i) require(deltas[i] > deltas[i - 1], "delta grid must be increasing");
}

std::array<int, 2> parse_size(const std::string& s) {
  const auto x = s.find('x');
  try {
    std::size_t used = 0;
    if (x == std::string::npos) {
      const int l = std::stoi(s, &used);
      if (used == s.size()) return {l, l};
    } else {
      const int a = std::stoi(s.substr(0, x), &used);
      std::size_t used2 = 0;
      const int b = std::stoi(s.substr(x + 1), &used2);
      if (used == x && used2 == s.size() - x - 1) return {a, b};
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("bad lattice size '" + s + "' (expected L1xL2)");
}

std::string xml_safe(std::string s) {
  for (std::size_t p; (p = s.find("--")) != std::string::npos;) s.replace(p, 2, "- -");
  return s;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  Common common;
  std::vector<double> deltas = grid(0.30, 0.70, 0.05);
  std::vector<std::string> sizes{"6x6", "10x10", "14x14"};
  int burn_in = 2000;
  int sweeps = 20000;
  int bins = 20;
  bool no_loops = false;
  bool no_svg = false;
  bool no_delta_c = false;
};

void add_scan_options(RunConfig& rc, ScanArgs& a) {
  rc.add_common(a.common.seed, a.common.out, a.common.threads);
  rc.add("deltas", a.deltas, "Deformation grid, increasing, in (0, 1]")->delimiter(',');
  rc.add("sizes", a.sizes, "Open-boundary lattice sizes in unit cells, e.g. 6x6,10x10")->delimiter(',');
  rc.add("burn-in", a.burn_in, "Sweeps discarded before measuring");
  rc.add("sweeps", a.sweeps, "Measured sweeps per grid point");
  rc.add("bins", a.bins, "Bins for the error estimate");
  rc.add_flag("no-loops", a.no_loops, "Drop the 2^L factor from the weights");
  rc.add_flag("no-svg", a.no_svg, "Skip the SVG plot");
  rc.add_flag("no-delta-c", a.no_delta_c, "Skip the crossing estimate (allows a single size)");
}

int run_scan_command(const ScanArgs& a, const RunConfig& rc) {
  const Stopwatch clock;
  check_deltas(a.deltas);
  std::vector<std::array<int, 2>> sizes;
  for (const auto& s : a.sizes) sizes.push_back(parse_size(s));
  require(!sizes.empty(), "no lattice sizes given");
  for (const auto& s : sizes) require(s[0] >= 2 && s[1] >= 2, "lattice sizes need at least 2 cells per side");
  std::stable_sort(sizes.begin(), sizes.end(), [](const auto& x, const auto& y) { return x[0] * x[1] < y[0] * y[1]; });
  if (!a.no_delta_c) {
    require(sizes.size() >= 2,
            "delta_c estimation needs at least two lattice sizes; pass --no-delta-c to scan a single size");
    require(a.deltas.size() >= 5, "delta_c estimation needs at least 5 grid points");
  }
  require(a.burn_in >= 0, "burn-in must be non-negative");
  require(a.sweeps >= 100, "at least 100 measured sweeps are needed for error bars");
  require(a.bins >= 2 && a.sweeps >= a.bins, "need 2 <= bins <= sweeps");
  const auto dir = prepare_out_dir(a.common.out);

  ScanConfig cfg;
  cfg.deltas = a.deltas;
  cfg.sizes = sizes;
  cfg.chain.burn_in = a.burn_in;
  cfg.chain.sweeps = a.sweeps;
  cfg.chain.with_loops = !a.no_loops;
  cfg.bins = a.bins;
  cfg.seed = a.common.seed;
  cfg.threads = a.common.worker_count();
  const auto points = run_scan(cfg);

  std::ostringstream csv;
  csv << csv_preamble("scan", rc.echo(true), a.common.seed);
  csv << "delta,L1,L2,p_span_dim1,err1,p_span_dim2,err2,max_domain,mean_domain,n_samples,seed\n";
  json rows = json::array();
  for (const auto& p : points) {
    csv << fmt(p.delta) << ',' << p.l1 << ',' << p.l2 << ',' << fmt(p.p1.value) << ',' << fmt(p.p1.stderr_) << ','
        << fmt(p.p2.value) << ',' << fmt(p.p2.stderr_) << ',' << fmt(p.max_domain) << ',' << fmt(p.mean_domain) << ','
        << p.samples << ',' << p.seed << '\n';
    rows.push_back({{"delta", p.delta}, {"L1", p.l1}, {"L2", p.l2}, {"acceptance", p.acceptance}});
  }
  write_file(dir / "scan.csv", csv.str());
  std::vector<std::string> outputs{"scan.csv"};

  std::cout << "delta     size    p_span_1        p_span_2        acceptance\n";
  for (const auto& p : points) {
    char line[160];
    std::snprintf(line, sizeof line, "%-9.4g %-7s %.4f+-%.4f %.4f+-%.4f %.3f\n", p.delta,
                  (std::to_string(p.l1) + "x" + std::to_string(p.l2)).c_str(), p.p1.value, p.p1.stderr_, p.p2.value,
                  p.p2.stderr_, p.acceptance);
    std::cout << line;
  }

  json results;
  results["points"] = rows;
  int status = 0;
  double marker = NAN;
  const auto curves = scan_curves(cfg, points);
  if (!a.no_delta_c) {
    try {
      const auto est = estimate_delta_c(curves);
      marker = est.delta_c;
      results["delta_c"] = est.delta_c;
      results["delta_c_error"] = est.error;
      results["crossings"] = est.crossings;
      std::cout << "delta_c = " << fmt(est.delta_c, 4) << " +- " << fmt(est.error, 2) << " (" << est.crossings.size()
                << " pairwise crossings)\n";
    } catch (const std::runtime_error& e) {
      std::cerr << "delta_c: " << e.what() << "\n";
      results["delta_c"] = nullptr;
      status = 1;
    }
  } else {
    std::cout << "delta_c: not estimated (--no-delta-c)\n";
  }

  if (!a.no_svg) {
    std::vector<Series> series;
    const std::size_t nd = cfg.deltas.size();
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      Series s{curves[si].label + " cells", curves[si].delta, curves[si].p, {}};
      for (std::size_t di = 0; di < nd; ++di) {
        const auto& p = points[si * nd + di];
        s.err.push_back(0.5 * (p.p1.stderr_ + p.p2.stderr_));
      }
      series.push_back(std::move(s));
    }
    PlotSpec spec;
    spec.title = "Spanning probability of the encoded graph";
    spec.x_label = "delta";
    spec.y_label = "p_span (mean of both directions)";
    spec.marker_x = marker;
    spec.comments = {"ffgs scan", "version: " + std::string(version_string()),
                     "seed: " + std::to_string(a.common.seed), "config: " + xml_safe(rc.echo(true).dump()),
                     "duration_seconds: " + fmt(clock.seconds(), 4)};
    write_file(dir / "scan.svg", svg_line_plot(series, spec));
    outputs.push_back("scan.svg");
  }
  write_manifest(dir, "scan", rc.echo(false), a.common.seed, clock.seconds(), outputs, results);
  return status;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  Common common;
  double delta = 0.5;
  std::string size = "10x10";
  std::string boundary = "open";
  int count = 1;
  int burn_in = 2000;
  int spacing = 100;
  std::string format = "both";
  bool no_loops = false;
};

void add_sample_options(RunConfig& rc, SampleArgs& a) {
  rc.add_common(a.common.seed, a.common.out, a.common.threads);
  rc.add("delta", a.delta, "Deformation parameter in (0, 1]");
  rc.add("size", a.size, "Lattice size in unit cells, L1xL2");
  rc.add("boundary", a.boundary, "open or periodic");
  rc.add("count", a.count, "Number of snapshots");
  rc.add("burn-in", a.burn_in, "Sweeps before the first snapshot");
  rc.add("spacing", a.spacing, "Sweeps between snapshots");
  rc.add("format", a.format, "graphml, dot or both");
  rc.add_flag("no-loops", a.no_loops, "Drop the 2^L factor from the weights");
}

struct SnapshotStats {
  int domains = 0;
  std::size_t edges = 0;
  int max_domain = 0;
  double largest_component = 0.0;  // fraction of domains
  double lattice_overlap = 0.0;    // fraction of lattice bonds carried by an encoded edge
  bool cross1 = false, cross2 = false;
};

SnapshotStats snapshot_stats(const StarLattice& lat, const DomainDecomposition& d, const EncodedGraph& eg) {
  SnapshotStats s;
  s.domains = d.num_domains();
  s.edges = eg.graph.num_edges();
  s.max_domain = domain_stats(d).max_size;
  const auto comps = eg.graph.components();
  s.largest_component =
      comps.empty() ? 0.0 : static_cast<double>(*std::max_element(comps.begin(), comps.end())) / s.domains;
  int kept = 0;
  for (const auto& [u, v] : lat.edges()) {
    const int a = d.domain[static_cast<std::size_t>(u)], b = d.domain[static_cast<std::size_t>(v)];
    kept += a != b && eg.graph.has_edge(a, b);
  }
  s.lattice_overlap = lat.edges().empty() ? 0.0 : static_cast<double>(kept) / static_cast<double>(lat.edges().size());
  if (lat.boundary() == Boundary::open) {
    s.cross1 = has_crossing_path(eg, lat, 1);
    s.cross2 = has_crossing_path(eg, lat, 2);
  }
  return s;
}

int run_sample_command(const SampleArgs& a, const RunConfig& rc) {
  const Stopwatch clock;
  require(a.delta > 0.0 && a.delta <= 1.0, "delta must lie in (0, 1]");
  const auto size = parse_size(a.size);
  require(size[0] >= 1 && size[1] >= 1, "lattice size must be positive");
  require(a.boundary == "open" || a.boundary == "periodic", "boundary must be open or periodic");
  require(a.count >= 1, "count must be at least 1");
  require(a.burn_in >= 0 && a.spacing >= 1, "sweep counts must be positive");
  require(a.format == "graphml" || a.format == "dot" || a.format == "both", "format must be graphml, dot or both");
  const auto dir = prepare_out_dir(a.common.out);

  const bool open = a.boundary == "open";
  const auto lat = build_star_lattice(size[0], size[1], open ? Boundary::open : Boundary::periodic);
  ChainState chain(lat, a.delta, derive_seed(a.common.seed, 0), !a.no_loops);
  const std::string config = xml_safe(rc.echo(true).dump());

  std::ostringstream csv;
  csv << csv_preamble("sample", rc.echo(true), a.common.seed);
  csv << "index,domains,edges,max_domain,largest_component,lattice_overlap,cross_dim1,cross_dim2\n";
  std::vector<std::string> outputs;
  json snaps = json::array();
  for (int i = 0; i < a.count; ++i) {
    const int sweeps = i == 0 ? a.burn_in : a.spacing;
    for (int s = 0; s < sweeps; ++s) chain.sweep();
    const auto d = decompose_domains(lat, chain.config());
    const auto eg = encoded_graph(lat, d);
    const auto st = snapshot_stats(lat, d, eg);

    char stem[32];
    std::snprintf(stem, sizeof stem, "sample_%03d", i);
    const std::vector<std::pair<std::string, std::string>> comments{
        {"ffgs", "sample " + std::to_string(i)},
        {"version", version_string()},
        {"seed", std::to_string(a.common.seed)},
        {"config", config},
        {"duration_seconds", fmt(clock.seconds(), 4)}};
    if (a.format != "dot") {
      std::ostringstream os;
      write_graphml(os, eg.graph, stem, comments);
      write_file(dir / (std::string(stem) + ".graphml"), os.str());
      outputs.push_back(std::string(stem) + ".graphml");
    }
    if (a.format != "graphml") {
      std::ostringstream os;
      write_dot(os, eg.graph, "G", comments);
      write_file(dir / (std::string(stem) + ".dot"), os.str());
      outputs.push_back(std::string(stem) + ".dot");
    }
    const std::string c1 = open ? std::to_string(st.cross1) : "NA", c2 = open ? std::to_string(st.cross2) : "NA";
    csv << i << ',' << st.domains << ',' << st.edges << ',' << st.max_domain << ',' << fmt(st.largest_component) << ','
        << fmt(st.lattice_overlap) << ',' << c1 << ',' << c2 << '\n';
    snaps.push_back({{"index", i},
                     {"domains", st.domains},
                     {"edges", st.edges},
                     {"max_domain", st.max_domain},
                     {"largest_component", st.largest_component},
                     {"lattice_overlap", st.lattice_overlap}});
    std::cout << stem << ": " << st.domains << " domains, " << st.edges << " edges, largest component "
              << fmt(100.0 * st.largest_component, 3) << "% of domains, lattice overlap "
              << fmt(100.0 * st.lattice_overlap, 3) << "%\n";
  }
  write_file(dir / "sample_stats.csv", csv.str());
  outputs.push_back("sample_stats.csv");
  write_manifest(dir, "sample", rc.echo(false), a.common.seed, clock.seconds(), outputs, {{"snapshots", snaps}});
  return 0;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  Common common;
  int n = 8;
  std::vector<int> bodies{2, 3};
  std::vector<double> deltas = grid(0.1, 1.0, 0.1);
  int levels = 3;
  int step = 2;
};

void add_spectrum_options(RunConfig& rc, SpectrumArgs& a) {
  rc.add_common(a.common.seed, a.common.out, a.common.threads);
  rc.add("n", a.n, "Ring length (even)");
  rc.add("bodies", a.bodies, "Hamiltonians to solve: 2 and/or 3")->delimiter(',');
  rc.add("deltas", a.deltas, "Deformation grid in (0, 1]")->delimiter(',');
  rc.add("levels", a.levels, "Levels per symmetry sector (0 = all, dense)");
  rc.add("step", a.step, "Translation step of the symmetry group (1 or 2)");
}

int run_spectrum_command(const SpectrumArgs& a, const RunConfig& rc) {
  const Stopwatch clock;
  check_deltas(a.deltas);
  require(a.n >= 4 && a.n % 2 == 0, "n must be even and at least 4");
  require(a.n <= 14, "n above 14 is beyond the exact solver");
  require(!a.bodies.empty(), "no Hamiltonian selected");
  for (int b : a.bodies) require(b == 2 || b == 3, "body must be 2 or 3");
  require(a.levels >= 0, "levels must be non-negative");
  require(a.step == 1 || a.step == 2, "step must be 1 or 2");
  const auto dir = prepare_out_dir(a.common.out);

  std::ostringstream csv;
  csv << csv_preamble("spectrum", rc.echo(true), a.common.seed);
  csv << "delta,N,body,k_index,sector,level_index,energy\n";
  json summary = json::array();
  int status = 0;
  std::cout << "body  delta    E0           E1           gap          ground sector\n";
  for (int body : a.bodies) {
    for (double delta : a.deltas) {
      SpectrumOptions opt;
      opt.levels = a.levels;
      opt.step = a.step;
      opt.threads = a.common.worker_count();
      std::vector<SectorSpectrum> spectra;
      try {
        spectra = sector_spectra(build_chain(delta, a.n, body), opt);
      } catch (const ConvergenceError& e) {
        std::cerr << "FAIL body " << body << " delta " << fmt(delta) << ": " << e.what() << "\n";
        status = 1;
        continue;
      }
      const SectorSpectrum* ground = nullptr;
      for (const auto& s : spectra) {
        for (std::size_t l = 0; l < s.values.size(); ++l) {
          csv << fmt(delta) << ',' << a.n << ',' << body << ',' << s.k_index << ',' << z2_name(s.sector) << ',' << l
              << ',' << fmt(s.values[l]) << '\n';
        }
        if (!s.values.empty() && (!ground || s.values[0] < ground->values[0])) ground = &s;
      }
      const auto merged = merged_levels(spectra);
      const double e0 = merged.at(0), e1 = merged.size() > 1 ? merged[1] : NAN;
      // Frustration freeness: zero ground energy in the fully symmetric sector.
      const bool ok = std::abs(e0) < 1e-8 && ground->k_index == 0 && ground->sector == Z2Sector::trivial;
      if (!ok) status = 1;
      char line[160];
      std::snprintf(line, sizeof line, "%-5d %-8.4g %-12.4e %-12.6g %-12.6g k=%d %s%s\n", body, delta, e0, e1, e1 - e0,
                    ground->k_index, z2_name(ground->sector), ok ? "" : "  FAIL");
      std::cout << line;
      summary.push_back({{"body", body},
                         {"delta", delta},
                         {"e0", e0},
                         {"e1", e1},
                         {"ground_k_index", ground->k_index},
                         {"ground_sector", z2_name(ground->sector)},
                         {"check", ok}});
    }
  }
  write_file(dir / "spectrum.csv", csv.str());
  write_manifest(dir, "spectrum", rc.echo(false), a.common.seed, clock.seconds(), {"spectrum.csv"},
                 {{"summary", summary}});
  return status;
}

// ---------------------------------------------------------------- fidelity

struct FidelityArgs {
  Common common;
  std::vector<int> ns{4, 6, 8, 10};
  std::vector<double> deltas = grid(0.2, 1.0, 0.1);
  double tol = 1e-10;
};

void add_fidelity_options(RunConfig& rc, FidelityArgs& a) {
  rc.add_common(a.common.seed, a.common.out, a.common.threads);
  rc.add("ns", a.ns, "Ring lengths (even)")->delimiter(',');
  rc.add("deltas", a.deltas, "Deformation grid in (0, 1]")->delimiter(',');
  rc.add("tol", a.tol, "Tolerance on |eps_formula - eps_contracted|");
}

int run_fidelity_command(const FidelityArgs& a, const RunConfig& rc) {
  const Stopwatch clock;
  check_deltas(a.deltas);
  require(!a.ns.empty(), "no ring lengths given");
  for (int n : a.ns) require(n >= 4 && n % 2 == 0 && n <= 200, "ring lengths must be even, 4 <= N <= 200");
  require(a.tol > 0.0, "tol must be positive");
  const auto dir = prepare_out_dir(a.common.out);

  // eps_contracted comes from the transfer-matrix contraction per site; the
  // finite ring overlap is listed alongside.
  std::ostringstream csv;
  csv << csv_preamble("fidelity", rc.echo(true), a.common.seed);
  csv << "delta,N,eps_formula,eps_contracted,difference,fidelity_ring,fidelity_formula,ring_relative_difference\n";
  double worst = 0.0;
  std::cout << "delta   N    eps_formula      eps_contracted   |difference|  ring F/formula - 1\n";
  for (double delta : a.deltas) {
    for (int n : a.ns) {
      const auto f = fidelity_check(delta, n);
      const double ef = 1.0 - f.per_site_formula, ec = 1.0 - f.per_site_contracted;
      const double diff = std::abs(ef - ec), ring = f.contracted / f.formula - 1.0;
      worst = std::max(worst, diff);
      csv << fmt(delta) << ',' << n << ',' << fmt(ef, 16) << ',' << fmt(ec, 16) << ',' << fmt(diff, 4) << ','
          << fmt(f.contracted, 16) << ',' << fmt(f.formula, 16) << ',' << fmt(ring, 6) << '\n';
      char line[160];
      std::snprintf(line, sizeof line, "%-7.3g %-4d %-16.12f %-16.12f %-13.3e %.3e\n", delta, n, ef, ec, diff, ring);
      std::cout << line;
    }
  }
  std::vector<double> small{0.02, 0.05, 0.1, 0.15, 0.2}, dev;
  for (double d : small) dev.push_back(std::abs(1.0 - contracted_fidelity_per_site(d) - 0.5 * d * d));
  const double slope = loglog_slope(small, dev);
  const bool ok = worst < a.tol && slope >= 3.5;
  std::cout << "max |difference| = " << fmt(worst, 3) << " (tol " << fmt(a.tol, 3) << ")\n";
  std::cout << "log-log slope of eps - delta^2/2 on delta <= 0.2: " << fmt(slope, 4) << "\n";
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  write_file(dir / "fidelity.csv", csv.str());
  write_manifest(dir, "fidelity", rc.echo(false), a.common.seed, clock.seconds(), {"fidelity.csv"},
                 {{"max_difference", worst}, {"quartic_slope", slope}, {"pass", ok}});
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- verify

int run_verify_command(const Common& c, const RunConfig& rc) {
  const Stopwatch clock;
  const auto dir = prepare_out_dir(c.out);
  std::ostringstream report;
  report << "# ffgs verify\n# version: " << version_string() << "\n# seed: " << c.seed << "\n";
  int failed = 0, index = 0;
  json results = json::array();
  for (const auto& check : verification_checks(c.seed, c.worker_count())) {
    CheckResult r;
    try {
      r = check.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.ok;
    char line[320];
    std::snprintf(line, sizeof line, "[%2d] %s  %s  (%s)\n", ++index, r.ok ? "PASS" : "FAIL", check.name.c_str(),
                  r.detail.c_str());
    std::cout << line << std::flush;
    report << line;
    results.push_back({{"check", check.name}, {"pass", r.ok}, {"detail", r.detail}});
  }
  const std::string tail = std::to_string(index - failed) + "/" + std::to_string(index) + " checks passed\n";
  std::cout << tail;
  report << tail << "# duration_seconds: " << fmt(clock.seconds(), 4) << "\n";
  write_file(dir / "verify.txt", report.str());
  write_manifest(dir, "verify", rc.echo(false), c.seed, clock.seconds(), {"verify.txt"}, {{"checks", results}});
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace ffgs::cli

int main(int argc, char** argv) {
  using namespace ffgs::cli;
  CLI::App app{"Deformed AKLT states, percolation scans and chain spectra"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Spanning-probability scan over delta and lattice size");
  RunConfig scan_rc(scan_cmd);
  add_scan_options(scan_rc, scan);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Export encoded-graph snapshots as GraphML / DOT");
  RunConfig sample_rc(sample_cmd);
  add_sample_options(sample_rc, sample);

  SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Sector-resolved spectra of the deformed chain");
  RunConfig spectrum_rc(spectrum_cmd);
  add_spectrum_options(spectrum_rc, spectrum);

  FidelityArgs fidelity;
  auto* fidelity_cmd = app.add_subcommand("fidelity", "Graph-state fidelity table");
  RunConfig fidelity_rc(fidelity_cmd);
  add_fidelity_options(fidelity_rc, fidelity);

  Common verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle and invariant checks");
  RunConfig verify_rc(verify_cmd);
  verify_rc.add_common(verify.seed, verify.out, verify.threads);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*scan_cmd) {
      scan_rc.merge_json();
      return run_scan_command(scan, scan_rc);
    }
    if (*sample_cmd) {
      sample_rc.merge_json();
      return run_sample_command(sample, sample_rc);
    }
    if (*spectrum_cmd) {
      spectrum_rc.merge_json();
      return run_spectrum_command(spectrum, spectrum_rc);
    }
    if (*fidelity_cmd) {
      fidelity_rc.merge_json();
      return run_fidelity_command(fidelity, fidelity_rc);
    }
    verify_rc.merge_json();
    return run_verify_command(verify, verify_rc);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
