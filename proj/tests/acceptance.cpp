// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ssm/algorithms.hpp"
#include "ssm/instances.hpp"
#include "ssm/rs.hpp"
#include "testing.hpp"

using namespace ssm;

namespace {

const double kSqrt2 = std::sqrt(2.0);

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return v.size() < 2 ? 0.0 : std::sqrt(s / static_cast<double>(v.size() - 1));
}

// --- 1 ----------------------------------------------------------------------

Verdict analytic_curves() {
  Verdict v;
  const double target = 2.0 - kSqrt2;
  const auto b1 = best_setting(1);
  const auto b2 = best_setting(2);
  const auto b3 = best_setting(3);
  v.require(std::abs(b1.factor - target) <= 1e-10 && std::abs(b1.p - (kSqrt2 - 1.0)) <= 1e-10,
            "d=1 maximum");
  v.require(std::abs(b2.factor - target) <= 1e-10 && std::abs(b2.p - (2.0 * kSqrt2 - 2.0)) <= 1e-10,
            "d=2 maximum");
  v.require(std::abs(b3.factor - 7.0 / 12.0) <= 1e-10 && b3.p == 1.0, "d=3 maximum");
  // The closed-form maximiser must dominate a fine grid for every d.
  for (std::uint32_t d = 1; d <= 5; ++d) {
    const auto best = best_setting(d);
    double grid_max = 0.0;
    for (int i = 1; i <= 100000; ++i) grid_max = std::max(grid_max, predicted_factor(i / 1e5, d));
    v.require(grid_max <= best.factor + 1e-12 && best.factor - grid_max < 1e-8,
              "grid agreement at d=" + std::to_string(d));
    if (d >= 3) v.require(best.factor < target - 1e-6, "d>=3 stays below the d<=2 optimum");
  }
  const double f3 = predicted_factor(1.0, 3);
  const double f4 = predicted_factor(1.0, 4);
  const double f5 = predicted_factor(1.0, 5);
  v.require(f3 > f4 && f4 > f5, "ordering d3 > d4 > d5 at p=1");
  v.note("max d1 " + fmt("%.12f", b1.factor) + ", d2 " + fmt("%.12f", b2.factor) + ", d3 " +
         fmt("%.12f", b3.factor) + "; p=1: " + fmt("%.4f", f3) + " > " + fmt("%.4f", f4) + " > " +
         fmt("%.4f", f5));
  return v;
}

// --- 2 ----------------------------------------------------------------------

Verdict tightness() {
  Verdict v;
  const std::uint32_t n = 10000;
  const double p = kSqrt2 - 1.0;
  const auto h = gen_hard_instance(n);
  std::vector<double> q, lo, hi, ratio;
  bool monotone = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = open_stream(h.source());
    const auto r = two_pass(s, MetaParams{p, 1, seed}, h.mu());
    const auto ex = check_index_extremes(h, r.second_pass);
    monotone = monotone && wings_monotone(h, r.second_pass);
    q.push_back(static_cast<double>(r.report.augmentations) / static_cast<double>(h.mu()));
    lo.push_back(ex.i_min ? static_cast<double>(*ex.i_min) / n : 0.0);
    hi.push_back(ex.i_max ? static_cast<double>(*ex.i_max) / n : 0.0);
    ratio.push_back(r.report.ratio());
  }
  const double mq = mean(q);
  const double mlo = mean(lo);
  const double mhi = mean(hi);
  v.require(mq >= 0.076 && mq <= 0.096, "mean |Q|/mu in [0.076, 0.096]");
  v.require(mlo >= 0.26 && mlo <= 0.32, "mean i_min/N in [0.26, 0.32]");
  v.require(mhi >= 0.68 && mhi <= 0.74, "mean i_max/N in [0.68, 0.74]");
  v.require(monotone, "monotone wing structure");
  v.note("mean |Q|/mu " + fmt("%.5f", mq) + " (target 0.08579), i_min/N " + fmt("%.4f", mlo) +
         ", i_max/N " + fmt("%.4f", mhi) + ", final/mu " + fmt("%.4f", mean(ratio)));
  return v;
}

// --- 3 ----------------------------------------------------------------------

Verdict semi_matching_expectation() {
  Verdict v;
  const Vertex mu = 5000;
  const auto inst = gen_random_planted(mu, 3.0 / mu, 2024);
  struct Setting {
    std::uint32_t d;
    double p;
  };
  for (const Setting st : {Setting{1, 0.5}, Setting{2, 0.8}, Setting{3, 1.0}}) {
    std::vector<double> sizes;
    for (std::uint64_t r = 0; r < 200; ++r) {
      auto s = open_stream(inst.graph);
      auto view = filtered_view(s, sample_side(mu, mu, Side::A, st.p, derive_seed(st.d, r)));
      sizes.push_back(static_cast<double>(greedy_d(view, Side::A, st.d).size()));
    }
    const double m = mean(sizes);
    const double sd = stddev(sizes);
    const double se = sd / std::sqrt(static_cast<double>(sizes.size()));
    const double bound = st.d / (st.d + st.p) * st.p * mu;
    const std::string tag = "(d=" + std::to_string(st.d) + ", p=" + fmt("%.1f", st.p) + ")";
    v.require(m >= bound - 3.0 * se, "mean at " + tag);
    v.require(sd <= 6.0 * std::sqrt(st.d * mu * std::log(static_cast<double>(mu))),
              "spread at " + tag);
    v.note(tag + " mean " + fmt("%.1f", m) + " >= " + fmt("%.1f", bound) + ", sd " +
           fmt("%.1f", sd));
  }
  return v;
}

// --- 4 ----------------------------------------------------------------------

Verdict oracle_equivalence() {
  Verdict v;
  Rng rng(404);
  int oracle_bad = 0;
  int output_bad = 0;
  std::uint64_t edges = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const BipartiteGraph g = testing::small_random_graph(rng, 8);
    edges += g.edge_count();
    if (maximum_matching(g).size() != testing::brute_force_mu(g)) ++oracle_bad;
    const MetaParams params{0.05 + 0.95 * rng.uniform(), static_cast<std::uint32_t>(1 + rng.below(3)),
                            rng.next()};
    const auto r = two_pass(g, params);
    if (!validate_matching(g, r.output).ok || r.output.size() < r.first_pass.size()) ++output_bad;
  }
  v.require(oracle_bad == 0, std::to_string(oracle_bad) + " oracle mismatches");
  v.require(output_bad == 0, std::to_string(output_bad) + " bad two-pass outputs");
  v.note("200 graphs with " + std::to_string(edges) +
         " edges in total, oracle = brute force, outputs valid and >= greedy");
  return v;
}

// --- 5 ----------------------------------------------------------------------

Verdict greedy_guarantees() {
  Verdict v;
  Rng rng(505);
  int greedy_bad = 0;
  int q_bad = 0;
  int size_bad = 0;
  std::uint64_t total_mu = 0;
  std::uint64_t total_aug = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vertex n_a = static_cast<Vertex>(1 + rng.below(60));
    const Vertex n_b = static_cast<Vertex>(1 + rng.below(60));
    const BipartiteGraph g = gen_random_bipartite(n_a, n_b, 0.01 + 0.2 * rng.uniform(), rng.next());
    auto s = open_stream(g);
    const Matching m = greedy(s);
    const auto mu = maximum_matching(g).size();
    total_mu += mu;
    if (!is_maximal(g, m) || 2 * m.size() < mu || !validate_matching(g, m).ok) ++greedy_bad;

    const MetaParams params{0.05 + 0.95 * rng.uniform(), static_cast<std::uint32_t>(1 + rng.below(4)),
                            rng.next()};
    const auto r = two_pass(g, params);
    const auto& rep = r.report;
    total_aug += rep.augmentations;
    if (params.d * rep.augmentations + rep.sampled_size < rep.left_wings + rep.right_wings) ++q_bad;
    if (rep.final_size != rep.first_pass_size + rep.augmentations ||
        r.output.size() != rep.final_size || !validate_matching(g, r.output).ok) {
      ++size_bad;
    }
  }
  v.require(greedy_bad == 0, std::to_string(greedy_bad) + " greedy outputs not maximal or < mu/2");
  v.require(q_bad == 0, std::to_string(q_bad) + " runs below the |Q| bound");
  v.require(size_bad == 0, std::to_string(size_bad) + " runs with final != |M| + |Q|");
  v.note("1000 graphs and orders, total mu " + std::to_string(total_mu) + ", total |Q| " +
         std::to_string(total_aug));
  return v;
}

// --- 6 ----------------------------------------------------------------------

Verdict rs_certification() {
  Verdict v;
  RSInstance inst = build_rs_instance(ColouringParams::make(3, 1));
  inst.certificate = certify_rs(inst);
  const auto& c = *inst.certificate;
  v.require(c.shared_edges == 0, "edge-disjointness");
  v.require(c.induced_violations == 0, "induced property");
  v.require(c.cross_violations == 0 && c.colour_conflicts == 0, "no cross-inducement");
  v.require(c.sizes_mirror, "|M_I'| = |M_I|");
  v.require(c.invalid_unions.empty(), "M_I + M_I' are matchings");
  v.require(c.pairs_checked == inst.matching_count() * (inst.matching_count() - 1),
            "every ordered pair checked");
  v.note(std::to_string(inst.matching_count()) + " matchings of size " +
         std::to_string(inst.pairs[0].forward.size()) + " on " + std::to_string(inst.side) +
         " + " + std::to_string(inst.side) + " vertices, " + std::to_string(c.pairs_checked) +
         " ordered pairs");
  return v;
}

// --- 7 ----------------------------------------------------------------------

Verdict lambda_plus_recovery() {
  Verdict v;
  RSInstance inst = build_rs_instance(ColouringParams::make(3, 1));
  inst.certificate = certify_rs(inst);
  int recovered = 0;
  int maximal = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CommInstance c = gen_lambda(inst, {true, seed, seed % inst.pairs.size(), std::nullopt});
    Matching overlay(c.graph.n_a(), c.graph.n_b());
    for (const Edge e : c.overlay) overlay.add(e);
    auto s = open_stream(c.graph);
    if (greedy(s) == overlay) ++recovered;
    if (is_maximal(c.graph, overlay)) ++maximal;
  }
  v.require(recovered == 10, "greedy returned P on " + std::to_string(recovered) + "/10");
  v.require(maximal == 10, "P maximal on " + std::to_string(maximal) + "/10");
  v.note("10 streams, greedy = P and P maximal on all");
  return v;
}

// --- 8 ----------------------------------------------------------------------

Verdict space_contract() {
  Verdict v;
  std::vector<double> hard_peaks;
  const auto check = [&v](const std::string& name, EdgeStream& s, std::uint64_t mu) {
    const auto r = two_pass(s, MetaParams{kSqrt2 - 1.0, 1, 8}, mu).report;
    const std::uint64_t vertices = std::uint64_t{s.n_a()} + s.n_b();
    v.require(r.peak_space <= 4 * vertices, name + " peak within 4(n_a+n_b)");
    v.require(r.passes == 2 && s.passes_used() == 2, name + " uses two passes");
    v.note(name + ": edges/(n_a+n_b) " +
           fmt("%.1f", static_cast<double>(s.edge_count()) / static_cast<double>(vertices)) +
           ", peak/(n_a+n_b) " +
           fmt("%.3f", static_cast<double>(r.peak_space) / static_cast<double>(vertices)));
    return static_cast<double>(r.peak_space) / static_cast<double>(vertices);
  };
  for (const std::uint32_t n : {1000u, 10000u}) {
    const auto h = gen_hard_instance(n);
    auto s = open_stream(h.source());
    hard_peaks.push_back(check("hard N=" + std::to_string(n), s, h.mu()));
  }
  // Ten times the edges per vertex must not change the space per vertex.
  v.require(std::abs(hard_peaks[0] - hard_peaks[1]) < 0.05, "peak per vertex flat across N");
  RSInstance inst = build_rs_instance(ColouringParams::make(3, 1));
  inst.certificate = certify_rs(inst);
  for (const bool plus : {false, true}) {
    const CommInstance c = gen_lambda(inst, {plus, 3, 0, std::nullopt});
    const auto mu = maximum_matching(c.graph).size();
    auto s = open_stream(c.graph);
    check(plus ? "lambda+" : "lambda", s, mu);
  }
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "analytic factor curves", 1.0, analytic_curves},
      {2, "tightness on the worst-case instance", 30.0, tightness},
      {3, "semi-matching size in expectation", 60.0, semi_matching_expectation},
      {4, "oracle equivalence on small graphs", 10.0, oracle_equivalence},
      {5, "greedy and augmentation guarantees", 0.0, greedy_guarantees},
      {6, "RS certification", 10.0, rs_certification},
      {7, "lambda+ greedy recovery", 0.0, lambda_plus_recovery},
      {8, "semi-streaming space contract", 0.0, space_contract},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      v.pass = false;
      v.note("failed: over the " + fmt("%.0f", c.budget_s) + " s budget");
    }
    failures += v.pass ? 0 : 1;
    std::printf("criterion %d %s: %s [%.2f s] %s\n", c.id, c.name, v.pass ? "PASS" : "FAIL", secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
