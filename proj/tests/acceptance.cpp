// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "edgeplace/bounds.hpp"
#include "edgeplace/simulator.hpp"
#include "edgeplace/solvers.hpp"
#include "oracles.hpp"

using namespace edgeplace;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Queue recursion on 1e5 random triples.
Outcome queue_exactness() {
  const auto start = Clock::now();
  std::mt19937_64 gen(101);
  std::size_t exact_bad = 0, float_bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    // Integers and multiples of 2^-10 are exact in binary floating point, so the
    // integer recursion on numerators gives the exact answer.
    const bool dyadic = i % 2 == 1;
    const std::int64_t scale = dyadic ? 1024 : 1;
    std::uniform_int_distribution<std::int64_t> n(0, 1'000'000), pos(1, 1'000'000);
    const std::int64_t q = n(gen), e = n(gen), a = pos(gen);
    const std::int64_t expect = std::max<std::int64_t>(q + e - a, 0);
    const double s = static_cast<double>(scale);
    if (queue_update(double(q) / s, double(e) / s, double(a) / s) != double(expect) / s)
      ++exact_bad;

    std::uniform_real_distribution<double> r(0.0, 1e4);
    const double fq = r(gen), fe = r(gen), fa = r(gen) + 1e-3;
    const long double ref = std::max<long double>(
        static_cast<long double>(fq) + fe - static_cast<long double>(fa), 0.0L);
    const double err = std::abs(static_cast<double>(queue_update(fq, fe, fa) - ref));
    const double tol = 1e-12 * std::max(1.0, static_cast<double>(ref));
    worst = std::max(worst, err);
    if (err > tol) ++float_bad;
  }
  const double t = seconds_since(start);
  return {exact_bad == 0 && float_bad == 0 && t < 1.0,
          fmt::format("exact mismatches {}, float mismatches {}, worst float error {:.3g}, {:.3f} s",
                      exact_bad, float_bad, worst, t)};
}

// 2. Drift bound on every slot of every policy.
Outcome lemma1_all_policies() {
  const auto start = Clock::now();
  std::size_t slots = 0, bad = 0;
  std::string runs;
  const auto check = [&](const Scenario& s) {
    const auto series = run(s);
    for (const auto& r : series.records) {
      ++slots;
      if (!lemma1_pathwise_check(r.queue_before, r.queue_after, r.migration_cost,
                                 r.sum_latency_s, series.params))
        ++bad;
    }
  };
  for (auto kind : {PolicyKind::markov, PolicyKind::best_response, PolicyKind::am,
                    PolicyKind::nm, PolicyKind::gm, PolicyKind::grk, PolicyKind::gk,
                    PolicyKind::fmec}) {
    Scenario s = Scenario::desk_preset();
    s.policy = {kind, policy_needs_k(kind) ? std::size_t{10} : std::size_t{0}};
    check(s);
  }
  // Exhaustive search cannot enumerate 9^30 profiles; it runs on a 2x2 grid with 6 users.
  Scenario tiny = Scenario::desk_preset();
  tiny.map.width_cells = tiny.map.height_cells = 2;
  tiny.users = 6;
  tiny.e_avg = 202.5 * 6.0 / 315.0;
  tiny.policy = {PolicyKind::brute_force, 0};
  check(tiny);
  const double t = seconds_since(start);
  return {bad == 0 && t < 30.0,
          fmt::format("{} slots over 9 policies, {} violations, {:.1f} s", slots, bad, t)};
}

// 3. Best response against brute force.
Outcome best_response_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(303);
  std::size_t not_nash = 0, too_many_moves = 0, ratio_bad = 0;
  double worst_ratio = 1.0, tightest = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + gen() % 5, m = 1 + gen() % 3;
    // Cheap communication makes congestion matter, so equilibria are not always optimal.
    const auto in = oracle::random_instance(gen, n, m, {.comm_hi = 0.3, .q_hi = 0.3});
    const auto problem = oracle::to_problem(in);
    PlacementProfile init(n, 0);
    for (auto& x : init.assignment) x = gen() % m;
    const auto [r, cert] = best_response_search(problem, init);
    if (!cert.is_nash || !oracle::is_nash(in, r.profile.assignment)) ++not_nash;
    if (cert.total_moves > best_response_move_bound(m, n)) ++too_many_moves;
    // Both sides in the oracle's arithmetic; the slack below only absorbs rounding.
    const double ratio =
        oracle::objective(in, r.profile.assignment) / oracle::minimum(in).value;
    const double bound = approximation_ratio_bound(problem, CostExtremes::of(problem));
    if (!(ratio <= bound * (1 + 1e-12))) ++ratio_bad;
    worst_ratio = std::max(worst_ratio, ratio);
    tightest = std::max(tightest, ratio / bound);
  }
  const double t = seconds_since(start);
  return {not_nash == 0 && too_many_moves == 0 && ratio_bad == 0 && t < 10.0,
          fmt::format("200 instances: non-Nash {}, move-bound breaches {}, ratio-bound breaches "
                      "{}, worst ratio {:.4f}, max ratio/bound {:.4f}, {:.2f} s",
                      not_nash, too_many_moves, ratio_bad, worst_ratio, tightest, t)};
}

// 4. Markov chain: exact stationary gap and detailed balance.
Outcome markov_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(404);
  const std::vector<std::pair<std::size_t, std::size_t>> sizes{
      {2, 2}, {3, 3}, {4, 3}, {5, 4}, {6, 4}, {5, 5}, {12, 2}};
  std::size_t instances = 0, gap_bad = 0, balance_bad = 0, pairs = 0;
  double worst_gap_fraction = 0.0, worst_balance = 0.0;
  for (double beta : {1.0, 5.0}) {
    for (auto [n, m] : sizes) {
      for (int rep = 0; rep < 2; ++rep) {
        ++instances;
        const auto in = oracle::random_instance(gen, n, m);
        const auto problem = oracle::to_problem(in);
        const auto pi = oracle::gibbs(in, beta);

        // Exact expectation by enumeration, both from the library and the oracle.
        long double ref_expected = 0;
        std::size_t idx = 0;
        oracle::for_each_profile(n, m, [&](const std::vector<std::size_t>& c) {
          ref_expected += pi[idx++] * oracle::objective(in, c);
        });
        const double optimum = oracle::minimum(in).value;
        const double expected = stationary_expected_objective(problem, beta);
        const double gap = expected - optimum;
        const double bound = markov_gap_bound(beta, m, n);
        const double slack = 1e-9 * std::max(1.0, optimum);
        if (gap < -slack || gap > bound + slack ||
            std::abs(expected - static_cast<double>(ref_expected)) > slack)
          ++gap_bad;
        worst_gap_fraction = std::max(worst_gap_fraction, gap / bound);

        const auto index = [&](const PlacementProfile& c) {
          std::size_t k = 0;
          for (auto x : c.assignment) k = k * m + x;
          return k;
        };
        for (std::size_t a = 0; a < pi.size(); ++a) {
          const PlacementProfile c = profile_at(a, n, m);
          for (UserId k = 0; k < n; ++k) {
            const auto out = markov_transition_distribution(problem, c, k, beta);
            PlacementProfile d = c;
            for (NodeId i = c[k] + 1; i < m; ++i) {
              d[k] = i;
              const auto back = markov_transition_distribution(problem, d, k, beta);
              const long double lhs = pi[a] * static_cast<long double>(out[i]);
              const long double rhs = pi[index(d)] * static_cast<long double>(back[c[k]]);
              const long double rel = std::abs(lhs - rhs) / std::max(lhs, rhs);
              ++pairs;
              if (std::max(lhs, rhs) > 0 && rel > 1e-9L) ++balance_bad;
              if (std::max(lhs, rhs) > 0)
                worst_balance = std::max(worst_balance, static_cast<double>(rel));
            }
          }
        }
      }
    }
  }
  const double t = seconds_since(start);
  return {gap_bad == 0 && balance_bad == 0 && t < 30.0,
          fmt::format("{} instances (M^N <= 4096, beta 1 and 5): gap breaches {}, worst gap/bound "
                      "{:.4f}; {} move pairs, balance breaches {}, worst rel {:.2e}; {:.1f} s",
                      instances, gap_bad, worst_gap_fraction, pairs, balance_bad, worst_balance,
                      t)};
}

// 5. Latency falls and backlog grows with V.
Outcome v_tradeoff() {
  const auto start = Clock::now();
  const std::vector<double> vs{10, 100, 1000, 5000};
  bool pass = true;
  std::string detail;
  for (auto kind : {PolicyKind::markov, PolicyKind::best_response}) {
    std::vector<double> lat(vs.size(), 0.0), queue(vs.size(), 0.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Scenario s = Scenario::desk_preset();
      s.policy = {kind, 0};
      s.seed = seed;
      const auto rows = sweep_v(s, vs);
      for (std::size_t i = 0; i < vs.size(); ++i) {
        lat[i] += rows[i].avg_latency_s / 5;
        queue[i] += rows[i].avg_queue / 5;
      }
    }
    for (std::size_t i = 1; i < vs.size(); ++i) {
      if (lat[i] > lat[i - 1] * 1.02) pass = false;
      if (queue[i] < queue[i - 1] * 0.98) pass = false;
    }
    detail += fmt::format("{}: latency {:.4g}/{:.4g}/{:.4g}/{:.4g} s, queue {:.4g}/{:.4g}/{:.4g}/{:.4g}; ",
                          to_string(kind), lat[0], lat[1], lat[2], lat[3], queue[0], queue[1],
                          queue[2], queue[3]);
  }
  const double t = seconds_since(start);
  return {pass && t < 300.0, detail + fmt::format("{:.1f} s", t)};
}

// 6. Long-run migration cost within 5% of the budget.
Outcome budget_compliance() {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (auto kind : {PolicyKind::markov, PolicyKind::best_response}) {
    Scenario s = Scenario::desk_preset();
    s.horizon = 2000;
    s.policy = {kind, 0};
    const auto series = run(s);
    const auto rep = queue_bound_check(series);
    const double avg = series.records.back().running_avg_migration_cost;
    if (!(avg <= 1.05 * s.e_avg) || !rep.budget_identity_holds) pass = false;
    detail += fmt::format("{}: avg E {:.4f} vs 1.05 E_avg {:.4f}, identity {}; ", to_string(kind),
                          avg, 1.05 * s.e_avg, rep.budget_identity_holds ? "holds" : "BROKEN");
  }
  const double t = seconds_since(start);
  return {pass && t < 300.0, detail + fmt::format("{:.1f} s", t)};
}

// 7. Online policies against always-nearest at V = 1000.
Outcome baseline_ordering() {
  Scenario s = Scenario::desk_preset();
  s.v = 1000;
  const auto latency = [&](PolicyKind kind) {
    Scenario t = s;
    t.policy = {kind, 0};
    return summarize(run(t)).avg_latency_s;
  };
  const double gm = latency(PolicyKind::gm);
  const double ca = latency(PolicyKind::markov);
  const double da = latency(PolicyKind::best_response);
  return {ca <= gm && da <= gm,
          fmt::format("GM {:.6f} s, CA {:.6f} s ({:+.2f}% improvement), DA {:.6f} s ({:+.2f}%)",
                      gm, ca, 100 * (gm - ca) / gm, da, 100 * (gm - da) / gm)};
}

// 8. Degenerate temperature and single-node instances.
Outcome markov_degenerate() {
  std::mt19937_64 gen(808);
  double worst = 0.0;
  bool single_ok = true;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + gen() % 6, m = 1 + gen() % 6;
    const auto in = oracle::random_instance(gen, n, m, {.v_hi = 100.0, .q_hi = 10.0});
    const auto problem = oracle::to_problem(in);
    const auto p =
        markov_transition_distribution(problem, PlacementProfile(in.prev), gen() % n, 0.0);
    for (double x : p) worst = std::max(worst, std::abs(x - 1.0 / static_cast<double>(m)));

    const auto one = oracle::to_problem(oracle::random_instance(gen, n, 1));
    const PlacementProfile zero(n, 0);
    single_ok = single_ok && brute_force_solve(one).profile == zero &&
                markov_search(one, MarkovConfig{0.1, 100, std::uint64_t(i)}).profile == zero &&
                best_response_search(one, zero).first.profile == zero;
  }
  return {worst <= 1e-12 && single_ok,
          fmt::format("beta = 0 max deviation from 1/M {:.2e}; M = 1 unique profile from every "
                      "solver: {}",
                      worst, single_ok ? "yes" : "NO")};
}

// 9. Byte-identical CSVs from two executions of each command.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "edgeplace_acceptance_det";
  fs::remove_all(root);
  const std::string bin = EDGEPLACE_BIN;
  const std::string desk = std::string(EDGEPLACE_CONFIG_DIR) + "/desk.json";
  const std::string small = std::string(EDGEPLACE_CONFIG_DIR) + "/oracle_small.json";
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "simulate --config " + desk + " --set policy=markov --set horizon=100"},
      {"sweep", "sweep --config " + desk + " --set horizon=100 --v 10,100,1000"},
      {"oracle-check", "oracle-check --config " + small + " --instances 30"},
      {"bounds-check", "bounds-check --config " + small + " --set horizon=30"},
      {"compare", "compare --config " + desk + " --set horizon=60 --densities 2x2,3x3"},
  };
  std::size_t files = 0, differing = 0, failed = 0;
  const auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  for (const auto& [name, args] : commands) {
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path out = root / name / std::to_string(pass);
      const int code = std::system(
          (bin + " " + args + " --seed 11 --out " + out.string() + " > /dev/null").c_str());
      if (code != 0) ++failed;
    }
    for (const auto& entry : fs::directory_iterator(root / name / "0")) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const fs::path twin = root / name / "1" / entry.path().filename();
      if (!fs::exists(twin) || read(entry.path()) != read(twin)) ++differing;
    }
  }
  fs::remove_all(root);
  return {failed == 0 && differing == 0 && files >= 10,
          fmt::format("5 commands run twice: {} CSV files compared, {} differ, {} failed runs",
                      files, differing, failed)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"queue exactness", queue_exactness},
      {"drift bound on every slot", lemma1_all_policies},
      {"best response vs brute force", best_response_oracle},
      {"Markov vs brute force", markov_oracle},
      {"V trade-off trend", v_tradeoff},
      {"budget compliance", budget_compliance},
      {"baseline ordering", baseline_ordering},
      {"Markov degenerate cases", markov_degenerate},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << fmt::format("{} [{}] {}: {}", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                             o.detail)
              << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failures, criteria.size())
            << std::endl;
  return failures == 0 ? 0 : 1;
}
