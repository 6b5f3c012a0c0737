#pragma once

// Command-line front end. run_cli() is the whole program; tools/rrobust.cpp
// only forwards argv.
//
// Exit codes: 0 accept / success, 1 reject, 2 usage or input error,
// 3 minimum-degree assumption violated, 4 witness verification failure.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rrobust/digraph.hpp"
#include "rrobust/estimation.hpp"
#include "rrobust/exact.hpp"
#include "rrobust/generators.hpp"
#include "rrobust/report.hpp"
#include "rrobust/tester.hpp"

namespace rrobust::cli {

enum ExitCode : int { kAccept = 0, kReject = 1, kUsage = 2, kPrecondition = 3, kInternal = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Digraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open graph file " + path);
  try {
    return parse_edge_list(in);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void put_witness(RunReport& rep, const TestOutcome& out) {
  rep.set("verdict", to_string(out.verdict));
  if (out.verdict == Verdict::kReject) {
    rep.set("witness_kind", to_string(out.witness_kind));
    rep.set_ids("witness_A", out.witness->a());
    rep.set_ids("witness_B", out.witness->b());
    rep.set_ids("witness_C", out.witness->c());
    rep.set("witness_R", *out.witness_R);
  }
  rep.set("partitions_examined", out.partitions_examined);
  if (out.trial_of_rejection) rep.set("trial_of_rejection", *out.trial_of_rejection);
  if (out.run_of_rejection) rep.set("run_of_rejection", *out.run_of_rejection);
  if (out.best_R) rep.set("best_R", *out.best_R);
}

inline Mode parse_mode(const std::string& s) {
  if (s == "random") return Mode::kRandom;
  if (s == "exhaustive") return Mode::kExhaustive;
  throw UsageError("unknown mode " + s + " (expected random or exhaustive)");
}

inline std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    std::size_t v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad list item " + item);
    }
    if (pos != item.size()) throw UsageError("bad list item " + item);
    out.push_back(v);
  }
  return out;
}

// Shared tester flags.
struct TesterFlags {
  std::size_t t = 9;
  bool guaranteed_t = false;
  std::string mode = "random";
  std::size_t trials = 3;
  std::uint64_t partitions = 0;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--t", t, "sample size (default 9)");
    cmd->add_flag("--guaranteed-t", guaranteed_t, "use the sample size that carries the probabilistic guarantee");
    cmd->add_option("--mode", mode, "random | exhaustive");
    cmd->add_option("--trials", trials, "random mode: number of samples");
    cmd->add_option("--partitions", partitions, "random mode: partitions per sample (default 3^|support|)");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--workers", workers, "worker threads (results do not depend on it)");
  }

  TestConfig config(std::size_t r, std::size_t delta) const {
    TestConfig cfg;
    cfg.r = r;
    cfg.delta_cap = delta;
    cfg.t = t;
    cfg.mode = parse_mode(mode);
    cfg.trials = trials;
    if (partitions) cfg.partitions_per_trial = partitions;
    cfg.seed = seed;
    cfg.workers = workers;
    return cfg;
  }

  void echo(RunReport& rep, const TestConfig& cfg) const {
    rep.set("t", cfg.t);
    rep.set("mode", to_string(cfg.mode));
    if (cfg.mode == Mode::kRandom) {
      rep.set("trials", cfg.trials);
      rep.set("partitions_per_trial", partitions ? std::to_string(partitions) : std::string("auto"));
    }
    rep.set("seed", cfg.seed);
  }
};

inline void check_witness(const Digraph& g, const TestOutcome& out, const TestConfig& cfg) {
  if (!verify_rejection(g, out, cfg))
    throw VerificationFailure("internal error: rejection witness failed independent verification");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rrobust: exact and sample-based r-robustness testing of digraphs"};
  app.require_subcommand(1);

  std::string graph_path;
  std::size_t r = 0, delta = 0;
  std::string sigma_text, beta_text = "1";
  TesterFlags tf;

  auto* degree = app.add_subcommand("degree", "minimum in-degree check against 2r + delta");
  degree->add_option("--graph", graph_path, "edge-list file")->required();
  degree->add_option("--r", r)->required();
  degree->add_option("--delta", delta)->required();

  bool want_max = false, force = false;
  std::size_t max_n = 13;
  std::optional<std::size_t> exact_r;
  unsigned exact_workers = 1;
  auto* exact = app.add_subcommand("exact", "brute-force r-robustness (small graphs)");
  exact->add_option("--graph", graph_path, "edge-list file")->required();
  auto* exact_r_opt = exact->add_option("--r", exact_r, "test r-robustness");
  auto* max_flag = exact->add_flag("--max", want_max, "compute the maximal robustness");
  exact_r_opt->excludes(max_flag);
  exact->add_flag("--force", force, "lift the default size guard");
  exact->add_option("--max-n", max_n, "size guard (default 13)");
  exact->add_option("--workers", exact_workers);

  bool arbitrary = false;
  auto* test = app.add_subcommand("test", "sample-based approximate test");
  test->add_option("--graph", graph_path, "edge-list file")->required();
  test->add_option("--r", r)->required();
  test->add_option("--delta", delta)->required();
  test->add_option("--sigma", sigma_text, "overall failure probability (enables amplification)");
  test->add_flag("--arbitrary", arbitrary, "run the minimum-degree check first instead of requiring it");
  tf.attach(test);

  auto* interval = app.add_subcommand("interval", "interval estimate of the maximal robustness");
  interval->add_option("--graph", graph_path, "edge-list file")->required();
  interval->add_option("--delta", delta)->required();
  interval->add_option("--beta", beta_text, "interval slack, e.g. 1 or 0.5 or 1/2");
  interval->add_option("--sigma", sigma_text, "overall failure probability (default 1/10)");
  tf.attach(interval);

  PlantedSpec spec;
  spec.seed = 1;
  std::string out_path;
  auto* gen = app.add_subcommand("gen", "planted-partition graph with known robustness");
  gen->add_option("--n", spec.n)->required();
  gen->add_option("--size-a", spec.size_a)->required();
  gen->add_option("--size-b", spec.size_b)->required();
  gen->add_option("--rbar", spec.rbar)->required();
  gen->add_option("--seed", spec.seed);
  gen->add_option("-o,--output", out_path, "edge-list path; ground truth goes to <path>.truth")->required();

  std::string rbar_list, size_list;
  std::size_t fig_n = 200, fig_size = 70, fig_rbar = 10, fig_delta = 30;
  std::uint64_t fig_seed = 1;
  auto* fig3 = app.add_subcommand("fig3", "planted-graph detection sweep, CSV output");
  auto* rl = fig3->add_option("--rbar-list", rbar_list, "comma-separated rbar values (|A|=|B|=--size)");
  auto* sl = fig3->add_option("--size-list", size_list, "comma-separated |A|=|B| values (rbar=--rbar)");
  rl->excludes(sl);
  fig3->add_option("--n", fig_n);
  fig3->add_option("--size", fig_size);
  fig3->add_option("--rbar", fig_rbar);
  fig3->add_option("--delta", fig_delta);
  fig3->add_option("--t", tf.t);
  fig3->add_option("--trials", tf.trials);
  fig3->add_option("--partitions", tf.partitions);
  fig3->add_option("--seed", fig_seed);
  fig3->add_option("--workers", tf.workers);
  fig3->add_option("-o,--output", out_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kAccept;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAccept;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  Stopwatch clock;
  RunReport rep;
  auto emit = [&](int code) {
    rep.set_duration(clock.seconds());
    out << rep.serialize();
    return code;
  };

  try {
    if (degree->parsed()) {
      if (r == 0) throw UsageError("--r must be positive");
      const Digraph g = load_graph(graph_path);
      if (g.num_vertices() < 2) throw UsageError("graph needs at least two vertices");
      rep.set("command", "degree");
      rep.set("graph", graph_path);
      rep.set("n", g.num_vertices());
      rep.set("m", g.num_edges());
      rep.set("r", r);
      rep.set("delta", delta);
      const auto [v, d] = min_in_degree(g);
      rep.set("d_min", d);
      rep.set("min_vertex", v);
      rep.set("bound", 2 * r + delta);
      if (auto w = exam_degree(g, r, delta)) {
        rep.set("degree_check", "fails");
        rep.set("witness_vertex", *w);
        return emit(kReject);
      }
      rep.set("degree_check", "holds");
      return emit(kAccept);
    }

    if (exact->parsed()) {
      if (!exact_r && !want_max) throw UsageError("exact: give --r R or --max");
      const Digraph g = load_graph(graph_path);
      ExactOptions opts;
      opts.max_n = force ? detail::kExactHardLimit : max_n;
      opts.workers = exact_workers;
      rep.set("command", "exact");
      rep.set("graph", graph_path);
      rep.set("n", g.num_vertices());
      rep.set("m", g.num_edges());
      if (want_max) {
        rep.set("max_robustness", exact_max_robustness(g, opts));
        return emit(kAccept);
      }
      rep.set("r", *exact_r);
      const auto res = exact_is_r_robust(g, *exact_r, opts);
      rep.set("robust", res.robust ? "yes" : "no");
      if (!res.robust) {
        const auto a = res.witness->a(), b = res.witness->b();
        if (is_r_reachable(g, a, *exact_r) || is_r_reachable(g, b, *exact_r))
          throw VerificationFailure("internal error: exact witness failed verification");
        rep.set_ids("witness_A", a);
        rep.set_ids("witness_B", b);
        rep.set_ids("witness_C", res.witness->c());
        rep.set("witness_R", violation_number(g, *res.witness));
        return emit(kReject);
      }
      return emit(kAccept);
    }

    if (test->parsed()) {
      if (r == 0) throw UsageError("--r must be positive");
      const Digraph g = load_graph(graph_path);
      if (g.num_vertices() < 2) throw UsageError("graph needs at least two vertices");
      TestConfig cfg = tf.config(r, delta);
      if (tf.guaranteed_t) {
        cfg.t = guaranteed_t(cfg, g.num_vertices());
        err << "warning: guaranteed sample size t = " << cfg.t
            << "; the search visits up to 3^|support| partitions per sample and is infeasible unless t is tiny\n";
      }
      std::optional<Rational> sigma;
      if (!sigma_text.empty()) sigma = parse_rational(sigma_text);
      rep.set("command", "test");
      rep.set("graph", graph_path);
      rep.set("n", g.num_vertices());
      rep.set("m", g.num_edges());
      rep.set("r", r);
      rep.set("delta", delta);
      rep.set("delta_per_run", "1/3");
      rep.set("sigma", sigma ? to_string(*sigma) : std::string("none"));
      tf.echo(rep, cfg);
      rep.set("arbitrary", arbitrary ? "yes" : "no");
      const auto [v, d] = min_in_degree(g);
      rep.set("d_min", d);
      const bool degree_ok = d > 2 * r + delta;
      rep.set("degree_check", degree_ok ? "holds" : "fails");
      if (!degree_ok && !arbitrary) {
        err << "error: minimum in-degree " << d << " (vertex " << v << ") does not exceed 2r+delta = "
            << 2 * r + delta << "; rerun with --arbitrary to refute (2r+delta+1)-robustness instead\n";
        return emit(kPrecondition);
      }
      if (sigma && !sigma->in_open_unit()) throw UsageError("--sigma must lie in (0, 1)");
      TestOutcome res;
      if (sigma)
        res = arbitrary ? amplified_arbitrary(g, cfg, *sigma) : amplified_test(g, cfg, *sigma);
      else
        res = arbitrary ? test_arbitrary(g, cfg) : sampled_rbst_tst(g, cfg);
      if (sigma) rep.set("repeats", amplification_repeats(*sigma));
      check_witness(g, res, cfg);
      put_witness(rep, res);
      return emit(res.verdict == Verdict::kAccept ? kAccept : kReject);
    }

    if (interval->parsed()) {
      const Digraph g = load_graph(graph_path);
      IntervalOptions opt;
      opt.delta_cap = delta;
      const Rational beta = parse_rational(beta_text);
      opt.beta_num = static_cast<std::uint64_t>(beta.num);
      opt.beta_den = static_cast<std::uint64_t>(beta.den);
      if (!sigma_text.empty()) opt.sigma = parse_rational(sigma_text);
      opt.base = tf.config(1, delta == 0 ? 1 : delta);
      rep.set("command", "interval");
      rep.set("graph", graph_path);
      rep.set("n", g.num_vertices());
      rep.set("m", g.num_edges());
      rep.set("delta", delta);
      rep.set("beta", to_string(beta));
      rep.set("sigma", to_string(opt.sigma));
      tf.echo(rep, opt.base);
      const auto est = interval_estimate(g, opt);
      rep.set("lo", est.lo);
      rep.set("hi", est.hi);
      rep.set("length", est.length());
      rep.set("iterations", est.iterations);
      for (std::size_t i = 0; i < est.steps.size(); ++i) {
        const auto& s = est.steps[i];
        std::ostringstream os;
        os << "r=" << s.r << " verdict=" << to_string(s.verdict) << " witness=" << to_string(s.witness_kind)
           << " lo=" << s.lo << " hi=" << s.hi;
        rep.set("step_" + std::to_string(i), os.str());
      }
      if (est.clamped) rep.set("clamped", "yes");
      if (est.stalled) rep.set("stalled", "yes");
      return emit(kAccept);
    }

    if (gen->parsed()) {
      const PlantedGraph p = generate_planted(spec);
      std::ofstream gout(out_path), tout(out_path + ".truth");
      if (!gout || !tout) throw UsageError("cannot write " + out_path);
      write_edge_list(p.graph, gout);
      gout << '\n';
      write_ground_truth(p, tout);
      rep.set("command", "gen");
      rep.set("n", spec.n);
      rep.set("m", p.graph.num_edges());
      rep.set("size_a", spec.size_a);
      rep.set("size_b", spec.size_b);
      rep.set("size_c", spec.n - spec.size_a - spec.size_b);
      rep.set("rbar", spec.rbar);
      rep.set("seed", spec.seed);
      rep.set("d_min", min_in_degree(p.graph).degree);
      rep.set("graph", out_path);
      rep.set("truth", out_path + ".truth");
      return emit(kAccept);
    }

    if (fig3->parsed()) {
      const bool by_size = !size_list.empty();
      const auto settings = parse_list(by_size ? size_list : rbar_list);
      if (settings.empty()) throw UsageError("fig3: give a nonempty --rbar-list or --size-list");
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw UsageError("cannot write " + out_path);
      }
      std::ostream& csv = out_path.empty() ? out : file;
      csv << "setting,rbar,threshold,detected_R,seconds\n";
      for (std::size_t i = 0; i < settings.size(); ++i) {
        const std::size_t size = by_size ? settings[i] : fig_size;
        const std::size_t rbar = by_size ? fig_rbar : settings[i];
        if (2 * size > fig_n) throw UsageError("fig3: |A| + |B| exceeds n");
        PlantedSpec ps{fig_n, size, size, rbar, substream_seed(fig_seed, 1, settings[i])};
        Stopwatch row_clock;
        const PlantedGraph p = generate_planted(ps);
        TestConfig cfg;
        cfg.r = rbar + 1;
        cfg.delta_cap = fig_delta;
        cfg.t = tf.t;
        cfg.trials = tf.trials;
        if (tf.partitions) cfg.partitions_per_trial = tf.partitions;
        cfg.mode = Mode::kRandom;
        cfg.seed = substream_seed(fig_seed, 2, settings[i]);
        cfg.workers = tf.workers;
        const TestOutcome res = test_arbitrary(p.graph, cfg);
        check_witness(p.graph, res, cfg);
        const double secs = row_clock.seconds();
        csv << settings[i] << ',' << rbar << ',' << cfg.r + cfg.delta_cap << ','
            << (res.best_R ? std::to_string(*res.best_R) : std::string("NA")) << ',' << std::fixed
            << std::setprecision(3) << secs << '\n';
        csv.unsetf(std::ios::floatfield);
      }
      return kAccept;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SizeGuardError& e) {
    err << "error: " << e.what() << " (pass --force to override)\n";
    return kUsage;
  } catch (const AssumptionViolation& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const VerificationFailure& e) {
    err << e.what() << '\n';
    return kInternal;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("rrobust");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rrobust::cli
