// dfnv: distribution-free newsvendor rules, probability metrics and
// counterexample generators over JSON distribution files.
//
// Every command writes a single JSON payload to stdout that echoes its
// effective parameters, and a one-line diagnostic to stderr on failure.
// Exit codes: 0 success, 1 validation or domain error, 2 I/O or parse error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dfnv/discrete_distribution.hpp"
#include "dfnv/json_io.hpp"
#include "dfnv/metrics.hpp"
#include "dfnv/moment_sets.hpp"
#include "dfnv/newsvendor.hpp"
#include "dfnv/rng.hpp"

namespace {

using nlohmann::json;

void emit(const json& payload) { std::cout << payload.dump(2) << "\n"; }

json solution_json(const dfnv::ScarfSolution& sol) {
  return json{{"x_star", sol.x_star},
              {"value", sol.value},
              {"worst_dist", dfnv::to_json(sol.worst_dist)},
              {"clamped", sol.clamped},
              {"support_warning", sol.support_warning}};
}

// ---------------------------------------------------------------- scarf ---

struct ScarfArgs {
  double p = 0, c = 0, q = 0;
  double mean = 0, s2 = 0;
  double a = 0, b = 0, d2 = 0;
  bool has_mean = false, has_s2 = false, has_a = false, has_b = false, has_d2 = false;
};

json run_scarf(const ScarfArgs& args) {
  const bool point = args.has_mean || args.has_s2;
  const bool envelope = args.has_a || args.has_b || args.has_d2;
  if (point == envelope) {
    throw std::invalid_argument(
        "scarf: give exactly one of --mean/--s2 or --a/--b/--d2");
  }
  if (point && !(args.has_mean && args.has_s2)) {
    throw std::invalid_argument("scarf: point mode needs both --mean and --s2");
  }
  if (envelope && !(args.has_a && args.has_b && args.has_d2)) {
    throw std::invalid_argument("scarf: envelope mode needs --a, --b and --d2");
  }
  const dfnv::PriceParams pp(args.p, args.c, args.q);
  json payload{{"command", "scarf"}, {"p", args.p}, {"c", args.c}, {"q", args.q}};
  if (point) {
    const auto sol = dfnv::scarf_rule(pp, args.mean, args.s2);
    payload["mode"] = "point";
    payload["mean"] = args.mean;
    payload["s2"] = args.s2;
    payload.update(solution_json(sol));
  } else {
    const dfnv::MomentEnvelope env(args.a, args.b, args.d2);
    const auto sol = dfnv::extended_scarf(pp, env);
    payload["mode"] = "envelope";
    payload["a"] = args.a;
    payload["b"] = args.b;
    payload["d2"] = args.d2;
    // the envelope problem is solved at its top corner
    payload["effective_mean"] = env.b;
    payload["effective_s2"] = env.d2;
    payload.update(solution_json(sol));
  }
  return payload;
}

// ------------------------------------------------------------ classical ---

json run_classical(double p, double c, double q, const std::string& demand_file) {
  const dfnv::PriceParams pp(p, c, q);
  const auto demand = dfnv::load_distribution(demand_file);
  const double x_star = dfnv::classical_optimal(pp, demand);
  return json{{"command", "classical"},
              {"p", p},
              {"c", c},
              {"q", q},
              {"demand_file", demand_file},
              {"fractile", pp.fractile()},
              {"x_star", x_star},
              {"expected_profit", dfnv::expected_profit(pp, x_star, demand)}};
}

// -------------------------------------------------------------- metrics ---

json run_metrics(const std::string& metric, bool all, const std::string& lhs_file,
                 const std::string& rhs_file) {
  if (all == !metric.empty()) {
    throw std::invalid_argument("metrics: give exactly one of --metric or --all");
  }
  const auto lhs = dfnv::load_distribution(lhs_file);
  const auto rhs = dfnv::load_distribution(rhs_file);
  json payload{{"command", "metrics"}, {"lhs", lhs_file}, {"rhs", rhs_file}};
  if (all) {
    const double dk = dfnv::kolmogorov(lhs, rhs).value;
    const double dl = dfnv::levy(lhs, rhs).value;
    const double dp = dfnv::prokhorov(lhs, rhs).value;
    payload["metric"] = "all";
    payload["values"] = json{{"kolmogorov", dk}, {"levy", dl}, {"prokhorov", dp}};
    payload["levy_le_kolmogorov"] = dl <= dk + 1e-12;
  } else if (metric == "kolmogorov") {
    payload["metric"] = metric;
    payload["value"] = dfnv::kolmogorov(lhs, rhs).value;
  } else if (metric == "levy") {
    payload["metric"] = metric;
    payload["value"] = dfnv::levy(lhs, rhs).value;
  } else if (metric == "prokhorov") {
    payload["metric"] = metric;
    payload["value"] = dfnv::prokhorov(lhs, rhs).value;
  } else {
    throw std::invalid_argument("metrics: unknown metric \"" + metric +
                                "\" (want kolmogorov, levy or prokhorov)");
  }
  return payload;
}

// ------------------------------------------------------- counterexample ---

struct NRange {
  unsigned from = 1;
  unsigned to = 1;
};

NRange parse_n(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const unsigned long v = std::stoul(text);
      if (v == 0) throw std::invalid_argument("zero");
      return {static_cast<unsigned>(v), static_cast<unsigned>(v)};
    }
    const unsigned long lo = std::stoul(text.substr(0, dots));
    const unsigned long hi = std::stoul(text.substr(dots + 2));
    if (lo == 0 || hi < lo) throw std::invalid_argument("bad range");
    return {static_cast<unsigned>(lo), static_cast<unsigned>(hi)};
  } catch (const std::exception&) {
    throw std::invalid_argument("counterexample: --n wants a positive integer or LO..HI, got \"" +
                                text + "\"");
  }
}

json run_counterexample(const std::string& which, double a, const std::string& base_file,
                        double rparam, const std::string& n_text, double epsilon,
                        bool report) {
  const NRange range = parse_n(n_text);
  const bool ranged = range.to > range.from;
  const bool diagnostics = report || ranged;

  json payload{{"command", "counterexample"},
               {"family", which},
               {"n_from", range.from},
               {"n_to", range.to},
               {"epsilon", epsilon},
               {"report", diagnostics}};
  std::vector<dfnv::DiscreteDistribution> generated;
  json members = json::array();

  if (which == "prop5") {
    payload["a"] = a;
    const auto limit = dfnv::delta(a / 2.0);
    if (diagnostics) payload["limit"] = dfnv::to_json(limit);
    for (unsigned n = range.from; n <= range.to; ++n) {
      const auto d = dfnv::mean_escape_sequence(a, n);
      json entry{{"n", n},
                 {"dist", dfnv::to_json(d)},
                 {"mean", dfnv::moments(d).mean},
                 {"abs_moment_about_0", dfnv::abs_moment(d, 0.0, 1.0)}};
      if (diagnostics) entry["levy_to_limit"] = dfnv::levy(d, limit).value;
      members.push_back(std::move(entry));
      generated.push_back(d);
    }
  } else {  // prop3
    payload["base_file"] = base_file;
    payload["rparam"] = rparam;
    const auto base = dfnv::load_distribution(base_file);
    for (unsigned n = range.from; n <= range.to; ++n) {
      const auto d = dfnv::nontight_sequence(base, rparam, n);
      members.push_back(json{{"n", n},
                             {"dist", dfnv::to_json(d)},
                             {"kolmogorov_to_base", dfnv::kolmogorov(d, base).value}});
      generated.push_back(d);
    }
  }
  payload["members"] = std::move(members);
  if (diagnostics) {
    const auto tight = dfnv::tightness_report(generated, epsilon, 0.0);
    payload["tightness"] =
        json{{"epsilon", tight.epsilon}, {"radius", tight.radius}, {"uniform", tight.uniform}};
  }
  return payload;
}

// --------------------------------------------------------------- verify ---

struct Check {
  std::string name;
  double discrepancy;
  double tolerance;
};

struct VerifyConfig {
  std::uint64_t seed = 0;
  int trials = 10000;
  int grid_n = 10001;
  double tolerance_scale = 1.0;
};

dfnv::PriceParams draw_prices(dfnv::Rng& rng) {
  const double q = rng.uniform(0.0, 2.0);
  const double c = q + rng.uniform(0.2, 2.0);
  const double p = c + rng.uniform(0.2, 2.0);
  return {p, c, q};
}

dfnv::DiscreteDistribution draw_discrete(dfnv::Rng& rng, std::size_t max_atoms, double lo,
                                         double hi) {
  const std::size_t k = 1 + static_cast<std::size_t>(rng.below(max_atoms));
  std::vector<double> pts(k), w(k);
  for (std::size_t i = 0; i < k; ++i) {
    pts[i] = rng.uniform(lo, hi);
    w[i] = rng.uniform(0.05, 1.0);
  }
  return dfnv::make_discrete(pts, w);
}

std::vector<Check> scarf_suite(const VerifyConfig& cfg) {
  dfnv::Rng rng(cfg.seed * 2654435761u + 1);
  std::vector<Check> checks;

  double dx = 0.0, dv = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    const auto pp = draw_prices(rng);
    const double m = rng.uniform(1.0, 100.0);
    const double s = rng.uniform(0.0, m / 2.0);
    const auto closed = dfnv::scarf_rule(pp, m, s * s);
    const auto numeric = dfnv::minimize_scarf_bound(pp, m, s * s);
    dx = std::max(dx, std::fabs(closed.x_star - numeric.x));
    dv = std::max(dv, std::fabs(closed.value - numeric.value));
  }
  checks.push_back({"closed_form_vs_argmin_x", dx, 1e-8});
  checks.push_back({"closed_form_vs_argmin_value", dv, 1e-9});

  double over = -1.0, under = -1.0, attain = 0.0;
  for (int t = 0; t < 20; ++t) {
    dfnv::PriceParams pp = draw_prices(rng);
    double m = 0, s2 = 0, x = 0;
    for (int tries = 0; tries < 1000; ++tries) {
      m = rng.uniform(5.0, 20.0);
      s2 = rng.uniform(m / 5.0, m / 3.0);
      x = rng.uniform(std::max(0.0, m - std::sqrt(s2)), m + std::sqrt(s2));
      if (x - std::sqrt(s2 + (x - m) * (x - m)) >= 0.0) break;
    }
    const double bound = dfnv::scarf_bound(pp, x, m, s2);
    const auto sweep = dfnv::two_point_sweep_oracle(pp, x, m, s2, cfg.grid_n);
    over = std::max(over, sweep.best_cost - bound);
    under = std::max(under, bound - sweep.best_cost);
    attain = std::max(attain,
                      std::fabs(dfnv::expected_cost(pp, x, dfnv::worst_case_two_point(x, m, s2)) -
                                bound));
  }
  checks.push_back({"two_point_sweep_never_exceeds_bound", over, 1e-9});
  checks.push_back({"two_point_sweep_attains_bound", under, 1e-5});
  checks.push_back({"attainer_cost_matches_bound", attain, 1e-12});

  double violation = -1.0;
  for (int t = 0; t < 10; ++t) {
    const auto pp = draw_prices(rng);
    const double m = rng.uniform(2.0, 15.0);
    const double s2 = rng.uniform(0.1, (m / 2) * (m / 2));
    const double x = rng.uniform(0.0, 2.0 * m);
    violation = std::max(violation, dfnv::random_member_oracle(pp, x, m, s2, cfg.trials,
                                                               cfg.seed + 1000 + t));
  }
  checks.push_back({"random_member_violation", violation, 1e-9});
  return checks;
}

std::vector<Check> metrics_suite(const VerifyConfig& cfg) {
  dfnv::Rng rng(cfg.seed * 2654435761u + 2);
  std::vector<Check> checks;

  double mismatch = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto a = draw_discrete(rng, 6, -3.0, 3.0);
    const auto b = draw_discrete(rng, 6, -3.0, 3.0);
    mismatch = std::max(mismatch, std::fabs(dfnv::prokhorov(a, b).value -
                                            dfnv::prokhorov_bruteforce(a, b).value));
  }
  checks.push_back({"prokhorov_equals_bruteforce", mismatch, 0.0});

  double levy_over_kolm = -1.0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = draw_discrete(rng, 8, -4.0, 4.0);
    const auto b = draw_discrete(rng, 8, -4.0, 4.0);
    levy_over_kolm = std::max(levy_over_kolm,
                              dfnv::levy(a, b).value - dfnv::kolmogorov(a, b).value);
  }
  checks.push_back({"levy_le_kolmogorov", levy_over_kolm, 1e-12});

  double point_mass_err = 0.0;
  for (double t : {0.25, 0.5, 2.0}) {
    point_mass_err = std::max(point_mass_err,
                              std::fabs(dfnv::levy(dfnv::delta(0.0), dfnv::delta(t)).value -
                                        std::min(t, 1.0)));
  }
  checks.push_back({"levy_point_mass_pairs", point_mass_err, 1e-9});

  double triangle = -1.0, symmetry = 0.0, identity = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto a = draw_discrete(rng, 6, -3.0, 3.0);
    const auto b = draw_discrete(rng, 6, -3.0, 3.0);
    const auto c = draw_discrete(rng, 6, -3.0, 3.0);
    const auto probe = [&](auto&& dist) {
      const double ab = dist(a, b), ba = dist(b, a), bc = dist(b, c), ac = dist(a, c);
      triangle = std::max(triangle, ac - ab - bc);
      symmetry = std::max(symmetry, std::fabs(ab - ba));
      identity = std::max(identity, dist(a, a));
    };
    probe([](const auto& u, const auto& v) { return dfnv::kolmogorov(u, v).value; });
    probe([](const auto& u, const auto& v) { return dfnv::levy(u, v).value; });
    probe([](const auto& u, const auto& v) { return dfnv::prokhorov(u, v).value; });
  }
  checks.push_back({"metric_triangle_inequality", triangle, 1e-10});
  checks.push_back({"metric_symmetry", symmetry, 1e-10});
  checks.push_back({"metric_identity", identity, 1e-10});
  return checks;
}

std::vector<Check> envelope_suite(const VerifyConfig& cfg) {
  dfnv::Rng rng(cfg.seed * 2654435761u + 3);
  std::vector<Check> checks;

  double corner_gap = -1.0, dx = 0.0, dv = 0.0, chain = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto pp = draw_prices(rng);
    const double a = rng.uniform(1.0, 10.0);
    const double b = a + rng.uniform(0.1, 5.0);
    const double d2 = rng.uniform(0.0, (b / 2) * (b / 2));
    const double x = rng.uniform(0.0, 2.0 * b);
    const dfnv::MomentEnvelope env(a, b, d2);

    const auto sweep = dfnv::rectangle_sup_check(pp, x, env, 100);
    corner_gap = std::max(corner_gap, sweep.value - dfnv::scarf_bound(pp, x, b, d2));

    const auto ext = dfnv::extended_scarf(pp, env);
    const auto num = dfnv::minimize_scarf_bound(pp, b, d2);
    dx = std::max(dx, std::fabs(ext.x_star - num.x));
    dv = std::max(dv, std::fabs(ext.value - num.value));
    if (!ext.support_warning) {
      chain = std::max(chain, std::fabs(ext.value -
                                        dfnv::expected_cost(pp, ext.x_star, ext.worst_dist)));
    }
  }
  checks.push_back({"rectangle_corner_dominates", corner_gap, 1e-12});
  checks.push_back({"extended_vs_argmin_x", dx, 1e-8});
  checks.push_back({"extended_vs_argmin_value", dv, 1e-9});
  checks.push_back({"envelope_chain_cost", chain, 1e-10});
  return checks;
}

json run_verify(const std::string& suite, const VerifyConfig& cfg, bool& all_pass) {
  std::vector<Check> checks;
  auto append = [&](std::vector<Check> more) {
    checks.insert(checks.end(), more.begin(), more.end());
  };
  if (suite == "scarf" || suite == "all") append(scarf_suite(cfg));
  if (suite == "metrics" || suite == "all") append(metrics_suite(cfg));
  if (suite == "envelope" || suite == "all") append(envelope_suite(cfg));
  if (checks.empty()) {
    throw std::invalid_argument("verify: unknown suite \"" + suite +
                                "\" (want scarf, metrics, envelope or all)");
  }

  all_pass = true;
  json rows = json::array();
  for (const auto& check : checks) {
    const double tol = check.tolerance * cfg.tolerance_scale;
    const bool pass = check.discrepancy <= tol;
    all_pass = all_pass && pass;
    rows.push_back(json{{"name", check.name},
                        {"discrepancy", check.discrepancy},
                        {"tolerance", tol},
                        {"pass", pass}});
  }
  return json{{"command", "verify"},
              {"suite", suite},
              {"seed", cfg.seed},
              {"trials", cfg.trials},
              {"grid_n", cfg.grid_n},
              {"tolerance_scale", cfg.tolerance_scale},
              {"checks", std::move(rows)},
              {"all_pass", all_pass}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distribution-free newsvendor toolkit"};
  app.require_subcommand(1);

  // scarf
  ScarfArgs scarf;
  auto* cmd_scarf = app.add_subcommand("scarf", "minimax order quantity from moments");
  cmd_scarf->add_option("--p", scarf.p, "unit selling price")->required();
  cmd_scarf->add_option("--c", scarf.c, "unit purchase cost")->required();
  cmd_scarf->add_option("--q", scarf.q, "unit salvage value")->required();
  cmd_scarf->add_option("--mean", scarf.mean, "known demand mean")
      ->each([&](const std::string&) { scarf.has_mean = true; });
  cmd_scarf->add_option("--s2", scarf.s2, "known demand variance")
      ->each([&](const std::string&) { scarf.has_s2 = true; });
  cmd_scarf->add_option("--a", scarf.a, "mean interval lower end")
      ->each([&](const std::string&) { scarf.has_a = true; });
  cmd_scarf->add_option("--b", scarf.b, "mean interval upper end")
      ->each([&](const std::string&) { scarf.has_b = true; });
  cmd_scarf->add_option("--d2", scarf.d2, "variance cap")
      ->each([&](const std::string&) { scarf.has_d2 = true; });

  // classical
  double cl_p = 0, cl_c = 0, cl_q = 0;
  std::string cl_file;
  auto* cmd_classical =
      app.add_subcommand("classical", "fractile rule for a known demand file");
  cmd_classical->add_option("--p", cl_p, "unit selling price")->required();
  cmd_classical->add_option("--c", cl_c, "unit purchase cost")->required();
  cmd_classical->add_option("--q", cl_q, "unit salvage value")->required();
  cmd_classical->add_option("--demand", cl_file, "demand distribution JSON file")->required();

  // metrics
  std::string mt_metric, mt_lhs, mt_rhs;
  bool mt_all = false;
  auto* cmd_metrics =
      app.add_subcommand("metrics", "distances between two distribution files");
  cmd_metrics->add_option("--metric", mt_metric, "kolmogorov, levy or prokhorov");
  cmd_metrics->add_flag("--all", mt_all, "compute all three distances");
  cmd_metrics->add_option("--lhs", mt_lhs, "first distribution file")->required();
  cmd_metrics->add_option("--rhs", mt_rhs, "second distribution file")->required();

  // counterexample
  std::string ce_which, ce_base, ce_n = "1";
  double ce_a = 1.0, ce_r = 0.25, ce_eps = 0.1;
  bool ce_report = false;
  auto* cmd_ce = app.add_subcommand("counterexample", "generator families with diagnostics");
  cmd_ce->add_option("which", ce_which, "prop3 (non-tight ball family) or prop5 (escaping mass)")
      ->required()
      ->check(CLI::IsMember({"prop3", "prop5"}));
  cmd_ce->add_option("--a", ce_a, "mean held by the prop5 family");
  cmd_ce->add_option("--base", ce_base, "base distribution file for prop3");
  cmd_ce->add_option("--r", ce_r, "tail mass parameter in (0, 1/2) for prop3");
  cmd_ce->add_option("--n", ce_n, "index or range LO..HI");
  cmd_ce->add_option("--epsilon", ce_eps, "tail level for the tightness report");
  cmd_ce->add_flag("--report", ce_report, "include limit/tightness diagnostics");

  // verify
  std::string vf_suite = "all";
  VerifyConfig vf;
  auto* cmd_verify = app.add_subcommand("verify", "run the oracle cross-check suites");
  cmd_verify->add_option("--suite", vf_suite, "scarf, metrics, envelope or all");
  cmd_verify->add_option("--seed", vf.seed, "seed for the randomized draws");
  cmd_verify->add_option("--trials", vf.trials, "draws for the randomized checks")
      ->check(CLI::PositiveNumber);
  cmd_verify->add_option("--grid", vf.grid_n, "sweep grid size")->check(CLI::PositiveNumber);
  cmd_verify->add_option("--tolerance-scale", vf.tolerance_scale, "")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (cmd_scarf->parsed()) {
      emit(run_scarf(scarf));
    } else if (cmd_classical->parsed()) {
      emit(run_classical(cl_p, cl_c, cl_q, cl_file));
    } else if (cmd_metrics->parsed()) {
      emit(run_metrics(mt_metric, mt_all, mt_lhs, mt_rhs));
    } else if (cmd_ce->parsed()) {
      if (ce_which == "prop3" && ce_base.empty()) {
        throw std::invalid_argument("counterexample prop3: --base FILE is required");
      }
      emit(run_counterexample(ce_which, ce_a, ce_base, ce_r, ce_n, ce_eps, ce_report));
    } else if (cmd_verify->parsed()) {
      bool all_pass = false;
      emit(run_verify(vf_suite, vf, all_pass));
      if (!all_pass) {
        std::cerr << "verify: some checks failed\n";
        return 1;
      }
    }
  } catch (const dfnv::DistributionFileError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
