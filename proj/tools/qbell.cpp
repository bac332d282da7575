// Command-line front end: joint tables, symmetrized products, Bell-type
// bounds and their quantum violations, Werner-noise sweeps, and the
// acceptance selftest. Exit codes: 0 success, 2 invalid input, 3 property
// counterexample found, 4 optimization budget exhausted.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quasibell/quasibell.hpp"
#include "quasibell/selftest.hpp"

namespace {

using namespace quasibell;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitCounterexample = 3;
constexpr int kExitBudget = 4;

Direction parse_vector(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(std::stod(item));
  if (parts.size() != 3) throw OutOfRange("expected three comma-separated components: " + text);
  return {parts[0], parts[1], parts[2]};
}

/// Measurement axes are normalized on ingest; a warning is printed when the
/// given norm is off by more than 1e-6.
Direction parse_axis(const std::string& text, const std::string& what) {
  const Direction d = parse_vector(text);
  if (d.norm() < 1e-12) throw OutOfRange(what + " has zero norm");
  if (std::abs(d.norm() - 1.0) > 1e-6)
    std::cerr << "warning: " << what << " norm " << d.norm() << " renormalized to 1\n";
  return d.normalized();
}

Direction parse_bloch(const std::string& text) {
  const Direction u = parse_vector(text);
  require_in_ball(u, 1e-9);
  return u;
}

std::vector<double> parse_grid(const std::string& text) {
  double lo = 0.0, hi = 1.0, step = 0.01;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
    throw OutOfRange("grid must be lo:hi:step with positive step: " + text);
  std::vector<double> grid;
  for (double z = lo; z <= hi + 0.5 * step; z += step) grid.push_back(std::min(z, hi));
  if (!grid.empty() && grid.back() < hi - 1e-12) grid.push_back(hi);
  return grid;
}

Json provenance(std::uint64_t seed, const Json& config) {
  return Json{{"version", kVersion}, {"seed", seed}, {"config", config}};
}

void write_output(const std::string& path, const Json& payload) {
  if (path.empty()) {
    std::cout << payload.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw OutOfRange("cannot open output file " + path);
  out << payload.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw OutOfRange("cannot open output file " + path);
  out << text;
}

void print_table(const OutcomeTable& t) {
  std::printf("outcomes  probability\n");
  for (int idx = 0; idx < t.size(); ++idx)
    std::printf("%-9s %+.10f\n", t.tuple_key(idx).c_str(), t[idx]);
  std::printf("sum = %.12f, min entry = %+.10f\n", t.sum(), t.min_entry());
}

int cmd_joint(const std::string& u_text, const std::string& a0_text, const std::string& a1_text,
              const std::string& a2_text, const std::string& mode,
              const std::vector<double>& corr, bool show_interval, bool check_frechet,
              int random_count, std::uint64_t seed, const std::string& out_path,
              const std::string& format) {
  if (check_frechet) {
    Rng rng = make_rng(seed);
    int counterexamples = 0;
    for (int t = 0; t < random_count; ++t) {
      const auto table =
          noncommuting_pair_table(random_ball_vector(rng), random_unit_direction(rng),
                                  random_unit_direction(rng), CorrelatorSpec(random_in(rng, -1, 1)));
      if (!frechet_pair_check(table).equivalent) ++counterexamples;
    }
    std::printf("pair bound/positivity equivalence: %d counterexamples in %d random tables\n",
                counterexamples, random_count);
    return counterexamples == 0 ? kExitOk : kExitCounterexample;
  }

  const Direction u = parse_bloch(u_text);
  const Direction a0 = parse_axis(a0_text, "--a0");
  const Direction a1 = parse_axis(a1_text, "--a1");

  CorrelatorSpec correlators;
  if (mode == "explicit") {
    if (corr.empty()) throw OutOfRange("--mode explicit needs --corr");
    if (corr.size() == 1)
      correlators = CorrelatorSpec(corr[0]);
    else if (corr.size() == 4)
      correlators = CorrelatorSpec(corr[0], corr[1], corr[2], corr[3]);
    else
      throw OutOfRange("--corr takes 1 value (pair) or 4 values (triple)");
  } else if (mode == "independence") {
    correlators = CorrelatorSpec(dot(a0, u) * dot(a1, u));
  } else if (mode == "mixed") {
    correlators = CorrelatorSpec(mixed_state_correlator(u, a0, a1));
  } else if (mode == "symmetrized") {
    correlators = CorrelatorSpec(dot(a0, a1));
  } else {
    throw OutOfRange("unknown --mode " + mode);
  }

  std::optional<OutcomeTable> table;
  if (a2_text.empty()) {
    table = noncommuting_pair_table(u, a0, a1, correlators);
  } else {
    const Direction a2 = parse_axis(a2_text, "--a2");
    if (mode == "independence")
      correlators = CorrelatorSpec(dot(a0, u) * dot(a1, u), dot(a0, u) * dot(a2, u),
                            dot(a1, u) * dot(a2, u), dot(a0, u) * dot(a1, u) * dot(a2, u));
    else if (mode == "symmetrized")
      correlators = CorrelatorSpec(dot(a0, a1), dot(a0, a2), dot(a1, a2),
                            dot(symmetrize_triple(a0, a1, a2).vector, u));
    else if (mode == "mixed")
      correlators = CorrelatorSpec(mixed_state_correlator(u, a0, a1), mixed_state_correlator(u, a0, a2),
                            mixed_state_correlator(u, a1, a2), 0.0);
    table = noncommuting_triple_table(u, {a0, a1, a2}, correlators);
  }

  if (format == "pretty") {
    print_table(*table);
  } else if (format == "csv") {
    std::ostringstream os;
    os << "outcomes,probability\n";
    for (int idx = 0; idx < table->size(); ++idx)
      os << table->tuple_key(idx) << ',' << (*table)[idx] << '\n';
    write_text(out_path, os.str());
  } else {
    Json payload = to_json(*table);
    payload["provenance"] = provenance(seed, Json{{"mode", mode}});
    write_output(out_path, payload);
  }
  if (show_interval) {
    const Interval iv = positivity_interval(u, a0, a1);
    std::printf("pair correlator positivity interval: [%.10f, %.10f]\n", iv.lo, iv.hi);
    const auto rep = frechet_pair_check(*table);
    if (table->arity() == 2)
      std::printf("bounds hold: %s; entries nonnegative: %s; equivalent: %s\n",
                  rep.frechet_all ? "yes" : "no", rep.nonneg_all ? "yes" : "no",
                  rep.equivalent ? "yes" : "no");
  }
  return kExitOk;
}

int cmd_symmetrize(std::vector<std::string> axis_texts, int k, bool random_dirs,
                   std::uint64_t seed, const std::string& method,
                   const std::string& compare_list, double step, const std::string& out_path) {
  std::vector<Direction> dirs;
  if (random_dirs) {
    if (k < 1) throw OutOfRange("--random needs --k");
    Rng rng = make_rng(seed);
    for (int i = 0; i < k; ++i) dirs.push_back(random_unit_direction(rng));
  } else {
    for (std::size_t i = 0; i < axis_texts.size(); ++i)
      dirs.push_back(parse_axis(axis_texts[i], "--a[" + std::to_string(i) + "]"));
    if (k > 0 && k != static_cast<int>(dirs.size()))
      throw OutOfRange("--k disagrees with the number of --a directions");
  }
  if (dirs.empty()) throw OutOfRange("no directions given; use --a or --random with --k");

  const ProductSpec p(dirs);
  const auto eval = [&](const std::string& m) {
    if (m == "bruteforce") return symmetrize_bruteforce(p);
    if (m == "pairing") return symmetrize_pairing(p);
    if (m == "moyal")
      return step > 0.0 ? moyal_product_operator(p, step) : moyal_product_operator(p);
    throw OutOfRange("unknown method " + m);
  };

  const SymmetrizedOperator result = eval(method);
  Json payload{{"k", p.factor_count()},
               {"directions", to_json(p.directions)},
               {"scalar", result.scalar},
               {"vector", to_json(result.vector)},
               {"method", method}};

  if (!compare_list.empty()) {
    Json residuals = Json::object();
    std::stringstream ss(compare_list);
    std::string m;
    std::vector<std::pair<std::string, SymmetrizedOperator>> evaluated;
    while (std::getline(ss, m, ',')) evaluated.emplace_back(m, eval(m));
    for (std::size_t i = 0; i < evaluated.size(); ++i)
      for (std::size_t j = i + 1; j < evaluated.size(); ++j) {
        const double diff =
            evaluated[i].second.as_operator().max_abs_diff(evaluated[j].second.as_operator());
        residuals[evaluated[i].first + "-" + evaluated[j].first] = diff;
        std::printf("%s vs %s: max entry deviation %.3e\n", evaluated[i].first.c_str(),
                    evaluated[j].first.c_str(), diff);
      }
    payload["agreement_residuals"] = residuals;
  }
  payload["provenance"] = provenance(seed, Json{{"method", method}, {"k", p.factor_count()}});
  write_output(out_path, payload);
  return kExitOk;
}

int cmd_bell(int order, bool enumerate, bool table1, const std::string& evaluate_path,
             const std::string& builtin, double werner_z, long long samples, std::uint64_t seed,
             const std::string& out_path) {
  if (table1) {
    const auto grid = test_expression_table();
    std::printf("expression \\ (b0,b1,b2)   +++  ++-  +-+  +--  -++  -+-  --+  ---\n");
    const char* names[4] = {"b0+b1+b2+b0b1b2", "b0-b1+b2-b0b1b2", "b0+b1-b2-b0b1b2",
                            "b0-b1-b2+b0b1b2"};
    for (int row = 0; row < 4; ++row) {
      std::printf("%-24s", names[row]);
      for (int col = 0; col < 8; ++col)
        std::printf(" %+4d", grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
      std::printf("\n");
    }
    return kExitOk;
  }

  if (enumerate) {
    ClassicalBoundReport rep;
    if (2 * (order + 1) <= 26 && samples <= 0) {
      rep = classical_bound_verify(order);
    } else {
      rep = classical_bound_sample(order, samples > 0 ? samples : 1000000, seed);
    }
    std::printf("order %d: min %+g max %+g over %lld %s assignments; |K| = 1 %s\n", order,
                rep.min_value, rep.max_value, static_cast<long long>(rep.assignments),
                rep.exhaustive ? "exhaustive" : "sampled",
                rep.all_unit_magnitude ? "everywhere" : "VIOLATED");
    if (!out_path.empty()) {
      Json payload = to_json(rep);
      payload["provenance"] = provenance(seed, Json{{"order", order}});
      write_output(out_path, payload);
    }
    return rep.all_unit_magnitude ? kExitOk : kExitCounterexample;
  }

  QuasiBellInstance inst;
  if (!evaluate_path.empty()) {
    std::ifstream in(evaluate_path);
    if (!in) throw OutOfRange("cannot open " + evaluate_path);
    Json j;
    in >> j;
    inst = instance_from_json(j);
  } else if (builtin == "chsh") {
    inst = chsh_settings();
  } else if (builtin == "hexagon") {
    inst = hexagon_settings();
  } else {
    throw OutOfRange("bell needs --enumerate, --table1, --evaluate FILE, or --builtin NAME");
  }

  Json payload = evaluation_to_json(
      inst, werner_z >= 0.0 ? std::optional<double>(werner_z) : std::nullopt);
  payload["provenance"] = provenance(seed, Json{{"order", inst.order}});
  const double v = payload.at("quantum_value").get<double>();
  std::printf("order %d: quantum value %+.12f (|value| %.12f, classical bound 1)\n", inst.order, v,
              std::abs(v));
  write_output(out_path, payload);
  return kExitOk;
}

int cmd_optimize(int order, int restarts, std::uint64_t seed, const std::string& ansatz,
                 int jobs, long long max_evals, const std::string& out_path) {
  OptimizeConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.jobs = jobs;
  if (max_evals > 0) cfg.max_evals = max_evals;
  if (ansatz == "reduced")
    cfg.ansatz = Ansatz::reduced;
  else if (ansatz != "full")
    throw OutOfRange("--ansatz must be full or reduced");

  const OptimizationResult res = maximize(order, cfg);
  std::printf("order %d: best |value| %.6f (signed %+.6f) after %d restarts, %lld evaluations%s\n",
              order, std::abs(res.best_value), res.best_value, res.restarts_used,
              res.evaluations, res.converged ? "" : " [budget exhausted]");
  std::printf("gradient norm at optimum: %.3e\n", res.gradient_norm);

  Json payload = to_json(res);
  payload["provenance"] = provenance(
      seed, Json{{"order", order}, {"restarts", res.restarts_used}, {"ansatz", ansatz}});
  const auto cop = coplanarity_report(res);
  payload["coplanarity"] = Json{{"max_plane_distance", cop.max_plane_distance},
                                {"max_tail_angle_a", cop.max_tail_angle_a},
                                {"max_tail_angle_b", cop.max_tail_angle_b}};
  write_output(out_path, payload);
  return res.converged ? kExitOk : kExitBudget;
}

int cmd_werner(int order, const std::string& sweep_text, const std::string& evaluate_path,
               int restarts, std::uint64_t seed, int jobs, const std::string& out_path,
               const std::string& format) {
  QuasiBellInstance inst;
  if (!evaluate_path.empty()) {
    std::ifstream in(evaluate_path);
    if (!in) throw OutOfRange("cannot open " + evaluate_path);
    Json j;
    in >> j;
    inst = instance_from_json(j);
  } else if (order == 1) {
    inst = chsh_settings();
  } else if (order == 2) {
    inst = hexagon_settings();
  } else {
    OptimizeConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.ansatz = order >= 3 ? Ansatz::reduced : Ansatz::full;
    const auto res = maximize(order, cfg);
    inst = QuasiBellInstance(order, res.best_a_dirs, res.best_b_dirs);
  }

  const auto s = sweep(inst, parse_grid(sweep_text));
  if (s.threshold)
    std::printf("order %d: |value| %.9f violates the bound 1 for z > %.9f\n", s.order,
                std::abs(quantum_value(inst)), *s.threshold);
  else
    std::printf("order %d: |value| %.9f never exceeds the bound 1\n", s.order,
                std::abs(quantum_value(inst)));
  std::printf("note: published locality thresholds for this state family "
              "(0.7056, 0.7012 from tighter inequalities; 0.6595, 0.6829 from explicit local "
              "models) constrain models that assign no joint values to incompatible "
              "measurements, so they are not directly comparable with this threshold.\n");

  if (format == "csv") {
    write_text(out_path, sweep_to_csv(s));
  } else {
    Json payload = to_json(s);
    payload["provenance"] = provenance(seed, Json{{"order", order}, {"sweep", sweep_text}});
    write_output(out_path, payload);
  }
  return kExitOk;
}

int cmd_selftest(bool extended, int restarts, std::uint64_t seed, int jobs) {
  SelftestOptions opts;
  opts.extended_orders = extended;
  if (restarts > 0) opts.restarts = restarts;
  opts.seed = seed;
  opts.jobs = jobs;
  const auto results = run_acceptance_checks(opts);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-22s (%6.2f s)  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures == 0 ? kExitOk : kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint quasi-probabilities of incompatible qubit measurements, symmetrized "
               "products, and the Bell-type inequality hierarchy built from them"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file; flags win");

  // joint
  auto* joint = app.add_subcommand("joint", "Joint (quasi-)probability tables and their bounds");
  std::string j_u = "0,0,0", j_a0 = "1,0,0", j_a1 = "0,1,0", j_a2, j_mode = "symmetrized";
  std::vector<double> j_corr;
  bool j_interval = false, j_frechet = false;
  int j_random = 500;
  std::uint64_t j_seed = 1;
  std::string j_out, j_format = "json";
  joint->add_option("--u", j_u, "Bloch vector of the qubit state (comma-separated)");
  joint->add_option("--a0", j_a0, "first measurement axis");
  joint->add_option("--a1", j_a1, "second measurement axis");
  joint->add_option("--a2", j_a2, "third measurement axis (triple table)");
  joint->add_option("--mode", j_mode, "correlator rule: explicit|independence|mixed|symmetrized");
  joint->add_option("--corr", j_corr, "explicit correlator(s): c01 or c01,c02,c12,c012");
  joint->add_flag("--interval", j_interval, "print the positivity interval and bound report");
  joint->add_flag("--check-frechet", j_frechet, "run the bound/positivity equivalence property");
  joint->add_option("--random", j_random, "instance count for --check-frechet");
  joint->add_option("--seed", j_seed, "random seed");
  joint->add_option("--out", j_out, "write JSON here instead of stdout");
  joint->add_option("--format", j_format, "json|csv|pretty");

  // symmetrize
  auto* sym = app.add_subcommand("symmetrize", "Quantize a product of spin observables");
  std::vector<std::string> s_axes;
  int s_k = 0;
  bool s_random = false;
  std::uint64_t s_seed = 1;
  std::string s_method = "pairing", s_compare, s_out;
  double s_step = 0.0;
  sym->add_option("--a", s_axes, "product factor direction (repeatable)");
  sym->add_option("--k", s_k, "factor count (with --random)");
  sym->add_flag("--random", s_random, "draw --k random unit directions");
  sym->add_option("--seed", s_seed, "random seed");
  sym->add_option("--method", s_method, "bruteforce|pairing|moyal");
  sym->add_option("--compare", s_compare, "comma-separated methods to cross-check");
  sym->add_option("--step", s_step, "finite-difference step for moyal");
  sym->add_option("--out", s_out, "write JSON here instead of stdout");

  // bell
  auto* bell = app.add_subcommand("bell", "Classical certificates and quantum values of K_N");
  int b_order = 2;
  bool b_enumerate = false, b_table1 = false;
  std::string b_evaluate, b_builtin, b_out;
  double b_werner_z = -1.0;
  long long b_samples = 0;
  std::uint64_t b_seed = 1;
  bell->add_option("--order", b_order, "inequality order N");
  bell->add_flag("--enumerate", b_enumerate, "verify K_N = +-1 over all assignments");
  bell->add_flag("--table1", b_table1, "print the 4x8 test-expression value table");
  bell->add_option("--evaluate", b_evaluate, "instance JSON file {N, a_dirs, b_dirs}");
  bell->add_option("--builtin", b_builtin, "evaluate a built-in instance: chsh|hexagon");
  bell->add_option("--werner-z", b_werner_z, "also report the value scaled by z");
  bell->add_option("--samples", b_samples, "sample count (falls back from exhaustive)");
  bell->add_option("--seed", b_seed, "random seed");
  bell->add_option("--out", b_out, "write JSON here instead of stdout");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Maximize |<K_N>| over measurement directions");
  int o_order = 2, o_restarts = 0, o_jobs = 1;
  std::uint64_t o_seed = 1;
  std::string o_ansatz = "full", o_out;
  long long o_max_evals = 0;
  opt->add_option("--order", o_order, "inequality order N");
  opt->add_option("--restarts", o_restarts, "multistart count (0 = per-order default)");
  opt->add_option("--seed", o_seed, "random seed");
  opt->add_option("--ansatz", o_ansatz, "full|reduced (reduced shares directions 2..N)");
  opt->add_option("--jobs", o_jobs, "worker threads across restarts");
  opt->add_option("--max-evals", o_max_evals, "evaluation budget per restart");
  opt->add_option("--out", o_out, "write JSON here instead of stdout");

  // werner
  auto* wer = app.add_subcommand("werner", "Noise sweep and violation threshold");
  int w_order = 2, w_restarts = 16, w_jobs = 1;
  std::string w_sweep = "0:1:0.01", w_evaluate, w_out, w_format = "json";
  std::uint64_t w_seed = 1;
  wer->add_option("--order", w_order, "inequality order N");
  wer->add_option("--sweep", w_sweep, "z grid as lo:hi:step");
  wer->add_option("--evaluate", w_evaluate, "instance JSON file (overrides --order defaults)");
  wer->add_option("--restarts", w_restarts, "restarts when the instance must be optimized");
  wer->add_option("--seed", w_seed, "random seed");
  wer->add_option("--jobs", w_jobs, "worker threads");
  wer->add_option("--out", w_out, "write output here instead of stdout");
  wer->add_option("--format", w_format, "json|csv");

  // selftest
  auto* self = app.add_subcommand("selftest", "Run the acceptance checks");
  bool t_extended = false;
  int t_restarts = 0, t_jobs = 1;
  std::uint64_t t_seed = 1;
  self->add_flag("--extended", t_extended, "include orders 7..10 in the optimizer table");
  self->add_option("--restarts", t_restarts, "restart count for the optimizer table");
  self->add_option("--seed", t_seed, "random seed");
  self->add_option("--jobs", t_jobs, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (joint->parsed())
      return cmd_joint(j_u, j_a0, j_a1, j_a2, j_mode, j_corr, j_interval, j_frechet, j_random,
                       j_seed, j_out, j_format);
    if (sym->parsed())
      return cmd_symmetrize(s_axes, s_k, s_random, s_seed, s_method, s_compare, s_step, s_out);
    if (bell->parsed())
      return cmd_bell(b_order, b_enumerate, b_table1, b_evaluate, b_builtin, b_werner_z,
                      b_samples, b_seed, b_out);
    if (opt->parsed())
      return cmd_optimize(o_order, o_restarts, o_seed, o_ansatz, o_jobs, o_max_evals, o_out);
    if (wer->parsed())
      return cmd_werner(w_order, w_sweep, w_evaluate, w_restarts, w_seed, w_jobs, w_out, w_format);
    if (self->parsed()) return cmd_selftest(t_extended, t_restarts, t_seed, t_jobs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitOk;
}
