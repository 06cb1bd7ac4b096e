#pragma once

#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarsecancel/io.hpp"
#include "coarsecancel/windows.hpp"

namespace ccl {

struct DispatchResult {
  int exit_code = 0;
  Json report;
};

namespace cli_detail {

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    if (next > pos) out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

inline bool json_close(const Json& a, const Json& b, double tol) {
  if (a.is_number() && b.is_number())
    return std::fabs(a.get<double>() - b.get<double>()) <= tol;
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto& [k, v] : a.items()) {
      if (!b.contains(k)) return false;
      if (!json_close(v, b.at(k), tol)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!json_close(a[i], b[i], tol)) return false;
    return true;
  }
  return a == b;
}

}  // namespace cli_detail

inline DispatchResult dispatch(std::vector<std::string> args);

namespace cli_detail {

// corpus manifest: {"instances": [{"name":..., "args": [...], "golden": path}]}
inline DispatchResult corpus_run(const std::string& manifest_path, int threads, double tol,
                                 bool write_goldens) {
  Json manifest = load_json(manifest_path);
  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  Json rep;
  rep["manifest"] = manifest_path;
  Json results = Json::array();
  int passed = 0, failed = 0;
  for (auto& inst : manifest.value("instances", Json::array())) {
    std::string name = inst.at("name").get<std::string>();
    std::vector<std::string> args;
    for (auto& a : inst.at("args")) {
      std::string s = a.get<std::string>();
      // input paths are manifest-relative
      if (s.find(".json") != std::string::npos && !std::filesystem::path(s).is_absolute())
        s = (base / s).string();
      args.push_back(s);
    }
    args.push_back("--threads");
    args.push_back(std::to_string(threads));
    DispatchResult r = dispatch(args);
    Json entry;
    entry["name"] = name;
    entry["exit_code"] = r.exit_code;
    entry["output"] = r.report;
    std::string golden_rel = inst.value("golden", "");
    if (!golden_rel.empty()) {
      std::filesystem::path gp = base / golden_rel;
      if (write_goldens) {
        save_json(r.report, gp.string());
        entry["golden"] = "written";
        ++passed;
      } else {
        Json golden = load_json(gp.string());
        bool ok = json_close(r.report, golden, tol);
        entry["golden"] = ok ? "match" : "mismatch";
        if (ok)
          ++passed;
        else
          ++failed;
      }
    } else {
      ++passed;
    }
    results.push_back(entry);
  }
  rep["results"] = results;
  rep["passed"] = passed;
  rep["failed"] = failed;
  return {failed == 0 ? 0 : 2, rep};
}

}  // namespace cli_detail

// Routes one command line to the named operation. Deterministic for fixed
// inputs, seed and tolerance regardless of thread count.
inline DispatchResult dispatch(std::vector<std::string> args) {
  CLI::App app{"coarse-cancel: coarse hyperbolic geometry and small cancellation workbench"};
  app.require_subcommand(1);
  int threads = 1;
  double tolerance = kDefaultTol;
  std::uint64_t seed = 0;
  std::string constants_path, output_path;
  app.add_option("--threads", threads);
  app.add_option("--tolerance", tolerance);
  app.add_option("--seed", seed);
  app.add_option("--constants", constants_path);
  app.add_option("--output", output_path);
  app.fallthrough();

  Json report;
  int code = 0;

  // delta
  std::string delta_graph;
  int subdivide_k = 1;
  bool verify5 = false;
  auto* cmd_delta = app.add_subcommand("delta", "four-point hyperbolicity constant");
  cmd_delta->add_option("graph", delta_graph)->required();
  cmd_delta->add_option("--subdivide", subdivide_k);
  cmd_delta->add_flag("--verify", verify5, "also run the five-point inequality check");
  cmd_delta->callback([&]() {
    GraphSpec spec = graph_from_json(load_json(delta_graph));
    if (subdivide_k > 1) spec = subdivide(spec, subdivide_k);
    FiniteMetricSpace X = build_space(spec);
    auto rep = hyperbolicity_delta(X, threads);
    report = hyperbolicity_to_json(rep);
    report["points"] = X.size();
    if (verify5) {
      auto five = verify_metric_inequalities(X, rep.delta, 2'000'000, seed, tolerance);
      report["five_point"] = Json{{"tuples", five.tuples_checked},
                                  {"sampled", five.sampled},
                                  {"violations", five.violations[0] + five.violations[1] +
                                                     five.violations[2]}};
    }
  });

  // qc
  std::string qc_graph, qc_subset;
  auto* cmd_qc = app.add_subcommand("qc", "quasi-convexity constant of a subset");
  cmd_qc->add_option("graph", qc_graph)->required();
  cmd_qc->add_option("--subset", qc_subset)->required();
  cmd_qc->callback([&]() {
    FiniteMetricSpace X = build_space(graph_from_json(load_json(qc_graph)));
    auto Y = SubsetHandle::from_ids(X, cli_detail::split_csv(qc_subset));
    report["alpha"] = quasi_convexity_constant(X, Y);
    report["subset_size"] = Y.members.size();
  });

  // hull
  std::string hull_graph, hull_subset;
  double hull_delta = -1.0;
  auto* cmd_hull = app.add_subcommand("hull", "hull of a subset");
  cmd_hull->add_option("graph", hull_graph)->required();
  cmd_hull->add_option("--subset", hull_subset)->required();
  cmd_hull->add_option("--delta", hull_delta);
  cmd_hull->callback([&]() {
    FiniteMetricSpace X = build_space(graph_from_json(load_json(hull_graph)));
    auto Y = SubsetHandle::from_ids(X, cli_detail::split_csv(hull_subset));
    double d = hull_delta >= 0 ? hull_delta : hyperbolicity_delta(X, threads).delta;
    auto H = hull(X, Y, d, tolerance);
    std::vector<std::string> ids;
    for (int i : H.members) ids.push_back(X.id(i));
    report["delta"] = d;
    report["members"] = ids;
    report["alpha"] = quasi_convexity_constant(X, H);
  });

  // act classify | acyl | axis
  auto* cmd_act = app.add_subcommand("act", "group action queries");
  std::string act_window, act_word;
  double act_l = 0.0, act_delta = 0.0;
  int act_cap = -1, act_power = 8;
  auto* act_classify = cmd_act->add_subcommand("classify", "classify a word");
  act_classify->add_option("window", act_window)->required();
  act_classify->add_option("--word", act_word)->required();
  act_classify->add_option("--max-power", act_power);
  act_classify->callback([&]() {
    auto W = window_from_json(load_json(act_window));
    Word w = W->parse_word(act_word);
    try {
      auto cls = classify(*W, w, act_power, tolerance);
      report["kind"] = cls.kind == IsometryClassification::Kind::Elliptic ? "elliptic"
                                                                          : "loxodromic_estimate";
      report["len"] = cls.len;
      report["stable_len"] = cls.stable_len;
      report["window_bound"] = cls.window_bound;
      report["certificate"] = cls.certificate;
    } catch (const inconclusive_error& e) {
      report["kind"] = "inconclusive";
      report["reason"] = e.what();
      code = 2;
    }
  });
  auto* act_acyl = cmd_act->add_subcommand("acyl", "acylindricity table");
  act_acyl->add_option("window", act_window)->required();
  act_acyl->add_option("--l", act_l);
  act_acyl->add_option("--word-cap", act_cap);
  act_acyl->callback([&]() {
    auto W = window_from_json(load_json(act_window));
    report = acyl_table_to_json(acylindricity_table(*W, act_l, act_cap, tolerance));
  });
  auto* act_axis = cmd_act->add_subcommand("axis", "axis of a word");
  act_axis->add_option("window", act_window)->required();
  act_axis->add_option("--word", act_word)->required();
  act_axis->add_option("--delta", act_delta);
  act_axis->callback([&]() {
    auto W = window_from_json(load_json(act_window));
    Word w = W->parse_word(act_word);
    auto ax = axis(*W, w, act_delta, tolerance);
    std::vector<std::string> ids;
    for (int i : ax.members) ids.push_back(W->space().id(i));
    report["members"] = ids;
    report["len"] = translation_length(*W, w).value;
  });

  // group hol | exp | malnormal
  auto* cmd_group = app.add_subcommand("group", "finite group table queries");
  std::string grp_path, grp_subgroup;
  auto* grp_hol = cmd_group->add_subcommand("hol", "holomorph");
  grp_hol->add_option("group", grp_path)->required();
  grp_hol->callback([&]() {
    GroupTable f = group_from_json(load_json(grp_path));
    GroupTable h = holomorph(f);
    report["order"] = h.size();
    report["exponent"] = group_exponent(h);
  });
  auto* grp_exp = cmd_group->add_subcommand("exp", "exponent");
  grp_exp->add_option("group", grp_path)->required();
  grp_exp->callback([&]() {
    GroupTable g = group_from_json(load_json(grp_path));
    report["order"] = g.size();
    report["exponent"] = group_exponent(g);
    report["has_involution"] = g.has_involution();
  });
  auto* grp_mal = cmd_group->add_subcommand("malnormal", "malnormality of a subgroup");
  grp_mal->add_option("group", grp_path)->required();
  grp_mal->add_option("--subgroup", grp_subgroup)->required();
  grp_mal->callback([&]() {
    GroupTable g = group_from_json(load_json(grp_path));
    std::vector<int> h;
    for (auto& id : cli_detail::split_csv(grp_subgroup)) h.push_back(g.index(id));
    report["malnormal"] = malnormality_check(g, h);
  });

  // tree build
  auto* cmd_tree = app.add_subcommand("tree", "Bass-Serre tree windows");
  std::string tree_amalgam;
  int tree_radius = 5, tree_cap = 4;
  auto* tree_build = cmd_tree->add_subcommand("build", "build a tree window");
  tree_build->add_option("amalgam", tree_amalgam)->required();
  tree_build->add_option("--radius", tree_radius);
  tree_build->add_option("--max-word-length", tree_cap);
  tree_build->callback([&]() {
    auto data = amalgam_from_json(load_json(tree_amalgam));
    auto bw = bass_serre_window(data, tree_radius, tree_cap);
    GraphSpec spec;
    for (auto& p : bw.space.points()) spec.vertices.push_back(p);
    for (auto& [u, v, w] : bw.space.edges())
      spec.edges.push_back({bw.space.id(u), bw.space.id(v), w});
    report = window_to_json(*bw.window, spec);
    report["vertices"] = bw.space.size();
    report["delta"] = hyperbolicity_delta(bw.space, threads).delta;
  });

  // inv ledger | e | nu-bound | kappa
  auto* cmd_inv = app.add_subcommand("inv", "action invariants");
  std::string inv_window, inv_groups, inv_table, inv_orders;
  int inv_cap = 4;
  double inv_rinj = 0.0;
  std::int64_t inv_e = 1;
  double inv_A_upper = -1.0;
  int inv_nu_upper = -1;
  auto* inv_ledger = cmd_inv->add_subcommand("ledger", "assemble an invariant ledger");
  inv_ledger->add_option("window", inv_window)->required();
  inv_ledger->add_option("--word-cap", inv_cap);
  inv_ledger->add_option("--finite-subgroups", inv_groups,
                         "comma-separated group JSON paths feeding e");
  inv_ledger->add_option("--nu-upper", inv_nu_upper, "structural upper bound for nu");
  inv_ledger->add_option("--A-upper", inv_A_upper, "structural upper bound for A");
  inv_ledger->callback([&]() {
    auto W = window_from_json(load_json(inv_window));
    InvariantLedger led;
    led.delta = hyperbolicity_delta(W->space(), threads).delta;
    auto ir = injectivity_radius(*W, inv_cap);
    if (!ir.finite) throw error("inv ledger: no loxodromic word found up to the cap");
    led.rinj = LogValue::from_linear(ir.value);
    // On bipartite unit-edge tree windows loxodromic lengths are even and
    // >= 2, so a capped minimum of 2 is the true infimum; anything else is
    // only an upper bound of the restricted inf and is flagged as such.
    bool structural = W->tree_window() && ir.exact_for_cap && ir.value <= 2 + tolerance;
    led.rinj_bound = structural ? Bound::Exact : Bound::Upper;
    led.provenance.push_back(structural
                                 ? "rinj exact: tree window, minimal loxodromic length attained"
                                 : "rinj: upper bound of the capped infimum (not certification-sound)");
    std::vector<GroupTable> subs;
    for (auto& p : cli_detail::split_csv(inv_groups)) subs.push_back(group_from_json(load_json(p)));
    led.e = invariant_e(subs);
    led.e_bound = Bound::Exact;
    led.provenance.push_back(subs.empty()
                                 ? "e = 1 (user-supplied: maximal loxodromic subgroups cyclic)"
                                 : "e = lcm of holomorph exponents of supplied subgroups");
    led.nu = inv_nu_upper >= 1 ? inv_nu_upper : 1;
    led.nu_bound = Bound::Upper;
    led.provenance.push_back(inv_nu_upper >= 1 ? "nu: user-supplied structural bound"
                                               : "nu = 1 (user-supplied: loxodromic subgroups cyclic)");
    led.A = LogValue::from_linear(inv_A_upper >= 0 ? inv_A_upper : 0.0);
    led.A_bound = Bound::Upper;
    led.provenance.push_back(inv_A_upper >= 0 ? "A: user-supplied structural bound"
                                              : "A = 0 (user-supplied: thickened axes of short non-elementary tuples disjoint)");
    led.provenance.push_back("rinj: capped word search, cap " + std::to_string(inv_cap));
    report = ledger_to_json(led);
    report["rinj_words_classified"] = ir.words_classified;
  });
  auto* inv_einv = cmd_inv->add_subcommand("e", "invariant e from finite subgroups");
  inv_einv->add_option("--groups", inv_groups)->required();
  inv_einv->callback([&]() {
    std::vector<GroupTable> subs;
    for (auto& p : cli_detail::split_csv(inv_groups)) subs.push_back(group_from_json(load_json(p)));
    report["e"] = invariant_e(subs);
  });
  auto* inv_nub = cmd_inv->add_subcommand("nu-bound", "nu bound from an acylindricity table");
  inv_nub->add_option("--table", inv_table)->required();
  inv_nub->add_option("--rinj", inv_rinj)->required();
  inv_nub->callback([&]() {
    auto t = acyl_table_from_json(load_json(inv_table));
    auto nb = nu_bound_from_acylindricity(t, inv_rinj);
    report["bound"] = nb.bound;
    report["d"] = nb.d_used;
    report["N"] = nb.n_used;
    report["M"] = nb.m_steps;
  });
  auto* inv_kappa = cmd_inv->add_subcommand("kappa", "least odd kappa for hyperbolic quotients");
  inv_kappa->add_option("--orders", inv_orders)->required();
  inv_kappa->add_option("--e", inv_e);
  inv_kappa->callback([&]() {
    std::vector<std::int64_t> orders;
    for (auto& s : cli_detail::split_csv(inv_orders)) orders.push_back(std::stoll(s));
    report["kappa"] = kappa_for_hyperbolic(orders, inv_e);
  });

  // coneoff build | verify
  auto* cmd_cone = app.add_subcommand("coneoff", "cone-off construction");
  std::string cone_space, cone_family;
  double cone_rho = 1.0;
  int cone_radial = 4;
  auto load_family = [&](const FiniteMetricSpace& X) {
    std::vector<SubsetHandle> fam;
    Json fj = load_json(cone_family);
    for (auto& sub : fj.at("subsets")) {
      std::vector<std::string> ids;
      for (auto& v : sub) ids.push_back(v.get<std::string>());
      fam.push_back(SubsetHandle::from_ids(X, ids));
    }
    return fam;
  };
  auto* cone_build = cmd_cone->add_subcommand("build", "build a cone-off sample");
  cone_build->add_option("space", cone_space)->required();
  cone_build->add_option("family", cone_family)->required();
  cone_build->add_option("--rho", cone_rho);
  cone_build->add_option("--radial", cone_radial);
  cone_build->callback([&]() {
    FiniteMetricSpace X = build_space(graph_from_json(load_json(cone_space)));
    auto fam = load_family(X);
    auto co = build_coneoff(X, fam, cone_rho, cone_radial);
    auto sw = check_sandwich(co, tolerance);
    report["nodes"] = co.size();
    report["cones"] = fam.size();
    report["rho"] = cone_rho;
    report["radial_samples"] = cone_radial;
    report["sandwich_ok"] = sw.ok;
    report["warnings"] = co.warnings;
  });
  auto* cone_verify = cmd_cone->add_subcommand("verify", "verify cone-ball isolation");
  cone_verify->add_option("space", cone_space)->required();
  cone_verify->add_option("family", cone_family)->required();
  cone_verify->add_option("--rho", cone_rho);
  cone_verify->add_option("--radial", cone_radial);
  cone_verify->callback([&]() {
    FiniteMetricSpace X = build_space(graph_from_json(load_json(cone_space)));
    auto fam = load_family(X);
    auto co = build_coneoff(X, fam, cone_rho, cone_radial);
    auto ball = verify_cone_ball(co, tolerance);
    auto sw = check_sandwich(co, tolerance);
    report["pairs_checked"] = ball.pairs_checked;
    report["violations"] = ball.violations;
    report["sandwich_ok"] = sw.ok;
    if (!ball.ok() || !sw.ok) code = 2;
  });

  // certify
  std::string certify_stats;
  auto* cmd_certify = app.add_subcommand("certify", "small cancellation certificate");
  cmd_certify->add_option("stats", certify_stats)->required();
  cmd_certify->callback([&]() {
    Json sj = load_json(certify_stats);
    FamilyStats stats;
    stats.DeltaQ = sj.at("DeltaQ").get<double>();
    stats.TQ = sj.at("TQ").get<double>();
    Constants c = constants_path.empty() ? Constants::canonical()
                                         : constants_from_json(load_json(constants_path));
    auto cert = certify_small_cancellation(sj.at("delta").get<double>(),
                                           sj.at("rho").get<double>(), stats, c);
    report = certificate_to_json(cert);
    report["constants"] = constants_to_json(c);
    if (!cert.overall) code = 2;
  });

  // n0
  int n0_nu0 = 1;
  auto* cmd_n0 = app.add_subcommand("n0", "critical exponent of the induction step");
  cmd_n0->add_option("--nu0", n0_nu0);
  cmd_n0->callback([&]() {
    Constants c = constants_path.empty() ? Constants::canonical()
                                         : constants_from_json(load_json(constants_path));
    auto n0 = critical_exponent_n0(c, n0_nu0);
    report["representable"] = n0.representable;
    report["log_n0"] = n0.log_n0;
    report["binding"] = n0.binding;
    if (n0.representable) report["n0"] = n0.n0;
    report["mode"] = c.mode();
  });

  // propagate
  std::string prop_ledger;
  std::int64_t prop_n = 101;
  int prop_nu0 = -1;
  auto* cmd_prop = app.add_subcommand("propagate", "one quotient step of the ledger");
  cmd_prop->add_option("--ledger", prop_ledger)->required();
  cmd_prop->add_option("--n", prop_n);
  cmd_prop->add_option("--nu0", prop_nu0);
  cmd_prop->callback([&]() {
    Constants c = constants_path.empty() ? Constants::canonical()
                                         : constants_from_json(load_json(constants_path));
    InvariantLedger led = ledger_from_json(load_json(prop_ledger));
    try {
      InvariantLedger next = propagate_ledger(led, c, prop_n, prop_nu0);
      report = ledger_to_json(next);
      report["mode"] = c.mode();
    } catch (const error& e) {
      report["error"] = e.what();
      code = 2;
    }
  });

  // trace
  std::string trace_ledger;
  std::int64_t trace_n = 101;
  int trace_steps = 5, trace_nu0 = -1;
  double trace_l0 = 0.0;
  auto* cmd_trace = app.add_subcommand("trace", "iterated quotient ledger trace");
  cmd_trace->add_option("--ledger", trace_ledger)->required();
  cmd_trace->add_option("--n", trace_n);
  cmd_trace->add_option("--steps", trace_steps);
  cmd_trace->add_option("--l0", trace_l0);
  cmd_trace->add_option("--nu0", trace_nu0);
  cmd_trace->callback([&]() {
    Constants c = constants_path.empty() ? Constants::canonical()
                                         : constants_from_json(load_json(constants_path));
    InvariantLedger led = ledger_from_json(load_json(trace_ledger));
    auto tr = quotient_iteration_trace(led, trace_n, trace_steps, c, trace_l0, trace_nu0);
    report["log_lambda"] = tr.log_lambda;
    report["trivialization_at"] = tr.trivialization_at;
    Json steps = Json::array();
    for (auto& st : tr.steps) {
      Json sj = ledger_to_json(st.ledger);
      sj["log_stable_length"] = st.log_stable_length;
      sj["below_rinj"] = st.below_rinj;
      steps.push_back(sj);
    }
    report["steps"] = steps;
    if (tr.truncated_because) {
      report["truncated_because"] = *tr.truncated_because;
      code = 2;
    }
    report["mode"] = c.mode();
  });

  // corpus
  std::string corpus_manifest;
  bool corpus_write = false;
  auto* cmd_corpus = app.add_subcommand("corpus", "run a manifest of instances against goldens");
  cmd_corpus->add_option("manifest", corpus_manifest)->required();
  cmd_corpus->add_flag("--write-goldens", corpus_write);
  cmd_corpus->callback([&]() {
    auto r = cli_detail::corpus_run(corpus_manifest, threads, tolerance, corpus_write);
    report = r.report;
    code = r.exit_code;
  });

  std::vector<const char*> argv;
  argv.push_back("coarse-cancel");
  for (auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    Json err;
    err["error"] = std::string("argument error: ") + e.what();
    return {1, err};
  } catch (const Json::exception& e) {
    Json err;
    err["error"] = std::string("json error: ") + e.what();
    return {1, err};
  } catch (const error& e) {
    Json err;
    err["error"] = e.what();
    return {1, err};
  }
  if (!output_path.empty()) save_json(report, output_path);
  return {code, report};
}

}  // namespace ccl
