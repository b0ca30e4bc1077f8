#include "finsler/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "finsler/catalog.hpp"
#include "finsler/classify.hpp"
#include "finsler/curvature.hpp"
#include "finsler/projective.hpp"
#include "finsler/report.hpp"
#include "finsler/verify.hpp"

namespace finsler {

namespace {

constexpr int kSchemaVersion = 1;

IdentityReport verify_identity_summary(const ChangeSpec& c, const MetricSpec& base,
                                       int samples, uint64_t seed,
                                       const SampleBox& box) {
  return identity_suite(c, base, samples, seed, box);
}

struct Selection {
  std::string catalog_path;
  std::string metric_label;
  std::string change_label;
  int samples = 0;  // 0: catalog default
  std::optional<uint64_t> seed;
  std::optional<double> tol;
  double threshold = 1e-8;
  std::string json_path;
  int dim = 0;  // 0: all dims
};

Catalog load_selection_catalog(const Selection& sel) {
  return sel.catalog_path.empty() ? builtin_catalog()
                                  : load_catalog_file(sel.catalog_path);
}

struct PairRef {
  const Catalog::MetricEntry* metric;
  const Catalog::ChangeEntry* change;
};

std::vector<PairRef> select_pairs(const Catalog& cat, const Selection& sel) {
  std::vector<PairRef> out;
  for (const auto& m : cat.metrics) {
    if (!sel.metric_label.empty() && m.label != sel.metric_label) continue;
    if (sel.dim > 0 && m.spec.dim != sel.dim) continue;
    for (const auto& c : cat.changes) {
      if (!sel.change_label.empty() && c.label != sel.change_label) continue;
      out.push_back({&m, &c});
    }
  }
  if (!sel.metric_label.empty() && !cat.find_metric(sel.metric_label))
    throw usage_error("unknown metric label '" + sel.metric_label + "'");
  if (!sel.change_label.empty() && !cat.find_change(sel.change_label))
    throw usage_error("unknown change label '" + sel.change_label + "'");
  return out;
}

uint64_t pair_seed(uint64_t seed, const std::string& metric,
                   const std::string& change) {
  return seed ^ fnv1a(metric + "/" + change);
}

int cmd_verify(const Selection& sel) {
  Catalog cat = load_selection_catalog(sel);
  const int samples = sel.samples > 0 ? sel.samples : cat.samples;
  const uint64_t seed = sel.seed.value_or(cat.seed);

  VerifyTolerances tol;
  if (sel.tol) {
    tol.override_all = *sel.tol;
  } else if (const char* env = std::getenv("FINSLERLAB_TOL")) {
    tol.override_all = std::strtod(env, nullptr);
  }

  Json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["command"] = "verify";
  rep["catalog"] = sel.catalog_path.empty() ? "builtin" : sel.catalog_path;
  rep["samples"] = samples;
  rep["seed"] = seed;
  Json jpairs = Json::array();

  bool all_pass = true;
  bool any_data = false;
  for (const auto& pr : select_pairs(cat, sel)) {
    PairVerifyReport r = verify_pair(pr.change->spec, pr.metric->spec, samples,
                                     pair_seed(seed, pr.metric->label, pr.change->label),
                                     tol, cat.box);
    Json jp;
    jp["metric"] = pr.metric->label;
    jp["change"] = pr.change->label;
    jp["samples_used"] = r.samples_used;
    jp["samples_rejected"] = r.samples_rejected;
    if (r.ill_conditioned > 0) jp["ill_conditioned_samples"] = r.ill_conditioned;
    if (!r.note.empty()) jp["note"] = r.note;
    Json jblocks = Json::array();
    for (const auto& b : r.blocks) {
      Json jb;
      jb["name"] = b.name;
      jb["max_rel_residual"] = b.max_rel;
      jb["tol"] = b.tol;
      jb["samples"] = b.samples;
      jb["pass"] = b.pass;
      jblocks.push_back(std::move(jb));
    }
    jp["blocks"] = std::move(jblocks);
    IdentityReport ir = verify_identity_summary(pr.change->spec, pr.metric->spec,
                                                std::min(samples, 8),
                                                pair_seed(seed, pr.metric->label,
                                                          pr.change->label),
                                                cat.box);
    jp["scalar_identities"] = {{"samples", ir.samples},
                               {"worst_euler", ir.worst_euler},
                               {"worst_trace", ir.worst_trace},
                               {"worst_homogeneity", ir.worst_homogeneity},
                               {"pass", ir.pass}};
    jp["pass"] = r.pass && ir.pass;
    all_pass = all_pass && ir.pass;
    jpairs.push_back(std::move(jp));

    any_data = any_data || r.samples_used > 0;
    all_pass = all_pass && r.pass;
    std::printf("[%s] %s/%s (%d samples, %d rejected)\n", r.pass ? "PASS" : "FAIL",
                r.metric.c_str(), r.change.c_str(), r.samples_used,
                r.samples_rejected);
    if (r.ill_conditioned > 0)
      std::printf("    note: %d samples with metric condition number above 1e8\n",
                  r.ill_conditioned);
  }
  rep["pairs"] = std::move(jpairs);
  rep["pass"] = all_pass;
  if (!sel.json_path.empty()) write_report_file(rep, sel.json_path);
  std::printf("VERIFY: %s\n", all_pass ? "PASS" : "FAIL");
  if (!any_data) throw sampling_error("no admissible points in any selected pair");
  return all_pass ? 0 : 1;
}

bool metric_is_riemannian(const MetricSpec& m, uint64_t seed) {
  try {
    auto pts = sample_points(m.dim, m.domain, 3, seed, SampleBox{});
    for (const auto& pt : pts) {
      FundamentalBundle fb = fundamental(m, pt.x, pt.y);
      if (frob(fb.C) > 1e-10 * (1.0 + frob(fb.g))) return false;
    }
    return true;
  } catch (const error&) {
    return false;
  }
}

Json defect_json(const DefectTensors& dt, double threshold,
                 const SamplePoint* pt = nullptr) {
  Json j;
  if (pt) {
    j["x"] = pt->x;
    j["y"] = pt->y;
  }
  j["C_norm"] = dt.C_norm;
  j["S_norm"] = dt.S_norm;
  auto put3 = [&](const char* name, const std::optional<Ten3>& t,
                  const std::string& reason, double scale) {
    Json e;
    if (t) {
      const double rel = frob(*t) / (1.0 + scale);
      e["norm_rel"] = rel;
      e["flag_zero"] = rel <= threshold;
      if (!reason.empty()) e["note"] = reason;
    } else {
      e["absent"] = reason;
    }
    j[name] = std::move(e);
  };
  auto put4 = [&](const char* name, const std::optional<Ten4>& t,
                  const std::string& reason, double scale) {
    Json e;
    if (t) {
      const double rel = frob(*t) / (1.0 + scale);
      e["norm_rel"] = rel;
      e["flag_zero"] = rel <= threshold;
      if (!reason.empty()) e["note"] = reason;
    } else {
      e["absent"] = reason;
    }
    j[name] = std::move(e);
  };
  put3("c_reducibility_defect", dt.K3, dt.K3_reason, dt.C_norm);
  put3("c2_likeness_defect", dt.eta3, dt.eta3_reason,
       dt.C2 * dt.C_norm);
  put4("s3_likeness_defect", dt.mu4, dt.mu4_reason, dt.S_norm);
  put4("s4_likeness_defect", dt.zeta4, dt.zeta4_reason, dt.S_norm);
  if (dt.semi_r) {
    j["semi_split"] = {{"r", *dt.semi_r},
                       {"t", *dt.semi_t},
                       {"residual_rel", *dt.semi_residual_rel}};
  } else if (!dt.semi_reason.empty()) {
    j["semi_split"] = {{"absent", dt.semi_reason}};
  }
  return j;
}

int cmd_classify(const Selection& sel) {
  Catalog cat = load_selection_catalog(sel);
  const int samples = sel.samples > 0 ? sel.samples : cat.samples;
  const uint64_t seed = sel.seed.value_or(cat.seed);
  const double thr = sel.threshold;

  Json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["command"] = "classify";
  rep["catalog"] = sel.catalog_path.empty() ? "builtin" : sel.catalog_path;
  rep["samples"] = samples;
  rep["seed"] = seed;
  rep["threshold"] = thr;

  bool all_consistent = true;
  bool any_data = false;

  // base spaces alone
  Json jbases = Json::array();
  for (const auto& m : cat.metrics) {
    if (!sel.metric_label.empty() && m.label != sel.metric_label) continue;
    if (sel.dim > 0 && m.spec.dim != sel.dim) continue;
    Json jb;
    jb["metric"] = m.label;
    Json jsamp = Json::array();
    try {
      auto pts = sample_points(m.spec.dim, m.spec.domain, std::min(samples, 5),
                               pair_seed(seed, m.label, "-"), cat.box);
      for (const auto& pt : pts) {
        DefectTensors dt = defects(m.spec, pt.x, pt.y);
        jsamp.push_back(defect_json(dt, thr, &pt));
        any_data = true;
      }
    } catch (const sampling_error& e) {
      jb["note"] = e.what();
    }
    jb["defects"] = std::move(jsamp);
    jbases.push_back(std::move(jb));
  }
  rep["bases"] = std::move(jbases);

  // pairs
  Json jpairs = Json::array();
  std::vector<SweepPair> sweep_pairs;
  if (!sel.change_label.empty() || sel.metric_label.empty() ||
      !cat.changes.empty()) {
    for (const auto& pr : select_pairs(cat, sel)) {
      const MetricSpec& base = pr.metric->spec;
      const ChangeSpec& c = pr.change->spec;
      const uint64_t ps = pair_seed(seed, pr.metric->label, pr.change->label);
      Json jp;
      jp["metric"] = pr.metric->label;
      jp["change"] = pr.change->label;
      MetricSpec tm = transformed_metric(c, base);
      sweep_pairs.push_back({c, base});

      std::vector<SamplePoint> pts;
      try {
        pts = sample_points(base.dim, tm.domain, samples, ps, cat.box);
      } catch (const sampling_error& e) {
        jp["note"] = e.what();
        jpairs.push_back(std::move(jp));
        continue;
      }
      any_data = true;

      const bool base_riem = metric_is_riemannian(base, ps);

      // transformed-space defects at a few points
      Json jdef = Json::array();
      Json agg;  // aggregate verdicts: a flag holds iff it holds at every sample
      for (size_t i = 0; i < pts.size() && i < 5; ++i) {
        DefectTensors dt = defects(tm, pts[i].x, pts[i].y);
        Json one = defect_json(dt, thr, &pts[i]);
        for (auto it = one.begin(); it != one.end(); ++it) {
          if (!it.value().is_object() || !it.value().contains("flag_zero")) continue;
          const bool f = it.value()["flag_zero"].get<bool>();
          if (!agg.contains(it.key()))
            agg[it.key()] = f;
          else
            agg[it.key()] = agg[it.key()].get<bool>() && f;
        }
        jdef.push_back(std::move(one));
      }
      jp["transformed_defects"] = std::move(jdef);
      jp["aggregate_flags"] = std::move(agg);

      if (base_riem) {
        AlphaCheckReport ar = randers_kropina_alpha_check(c, base, samples, ps, cat.box);
        jp["alpha_check"] = {{"max_alpha1", ar.max_alpha1},
                             {"max_alpha2", ar.max_alpha2},
                             {"max_alpha1_rel", ar.max_alpha1_rel},
                             {"max_alpha2_rel", ar.max_alpha2_rel},
                             {"samples", ar.samples}};
        Json jsemi = Json::array();
        Json jquasi = Json::array();
        for (size_t i = 0; i < pts.size() && i < 5; ++i) {
          SemiDecomposition sd =
              semi_c_decomposition_for_change(c, base, pts[i].x, pts[i].y);
          Json je = {{"r", sd.r},
                     {"t", sd.t},
                     {"residual_rel", sd.residual_rel},
                     {"formula_used", sd.formula_used}};
          if (!sd.note.empty()) je["note"] = sd.note;
          jsemi.push_back(std::move(je));
          QuasiSplit qs = quasi_c_split_for_change(c, base, pts[i].x, pts[i].y);
          Json jq;
          jq["lambda"] = qs.lambda;
          if (qs.residual_rel) {
            jq["residual_rel"] = *qs.residual_rel;
          } else {
            jq["note"] = qs.note;
          }
          jquasi.push_back(std::move(jq));
        }
        jp["semi_c_split"] = std::move(jsemi);
        jp["quasi_c_split"] = std::move(jquasi);
      }

      if (base.dim > 2) {
        EnergyEquivalenceReport er = energy_equivalence(c, base, samples, ps, 1e-9, cat.box);
        jp["energy_equivalence"] = {{"max_p_m1", er.max_p_m1},
                                    {"fitted_k", er.fitted_k},
                                    {"q_residual", er.q_residual},
                                    {"c_residual", er.c_residual},
                                    {"trivial_q", er.trivial_q},
                                    {"is_energy", er.is_energy},
                                    {"consistent", er.consistent}};
        all_consistent = all_consistent && er.consistent;
        if (c.family == ChangeSpec::Family::energy)
          std::printf("%s/%s energy equivalence: %s (k=%.6f)\n",
                      pr.metric->label.c_str(), pr.change->label.c_str(),
                      er.is_energy ? "PASS" : "FAIL", er.fitted_k);
      }

      if (base.dim >= 3) {
        Json jdelta = Json::array();
        for (size_t i = 0; i < pts.size() && i < 5; ++i) {
          ChangeDeltaReport dr = change_defect_deltas(c, base, pts[i].x, pts[i].y);
          Json jd;
          jd["d_closed_vs_direct"] = dr.d_closed_vs_direct;
          jd["d_norm_rel"] = dr.d_norm_rel;
          if (dr.I_vs_closed) jd["I_vs_closed"] = *dr.I_vs_closed;
          if (dr.r_vs_closed) jd["r_vs_closed"] = *dr.r_vs_closed;
          if (dr.eps_norm_rel) jd["eps_norm_rel"] = *dr.eps_norm_rel;
          jdelta.push_back(std::move(jd));
        }
        jp["change_deltas"] = std::move(jdelta);
      }

      // b-condition on base and transformed space at the same points
      {
        BConditionReport rb = b_condition(base, c.b, samples, ps, thr, cat.box);
        BConditionReport rt = b_condition(tm, c.b, samples, ps, thr, cat.box);
        bool preserved = rb.samples.size() == rt.samples.size();
        Json jt = Json::array();
        for (size_t i = 0; i < rb.samples.size() && i < rt.samples.size(); ++i) {
          preserved = preserved && (rb.samples[i].pass == rt.samples[i].pass);
          jt.push_back({{"x", rb.samples[i].x},
                        {"y", rb.samples[i].y},
                        {"base_contraction_rel", rb.samples[i].contraction_rel},
                        {"transformed_contraction_rel", rt.samples[i].contraction_rel},
                        {"base_b_cov_norm", rb.samples[i].b_cov_norm},
                        {"base_pass", rb.samples[i].pass},
                        {"transformed_pass", rt.samples[i].pass}});
        }
        jp["b_condition"] = {{"samples", std::move(jt)},
                             {"flag_preserved", preserved}};
        if (c.family == ChangeSpec::Family::energy)
          all_consistent = all_consistent && preserved;
      }

      jpairs.push_back(std::move(jp));
    }
  }
  rep["pairs"] = std::move(jpairs);

  SweepResult sw = consistency_sweep(sweep_pairs, std::min(samples, 8), seed, thr, cat.box);
  Json jsw;
  jsw["checks"] = sw.checks;
  Json jv = Json::array();
  for (const auto& v : sw.violations) jv.push_back(v);
  jsw["violations"] = std::move(jv);
  rep["consistency_sweep"] = std::move(jsw);
  all_consistent = all_consistent && sw.violations.empty();

  rep["pass"] = all_consistent;
  if (!sel.json_path.empty()) write_report_file(rep, sel.json_path);
  std::printf("CLASSIFY: %s (%d sweep checks, %zu violations)\n",
              all_consistent ? "PASS" : "FAIL", sw.checks, sw.violations.size());
  if (!any_data) throw sampling_error("no admissible points in any selection");
  return all_consistent ? 0 : 1;
}

Vec parse_vec(const std::string& text, int dim, const char* what) {
  Vec out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!cur.empty()) {
        try {
          out.push_back(std::stod(cur));
        } catch (const std::exception&) {
          throw usage_error(std::string("bad ") + what + " component: " + cur);
        }
        cur.clear();
      }
    } else {
      cur += ch;
    }
  }
  if (static_cast<int>(out.size()) != dim)
    throw usage_error(std::string(what) + " needs exactly " + std::to_string(dim) +
                      " comma-separated components");
  return out;
}

int cmd_geodesic(const Selection& sel, const std::string& x0_text,
                 const std::string& y0_text, double t_end, int steps) {
  if (steps < 1) throw usage_error("--steps must be >= 1");
  Catalog cat = load_selection_catalog(sel);
  const int samples = sel.samples > 0 ? sel.samples : cat.samples;
  const uint64_t seed = sel.seed.value_or(cat.seed);

  Json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["command"] = "geodesic";
  rep["catalog"] = sel.catalog_path.empty() ? "builtin" : sel.catalog_path;
  rep["steps"] = steps;
  Json jpairs = Json::array();

  bool all_pass = true;
  bool any_data = false;
  for (const auto& pr : select_pairs(cat, sel)) {
    const MetricSpec& base = pr.metric->spec;
    const ChangeSpec& c = pr.change->spec;
    MetricSpec tm = transformed_metric(c, base);
    const uint64_t ps = pair_seed(seed, pr.metric->label, pr.change->label);

    Json jp;
    jp["metric"] = pr.metric->label;
    jp["change"] = pr.change->label;

    Vec x0, y0;
    if (!x0_text.empty()) {
      x0 = parse_vec(x0_text, base.dim, "--x0");
      y0 = parse_vec(y0_text, base.dim, "--y0");
      if (!tm.domain(x0, y0)) throw usage_error("(x0, y0) is not admissible");
    } else {
      auto pts = sample_points(base.dim, tm.domain, 1, ps, cat.box);
      x0 = pts[0].x;
      y0 = pts[0].y;
    }

    double phi_max = 0.0, dev_max = 0.0, douglas_max = 0.0;
    try {
      auto pts = sample_points(base.dim, tm.domain, samples, ps, cat.box);
      for (const auto& pt : pts) {
        phi_max = std::max(phi_max, norm2(phi(c, base, pt.x, pt.y)));
        dev_max = std::max(dev_max, projective_deviation(base, tm, pt.x, pt.y));
      }
      for (size_t i = 0; i < pts.size() && i < 5; ++i)
        douglas_max = std::max(douglas_max, frob(douglas(tm, pts[i].x, pts[i].y)));
      any_data = true;
    } catch (const sampling_error& e) {
      jp["note"] = e.what();
      jpairs.push_back(std::move(jp));
      continue;
    }

    const double geo_dev = geodesic_compare(base, tm, x0, y0, t_end, steps);

    jp["x0"] = x0;
    jp["y0"] = y0;
    jp["phi_max"] = phi_max;
    jp["projective_deviation_max"] = dev_max;
    jp["geodesic_max_deviation"] = geo_dev;
    jp["douglas_norm_max"] = douglas_max;
    const bool projective = phi_max <= 1e-7 && dev_max <= 1e-7 &&
                            geo_dev <= 1e-4 && douglas_max <= 1e-6;
    jp["projective"] = projective;
    jpairs.push_back(std::move(jp));
    std::printf("%s/%s projective verdict: %s (phi %.3e, spray %.3e, geodesic "
                "%.3e, douglas %.3e)\n",
                pr.metric->label.c_str(), pr.change->label.c_str(),
                projective ? "PASS" : "FAIL", phi_max, dev_max, geo_dev,
                douglas_max);
    (void)all_pass;
  }
  rep["pairs"] = std::move(jpairs);
  if (!sel.json_path.empty()) write_report_file(rep, sel.json_path);
  if (!any_data) throw sampling_error("no admissible points in any selection");
  return 0;
}

int cmd_catalog_check(const Selection& sel) {
  Catalog cat = load_selection_catalog(sel);
  CatalogCheckResult res = check_catalog(cat);
  for (const auto& n : res.notes) std::printf("%s\n", n.c_str());
  std::printf("CATALOG: %s (%zu metrics, %zu changes, %d samples, seed %llu)\n",
              res.ok ? "OK" : "INVALID", cat.metrics.size(), cat.changes.size(),
              cat.samples, static_cast<unsigned long long>(cat.seed));
  return res.ok ? 0 : 1;
}

}  // namespace

int run_cli(std::span<const std::string> args) {
  CLI::App app{"numerical laboratory for generalized beta-conformal changes of "
               "Finsler metrics"};
  app.require_subcommand(1);

  Selection sel;
  std::string x0_text, y0_text;
  double t_end = 1.0;
  int steps = 1000;

  auto add_common = [&](CLI::App* sub, bool with_threshold) {
    sub->add_option("--catalog", sel.catalog_path, "catalog file (default: builtin)");
    sub->add_option("--metric", sel.metric_label, "restrict to one base metric");
    sub->add_option("--change", sel.change_label, "restrict to one change");
    sub->add_option("--samples", sel.samples, "sample points per pair");
    uint64_t seed_tmp;
    sub->add_option_function<uint64_t>(
        "--seed", [&sel](const uint64_t& v) { sel.seed = v; }, "sampling seed");
    (void)seed_tmp;
    sub->add_option_function<double>(
        "--tol", [&sel](const double& v) { sel.tol = v; },
        "override every block tolerance");
    if (with_threshold)
      sub->add_option("--threshold", sel.threshold, "vanishing-flag threshold");
    sub->add_option("--json", sel.json_path, "write the JSON report here");
    sub->add_option("--dim", sel.dim, "restrict to metrics of this dimension");
  };

  CLI::App* verify = app.add_subcommand("verify", "closed forms vs jet oracle");
  add_common(verify, false);

  CLI::App* classify = app.add_subcommand("classify", "special-space classification");
  add_common(classify, true);

  CLI::App* geodesic_cmd = app.add_subcommand("geodesic", "projectivity suite");
  add_common(geodesic_cmd, false);
  geodesic_cmd->add_option("--x0", x0_text, "start position (comma separated)");
  geodesic_cmd->add_option("--y0", y0_text, "start direction (comma separated)");
  geodesic_cmd->add_option("--t-end", t_end, "integration time");
  geodesic_cmd->add_option("--steps", steps, "RK4 steps");

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "catalog utilities");
  CLI::App* catalog_check = catalog_cmd->add_subcommand("check", "validate a catalog");
  add_common(catalog_check, false);

  std::vector<std::string> argv_vec(args.begin(), args.end());
  std::reverse(argv_vec.begin(), argv_vec.end());
  try {
    app.parse(argv_vec);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(sel);
    if (classify->parsed()) return cmd_classify(sel);
    if (geodesic_cmd->parsed()) return cmd_geodesic(sel, x0_text, y0_text, t_end, steps);
    if (catalog_cmd->parsed()) {
      if (!catalog_check->parsed())
        throw usage_error("catalog needs a subcommand (check)");
      return cmd_catalog_check(sel);
    }
    throw usage_error("no subcommand given");
  } catch (const usage_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const parse_error& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const sampling_error& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace finsler
