#include "urnlab/report.hpp"

#include <cmath>

#include <json.hpp>

namespace urnlab {

namespace {

using nlohmann::json;

json to_json(const Vec& v) { return json(v); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json one_based(const std::vector<std::size_t>& ids) {
  json out = json::array();
  for (std::size_t i : ids) out.push_back(i + 1);
  return out;
}

json blocks_json(const CanonicalForm& form) {
  json out = json::array();
  for (std::size_t k = 0; k < form.block_count(); ++k) {
    const Block& b = form.blocks[k];
    json jb{{"index", k + 1},
            {"colors", one_based(form.original_colors(k))},
            {"kind", b.kind == BlockKind::irreducible ? "irreducible" : "zero"},
            {"character", b.character}};
    if (b.eigen) {
      jb["pi"] = to_json(b.eigen->left);
      jb["zeta"] = to_json(b.eigen->right);
    }
    out.push_back(std::move(jb));
  }
  return out;
}

const char* kind_name(LimitKind kind) {
  switch (kind) {
    case LimitKind::deterministic: return "deterministic";
    case LimitKind::random_direction: return "direction";
    case LimitKind::stationary: return "stationary";
  }
  return "unknown";
}

}  // namespace

std::string analysis_report_json(const Analysis& a, int indent) {
  const ClusterForm& cf = a.cluster_form;

  json clusters = json::array();
  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    std::vector<std::size_t> members;
    for (std::size_t k = cl.leading_block; k < cl.leading_block + cl.block_count; ++k) {
      members.push_back(k);
    }
    clusters.push_back(json{{"index", j + 1},
                            {"leading_block", cl.leading_block + 1},
                            {"blocks", one_based(members)},
                            {"lambda", cl.leading_character},
                            {"kappa", cl.order}});
  }

  json rates_blocks = json::array();
  json rates_colors = json::array();
  for (std::size_t k = 0; k < a.plan.source_form.block_count(); ++k) {
    const RatePair& rp = a.plan.pairs[k];
    const auto colors = a.plan.source_form.original_colors(k);
    rates_blocks.push_back(json{{"block", k + 1},
                                {"colors", one_based(colors)},
                                {"alpha", rp.alpha},
                                {"beta", rp.beta}});
    for (std::size_t c : colors) {
      rates_colors.push_back(json{{"color", c + 1}, {"alpha", rp.alpha}, {"beta", rp.beta}});
    }
  }
  std::sort(rates_colors.begin(), rates_colors.end(),
            [](const json& x, const json& y) { return x["color"] < y["color"]; });

  json descriptors = json::array();
  for (std::size_t k = 0; k < cf.base.block_count(); ++k) {
    const auto& d = a.limits.descriptors[k];
    json jd{{"block", k + 1}, {"colors", one_based(cf.base.original_colors(k))}};
    if (d) {
      jd["identified"] = true;
      jd["cluster"] = d->cluster + 1;
      jd["type"] = kind_name(d->kind);
      jd["vector"] = to_json(d->vector);
    } else {
      jd["identified"] = false;
    }
    descriptors.push_back(std::move(jd));
  }

  json w_constants = json::array();
  for (std::size_t j = 0; j < a.limits.w_constants.size(); ++j) {
    json jw{{"cluster", j + 1}};
    if (a.limits.w_defined[j]) {
      jw["w"] = a.limits.w_constants[j];
    } else {
      jw["w"] = nullptr;
    }
    w_constants.push_back(std::move(jw));
  }

  json v_links = json::array();
  for (const VLink& link : a.limits.v_links) {
    v_links.push_back(json{{"cluster", link.cluster + 1}, {"w", link.w}});
  }

  json warnings = json::array();
  for (const Warning& w : a.warnings) {
    warnings.push_back(json{{"kind", w.kind}, {"message", w.message}});
  }

  json doc{
      {"format", "urnlab-analysis/1"},
      {"log", "natural"},
      {"input",
       {{"colors", a.spec.colors()},
        {"matrix", to_json(a.spec.matrix())},
        {"initial", to_json(a.spec.initial())},
        {"row_sum", a.spec.row_sum()}}},
      {"canonical",
       {{"permutation", one_based(a.canonical.permutation)},
        {"blocks", blocks_json(a.canonical)}}},
      {"increasing_order",
       {{"permutation", one_based(cf.base.permutation)},
        {"blocks", blocks_json(cf.base)},
        {"clusters", clusters},
        {"assumption_a",
         {{"holds", cf.assumption_a.holds},
          {"violated_clusters", one_based(cf.assumption_a.violated_clusters)}}}}},
      {"rates",
       {{"per_block", rates_blocks},
        {"per_color", rates_colors},
        {"cross_check", a.cross_check ? (a.cross_check->match ? "match" : "mismatch")
                                      : "skipped"}}},
      {"limits",
       {{"partial", a.limits.partial},
        {"descriptors", descriptors},
        {"w_constants", w_constants},
        {"v_links", v_links}}},
      {"warnings", warnings},
  };
  return doc.dump(indent) + "\n";
}

std::string convergence_report_json(const ConvergenceReport& r, int indent) {
  json oracle_scaled = json::array();
  for (const auto& s : r.oracle_scaled) {
    oracle_scaled.push_back(json{{"N", s.n},
                                 {"block", s.block + 1},
                                 {"value", to_json(s.value)},
                                 {"scaling_valid", s.scaling_valid}});
  }
  json vhat = json::array();
  for (const auto& v : r.vhat_estimates) {
    vhat.push_back(
        json{{"cluster", v.cluster + 1}, {"median", v.median}, {"traces", v.traces}});
  }
  json exponents = json::array();
  for (const auto& c : r.exponents) {
    exponents.push_back(json{{"block", c.block + 1},
                             {"alpha", c.alpha},
                             {"beta", c.beta},
                             {"alpha_hat", c.alpha_hat},
                             {"beta_hat", c.beta_hat},
                             {"alpha_ok", c.alpha_ok},
                             {"beta_ok", c.beta_ok},
                             {"checked", c.checked}});
  }
  json directions = json::array();
  for (const auto& c : r.directions) {
    directions.push_back(json{{"block", c.block + 1},
                              {"cluster", c.cluster + 1},
                              {"median_angle", c.median_angle},
                              {"traces", c.traces},
                              {"ok", c.ok},
                              {"checked", c.checked}});
  }
  json ratios = json::array();
  for (const auto& c : r.ratios) {
    ratios.push_back(json{{"cluster", c.cluster + 1},
                          {"w", c.w},
                          {"oracle_ratio", c.oracle_ratio},
                          {"oracle_ok", c.oracle_ok},
                          {"oracle_checked", c.oracle_checked},
                          {"path_median", c.path_median},
                          {"path_ok", c.path_ok},
                          {"path_checked", c.path_checked}});
  }
  json zero_limits = json::array();
  for (const auto& c : r.zero_limits) {
    zero_limits.push_back(json{{"block", c.block + 1},
                               {"predicted", to_json(c.predicted)},
                               {"oracle_scaled", to_json(c.oracle_scaled)},
                               {"rel_error", c.rel_error},
                               {"ok", c.ok},
                               {"checked", c.checked}});
  }

  json doc{
      {"format", "urnlab-verify/1"},
      {"log", "natural"},
      {"pass", r.pass},
      {"window", r.window},
      {"tolerances",
       {{"direction", r.options.tol_direction},
        {"exponent", r.options.tol_exponent},
        {"ratio", r.options.tol_ratio},
        {"window_divisor", r.options.window_divisor}}},
      {"oracle_scaled", oracle_scaled},
      {"vhat_estimates", vhat},
      {"exponents", exponents},
      {"directions", directions},
      {"ratios", ratios},
      {"zero_limits", zero_limits},
      {"warnings", r.warnings},
  };
  if (r.stationary) {
    doc["stationary"] = json{{"oracle_max_error", r.stationary->oracle_max_error},
                             {"oracle_checked", r.stationary->oracle_checked},
                             {"path_median_max_error", r.stationary->path_median_max_error},
                             {"path_checked", r.stationary->path_checked},
                             {"ok", r.stationary->ok}};
  } else {
    doc["stationary"] = nullptr;
  }
  return doc.dump(indent) + "\n";
}

}  // namespace urnlab
