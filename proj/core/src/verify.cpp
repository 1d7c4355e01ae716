#include "urnlab/verify.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "urnlab/stats.hpp"

namespace urnlab {

namespace {

double block_mass(const Vec& full, const CanonicalForm& form, std::size_t block) {
  double s = 0.0;
  for (std::size_t c : form.original_colors(block)) s += full[c];
  return s;
}

double power_log_scale(std::uint64_t n, double alpha, std::size_t beta) {
  const double nn = static_cast<double>(n);
  double s = std::pow(nn, alpha);
  if (beta > 0) s *= std::pow(std::log(nn), static_cast<double>(beta));
  return s;
}

// V-hat for cluster j from a full count/expectation vector at checkpoint n.
double cluster_statistic(const Vec& full, const ClusterForm& cf, std::size_t j,
                         std::uint64_t n) {
  const Cluster& cl = cf.clusters[j];
  const Block& lead = cf.base.blocks[cl.leading_block];
  const Vec counts = gather(full, cf.base.original_colors(cl.leading_block));
  return dot(counts, lead.eigen->right) /
         power_log_scale(n, cl.leading_character, cl.order);
}

}  // namespace

ConvergenceReport verify(const Analysis& analysis,
                         const std::vector<SimulationTrace>& traces,
                         const std::vector<std::pair<std::uint64_t, Vec>>& expectations,
                         const VerifyOptions& options) {
  ConvergenceReport report;
  report.options = options;
  const CanonicalForm& canon = analysis.plan.source_form;
  const ClusterForm& cf = analysis.cluster_form;
  const std::set<std::size_t> violated(cf.assumption_a.violated_clusters.begin(),
                                       cf.assumption_a.violated_clusters.end());

  // --- Exponent fits on the expectation oracle ------------------------------
  std::vector<std::pair<std::uint64_t, Vec>> window_points;
  if (!expectations.empty()) {
    const std::uint64_t n_max = expectations.back().first;
    for (const auto& point : expectations) {
      if (point.first >= 2 && point.first * options.window_divisor >= n_max) {
        window_points.push_back(point);
        report.window.push_back(point.first);
      }
    }
  }
  const bool window_ok = window_points.size() >= 3;
  if (!window_ok) {
    report.warnings.push_back(
        "exponent fits skipped: fewer than three oracle checkpoints in the top window");
  }

  if (!window_points.empty()) {
    SimulationTrace oracle_trace;
    oracle_trace.checkpoints = window_points;
    report.oracle_scaled = scaled_counts(oracle_trace, analysis.plan);
  }

  for (std::size_t k = 0; k < canon.block_count(); ++k) {
    ExponentCheck check;
    check.block = k;
    check.alpha = analysis.plan.pairs[k].alpha;
    check.beta = analysis.plan.pairs[k].beta;
    if (window_ok) {
      std::vector<double> log_n, log_log_n, alpha_y, beta_y;
      for (const auto& [n, e] : window_points) {
        const double mass = block_mass(e, canon, k);
        const double ln = std::log(static_cast<double>(n));
        log_n.push_back(ln);
        log_log_n.push_back(std::log(ln));
        alpha_y.push_back(std::log(mass) -
                          static_cast<double>(check.beta) * std::log(ln));
        beta_y.push_back(std::log(mass) - check.alpha * ln);
      }
      check.alpha_hat = slope(log_n, alpha_y);
      check.beta_hat = slope(log_log_n, beta_y);
      check.alpha_ok = std::abs(check.alpha_hat - check.alpha) <= options.tol_exponent;
      check.beta_ok = std::abs(check.beta_hat - static_cast<double>(check.beta)) < 0.5;
      check.checked = true;
    }
    report.exponents.push_back(check);
  }

  // --- Direction errors on simulated paths ----------------------------------
  for (std::size_t k = 0; k < cf.base.block_count(); ++k) {
    const auto& descriptor = analysis.limits.descriptors[k];
    if (!descriptor || descriptor->kind != LimitKind::random_direction) continue;
    DirectionCheck check;
    check.block = k;
    check.cluster = descriptor->cluster;
    if (!traces.empty()) {
      std::vector<double> angles;
      const auto colors = cf.base.original_colors(k);
      for (const auto& trace : traces) {
        const Vec counts = gather(trace.checkpoints.back().second, colors);
        angles.push_back(angle_between(counts, descriptor->vector));
      }
      check.median_angle = median(angles);
      check.traces = traces.size();
      check.ok = check.median_angle <= options.tol_direction;
      check.checked = true;
    }
    report.directions.push_back(check);
  }
  if (traces.empty()) {
    report.warnings.push_back("path checks skipped: no traces supplied");
  }

  // --- V-hat estimates and ratio links between clusters ---------------------
  if (!traces.empty()) {
    for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
      const Cluster& cl = cf.clusters[j];
      if (cl.leading_character <= kCharacterTol ||
          cl.leading_character >= 1.0 - kCharacterTol) {
        continue;
      }
      std::vector<double> values;
      for (const auto& trace : traces) {
        const auto& [n, counts] = trace.checkpoints.back();
        if (n >= 2) values.push_back(cluster_statistic(counts, cf, j, n));
      }
      if (!values.empty()) {
        report.vhat_estimates.push_back({j, median(values), values.size()});
      }
    }
  }

  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    if (cl.order == 0 || cl.leading_character <= kCharacterTol ||
        cl.leading_character >= 1.0 - kCharacterTol) {
      continue;
    }
    if (violated.count(j) || !analysis.limits.w_defined[j]) {
      std::ostringstream msg;
      msg << "ratio check skipped for cluster " << (j + 1)
          << ": assumption (A) violated";
      report.warnings.push_back(msg.str());
      continue;
    }
    RatioCheck check;
    check.cluster = j;
    check.w = analysis.limits.w_constants[j];
    if (!expectations.empty() && expectations.back().first >= 2) {
      const auto& [n, e] = expectations.back();
      check.oracle_ratio =
          cluster_statistic(e, cf, j, n) / cluster_statistic(e, cf, j - 1, n);
      check.oracle_ok = std::abs(check.oracle_ratio - check.w) <= options.tol_ratio;
      check.oracle_checked = true;
    }
    if (!traces.empty()) {
      std::vector<double> ratios;
      for (const auto& trace : traces) {
        const auto& [n, counts] = trace.checkpoints.back();
        if (n < 2) continue;
        ratios.push_back(cluster_statistic(counts, cf, j, n) /
                         cluster_statistic(counts, cf, j - 1, n));
      }
      if (!ratios.empty()) {
        check.path_median = median(ratios);
        check.path_ok = std::abs(check.path_median - check.w) <= options.tol_ratio;
        check.path_checked = true;
      }
    }
    report.ratios.push_back(check);
  }

  // --- Zero-cluster deterministic limits against the oracle -----------------
  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    if (cl.leading_character > kCharacterTol) break;
    const std::size_t k = cl.leading_block;
    const auto& descriptor = analysis.limits.descriptors[k];
    if (!descriptor) continue;
    ZeroLimitCheck check;
    check.block = k;
    check.predicted = descriptor->vector;
    if (!expectations.empty() && expectations.back().first >= 2) {
      const auto& [n, e] = expectations.back();
      check.oracle_scaled = gather(e, cf.base.original_colors(k));
      const double scale = power_log_scale(n, 0.0, cl.order);
      for (double& x : check.oracle_scaled) x /= scale;
      double rel = 0.0;
      for (std::size_t i = 0; i < check.predicted.size(); ++i) {
        rel = std::max(rel, std::abs(check.oracle_scaled[i] - check.predicted[i]) /
                                check.predicted[i]);
      }
      check.rel_error = rel;
      check.ok = rel <= options.tol_ratio;
      check.checked = true;
    }
    report.zero_limits.push_back(check);
  }

  // --- Stationary distribution of the last block ----------------------------
  {
    const std::size_t last = cf.base.block_count() - 1;
    const auto& descriptor = analysis.limits.descriptors[last];
    if (descriptor && descriptor->kind == LimitKind::stationary) {
      StationaryCheck check;
      const auto colors = cf.base.original_colors(last);
      if (!expectations.empty()) {
        const auto& [n, e] = expectations.back();
        Vec scaled = gather(e, colors);
        for (double& x : scaled) x /= static_cast<double>(n) + 1.0;
        double err = 0.0;
        for (std::size_t i = 0; i < scaled.size(); ++i) {
          err = std::max(err, std::abs(scaled[i] - descriptor->vector[i]));
        }
        check.oracle_max_error = err;
        check.oracle_checked = true;
      }
      if (!traces.empty()) {
        std::vector<double> errors;
        for (const auto& trace : traces) {
          const auto& [n, counts] = trace.checkpoints.back();
          Vec scaled = gather(counts, colors);
          for (double& x : scaled) x /= static_cast<double>(n) + 1.0;
          double err = 0.0;
          for (std::size_t i = 0; i < scaled.size(); ++i) {
            err = std::max(err, std::abs(scaled[i] - descriptor->vector[i]));
          }
          errors.push_back(err);
        }
        check.path_median_max_error = median(errors);
        check.path_checked = true;
      }
      check.ok = (!check.oracle_checked || check.oracle_max_error <= options.tol_direction) &&
                 (!check.path_checked ||
                  check.path_median_max_error <= options.tol_direction) &&
                 (check.oracle_checked || check.path_checked);
      report.stationary = check;
    } else {
      report.warnings.push_back(
          "stationary check skipped: last block carries no identified limit");
    }
  }

  bool pass = true;
  for (const auto& c : report.exponents) {
    if (c.checked && (!c.alpha_ok || !c.beta_ok)) pass = false;
  }
  for (const auto& c : report.directions) {
    if (c.checked && !c.ok) pass = false;
  }
  for (const auto& c : report.ratios) {
    if ((c.oracle_checked && !c.oracle_ok) || (c.path_checked && !c.path_ok)) pass = false;
  }
  for (const auto& c : report.zero_limits) {
    if (c.checked && !c.ok) pass = false;
  }
  if (report.stationary && (report.stationary->oracle_checked ||
                            report.stationary->path_checked) &&
      !report.stationary->ok) {
    pass = false;
  }
  report.pass = pass;
  return report;
}

}  // namespace urnlab
