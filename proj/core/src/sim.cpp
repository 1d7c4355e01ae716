#include "urnlab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace urnlab {

namespace {

constexpr std::uint64_t kResyncMask = (1ull << 16) - 1;

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void step(UrnState& state, const ReplacementSpec& spec, RngStream& rng) {
  const Matrix& r = spec.matrix();
  const std::size_t d = state.counts.size();
  if (state.compensation.size() != d) state.compensation.assign(d, 0.0);
  const double total = 1.0 + static_cast<double>(state.steps);

  const double u = rng.next_unit() * total;
  std::size_t color = 0;
  double acc = state.counts[0];
  while (u >= acc && color + 1 < d) acc += state.counts[++color];

  // Kahan-compensated accumulation: once counts reach 1e6-scale, plain
  // addition of sub-unit row entries rounds with a per-color bias that can
  // push the total well past the 1e-6 drift budget between resyncs.
  const auto row = r.row(color);
  for (std::size_t j = 0; j < d; ++j) {
    const double y = row[j] - state.compensation[j];
    const double t = state.counts[j] + y;
    state.compensation[j] = (t - state.counts[j]) - y;
    state.counts[j] = t;
  }
  ++state.steps;

  // Periodically pin the total back to the exact value 1 + N.
  if ((state.steps & kResyncMask) == 0) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      state.counts[j] -= state.compensation[j];
      state.compensation[j] = 0.0;
      s += state.counts[j];
    }
    const double factor = (1.0 + static_cast<double>(state.steps)) / s;
    for (double& c : state.counts) c *= factor;
  }
}

std::vector<std::uint64_t> pow2_schedule(std::uint64_t n_max, unsigned min_exp) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1ull << min_exp; n <= n_max; n <<= 1) out.push_back(n);
  if (n_max > 0 && (out.empty() || out.back() != n_max)) out.push_back(n_max);
  return out;
}

SimulationTrace simulate(const ReplacementSpec& spec, std::uint64_t n_max,
                         std::span<const std::uint64_t> schedule, std::uint64_t seed,
                         std::uint64_t replication_id) {
  std::vector<std::uint64_t> marks(schedule.begin(), schedule.end());
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  if (!marks.empty() && marks.back() > n_max) {
    throw std::invalid_argument("simulate: checkpoint beyond n_max");
  }

  SimulationTrace trace;
  trace.seed = seed;
  trace.replication_id = replication_id;
  trace.checkpoints.emplace_back(0, spec.initial());

  UrnState state{spec.initial(), 0, {}};
  RngStream rng(seed, replication_id);
  std::size_t next_mark = 0;
  while (next_mark < marks.size() && marks[next_mark] == 0) ++next_mark;

  for (std::uint64_t n = 1; n <= n_max; ++n) {
    step(state, spec, rng);
    if (next_mark < marks.size() && marks[next_mark] == n) {
      trace.checkpoints.emplace_back(n, state.counts);
      ++next_mark;
    }
  }
  return trace;
}

std::vector<SimulationTrace> run_replications(const ReplacementSpec& spec,
                                              std::uint64_t n_max,
                                              std::span<const std::uint64_t> schedule,
                                              std::uint64_t seed, std::uint64_t count,
                                              unsigned threads) {
  std::vector<SimulationTrace> traces(count);
  if (count == 0) return traces;

  unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));

  if (workers == 1) {
    for (std::uint64_t rep = 0; rep < count; ++rep) {
      traces[rep] = simulate(spec, n_max, schedule, seed, rep);
    }
    return traces;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::uint64_t rep = w; rep < count; rep += workers) {
        traces[rep] = simulate(spec, n_max, schedule, seed, rep);
      }
    });
  }
  for (auto& t : pool) t.join();
  return traces;
}

Vec expectation(const ReplacementSpec& spec, std::uint64_t n) {
  const Matrix& r = spec.matrix();
  const std::size_t d = spec.colors();
  Vec e = spec.initial();
  Vec delta(d);
  for (std::uint64_t step_n = 1; step_n <= n; ++step_n) {
    const double inv = 1.0 / static_cast<double>(step_n);
    for (std::size_t j = 0; j < d; ++j) delta[j] = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double w = e[i] * inv;
      if (w == 0.0) continue;
      const auto row = r.row(i);
      for (std::size_t j = 0; j < d; ++j) delta[j] += w * row[j];
    }
    for (std::size_t j = 0; j < d; ++j) e[j] += delta[j];
  }
  return e;
}

std::vector<std::pair<std::uint64_t, Vec>> expectation_checkpoints(
    const ReplacementSpec& spec, std::span<const std::uint64_t> schedule) {
  std::vector<std::uint64_t> marks(schedule.begin(), schedule.end());
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  const Matrix& r = spec.matrix();
  const std::size_t d = spec.colors();
  std::vector<std::pair<std::uint64_t, Vec>> out;
  Vec e = spec.initial();
  Vec delta(d);
  std::size_t next_mark = 0;
  if (next_mark < marks.size() && marks[next_mark] == 0) {
    out.emplace_back(0, e);
    ++next_mark;
  }
  const std::uint64_t n_max = marks.empty() ? 0 : marks.back();
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) delta[j] = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double w = e[i] * inv;
      if (w == 0.0) continue;
      const auto row = r.row(i);
      for (std::size_t j = 0; j < d; ++j) delta[j] += w * row[j];
    }
    for (std::size_t j = 0; j < d; ++j) e[j] += delta[j];
    if (next_mark < marks.size() && marks[next_mark] == n) {
      out.emplace_back(n, e);
      ++next_mark;
    }
  }
  return out;
}

std::vector<ScaledBlockValue> scaled_counts(const SimulationTrace& trace,
                                            const RatePlan& plan) {
  const CanonicalForm& canon = plan.source_form;
  std::vector<ScaledBlockValue> out;
  out.reserve(trace.checkpoints.size() * canon.block_count());

  for (const auto& [n, counts] : trace.checkpoints) {
    for (std::size_t k = 0; k < canon.block_count(); ++k) {
      const RatePair& rate = plan.pairs[k];
      ScaledBlockValue v;
      v.n = n;
      v.block = k;
      const auto colors = canon.original_colors(k);
      v.value = gather(counts, colors);
      const bool needs_log = rate.beta > 0;
      if ((needs_log && n <= 1) || (n == 0 && rate.alpha != 0.0)) {
        v.scaling_valid = false;  // log 1 = 0 and 0^alpha are not usable scales
      } else {
        const double nn = static_cast<double>(n);
        const double scale =
            std::pow(nn, rate.alpha) *
            (needs_log ? std::pow(std::log(nn), static_cast<double>(rate.beta)) : 1.0);
        for (double& x : v.value) x /= scale;
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  if (trace.checkpoints.empty()) return;
  const std::size_t d = trace.checkpoints.front().second.size();
  std::string line = "replication_id,N";
  for (std::size_t c = 0; c < d; ++c) {
    line += ",color_" + std::to_string(c + 1);
  }
  line += '\n';
  out << line;
  for (const auto& [n, counts] : trace.checkpoints) {
    line = std::to_string(trace.replication_id);
    line += ',';
    line += std::to_string(n);
    for (double v : counts) {
      line += ',';
      append_number(line, v);
    }
    line += '\n';
    out << line;
  }
}

Aggregate aggregate_traces(const std::vector<SimulationTrace>& traces) {
  Aggregate agg;
  if (traces.empty()) return agg;
  agg.replications = traces.size();
  const auto& first = traces.front().checkpoints;
  const std::size_t d = first.empty() ? 0 : first.front().second.size();

  for (std::size_t ci = 0; ci < first.size(); ++ci) {
    const std::uint64_t n = first[ci].first;
    Vec mean(d, 0.0);
    Vec m2(d, 0.0);
    for (const auto& trace : traces) {
      const auto& [tn, counts] = trace.checkpoints.at(ci);
      if (tn != n) throw std::invalid_argument("aggregate_traces: mismatched schedules");
      for (std::size_t c = 0; c < d; ++c) {
        mean[c] += counts[c];
        m2[c] += counts[c] * counts[c];
      }
    }
    const double r = static_cast<double>(traces.size());
    Vec se(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
      mean[c] /= r;
      if (traces.size() > 1) {
        const double var = std::max(0.0, (m2[c] - r * mean[c] * mean[c]) / (r - 1.0));
        se[c] = std::sqrt(var / r);
      }
    }
    agg.ns.push_back(n);
    agg.mean.push_back(std::move(mean));
    agg.se.push_back(std::move(se));
  }
  return agg;
}

void write_aggregate_csv(std::ostream& out, const Aggregate& agg) {
  const std::size_t d = agg.mean.empty() ? 0 : agg.mean.front().size();
  std::string line = "N";
  for (std::size_t c = 0; c < d; ++c) line += ",mean_color_" + std::to_string(c + 1);
  for (std::size_t c = 0; c < d; ++c) line += ",se_color_" + std::to_string(c + 1);
  line += '\n';
  out << line;
  for (std::size_t i = 0; i < agg.ns.size(); ++i) {
    line = std::to_string(agg.ns[i]);
    for (double v : agg.mean[i]) {
      line += ',';
      append_number(line, v);
    }
    for (double v : agg.se[i]) {
      line += ',';
      append_number(line, v);
    }
    line += '\n';
    out << line;
  }
}

}  // namespace urnlab
