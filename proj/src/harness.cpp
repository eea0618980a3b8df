#include "replan/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "replan/errors.hpp"
#include "replan/io.hpp"
#include "replan/oracle.hpp"

namespace replan {

namespace {

// Stream tag for the Dyna sampler so it never shares bits with the environment.
constexpr std::uint64_t kDynaStream = 0x44594E41ULL;

constexpr double kDiverged = std::numeric_limits<double>::infinity();

std::vector<double> random_walk_trial(const RunConfig& config, std::uint64_t seed) {
  Rng env_rng(seed);
  Learner learner(config.algorithm, config.hyperparams, RandomWalk::kNonTerminal,
                  mix_seed(seed, kDynaStream));
  RandomWalk env;
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(config.episodes));
  for (int ep = 0; ep < config.episodes; ++ep) {
    if (!learner.weights().all_finite()) {
      curve.push_back(kDiverged);
      continue;
    }
    learner.begin_episode();
    RealVec phi = env.reset();
    while (!env.terminal()) {
      Transition tr = env.step(env_rng);
      learner.step(phi, tr.phi_next, tr.reward);
      phi = std::move(tr.phi_next);
    }
    const double err = rmse_random_walk(learner.weights());
    curve.push_back(std::isfinite(err) ? err : kDiverged);
  }
  return curve;
}

std::vector<double> trace_trial(const RunConfig& config, const TraceDataset& data,
                                std::size_t trial, std::uint64_t seed) {
  Learner learner(config.algorithm, config.hyperparams, data.n_features,
                  mix_seed(seed, kDynaStream));
  std::vector<double> curve;
  const std::size_t per_trial = static_cast<std::size_t>(config.episodes);
  for (std::size_t e = 0; e < per_trial; ++e) {
    if (!learner.weights().all_finite()) {
      curve.push_back(kDiverged);
      continue;
    }
    const TraceBuffer& ep = data.episodes[(trial * per_trial + e) % data.episodes.size()];
    learner.begin_episode();
    for (std::size_t k = 0; k < ep.steps(); ++k) {
      learner.step(ep.features[k], ep.next_feature(k), ep.rewards[k]);
    }
    const auto truth = mc_ground_truth(ep, data.gamma_truth);
    const double err = rmse_trace(learner.weights(), ep, truth);
    curve.push_back(std::isfinite(err) ? err : kDiverged);
  }
  return curve;
}

double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_error_of(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string tick_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

// --- Configuration ------------------------------------------------------------

void RunConfig::validate() const {
  hyperparams.validate();
  if (episodes < 1) throw UsageError("episodes must be >= 1");
  if (trials < 1) throw UsageError("trials must be >= 1");
  if (const auto* trace = std::get_if<TraceEnv>(&environment)) {
    if (!trace->data || trace->data->episodes.empty()) {
      throw UsageError("trace environment has no episodes");
    }
    if (trace->data->n_features == 0) throw UsageError("trace environment has no features");
  }
}

RunConfig canonical(RunConfig config) {
  auto& h = config.hyperparams;
  switch (config.algorithm) {
    case Algorithm::Replan:
      h.lambda_replay = 1.0;
      break;
    case Algorithm::ReplanInterp:
      break;
    case Algorithm::TrueOnlineTD:
      h.lambda_replay = 0.0;
      break;
    case Algorithm::TD0:
    case Algorithm::Dyna:
      h.lambda = 0.0;
      h.lambda_replay = 0.0;
      break;
  }
  return config;
}

CellKey CellKey::of(const RunConfig& c) {
  return {c.algorithm, c.hyperparams.alpha, c.hyperparams.lambda, c.hyperparams.lambda_replay};
}

// --- Metrics ------------------------------------------------------------------

double rmse_random_walk(std::span<const double> theta) {
  if (theta.size() != RandomWalk::kNonTerminal) {
    throw DimensionError("rmse_random_walk: expected 16 weights, got " +
                         std::to_string(theta.size()));
  }
  // One-hot features: theta^T phi(p) is theta[p-1].
  double ss = 0.0;
  for (int p = 1; p <= RandomWalk::kNonTerminal; ++p) {
    const double err = theta[static_cast<std::size_t>(p - 1)] - rw_value_at(p);
    ss += err * err;
  }
  return std::sqrt(ss / RandomWalk::kNonTerminal);
}

double rmse_trace(std::span<const double> theta, const TraceBuffer& trace,
                  std::span<const double> truth) {
  if (truth.size() != trace.steps()) {
    throw DimensionError("rmse_trace: " + std::to_string(truth.size()) + " targets for " +
                         std::to_string(trace.steps()) + " steps");
  }
  if (trace.steps() == 0) return 0.0;
  double ss = 0.0;
  for (std::size_t k = 0; k < trace.steps(); ++k) {
    const double err = predict(theta, trace.features[k]) - truth[k];
    ss += err * err;
  }
  return std::sqrt(ss / static_cast<double>(trace.steps()));
}

// --- Runs ---------------------------------------------------------------------

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) {
  return mix_seed(base, static_cast<std::uint64_t>(trial));
}

std::vector<double> run_trial(const RunConfig& config, std::size_t trial) {
  config.validate();
  const std::uint64_t seed = trial_seed(config.seed, trial);
  if (const auto* trace = std::get_if<TraceEnv>(&config.environment)) {
    return trace_trial(config, *trace->data, trial, seed);
  }
  return random_walk_trial(config, seed);
}

double LearningCurve::overall_mean() const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : per_trial) {
    for (double x : t) sum += x;
    count += t.size();
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double LearningCurve::overall_std_error() const {
  std::vector<double> trial_means;
  for (const auto& t : per_trial) trial_means.push_back(mean_of(t));
  return std_error_of(trial_means);
}

LearningCurve LearningCurve::from_trials(std::vector<std::vector<double>> per_trial) {
  LearningCurve c;
  c.per_trial = std::move(per_trial);
  const std::size_t episodes = c.per_trial.empty() ? 0 : c.per_trial.front().size();
  std::vector<double> column(c.per_trial.size());
  for (std::size_t e = 0; e < episodes; ++e) {
    for (std::size_t t = 0; t < c.per_trial.size(); ++t) column[t] = c.per_trial[t][e];
    c.mean.push_back(mean_of(column));
    c.std_error.push_back(std_error_of(column));
  }
  return c;
}

LearningCurve run_curve(const RunConfig& config, Exec exec) {
  const RunConfig one[] = {config};
  ResultGrid grid = sweep(one, exec);
  CellResult& cell = grid.cells.begin()->second;
  if (cell.error) throw std::runtime_error(*cell.error);
  return std::move(cell.curve);
}

ResultGrid sweep(std::span<const RunConfig> grid, Exec exec) {
  std::vector<RunConfig> cells;
  cells.reserve(grid.size());
  std::set<CellKey> seen;
  for (const auto& c : grid) {
    RunConfig cc = canonical(c);
    if (!seen.insert(CellKey::of(cc)).second) {
      throw UsageError("sweep: duplicate cell " + series_label(cc) +
                       " alpha=" + format_real(cc.hyperparams.alpha));
    }
    cells.push_back(std::move(cc));
  }

  // Flatten (cell, trial) work items; each writes only its own slot.
  struct Item {
    std::size_t cell;
    std::size_t trial;
  };
  std::vector<Item> items;
  std::vector<std::vector<std::vector<double>>> curves(cells.size());
  std::vector<std::string> errors(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto trials = static_cast<std::size_t>(std::max(cells[c].trials, 0));
    curves[c].resize(trials);
    try {
      cells[c].validate();
      for (std::size_t t = 0; t < trials; ++t) items.push_back({c, t});
    } catch (const std::exception& e) {
      errors[c] = e.what();
    }
  }
  std::vector<std::string> item_errors(items.size());

  auto run_item = [&](std::size_t i) {
    const Item& it = items[i];
    try {
      curves[it.cell][it.trial] = run_trial(cells[it.cell], it.trial);
    } catch (const std::exception& e) {
      item_errors[i] = e.what();
    }
  };

  const bool parallel = exec != Exec::Serial;
  if (parallel) {
    const auto n_items = static_cast<std::ptrdiff_t>(items.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n_items; ++i) run_item(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < items.size(); ++i) run_item(i);
  }

  // Deterministic reduce in item order.
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& err = errors[items[i].cell];
    if (!item_errors[i].empty() && err.empty()) {
      err = "trial " + std::to_string(items[i].trial) + ": " + item_errors[i];
    }
  }

  ResultGrid out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult r;
    r.config = cells[c];
    if (!errors[c].empty()) {
      r.error = errors[c];
      r.mean_rmse = std::numeric_limits<double>::quiet_NaN();
      r.stderr_rmse = std::numeric_limits<double>::quiet_NaN();
    } else {
      r.curve = LearningCurve::from_trials(std::move(curves[c]));
      r.mean_rmse = r.curve.overall_mean();
      r.stderr_rmse = r.curve.overall_std_error();
    }
    out.cells.emplace(CellKey::of(cells[c]), std::move(r));
  }
  return out;
}

std::vector<double> value_range(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw UsageError("value_range: need step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Round to 12 significant digits so 0.01 * 7 becomes 0.07, not 0.07000000000000001.
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", start + step * static_cast<double>(i));
    out.push_back(std::strtod(buf, nullptr));
  }
  return out;
}

// --- CSV ----------------------------------------------------------------------

void write_results_csv(const ResultGrid& grid, std::ostream& out) {
  out << "algorithm,alpha,lambda,lambda_replay,episodes,trials,mean_rmse,stderr_rmse\n";
  for (const auto& [key, cell] : grid.cells) {
    out << to_string(key.algorithm) << ',' << format_real(key.alpha) << ','
        << format_real(key.lambda) << ',' << format_real(key.lambda_replay) << ','
        << cell.config.episodes << ',' << cell.config.trials << ',' << format_real(cell.mean_rmse)
        << ',' << format_real(cell.stderr_rmse) << '\n';
  }
}

void write_results_csv(const ResultGrid& grid, const std::filesystem::path& path) {
  write_file_atomically(path, [&](std::ostream& out) { write_results_csv(grid, out); });
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "algorithm,alpha,lambda,lambda_replay,episodes,trials,mean_rmse,stderr_rmse") {
        throw ParseError("unexpected results header", line_no);
      }
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw ParseError("expected 8 fields", line_no);
    ResultRow r;
    r.algorithm = std::string(trim(f[0]));
    r.alpha = parse_real(f[1], line_no);
    r.lambda = parse_real(f[2], line_no);
    r.lambda_replay = parse_real(f[3], line_no);
    r.episodes = static_cast<int>(parse_integer(f[4], line_no));
    r.trials = static_cast<int>(parse_integer(f[5], line_no));
    r.mean_rmse = parse_real(f[6], line_no);
    r.stderr_rmse = parse_real(f[7], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_curve_csv(const RunConfig& config, const LearningCurve& curve, std::ostream& out) {
  out << "algorithm,alpha,lambda,lambda_replay,trial,episode,rmse\n";
  const auto& h = config.hyperparams;
  const std::string prefix = std::string(to_string(config.algorithm)) + ',' +
                             format_real(h.alpha) + ',' + format_real(h.lambda) + ',' +
                             format_real(h.lambda_replay) + ',';
  for (std::size_t t = 0; t < curve.per_trial.size(); ++t) {
    for (std::size_t e = 0; e < curve.per_trial[t].size(); ++e) {
      out << prefix << t << ',' << e + 1 << ',' << format_real(curve.per_trial[t][e]) << '\n';
    }
  }
}

void write_curve_csv(const RunConfig& config, const LearningCurve& curve,
                     const std::filesystem::path& path) {
  write_file_atomically(path, [&](std::ostream& out) { write_curve_csv(config, curve, out); });
}

// --- SVG ----------------------------------------------------------------------

std::string series_label(const RunConfig& config) {
  const auto& h = config.hyperparams;
  std::string label(to_string(config.algorithm));
  switch (config.algorithm) {
    case Algorithm::Replan:
    case Algorithm::TrueOnlineTD:
      label += " lambda=" + format_real(h.lambda);
      break;
    case Algorithm::ReplanInterp:
      label += " lambda=" + format_real(h.lambda) + " replay=" + format_real(h.lambda_replay);
      break;
    case Algorithm::TD0:
      break;
    case Algorithm::Dyna:
      label += " p=" + std::to_string(h.dyna_planning_steps);
      break;
  }
  return label;
}

std::string render_svg(const SvgFigure& fig) {
  constexpr double kWidth = 760, kHeight = 480;
  constexpr double kLeft = 70, kRight = 230, kTop = 40, kBottom = 60;
  constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                 "#bcbd22", "#17becf"};

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : fig.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double y = fig.y_max ? std::min(s.y[i], *fig.y_max) : s.y[i];
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  y_lo = std::min(y_lo, 0.0);
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(fig.title) << "</text>\n";

  // Axes and ticks.
  o << "<g stroke=\"black\" stroke-width=\"1\">\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
    << "\" y2=\"" << kTop + plot_h << "\"/>\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
    << kTop + plot_h << "\"/>\n</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / kTicks;
    const double yv = y_lo + (y_hi - y_lo) * i / kTicks;
    o << "<line x1=\"" << coord(px(xv)) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << coord(px(xv)) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>"
      << "<text x=\"" << coord(px(xv)) << "\" y=\"" << kTop + plot_h + 18
      << "\" text-anchor=\"middle\">" << tick_text(xv) << "</text>\n"
      << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << coord(py(yv)) << "\" x2=\"" << kLeft
      << "\" y2=\"" << coord(py(yv)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << kLeft - 8 << "\" y=\"" << coord(py(yv) + 4)
      << "\" text-anchor=\"end\">" << tick_text(yv) << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << xml_escape(fig.x_label) << "</text>\n"
    << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
    << kTop + plot_h / 2 << ")\">" << xml_escape(fig.y_label) << "</text>\n";

  for (std::size_t s = 0; s < fig.series.size(); ++s) {
    const auto& series = fig.series[s];
    const char* color = kPalette[s % kPalette.size()];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(series.x.size(), series.y.size()); ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
      const double y = fig.y_max ? std::min(series.y[i], *fig.y_max) : series.y[i];
      o << (first ? "" : " ") << coord(px(series.x[i])) << ',' << coord(py(y));
      first = false;
    }
    o << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly << "\" x2=\""
      << kWidth - kRight + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/><text x=\"" << kWidth - kRight + 45 << "\" y=\"" << ly + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void emit_svg(const SvgFigure& figure, const std::filesystem::path& path) {
  const std::string doc = render_svg(figure);
  write_file_atomically(path, [&](std::ostream& out) { out << doc; });
}

SvgFigure sweep_figure(const ResultGrid& grid, std::string title) {
  SvgFigure fig{std::move(title), "step size alpha", "mean RMSE", {}, std::nullopt};
  std::map<std::tuple<Algorithm, double, double>, std::size_t> index;
  for (const auto& [key, cell] : grid.cells) {
    const auto series_key = std::make_tuple(key.algorithm, key.lambda, key.lambda_replay);
    auto [it, inserted] = index.try_emplace(series_key, fig.series.size());
    if (inserted) fig.series.push_back({series_label(cell.config), {}, {}});
    auto& s = fig.series[it->second];
    s.x.push_back(key.alpha);
    s.y.push_back(cell.mean_rmse);
  }
  // Diverged cells would flatten everything else.
  double worst_finite = 0.0;
  for (const auto& s : fig.series) {
    for (double y : s.y) {
      if (std::isfinite(y)) worst_finite = std::max(worst_finite, y);
    }
  }
  fig.y_max = std::max(1.0, std::min(worst_finite, 1.5));
  return fig;
}

SvgFigure curve_figure(std::span<const RunConfig> configs, std::span<const LearningCurve> curves,
                       std::string title) {
  SvgFigure fig{std::move(title), "episode", "RMSE", {}, std::nullopt};
  for (std::size_t i = 0; i < std::min(configs.size(), curves.size()); ++i) {
    SvgSeries s{series_label(configs[i]) + " alpha=" + format_real(configs[i].hyperparams.alpha),
                {},
                curves[i].mean};
    for (std::size_t e = 0; e < curves[i].mean.size(); ++e) s.x.push_back(static_cast<double>(e + 1));
    fig.series.push_back(std::move(s));
  }
  return fig;
}

// --- Cost probe -----------------------------------------------------------------

CostReport step_cost_probe(ProbeTarget target, std::size_t n, std::size_t steps,
                           std::uint64_t seed, int repeats, std::size_t window) {
  if (n == 0 || steps == 0 || window == 0 || window > steps) {
    throw UsageError("step_cost_probe: need n > 0 and 0 < window <= steps");
  }
  using Clock = std::chrono::steady_clock;

  Rng rng(mix_seed(seed));
  TraceBuffer trace;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t t = 0; t < steps; ++t) {
    RealVec phi(n);
    for (auto& x : phi) x = scale * standard_normal(rng);
    trace.features.push_back(std::move(phi));
    trace.rewards.push_back(standard_normal(rng));
  }
  Hyperparams h;
  h.alpha = 0.05;
  h.gamma = 0.9;
  h.lambda = 0.9;

  std::vector<double> best(steps, std::numeric_limits<double>::infinity());
  auto record = [&](std::size_t t, Clock::time_point a, Clock::time_point b) {
    const double ns = std::chrono::duration<double, std::nano>(b - a).count();
    best[t] = std::min(best[t], ns);
  };

  // One extra untimed pass warms caches and the allocator.
  for (int r = 0; r <= std::max(repeats, 1); ++r) {
    const bool timed = r > 0;
    switch (target) {
      case ProbeTarget::Replan: {
        ReplanState s(n);
        for (std::size_t t = 0; t < steps; ++t) {
          const RealVec next = trace.next_feature(t);
          const auto a = Clock::now();
          replan_step(s, trace.features[t], next, trace.rewards[t], h);
          const auto b = Clock::now();
          if (timed) record(t, a, b);
        }
        break;
      }
      case ProbeTarget::TrueOnlineTD: {
        TrueOnlineTDState s(n);
        for (std::size_t t = 0; t < steps; ++t) {
          const RealVec next = trace.next_feature(t);
          const auto a = Clock::now();
          true_online_td_step(s, trace.features[t], next, trace.rewards[t], h);
          const auto b = Clock::now();
          if (timed) record(t, a, b);
        }
        break;
      }
      case ProbeTarget::TD0: {
        TD0State s(n);
        for (std::size_t t = 0; t < steps; ++t) {
          const RealVec next = trace.next_feature(t);
          const auto a = Clock::now();
          td0_step(s, trace.features[t], next, trace.rewards[t], h);
          const auto b = Clock::now();
          if (timed) record(t, a, b);
        }
        break;
      }
      case ProbeTarget::ForwardOracle: {
        WeightHistory hist;
        hist.thetas.emplace_back(n);
        hist.thetas.reserve(steps + 1);
        for (std::size_t t = 0; t < steps; ++t) {
          const auto a = Clock::now();
          RealVec next = forward_replay_bundle(trace, hist, hist.thetas[t], t, h);
          const auto b = Clock::now();
          hist.thetas.push_back(std::move(next));
          if (timed) record(t, a, b);
        }
        break;
      }
    }
  }

  CostReport report;
  report.early_ns = mean_of(std::span<const double>(best).first(window));
  report.late_ns = mean_of(std::span<const double>(best).last(window));
  report.ratio = report.late_ns / report.early_ns;
  return report;
}

}  // namespace replan
