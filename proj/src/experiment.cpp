#include "pmolb/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <omp.h>

namespace pmolb {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("fmt_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& tok, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(context + ": cannot parse number '" + tok + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& tok, const std::string& context) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(context + ": cannot parse integer '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "game") cfg.game.kind = value;
    else if (key == "game_d") cfg.game.d = static_cast<int>(parse_u64(value, key));
    else if (key == "game_cols") cfg.game.cols = static_cast<int>(parse_u64(value, key));
    else if (key == "game_seed") cfg.game.game_seed = parse_u64(value, key);
    else if (key == "epsilon") cfg.game.epsilon = parse_double(value, key);
    else if (key == "margin") cfg.game.margin = parse_double(value, key);
    else if (key == "game_file") { cfg.game.kind = "from_file"; cfg.game.path = value; }
    else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& name : split(value, ','))
        if (!trim(name).empty()) cfg.algorithms.push_back(parse_algorithm(trim(name)));
    }
    else if (key == "rounds") cfg.total_rounds = parse_u64(value, key);
    else if (key == "delta") cfg.delta = parse_double(value, key);
    else if (key == "noise") cfg.noise = parse_noise(value);
    else if (key == "sigma") cfg.sigma = parse_double(value, key);
    else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& s : split(value, ','))
        if (!trim(s).empty()) cfg.seeds.push_back(parse_u64(trim(s), key));
    }
    else if (key == "t_min_fit") cfg.t_min_fit = parse_u64(value, key);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "diagnostics") {
      if (value == "true" || value == "1") cfg.diagnostics = true;
      else if (value == "false" || value == "0") cfg.diagnostics = false;
      else throw Error("diagnostics: expected true/false, got '" + value + "'");
    }
    else if (key == "solver_tol") cfg.solver_tol = parse_double(value, key);
    else if (key == "workers") cfg.workers = static_cast<int>(parse_u64(value, key));
    else throw Error("unknown config key '" + key + "'");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(key + ": " + e.what());
  }
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config: line " + std::to_string(lineno) + ": expected key=value");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.total_rounds < 1) throw Error("rounds: must be at least 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw Error("delta: must be in (0, 1)");
  if (cfg.seeds.empty()) throw Error("seeds: must be nonempty");
  if (cfg.algorithms.empty()) throw Error("algorithms: must be nonempty");
  if (!(cfg.solver_tol > 0.0)) throw Error("solver_tol: must be positive");
  if (cfg.workers < 1) throw Error("workers: must be at least 1");
  if (cfg.game.d < 1) throw Error("game_d: must be at least 1");
  if (cfg.game.cols < 0) throw Error("game_cols: must be nonnegative");
  if (cfg.game.kind == "from_file" && cfg.game.path.empty())
    throw Error("game_file: required when game = from_file");
  const int cols = cfg.game.cols == 0 ? cfg.game.d : cfg.game.cols;
  for (Algorithm a : cfg.algorithms)
    if (a == Algorithm::Falcon && cols != 1 && cfg.game.kind != "from_file")
      throw Error("algorithms: falcon requires game_cols = 1");
}

GameMatrix build_game(const GameSpec& spec) {
  if (spec.kind == "from_file") return game_from_csv(spec.path);
  SplitMix64 rng(spec.game_seed);
  GameParams params;
  if (spec.cols > 0) params["cols"] = spec.cols;
  params["epsilon"] = spec.epsilon;
  params["margin"] = spec.margin;
  return make_game(spec.kind, spec.d, params, rng);
}

namespace {

const char* kTraceHeader =
    "seed,epoch,t_start,t_end,gamma_or_alpha,duality_gap,solver_residual,"
    "solver_iterations,stability_row,stability_col,concentration_ok";

}  // namespace

std::string emit_trace_csv(const RunTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : trace.records) {
    out += std::to_string(trace.seed);
    out += ',';
    out += std::to_string(r.epoch);
    out += ',';
    out += std::to_string(r.t_start);
    out += ',';
    out += std::to_string(r.t_end);
    out += ',';
    out += fmt_double(r.gamma_or_alpha);
    out += ',';
    out += fmt_double(r.duality_gap);
    out += ',';
    out += fmt_double(r.solver_residual);
    out += ',';
    out += std::to_string(r.solver_iterations);
    out += ',';
    out += fmt_double(r.stability_row);
    out += ',';
    out += fmt_double(r.stability_col);
    out += ',';
    out += r.concentration_ok ? '1' : '0';
    out += '\n';
  }
  return out;
}

RunTrace parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTraceHeader)
    throw Error("trace csv: bad or missing header");
  RunTrace trace;
  bool have_seed = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto tok = split(line, ',');
    const std::string ctx = "trace csv line " + std::to_string(lineno);
    if (tok.size() != 11) throw Error(ctx + ": expected 11 fields, got " + std::to_string(tok.size()));
    const std::uint64_t seed = parse_u64(tok[0], ctx);
    if (!have_seed) {
      trace.seed = seed;
      have_seed = true;
    } else if (seed != trace.seed) {
      throw Error(ctx + ": mixed seeds in one trace file");
    }
    EpochRecord r;
    r.epoch = static_cast<int>(parse_u64(tok[1], ctx));
    r.t_start = parse_u64(tok[2], ctx);
    r.t_end = parse_u64(tok[3], ctx);
    r.gamma_or_alpha = parse_double(tok[4], ctx);
    r.duality_gap = parse_double(tok[5], ctx);
    r.solver_residual = parse_double(tok[6], ctx);
    r.solver_iterations = static_cast<std::int64_t>(parse_u64(tok[7], ctx));
    r.stability_row = parse_double(tok[8], ctx);
    r.stability_col = parse_double(tok[9], ctx);
    if (tok[10] != "0" && tok[10] != "1") throw Error(ctx + ": concentration_ok must be 0 or 1");
    r.concentration_ok = tok[10] == "1";
    trace.records.push_back(r);
  }
  if (trace.records.empty()) throw Error("trace csv: no records");
  trace.total_rounds = trace.records.back().t_end;
  return trace;
}

RunTrace parse_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("trace csv: cannot open '" + path + "'");
  return parse_trace_csv(in);
}

std::string emit_aggregate_csv(const AggregateTrace& agg) {
  std::string out = "epoch,t_start,t_end,mean_gap,min_gap,max_gap";
  for (auto s : agg.seeds) out += ",gap_seed_" + std::to_string(s);
  out += '\n';
  for (const auto& r : agg.records) {
    out += std::to_string(r.epoch);
    out += ',';
    out += std::to_string(r.t_start);
    out += ',';
    out += std::to_string(r.t_end);
    out += ',';
    out += fmt_double(r.mean_gap);
    out += ',';
    out += fmt_double(r.min_gap);
    out += ',';
    out += fmt_double(r.max_gap);
    for (double g : r.per_seed) {
      out += ',';
      out += fmt_double(g);
    }
    out += '\n';
  }
  return out;
}

AggregateTrace parse_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("aggregate csv: empty file");
  const auto head = split(trim(line), ',');
  if (head.size() < 6 || head[0] != "epoch" || head[3] != "mean_gap")
    throw Error("aggregate csv: bad header");
  AggregateTrace agg;
  for (std::size_t i = 6; i < head.size(); ++i) {
    const std::string prefix = "gap_seed_";
    if (head[i].rfind(prefix, 0) != 0) throw Error("aggregate csv: bad column '" + head[i] + "'");
    agg.seeds.push_back(parse_u64(head[i].substr(prefix.size()), "aggregate csv header"));
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto tok = split(line, ',');
    const std::string ctx = "aggregate csv line " + std::to_string(lineno);
    if (tok.size() != head.size())
      throw Error(ctx + ": expected " + std::to_string(head.size()) + " fields");
    AggregateRecord r;
    r.epoch = static_cast<int>(parse_u64(tok[0], ctx));
    r.t_start = parse_u64(tok[1], ctx);
    r.t_end = parse_u64(tok[2], ctx);
    r.mean_gap = parse_double(tok[3], ctx);
    r.min_gap = parse_double(tok[4], ctx);
    r.max_gap = parse_double(tok[5], ctx);
    for (std::size_t i = 6; i < tok.size(); ++i) r.per_seed.push_back(parse_double(tok[i], ctx));
    agg.records.push_back(std::move(r));
  }
  if (agg.records.empty()) throw Error("aggregate csv: no records");
  return agg;
}

AggregateTrace parse_aggregate_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("aggregate csv: cannot open '" + path + "'");
  return parse_aggregate_csv(in);
}

double theory_slope(Algorithm a) {
  switch (a) {
    case Algorithm::PmoLb: return -0.5;
    case Algorithm::Falcon: return -0.5;
    case Algorithm::NeUniform: return -0.25;
  }
  throw Error("invalid algorithm");
}

namespace {

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string render_svg(const std::string& title, const std::vector<AlgoCurve>& curves) {
  const double width = 880, height = 640;
  const double ml = 70, mr = 240, mt = 48, mb = 64;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& c : curves)
    for (const auto& r : c.records) {
      if (!(r.mean_gap > 0.0)) continue;
      const double t = 0.5 * (double(r.t_start) + double(r.t_end));
      x0 = std::min(x0, std::log10(t));
      x1 = std::max(x1, std::log10(t));
      y0 = std::min(y0, std::log10(r.mean_gap));
      y1 = std::max(y1, std::log10(r.mean_gap));
    }
  if (!(x0 <= x1)) { x0 = 0; x1 = 1; }
  if (!(y0 <= y1)) { y0 = -1; y1 = 0; }
  if (x1 - x0 < 1e-9) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
  const double ypad = 0.04 * (y1 - y0);
  y0 -= ypad;
  y1 += ypad;

  auto px = [&](double lt) { return ml + (lt - x0) / (x1 - x0) * pw; };
  auto py = [&](double lg) { return mt + (y1 - lg) / (y1 - y0) * ph; };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  // decade grid
  for (int k = static_cast<int>(std::ceil(x0)); k <= static_cast<int>(std::floor(x1)); ++k) {
    const double x = px(k);
    svg << "<line x1=\"" << fmt_fixed(x, 2) << "\" y1=\"" << mt << "\" x2=\"" << fmt_fixed(x, 2)
        << "\" y2=\"" << mt + ph << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fmt_fixed(x, 2) << "\" y=\"" << mt + ph + 20
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">1e" << k
        << "</text>\n";
  }
  for (int k = static_cast<int>(std::ceil(y0)); k <= static_cast<int>(std::floor(y1)); ++k) {
    const double y = py(k);
    svg << "<line x1=\"" << ml << "\" y1=\"" << fmt_fixed(y, 2) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << fmt_fixed(y, 2) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << fmt_fixed(y + 4, 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">1e" << k
        << "</text>\n";
  }
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 16
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">round t"
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">duality gap</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kColors[c % 5];
    std::ostringstream pts;
    for (const auto& r : curves[c].records) {
      if (!(r.mean_gap > 0.0)) continue;
      const double t = 0.5 * (double(r.t_start) + double(r.t_end));
      pts << fmt_fixed(px(std::log10(t)), 3) << ',' << fmt_fixed(py(std::log10(r.mean_gap)), 3)
          << ' ';
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << pts.str() << "\"/>\n";
    const double ly = mt + 24.0 * (double(c) + 1.0);
    svg << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << ml + pw + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << curves[c].name;
    if (curves[c].has_fit)
      svg << " fitted " << fmt_fixed(curves[c].fitted_slope, 3) << " (theory "
          << fmt_fixed(curves[c].theory, 2) << ")";
    else
      svg << " (theory " << fmt_fixed(curves[c].theory, 2) << ")";
    svg << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

struct Job {
  Algorithm algorithm;
  std::uint64_t seed;
};

}  // namespace

RunOutputs run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const GameMatrix game = build_game(cfg.game);
  for (Algorithm a : cfg.algorithms)
    if (a == Algorithm::Falcon && game.cols() != 1)
      throw Error("algorithms: falcon requires a single-column game");

  std::filesystem::create_directories(cfg.output_dir);

  // Deterministic job order: algorithms by name, seeds ascending.
  std::vector<Algorithm> algos = cfg.algorithms;
  std::sort(algos.begin(), algos.end(), [](Algorithm a, Algorithm b) {
    return algorithm_name(a) < algorithm_name(b);
  });
  algos.erase(std::unique(algos.begin(), algos.end()), algos.end());
  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<Job> jobs;
  for (Algorithm a : algos)
    for (std::uint64_t s : seeds) jobs.push_back({a, s});

  std::vector<RunTrace> results(jobs.size());
  std::vector<std::string> errors(jobs.size());

  const int n = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
  for (int k = 0; k < n; ++k) {
    try {
      LearnerOptions opts;
      opts.algorithm = jobs[k].algorithm;
      opts.total_rounds = cfg.total_rounds;
      opts.delta = cfg.delta;
      opts.noise = FeedbackModel{cfg.noise, cfg.sigma};
      opts.seed = jobs[k].seed;
      opts.solver_tol = cfg.solver_tol;
      opts.diagnostics = cfg.diagnostics;
      results[k] = run_learner(game, opts);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (int k = 0; k < n; ++k)
    if (!errors[k].empty())
      throw Error("run " + algorithm_name(jobs[k].algorithm) + " seed " +
                  std::to_string(jobs[k].seed) + ": " + errors[k]);

  RunOutputs out;
  const std::string dir = cfg.output_dir + "/";

  // Per-run traces.
  for (int k = 0; k < n; ++k) {
    const std::string path = dir + "trace_" + algorithm_name(jobs[k].algorithm) + "_seed" +
                             std::to_string(jobs[k].seed) + ".csv";
    write_file(path, emit_trace_csv(results[k]));
    out.trace_files.push_back(path);
  }

  // Aggregates, then fits computed from the emitted files so summary rows
  // and plot are views of the CSVs.
  std::vector<AlgoCurve> curves;
  std::string summary =
      "algorithm,slope,intercept,r_squared,n_points,t_min,theory_slope,final_epoch_mean_gap\n";
  for (Algorithm a : algos) {
    std::vector<RunTrace> group;
    for (int k = 0; k < n; ++k)
      if (jobs[k].algorithm == a) group.push_back(results[k]);
    const AggregateTrace agg = aggregate(group);
    const std::string path = dir + "aggregate_" + algorithm_name(a) + ".csv";
    write_file(path, emit_aggregate_csv(agg));
    out.aggregate_files.push_back(path);

    AggregateTrace reread = parse_aggregate_csv_file(path);
    reread.algorithm = a;

    AlgorithmSummary s;
    s.algorithm = a;
    s.theory = theory_slope(a);
    s.final_epoch_mean_gap = reread.records.back().mean_gap;
    AlgoCurve curve{algorithm_name(a), reread.records, false, 0.0, s.theory};
    try {
      s.fit = fit_slope(reread, cfg.t_min_fit);
      s.has_fit = true;
      curve.has_fit = true;
      curve.fitted_slope = s.fit.slope;
    } catch (const Error&) {
      s.has_fit = false;  // too few epochs past t_min; summary row says so
    }
    curves.push_back(std::move(curve));

    summary += algorithm_name(a);
    summary += ',';
    summary += s.has_fit ? fmt_double(s.fit.slope) : "nan";
    summary += ',';
    summary += s.has_fit ? fmt_double(s.fit.intercept) : "nan";
    summary += ',';
    summary += s.has_fit ? fmt_double(s.fit.r_squared) : "nan";
    summary += ',';
    summary += s.has_fit ? std::to_string(s.fit.n_points) : "0";
    summary += ',';
    summary += std::to_string(cfg.t_min_fit);
    summary += ',';
    summary += fmt_double(s.theory);
    summary += ',';
    summary += fmt_double(s.final_epoch_mean_gap);
    summary += '\n';
    out.summaries.push_back(std::move(s));
  }

  out.summary_file = dir + "summary.csv";
  write_file(out.summary_file, summary);

  std::ostringstream title;
  title << cfg.game.kind << " " << game.rows() << "x" << game.cols() << ", T=" << cfg.total_rounds
        << ", " << seeds.size() << " seeds, " << noise_name(cfg.noise);
  out.svg_file = dir + "plot.svg";
  write_file(out.svg_file, render_svg(title.str(), curves));
  return out;
}

ValidationReport validate_matrix_file(const std::string& path) {
  const GameMatrix game = game_from_csv(path);
  ValidationReport rep;
  rep.rows = game.rows();
  rep.cols = game.cols();
  rep.min_entry = game.at(0, 0);
  rep.max_entry = game.at(0, 0);
  for (int i = 0; i < game.rows(); ++i)
    for (int j = 0; j < game.cols(); ++j) {
      rep.min_entry = std::min(rep.min_entry, game.at(i, j));
      rep.max_entry = std::max(rep.max_entry, game.at(i, j));
    }
  rep.skew_symmetric = game.skew_symmetric();
  rep.value = solve_matrix_game(game.entries(), 1e-6).value;
  return rep;
}

std::string format_validation(const ValidationReport& rep) {
  double value = rep.value;
  if (std::abs(value) < 5e-7) value = 0.0;  // avoid "-0.000000" at the printed precision
  std::ostringstream os;
  os << rep.rows << "×" << rep.cols << ", "
     << (rep.skew_symmetric ? "skew-symmetric" : "not skew-symmetric") << ", value "
     << fmt_fixed(value, 6) << " (entries in [" << fmt_fixed(rep.min_entry, 6) << ", "
     << fmt_fixed(rep.max_entry, 6) << "])";
  return os.str();
}

SlopeFit fit_csv_file(const std::string& path, std::uint64_t t_min) {
  std::ifstream in(path);
  if (!in) throw Error("fit: cannot open '" + path + "'");
  std::string head;
  if (!std::getline(in, head)) throw Error("fit: empty file '" + path + "'");
  in.seekg(0);
  if (trim(head).rfind("seed,", 0) == 0) return fit_slope(parse_trace_csv(in), t_min);
  return fit_slope(parse_aggregate_csv(in), t_min);
}

std::string format_lemma_report(const LemmaReport& rep) {
  std::ostringstream os;
  os << "lemma report (d=" << rep.d << ", delta=" << rep.delta
     << ", stability bound 16d=" << rep.stability_bound << ")\n";
  os << "epoch  stability_ok  worst_ratio      concentration_ok  solver_residual\n";
  for (const auto& e : rep.epochs) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%5d  %-12s  %-15.6g  %-16s  %.3e\n", e.epoch,
                  e.epoch == 1 ? "-" : (e.stability_ok ? "yes" : "NO"), e.worst_ratio,
                  e.epoch == 1 ? "-" : (e.concentration_ok ? "yes" : "NO"), e.solver_residual);
    os << buf;
  }
  os << "all-epoch stability held: " << (rep.all_stability ? "yes" : "no")
     << " (worst ratio " << rep.worst_ratio << ")\n";
  os << "all-epoch concentration held: " << (rep.all_concentration ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace pmolb
