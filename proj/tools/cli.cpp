#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pickdrop/generators.hpp"
#include "pickdrop/heavy_hitter.hpp"
#include "pickdrop/moment_estimator.hpp"
#include "pickdrop/parallel.hpp"
#include "pickdrop/random.hpp"
#include "pickdrop/stream_io.hpp"
#include "pickdrop/verification.hpp"
#include "sidecar.hpp"

namespace pickdrop::cli {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kDegenerate:
      return kExitUsage;
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kFormat:
    case ErrorKind::kOverflow:
    case ErrorKind::kDimension:
      return kExitFormat;
    case ErrorKind::kGuard:
      return kExitGuard;
  }
  return kExitUsage;
}

namespace {

namespace fs = std::filesystem;

Json estimate_json(const Estimate& e) {
  if (e.is_sentinel()) return nullptr;
  return {{"element", e.element}, {"count", e.count}};
}

std::string estimate_text(const Estimate& e) {
  if (e.is_sentinel()) return "none";
  return "id " + std::to_string(e.element) + " count " + std::to_string(e.count);
}

double as_double(long double x) { return static_cast<double>(x); }

void emit(std::ostream& out, bool json, const Json& report, const std::string& text) {
  if (json) {
    out << report.dump(2) << '\n';
  } else {
    out << text;
  }
}

// An input file opened as a one-pass source, whichever encoding it uses.
struct Input {
  std::unique_ptr<ItemSource> source;
  std::uint64_t universe = 0;
  Stream text;  // backing store for text files
};

Input open_input(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::kIo, "no such file: " + path.string());
  Input in;
  if (detect_encoding(path) == StreamEncoding::kBinary) {
    auto file = std::make_unique<BinaryFileSource>(path);
    in.universe = file->universe();
    in.source = std::move(file);
  } else {
    in.text = read_stream(path);
    in.universe = in.text.universe();
    in.source = std::make_unique<SpanSource>(in.text.items());
  }
  return in;
}

Stream load_stream(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::kIo, "no such file: " + path.string());
  return read_stream(path);
}

// "1,2;3,4" -> rows {1,2} and {3,4}.
Stream parse_matrix(const std::string& text, std::uint64_t& rows, std::uint64_t& cols) {
  std::vector<ElementId> items;
  rows = 0;
  cols = 0;
  std::stringstream rows_in(text);
  std::string row;
  while (std::getline(rows_in, row, ';')) {
    std::stringstream cells(row);
    std::string cell;
    std::uint64_t width = 0;
    while (std::getline(cells, cell, ',')) {
      try {
        const unsigned long v = std::stoul(cell);
        if (v == 0 || v > 0xffffffffUL) throw std::out_of_range("id");
        items.push_back(static_cast<ElementId>(v));
      } catch (const std::exception&) {
        throw Error(ErrorKind::kUsage, "bad matrix cell '" + cell + "'");
      }
      ++width;
    }
    if (rows > 0 && width != cols) throw Error(ErrorKind::kUsage, "matrix rows differ in length");
    cols = width;
    ++rows;
  }
  if (rows == 0 || cols == 0) throw Error(ErrorKind::kUsage, "empty matrix");
  return Stream::with_inferred_universe(std::move(items));
}

Stream random_matrix(std::uint64_t rows, std::uint64_t cols, std::uint64_t alphabet,
                     std::uint64_t seed) {
  if (rows == 0 || cols == 0 || alphabet == 0) {
    throw Error(ErrorKind::kUsage, "rows, cols and alphabet must be positive");
  }
  SplitMix64 rng(seed);
  std::vector<ElementId> items(rows * cols);
  for (auto& x : items) x = static_cast<ElementId>(uniform_below(rng, alphabet) + 1);
  return Stream::with_inferred_universe(std::move(items));
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      out.push_back(std::stoll(cell));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kUsage, "bad list entry '" + cell + "'");
    }
    if (out.back() < 0) throw Error(ErrorKind::kUsage, "entries must be nonnegative");
  }
  return out;
}

Json bound_json(const BoundCheck& c) {
  return {{"hypothesis", c.hypothesis},
          {"note", c.note},
          {"heavy", c.heavy},
          {"heavy_frequency", c.heavy_frequency},
          {"probability", as_double(c.probability)},
          {"exact", c.exact},
          {"trials", c.trials},
          {"sigma", c.sigma},
          {"rerun", c.rerun},
          {"bound", c.bound},
          {"holds", c.holds}};
}

std::string bound_text(const BoundCheck& c) {
  std::ostringstream s;
  s << c.note << "\n"
    << "P(S_r = " << c.heavy << ") = " << as_double(c.probability)
    << (c.exact ? " (exact)" : " over " + std::to_string(c.trials) + " trials, sigma " +
                                   std::to_string(c.sigma))
    << "\nbound " << c.bound << ": " << (c.holds ? "holds" : "VIOLATED") << "\n";
  return s.str();
}

Json params_json(const ParamSet& p) {
  return {{"delta", p.delta}, {"t", p.cols},    {"lambda", p.lambda},
          {"rows", p.rows},   {"reps", p.reps}, {"padding", p.padding},
          {"psi", p.psi},     {"t_clamped", p.cols_clamped}};
}

// ---------------------------------------------------------------- generate

struct GenerateOpts {
  std::string kind;
  std::uint64_t n = 256;
  std::uint64_t m = 4096;
  std::uint64_t heavy = 0;
  std::string placement = "uniform-rows";
  double zipf = 1.5;
  unsigned k = 3;
  std::uint64_t seed = 0;
  std::string out;
  bool text = false;
  bool json = false;
};

int cmd_generate(const GenerateOpts& o, std::ostream& out) {
  GeneratorSpec spec;
  const auto kind = parse_generator_kind(o.kind);
  if (!kind) throw Error(ErrorKind::kUsage, "unknown generator kind '" + o.kind + "'");
  const auto placement = parse_placement(o.placement);
  if (!placement) throw Error(ErrorKind::kUsage, "unknown placement '" + o.placement + "'");
  spec.kind = *kind;
  spec.universe = o.n;
  spec.length = o.m;
  spec.heavy_frequency = o.heavy;
  spec.placement = *placement;
  spec.zipf_exponent = o.zipf;
  spec.k = o.k;
  spec.seed = o.seed;
  Stream stream = generate(spec);

  const fs::path path(o.out);
  if (o.text) {
    write_text_stream(path, stream.items());
    // Text files carry no header; their universe is the largest id.
    stream = Stream::with_inferred_universe(
        std::vector<ElementId>(stream.items().begin(), stream.items().end()));
  } else {
    write_binary_stream(path, stream);
  }
  const ExactStats stats(stream);
  Json sidecar = stats_json(stats);
  sidecar["generator"] = {{"kind", o.kind},       {"n", o.n},
                          {"m", o.m},             {"heavy_frequency", o.heavy},
                          {"placement", o.placement}, {"zipf", o.zipf},
                          {"k", o.k},             {"seed", o.seed}};
  const fs::path side = sidecar_path(path);
  write_json(side, sidecar);

  Json report = {{"schema", kSchema},
                 {"command", "generate"},
                 {"output", path.string()},
                 {"sidecar", side.string()},
                 {"universe", stats.universe()},
                 {"length", stats.length()},
                 {"distinct", stats.distinct()},
                 {"most_frequent", sidecar["most_frequent"]},
                 {"heavy", sidecar["heavy"]}};
  std::ostringstream text;
  text << "wrote " << stats.length() << " items to " << path.string() << " (n=" << stats.universe()
       << ", distinct=" << stats.distinct() << ")\n";
  if (stats.length() > 0) {
    const ElementId top = stats.most_frequent();
    const auto& h = sidecar["heavy"][std::to_string(o.k)];
    text << "most frequent id " << top << " x" << stats.frequency(top) << ", heavy for k=" << o.k
         << ": " << (h.is_null() ? "overflow" : h.get<bool>() ? "yes" : "no") << "\n";
  }
  text << "stats in " << side.string() << "\n";
  emit(out, o.json, report, text.str());
  return kExitOk;
}

// ---------------------------------------------------------------- heavy

struct HeavyOpts {
  std::string input;
  std::string stats;
  unsigned k = 3;
  double eps = 0.25;
  std::optional<std::uint64_t> length;
  bool doubling = false;
  std::uint64_t seed = 0;
  double reps_constant = 4.0;
  std::optional<std::uint64_t> delta;
  std::optional<std::uint64_t> lambda;
  std::optional<std::uint64_t> cols;
  bool no_fallback = false;
  std::size_t max_generations = 0;
  unsigned threads = 1;
  bool json = false;
};

int cmd_heavy(const HeavyOpts& o, std::ostream& out) {
  Input in = open_input(o.input);
  HeavyHitterConfig cfg;
  cfg.universe = in.universe;
  cfg.k = o.k;
  cfg.eps = o.eps;
  cfg.mode = o.length ? LengthMode::kKnown : LengthMode::kDoubling;
  cfg.length = o.length.value_or(0);
  cfg.seed = o.seed;
  cfg.reps_constant = o.reps_constant;
  cfg.delta = o.delta;
  cfg.lambda = o.lambda;
  cfg.cols = o.cols;
  cfg.fallback = !o.no_fallback;
  cfg.max_generations = o.max_generations;
  cfg.threads = o.threads;
  const HeavyReport r = find_heavy(*in.source, cfg);

  Json instances = Json::array();
  for (const auto& inst : r.instances) {
    Json p = params_json(inst.params);
    p.erase("psi");
    instances.push_back({{"generation_length", inst.generation_length},
                         {"start", inst.start},
                         {"params", p},
                         {"best", estimate_json(inst.best)},
                         {"failed_runs", inst.failed_runs}});
  }
  Json report = {{"schema", kSchema},
                 {"command", "heavy"},
                 {"input", o.input},
                 {"mode", std::string(to_string(r.mode))},
                 {"k", o.k},
                 {"eps", o.eps},
                 {"seed", o.seed},
                 {"items", r.items},
                 {"estimate", estimate_json(r.estimate)},
                 {"fallback", {{"estimate", estimate_json(r.fallback)},
                               {"counters", r.fallback_counters}}},
                 {"repetitions", r.repetitions},
                 {"peak_live_runs", r.peak_live_runs},
                 {"instances", instances}};

  std::ostringstream text;
  text << "mode " << to_string(r.mode) << ", " << r.items << " items, " << r.repetitions
       << " runs (peak live " << r.peak_live_runs << ")\n"
       << "estimate: " << estimate_text(r.estimate) << "\n";

  int code = kExitOk;
  const fs::path side = o.stats.empty() ? sidecar_path(o.input) : fs::path(o.stats);
  if (const auto sidecar = read_sidecar(side)) {
    const std::uint64_t truth =
        r.estimate.is_sentinel() ? 0 : sidecar_frequency(*sidecar, r.estimate.element);
    const bool sound = r.estimate.is_sentinel() || r.estimate.count <= truth;
    report["soundness"] = {{"checked", true}, {"true_frequency", truth}, {"sound", sound}};
    text << "soundness vs " << side.string() << ": " << (sound ? "ok" : "VIOLATED")
         << " (true frequency " << truth << ")\n";
    if (!sound) code = kExitCheckFailed;
  } else {
    report["soundness"] = {{"checked", false}};
  }
  emit(out, o.json, report, text.str());
  return code;
}

// ---------------------------------------------------------------- fk

struct FkOpts {
  std::string input;
  std::string stats;
  unsigned k = 3;
  double eps = 0.25;
  unsigned levels = 0;
  unsigned buckets = 32;
  unsigned trials = 5;
  double reps_constant = 2.0;
  std::size_t max_generations = 4;
  std::uint64_t seed = 0;
  bool json = false;
};

int cmd_fk(const FkOpts& o, std::ostream& out) {
  Input in = open_input(o.input);
  MomentConfig cfg;
  cfg.universe = in.universe;
  cfg.k = o.k;
  cfg.eps = o.eps;
  cfg.levels = o.levels;
  cfg.buckets = o.buckets;
  cfg.trials = o.trials;
  cfg.reps_constant = o.reps_constant;
  cfg.max_generations = o.max_generations;
  cfg.seed = o.seed;
  const MomentReport r = estimate_fk(*in.source, cfg);

  Json trials = Json::array();
  for (long double e : r.trial_estimates) trials.push_back(as_double(e));
  Json report = {{"schema", kSchema},
                 {"command", "fk"},
                 {"input", o.input},
                 {"k", o.k},
                 {"seed", o.seed},
                 {"items", r.items},
                 {"estimate", as_double(r.estimate)},
                 {"trial_estimates", trials},
                 {"levels", r.levels},
                 {"buckets", r.buckets},
                 {"recovered", r.recovered},
                 {"peak_live_runs", r.peak_live_runs}};
  std::ostringstream text;
  text << "F_" << o.k << " estimate " << as_double(r.estimate) << " (median of " << o.trials
       << ", " << r.levels << " levels x " << r.buckets << " buckets, peak live runs "
       << r.peak_live_runs << ")\n";
  const fs::path side = o.stats.empty() ? sidecar_path(o.input) : fs::path(o.stats);
  if (const auto sidecar = read_sidecar(side)) {
    if (const auto exact = sidecar_moment(*sidecar, o.k)) {
      const double rel = *exact > 0 ? as_double((r.estimate - *exact) / *exact) : 0.0;
      report["exact"] = as_double(*exact);
      report["relative_error"] = rel;
      text << "exact " << as_double(*exact) << ", relative error " << rel << "\n";
    }
  }
  emit(out, o.json, report, text.str());
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct MatrixOpts {
  std::string matrix;
  std::uint64_t rows = 2;
  std::uint64_t cols = 2;
  std::uint64_t alphabet = 3;
  std::uint64_t lambda = 1;
  std::uint64_t seed = 0;
};

Stream matrix_from(const MatrixOpts& o, std::uint64_t& rows, std::uint64_t& cols) {
  if (!o.matrix.empty()) return parse_matrix(o.matrix, rows, cols);
  rows = o.rows;
  cols = o.cols;
  return random_matrix(rows, cols, o.alphabet, o.seed);
}

struct OracleOpts {
  MatrixOpts matrix;
  std::uint64_t trials = 0;
  unsigned threads = 1;
  bool json = false;
};

int cmd_oracle(const OracleOpts& o, std::ostream& out) {
  std::uint64_t rows = 0, cols = 0;
  const Stream stream = matrix_from(o.matrix, rows, cols);
  const MatrixOverlay overlay(stream.items(), rows, cols);
  const ExactDistribution dist = exact_distribution(overlay, o.matrix.lambda, kEnumerationGuard,
                                                    o.threads);
  Json law = Json::array();
  std::ostringstream text;
  text << rows << "x" << cols << " matrix, lambda " << o.matrix.lambda << ", " << dist.tuples
       << " column tuples\n";
  for (const auto& [outcome, p] : dist.law) {
    law.push_back({{"element", outcome.element}, {"count", outcome.count},
                   {"probability", as_double(p)}});
    text << "  " << estimate_text(outcome) << ": " << as_double(p) << "\n";
  }
  Json report = {{"schema", kSchema}, {"command", "verify oracle"}, {"rows", rows},
                 {"cols", cols},      {"lambda", o.matrix.lambda},  {"tuples", dist.tuples},
                 {"law", law},        {"total", as_double(dist.total())}};
  int code = kExitOk;
  if (o.trials > 0) {
    const AgreementReport a =
        check_agreement(overlay, o.matrix.lambda, o.trials, o.matrix.seed, o.threads);
    std::uint64_t bad = 0;
    for (const auto& oc : a.outcomes) bad += !oc.ok;
    report["agreement"] = {{"trials", a.trials}, {"rerun", a.rerun}, {"pass", a.pass},
                           {"outcomes", a.outcomes.size()}, {"outside_band", bad}};
    text << "sampler vs oracle over " << a.trials << " runs: " << (a.pass ? "agree" : "DISAGREE")
         << " (" << bad << " of " << a.outcomes.size() << " outcomes outside 3 sigma)\n";
    if (!a.pass) code = kExitCheckFailed;
  }
  emit(out, o.json, report, text.str());
  return code;
}

struct Thm21Opts {
  MatrixOpts matrix;
  std::uint64_t heavy_frequency = 0;
  std::string placement = "uniform-rows";
  ElementId heavy = kPlantedId;
  double alpha = 1;
  double beta = 0.3;
  std::uint64_t trials = 1'000'000;
  bool calibrate = false;
  bool json = false;
};

int cmd_thm21(const Thm21Opts& o, std::ostream& out) {
  std::ostringstream text;
  if (o.calibrate) {
    const auto cases = theorem_2_1_cases(o.matrix.seed);
    const auto measured = measure_cases(cases, o.trials, o.matrix.seed);
    const Calibration cal = calibrate(measured);
    Json cells = Json::array();
    for (const auto& c : cal.cells) {
      cells.push_back({{"alpha", c.alpha}, {"beta", c.beta}, {"satisfied", c.satisfied},
                       {"violations", c.violations}, {"feasible", c.feasible()}});
      text << "alpha " << c.alpha << " beta " << c.beta << ": " << c.satisfied
           << " satisfied, " << c.violations << " violations\n";
    }
    Json instances = Json::array();
    for (const auto& m : measured) {
      instances.push_back({{"label", m.label},
                           {"lower_at_alpha_1", m.inputs.lower(1)},
                           {"check", bound_json(m.measured)}});
    }
    Json chosen = nullptr;
    if (cal.chosen) chosen = {{"alpha", cal.chosen->alpha}, {"beta", cal.chosen->beta}};
    text << "chosen: "
         << (cal.chosen ? "alpha " + std::to_string(cal.chosen->alpha) + " beta " +
                              std::to_string(cal.chosen->beta)
                        : std::string("none feasible"))
         << "\n";
    Json report = {{"schema", kSchema}, {"command", "verify thm21"}, {"cells", cells},
                   {"chosen", chosen},  {"instances", instances}};
    emit(out, o.json, report, text.str());
    return cal.chosen ? kExitOk : kExitCheckFailed;
  }

  std::uint64_t rows = 0, cols = 0;
  Stream stream;
  if (o.heavy_frequency > 0) {
    const auto placement = parse_placement(o.placement);
    if (!placement) throw Error(ErrorKind::kUsage, "unknown placement '" + o.placement + "'");
    rows = o.matrix.rows;
    cols = o.matrix.cols;
    stream = planted_matrix(rows, cols, o.heavy_frequency, *placement, o.matrix.seed);
  } else {
    stream = matrix_from(o.matrix, rows, cols);
  }
  const MatrixOverlay overlay(stream.items(), rows, cols);
  const BoundCheck c = check_theorem_2_1(overlay, o.matrix.lambda, o.alpha, o.beta, o.heavy,
                                         o.trials, o.matrix.seed);
  const Theorem21Inputs in = theorem_2_1_inputs(overlay, o.matrix.lambda, o.heavy);
  Json report = {{"schema", kSchema},
                 {"command", "verify thm21"},
                 {"rows", rows},
                 {"cols", cols},
                 {"lambda", o.matrix.lambda},
                 {"alpha", o.alpha},
                 {"beta", o.beta},
                 {"lambda_r", in.lambda_rows},
                 {"g3_over_lambda_t", in.g3_over_lambda_cols},
                 {"g2_over_t", in.g2_over_cols},
                 {"check", bound_json(c)}};
  text << rows << "x" << cols << " matrix, lambda " << o.matrix.lambda << "\n" << bound_text(c);
  emit(out, o.json, report, text.str());
  return c.hypothesis && !c.holds ? kExitCheckFailed : kExitOk;
}

struct Thm31Opts {
  std::string input;
  std::uint64_t n = 256;
  std::uint64_t m = 0;
  std::uint64_t heavy_frequency = 0;
  std::string placement = "uniform-rows";
  unsigned k = 3;
  double alpha = 8;
  double beta = 0.3;
  std::optional<ElementId> heavy;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool json = false;
};

int cmd_thm31(const Thm31Opts& o, std::ostream& out) {
  Stream stream;
  if (!o.input.empty()) {
    stream = load_stream(o.input);
  } else {
    const auto placement = parse_placement(o.placement);
    if (!placement) throw Error(ErrorKind::kUsage, "unknown placement '" + o.placement + "'");
    GeneratorSpec spec;
    spec.kind = GeneratorKind::kPlantedHeavy;
    spec.universe = o.n;
    spec.length = o.m > 0 ? o.m : o.n;
    spec.heavy_frequency = o.heavy_frequency;
    spec.placement = *placement;
    spec.seed = o.seed;
    stream = generate(spec);
  }
  const ElementId heavy = o.heavy ? *o.heavy : ExactStats(stream).most_frequent();
  const Theorem31Report r =
      check_theorem_3_1(stream, o.k, o.alpha, o.beta, heavy, o.trials, o.seed, o.threads);
  Json report = {{"schema", kSchema},
                 {"command", "verify thm31"},
                 {"n", stream.universe()},
                 {"m", stream.size()},
                 {"k", o.k},
                 {"alpha", o.alpha},
                 {"beta", o.beta},
                 {"residual_root", r.residual_root},
                 {"params", params_json(r.params)},
                 {"check", bound_json(r.check)}};
  std::ostringstream text;
  text << "n " << stream.universe() << ", m " << stream.size() << ", delta " << r.params.delta
       << ", t " << r.params.cols << ", lambda " << r.params.lambda << ", G_k^(1/k) "
       << r.residual_root << "\n"
       << bound_text(r.check);
  emit(out, o.json, report, text.str());
  return r.check.hypothesis && !r.check.holds ? kExitCheckFailed : kExitOk;
}

struct PairsOpts {
  std::string u;
  std::string w;
  std::size_t max_length = 6;
  std::int64_t max_entry = 3;
  std::size_t direct_length = 4;
  bool json = false;
};

int cmd_pairs(const PairsOpts& o, std::ostream& out) {
  std::ostringstream text;
  if (!o.u.empty() || !o.w.empty()) {
    const PairSequences p{parse_list(o.u), parse_list(o.w)};
    const auto pairs = winning_pairs(p);
    std::int64_t total = 0;
    for (std::size_t s = 0; s < p.u.size(); ++s) total += p.u[s] - p.w[s];
    Json list = Json::array();
    for (const auto& [i, j] : pairs) list.push_back({i, j});
    const bool ok = total <= 0 || static_cast<std::int64_t>(pairs.size()) >= total;
    Json report = {{"schema", kSchema}, {"command", "verify pairs"}, {"winning", list},
                   {"count", pairs.size()}, {"fast_count", count_winning_pairs(p)},
                   {"sum", total},      {"bound_holds", ok}};
    text << pairs.size() << " winning pairs, sum(u - w) = " << total << "\n";
    for (const auto& [i, j] : pairs) text << "  (" << i << ", " << j << ")\n";
    emit(out, o.json, report, text.str());
    return ok ? kExitOk : kExitCheckFailed;
  }
  const LemmaReport r = check_winning_pairs_lemma(o.max_length, o.max_entry, o.direct_length);
  Json report = {{"schema", kSchema},
                 {"command", "verify pairs"},
                 {"max_length", o.max_length},
                 {"max_entry", o.max_entry},
                 {"cases", r.cases},
                 {"positive_cases", r.positive_cases},
                 {"counterexamples", r.counterexamples},
                 {"cross_checked", r.cross_checked},
                 {"count_mismatches", r.count_mismatches}};
  if (r.first_counterexample) {
    report["first_counterexample"] = {{"u", r.first_counterexample->u},
                                      {"w", r.first_counterexample->w}};
  }
  text << r.cases << " cases (" << r.positive_cases << " with positive sum), "
       << r.counterexamples << " counterexamples; " << r.cross_checked
       << " cross-checked against the definition, " << r.count_mismatches << " mismatches\n";
  emit(out, o.json, report, text.str());
  return r.counterexamples == 0 && r.count_mismatches == 0 ? kExitOk : kExitCheckFailed;
}

struct PromiseOpts {
  std::uint64_t n = 256;
  unsigned k = 3;
  std::uint64_t trials = 10'000;
  std::optional<std::uint64_t> reps;
  std::uint64_t seed = 0;
  bool json = false;
};

int cmd_promise(const PromiseOpts& o, std::ostream& out) {
  const std::uint64_t reps = o.reps ? *o.reps : promise_reps(o.n, o.k);
  const PromiseReport r = promise_problem_experiment(o.n, o.k, o.trials, reps, o.seed);
  Json report = {{"schema", kSchema},
                 {"command", "verify promise"},
                 {"n", r.n},
                 {"k", r.k},
                 {"rows", r.rows},
                 {"cols", r.cols},
                 {"reps", r.reps},
                 {"trials", r.trials},
                 {"case1_false_positives", r.case1_false_positives},
                 {"case2_misses", r.case2_misses},
                 {"miss_rate", r.miss_rate},
                 {"bound", r.bound},
                 {"sigma", r.sigma},
                 {"row_pairs_bound", r.row_pairs_bound},
                 {"case1_ok", r.case1_ok},
                 {"case2_ok", r.case2_ok}};
  std::ostringstream text;
  text << r.rows << "x" << r.cols << " matrix, T = " << r.reps << ", " << r.trials << " trials\n"
       << "case 1 false positives: " << r.case1_false_positives << "\n"
       << "case 2 miss rate " << r.miss_rate << " vs (1-1/t)^(rT) = " << r.bound << " + 3 sigma ("
       << r.sigma << "): " << (r.case2_ok ? "within" : "ABOVE") << "\n"
       << "(1-1/t)^((r-1)T) = " << r.row_pairs_bound << "\n";
  emit(out, o.json, report, text.str());
  return r.case1_ok && r.case2_ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- bench

struct BenchOpts {
  std::uint64_t n = 4096;
  std::uint64_t m = 1 << 16;
  unsigned k = 3;
  double eps = 0.25;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool json = false;
};

int cmd_bench(const BenchOpts& o, std::ostream& out) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kZipf;
  spec.universe = o.n;
  spec.length = o.m;
  spec.seed = o.seed;
  const Stream stream = generate(spec);
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  Json rows = Json::array();
  std::ostringstream text;
  for (LengthMode mode : {LengthMode::kKnown, LengthMode::kDoubling}) {
    HeavyHitterConfig cfg;
    cfg.universe = o.n;
    cfg.k = o.k;
    cfg.eps = o.eps;
    cfg.mode = mode;
    cfg.length = o.m;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    SpanSource source(stream.items());
    const auto start = Clock::now();
    const HeavyReport r = find_heavy(source, cfg);
    const double secs = seconds(start, Clock::now());
    rows.push_back({{"task", "heavy " + std::string(to_string(mode))},
                    {"seconds", secs},
                    {"items_per_second", secs > 0 ? static_cast<double>(o.m) / secs : 0.0},
                    {"runs", r.repetitions}});
    text << "heavy " << to_string(mode) << ": " << secs << " s, " << r.repetitions << " runs\n";
  }
  MomentConfig mc;
  mc.universe = o.n;
  mc.k = o.k;
  mc.eps = o.eps;
  mc.seed = o.seed;
  SpanSource source(stream.items());
  const auto start = Clock::now();
  const MomentReport r = estimate_fk(source, mc);
  const double secs = seconds(start, Clock::now());
  rows.push_back({{"task", "fk"},
                  {"seconds", secs},
                  {"items_per_second", secs > 0 ? static_cast<double>(o.m) / secs : 0.0},
                  {"runs", r.peak_live_runs}});
  text << "fk: " << secs << " s, peak live runs " << r.peak_live_runs << "\n";
  Json report = {{"schema", kSchema}, {"command", "bench"}, {"n", o.n},
                 {"m", o.m},          {"results", rows}};
  emit(out, o.json, report, text.str());
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pick-and-drop sampling: heavy elements and frequency moments in one pass",
               "pickdrop"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  const unsigned threads = default_threads();

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic stream and its stats sidecar");
  g->add_option("--kind", gen.kind,
                "planted-heavy|zipf|uniform-distinct|all-equal|promise-case1|promise-case2|"
                "adversarial-placement")
      ->required();
  g->add_option("--n", gen.n, "Universe size");
  g->add_option("--m", gen.m, "Stream length");
  g->add_option("--heavy", gen.heavy, "Occurrences of the planted id");
  g->add_option("--placement", gen.placement, "uniform-rows|bursty-prefix|random");
  g->add_option("--zipf", gen.zipf, "Zipf exponent");
  g->add_option("--k", gen.k, "Moment order (promise families size rows by it)");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Output stream file")->required();
  g->add_flag("--text", gen.text, "Write one id per line instead of the binary format");
  g->add_flag("--json", gen.json);

  HeavyOpts heavy;
  heavy.threads = threads;
  auto* h = app.add_subcommand("heavy", "Find the heavy element of a stream file");
  h->add_option("--input", heavy.input)->required();
  h->add_option("--stats", heavy.stats, "Sidecar to check soundness against");
  h->add_option("--k", heavy.k);
  h->add_option("--eps", heavy.eps);
  auto* len = h->add_option("--length", heavy.length, "Declared F_1 (known-length mode)");
  h->add_flag("--doubling", heavy.doubling, "Unknown length (the default)")->excludes(len);
  h->add_option("--seed", heavy.seed);
  h->add_option("--reps-constant", heavy.reps_constant, "c in T = c n^(1-2/k) / (eps delta)");
  h->add_option("--delta", heavy.delta, "Use this delta instead of the grid");
  h->add_option("--lambda", heavy.lambda);
  h->add_option("--t", heavy.cols, "Row width override");
  h->add_flag("--no-fallback", heavy.no_fallback, "Disable the Misra-Gries companion");
  h->add_option("--max-generations", heavy.max_generations);
  h->add_option("--threads", heavy.threads);
  h->add_flag("--json", heavy.json);

  FkOpts fk;
  auto* f = app.add_subcommand("fk", "Estimate the frequency moment F_k of a stream file");
  f->add_option("--input", fk.input)->required();
  f->add_option("--stats", fk.stats);
  f->add_option("--k", fk.k);
  f->add_option("--eps", fk.eps);
  f->add_option("--levels", fk.levels, "Subsampling levels (0: automatic)");
  f->add_option("--buckets", fk.buckets);
  f->add_option("--trials", fk.trials);
  f->add_option("--reps-constant", fk.reps_constant);
  f->add_option("--max-generations", fk.max_generations);
  f->add_option("--seed", fk.seed);
  f->add_flag("--json", fk.json);

  auto* v = app.add_subcommand("verify", "Oracle and bound checks");
  v->require_subcommand(1);
  auto add_matrix = [](CLI::App* c, MatrixOpts& m) {
    c->add_option("--matrix", m.matrix, "Rows separated by ';', cells by ','");
    c->add_option("--rows", m.rows);
    c->add_option("--cols", m.cols);
    c->add_option("--alphabet", m.alphabet, "Random matrix ids drawn from [1, alphabet]");
    c->add_option("--lambda", m.lambda);
    c->add_option("--seed", m.seed);
  };

  OracleOpts oracle;
  oracle.threads = threads;
  auto* vo = v->add_subcommand("oracle", "Exact law of (S_r, C_r) by enumeration");
  add_matrix(vo, oracle.matrix);
  vo->add_option("--trials", oracle.trials, "Also compare against this many sampler runs");
  vo->add_option("--threads", oracle.threads);
  vo->add_flag("--json", oracle.json);

  Thm21Opts t21;
  auto* v21 = v->add_subcommand("thm21", "P(S_r = heavy) >= f/(2t) on a matrix");
  add_matrix(v21, t21.matrix);
  v21->add_option("--heavy-frequency", t21.heavy_frequency, "Plant id 1 this many times");
  v21->add_option("--placement", t21.placement);
  v21->add_option("--heavy", t21.heavy, "Id whose probability is measured");
  v21->add_option("--alpha", t21.alpha);
  v21->add_option("--beta", t21.beta);
  v21->add_option("--trials", t21.trials);
  v21->add_flag("--calibrate", t21.calibrate, "Sweep the (alpha, beta) grid");
  v21->add_flag("--json", t21.json);

  Thm31Opts t31;
  t31.threads = threads;
  auto* v31 = v->add_subcommand("thm31", "P(S_r = heavy) >= delta / (2 n^(1-2/k))");
  v31->add_option("--input", t31.input);
  v31->add_option("--n", t31.n);
  v31->add_option("--m", t31.m);
  v31->add_option("--heavy-frequency", t31.heavy_frequency);
  v31->add_option("--placement", t31.placement);
  v31->add_option("--k", t31.k);
  v31->add_option("--alpha", t31.alpha);
  v31->add_option("--beta", t31.beta);
  v31->add_option("--heavy", t31.heavy);
  v31->add_option("--trials", t31.trials);
  v31->add_option("--seed", t31.seed);
  v31->add_option("--threads", t31.threads);
  v31->add_flag("--json", t31.json);

  PairsOpts pairs;
  auto* vp = v->add_subcommand("pairs", "Winning-pairs lower bound, exhaustively");
  vp->add_option("--u", pairs.u, "Single case: comma-separated u");
  vp->add_option("--w", pairs.w, "Single case: comma-separated w");
  vp->add_option("--max-length", pairs.max_length);
  vp->add_option("--max-entry", pairs.max_entry);
  vp->add_option("--direct-length", pairs.direct_length,
                 "Lengths up to this are also counted from the definition");
  vp->add_flag("--json", pairs.json);

  PromiseOpts promise;
  auto* vpr = v->add_subcommand("promise", "Duplicate-check sampler on the promise problem");
  vpr->add_option("--n", promise.n);
  vpr->add_option("--k", promise.k);
  vpr->add_option("--trials", promise.trials);
  vpr->add_option("--reps", promise.reps, "T (default: smallest with analytic miss < 1/3)");
  vpr->add_option("--seed", promise.seed);
  vpr->add_flag("--json", promise.json);

  BenchOpts bench;
  bench.threads = threads;
  auto* b = app.add_subcommand("bench", "Time the heavy hitter and F_k estimator on a Zipf stream");
  b->add_option("--n", bench.n);
  b->add_option("--m", bench.m);
  b->add_option("--k", bench.k);
  b->add_option("--eps", bench.eps);
  b->add_option("--seed", bench.seed);
  b->add_option("--threads", bench.threads);
  b->add_flag("--json", bench.json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_generate(gen, out);
    if (*h) return cmd_heavy(heavy, out);
    if (*f) return cmd_fk(fk, out);
    if (*vo) return cmd_oracle(oracle, out);
    if (*v21) return cmd_thm21(t21, out);
    if (*v31) return cmd_thm31(t31, out);
    if (*vp) return cmd_pairs(pairs, out);
    if (*vpr) return cmd_promise(promise, out);
    if (*b) return cmd_bench(bench, out);
  } catch (const Error& e) {
    err << "pickdrop: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "pickdrop: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace pickdrop::cli
