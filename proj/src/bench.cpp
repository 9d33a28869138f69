#include "mvce/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mvce/error.hpp"
#include "mvce/solver.hpp"

namespace mvce {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t size_from_fraction(double fraction, std::size_t n, std::size_t d) {
  const auto s = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp(s, d, n);
}

// Exact-leverage mass outside the top-s rows.
double sorted_tail(const LeverageProfile& exact, std::size_t s) {
  double tail = 0.0;
  for (std::size_t r = s; r < exact.order.size(); ++r) tail += exact.scores[exact.order[r]];
  return std::max(tail, 0.0);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw FormatError("bad number '" + text + "'", line);
  return v;
}

std::uint64_t to_uint(const std::string& text, std::size_t line) {
  std::uint64_t v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw FormatError("bad integer '" + text + "'", line);
  return v;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  if (s_fraction && !(*s_fraction > 0.0 && *s_fraction <= 1.0)) {
    throw InvalidArgument("s_fraction must lie in (0, 1]");
  }
  const bool threshold_method =
      method == SampleMethod::det || method == SampleMethod::det_approx;
  if (threshold_method && !epsilon && !s_fraction) {
    throw InvalidArgument("deterministic sampling needs epsilon or s_fraction");
  }
  if (!threshold_method && !s_fraction) {
    throw InvalidArgument("randomized sampling needs s_fraction");
  }
  if (leverage == LeverageMode::approximate && !(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1)");
  }
}

FullSolve solve_full(const DataMatrix& x, double delta, std::uint64_t seed) {
  const auto t0 = Clock::now();
  SolveOptions opts;
  opts.delta = delta;
  const auto res = solve_wolfe_atwood(x, init_kumar_yildirim(x, seed), opts);
  return {res.state.g, ms_since(t0), res.certificate.iterations};
}

DataMatrix load_pipeline_input(const PipelineConfig& cfg) {
  if (cfg.input) return load_matrix(*cfg.input, format_from_path(*cfg.input), cfg.input_header);
  if (cfg.dataset) return generate(*cfg.dataset);
  throw InvalidArgument("pipeline has no input");
}

std::string dataset_label(const PipelineConfig& cfg) {
  if (cfg.dataset) return describe(*cfg.dataset);
  if (cfg.input) return cfg.input->string();
  return "";
}

BenchRecord run_pipeline(const DataMatrix& x, const PipelineConfig& cfg, const std::string& label,
                         const LeverageProfile* exact_reference) {
  cfg.validate();
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const double dd = static_cast<double>(d);

  BenchRecord r;
  r.dataset = label.empty() ? dataset_label(cfg) : label;
  r.method = std::string(to_string(cfg.method));
  r.n = n;
  r.d = d;
  r.delta = cfg.delta;
  r.seed = cfg.seed;

  const bool needs_scores = cfg.method != SampleMethod::uniform;
  const LeverageMode mode =
      cfg.method == SampleMethod::det_approx ? LeverageMode::approximate
      : cfg.method == SampleMethod::det      ? LeverageMode::exact
                                             : cfg.leverage;

  const auto t_total = Clock::now();
  LeverageProfile profile;
  auto t = Clock::now();
  if (needs_scores) {
    profile = mode == LeverageMode::exact ? exact_leverage(x) : approx_leverage(x, cfg.alpha, cfg.seed);
  }
  r.time_lev_ms = ms_since(t);

  t = Clock::now();
  SampleSelection sel;
  switch (cfg.method) {
    case SampleMethod::det:
      sel = cfg.epsilon ? sample_deterministic(profile, *cfg.epsilon)
                        : sample_top(profile, size_from_fraction(*cfg.s_fraction, n, d));
      break;
    case SampleMethod::det_approx:
      sel = cfg.epsilon ? sample_deterministic_approx(profile, *cfg.epsilon)
                        : sample_top(profile, size_from_fraction(*cfg.s_fraction, n, d));
      break;
    case SampleMethod::uniform:
      sel = sample_uniform(n, d, size_from_fraction(*cfg.s_fraction, n, d), cfg.seed);
      break;
    case SampleMethod::proportional:
      sel = sample_proportional(profile, size_from_fraction(*cfg.s_fraction, n, d), cfg.seed);
      break;
  }
  const DataMatrix xs = x.select_rows(sel.indices);
  r.time_sample_ms = ms_since(t);
  r.s = sel.size();

  t = Clock::now();
  SolveOptions opts;
  opts.delta = cfg.delta;
  const auto solved = solve_wolfe_atwood(xs, init_kumar_yildirim(xs, cfg.seed), opts);
  r.time_solve_ms = ms_since(t);
  r.time_total_ms = ms_since(t_total);
  r.g_sampled = solved.state.g;
  r.iterations = solved.certificate.iterations;

  // Everything below is reporting, outside the timed stages.
  r.g_init = log_det(gram(xs)) - dd * std::log(static_cast<double>(r.s));
  const Ellipsoid e = centered_ellipsoid(solved.state);
  const double ratio = max_coverage_ratio(e, x);
  r.max_violation = ratio - 1.0;
  r.containment_warning = ratio > 1.0 + cfg.delta + 1e-9;

  if (cfg.epsilon && cfg.method != SampleMethod::uniform &&
      cfg.method != SampleMethod::proportional) {
    r.epsilon = *cfg.epsilon;
  } else {
    LeverageProfile local;
    const LeverageProfile* ref = exact_reference;
    if (ref == nullptr) {
      if (profile.mode == LeverageMode::exact && !profile.scores.empty()) {
        ref = &profile;
      } else {
        local = exact_leverage(x);
        ref = &local;
      }
    }
    r.epsilon = sorted_tail(*ref, r.s);
  }
  r.bound_thm2 = bound_initial_gap(dd, static_cast<double>(r.s), r.epsilon);
  r.bound_thm3 = bound_final_gap(dd, r.epsilon, cfg.delta);

  if (cfg.g_full) {
    r.g_full = *cfg.g_full;
  } else if (cfg.compute_full) {
    const auto full = solve_full(x, cfg.delta, cfg.seed);
    r.g_full = full.g;
    r.time_full_ms = full.time_ms;
  } else {
    r.g_full = kNaN;
  }
  r.gap = signed_gap(r.g_full, r.g_sampled);
  r.initial_gap = r.g_full - r.g_init;
  return r;
}

BenchRecord run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.input.has_value() == cfg.dataset.has_value()) {
    throw InvalidArgument("pipeline needs exactly one of an input path or a dataset spec");
  }
  const DataMatrix x = load_pipeline_input(cfg);
  BenchRecord r = run_pipeline(x, cfg, dataset_label(cfg));
  if (cfg.output_dir) {
    std::filesystem::create_directories(*cfg.output_dir);
    std::ofstream csv(*cfg.output_dir / "record.csv", std::ios::trunc);
    write_bench_header(csv);
    write_bench_row(csv, r);
    std::ofstream rep(*cfg.output_dir / "report.txt", std::ios::trunc);
    write_report(rep, r);
  }
  return r;
}

double signed_gap(double g_full, double g_other) {
  const double gap = g_full - g_other;
  if (std::abs(gap) <= 1e-9 * std::max(1.0, std::abs(g_full))) return 0.0;
  return gap;
}

// ---------------------------------------------------------------- sweep config

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  cfg.seeds.clear();
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty() || text.front() == '[') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw FormatError("expected key = value", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    try {
      if (key == "dataset") {
        cfg.datasets.push_back(parse_dataset_spec(value));
      } else if (key == "input") {
        cfg.inputs.emplace_back(value);
      } else if (key == "header") {
        cfg.input_header = value == "true" || value == "1";
      } else if (key == "methods") {
        for (const auto& m : split_list(value)) cfg.methods.push_back(parse_sample_method(m));
      } else if (key == "s_fractions") {
        for (const auto& v : split_list(value)) cfg.s_fractions.push_back(to_double(v, line));
      } else if (key == "epsilons") {
        for (const auto& v : split_list(value)) cfg.epsilons.push_back(to_double(v, line));
      } else if (key == "seeds") {
        for (const auto& v : split_list(value)) cfg.seeds.push_back(to_uint(v, line));
      } else if (key == "delta") {
        cfg.delta = to_double(value, line);
      } else if (key == "leverage") {
        if (value == "exact") {
          cfg.leverage = LeverageMode::exact;
        } else if (value == "approx") {
          cfg.leverage = LeverageMode::approximate;
        } else {
          throw FormatError("leverage must be exact or approx", line);
        }
      } else if (key == "alpha") {
        cfg.alpha = to_double(value, line);
      } else if (key == "threads") {
        cfg.threads = static_cast<std::size_t>(to_uint(value, line));
      } else {
        throw FormatError("unknown key '" + key + "'", line);
      }
    } catch (const FormatError& e) {
      if (e.line() != 0) throw;
      throw FormatError(e.what(), line);
    }
  }
  if (cfg.seeds.empty()) cfg.seeds.push_back(0);
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return parse_sweep_config(in);
}

namespace {

struct SweepCell {
  std::size_t dataset = 0;
  PipelineConfig cfg;
};

std::size_t thread_count(std::size_t requested) {
  std::size_t cap = 0;
  if (const char* env = std::getenv("MVCE_THREADS")) {
    cap = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  }
  std::size_t t = requested != 0 ? requested : (cap != 0 ? cap : 1);
  if (cap != 0) t = std::min(t, cap);
  return std::max<std::size_t>(t, 1);
}

BenchRecord failed_record(const std::string& label, const PipelineConfig& cfg,
                          const std::string& what) {
  BenchRecord r;
  r.dataset = label;
  r.method = std::string(to_string(cfg.method));
  r.seed = cfg.seed;
  r.delta = cfg.delta;
  r.epsilon = cfg.epsilon.value_or(kNaN);
  r.g_full = r.g_sampled = r.g_init = r.gap = r.initial_gap = kNaN;
  r.bound_thm2 = r.bound_thm3 = r.max_violation = kNaN;
  r.error = what;
  return r;
}

}  // namespace

std::vector<BenchRecord> run_sweep(const SweepConfig& cfg, const std::filesystem::path& out_csv) {
  if (cfg.methods.empty() || (cfg.s_fractions.empty() && cfg.epsilons.empty()) ||
      (cfg.datasets.empty() && cfg.inputs.empty()) || cfg.seeds.empty()) {
    throw InvalidArgument("sweep grid is empty");
  }

  struct Prepared {
    std::string label;
    std::optional<DataMatrix> x;
    LeverageProfile exact;
    double g_full = kNaN;
    double time_full_ms = 0.0;
    std::string error;
  };
  std::vector<Prepared> data;
  auto prepare = [&](std::string label, auto load) {
    Prepared p;
    p.label = std::move(label);
    try {
      p.x.emplace(load());
      p.exact = exact_leverage(*p.x);
      const auto full = solve_full(*p.x, cfg.delta, 0);
      p.g_full = full.g;
      p.time_full_ms = full.time_ms;
    } catch (const Error& e) {
      p.error = e.what();
    }
    data.push_back(std::move(p));
  };
  for (const auto& spec : cfg.datasets) prepare(describe(spec), [&] { return generate(spec); });
  for (const auto& path : cfg.inputs) {
    prepare(path.string(), [&] { return load_matrix(path, format_from_path(path), cfg.input_header); });
  }

  std::vector<SweepCell> cells;
  for (std::size_t k = 0; k < data.size(); ++k) {
    for (const auto method : cfg.methods) {
      const bool threshold = method == SampleMethod::det || method == SampleMethod::det_approx;
      auto base = [&](std::uint64_t seed) {
        SweepCell c;
        c.dataset = k;
        c.cfg.method = method;
        c.cfg.delta = cfg.delta;
        c.cfg.leverage = cfg.leverage;
        c.cfg.alpha = cfg.alpha;
        c.cfg.seed = seed;
        c.cfg.compute_full = false;
        if (!std::isnan(data[k].g_full)) c.cfg.g_full = data[k].g_full;
        return c;
      };
      for (const double f : cfg.s_fractions) {
        for (const auto seed : cfg.seeds) {
          auto c = base(seed);
          c.cfg.s_fraction = f;
          cells.push_back(std::move(c));
        }
      }
      if (!threshold) continue;
      for (const double eps : cfg.epsilons) {
        for (const auto seed : cfg.seeds) {
          auto c = base(seed);
          c.cfg.epsilon = eps;
          cells.push_back(std::move(c));
        }
      }
    }
  }

  std::ofstream out(out_csv, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + out_csv.string());
  write_bench_header(out);
  out.flush();

  std::vector<std::optional<BenchRecord>> results(cells.size());
  std::mutex mu;
  std::size_t next_cell = 0;
  std::size_t next_write = 0;

  auto worker = [&] {
    while (true) {
      std::size_t k = 0;
      {
        std::lock_guard lock(mu);
        if (next_cell == cells.size()) return;
        k = next_cell++;
      }
      const auto& cell = cells[k];
      const auto& prep = data[cell.dataset];
      BenchRecord rec;
      if (!prep.error.empty()) {
        rec = failed_record(prep.label, cell.cfg, prep.error);
      } else {
        try {
          rec = run_pipeline(*prep.x, cell.cfg, prep.label, &prep.exact);
          rec.time_full_ms = prep.time_full_ms;
        } catch (const Error& e) {
          rec = failed_record(prep.label, cell.cfg, e.what());
        }
      }
      std::lock_guard lock(mu);
      results[k] = std::move(rec);
      // Single writer: rows leave in cell order.
      while (next_write < results.size() && results[next_write]) {
        write_bench_row(out, *results[next_write]);
        out.flush();
        ++next_write;
      }
    }
  };

  const std::size_t threads = std::min(thread_count(cfg.threads), std::max<std::size_t>(cells.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<BenchRecord> records;
  records.reserve(results.size());
  for (auto& r : results) records.push_back(std::move(*r));
  return records;
}

// ------------------------------------------------------------------ csv / report

std::vector<std::string> bench_csv_columns() {
  return {"dataset",       "method",        "n",
          "d",             "s",             "epsilon",
          "delta",         "seed",          "g_full",
          "g_sampled",     "g_init",        "gap",
          "initial_gap",   "bound_thm2",    "bound_thm3",
          "max_violation", "containment_warning", "iterations",
          "time_lev_ms",   "time_sample_ms", "time_solve_ms",
          "time_total_ms", "time_full_ms",  "error"};
}

void write_bench_header(std::ostream& out) {
  const auto cols = bench_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_field(const std::string& v, std::size_t line) {
  if (v == "nan" || v == "-nan") return kNaN;
  if (v == "inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  return to_double(v, line);
}

}  // namespace

void write_bench_row(std::ostream& out, const BenchRecord& r) {
  std::ostringstream row;
  row << std::setprecision(17);
  row << quote(r.dataset) << ',' << r.method << ',' << r.n << ',' << r.d << ',' << r.s << ','
      << r.epsilon << ',' << r.delta << ',' << r.seed << ',' << r.g_full << ',' << r.g_sampled
      << ',' << r.g_init << ',' << r.gap << ',' << r.initial_gap << ',' << r.bound_thm2 << ','
      << r.bound_thm3 << ',' << r.max_violation << ',' << (r.containment_warning ? 1 : 0) << ','
      << r.iterations << ',' << r.time_lev_ms << ',' << r.time_sample_ms << ','
      << r.time_solve_ms << ',' << r.time_total_ms << ',' << r.time_full_ms << ','
      << quote(r.error) << '\n';
  out << row.str();
}

std::vector<BenchRecord> read_bench_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty bench CSV", 1);
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : bench_csv_columns()) {
    if (!col.count(name)) throw FormatError("missing column '" + name + "'", 1);
  }
  std::vector<BenchRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw FormatError("ragged row", line_no);
    auto num = [&](const char* name) { return parse_field(f[col.at(name)], line_no); };
    auto uint = [&](const char* name) { return to_uint(f[col.at(name)], line_no); };
    BenchRecord r;
    r.dataset = f[col.at("dataset")];
    r.method = f[col.at("method")];
    r.n = uint("n");
    r.d = uint("d");
    r.s = uint("s");
    r.epsilon = num("epsilon");
    r.delta = num("delta");
    r.seed = uint("seed");
    r.g_full = num("g_full");
    r.g_sampled = num("g_sampled");
    r.g_init = num("g_init");
    r.gap = num("gap");
    r.initial_gap = num("initial_gap");
    r.bound_thm2 = num("bound_thm2");
    r.bound_thm3 = num("bound_thm3");
    r.max_violation = num("max_violation");
    r.containment_warning = f[col.at("containment_warning")] == "1";
    r.iterations = uint("iterations");
    r.time_lev_ms = num("time_lev_ms");
    r.time_sample_ms = num("time_sample_ms");
    r.time_solve_ms = num("time_solve_ms");
    r.time_total_ms = num("time_total_ms");
    r.time_full_ms = num("time_full_ms");
    r.error = f[col.at("error")];
    out.push_back(std::move(r));
  }
  return out;
}

void write_report(std::ostream& out, const BenchRecord& r) {
  out << std::setprecision(17);
  out << "dataset=" << r.dataset << '\n'
      << "method=" << r.method << '\n'
      << "n=" << r.n << '\n'
      << "d=" << r.d << '\n'
      << "s=" << r.s << '\n'
      << "epsilon=" << r.epsilon << '\n'
      << "delta=" << r.delta << '\n'
      << "seed=" << r.seed << '\n'
      << "g_full=" << r.g_full << '\n'
      << "g_sampled=" << r.g_sampled << '\n'
      << "g_init=" << r.g_init << '\n'
      << "gap=" << r.gap << '\n'
      << "initial_gap=" << r.initial_gap << '\n'
      << "bound_thm2=" << r.bound_thm2 << '\n'
      << "bound_thm3=" << r.bound_thm3 << '\n'
      << "max_violation=" << r.max_violation << '\n'
      << "containment_warning=" << (r.containment_warning ? "true" : "false") << '\n'
      << "iterations=" << r.iterations << '\n'
      << "time_lev_ms=" << r.time_lev_ms << '\n'
      << "time_sample_ms=" << r.time_sample_ms << '\n'
      << "time_solve_ms=" << r.time_solve_ms << '\n'
      << "time_total_ms=" << r.time_total_ms << '\n'
      << "time_full_ms=" << r.time_full_ms << '\n';
}

// ------------------------------------------------------------------ bounds

std::size_t BoundsReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const BoundCheck& c) { return !c.ok(); }));
}

void BoundsReport::print(std::ostream& out) const {
  out << "row  method      thm2  thm3  slack  dataset\n";
  for (const auto& c : checks) {
    auto mark = [&](bool ok) { return !c.checked ? "skip" : ok ? "pass" : "FAIL"; };
    out << std::left << std::setw(5) << c.index << std::setw(12) << c.method << std::setw(6)
        << mark(c.thm2_ok) << std::setw(6) << mark(c.thm3_ok) << std::setw(7)
        << (c.consistent ? "pass" : "FAIL") << c.dataset;
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << '\n';
  }
  out << violations() << " violation(s) in " << checks.size() << " record(s)\n";
}

BoundsReport verify_bounds(const std::vector<BenchRecord>& records) {
  BoundsReport report;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    BoundCheck c;
    c.index = i;
    c.dataset = r.dataset;
    c.method = r.method;
    if (!r.error.empty() || std::isnan(r.g_full) || std::isnan(r.g_sampled)) {
      c.note = r.error.empty() ? "no full solve" : "error: " + r.error;
      report.checks.push_back(std::move(c));
      continue;
    }
    const double dd = static_cast<double>(r.d);
    const double gap = signed_gap(r.g_full, r.g_sampled);
    c.consistent = r.g_sampled <= r.g_full + certificate_gap(dd, r.delta) + 1e-8;
    if (r.method == "det") {
      c.checked = true;
      c.thm3_ok = gap < r.bound_thm3;
      c.thm2_ok = (r.g_full - r.g_init) < r.bound_thm2;
    }
    if (!c.ok()) {
      std::ostringstream note;
      note << std::setprecision(6) << "gap=" << gap << " bound_thm3=" << r.bound_thm3
           << " initial_gap=" << r.g_full - r.g_init << " bound_thm2=" << r.bound_thm2;
      c.note = note.str();
    }
    report.checks.push_back(std::move(c));
  }
  return report;
}

void require_bounds(const BoundsReport& report) {
  if (report.violations() == 0) return;
  std::ostringstream msg;
  msg << report.violations() << " bound violation(s):";
  for (const auto& c : report.checks) {
    if (!c.ok()) msg << " [row " << c.index << ' ' << c.method << ' ' << c.dataset << ": " << c.note << ']';
  }
  throw BoundViolation(msg.str());
}

}  // namespace mvce
