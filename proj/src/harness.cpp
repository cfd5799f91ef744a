#include "egkit/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

namespace egkit {

const char* const kCsvHeader = "k,res_w,res_nat,dist,lyapunov,bound";

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double_field(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError(std::string("trailing characters in ") + what);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

int parse_int_field(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw ConfigError(std::string("trailing characters in ") + what);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace

std::string rows_to_csv(const std::vector<TraceRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += fmt(r.res_w);
    out += ',';
    out += fmt_opt(r.res_nat);
    out += ',';
    out += fmt_opt(r.dist);
    out += ',';
    out += fmt_opt(r.lyapunov);
    out += ',';
    out += fmt_opt(r.bound);
    out += '\n';
  }
  return out;
}

std::string trace_to_csv(const Trace& trace) { return rows_to_csv(trace.rows); }

void write_csv(const Trace& trace, const std::string& path) {
  write_file(path, trace_to_csv(trace));
}

std::vector<TraceRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw ConfigError("unexpected trace header: '" + line + "'");
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 6 fields, got " +
                        std::to_string(fields.size()));
    TraceRow r;
    r.k = parse_int_field(fields[0], "k");
    if (fields[1].empty())
      throw ConfigError("line " + std::to_string(lineno) + ": res_w is required");
    r.res_w = parse_double_field(fields[1], "res_w");
    if (!fields[2].empty()) r.res_nat = parse_double_field(fields[2], "res_nat");
    if (!fields[3].empty()) r.dist = parse_double_field(fields[3], "dist");
    if (!fields[4].empty()) r.lyapunov = parse_double_field(fields[4], "lyapunov");
    if (!fields[5].empty()) r.bound = parse_double_field(fields[5], "bound");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<TraceRow> read_csv(const std::string& path) { return parse_csv(read_file(path)); }

RateFit fit_log_slope(const std::vector<TraceRow>& rows, double tail_fraction,
                      bool best_iterate) {
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
    throw ConfigError("tail fraction must lie in (0, 1]");

  std::vector<std::pair<int, double>> series;  // (k, residual), k >= 1
  double running_min = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (r.k < 1) continue;
    running_min = std::min(running_min, r.res_w);
    series.emplace_back(r.k, best_iterate ? running_min : r.res_w);
  }
  const size_t n = series.size();
  const size_t tail = static_cast<size_t>(
      std::ceil(tail_fraction * static_cast<double>(n)));
  if (tail < 10)
    throw ConfigError("rate fit needs at least 10 tail rows, got " + std::to_string(tail));

  RateFit fit;
  fit.tail_fraction = tail_fraction;
  fit.n_points = static_cast<int>(tail);
  const size_t begin = n - tail;
  for (size_t i = begin; i < n; ++i) {
    if (series[i].second == 0.0) {
      // The residual underflowed to an exact zero inside the fit window; the
      // log-log slope is reported as the -inf sentinel.
      fit.slope = -std::numeric_limits<double>::infinity();
      fit.intercept = std::numeric_limits<double>::quiet_NaN();
      fit.underflow = true;
      return fit;
    }
  }

  double su = 0.0, sv = 0.0;
  for (size_t i = begin; i < n; ++i) {
    su += std::log(static_cast<double>(series[i].first));
    sv += std::log(series[i].second);
  }
  const double mu = su / static_cast<double>(tail);
  const double mv = sv / static_cast<double>(tail);
  double suu = 0.0, svv = 0.0, suv = 0.0;
  for (size_t i = begin; i < n; ++i) {
    const double du = std::log(static_cast<double>(series[i].first)) - mu;
    const double dv = std::log(series[i].second) - mv;
    suu += du * du;
    svv += dv * dv;
    suv += du * dv;
  }
  if (suu == 0.0) throw ConfigError("rate fit is degenerate: all tail rows share one k");
  fit.slope = suv / suu;
  fit.intercept = mv - fit.slope * mu;
  // A constant residual series is fitted exactly by the horizontal line.
  fit.r_squared = (svv == 0.0) ? 1.0 : std::min(1.0, (suv * suv) / (suu * svv));
  return fit;
}

RateFit fit_log_slope(const Trace& trace, double tail_fraction, bool best_iterate) {
  return fit_log_slope(trace.rows, tail_fraction, best_iterate);
}

Vector parse_vector_literal(const std::string& text) {
  std::string body = trim(text);
  if (!body.empty() && (body.front() == '[' || body.front() == '(')) {
    const char close = (body.front() == '[') ? ']' : ')';
    if (body.back() != close) throw ConfigError("unbalanced vector literal: " + text);
    body = trim(body.substr(1, body.size() - 2));
  }
  if (body.empty()) throw ConfigError("empty vector literal");
  const auto parts = split(body, ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (size_t i = 0; i < parts.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_double_field(trim(parts[i]), "vector entry");
  return v;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  try {
    const CorpusEntry entry = corpus_by_name(cfg.problem);
    const Method m = method_from_name(cfg.method);
    const Vector x0 = cfg.x0 ? *cfg.x0 : entry.default_x0;

    RunConfig rc;
    rc.max_iters = cfg.iters;
    rc.target_residual = cfg.target_residual;
    rc.step = cfg.step;
    rc.record_every = cfg.record_every;
    rc.certify = cfg.certify;
    rc.lazy_diagnostics = cfg.lazy;
    rc.allow_inadmissible = cfg.force;

    res.trace = run(m, entry.spec, rc, x0);
    res.trace.meta.problem = entry.name;

    if (!cfg.out.empty()) write_csv(res.trace, cfg.out);
    if (cfg.certify) {
      res.report = certify_trace(res.trace);
      res.report_text = format_report(res.trace, *res.report);
      if (!cfg.out.empty()) write_file(cfg.out + ".cert", res.report_text);
    }

    if (res.trace.meta.aborted) {
      res.exit_code = 3;
      res.error = res.trace.meta.abort_reason;
    } else if (res.report && !res.report->pass()) {
      res.exit_code = 1;
    }
  } catch (const NumericalError& e) {
    res.exit_code = 3;
    res.error = e.what();
  } catch (const StepRuleError& e) {
    res.exit_code = 2;
    res.error = e.what();
  } catch (const ResolventError& e) {
    res.exit_code = 2;
    res.error = e.what();
  } catch (const ConfigError& e) {
    res.exit_code = 2;
    res.error = e.what();
  }
  return res;
}

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_problems = false, saw_methods = false;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problems" || key == "methods") {
      std::vector<std::string> items;
      for (const auto& item : split(value, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) items.push_back(t);
      }
      if (items.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": " + key + " is empty");
      if (key == "problems") {
        cfg.problems = items;
        saw_problems = true;
      } else {
        cfg.methods = items;
        saw_methods = true;
      }
    } else if (key == "iters") {
      cfg.iters = parse_int_field(value, "iters");
    } else if (key == "step") {
      cfg.step = parse_double_field(value, "step");
    } else if (key == "x0") {
      cfg.x0 = parse_vector_literal(value);
    } else if (key == "certify") {
      if (value == "true" || value == "1")
        cfg.certify = true;
      else if (value == "false" || value == "0")
        cfg.certify = false;
      else
        throw ConfigError("line " + std::to_string(lineno) + ": certify must be boolean");
    } else if (key == "record_every") {
      cfg.record_every = parse_int_field(value, "record_every");
    } else if (key == "out_dir") {
      if (value.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": out_dir is empty");
      cfg.out_dir = value;
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!saw_problems) throw ConfigError("sweep config is missing 'problems'");
  if (!saw_methods) throw ConfigError("sweep config is missing 'methods'");
  return cfg;
}

SweepConfig read_sweep_config(const std::string& path) {
  return parse_sweep_config(read_file(path));
}

SweepResult run_sweep(const SweepConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);

  struct Pending {
    SweepRunSummary summary;
    std::future<ExperimentResult> future;
  };
  std::vector<Pending> pending;
  for (const auto& problem : cfg.problems) {
    for (const auto& method : cfg.methods) {
      ExperimentConfig ec;
      ec.problem = problem;
      ec.method = method;
      ec.iters = cfg.iters;
      ec.step = cfg.step;
      ec.x0 = cfg.x0;
      ec.record_every = cfg.record_every;
      ec.certify = cfg.certify;
      ec.out = (std::filesystem::path(cfg.out_dir) / (problem + "__" + method + ".csv"))
                   .string();
      Pending p;
      p.summary.problem = problem;
      p.summary.method = method;
      p.summary.out = ec.out;
      p.future = std::async(std::launch::async,
                            [ec]() { return run_experiment(ec); });
      pending.push_back(std::move(p));
    }
  }

  SweepResult result;
  for (auto& p : pending) {
    const ExperimentResult r = p.future.get();
    p.summary.exit_code = r.exit_code;
    p.summary.error = r.error;
    result.exit_code = std::max(result.exit_code, r.exit_code);
    result.runs.push_back(std::move(p.summary));
  }
  return result;
}

}  // namespace egkit
