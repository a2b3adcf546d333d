#include "pertlab/curve.hpp"

#include <cfloat>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pertlab/errors.hpp"

namespace pertlab {

namespace {

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// A JSON number, null for NaN, a string for infinities.
std::string jnum(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  return g17(x);
}

// A value column: plain numbers stay numbers, the rest become strings.
std::string jvalue(const std::string& text) {
  if (text == "nan") return "null";
  const double x = std::strtod(text.c_str(), nullptr);
  if (std::isfinite(x) && g17(x) == text) return text;
  return "\"" + text + "\"";
}

std::string jstr(const std::string& s) { return nlohmann::json(s).dump(); }

double jget(const nlohmann::json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) return parse_log_value(j.get<std::string>()) ;
  return j.get<double>();
}

// Log fields store the log itself, with "inf"/"-inf" strings.
double jlog(const nlohmann::json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    throw IoError("unexpected log field '" + s + "'");
  }
  return j.get<double>();
}

std::string witness_s_text(const Witness& w) {
  if (!std::isnan(w.log_s)) return format_log_value(w.log_s);
  return g17(w.s);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_plain(const std::string& t) {
  if (t == "nan") return std::nan("");
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') throw IoError("cannot read number '" + t + "'");
  return x;
}

}  // namespace

FitTransform fit_transform(const std::string& name) {
  if (name == "log-log") return FitTransform::log_log;
  if (name == "loglog-log") return FitTransform::loglog_log;
  if (name == "loglog-loglog") return FitTransform::loglog_loglog;
  throw ConfigError("unknown transform '" + name + "' (expected log-log, loglog-log or loglog-loglog)");
}

std::string fit_transform_name(FitTransform t) {
  switch (t) {
    case FitTransform::log_log: return "log-log";
    case FitTransform::loglog_log: return "loglog-log";
    case FitTransform::loglog_loglog: return "loglog-loglog";
  }
  return "?";
}

FitResult fit_exponent(const std::vector<double>& r, const std::vector<double>& log_beta, FitTransform t) {
  std::vector<double> X, Y;
  for (std::size_t i = 0; i < r.size() && i < log_beta.size(); ++i) {
    const double lb = log_beta[i];
    if (!(r[i] > 0.0) || !std::isfinite(lb)) continue;
    // log(1/r) = -log r keeps radii near the bottom of the double range exact.
    const double x = -std::log(r[i]);
    double xx = x, yy = lb;
    if (t != FitTransform::log_log) {
      if (!(lb > 0.0)) continue;
      yy = std::log(lb);
    }
    if (t == FitTransform::loglog_loglog) {
      if (!(x > 0.0)) continue;
      xx = std::log(x);
    }
    X.push_back(xx);
    Y.push_back(yy);
  }
  if (X.size() < 5)
    throw InsufficientDataError("fit needs at least 5 finite points, have " + std::to_string(X.size()));
  const double n = static_cast<double>(X.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("fit needs at least two distinct abscissae");
  FitResult f;
  f.points = X.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

FitResult fit_exponent(const RateCurve& curve, FitTransform t, bool monotone) {
  std::vector<double> r, lb;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    r.push_back(curve.points[i].r);
    lb.push_back(monotone && i < curve.monotone.size() ? curve.monotone[i].log() : curve.points[i].value.log());
  }
  return fit_exponent(r, lb, t);
}

std::string format_log_value(double lg) {
  if (std::isnan(lg)) return "nan";
  if (lg == HUGE_VAL) return "inf";
  if (lg == -HUGE_VAL) return "0";
  const double v = std::exp(lg);
  if (std::isfinite(v) && v >= DBL_MIN) return g17(v);
  const double l10 = lg / std::log(10.0);
  long long e = static_cast<long long>(std::floor(l10));
  double m = std::pow(10.0, l10 - static_cast<double>(e));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16f", m);
  if (buf[0] == '1' && buf[1] == '0') {  // rounded up to 10
    ++e;
    std::snprintf(buf, sizeof buf, "%.16f", m / 10.0);
  }
  char out[96];
  std::snprintf(out, sizeof out, "%se%+lld", buf, e);
  return out;
}

double parse_log_value(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  const auto epos = text.find_first_of("eE");
  const double x = parse_plain(text);
  if (std::isfinite(x) && x >= DBL_MIN) return std::log(x);
  if (x == 0.0 && text.find_first_not_of("0.+-") == std::string::npos) return -HUGE_VAL;
  if (epos == std::string::npos) throw IoError("cannot read value '" + text + "'");
  const double m = parse_plain(text.substr(0, epos));
  const long long e = std::strtoll(text.c_str() + epos + 1, nullptr, 10);
  if (!(m > 0.0)) throw IoError("cannot read value '" + text + "'");
  return std::log(m) + static_cast<double>(e) * std::log(10.0);
}

std::string curve_csv(const RateCurve& c) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const RatePoint& p = c.points[i];
    const Witness& w = p.witness;
    const double mono = i < c.monotone.size() ? c.monotone[i].log() : p.value.log();
    out += g17(p.r) + "," + format_log_value(p.value.log()) + "," + format_log_value(mono) + "," + g17(w.n) + "," +
           g17(w.k) + "," + g17(w.j) + "," + witness_s_text(w) + "," + g17(w.rprime) + "," + csv_field(p.status) +
           "," + g17(p.stderr_bar) + "\n";
  }
  return out;
}

std::string curve_json(const RateCurve& c) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, c.scenario_hash);
  std::string out = "{\n  \"meta\": {\"scenario\": " + jstr(c.scenario) + ", \"theorem\": " + jstr(c.theorem) +
                    ", \"scenario_hash\": \"" + hash + "\", \"seed\": " + std::to_string(c.seed) +
                    ", \"condition\": " + jstr(c.condition) + ", \"versions\": {\"pertlab\": " + jstr(kVersion) +
                    ", \"format\": " + std::to_string(kFormatVersion) + "}},\n  \"rows\": [";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const RatePoint& p = c.points[i];
    const Witness& w = p.witness;
    const double mono = i < c.monotone.size() ? c.monotone[i].log() : p.value.log();
    out += std::string(i ? "," : "") + "\n    {\"r\": " + jnum(p.r) +
           ", \"beta_V_raw\": " + jvalue(format_log_value(p.value.log())) +
           ", \"beta_V_monotone\": " + jvalue(format_log_value(mono)) + ", \"witness_n\": " + jnum(w.n) +
           ", \"witness_k\": " + jnum(w.k) + ", \"witness_j\": " + jnum(w.j) +
           ", \"witness_s\": " + jvalue(witness_s_text(w)) + ", \"witness_rprime\": " + jnum(w.rprime) +
           ", \"support_status\": " + jstr(p.status) + ", \"stderr_bars\": " + jnum(p.stderr_bar) +
           ", \"note\": " + jstr(p.note) + ", \"log_beta_V_raw\": " + jnum(p.value.log()) +
           ", \"log_beta_V_monotone\": " + jnum(mono) + ", \"witness_s_exact\": " + jnum(w.s) +
           ", \"witness_log_s\": " + jnum(w.log_s) + "}";
  }
  out += c.points.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

RateCurve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed curve JSON: ") + e.what());
  }
  try {
    RateCurve c;
    const auto& m = j.at("meta");
    c.scenario = m.at("scenario").get<std::string>();
    c.theorem = m.at("theorem").get<std::string>();
    c.scenario_hash = std::stoull(m.at("scenario_hash").get<std::string>(), nullptr, 16);
    c.seed = m.at("seed").get<std::uint64_t>();
    c.condition = m.at("condition").get<std::string>();
    for (const auto& row : j.at("rows")) {
      RatePoint p;
      p.r = jget(row.at("r"));
      p.value = LogReal::from_log(jlog(row.at("log_beta_V_raw")));
      p.witness.n = jget(row.at("witness_n"));
      p.witness.k = jget(row.at("witness_k"));
      p.witness.j = jget(row.at("witness_j"));
      p.witness.rprime = jget(row.at("witness_rprime"));
      p.witness.s = jlog(row.at("witness_s_exact"));
      p.witness.log_s = jlog(row.at("witness_log_s"));
      p.status = row.at("support_status").get<std::string>();
      p.stderr_bar = jget(row.at("stderr_bars"));
      p.note = row.at("note").get<std::string>();
      c.monotone.push_back(LogReal::from_log(jlog(row.at("log_beta_V_monotone"))));
      c.points.push_back(std::move(p));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("curve JSON is missing a field: ") + e.what());
  }
}

RateCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw IoError("unexpected CSV header: " + line);
  RateCurve c;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw IoError("CSV row with " + std::to_string(f.size()) + " fields: " + line);
    RatePoint p;
    p.r = parse_plain(f[0]);
    p.value = LogReal::from_log(parse_log_value(f[1]));
    c.monotone.push_back(LogReal::from_log(parse_log_value(f[2])));
    p.witness.n = parse_plain(f[3]);
    p.witness.k = parse_plain(f[4]);
    p.witness.j = parse_plain(f[5]);
    p.witness.log_s = parse_log_value(f[6]);
    p.witness.s = std::exp(p.witness.log_s);
    p.witness.rprime = parse_plain(f[7]);
    p.status = f[8];
    p.stderr_bar = parse_plain(f[9]);
    c.points.push_back(std::move(p));
  }
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RateCurve load_curve(const std::string& path) {
  const std::string text = read_text(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return curve_from_json(text);
  return curve_from_csv(text);
}

}  // namespace pertlab
