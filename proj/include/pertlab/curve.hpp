#pragma once

#include <string>
#include <vector>

#include "pertlab/scenario.hpp"

namespace pertlab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

enum class FitTransform { log_log, loglog_log, loglog_loglog };

FitTransform fit_transform(const std::string& name);
std::string fit_transform_name(FitTransform t);

struct FitResult {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  std::size_t points = 0;
};

/// Least squares on
///   log-log:        log beta        against log(1/r)
///   loglog-log:     log log beta    against log(1/r)
///   loglog-loglog:  log log beta    against log log(1/r)
/// Points where the transform is undefined or infinite are skipped; fewer
/// than five usable points raise InsufficientDataError.
FitResult fit_exponent(const std::vector<double>& r, const std::vector<double>& log_beta, FitTransform t);
FitResult fit_exponent(const RateCurve& curve, FitTransform t, bool monotone = false);

/// %.17g of e^lg, or m.mmmmmmmmmmmmmmmme+E with 17 significant digits when
/// e^lg is outside the normal double range. "inf", "0" and "nan" as usual.
std::string format_log_value(double lg);
/// Inverse of format_log_value (and of plain %.17g text).
double parse_log_value(const std::string& text);

inline constexpr const char* kCsvHeader =
    "r,beta_V_raw,beta_V_monotone,witness_n,witness_k,witness_j,witness_s,witness_rprime,support_status,stderr_bars";

std::string curve_csv(const RateCurve& curve);
/// Rows mirror the CSV columns and add the log values that make the reload
/// exact; `meta` carries scenario, theorem, hash, seed and versions.
std::string curve_json(const RateCurve& curve);
RateCurve curve_from_json(const std::string& text);
/// Reads the CSV columns back; log values are recovered from the text.
RateCurve curve_from_csv(const std::string& text);

/// Throws IoError naming the path.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
/// JSON when the file starts with '{', CSV otherwise.
RateCurve load_curve(const std::string& path);

}  // namespace pertlab
