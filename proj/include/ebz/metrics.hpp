#ifndef EBZ_METRICS_HPP
#define EBZ_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ebz/core.hpp"

namespace ebz {

inline constexpr std::size_t kDefaultAutocorrLags = 100;

/// Distortion and size metrics between an original grid and its reconstruction.
///
/// Undefined quantities use IEEE sentinels: psnr is +inf when rmse is 0, and
/// nrmse / max_rel_error / psnr are NaN when the original has zero range but
/// the reconstruction differs.
struct MetricsReport {
    std::size_t value_count = 0;
    double value_range = 0;
    double max_abs_error = 0;
    double max_rel_error = 0;
    double rmse = 0;
    double nrmse = 0;
    double psnr = 0;
    double pearson_rho = 0;
    double compression_factor = 0;
    double bit_rate = 0;
    std::vector<double> autocorr;  // lags 0..L of the pointwise error series
};

MetricsReport compute_metrics(const DataGrid &original, const DataGrid &reconstructed, std::size_t compressed_bytes,
                              std::size_t lags = kDefaultAutocorrLags);

double compression_factor(std::size_t original_bytes, std::size_t compressed_bytes);
double bit_rate(std::size_t compressed_bytes, std::size_t value_count);

double rmse(std::span<const double> a, std::span<const double> b);
double psnr(double value_range, double rmse);

/// Two-pass Pearson correlation. Identical inputs give 1 even when constant;
/// otherwise a zero-variance side gives NaN.
double pearson(std::span<const double> a, std::span<const double> b);

/// r[l] = Σ (e_i - ē)(e_{i+l} - ē) / Σ (e_i - ē)^2 for l = 0..lags.
/// A zero-variance series yields all zeros; lags >= N yield 0.
std::vector<double> autocorrelation(std::span<const double> series, std::size_t lags);

/// Formats a double for CSV: shortest round-trip form, with "inf", "-inf", "nan".
std::string csv_number(double v);

/// Header: label,value_count,value_range,max_abs_error,max_rel_error,rmse,nrmse,psnr,pearson_rho,compression_factor,bit_rate
void write_metrics_csv_header(std::ostream &out);
void write_metrics_csv_row(std::ostream &out, const std::string &label, const MetricsReport &m);

/// Header: lag,autocorrelation
void write_autocorr_csv(std::ostream &out, const MetricsReport &m);

}  // namespace ebz

#endif
