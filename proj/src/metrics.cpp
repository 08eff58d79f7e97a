#include "ebz/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ebz {

namespace {

double mean(std::span<const double> v) {
    long double s = 0;
    for (double x : v) s += x;
    return static_cast<double>(s / static_cast<long double>(v.size()));
}

}  // namespace

double compression_factor(std::size_t original_bytes, std::size_t compressed_bytes) {
    if (compressed_bytes == 0) throw std::invalid_argument("compressed size must be positive");
    if (original_bytes == 0) throw std::invalid_argument("original size must be positive");
    return static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
}

double bit_rate(std::size_t compressed_bytes, std::size_t value_count) {
    if (compressed_bytes == 0) throw std::invalid_argument("compressed size must be positive");
    if (value_count == 0) throw std::invalid_argument("value count must be positive");
    return 8.0 * static_cast<double>(compressed_bytes) / static_cast<double>(value_count);
}

double rmse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("rmse needs two equal nonempty series");
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        long double e = static_cast<long double>(a[i]) - b[i];
        s += e * e;
    }
    return static_cast<double>(std::sqrt(s / static_cast<long double>(a.size())));
}

double psnr(double value_range, double rmse_value) {
    if (rmse_value == 0.0) return std::numeric_limits<double>::infinity();
    if (!(value_range > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return 20.0 * std::log10(value_range / rmse_value);
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson needs two equal nonempty series");
    if (std::equal(a.begin(), a.end(), b.begin())) return 1.0;
    const double ma = mean(a), mb = mean(b);
    long double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        long double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0 || vb == 0) return std::numeric_limits<double>::quiet_NaN();
    double rho = static_cast<double>(cov / std::sqrt(va * vb));
    return std::clamp(rho, -1.0, 1.0);
}

std::vector<double> autocorrelation(std::span<const double> series, std::size_t lags) {
    std::vector<double> r(lags + 1, 0.0);
    if (series.empty()) return r;
    const double m = mean(series);
    std::vector<double> centered(series.size());
    long double var = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        centered[i] = series[i] - m;
        var += static_cast<long double>(centered[i]) * centered[i];
    }
    if (var == 0) return r;
    for (std::size_t l = 0; l <= lags && l < series.size(); ++l) {
        long double s = 0;
        for (std::size_t i = 0; i + l < series.size(); ++i) s += static_cast<long double>(centered[i]) * centered[i + l];
        r[l] = static_cast<double>(s / var);
    }
    return r;
}

MetricsReport compute_metrics(const DataGrid &original, const DataGrid &reconstructed, std::size_t compressed_bytes,
                              std::size_t lags) {
    if (original.dims() != reconstructed.dims()) throw std::invalid_argument("grid dimensions differ");
    auto x = original.values();
    auto y = reconstructed.values();

    MetricsReport m;
    m.value_count = x.size();
    m.value_range = grid_range(original);

    std::vector<double> errors(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        errors[i] = x[i] - y[i];
        m.max_abs_error = std::max(m.max_abs_error, std::fabs(errors[i]));
    }
    m.rmse = rmse(x, y);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (m.value_range > 0) {
        m.nrmse = m.rmse / m.value_range;
        m.max_rel_error = m.max_abs_error / m.value_range;
    } else {
        m.nrmse = m.rmse == 0 ? 0.0 : nan;
        m.max_rel_error = m.max_abs_error == 0 ? 0.0 : nan;
    }
    m.psnr = psnr(m.value_range, m.rmse);
    m.pearson_rho = pearson(x, y);
    m.compression_factor = compression_factor(original.byte_size(), compressed_bytes);
    m.bit_rate = bit_rate(compressed_bytes, x.size());
    m.autocorr = autocorrelation(errors, lags);
    return m;
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_metrics_csv_header(std::ostream &out) {
    out << "label,value_count,value_range,max_abs_error,max_rel_error,rmse,nrmse,psnr,pearson_rho,"
           "compression_factor,bit_rate\n";
}

void write_metrics_csv_row(std::ostream &out, const std::string &label, const MetricsReport &m) {
    out << label << ',' << m.value_count << ',' << csv_number(m.value_range) << ',' << csv_number(m.max_abs_error)
        << ',' << csv_number(m.max_rel_error) << ',' << csv_number(m.rmse) << ',' << csv_number(m.nrmse) << ','
        << csv_number(m.psnr) << ',' << csv_number(m.pearson_rho) << ',' << csv_number(m.compression_factor) << ','
        << csv_number(m.bit_rate) << '\n';
}

void write_autocorr_csv(std::ostream &out, const MetricsReport &m) {
    out << "lag,autocorrelation\n";
    for (std::size_t l = 0; l < m.autocorr.size(); ++l) out << l << ',' << csv_number(m.autocorr[l]) << '\n';
}

}  // namespace ebz
