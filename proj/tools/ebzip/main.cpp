// ebzip: error-bounded lossy compression of raw floating-point arrays.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ebz/generators.hpp"
#include "jobs.hpp"

using namespace ebz;
using namespace ebz::cli;

namespace {

struct CommonFlags {
    std::string dims;
    int width = 32;
    int layers = 1;
    int intervals_exp = 8;
    std::optional<double> abs_bound;
    std::optional<double> rel_bound;
    double theta = 0.9;
};

void add_grid_flags(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--dims", f.dims, "Dimensions, fastest-varying first (e.g. 512x512)");
    cmd->add_option("--width", f.width, "Element width in bits")->check(CLI::IsMember({32, 64}));
}

void add_codec_flags(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--layers", f.layers, "Prediction layers n")->check(CLI::Range(1, kMaxLayers));
    cmd->add_option("--intervals-exp", f.intervals_exp, "Interval exponent m (2^m - 1 intervals)")
        ->check(CLI::Range(kMinIntervalExponent, kMaxIntervalExponent));
    cmd->add_option("--abs-bound", f.abs_bound, "Absolute error bound");
    cmd->add_option("--rel-bound", f.rel_bound, "Value-range-relative error bound");
    cmd->add_option("--theta", f.theta, "Hitting-rate threshold for the interval warning");
}

CompressorConfig make_config(const CommonFlags &f, bool require_bound) {
    CompressorConfig c;
    c.layers = f.layers;
    c.interval_exponent = f.intervals_exp;
    c.bound.absolute = f.abs_bound;
    c.bound.relative = f.rel_bound;
    c.hitting_rate_threshold = f.theta;
    if (!f.abs_bound && !f.rel_bound) {
        if (require_bound) throw std::invalid_argument("give --abs-bound and/or --rel-bound");
        c.bound.relative = 1e-4;
    }
    c.validate();
    return c;
}

ElementWidth to_width(int bits) { return bits == 64 ? ElementWidth::f64 : ElementWidth::f32; }

std::vector<fs::path> to_paths(const std::vector<std::string> &v) { return {v.begin(), v.end()}; }

// Writes CSV to --csv when given, otherwise stdout.
template <class Fn>
void emit(const std::string &csv_path, Fn &&fn) {
    if (csv_path.empty()) return fn(std::cout);
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot create " + csv_path);
    fn(out);
}

void report_warnings(const std::vector<FileOutcome> &outcomes) {
    for (const auto &r : outcomes) {
        if (!r.ok)
            std::cerr << "ebzip: " << r.input.string() << ": " << r.error << '\n';
        else if (r.warning)
            std::cerr << "ebzip: warning: " << r.input.string() << ": " << r.warning->message() << '\n';
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Error-bounded lossy compressor for floating-point arrays"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::vector<std::string> inputs;
    unsigned workers = default_workers();
    std::string out_dir = ".";
    std::string csv_path;
    bool auto_m = false;

    auto *compress_cmd = app.add_subcommand("compress", "Compress raw arrays into .ebz containers");
    compress_cmd->add_option("inputs", inputs, "Raw input files")->required();
    add_grid_flags(compress_cmd, flags);
    add_codec_flags(compress_cmd, flags);
    compress_cmd->add_option("--workers", workers, "Parallel workers (default $EBZIP_WORKERS or 1)");
    compress_cmd->add_flag("--auto-m", auto_m, "Retry at m+2 while the hitting rate is below theta");
    compress_cmd->add_option("--out", out_dir, "Output directory");
    compress_cmd->add_option("--csv", csv_path, "Write the summary CSV here instead of stdout");

    auto *decompress_cmd = app.add_subcommand("decompress", "Decompress .ebz containers into raw arrays");
    decompress_cmd->add_option("inputs", inputs, "Container files")->required();
    decompress_cmd->add_option("--workers", workers, "Parallel workers (default $EBZIP_WORKERS or 1)");
    decompress_cmd->add_option("--out", out_dir, "Output directory");
    decompress_cmd->add_option("--csv", csv_path, "Write the summary CSV here instead of stdout");

    AnalyzeSpec analyze;
    std::string generator;
    std::string autocorr_path;
    std::size_t compressed_bytes = 0;
    auto *analyze_cmd = app.add_subcommand("analyze", "Metrics, layer scan, interval sweep, rate-distortion");
    analyze_cmd->add_option("mode", analyze.mode, "metrics | best-layer | interval-sweep | rate-distortion")
        ->required()
        ->check(CLI::IsMember({"metrics", "best-layer", "interval-sweep", "rate-distortion"}));
    analyze_cmd->add_option("inputs", inputs, "Input files");
    add_grid_flags(analyze_cmd, flags);
    add_codec_flags(analyze_cmd, flags);
    analyze_cmd->add_option("--generator", generator, "Use a synthetic field instead of an input file");
    analyze_cmd->add_option("--seed", analyze.seed, "Generator seed");
    analyze_cmd->add_option("--bounds", analyze.bounds, "Relative bounds to sweep")->delimiter(',');
    analyze_cmd->add_option("--ms", analyze.exponents, "Interval exponents to sweep")->delimiter(',');
    analyze_cmd->add_option("--layer-set", analyze.layer_set, "Layers to scan")->delimiter(',');
    analyze_cmd->add_option("--compressed-bytes", compressed_bytes, "Compressed size for metrics on raw pairs");
    analyze_cmd->add_option("--autocorr", autocorr_path, "Also write error autocorrelation CSV here");
    analyze_cmd->add_option("--csv", csv_path, "Write CSV here instead of stdout");

    std::string gen_name;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto *generate_cmd = app.add_subcommand("generate", "Write a seeded synthetic field as raw binary");
    generate_cmd->add_option("name", gen_name, "constant | sines | poly | noise | spiky")->required();
    add_grid_flags(generate_cmd, flags);
    generate_cmd->add_option("--seed", gen_seed, "Seed");
    generate_cmd->add_option("--out", gen_out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (compress_cmd->parsed()) {
            JobSpec job;
            job.inputs = to_paths(inputs);
            if (!flags.dims.empty()) job.dims = parse_dims(flags.dims);
            job.width = to_width(flags.width);
            job.config = make_config(flags, true);
            job.workers = workers;
            job.output_dir = out_dir;
            job.auto_m = auto_m;
            auto outcomes = run_compress(job);
            emit(csv_path, [&](std::ostream &o) { write_compress_summary(o, outcomes); });
            report_warnings(outcomes);
            return exit_code_for(outcomes);
        }
        if (decompress_cmd->parsed()) {
            JobSpec job;
            job.inputs = to_paths(inputs);
            job.workers = workers;
            job.output_dir = out_dir;
            auto outcomes = run_decompress(job);
            emit(csv_path, [&](std::ostream &o) { write_decompress_summary(o, outcomes); });
            report_warnings(outcomes);
            return exit_code_for(outcomes);
        }
        if (analyze_cmd->parsed()) {
            analyze.inputs = to_paths(inputs);
            if (!flags.dims.empty()) analyze.dims = parse_dims(flags.dims);
            analyze.width = to_width(flags.width);
            analyze.config = make_config(flags, false);
            if (!generator.empty()) analyze.generator = generator;
            if (analyze_cmd->count("--compressed-bytes")) analyze.compressed_bytes = compressed_bytes;
            if (!autocorr_path.empty()) analyze.autocorr_out = autocorr_path;
            emit(csv_path, [&](std::ostream &o) { run_analyze(analyze, o); });
            return kSuccess;
        }
        if (generate_cmd->parsed()) {
            if (flags.dims.empty()) throw std::invalid_argument("--dims is required");
            write_raw(gen_out, generate(gen_name, parse_dims(flags.dims), gen_seed, to_width(flags.width)));
            return kSuccess;
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "ebzip: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception &e) {
        std::cerr << "ebzip: " << e.what() << '\n';
        return kPartialFailure;
    }
    return kUsageError;
}
