#include "jobs.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ebz/metrics.hpp"

namespace ebz::cli {

std::vector<std::size_t> parse_dims(const std::string &text) {
    std::vector<std::size_t> dims;
    std::string token;
    auto flush = [&] {
        if (token.empty()) throw std::invalid_argument("malformed dimensions '" + text + "'");
        std::size_t used = 0;
        unsigned long long v = std::stoull(token, &used);
        if (used != token.size() || v == 0) throw std::invalid_argument("malformed dimensions '" + text + "'");
        dims.push_back(static_cast<std::size_t>(v));
        token.clear();
    };
    for (char c : text) {
        if (c == 'x' || c == 'X' || c == ',')
            flush();
        else
            token.push_back(c);
    }
    flush();
    if (dims.size() > kMaxDims) throw std::invalid_argument("at most 4 dimensions are supported");
    return dims;
}

unsigned default_workers() {
    if (const char *env = std::getenv("EBZIP_WORKERS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

std::vector<std::uint8_t> read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read error on " + path.string());
    return bytes;
}

void write_file(const fs::path &path, const std::vector<std::uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + path.string());
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write error on " + path.string());
}

DataGrid read_raw(const fs::path &path, const std::vector<std::size_t> &dims, ElementWidth width) {
    auto bytes = read_file(path);
    const std::size_t n = element_count(dims);
    const std::size_t eb = element_bytes(width);
    if (bytes.size() != n * eb) {
        throw std::runtime_error(path.string() + ": size " + std::to_string(bytes.size()) + " bytes, expected " +
                                 std::to_string(n * eb) + " for the given dims and width");
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits = 0;
        for (std::size_t b = 0; b < eb; ++b) bits |= std::uint64_t(bytes[i * eb + b]) << (8 * b);
        values[i] = width == ElementWidth::f32 ? double(std::bit_cast<float>(static_cast<std::uint32_t>(bits)))
                                               : std::bit_cast<double>(bits);
    }
    return DataGrid(dims, std::move(values), width);
}

void write_raw(const fs::path &path, const DataGrid &grid) {
    const std::size_t eb = element_bytes(grid.width());
    std::vector<std::uint8_t> bytes(grid.size() * eb);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::uint64_t bits = grid.width() == ElementWidth::f32
                                 ? std::bit_cast<std::uint32_t>(static_cast<float>(grid[i]))
                                 : std::bit_cast<std::uint64_t>(grid[i]);
        for (std::size_t b = 0; b < eb; ++b) bytes[i * eb + b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    write_file(path, bytes);
}

std::pair<std::vector<std::size_t>, ElementWidth> read_sidecar(const fs::path &input) {
    fs::path sidecar = input;
    sidecar += ".json";
    std::ifstream in(sidecar);
    if (!in) throw std::runtime_error("no --dims given and no sidecar " + sidecar.string());
    auto doc = nlohmann::json::parse(in);
    std::vector<std::size_t> dims = doc.at("dims").get<std::vector<std::size_t>>();
    int width = doc.value("width", 32);
    if (width != 32 && width != 64) throw std::runtime_error(sidecar.string() + ": width must be 32 or 64");
    return {dims, width == 32 ? ElementWidth::f32 : ElementWidth::f64};
}

void validate_job(const JobSpec &job) {
    if (job.inputs.empty()) throw std::invalid_argument("no input files");
    if (job.workers == 0) throw std::invalid_argument("worker count must be at least 1");
    for (const auto &p : job.inputs)
        if (!fs::is_regular_file(p)) throw std::invalid_argument("input not found: " + p.string());
}

CompressionOutcome compress_with_policy(const DataGrid &grid, CompressorConfig config, bool auto_m) {
    auto outcome = compress(grid, config);
    while (auto_m && outcome.warning && config.interval_exponent < kMaxIntervalExponent) {
        config.interval_exponent = std::min(config.interval_exponent + 2, kMaxIntervalExponent);
        outcome = compress(grid, config);
    }
    return outcome;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs task(i) for i in [0, count) on `workers` threads pulling from a shared counter.
template <class Task>
void run_pool(std::size_t count, unsigned workers, Task &&task) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) task(i);
    };
    std::vector<std::thread> threads;
    const unsigned extra = static_cast<unsigned>(std::min<std::size_t>(workers, count)) - 1;
    for (unsigned t = 0; t < extra; ++t) threads.emplace_back(worker);
    worker();
    for (auto &t : threads) t.join();
}

FileOutcome compress_one(const JobSpec &job, const fs::path &input) {
    FileOutcome r;
    r.input = input;
    auto start = Clock::now();
    try {
        auto [dims, width] = job.dims.empty() ? read_sidecar(input) : std::pair{job.dims, job.width};
        DataGrid grid = read_raw(input, dims, width);
        auto outcome = compress_with_policy(grid, job.config, job.auto_m);
        auto bytes = serialize(outcome.stream);
        r.output = job.output_dir / (input.filename().string() + ".ebz");
        write_file(r.output, bytes);
        r.value_count = grid.size();
        r.input_bytes = grid.byte_size();
        r.output_bytes = bytes.size();
        r.compression_factor = compression_factor(r.input_bytes, r.output_bytes);
        r.bit_rate = bit_rate(r.output_bytes, r.value_count);
        r.hitting_rate = outcome.hitting_rate;
        r.interval_exponent = outcome.stream.interval_exponent;
        r.warning = outcome.warning;
        r.ok = true;
    } catch (const std::exception &e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

FileOutcome decompress_one(const JobSpec &job, const fs::path &input) {
    FileOutcome r;
    r.input = input;
    auto start = Clock::now();
    try {
        auto bytes = read_file(input);
        auto stream = deserialize(bytes);
        DataGrid grid = decompress(stream);
        std::string name = input.extension() == ".ebz" ? input.stem().string() : input.filename().string();
        r.output = job.output_dir / (name + ".dec");
        write_raw(r.output, grid);
        r.value_count = grid.size();
        r.input_bytes = bytes.size();
        r.output_bytes = grid.byte_size();
        r.interval_exponent = stream.interval_exponent;
        r.ok = true;
    } catch (const std::exception &e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

template <class One>
std::vector<FileOutcome> run_batch(const JobSpec &job, One &&one) {
    validate_job(job);
    fs::create_directories(job.output_dir);
    std::vector<FileOutcome> outcomes(job.inputs.size());
    run_pool(job.inputs.size(), job.workers, [&](std::size_t i) { outcomes[i] = one(job, job.inputs[i]); });
    return outcomes;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<FileOutcome> run_compress(const JobSpec &job) { return run_batch(job, compress_one); }
std::vector<FileOutcome> run_decompress(const JobSpec &job) { return run_batch(job, decompress_one); }

void write_compress_summary(std::ostream &out, const std::vector<FileOutcome> &outcomes) {
    out << "file,status,value_count,original_bytes,compressed_bytes,compression_factor,bit_rate,hitting_rate,"
           "interval_exponent,suggested_exponent,seconds,throughput_mb_s,message\n";
    for (const auto &r : outcomes) {
        out << csv_field(r.input.string()) << ',' << (r.ok ? "ok" : "error") << ',' << r.value_count << ','
            << r.input_bytes << ',' << r.output_bytes << ',' << csv_number(r.compression_factor) << ','
            << csv_number(r.bit_rate) << ',' << csv_number(r.hitting_rate) << ',' << r.interval_exponent << ','
            << (r.warning ? std::to_string(r.warning->suggested_exponent) : "") << ',' << csv_number(r.seconds) << ','
            << csv_number(r.throughput_mb_s()) << ','
            << csv_field(r.ok ? (r.warning ? r.warning->message() : "") : r.error) << '\n';
    }
}

void write_decompress_summary(std::ostream &out, const std::vector<FileOutcome> &outcomes) {
    out << "file,status,value_count,compressed_bytes,output_bytes,seconds,throughput_mb_s,message\n";
    for (const auto &r : outcomes) {
        out << csv_field(r.input.string()) << ',' << (r.ok ? "ok" : "error") << ',' << r.value_count << ','
            << r.input_bytes << ',' << r.output_bytes << ',' << csv_number(r.seconds) << ','
            << csv_number(r.seconds > 0 ? static_cast<double>(r.output_bytes) / r.seconds / 1e6 : 0) << ','
            << csv_field(r.error) << '\n';
    }
}

int exit_code_for(const std::vector<FileOutcome> &outcomes) {
    for (const auto &r : outcomes)
        if (!r.ok) return kPartialFailure;
    return kSuccess;
}

}  // namespace ebz::cli
