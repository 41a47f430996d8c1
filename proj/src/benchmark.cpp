/************************************************************************
Copyright 2026 The alphamine Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
**************************************************************************/
#include "alphamine/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <unistd.h>

#include "alphamine/alphaminer.hpp"
#include "alphamine/csv.hpp"
#include "alphamine/error.hpp"
#include "alphamine/eventlog.hpp"

namespace alphamine::bench {

namespace {

using storage::EngineKind;
using storage::StorageEngine;

constexpr double kNsPerSecond = 1e9;

double seconds(std::int64_t ns) { return static_cast<double>(ns) / kNsPerSecond; }
double seconds(std::chrono::nanoseconds ns) { return seconds(ns.count()); }

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Fresh table directory for one trial, removed afterwards.
class TrialDir {
public:
    explicit TrialDir(const BenchmarkConfig& cfg) {
        static std::atomic<std::uint64_t> counter{0};
        const auto base = cfg.work_dir.empty()
                              ? std::filesystem::temp_directory_path() / ("alphamine-bench-" + std::to_string(::getpid()))
                              : cfg.work_dir;
        path_ = base / ("trial-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    TrialDir(const TrialDir&) = delete;
    TrialDir& operator=(const TrialDir&) = delete;
    ~TrialDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

storage::Codec compressed_codec(EngineKind kind) {
    return kind == EngineKind::row ? storage::Codec::zlib : storage::Codec::gzip;
}

EventLog mining_log(const BenchmarkConfig& cfg) {
    const std::size_t cases = std::max<std::size_t>(2, (cfg.stepwise_size + 3) / 4);
    return generate_synthetic_log(ProcessModel::and_split, cases, cfg.seed);
}

void note(const BenchmarkConfig& cfg, const std::string& text) {
    if (cfg.progress) cfg.progress(text);
}

struct MiningSamples {
    std::array<std::vector<double>, 7> elapsed;
    std::array<std::vector<double>, 7> read;
    std::array<std::vector<double>, 7> write;
};

/// Runs the mining workload `repetitions` times per engine and checks that
/// every engine mines the same net.
std::map<EngineKind, MiningSamples> run_mining(const BenchmarkConfig& cfg, bool compressed) {
    const EventLog log = mining_log(cfg);
    std::map<EngineKind, MiningSamples> out;
    std::optional<PetriNet> reference;
    for (EngineKind kind : cfg.engines) {
        auto& samples = out[kind];
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            TrialDir dir(cfg);
            auto ecfg = cfg.engine_config;
            ecfg.compression = compressed ? compressed_codec(kind) : storage::Codec::none;
            StorageEngine engine(kind, dir.path(), ecfg);
            const MiningRun run = mine_instrumented(log, engine);
            if (!reference) {
                reference = run.net;
            } else if (run.net != *reference) {
                throw Error(Errc::corruption, "engines mined different nets");
            }
            for (std::size_t s = 0; s < 7; ++s) {
                samples.elapsed[s].push_back(seconds(run.steps[s].elapsed));
                samples.read[s].push_back(seconds(run.steps[s].read));
                samples.write[s].push_back(seconds(run.steps[s].write));
            }
        }
        note(cfg, "mining " + std::string(storage::to_string(kind)) + (compressed ? " compressed" : "") + " done");
    }
    return out;
}

std::string step_name(std::size_t index) { return "step" + std::to_string(index + 1); }

/// Per engine and batch size, elapsed seconds of each trial.
std::map<std::pair<EngineKind, std::size_t>, std::vector<double>> run_batches(const BenchmarkConfig& cfg) {
    const auto records = workload_records(cfg.batch_total, cfg.seed);
    std::map<std::pair<EngineKind, std::size_t>, std::vector<double>> out;
    for (EngineKind kind : cfg.engines) {
        for (std::size_t bs : cfg.batch_sizes) {
            auto& samples = out[{kind, bs}];
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
                TrialDir dir(cfg);
                StorageEngine engine(kind, dir.path(), cfg.engine_config);
                auto& table = engine.create_table(storage::TableSchema::eventlog());
                const auto start = engine.instrumentation().now();
                table.insert_batch(records, bs);
                table.commit();
                samples.push_back(seconds(engine.instrumentation().now() - start));
            }
            note(cfg, "batch " + std::string(storage::to_string(kind)) + " " + std::to_string(bs) + " done");
        }
    }
    return out;
}

} // namespace

std::string_view to_string(Suite suite) noexcept {
    switch (suite) {
    case Suite::load: return "load";
    case Suite::stepwise: return "stepwise";
    case Suite::readwrite: return "readwrite";
    case Suite::disk: return "disk";
    case Suite::disk_compressed: return "disk_compressed";
    case Suite::stepwise_compressed: return "stepwise_compressed";
    case Suite::batch: return "batch";
    case Suite::single: return "single";
    case Suite::inserts_per_sec: return "inserts_per_sec";
    }
    return "unknown";
}

const std::vector<Suite>& all_suites() {
    static const std::vector<Suite> suites = {Suite::load,  Suite::stepwise,        Suite::readwrite,
                                              Suite::disk,  Suite::disk_compressed, Suite::stepwise_compressed,
                                              Suite::batch, Suite::single,          Suite::inserts_per_sec};
    return suites;
}

Suite parse_suite(std::string_view name) {
    for (Suite s : all_suites()) {
        if (to_string(s) == name) return s;
    }
    throw Error(Errc::argument, "unknown suite '" + std::string(name) + "'");
}

BenchmarkConfig BenchmarkConfig::scaled(std::size_t scale) {
    if (scale == 0) throw Error(Errc::argument, "scale must be positive");
    auto div = [scale](std::size_t n) { return std::max<std::size_t>(1, n / scale); };
    BenchmarkConfig cfg;
    for (auto n : kLoadSizes) cfg.sizes.push_back(div(n));
    for (auto n : kBatchSizes) cfg.batch_sizes.push_back(div(n));
    for (auto n : kSingleSizes) cfg.single_sizes.push_back(div(n));
    cfg.batch_total = div(kBatchTotal);
    cfg.stepwise_size = div(kStepwiseSize);
    return cfg;
}

void BenchmarkConfig::validate() const {
    if (repetitions == 0) throw Error(Errc::argument, "repetitions must be at least 1");
    if (engines.empty()) throw Error(Errc::argument, "no engines selected");
    if (sizes.empty() || batch_sizes.empty() || single_sizes.empty()) {
        throw Error(Errc::argument, "size lists must be non-empty");
    }
    if (std::find(batch_sizes.begin(), batch_sizes.end(), 0) != batch_sizes.end()) {
        throw Error(Errc::argument, "batch sizes must be positive");
    }
    if (batch_total == 0 || stepwise_size == 0) throw Error(Errc::argument, "workload sizes must be positive");
}

void BenchmarkReport::add(Suite suite, EngineKind engine, std::string parameter, std::string metric,
                          const std::vector<double>& samples, std::string unit) {
    if (samples.empty()) throw Error(Errc::argument, "no samples for " + metric);
    double sum = 0;
    for (double s : samples) sum += s;
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    // Clamp so rounding in the sum never pushes the mean outside [min, max].
    const double mean = std::clamp(sum / static_cast<double>(samples.size()), *lo, *hi);
    rows.push_back({std::string(to_string(suite)), std::string(storage::to_string(engine)), std::move(parameter),
                    std::move(metric), mean, *lo, *hi, std::move(unit)});
}

void BenchmarkReport::append(const BenchmarkReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0;
    std::size_t j = 0;
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < a.size() && j < b.size()) {
        if (digit(a[i]) && digit(b[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && digit(a[ie])) ++ie;
            while (je < b.size() && digit(b[je])) ++je;
            std::string_view na = a.substr(i, ie - i);
            std::string_view nb = b.substr(j, je - j);
            while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
            while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return a.size() - i < b.size() - j;
    return a < b;
}

void BenchmarkReport::sort() {
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& x, const ReportRow& y) {
        if (x.suite != y.suite) return x.suite < y.suite;
        if (x.engine != y.engine) return x.engine < y.engine;
        if (x.parameter != y.parameter) return natural_less(x.parameter, y.parameter);
        return x.metric < y.metric;
    });
}

const ReportRow* BenchmarkReport::find(std::string_view suite, std::string_view engine, std::string_view parameter,
                                       std::string_view metric) const {
    for (const auto& r : rows) {
        if (r.suite == suite && r.engine == engine && r.parameter == parameter && r.metric == metric) return &r;
    }
    return nullptr;
}

std::vector<storage::Record> workload_records(std::size_t n, std::uint64_t seed) {
    if (n == 0) return {};
    const EventLog log = generate_synthetic_log(ProcessModel::and_split, std::max<std::size_t>(2, (n + 3) / 4), seed);
    auto records = to_records(log);
    records.resize(n);
    return records;
}

BenchmarkReport bench_bulk_load(const BenchmarkConfig& cfg) {
    cfg.validate();
    BenchmarkReport report;
    for (std::size_t size : cfg.sizes) {
        const auto records = workload_records(size, cfg.seed);
        for (EngineKind kind : cfg.engines) {
            std::vector<double> samples;
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
                TrialDir dir(cfg);
                StorageEngine engine(kind, dir.path(), cfg.engine_config);
                auto& table = engine.create_table(storage::TableSchema::eventlog());
                const auto start = engine.instrumentation().now();
                table.bulk_load(records);
                table.commit();
                samples.push_back(seconds(engine.instrumentation().now() - start));
            }
            report.add(Suite::load, kind, std::to_string(size), "load_time", samples, "s");
            note(cfg, "load " + std::string(storage::to_string(kind)) + " " + std::to_string(size) + " done");
        }
    }
    return report;
}

BenchmarkReport bench_stepwise(const BenchmarkConfig& cfg, bool compressed) {
    cfg.validate();
    BenchmarkReport report;
    const Suite suite = compressed ? Suite::stepwise_compressed : Suite::stepwise;
    for (const auto& [kind, samples] : run_mining(cfg, compressed)) {
        for (std::size_t s = 0; s < 7; ++s) report.add(suite, kind, step_name(s), "exec_time", samples.elapsed[s], "s");
    }
    return report;
}

BenchmarkReport bench_read_write(const BenchmarkConfig& cfg) {
    cfg.validate();
    BenchmarkReport report;
    for (const auto& [kind, samples] : run_mining(cfg, false)) {
        for (std::size_t s = 0; s < 7; ++s) {
            report.add(Suite::readwrite, kind, step_name(s), "read_time", samples.read[s], "s");
            report.add(Suite::readwrite, kind, step_name(s), "write_time", samples.write[s], "s");
            std::vector<double> share;
            for (std::size_t r = 0; r < samples.elapsed[s].size(); ++r) {
                const double total = samples.elapsed[s][r];
                share.push_back(total > 0 ? samples.write[s][r] / total : 0.0);
            }
            report.add(Suite::readwrite, kind, step_name(s), "write_share", share, "fraction");
        }
    }
    return report;
}

BenchmarkReport bench_disk(const BenchmarkConfig& cfg, bool compressed) {
    cfg.validate();
    BenchmarkReport report;
    const EventLog log = mining_log(cfg);
    const Suite suite = compressed ? Suite::disk_compressed : Suite::disk;
    for (EngineKind kind : cfg.engines) {
        std::map<std::string, std::vector<double>> usage;
        std::map<std::string, std::vector<double>> ratio;
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            auto measure = [&](storage::Codec codec) {
                TrialDir dir(cfg);
                auto ecfg = cfg.engine_config;
                ecfg.compression = codec;
                StorageEngine engine(kind, dir.path(), ecfg);
                mine(log, engine);
                std::map<std::string, double> bytes;
                for (auto name : kMiningTables) {
                    bytes[std::string(name)] = static_cast<double>(engine.table(name).disk_usage());
                }
                return bytes;
            };
            const auto plain = measure(storage::Codec::none);
            if (!compressed) {
                for (const auto& [name, b] : plain) usage[name].push_back(b);
                continue;
            }
            const auto packed = measure(compressed_codec(kind));
            for (const auto& [name, b] : packed) {
                usage[name].push_back(b);
                ratio[name].push_back(b > 0 ? plain.at(name) / b : 1.0);
            }
        }
        for (const auto& [name, samples] : usage) report.add(suite, kind, name, "disk_usage", samples, "bytes");
        for (const auto& [name, samples] : ratio) {
            report.add(suite, kind, name, "compression_ratio", samples, "ratio");
        }
        note(cfg, std::string(to_string(suite)) + " " + std::string(storage::to_string(kind)) + " done");
    }
    return report;
}

BenchmarkReport bench_insert(const BenchmarkConfig& cfg, InsertMode mode) {
    cfg.validate();
    BenchmarkReport report;
    if (mode == InsertMode::batch) {
        for (const auto& [key, samples] : run_batches(cfg)) {
            const auto& [kind, bs] = key;
            std::vector<double> per_record;
            for (double s : samples) per_record.push_back(s / static_cast<double>(cfg.batch_total));
            report.add(Suite::batch, kind, std::to_string(bs), "elapsed", samples, "s");
            report.add(Suite::batch, kind, std::to_string(bs), "per_record", per_record, "s");
        }
        return report;
    }
    for (std::size_t size : cfg.single_sizes) {
        const auto records = workload_records(size, cfg.seed);
        for (EngineKind kind : cfg.engines) {
            std::vector<double> elapsed;
            std::vector<double> per_record;
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
                TrialDir dir(cfg);
                StorageEngine engine(kind, dir.path(), cfg.engine_config);
                auto& table = engine.create_table(storage::TableSchema::eventlog());
                const auto start = engine.instrumentation().now();
                for (const auto& r : records) table.insert(r);
                table.commit();
                const double s = seconds(engine.instrumentation().now() - start);
                elapsed.push_back(s);
                per_record.push_back(s / static_cast<double>(size));
            }
            report.add(Suite::single, kind, std::to_string(size), "elapsed", elapsed, "s");
            report.add(Suite::single, kind, std::to_string(size), "per_record", per_record, "s");
            note(cfg, "single " + std::string(storage::to_string(kind)) + " " + std::to_string(size) + " done");
        }
    }
    return report;
}

BenchmarkReport bench_inserts_per_sec(const BenchmarkConfig& cfg) {
    cfg.validate();
    BenchmarkReport report;
    const double total = static_cast<double>(cfg.batch_total);
    for (const auto& [key, samples] : run_batches(cfg)) {
        const auto& [kind, bs] = key;
        double sum = 0;
        for (double s : samples) sum += s;
        const double mean_elapsed = sum / static_cast<double>(samples.size());
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        // Rate of the mean trial, so that mean = total / mean elapsed holds
        // for the batch suite's elapsed row.
        report.rows.push_back({std::string(to_string(Suite::inserts_per_sec)), std::string(storage::to_string(kind)),
                               std::to_string(bs), "inserts_per_sec", std::clamp(total / mean_elapsed, total / *hi, total / *lo), total / *hi, total / *lo,
                               "records/s"});
    }
    return report;
}

BenchmarkReport run(const BenchmarkConfig& cfg) {
    switch (cfg.suite) {
    case Suite::load: return bench_bulk_load(cfg);
    case Suite::stepwise: return bench_stepwise(cfg, false);
    case Suite::readwrite: return bench_read_write(cfg);
    case Suite::disk: return bench_disk(cfg, false);
    case Suite::disk_compressed: return bench_disk(cfg, true);
    case Suite::stepwise_compressed: return bench_stepwise(cfg, true);
    case Suite::batch: return bench_insert(cfg, InsertMode::batch);
    case Suite::single: return bench_insert(cfg, InsertMode::single);
    case Suite::inserts_per_sec: return bench_inserts_per_sec(cfg);
    }
    throw Error(Errc::argument, "unknown suite");
}

void write_report_csv(const BenchmarkReport& report, std::ostream& out) {
    BenchmarkReport sorted = report;
    sorted.sort();
    out << "suite,engine,parameter,metric,mean,min,max,unit\n";
    for (const auto& r : sorted.rows) {
        out << csv::join_row({r.suite, r.engine, r.parameter, r.metric, format_number(r.mean), format_number(r.min),
                              format_number(r.max), r.unit})
            << '\n';
    }
}

void write_report_csv(const BenchmarkReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
    write_report_csv(report, out);
    if (!out.flush()) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

} // namespace alphamine::bench
