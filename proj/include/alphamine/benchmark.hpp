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
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alphamine/storage/engine.hpp"

namespace alphamine::bench {

enum class Suite {
    load,
    stepwise,
    readwrite,
    disk,
    disk_compressed,
    stepwise_compressed,
    batch,
    single,
    inserts_per_sec,
};

std::string_view to_string(Suite suite) noexcept;
Suite parse_suite(std::string_view name);
const std::vector<Suite>& all_suites();

// Full-size workloads; every size is divided by the scale factor.
inline const std::vector<std::size_t> kLoadSizes = {100000, 400000, 800000, 1200000, 1600000, 2000000};
inline const std::vector<std::size_t> kBatchSizes = {30000, 60000, 90000, 130000, 200000, 250000, 500000};
inline const std::vector<std::size_t> kSingleSizes = {30000, 60000, 90000, 130000, 200000, 250000, 500000};
inline constexpr std::size_t kBatchTotal = 500000;
inline constexpr std::size_t kStepwiseSize = 466738;

struct BenchmarkConfig {
    Suite suite = Suite::load;
    std::vector<std::size_t> sizes;        // load sizes
    std::vector<std::size_t> batch_sizes;
    std::vector<std::size_t> single_sizes;
    std::size_t batch_total = 0;
    std::size_t stepwise_size = 0;         // events in the mining workload
    std::size_t repetitions = 5;
    std::vector<storage::EngineKind> engines{storage::EngineKind::row, storage::EngineKind::column};
    std::uint64_t seed = 42;
    storage::EngineConfig engine_config;
    /// Parent of the per-trial table directories.
    std::filesystem::path work_dir;
    /// Receives one line per finished trial group; may be empty.
    std::function<void(std::string_view)> progress;

    /// Paper-sized workloads divided by `scale`. Throws Errc::argument for 0.
    static BenchmarkConfig scaled(std::size_t scale = 100);

    /// Throws Errc::argument on empty sizes, zero repetitions or no engines.
    void validate() const;
};

struct ReportRow {
    std::string suite;
    std::string engine;
    std::string parameter;
    std::string metric;
    double mean = 0;
    double min = 0;
    double max = 0;
    std::string unit;
};

struct BenchmarkReport {
    std::vector<ReportRow> rows;

    /// Summarizes `samples` into one row.
    void add(Suite suite, storage::EngineKind engine, std::string parameter, std::string metric,
             const std::vector<double>& samples, std::string unit);
    void append(const BenchmarkReport& other);
    /// Rows ordered by suite, engine, parameter (digit runs compared
    /// numerically) and metric.
    void sort();
    const ReportRow* find(std::string_view suite, std::string_view engine, std::string_view parameter,
                          std::string_view metric) const;
};

/// Deterministic and-split workload of exactly `n` records.
std::vector<storage::Record> workload_records(std::size_t n, std::uint64_t seed);

BenchmarkReport bench_bulk_load(const BenchmarkConfig& cfg);
/// Emits exec_time for steps 1..7.
BenchmarkReport bench_stepwise(const BenchmarkConfig& cfg, bool compressed = false);
BenchmarkReport bench_read_write(const BenchmarkConfig& cfg);
BenchmarkReport bench_disk(const BenchmarkConfig& cfg, bool compressed);

enum class InsertMode { batch, single };
BenchmarkReport bench_insert(const BenchmarkConfig& cfg, InsertMode mode);
BenchmarkReport bench_inserts_per_sec(const BenchmarkConfig& cfg);

/// Runs `cfg.suite`.
BenchmarkReport run(const BenchmarkConfig& cfg);

/// Header `suite,engine,parameter,metric,mean,min,max,unit`, rows in sorted
/// order.
void write_report_csv(const BenchmarkReport& report, std::ostream& out);
void write_report_csv(const BenchmarkReport& report, const std::filesystem::path& path);

/// Orders strings with embedded numbers naturally: "step2" < "step10".
bool natural_less(std::string_view a, std::string_view b);

} // namespace alphamine::bench
