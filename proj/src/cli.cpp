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
#include "alphamine/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

#include "alphamine/alphaminer.hpp"
#include "alphamine/benchmark.hpp"
#include "alphamine/error.hpp"
#include "alphamine/eventlog.hpp"
#include "alphamine/relations.hpp"

namespace alphamine::cli {

namespace {

struct MappingFlags {
    bool bpi = false;
    std::optional<std::string> case_id;
    std::optional<std::string> timestamp;
    std::optional<std::string> status;
    std::optional<std::string> activity;
    std::optional<std::string> actor;
    std::optional<std::string> timestamp_format;

    void attach(CLI::App& cmd) {
        cmd.add_flag("--bpi", bpi, "Use the incident-activity column names");
        cmd.add_option("--case-column", case_id, "Column holding the case id");
        cmd.add_option("--timestamp-column", timestamp, "Column holding the timestamp");
        cmd.add_option("--status-column", status, "Column holding the status; empty synthesizes it");
        cmd.add_option("--activity-column", activity, "Column holding the activity");
        cmd.add_option("--actor-column", actor, "Column holding the actor; empty leaves it blank");
        cmd.add_option("--timestamp-format", timestamp_format, "strftime-style timestamp format");
    }

    SchemaMapping mapping() const {
        SchemaMapping m = bpi ? SchemaMapping::bpi() : SchemaMapping::native();
        if (case_id) m.case_id = *case_id;
        if (timestamp) m.timestamp = *timestamp;
        if (status) m.status = *status;
        if (activity) m.activity = *activity;
        if (actor) m.actor = *actor;
        if (timestamp_format) m.timestamp_format = *timestamp_format;
        return m;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::argument, "cannot write '" + path + "'");
    f << text;
    if (!f.flush()) throw Error(Errc::io, "write failed for '" + path + "'");
}

std::filesystem::path scratch_dir(std::string_view what) {
    return std::filesystem::temp_directory_path() /
           ("alphamine-" + std::string(what) + "-" + std::to_string(::getpid()));
}

std::vector<storage::EngineKind> parse_engines(const std::string& list) {
    std::vector<storage::EngineKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto kind = storage::parse_engine_kind(item);
        if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
    }
    if (out.empty()) throw Error(Errc::argument, "--engines selects no engine");
    return out;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Alpha-miner process discovery over row and column storage engines", "alphamine"};
    app.require_subcommand(1, 1);

    // gen
    auto* gen = app.add_subcommand("gen", "Write a synthetic event log");
    std::string gen_model;
    std::size_t gen_cases = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--model", gen_model, "sequence, xor-split or and-split")->required();
    gen->add_option("--cases", gen_cases, "Number of cases")->required();
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out", gen_out, "Output CSV (standard output if omitted)");

    // mine
    auto* mine_cmd = app.add_subcommand("mine", "Discover a Petri net from an event log");
    std::string mine_input;
    std::string mine_backend = "column";
    std::string mine_out;
    std::string mine_pnml;
    bool mine_compress = false;
    std::string mine_work_dir;
    std::string mine_config;
    std::optional<std::string> mine_durability;
    MappingFlags mine_mapping;
    mine_cmd->add_option("--input", mine_input, "Event log CSV")->required();
    mine_cmd->add_option("--backend", mine_backend, "row or column")->check(CLI::IsMember({"row", "column"}));
    mine_cmd->add_option("--out", mine_out, "DOT output path")->required();
    mine_cmd->add_option("--pnml", mine_pnml, "Also write PNML to this path");
    mine_cmd->add_flag("--compress", mine_compress, "Compress tables (zlib on row, gzip on column)");
    mine_cmd->add_option("--work-dir", mine_work_dir, "Keep engine tables in this directory");
    mine_cmd->add_option("--config", mine_config, "Engine config file (key=value)");
    mine_cmd->add_option("--durability", mine_durability, "fsync or async")->check(CLI::IsMember({"fsync", "async"}));
    mine_mapping.attach(*mine_cmd);

    // footprint
    auto* fp_cmd = app.add_subcommand("footprint", "Print the footprint matrix as CSV");
    std::string fp_input;
    MappingFlags fp_mapping;
    fp_cmd->add_option("--input", fp_input, "Event log CSV")->required();
    fp_mapping.attach(*fp_cmd);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run benchmark suites and write a CSV report");
    std::string bench_suite = "all";
    std::size_t bench_scale = 100;
    std::size_t bench_reps = 5;
    std::string bench_engines = "row,column";
    std::uint64_t bench_seed = 42;
    std::string bench_out;
    std::string bench_work_dir;
    std::string bench_config;
    bench_cmd->add_option("--suite", bench_suite, "Suite name or 'all'");
    bench_cmd->add_option("--scale", bench_scale, "Divisor applied to the full-size workloads");
    bench_cmd->add_option("--reps", bench_reps, "Repetitions per measurement");
    bench_cmd->add_option("--engines", bench_engines, "Comma-separated subset of row,column");
    bench_cmd->add_option("--seed", bench_seed, "Workload seed");
    bench_cmd->add_option("--out", bench_out, "Report CSV path")->required();
    bench_cmd->add_option("--work-dir", bench_work_dir, "Directory for trial tables");
    bench_cmd->add_option("--config", bench_config, "Engine config file (key=value)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    try {
        if (*gen) {
            const EventLog log = generate_synthetic_log(parse_process_model(gen_model), gen_cases, gen_seed);
            if (gen_out.empty()) {
                write_csv(log, out);
            } else {
                write_csv(log, std::filesystem::path(gen_out));
            }
        } else if (*fp_cmd) {
            const EventLog log = parse_csv(std::filesystem::path(fp_input), fp_mapping.mapping());
            out << footprint_csv(footprint(log));
        } else if (*mine_cmd) {
            const EventLog log = parse_csv(std::filesystem::path(mine_input), mine_mapping.mapping());
            const auto kind = storage::parse_engine_kind(mine_backend);
            storage::EngineConfig cfg = mine_config.empty() ? storage::EngineConfig{}
                                                            : storage::EngineConfig::load(mine_config);
            if (mine_compress) {
                cfg.compression = kind == storage::EngineKind::row ? storage::Codec::zlib : storage::Codec::gzip;
            }
            if (mine_durability) cfg.set("durability", *mine_durability);
            const bool scratch = mine_work_dir.empty();
            const auto dir = scratch ? scratch_dir("mine") : std::filesystem::path(mine_work_dir);
            if (scratch) std::filesystem::remove_all(dir);
            PetriNet net;
            {
                storage::StorageEngine engine(kind, dir, cfg);
                net = mine(log, engine);
            }
            if (scratch) std::filesystem::remove_all(dir);
            write_text(mine_out, export_dot(net));
            if (!mine_pnml.empty()) write_text(mine_pnml, export_pnml(net));
        } else if (*bench_cmd) {
            bench::BenchmarkConfig cfg = bench::BenchmarkConfig::scaled(bench_scale);
            cfg.repetitions = bench_reps;
            cfg.engines = parse_engines(bench_engines);
            cfg.seed = bench_seed;
            if (!bench_config.empty()) cfg.engine_config = storage::EngineConfig::load(bench_config);
            cfg.work_dir = bench_work_dir.empty() ? scratch_dir("bench") : std::filesystem::path(bench_work_dir);
            cfg.progress = [&err](std::string_view line) { err << line << '\n'; };
            std::vector<bench::Suite> suites;
            if (bench_suite == "all") {
                suites = bench::all_suites();
            } else {
                suites.push_back(bench::parse_suite(bench_suite));
            }
            cfg.validate();
            bench::BenchmarkReport report;
            for (auto s : suites) {
                cfg.suite = s;
                report.append(bench::run(cfg));
            }
            if (bench_work_dir.empty()) std::filesystem::remove_all(cfg.work_dir);
            bench::write_report_csv(report, std::filesystem::path(bench_out));
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_input_error() ? kExitInput : kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

} // namespace alphamine::cli
