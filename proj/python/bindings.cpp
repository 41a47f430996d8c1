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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <atomic>
#include <optional>
#include <sstream>
#include <unistd.h>

#include "alphamine/alphaminer.hpp"
#include "alphamine/benchmark.hpp"
#include "alphamine/error.hpp"
#include "alphamine/eventlog.hpp"
#include "alphamine/relations.hpp"

namespace py = pybind11;
using namespace alphamine;

namespace {

std::filesystem::path scratch_dir() {
    static std::atomic<int> counter{0};
    return std::filesystem::temp_directory_path() /
           ("alphamine-py-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
}

storage::Codec codec_for(storage::EngineKind kind, bool compress) {
    if (!compress) return storage::Codec::none;
    return kind == storage::EngineKind::row ? storage::Codec::zlib : storage::Codec::gzip;
}

PetriNet mine_log(const EventLog& log, const std::string& backend, bool compress,
                  const std::optional<std::filesystem::path>& work_dir) {
    const auto kind = storage::parse_engine_kind(backend);
    storage::EngineConfig cfg;
    cfg.compression = codec_for(kind, compress);
    const auto dir = work_dir ? *work_dir : scratch_dir();
    PetriNet net;
    {
        py::gil_scoped_release release;
        storage::StorageEngine engine(kind, dir, cfg);
        net = mine(log, engine);
    }
    if (!work_dir) std::filesystem::remove_all(dir);
    return net;
}

py::list report_rows(const bench::BenchmarkReport& report) {
    py::list out;
    for (const auto& r : report.rows) {
        py::dict d;
        d["suite"] = r.suite;
        d["engine"] = r.engine;
        d["parameter"] = r.parameter;
        d["metric"] = r.metric;
        d["mean"] = r.mean;
        d["min"] = r.min;
        d["max"] = r.max;
        d["unit"] = r.unit;
        out.append(d);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(alphamine, m) {
    m.doc() = "Alpha-miner process discovery over row and column storage engines";

    static py::exception<Error> base(m, "AlphamineError", PyExc_RuntimeError);
    static py::exception<Error> input(m, "InputError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(e.is_input_error() ? input : base, e.what());
        }
    });

    py::class_<Event>(m, "Event")
        .def(py::init<>())
        .def_readwrite("case_id", &Event::case_id)
        .def_property(
            "timestamp", [](const Event& e) { return e.timestamp.time_since_epoch().count(); },
            [](Event& e, std::int64_t s) { e.timestamp = Timestamp{std::chrono::seconds{s}}; },
            "Seconds since the Unix epoch")
        .def_readwrite("status", &Event::status)
        .def_readwrite("activity", &Event::activity)
        .def_readwrite("actor", &Event::actor)
        .def("__eq__", [](const Event& a, const Event& b) { return a == b; })
        .def("__repr__", [](const Event& e) {
            return "Event(" + e.case_id + ", " + format_timestamp(e.timestamp) + ", " + e.status + ", " +
                   e.activity + ")";
        });

    py::class_<EventLog>(m, "EventLog")
        .def(py::init<std::vector<Event>>(), py::arg("events"))
        .def_property_readonly("events", &EventLog::events)
        .def("traces",
             [](const EventLog& log) {
                 std::map<std::string, std::vector<std::string>> out;
                 for (const auto& [case_id, trace] : build_traces(log)) out[case_id] = trace.activities;
                 return out;
             })
        .def("__len__", &EventLog::size)
        .def("__eq__", [](const EventLog& a, const EventLog& b) { return a == b; });

    m.def("generate_log", [](const std::string& model, std::size_t cases, std::uint64_t seed) {
        return generate_synthetic_log(parse_process_model(model), cases, seed);
    }, py::arg("model"), py::arg("cases"), py::arg("seed") = 1,
       "Synthetic log for 'sequence', 'xor-split' or 'and-split'.");

    m.def("read_csv", [](const std::filesystem::path& path, bool bpi) {
        return parse_csv(path, bpi ? SchemaMapping::bpi() : SchemaMapping::native());
    }, py::arg("path"), py::arg("bpi") = false);

    m.def("write_csv", [](const EventLog& log, const std::filesystem::path& path) { write_csv(log, path); },
          py::arg("log"), py::arg("path"));

    m.def("directly_follows", [](const EventLog& log) { return directly_follows(log); }, py::arg("log"));

    m.def("footprint_csv", [](const EventLog& log) { return footprint_csv(footprint(log)); }, py::arg("log"));

    py::class_<PetriNet>(m, "PetriNet")
        .def_property_readonly("transitions", [](const PetriNet& n) { return n.transitions; })
        .def_property_readonly("places",
                               [](const PetriNet& n) {
                                   std::vector<std::string> out;
                                   for (const auto& p : n.places) out.push_back(p.name());
                                   return out;
                               })
        .def_property_readonly("arcs",
                               [](const PetriNet& n) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& a : n.flow) out.emplace_back(a.from.name, a.to.name);
                                   return out;
                               })
        .def("to_dot", &export_dot)
        .def("to_pnml", &export_pnml)
        .def("__eq__", [](const PetriNet& a, const PetriNet& b) { return a == b; });

    m.def("parse_pnml", [](const std::string& text) { return parse_pnml(text); }, py::arg("text"));

    m.def("mine", &mine_log, py::arg("log"), py::arg("backend") = "column", py::arg("compress") = false,
          py::arg("work_dir") = std::nullopt,
          "Runs steps 1-7 on the chosen engine. Tables go to a scratch directory unless work_dir is set.");

    m.def("run_benchmark",
          [](const std::string& suite, std::size_t scale, std::size_t repetitions,
             const std::vector<std::string>& engines, std::uint64_t seed,
             const std::optional<std::filesystem::path>& csv_path) {
              auto cfg = bench::BenchmarkConfig::scaled(scale);
              cfg.repetitions = repetitions;
              cfg.seed = seed;
              cfg.engines.clear();
              for (const auto& e : engines) cfg.engines.push_back(storage::parse_engine_kind(e));
              cfg.work_dir = scratch_dir();
              std::vector<bench::Suite> suites;
              if (suite == "all") {
                  suites = bench::all_suites();
              } else {
                  suites.push_back(bench::parse_suite(suite));
              }
              bench::BenchmarkReport report;
              {
                  py::gil_scoped_release release;
                  for (auto s : suites) {
                      cfg.suite = s;
                      report.append(bench::run(cfg));
                  }
                  report.sort();
                  std::filesystem::remove_all(cfg.work_dir);
                  if (csv_path) bench::write_report_csv(report, *csv_path);
              }
              return report_rows(report);
          },
          py::arg("suite") = "all", py::arg("scale") = 100, py::arg("repetitions") = 5,
          py::arg("engines") = std::vector<std::string>{"row", "column"}, py::arg("seed") = 42,
          py::arg("csv_path") = std::nullopt, "Runs benchmark suites; returns one dict per report row.");
}
