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
#include "alphamine/alphaminer.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "alphamine/error.hpp"

namespace alphamine {

namespace {

using Mask = std::uint64_t;
using storage::StorageEngine;
using storage::TableSchema;

Mask bit(std::size_t i) { return Mask{1} << i; }

/// Calls `emit` for every non-empty subset of `candidates` whose members are
/// pairwise adjacent in `adj`, smallest index first.
void for_each_clique(const std::vector<Mask>& adj, Mask candidates, Mask current,
                     const std::function<void(Mask)>& emit) {
    while (candidates) {
        const auto v = static_cast<std::size_t>(std::countr_zero(candidates));
        candidates &= candidates - 1;
        const Mask next = current | bit(v);
        emit(next);
        for_each_clique(adj, candidates & adj[v], next, emit);
    }
}

ActivitySet to_set(Mask m, const std::vector<std::string>& names) {
    ActivitySet out;
    while (m) {
        out.insert(names[static_cast<std::size_t>(std::countr_zero(m))]);
        m &= m - 1;
    }
    return out;
}

std::vector<storage::Row> scan_all(StorageEngine& engine, std::string_view table,
                                   std::vector<std::string> projection) {
    storage::ScanSpec spec;
    spec.projection = std::move(projection);
    return engine.table(table).scan(spec);
}

const std::string& text(const storage::Value& v) { return std::get<std::string>(v); }

void persist(StorageEngine& engine, const std::string& name, std::vector<std::string> columns,
             const std::set<std::vector<std::string>>& rows) {
    if (engine.has_table(name)) engine.drop_table(name);
    auto& table = engine.create_table(TableSchema::string_set(name, std::move(columns)), engine.config().compression);
    std::vector<storage::Record> records;
    records.reserve(rows.size());
    for (const auto& row : rows) {
        storage::Record r;
        for (const auto& cell : row) r.values.emplace_back(cell);
        records.push_back(std::move(r));
    }
    if (!records.empty()) table.insert_batch(records, records.size());
    table.commit();
}

void persist_activities(StorageEngine& engine, const std::string& name, const std::set<std::string>& activities) {
    std::set<std::vector<std::string>> rows;
    for (const auto& a : activities) rows.insert({a});
    persist(engine, name, {"event"}, rows);
}

void persist_pairs(StorageEngine& engine, const std::string& name, const std::set<ActivitySetPair>& pairs) {
    std::set<std::vector<std::string>> rows;
    for (const auto& p : pairs) rows.insert({join_set(p.set_a), join_set(p.set_b)});
    persist(engine, name, {"setA", "setB"}, rows);
}

std::set<std::string> read_activities(StorageEngine& engine, std::string_view table) {
    std::set<std::string> out;
    for (const auto& row : scan_all(engine, table, {"event"})) out.insert(text(row[0]));
    return out;
}

std::set<ActivitySetPair> read_pairs(StorageEngine& engine, std::string_view table) {
    std::set<ActivitySetPair> out;
    for (const auto& row : scan_all(engine, table, {"setA", "setB"})) {
        out.insert({split_set(text(row[0])), split_set(text(row[1]))});
    }
    return out;
}

TraceMap read_traces(StorageEngine& engine) {
    TraceMap traces;
    // Key order is (CaseID, Timestamp, Status), which is trace order.
    for (const auto& row : scan_all(engine, "eventlog", {"CaseID", "Activity"})) {
        auto& trace = traces[text(row[0])];
        trace.case_id = text(row[0]);
        trace.activities.push_back(text(row[1]));
    }
    return traces;
}

/// First (or last) activity of every case, from a key-ordered scan.
std::set<std::string> trace_ends(StorageEngine& engine, bool first) {
    std::set<std::string> out;
    const auto rows = scan_all(engine, "eventlog", {"CaseID", "Activity"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool boundary = first ? (i == 0 || text(rows[i - 1][0]) != text(rows[i][0]))
                                    : (i + 1 == rows.size() || text(rows[i + 1][0]) != text(rows[i][0]));
        if (boundary) out.insert(text(rows[i][1]));
    }
    return out;
}

const char* kind_name(Place::Kind k) {
    switch (k) {
    case Place::Kind::source: return "source";
    case Place::Kind::sink: return "sink";
    case Place::Kind::internal: return "internal";
    }
    return "internal";
}

std::vector<Place> places_by_name(const PetriNet& net) {
    std::vector<Place> out(net.places.begin(), net.places.end());
    std::stable_sort(out.begin(), out.end(), [](const Place& a, const Place& b) { return a.name() < b.name(); });
    return out;
}

std::vector<FlowArc> arcs_by_name(const PetriNet& net) {
    std::vector<FlowArc> out(net.flow.begin(), net.flow.end());
    std::stable_sort(out.begin(), out.end(), [](const FlowArc& a, const FlowArc& b) {
        return std::tie(a.from.name, a.to.name) < std::tie(b.from.name, b.to.name);
    });
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string dot_id(const Node& n) { return dot_quote((n.kind == Node::Kind::place ? "p:" : "t:") + n.name); }

} // namespace

std::string join_set(const ActivitySet& set) {
    std::string out;
    for (const auto& a : set) {
        if (!out.empty()) out.push_back(',');
        out += a;
    }
    return out;
}

ActivitySet split_set(std::string_view text) {
    ActivitySet out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        if (end > start) out.emplace(text.substr(start, end - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string Place::name() const {
    switch (kind) {
    case Kind::source: return "i";
    case Kind::sink: return "o";
    case Kind::internal: return join_set(pair.set_a) + "&" + join_set(pair.set_b);
    }
    return {};
}

std::set<ActivitySetPair> step4_xl(const FootprintMatrix& fp) {
    const std::size_t n = fp.size();
    if (n > 64) throw Error(Errc::argument, "step 4 supports at most 64 distinct activities");
    std::vector<Mask> choice(n, 0);
    std::vector<Mask> causes(n, 0);
    Mask self_choice = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Relation r = fp.at(i, j);
            if (r == Relation::choice && i != j) choice[i] |= bit(j);
            if (r == Relation::causality_forward) causes[i] |= bit(j);
        }
        if (fp.at(i, i) == Relation::choice) self_choice |= bit(i);
    }

    Mask sources = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if ((self_choice & bit(i)) && (causes[i] & self_choice)) sources |= bit(i);
    }

    std::set<ActivitySetPair> out;
    const auto& names = fp.activities();
    for_each_clique(choice, sources, 0, [&](Mask a) {
        Mask common = self_choice;
        for (Mask m = a; m; m &= m - 1) common &= causes[static_cast<std::size_t>(std::countr_zero(m))];
        if (!common) return;
        const ActivitySet set_a = to_set(a, names);
        for_each_clique(choice, common, 0, [&](Mask b) { out.insert({set_a, to_set(b, names)}); });
    });
    return out;
}

std::set<ActivitySetPair> step5_yl(const std::set<ActivitySetPair>& xl) {
    std::map<std::string, std::size_t> index;
    for (const auto& p : xl) {
        for (const auto& a : p.set_a) index.emplace(a, 0);
        for (const auto& b : p.set_b) index.emplace(b, 0);
    }
    std::size_t next = 0;
    for (auto& [_, i] : index) i = next++;
    const std::size_t words = (index.size() + 63) / 64;

    using Bits = std::vector<Mask>;
    auto encode = [&](const ActivitySet& s) {
        Bits bits(words, 0);
        for (const auto& a : s) {
            const std::size_t i = index.at(a);
            bits[i / 64] |= bit(i % 64);
        }
        return bits;
    };
    auto subset = [](const Bits& x, const Bits& y) {
        for (std::size_t w = 0; w < x.size(); ++w) {
            if (x[w] & ~y[w]) return false;
        }
        return true;
    };

    std::vector<std::pair<Bits, Bits>> encoded;
    encoded.reserve(xl.size());
    for (const auto& p : xl) encoded.emplace_back(encode(p.set_a), encode(p.set_b));

    std::set<ActivitySetPair> out;
    std::size_t i = 0;
    for (const auto& p : xl) {
        bool maximal = true;
        for (std::size_t j = 0; j < encoded.size() && maximal; ++j) {
            if (j == i) continue;
            if (subset(encoded[i].first, encoded[j].first) && subset(encoded[i].second, encoded[j].second)) {
                maximal = false;
            }
        }
        if (maximal) out.insert(p);
        ++i;
    }
    return out;
}

std::set<Place> step6_places(const std::set<ActivitySetPair>& yl) {
    std::set<Place> out{Place::source(), Place::sink()};
    for (const auto& p : yl) out.insert(Place::internal(p));
    return out;
}

std::set<FlowArc> step7_flow(const std::set<ActivitySetPair>& yl, const std::set<std::string>& t_i,
                             const std::set<std::string>& t_o) {
    std::set<FlowArc> out;
    for (const auto& p : yl) {
        const Node place = Node::place(Place::internal(p));
        for (const auto& a : p.set_a) out.insert({Node::transition(a), place});
        for (const auto& b : p.set_b) out.insert({place, Node::transition(b)});
    }
    const Node source = Node::place(Place::source());
    const Node sink = Node::place(Place::sink());
    for (const auto& t : t_i) out.insert({source, Node::transition(t)});
    for (const auto& t : t_o) out.insert({Node::transition(t), sink});
    return out;
}

const std::vector<std::string_view>& step_tables(int step) {
    static const std::array<std::vector<std::string_view>, 7> tables = {{
        {"totalEvent"},
        {"initialEvent"},
        {"finalEvent"},
        {"causality", "notconnected", "XL"},
        {"YL"},
        {"PL"},
        {"FL"},
    }};
    if (step < 1 || step > 7) throw Error(Errc::argument, "step must be in 1..7");
    return tables[static_cast<std::size_t>(step - 1)];
}

std::vector<storage::Record> to_records(const EventLog& log) {
    std::vector<storage::Record> out;
    out.reserve(log.size());
    for (const Event& e : log.events()) {
        out.push_back({{e.case_id, static_cast<std::int64_t>(e.timestamp.time_since_epoch().count()), e.status,
                        e.activity, e.actor}});
    }
    return out;
}

storage::LoadReport load_eventlog(StorageEngine& engine, const EventLog& log) {
    if (log.empty()) throw Error(Errc::empty_input, "event log is empty");
    for (auto name : kMiningTables) {
        if (engine.has_table(name)) engine.drop_table(name);
    }
    auto& table = engine.create_table(TableSchema::eventlog(), engine.config().compression);
    const auto records = to_records(log);
    auto report = table.bulk_load(records);
    table.commit();
    return report;
}

std::set<std::string> step1_total_events(StorageEngine& engine) {
    std::set<std::string> out;
    for (const auto& row : scan_all(engine, "eventlog", {"Activity"})) out.insert(text(row[0]));
    persist_activities(engine, "totalEvent", out);
    return out;
}

std::set<std::string> step2_initial_events(StorageEngine& engine) {
    auto out = trace_ends(engine, true);
    persist_activities(engine, "initialEvent", out);
    return out;
}

std::set<std::string> step3_final_events(StorageEngine& engine) {
    auto out = trace_ends(engine, false);
    persist_activities(engine, "finalEvent", out);
    return out;
}

std::set<ActivitySetPair> step4_xl(StorageEngine& engine) {
    const FootprintMatrix fp = footprint(read_traces(engine));
    std::set<std::vector<std::string>> rows;
    for (const auto& [a, b] : causality_pairs(fp)) rows.insert({a, b});
    persist(engine, "causality", {"eventA", "eventB"}, rows);
    rows.clear();
    for (const auto& [a, b] : not_connected(fp)) rows.insert({a, b});
    persist(engine, "notconnected", {"eventA", "eventB"}, rows);

    auto xl = step4_xl(fp);
    persist_pairs(engine, "XL", xl);
    return xl;
}

std::set<ActivitySetPair> step5_yl(StorageEngine& engine) {
    auto yl = step5_yl(read_pairs(engine, "XL"));
    persist_pairs(engine, "YL", yl);
    return yl;
}

std::set<Place> step6_places(StorageEngine& engine) {
    auto places = step6_places(read_pairs(engine, "YL"));
    std::set<std::vector<std::string>> rows;
    for (const auto& p : places) rows.insert({p.name()});
    persist(engine, "PL", {"place"}, rows);
    return places;
}

std::set<FlowArc> step7_flow(StorageEngine& engine) {
    auto flow = step7_flow(read_pairs(engine, "YL"), read_activities(engine, "initialEvent"),
                           read_activities(engine, "finalEvent"));
    std::set<std::vector<std::string>> rows;
    for (const auto& arc : flow) rows.insert({arc.from.name, arc.to.name});
    persist(engine, "FL", {"firstplace", "secondplace"}, rows);
    return flow;
}

MiningRun mine_instrumented(const EventLog& log, StorageEngine& engine) {
    MiningRun run;
    run.load = load_eventlog(engine, log);

    auto& inst = engine.instrumentation();
    auto timed = [&](int step, auto&& fn) {
        const auto io_before = inst.totals();
        const auto start = inst.now();
        fn();
        const auto end = inst.now();
        const auto io_after = inst.totals();
        run.steps[static_cast<std::size_t>(step - 1)] = {step, std::chrono::nanoseconds{end - start},
                                                         std::chrono::nanoseconds{io_after.read_ns - io_before.read_ns},
                                                         std::chrono::nanoseconds{io_after.write_ns - io_before.write_ns}};
    };

    std::set<ActivitySetPair> yl;
    timed(1, [&] { run.net.transitions = step1_total_events(engine); });
    timed(2, [&] { step2_initial_events(engine); });
    timed(3, [&] { step3_final_events(engine); });
    timed(4, [&] { step4_xl(engine); });
    timed(5, [&] { step5_yl(engine); });
    timed(6, [&] { run.net.places = step6_places(engine); });
    timed(7, [&] { run.net.flow = step7_flow(engine); });
    return run;
}

PetriNet mine(const EventLog& log, StorageEngine& engine) { return mine_instrumented(log, engine).net; }

std::string export_dot(const PetriNet& net) {
    std::ostringstream out;
    out << "digraph petri_net {\n";
    out << "  rankdir=LR;\n";
    for (const Place& p : places_by_name(net)) {
        out << "  " << dot_id(Node::place(p)) << " [shape=circle,label=" << dot_quote(p.name()) << "];\n";
    }
    for (const auto& t : net.transitions) {
        out << "  " << dot_id(Node::transition(t)) << " [shape=box,label=" << dot_quote(t) << "];\n";
    }
    for (const FlowArc& arc : arcs_by_name(net)) {
        out << "  " << dot_id(arc.from) << " -> " << dot_id(arc.to) << ";\n";
    }
    out << "}\n";
    return out.str();
}

namespace pt = boost::property_tree;

std::string export_pnml(const PetriNet& net) {
    pt::ptree root;
    auto& xml_net = root.add("pnml.net", "");
    xml_net.put("<xmlattr>.id", "net1");
    xml_net.put("<xmlattr>.type", "http://www.pnml.org/version-2009/grammar/ptnet");
    auto& page = xml_net.add("page", "");
    page.put("<xmlattr>.id", "page1");

    std::map<Node, std::string> ids;
    std::size_t n = 0;
    for (const Place& p : places_by_name(net)) {
        const std::string id = "p" + std::to_string(++n);
        ids[Node::place(p)] = id;
        auto& el = page.add("place", "");
        el.put("<xmlattr>.id", id);
        el.put("name.text", p.name());
        auto& tool = el.add("toolspecific", "");
        tool.put("<xmlattr>.tool", "alphamine");
        tool.put("<xmlattr>.version", "1");
        tool.put("kind", kind_name(p.kind));
        if (p.kind == Place::Kind::internal) {
            auto& pre = tool.add("preset", "");
            for (const auto& a : p.pair.set_a) pre.add("activity", a);
            auto& post = tool.add("postset", "");
            for (const auto& b : p.pair.set_b) post.add("activity", b);
        }
    }
    n = 0;
    for (const auto& t : net.transitions) {
        const std::string id = "t" + std::to_string(++n);
        ids[Node::transition(t)] = id;
        auto& el = page.add("transition", "");
        el.put("<xmlattr>.id", id);
        el.put("name.text", t);
    }
    n = 0;
    for (const FlowArc& arc : arcs_by_name(net)) {
        auto& el = page.add("arc", "");
        el.put("<xmlattr>.id", "a" + std::to_string(++n));
        el.put("<xmlattr>.source", ids.at(arc.from));
        el.put("<xmlattr>.target", ids.at(arc.to));
    }

    std::ostringstream out;
    pt::write_xml(out, root, pt::xml_writer_make_settings<std::string>(' ', 2));
    return out.str();
}

PetriNet parse_pnml(std::string_view text) {
    pt::ptree root;
    try {
        std::istringstream in{std::string(text)};
        pt::read_xml(in, root, pt::xml_parser::trim_whitespace);
    } catch (const pt::ptree_error& e) {
        throw Error(Errc::schema, std::string("malformed PNML: ") + e.what());
    }

    PetriNet net;
    std::map<std::string, Node> nodes;
    try {
        const auto& page = root.get_child("pnml.net.page");
        for (const auto& [tag, el] : page) {
            if (tag == "place") {
                Place p;
                const std::string kind = el.get<std::string>("toolspecific.kind", "");
                if (kind == "source") {
                    p = Place::source();
                } else if (kind == "sink") {
                    p = Place::sink();
                } else if (kind == "internal") {
                    ActivitySetPair pair;
                    for (const auto& [t, a] : el.get_child("toolspecific.preset")) {
                        if (t == "activity") pair.set_a.insert(a.data());
                    }
                    for (const auto& [t, b] : el.get_child("toolspecific.postset")) {
                        if (t == "activity") pair.set_b.insert(b.data());
                    }
                    p = Place::internal(std::move(pair));
                } else {
                    throw Error(Errc::schema, "place without a recognised kind");
                }
                nodes[el.get<std::string>("<xmlattr>.id")] = Node::place(p);
                net.places.insert(std::move(p));
            } else if (tag == "transition") {
                const std::string name = el.get<std::string>("name.text");
                nodes[el.get<std::string>("<xmlattr>.id")] = Node::transition(name);
                net.transitions.insert(name);
            }
        }
        for (const auto& [tag, el] : page) {
            if (tag != "arc") continue;
            auto from = nodes.find(el.get<std::string>("<xmlattr>.source"));
            auto to = nodes.find(el.get<std::string>("<xmlattr>.target"));
            if (from == nodes.end() || to == nodes.end()) throw Error(Errc::schema, "arc names an unknown node");
            net.flow.insert({from->second, to->second});
        }
    } catch (const pt::ptree_error& e) {
        throw Error(Errc::schema, std::string("malformed PNML: ") + e.what());
    }
    return net;
}

} // namespace alphamine
