#include "bftcup/scenario.hpp"

#include "bftcup/graph_io.hpp"

#include <filesystem>
#include <fstream>

namespace bftcup {

using nlohmann::json;

namespace {

ProcessId
parse_id(std::string const& s)
{
    try
    {
        std::size_t used = 0;
        auto v = std::stoul(s, &used);
        if (used == s.size())
        {
            return static_cast<ProcessId>(v);
        }
    }
    catch (std::exception const&)
    {
    }
    throw ScenarioError("bad process id '" + s + "'");
}

ProcessSet
id_set(json const& j)
{
    ProcessSet out;
    for (auto const& v : j)
    {
        out.insert(v.get<ProcessId>());
    }
    return out;
}

json
id_array(ProcessSet const& s)
{
    return json(std::vector<ProcessId>(s.begin(), s.end()));
}

Strategy
strategy_from_json(json const& j)
{
    Strategy s;
    s.kind = parse_strategy_kind(j.at("type").get<std::string>());
    if (j.contains("at"))
    {
        s.at = j["at"].get<Tick>();
    }
    if (j.contains("claimedPd"))
    {
        s.claimedPd = id_set(j["claimedPd"]);
    }
    if (j.contains("perReceiver"))
    {
        for (auto const& [k, v] : j["perReceiver"].items())
        {
            s.perReceiver[parse_id(k)] = id_set(v);
        }
    }
    return s;
}

json
strategy_to_json(Strategy const& s)
{
    json j{{"type", to_string(s.kind)}};
    if (s.kind == Strategy::Kind::Crash)
    {
        j["at"] = s.at;
    }
    if (s.claimedPd)
    {
        j["claimedPd"] = id_array(*s.claimedPd);
    }
    if (!s.perReceiver.empty())
    {
        json per = json::object();
        for (auto const& [r, claim] : s.perReceiver)
        {
            per[std::to_string(r)] = id_array(claim);
        }
        j["perReceiver"] = per;
    }
    return j;
}

KnowledgeGraph
graph_from_json(json const& j, std::string const& baseDir)
{
    if (j.contains("graph"))
    {
        auto const& g = j["graph"];
        if (g.is_string())
        {
            return parse_graph(g.get<std::string>());
        }
        std::map<ProcessId, ProcessSet> adj;
        for (auto const& [k, v] : g.items())
        {
            adj[parse_id(k)] = id_set(v);
        }
        return KnowledgeGraph::from_adjacency(adj);
    }
    if (j.contains("graphFile"))
    {
        std::filesystem::path p = j["graphFile"].get<std::string>();
        if (p.is_relative())
        {
            p = std::filesystem::path(baseDir) / p;
        }
        return read_graph_file(p.string());
    }
    throw ScenarioError("scenario needs 'graph' or 'graphFile'");
}

} // namespace

PreGstRule
DelayRuleSpec::build() const
{
    return kind == Kind::Uniform ? uniform_delay(min, max)
                                 : cluster_partition(groups, slowDelay, fastDelay);
}

ValidPredicate
ValidSpec::build() const
{
    switch (kind)
    {
    case Kind::Any:
        return [](Value const&) { return true; };
    case Kind::OneOf:
        return [values = values](Value const& v) {
            return std::find(values.begin(), values.end(), v) != values.end();
        };
    case Kind::Prefix:
        return [prefix = prefix](Value const& v) { return v.starts_with(prefix); };
    }
    return nullptr;
}

ProcessSet
Scenario::faulty_set() const
{
    ProcessSet out;
    for (auto const& [p, s] : faulty)
    {
        out.insert(p);
    }
    return out;
}

ProcessSet
Scenario::correct_set() const
{
    return set_difference(graph.vertices(), faulty_set());
}

Tick
Scenario::resolved_gst() const
{
    if (gst)
    {
        return *gst;
    }
    Rng rng(seed ^ 0x5deece66dull);
    return rng.between(0, 500);
}

Tick
Scenario::resolved_horizon() const
{
    return horizon ? *horizon : resolved_gst() + 50 * delta * graph.size();
}

Tick
Scenario::resolved_inner_timeout() const
{
    return innerTimeout ? *innerTimeout : 6 * delta;
}

Value
Scenario::proposal_of(ProcessId p) const
{
    auto it = proposals.find(p);
    return it != proposals.end() ? it->second : "v" + std::to_string(p);
}

void
Scenario::check() const
{
    if (graph.empty())
    {
        throw InvalidArgument("scenario: empty graph");
    }
    if (graph.size() > 63)
    {
        throw InvalidArgument("scenario: at most 63 processes are supported");
    }
    for (auto const& [p, s] : faulty)
    {
        if (!graph.contains(p))
        {
            throw InvalidArgument("scenario: faulty process " + std::to_string(p) +
                                  " is not a vertex");
        }
    }
    if (mode == Mode::KnownF && faulty.size() > f)
    {
        throw InvalidArgument("scenario: " + std::to_string(faulty.size()) +
                              " faulty processes exceed f=" + std::to_string(f));
    }
    for (auto const& [p, v] : proposals)
    {
        if (!graph.contains(p))
        {
            throw InvalidArgument("scenario: proposal for unknown process " + std::to_string(p));
        }
    }
    auto ok = valid.build();
    for (auto p : correct_set())
    {
        if (!ok(proposal_of(p)))
        {
            throw InvalidArgument("scenario: proposal of correct process " + std::to_string(p) +
                                  " is not valid");
        }
    }
    if (delta < 1 || discoveryPeriod < 1)
    {
        throw InvalidArgument("scenario: delta and discoveryPeriod must be >= 1");
    }
    if (preGstRule.kind == DelayRuleSpec::Kind::Uniform &&
        (preGstRule.min < 1 || preGstRule.max < preGstRule.min))
    {
        throw InvalidArgument("scenario: uniform pre-GST rule needs 1 <= min <= max");
    }
}

Scenario
scenario_from_json(json const& j, std::string const& baseDir)
{
    Scenario s;
    try
    {
        s.name = j.value("name", "");
        s.graph = graph_from_json(j, baseDir);
        if (j.contains("faulty"))
        {
            for (auto const& [k, v] : j["faulty"].items())
            {
                StrategyList list;
                if (v.is_array())
                {
                    for (auto const& e : v)
                    {
                        list.push_back(strategy_from_json(e));
                    }
                }
                else
                {
                    list.push_back(strategy_from_json(v));
                }
                s.faulty[parse_id(k)] = list;
            }
        }
        auto mode = j.value("mode", "knownF");
        if (mode != "knownF" && mode != "unknownF")
        {
            throw ScenarioError("mode must be knownF or unknownF");
        }
        s.mode = mode == "knownF" ? Mode::KnownF : Mode::UnknownF;
        s.f = j.value("f", std::size_t{0});
        if (j.contains("gst"))
        {
            s.gst = j["gst"].get<Tick>();
        }
        s.delta = j.value("delta", Tick{10});
        if (j.contains("preGstRule"))
        {
            auto const& r = j["preGstRule"];
            auto type = r.at("type").get<std::string>();
            if (type == "uniform")
            {
                s.preGstRule.kind = DelayRuleSpec::Kind::Uniform;
                s.preGstRule.min = r.value("min", Tick{1});
                s.preGstRule.max = r.value("max", Tick{100});
            }
            else if (type == "clusterPartition")
            {
                s.preGstRule.kind = DelayRuleSpec::Kind::ClusterPartition;
                for (auto const& g : r.at("groups"))
                {
                    s.preGstRule.groups.push_back(id_set(g));
                }
                s.preGstRule.slowDelay = r.value("slowDelay", Tick{1000000});
                s.preGstRule.fastDelay = r.value("fastDelay", Tick{1});
            }
            else
            {
                throw ScenarioError("unknown preGstRule type '" + type + "'");
            }
        }
        if (j.contains("proposals"))
        {
            for (auto const& [k, v] : j["proposals"].items())
            {
                s.proposals[parse_id(k)] = v.get<std::string>();
            }
        }
        if (j.contains("valid"))
        {
            auto const& v = j["valid"];
            auto type = v.at("type").get<std::string>();
            if (type == "any")
            {
                s.valid.kind = ValidSpec::Kind::Any;
            }
            else if (type == "oneOf")
            {
                s.valid.kind = ValidSpec::Kind::OneOf;
                s.valid.values = v.at("values").get<std::vector<Value>>();
            }
            else if (type == "prefix")
            {
                s.valid.kind = ValidSpec::Kind::Prefix;
                s.valid.prefix = v.at("prefix").get<std::string>();
            }
            else
            {
                throw ScenarioError("unknown valid type '" + type + "'");
            }
        }
        if (j.contains("horizon"))
        {
            s.horizon = j["horizon"].get<Tick>();
        }
        s.seed = j.value("seed", std::uint64_t{1});
        s.enumerationCap = j.value("enumerationCap", kDefaultEnumerationCap);
        s.fInnerRule = parse_finner_rule(j.value("fInnerRule", "y"));
        s.discoveryPeriod = j.value("discoveryPeriod", Tick{10});
        if (j.contains("innerTimeout"))
        {
            s.innerTimeout = j["innerTimeout"].get<Tick>();
        }
    }
    catch (json::exception const& e)
    {
        throw ScenarioError(std::string("scenario: ") + e.what());
    }
    catch (InvalidArgument const& e)
    {
        throw ScenarioError(e.what());
    }
    catch (ParseError const& e)
    {
        throw ScenarioError(std::string("scenario graph: ") + e.what());
    }
    try
    {
        s.check();
    }
    catch (InvalidArgument const& e)
    {
        throw ScenarioError(e.what());
    }
    return s;
}

json
scenario_to_json(Scenario const& s)
{
    json j;
    if (!s.name.empty())
    {
        j["name"] = s.name;
    }
    j["graph"] = format_graph(s.graph);
    json faulty = json::object();
    for (auto const& [p, list] : s.faulty)
    {
        json arr = json::array();
        for (auto const& st : list)
        {
            arr.push_back(strategy_to_json(st));
        }
        faulty[std::to_string(p)] = arr;
    }
    j["faulty"] = faulty;
    j["mode"] = to_string(s.mode);
    j["f"] = s.f;
    if (s.gst)
    {
        j["gst"] = *s.gst;
    }
    j["delta"] = s.delta;
    if (s.preGstRule.kind == DelayRuleSpec::Kind::Uniform)
    {
        j["preGstRule"] = {{"type", "uniform"}, {"min", s.preGstRule.min}, {"max", s.preGstRule.max}};
    }
    else
    {
        json groups = json::array();
        for (auto const& g : s.preGstRule.groups)
        {
            groups.push_back(id_array(g));
        }
        j["preGstRule"] = {{"type", "clusterPartition"},
                           {"groups", groups},
                           {"slowDelay", s.preGstRule.slowDelay},
                           {"fastDelay", s.preGstRule.fastDelay}};
    }
    if (!s.proposals.empty())
    {
        json props = json::object();
        for (auto const& [p, v] : s.proposals)
        {
            props[std::to_string(p)] = v;
        }
        j["proposals"] = props;
    }
    switch (s.valid.kind)
    {
    case ValidSpec::Kind::Any:
        j["valid"] = {{"type", "any"}};
        break;
    case ValidSpec::Kind::OneOf:
        j["valid"] = {{"type", "oneOf"}, {"values", s.valid.values}};
        break;
    case ValidSpec::Kind::Prefix:
        j["valid"] = {{"type", "prefix"}, {"prefix", s.valid.prefix}};
        break;
    }
    if (s.horizon)
    {
        j["horizon"] = *s.horizon;
    }
    j["seed"] = s.seed;
    j["enumerationCap"] = s.enumerationCap;
    j["fInnerRule"] = to_string(s.fInnerRule);
    j["discoveryPeriod"] = s.discoveryPeriod;
    if (s.innerTimeout)
    {
        j["innerTimeout"] = *s.innerTimeout;
    }
    return j;
}

Scenario
load_scenario(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ScenarioError("cannot open scenario file '" + path + "'");
    }
    json j;
    try
    {
        in >> j;
    }
    catch (json::exception const& e)
    {
        throw ScenarioError("scenario file '" + path + "': " + e.what());
    }
    auto dir = std::filesystem::path(path).parent_path().string();
    return scenario_from_json(j, dir.empty() ? "." : dir);
}

void
save_scenario(Scenario const& s, std::string const& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw ScenarioError("cannot write scenario file '" + path + "'");
    }
    out << scenario_to_json(s).dump(2) << '\n';
}

Scenario
scenario_from_generated(GeneratedGraph const& g, Mode mode, std::uint64_t seed,
                        std::vector<Strategy::Kind> const& pool)
{
    Scenario s;
    s.graph = g.graph;
    s.mode = mode;
    s.f = g.f;
    s.seed = seed;
    Rng rng(seed ^ 0xa5a5a5a5ull);
    for (auto p : g.faulty)
    {
        Strategy st;
        if (!pool.empty())
        {
            st.kind = rng.pick(pool);
        }
        if (st.kind == Strategy::Kind::Crash)
        {
            st.at = rng.between(0, 300);
        }
        s.faulty[p] = {st};
    }
    return s;
}

} // namespace bftcup
