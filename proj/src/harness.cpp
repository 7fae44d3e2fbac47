#include "bftcup/harness.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <sstream>
#include <thread>

namespace bftcup {

using nlohmann::json;

namespace {

struct Node
{
    std::unique_ptr<Process> correct;
    std::unique_ptr<ByzantineProcess> byzantine;
};

struct Oracle
{
    ProcessSet sink;
    bool sinkDefined = false;
    std::optional<CoreCertificate> core;
};

Oracle
compute_oracle(Scenario const& s, std::vector<std::string>& notes)
{
    Oracle o;
    auto safe = safe_subgraph(s.graph, s.faulty_set());
    auto c = condense(safe);
    if (c.sinkComponents.size() == 1)
    {
        o.sink = c.components[c.sinkComponents[0]];
        o.sinkDefined = true;
    }
    else
    {
        notes.push_back("oracle: safe subgraph has " + std::to_string(c.sinkComponents.size()) +
                        " sink components");
    }
    if (s.mode == Mode::UnknownF)
    {
        try
        {
            auto cores = enumerate_cores(safe, s.enumerationCap);
            if (cores.size() == 1)
            {
                o.core = CoreCertificate{cores[0].core, cores[0].yMin};
            }
            else
            {
                notes.push_back("oracle: safe subgraph has " + std::to_string(cores.size()) +
                                " cores");
            }
        }
        catch (SizeLimitError const& e)
        {
            notes.push_back(std::string("oracle: ") + e.what());
        }
    }
    return o;
}

std::optional<bool>
matches(Scenario const& s, Oracle const& o, ProcessSet const& result)
{
    auto correct = s.correct_set();
    if (s.mode == Mode::KnownF)
    {
        if (!o.sinkDefined)
        {
            return std::nullopt;
        }
        return set_intersection(result, correct) == set_intersection(o.sink, correct) &&
               is_subset(set_difference(result, o.sink), s.faulty_set());
    }
    if (!o.core)
    {
        return std::nullopt;
    }
    return set_intersection(result, correct) == set_intersection(o.core->core, correct);
}

std::string
describe(Acceptance const& a)
{
    std::string out = "R=" + to_string(a.r) + " K=" + to_string(a.kStar);
    if (a.y)
    {
        out += " y=" + std::to_string(*a.y);
    }
    return out;
}

} // namespace

std::set<Value>
Verdict::decided_values() const
{
    std::set<Value> out;
    for (auto const& [p, o] : perProcess)
    {
        if (o.decided)
        {
            out.insert(*o.decided);
        }
    }
    return out;
}

bool
Verdict::passed() const
{
    return validity && agreement && termination && concordance.value_or(true);
}

RunResult
run(Scenario const& s, bool keepTrace)
{
    s.check();
    RunResult result;
    auto& v = result.verdict;
    auto oracle = compute_oracle(s, v.notes);
    v.oracleSink = oracle.sink;
    v.oracleCore = oracle.core;

    auto const gst = s.resolved_gst();
    auto const horizon = s.resolved_horizon();
    v.horizon = horizon;
    Network net(DelayPolicy{gst, s.delta, s.preGstRule.build()}, s.seed);
    net.trace().keep_lines(keepTrace);
    SigningAuthority authority(s.seed);
    auto valid = s.valid.build();
    auto correct = s.correct_set();

    std::map<ProcessId, Node> nodes;
    for (auto p : s.graph.vertices())
    {
        net.register_process(p);
        auto key = authority.issue(p);
        ProcessConfig cfg;
        cfg.mode = s.mode;
        cfg.f = s.f;
        cfg.discoveryPeriod = s.discoveryPeriod;
        cfg.valid = valid;
        cfg.proposal = s.proposal_of(p);
        cfg.fInnerRule = s.fInnerRule;
        cfg.innerTimeout = s.resolved_inner_timeout();
        if (auto it = s.faulty.find(p); it != s.faulty.end())
        {
            auto alt = correct.empty() ? cfg.proposal + "'" : s.proposal_of(*correct.rbegin());
            nodes[p].byzantine = std::make_unique<ByzantineProcess>(
                p, s.graph.successors(p), s.graph.vertices(), it->second, cfg, alt, authority,
                key, s.seed);
        }
        else
        {
            nodes[p].correct = std::make_unique<Process>(p, s.graph.successors(p), cfg,
                                                         authority, key);
            v.perProcess[p];
        }
    }

    std::size_t undecided = correct.size();
    auto apply = [&](ProcessId who, Effects fx) {
        for (auto& [to, m] : fx.sends)
        {
            net.send(who, to, std::move(m));
        }
        for (auto const& [delay, tag] : fx.timers)
        {
            net.set_timer(who, delay, tag);
        }
        if (!correct.contains(who))
        {
            return;
        }
        auto& out = v.perProcess[who];
        if (fx.accepted)
        {
            out.discovered = fx.accepted->members();
            out.y = fx.accepted->y;
            out.acceptTime = net.now();
            v.acceptanceLog.push_back(AcceptanceRecord{who, net.now(), fx.accepted->r,
                                                       fx.accepted->kStar, fx.accepted->y,
                                                       matches(s, oracle, *out.discovered)});
            auto text = std::to_string(who) + ' ' + describe(*fx.accepted);
            net.trace().record(net.now(), "accept", text, text);
        }
        if (fx.configError)
        {
            v.notes.push_back("process " + std::to_string(who) + ": " + *fx.configError);
            net.trace().record(net.now(), "config-error", std::to_string(who), *fx.configError);
        }
        if (fx.decided && !out.decided)
        {
            out.decided = fx.decided;
            out.decideTime = net.now();
            --undecided;
            auto text = std::to_string(who) + " \"" + *fx.decided + '"';
            net.trace().record(net.now(), "decide", text, text);
        }
    };

    for (auto& [p, node] : nodes)
    {
        apply(p, node.correct ? node.correct->start() : node.byzantine->start(0));
    }
    while (undecided > 0)
    {
        auto next = net.next_time();
        if (!next || *next > horizon)
        {
            break;
        }
        auto ev = net.step();
        if (!ev || ev->time > horizon)
        {
            break;
        }
        auto now = ev->time;
        if (auto* t = std::get_if<TimerFire>(&ev->what))
        {
            auto& node = nodes[t->owner];
            apply(t->owner, node.correct ? node.correct->on_timer(t->tag)
                                         : node.byzantine->on_timer(now, t->tag));
        }
        else
        {
            auto const& env = std::get<Envelope>(ev->what);
            auto& node = nodes[env.to];
            apply(env.to, node.correct ? node.correct->on_message(env.from, env.payload)
                                       : node.byzantine->on_message(now, env.from, env.payload));
        }
    }
    v.endTime = net.now();
    v.messages = net.delivered();

    // Properties over correct processes.
    std::set<Value> proposals;
    for (auto p : s.graph.vertices())
    {
        proposals.insert(s.proposal_of(p));
    }
    v.termination = true;
    v.validity = true;
    for (auto const& [p, o] : v.perProcess)
    {
        if (!o.decided || *o.decideTime > horizon)
        {
            v.termination = false;
            continue;
        }
        if (!valid(*o.decided) || !proposals.contains(*o.decided))
        {
            v.validity = false;
        }
    }
    v.agreement = v.decided_values().size() <= 1;

    std::optional<bool> concordance;
    for (auto const& [p, o] : v.perProcess)
    {
        if (!o.discovered)
        {
            continue;
        }
        auto m = matches(s, oracle, *o.discovered);
        if (m)
        {
            concordance = concordance.value_or(true) && *m;
        }
    }
    if (concordance && s.mode == Mode::UnknownF)
    {
        // All correct processes must also hold the same correct-member core.
        std::set<ProcessSet> seen;
        for (auto const& [p, o] : v.perProcess)
        {
            if (o.discovered)
            {
                seen.insert(set_intersection(*o.discovered, correct));
            }
        }
        concordance = *concordance && seen.size() == 1;
    }
    if (concordance)
    {
        for (auto const& [p, o] : v.perProcess)
        {
            if (!o.discovered)
            {
                concordance = false;
            }
        }
    }
    v.concordance = concordance;

    auto summary = std::string("validity=") + (v.validity ? "1" : "0") +
                   " agreement=" + (v.agreement ? "1" : "0") +
                   " termination=" + (v.termination ? "1" : "0");
    net.trace().record(v.endTime, "end", summary, summary);
    v.traceDigest = net.trace().digest();
    if (keepTrace)
    {
        result.trace = net.trace().lines();
    }
    return result;
}

json
verdict_to_json(Verdict const& v)
{
    auto opt = [](auto const& o) { return o ? json(*o) : json(nullptr); };
    auto ids = [](ProcessSet const& s) { return json(std::vector<ProcessId>(s.begin(), s.end())); };
    json per = json::object();
    for (auto const& [p, o] : v.perProcess)
    {
        per[std::to_string(p)] = {
            {"discovered", o.discovered ? ids(*o.discovered) : json(nullptr)},
            {"y", opt(o.y)},
            {"acceptTime", opt(o.acceptTime)},
            {"decided", opt(o.decided)},
            {"decideTime", opt(o.decideTime)},
        };
    }
    json log = json::array();
    for (auto const& a : v.acceptanceLog)
    {
        log.push_back({{"process", a.process},
                       {"time", a.time},
                       {"R", ids(a.r)},
                       {"Kstar", ids(a.kStar)},
                       {"y", opt(a.y)},
                       {"matchesOracle", opt(a.matchesOracle)}});
    }
    return {
        {"perProcess", per},
        {"validity", v.validity},
        {"agreement", v.agreement},
        {"termination", v.termination},
        {"concordance", opt(v.concordance)},
        {"oracleSink", ids(v.oracleSink)},
        {"oracleCore", v.oracleCore ? json{{"core", ids(v.oracleCore->core)}, {"y", v.oracleCore->y}}
                                    : json(nullptr)},
        {"acceptanceLog", log},
        {"notes", v.notes},
        {"traceDigest", v.traceDigest},
        {"endTime", v.endTime},
        {"horizon", v.horizon},
        {"messages", v.messages},
        {"passed", v.passed()},
    };
}

std::string
format_verdict(Verdict const& v)
{
    auto j = verdict_to_json(v);
    std::ostringstream os;
    for (auto const& [p, o] : j["perProcess"].items())
    {
        os << json{{"record", "process"}, {"id", std::stoul(p)}, {"outcome", o}}.dump() << '\n';
    }
    for (auto const& a : j["acceptanceLog"])
    {
        auto rec = a;
        rec["record"] = "acceptance";
        os << rec.dump() << '\n';
    }
    for (auto const& n : v.notes)
    {
        os << json{{"record", "note"}, {"text", n}}.dump() << '\n';
    }
    json summary{{"record", "summary"}};
    for (auto const* key : {"validity", "agreement", "termination", "concordance", "oracleSink",
                            "oracleCore", "traceDigest", "endTime", "horizon", "messages",
                            "passed"})
    {
        summary[key] = j[key];
    }
    summary["decidedValues"] = v.decided_values();
    os << summary.dump() << '\n';
    return os.str();
}

SweepReport
sweep(Scenario const& base, std::vector<std::uint64_t> const& seeds, std::size_t threads)
{
    SweepReport report;
    if (seeds.empty())
    {
        return report;
    }
    std::vector<Verdict> verdicts(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < seeds.size(); i = next++)
        {
            auto s = base;
            s.seed = seeds[i];
            verdicts[i] = run(s).verdict;
        }
    };
    if (threads == 0)
    {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, seeds.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t)
    {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool)
    {
        t.join();
    }

    std::vector<Tick> times;
    for (std::size_t i = 0; i < seeds.size(); ++i)
    {
        auto const& v = verdicts[i];
        ++report.runs;
        report.validity += v.validity;
        report.agreement += v.agreement;
        report.termination += v.termination;
        report.concordance += v.concordance.value_or(true);
        report.passed += v.passed();
        if (!v.passed())
        {
            report.failedSeeds.push_back(seeds[i]);
        }
        if (v.termination)
        {
            Tick last = 0;
            for (auto const& [p, o] : v.perProcess)
            {
                last = std::max(last, o.decideTime.value_or(0));
            }
            times.push_back(last);
        }
    }
    if (!times.empty())
    {
        std::sort(times.begin(), times.end());
        auto at = [&](double q) {
            return times[static_cast<std::size_t>(q * static_cast<double>(times.size() - 1))];
        };
        report.decideP50 = at(0.5);
        report.decideP90 = at(0.9);
        report.decideMax = times.back();
    }
    return report;
}

json
sweep_to_json(SweepReport const& r)
{
    auto opt = [](auto const& o) { return o ? json(*o) : json(nullptr); };
    return {
        {"runs", r.runs},
        {"validity", r.validity},
        {"agreement", r.agreement},
        {"termination", r.termination},
        {"concordance", r.concordance},
        {"passed", r.passed},
        {"decideTimeP50", opt(r.decideP50)},
        {"decideTimeP90", opt(r.decideP90)},
        {"decideTimeMax", opt(r.decideMax)},
        {"failedSeeds", r.failedSeeds},
    };
}

std::string
format_trace(Scenario const& s, RunResult const& r)
{
    std::ostringstream os;
    os << "# scenario " << scenario_to_json(s).dump() << '\n';
    for (auto const& line : r.trace)
    {
        os << line << '\n';
    }
    os << "# digest " << r.verdict.traceDigest << '\n';
    return os.str();
}

ReplayResult
replay(std::string const& traceText)
{
    std::istringstream in(traceText);
    std::string line;
    std::optional<Scenario> scenario;
    ReplayResult out;
    while (std::getline(in, line))
    {
        if (line.starts_with("# scenario "))
        {
            try
            {
                scenario = scenario_from_json(json::parse(line.substr(11)));
            }
            catch (json::exception const& e)
            {
                throw ScenarioError(std::string("trace header: ") + e.what());
            }
        }
        else if (line.starts_with("# digest "))
        {
            out.recorded = line.substr(9);
        }
    }
    if (!scenario || out.recorded.empty())
    {
        throw ScenarioError("trace lacks a scenario header or digest footer");
    }
    out.replayed = run(*scenario).verdict.traceDigest;
    out.match = out.replayed == out.recorded;
    return out;
}

} // namespace bftcup
