#include "bftcup/generator.hpp"
#include "bftcup/graph_io.hpp"
#include "bftcup/harness.hpp"
#include "bftcup/kgraph.hpp"
#include "bftcup/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

using namespace bftcup;
using nlohmann::json;

namespace {

enum Exit
{
    Ok = 0,
    UsageOrIo = 1,
    ValidationFalse = 2,
    PropertyFailure = 3,
    GenerationFailed = 4,
};

json
ids(ProcessSet const& s)
{
    return json(std::vector<ProcessId>(s.begin(), s.end()));
}

json
report_to_json(ValidationReport const& r)
{
    json j{{"verdict", r.verdict}, {"failedClause", to_string(r.failedClause)}, {"sink", ids(r.sink)}};
    if (r.witness)
    {
        json w{{"vertices", ids(r.witness->vertices)}};
        if (r.witness->pair)
        {
            w["pair"] = {r.witness->pair->first, r.witness->pair->second};
        }
        j["witness"] = w;
    }
    if (r.core)
    {
        j["core"] = {{"members", ids(r.core->core)}, {"y", r.core->y}};
    }
    return j;
}

std::string
slurp(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Strategy::Kind>
parse_pool(std::string const& text)
{
    std::vector<Strategy::Kind> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (!item.empty())
        {
            out.push_back(parse_strategy_kind(item));
        }
    }
    return out;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Byzantine consensus with unknown participants: graph tools and simulator"};
    app.require_subcommand(1);

    std::string graphFile, faultyText, modelText = "cupft";
    std::size_t f = 1;
    auto* validate = app.add_subcommand("validate", "check a knowledge graph against a model");
    validate->add_option("graph", graphFile, "graph file")->required()->check(CLI::ExistingFile);
    validate->add_option("--faulty", faultyText, "faulty ids, e.g. 4,7");
    validate->add_option("-f,--f", f, "fault threshold");
    validate->add_option("--model", modelText, "cup | cupft")->check(CLI::IsMember({"cup", "cupft"}));

    std::size_t cap = kDefaultEnumerationCap;
    auto* cores = app.add_subcommand("cores", "enumerate cores of a graph");
    cores->add_option("graph", graphFile, "graph file")->required()->check(CLI::ExistingFile);
    cores->add_option("--cap", cap, "largest graph searched exhaustively");

    GeneratorParams gen;
    std::string genModel = "cupft", modeText = "knownF", poolText, outPrefix;
    std::uint64_t seed = 1;
    auto* generateCmd = app.add_subcommand("generate", "synthesize a graph and scenario skeleton");
    generateCmd->add_option("-n,--n", gen.n, "number of processes");
    generateCmd->add_option("-f,--f", gen.f, "fault threshold");
    generateCmd->add_option("--model", genModel, "cup | cupft | cup-only");
    generateCmd->add_option("--density", gen.extraEdgeDensity, "extra edge probability");
    generateCmd->add_option("--thinning", gen.sinkThinning, "sink edge drop probability");
    generateCmd->add_option("--retries", gen.maxRetries, "attempts before giving up");
    generateCmd->add_option("--seed", seed, "generator seed");
    generateCmd->add_option("--mode", modeText, "knownF | unknownF")
        ->check(CLI::IsMember({"knownF", "unknownF"}));
    generateCmd->add_option("--strategies", poolText, "Byzantine strategy pool, e.g. silent,fakePD");
    generateCmd->add_option("-o,--out", outPrefix, "writes <out>.graph and <out>.json")->required();

    std::string scenarioFile, traceOut;
    std::optional<std::uint64_t> seedOverride;
    auto* runCmd = app.add_subcommand("run", "simulate one scenario");
    runCmd->add_option("scenario", scenarioFile, "scenario file")->required()->check(CLI::ExistingFile);
    runCmd->add_option("--seed", seedOverride, "override the scenario seed");
    runCmd->add_option("--trace", traceOut, "write a replayable trace");

    std::size_t seedCount = 10, threads = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t firstSeed = 1;
    auto* sweepCmd = app.add_subcommand("sweep", "simulate a scenario over many seeds");
    sweepCmd->add_option("scenario", scenarioFile, "scenario file")->required()->check(CLI::ExistingFile);
    sweepCmd->add_option("--seeds", seedCount, "number of seeds");
    sweepCmd->add_option("--first", firstSeed, "first seed");
    sweepCmd->add_option("-j,--threads", threads, "worker threads");

    std::string traceFile;
    auto* replayCmd = app.add_subcommand("replay", "re-execute a trace and compare digests");
    replayCmd->add_option("trace", traceFile, "trace file")->required()->check(CLI::ExistingFile);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        auto code = app.exit(e);
        return code == 0 ? Ok : UsageOrIo;
    }

    try
    {
        if (*validate)
        {
            auto g = read_graph_file(graphFile);
            auto faulty = parse_id_list(faultyText);
            auto r = modelText == "cup" ? check_bft_cup(g, faulty, f) : check_bft_cupft(g, faulty, f);
            std::cout << report_to_json(r).dump(2) << '\n';
            return r.verdict ? Ok : ValidationFalse;
        }
        if (*cores)
        {
            auto g = read_graph_file(graphFile);
            json out = json::array();
            for (auto const& e : enumerate_cores(g, cap))
            {
                out.push_back({{"core", ids(e.core)}, {"yMin", e.yMin}, {"yMax", e.yMax}});
            }
            std::cout << out.dump(2) << '\n';
            return Ok;
        }
        if (*generateCmd)
        {
            gen.model = parse_graph_model(genModel);
            auto mode = modeText == "unknownF" ? Mode::UnknownF : Mode::KnownF;
            GeneratedGraph g;
            try
            {
                g = generate(gen, seed);
            }
            catch (GenerationFailure const& e)
            {
                std::cerr << "error: " << e.what() << '\n';
                return GenerationFailed;
            }
            catch (InvalidArgument const& e)
            {
                std::cerr << "error: " << e.what() << '\n';
                return GenerationFailed;
            }
            write_graph_file(outPrefix + ".graph", g.graph);
            auto s = scenario_from_generated(g, mode, seed, parse_pool(poolText));
            s.name = outPrefix;
            save_scenario(s, outPrefix + ".json");
            std::cout << json{{"graph", outPrefix + ".graph"},
                              {"scenario", outPrefix + ".json"},
                              {"faulty", ids(g.faulty)},
                              {"correctSink", ids(g.correctSink)}}
                             .dump(2)
                      << '\n';
            return Ok;
        }
        if (*runCmd)
        {
            auto s = load_scenario(scenarioFile);
            if (seedOverride)
            {
                s.seed = *seedOverride;
            }
            auto r = run(s, !traceOut.empty());
            if (!traceOut.empty())
            {
                std::ofstream(traceOut) << format_trace(s, r);
            }
            std::cout << format_verdict(r.verdict);
            return r.verdict.passed() ? Ok : PropertyFailure;
        }
        if (*sweepCmd)
        {
            auto s = load_scenario(scenarioFile);
            std::vector<std::uint64_t> seeds(seedCount);
            std::iota(seeds.begin(), seeds.end(), firstSeed);
            auto report = sweep(s, seeds, threads);
            std::cout << sweep_to_json(report).dump(2) << '\n';
            return report.passed == report.runs ? Ok : PropertyFailure;
        }
        if (*replayCmd)
        {
            auto r = replay(slurp(traceFile));
            std::cout << json{{"match", r.match}, {"recorded", r.recorded}, {"replayed", r.replayed}}.dump(2)
                      << '\n';
            return r.match ? Ok : PropertyFailure;
        }
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return UsageOrIo;
    }
    return UsageOrIo;
}
