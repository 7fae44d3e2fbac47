#pragma once

// Scenario execution and property verdicts against the graph oracles.

#include "bftcup/scenario.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bftcup {

struct ProcessOutcome
{
    std::optional<ProcessSet> discovered;
    std::optional<std::size_t> y;
    std::optional<Tick> acceptTime;
    std::optional<Value> decided;
    std::optional<Tick> decideTime;

    bool operator==(ProcessOutcome const&) const = default;
};

struct AcceptanceRecord
{
    ProcessId process = 0;
    Tick time = 0;
    ProcessSet r;
    ProcessSet kStar;
    std::optional<std::size_t> y;
    // Whether the result agrees with the oracle on correct members; absent
    // when no oracle applies.
    std::optional<bool> matchesOracle;

    bool operator==(AcceptanceRecord const&) const = default;
};

struct Verdict
{
    std::map<ProcessId, ProcessOutcome> perProcess; // correct processes
    bool validity = false;
    bool agreement = false;
    bool termination = false;
    // Discovery results against the oracle: sink concordance in knownF mode,
    // core concordance in unknownF mode. Absent when the oracle is undefined.
    std::optional<bool> concordance;
    ProcessSet oracleSink;
    std::optional<CoreCertificate> oracleCore;
    std::vector<AcceptanceRecord> acceptanceLog;
    std::vector<std::string> notes;
    std::string traceDigest;
    Tick endTime = 0;
    Tick horizon = 0;
    std::uint64_t messages = 0;

    std::set<Value> decided_values() const;
    bool passed() const;
    bool operator==(Verdict const&) const = default;
};

struct RunResult
{
    Verdict verdict;
    std::vector<std::string> trace; // empty unless requested
};

RunResult run(Scenario const& scenario, bool keepTrace = false);

nlohmann::json verdict_to_json(Verdict const& v);

/// Line-delimited records: one per process, one per acceptance, a summary.
std::string format_verdict(Verdict const& v);

struct SweepReport
{
    std::size_t runs = 0;
    std::size_t validity = 0;
    std::size_t agreement = 0;
    std::size_t termination = 0;
    std::size_t concordance = 0;
    std::size_t passed = 0;
    // Percentiles of the last correct decision time over terminated runs.
    std::optional<Tick> decideP50;
    std::optional<Tick> decideP90;
    std::optional<Tick> decideMax;
    std::vector<std::uint64_t> failedSeeds;
};

SweepReport sweep(Scenario const& base, std::vector<std::uint64_t> const& seeds,
                  std::size_t threads = 0);
nlohmann::json sweep_to_json(SweepReport const& r);

/// Trace file: scenario header, event lines, digest footer.
std::string format_trace(Scenario const& s, RunResult const& r);

struct ReplayResult
{
    bool match = false;
    std::string recorded;
    std::string replayed;
};

ReplayResult replay(std::string const& traceText);

} // namespace bftcup
