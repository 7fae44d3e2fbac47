#pragma once

// Scenario record and its JSON file form.

#include "bftcup/adversary.hpp"
#include "bftcup/generator.hpp"
#include "bftcup/simnet.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bftcup {

struct DelayRuleSpec
{
    enum class Kind
    {
        Uniform,
        ClusterPartition,
    };

    Kind kind = Kind::Uniform;
    Tick min = 1;
    Tick max = 100;
    std::vector<ProcessSet> groups;
    Tick slowDelay = 1000000;
    Tick fastDelay = 1;

    PreGstRule build() const;
    bool operator==(DelayRuleSpec const&) const = default;
};

struct ValidSpec
{
    enum class Kind
    {
        Any,
        OneOf,
        Prefix,
    };

    Kind kind = Kind::Any;
    std::vector<Value> values;
    std::string prefix;

    ValidPredicate build() const;
    bool operator==(ValidSpec const&) const = default;
};

struct Scenario
{
    std::string name;
    KnowledgeGraph graph;
    std::map<ProcessId, StrategyList> faulty;
    Mode mode = Mode::KnownF;
    std::size_t f = 0;
    std::optional<Tick> gst;     // absent: drawn from the seed in [0, 500]
    Tick delta = 10;
    DelayRuleSpec preGstRule;
    std::map<ProcessId, Value> proposals;
    ValidSpec valid;
    std::optional<Tick> horizon; // absent: gst + 50 * delta * n
    std::uint64_t seed = 1;
    std::size_t enumerationCap = kDefaultEnumerationCap;
    FInnerRule fInnerRule = FInnerRule::Y;
    Tick discoveryPeriod = 10;
    std::optional<Tick> innerTimeout; // absent: 6 * delta

    ProcessSet faulty_set() const;
    ProcessSet correct_set() const;
    Tick resolved_gst() const;
    Tick resolved_horizon() const;
    Tick resolved_inner_timeout() const;
    Value proposal_of(ProcessId p) const;

    /// Throws InvalidArgument describing the first violated field rule.
    void check() const;

    bool operator==(Scenario const&) const = default;
};

class ScenarioError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

Scenario scenario_from_json(nlohmann::json const& j, std::string const& baseDir = ".");
nlohmann::json scenario_to_json(Scenario const& s);
Scenario load_scenario(std::string const& path);
void save_scenario(Scenario const& s, std::string const& path);

/// Scenario over a generated graph with a strategy per faulty process drawn
/// from `pool` (FollowProtocol when the pool is empty).
Scenario scenario_from_generated(GeneratedGraph const& g, Mode mode, std::uint64_t seed,
                                 std::vector<Strategy::Kind> const& pool = {});

} // namespace bftcup
