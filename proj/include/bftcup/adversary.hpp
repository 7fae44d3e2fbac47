#pragma once

// Byzantine behaviours. A faulty process wraps an ordinary Process and
// rewrites or suppresses what it emits, signing with its own key only.

#include "bftcup/process.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bftcup {

struct Strategy
{
    enum class Kind
    {
        Silent,
        Crash,
        FakePD,
        EquivocatePD,
        InnerEquivocate,
        FollowProtocol,
    };

    Kind kind = Kind::FollowProtocol;
    Tick at = 0;                               // Crash
    std::optional<ProcessSet> claimedPd{};     // FakePD; absent = every other process
    std::map<ProcessId, ProcessSet> perReceiver{}; // EquivocatePD; empty = drawn per receiver

    bool operator==(Strategy const&) const = default;
};

/// Strategies of one faulty process, applied in order.
using StrategyList = std::vector<Strategy>;

std::string to_string(Strategy::Kind k);
Strategy::Kind parse_strategy_kind(std::string const& s);

class ByzantineProcess
{
public:
    /// `everyone` is the full vertex set of the scenario; `alternative` is
    /// the second value pushed by an equivocating leader.
    ByzantineProcess(ProcessId id, ProcessSet truePd, ProcessSet const& everyone,
                     StrategyList strategies, ProcessConfig config, Value alternative,
                     SigningAuthority const& authority, KeyHandle key, std::uint64_t seed);

    Effects start(Tick now);
    Effects on_timer(Tick now, std::uint64_t tag);
    Effects on_message(Tick now, ProcessId from, Message const& m);

    ProcessId id() const { return mId; }
    bool silent() const { return mSilent; }
    std::optional<Tick> crash_time() const { return mCrashAt; }
    ProcessSet const& claimed_pd() const { return mClaimed; }
    std::map<ProcessId, ProcessSet> const& per_receiver() const { return mPerReceiver; }

private:
    Effects filter(Tick now, Effects fx);

    ProcessId mId;
    SigningAuthority const& mAuthority;
    KeyHandle mKey;
    Value mAlternative;
    bool mSilent = false;
    std::optional<Tick> mCrashAt;
    bool mInnerEquivocate = false;
    ProcessSet mClaimed;
    std::map<ProcessId, ProcessSet> mPerReceiver;
    std::map<ProcessId, SignedPD> mEquivocalRecords;
    std::unique_ptr<Process> mBody;
};

} // namespace bftcup
