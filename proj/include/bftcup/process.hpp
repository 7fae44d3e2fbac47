#pragma once

// A correct process: periodic PD discovery, the sink or core waiting
// condition, and the outer consensus that either runs the inner agreement
// (members) or collects decided values from the members (everyone else).

#include "bftcup/inner.hpp"
#include "bftcup/view.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bftcup {

enum class Mode
{
    KnownF,
    UnknownF,
};

enum class FInnerRule
{
    Y,          // the y returned by the core condition
    FloorThird, // floor((|S| - 1) / 3)
};

std::string to_string(Mode m);
std::string to_string(FInnerRule r);
FInnerRule parse_finner_rule(std::string const& s);

struct ProcessConfig
{
    Mode mode = Mode::KnownF;
    std::size_t f = 0;
    Tick discoveryPeriod = 10;
    ValidPredicate valid;
    Value proposal;
    FInnerRule fInnerRule = FInnerRule::Y;
    Tick innerTimeout = 60;
};

// Timer tags: 0 is the discovery period, v + 1 the inner view v timeout.
inline constexpr std::uint64_t kDiscoveryTimer = 0;

struct Effects
{
    std::vector<std::pair<ProcessId, Message>> sends;
    std::vector<std::pair<Tick, std::uint64_t>> timers; // (delay, tag)
    std::optional<Acceptance> accepted;
    std::optional<Value> decided;
    std::optional<std::string> configError;

    void append(Effects&& other);
};

std::size_t decided_reply_quorum(std::size_t members);

class Process
{
public:
    Process(ProcessId id, ProcessSet pd, ProcessConfig config, SigningAuthority const& authority,
            KeyHandle key);

    Effects start();
    Effects on_timer(std::uint64_t tag);
    Effects on_message(ProcessId from, Message const& m);

    ProcessId id() const { return mId; }
    ProcessConfig const& config() const { return mConfig; }
    LocalView const& view() const { return mView; }
    std::optional<Acceptance> const& acceptance() const { return mAcceptance; }
    std::optional<Value> const& decided() const { return mDecided; }
    InnerConsensus const* inner() const { return mInner.get(); }

private:
    Effects discovery_round();
    Effects evaluate();
    Effects decide(Value const& v);
    Effects absorb(InnerEffects&& fx);

    ProcessId mId;
    ProcessConfig mConfig;
    SigningAuthority const& mAuthority;
    KeyHandle mKey;
    LocalView mView;

    std::optional<Acceptance> mAcceptance;
    std::optional<Value> mDecided;
    std::unique_ptr<InnerConsensus> mInner;
    std::vector<std::pair<ProcessId, Message>> mInnerBacklog;
    std::vector<ProcessId> mPendingRequests;
    bool mAwaitingReplies = false;
    std::map<Value, ProcessSet> mReplies;
};

} // namespace bftcup
