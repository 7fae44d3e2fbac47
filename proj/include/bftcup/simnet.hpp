#pragma once

// Deterministic discrete-event network. Events are ordered by (time,
// insertion sequence); delays come from a DelayPolicy and the run's seeded
// generator, so a (scenario, seed) pair fixes the whole event sequence.

#include "bftcup/message.hpp"
#include "bftcup/rng.hpp"

#include <sodium.h>

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace bftcup {

using TimerId = std::uint64_t;

struct Envelope
{
    ProcessId from = 0;
    ProcessId to = 0;
    Message payload;
    Tick sendTime = 0;
    Tick deliverTime = 0;
};

struct TimerFire
{
    ProcessId owner = 0;
    TimerId id = 0;
    std::uint64_t tag = 0;
};

struct SimEvent
{
    Tick time = 0;
    std::uint64_t seq = 0;
    std::variant<Envelope, TimerFire> what;
};

/// Delay for a message sent before GST; must return at least 1.
using PreGstRule = std::function<Tick(ProcessId from, ProcessId to, Tick now, Rng& rng)>;

struct DelayPolicy
{
    Tick gst = 0;
    Tick delta = 10;
    PreGstRule preGstRule;
};

PreGstRule uniform_delay(Tick lo, Tick hi);

/// Messages inside one group take `fastDelay`; messages between different
/// groups (or to/from a process in no group) take `slowDelay`.
PreGstRule cluster_partition(std::vector<ProcessSet> groups, Tick slowDelay, Tick fastDelay = 1);

/// Trace of a run: summary lines for humans plus an incremental digest over
/// the canonical encoding of every record.
class Trace
{
public:
    Trace();

    void record(Tick time, std::string const& kind, std::string const& summary,
                std::string const& canonical);
    std::vector<std::string> const& lines() const { return mLines; }
    std::string digest() const;
    void keep_lines(bool keep) { mKeepLines = keep; }

private:
    crypto_generichash_state mState;
    std::vector<std::string> mLines;
    bool mKeepLines = true;
};

class Network
{
public:
    Network(DelayPolicy policy, std::uint64_t seed);

    void register_process(ProcessId id);
    bool registered(ProcessId id) const { return mProcesses.contains(id); }

    void send(ProcessId from, ProcessId to, Message payload);
    TimerId set_timer(ProcessId owner, Tick delay, std::uint64_t tag);
    void cancel_timer(TimerId id);

    /// Envelopes to or from a crashed process are dropped on delivery and
    /// its timers never fire.
    void crash(ProcessId id);

    std::optional<SimEvent> step();

    Tick now() const { return mNow; }
    bool idle() const { return mQueue.empty(); }
    std::optional<Tick> next_time() const;
    DelayPolicy const& policy() const { return mPolicy; }
    Rng& rng() { return mRng; }

    Trace& trace() { return mTrace; }
    Trace const& trace() const { return mTrace; }

    std::uint64_t sent() const { return mSent; }
    std::uint64_t delivered() const { return mDelivered; }
    std::uint64_t dropped() const { return mDropped; }

private:
    struct Later
    {
        bool operator()(SimEvent const& a, SimEvent const& b) const
        {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    Tick delay_for(ProcessId from, ProcessId to);

    DelayPolicy mPolicy;
    Rng mRng;
    Tick mNow = 0;
    std::uint64_t mNextSeq = 0;
    TimerId mNextTimer = 1;
    std::set<ProcessId> mProcesses;
    std::set<ProcessId> mCrashed;
    std::set<TimerId> mLiveTimers;
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> mQueue;
    Trace mTrace;
    std::uint64_t mSent = 0;
    std::uint64_t mDelivered = 0;
    std::uint64_t mDropped = 0;
};

} // namespace bftcup
