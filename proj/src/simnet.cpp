#include "bftcup/simnet.hpp"

#include <algorithm>

namespace bftcup {

PreGstRule
uniform_delay(Tick lo, Tick hi)
{
    if (lo < 1 || hi < lo)
    {
        throw InvalidArgument("uniform_delay: need 1 <= lo <= hi");
    }
    return [lo, hi](ProcessId, ProcessId, Tick, Rng& rng) { return rng.between(lo, hi); };
}

PreGstRule
cluster_partition(std::vector<ProcessSet> groups, Tick slowDelay, Tick fastDelay)
{
    if (fastDelay < 1 || slowDelay < 1)
    {
        throw InvalidArgument("cluster_partition: delays must be >= 1");
    }
    return [groups = std::move(groups), slowDelay, fastDelay](ProcessId from, ProcessId to, Tick,
                                                              Rng&) {
        for (auto const& g : groups)
        {
            if (g.contains(from) && g.contains(to))
            {
                return fastDelay;
            }
        }
        return slowDelay;
    };
}

Trace::Trace()
{
    ensure_sodium();
    crypto_generichash_init(&mState, nullptr, 0, 32);
}

void
Trace::record(Tick time, std::string const& kind, std::string const& summary,
              std::string const& canonical)
{
    auto head = std::to_string(time) + ' ' + kind + ' ';
    auto full = head + canonical + '\n';
    crypto_generichash_update(&mState, reinterpret_cast<unsigned char const*>(full.data()),
                              full.size());
    if (mKeepLines)
    {
        mLines.push_back(head + summary);
    }
}

std::string
Trace::digest() const
{
    auto copy = mState;
    Tag out{};
    crypto_generichash_final(&copy, out.data(), out.size());
    return to_hex(out);
}

Network::Network(DelayPolicy policy, std::uint64_t seed) : mPolicy(std::move(policy)), mRng(seed)
{
    if (mPolicy.delta < 1)
    {
        throw InvalidArgument("delay policy: delta must be >= 1");
    }
    if (!mPolicy.preGstRule)
    {
        mPolicy.preGstRule = uniform_delay(1, mPolicy.delta);
    }
}

void
Network::register_process(ProcessId id)
{
    mProcesses.insert(id);
}

Tick
Network::delay_for(ProcessId from, ProcessId to)
{
    if (mNow >= mPolicy.gst)
    {
        return mRng.between(1, mPolicy.delta);
    }
    return std::max<Tick>(1, mPolicy.preGstRule(from, to, mNow, mRng));
}

void
Network::send(ProcessId from, ProcessId to, Message payload)
{
    if (!registered(from) || !registered(to))
    {
        throw InvalidArgument("send: unknown endpoint " +
                              std::to_string(registered(from) ? to : from));
    }
    if (mCrashed.contains(from))
    {
        return;
    }
    auto d = delay_for(from, to);
    ++mSent;
    mQueue.push(SimEvent{mNow + d, mNextSeq++,
                         Envelope{from, to, std::move(payload), mNow, mNow + d}});
}

TimerId
Network::set_timer(ProcessId owner, Tick delay, std::uint64_t tag)
{
    if (!registered(owner))
    {
        throw InvalidArgument("set_timer: unknown owner " + std::to_string(owner));
    }
    if (delay < 1)
    {
        throw InvalidArgument("set_timer: delay must be >= 1");
    }
    auto id = mNextTimer++;
    mLiveTimers.insert(id);
    mQueue.push(SimEvent{mNow + delay, mNextSeq++, TimerFire{owner, id, tag}});
    return id;
}

void
Network::cancel_timer(TimerId id)
{
    mLiveTimers.erase(id);
}

void
Network::crash(ProcessId id)
{
    mCrashed.insert(id);
}

std::optional<Tick>
Network::next_time() const
{
    if (mQueue.empty())
    {
        return std::nullopt;
    }
    return mQueue.top().time;
}

std::optional<SimEvent>
Network::step()
{
    while (!mQueue.empty())
    {
        auto ev = mQueue.top();
        mQueue.pop();
        mNow = ev.time;
        if (auto* t = std::get_if<TimerFire>(&ev.what))
        {
            if (!mLiveTimers.erase(t->id) || mCrashed.contains(t->owner))
            {
                continue;
            }
            mTrace.record(mNow, "timer",
                          std::to_string(t->owner) + " tag=" + std::to_string(t->tag),
                          std::to_string(t->owner) + ':' + std::to_string(t->tag));
            return ev;
        }
        auto const& env = std::get<Envelope>(ev.what);
        if (mCrashed.contains(env.to) || mCrashed.contains(env.from))
        {
            ++mDropped;
            continue;
        }
        ++mDelivered;
        auto route = std::to_string(env.from) + "->" + std::to_string(env.to);
        mTrace.record(mNow, "deliver", route + " sent=" + std::to_string(env.sendTime) + ' ' + summarize(env.payload),
                      route + ':' + std::to_string(env.sendTime) + ':' + encode(env.payload));
        return ev;
    }
    return std::nullopt;
}

} // namespace bftcup
