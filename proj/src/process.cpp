#include "bftcup/process.hpp"

namespace bftcup {

std::string
to_string(Mode m)
{
    return m == Mode::KnownF ? "knownF" : "unknownF";
}

std::string
to_string(FInnerRule r)
{
    return r == FInnerRule::Y ? "y" : "floorThird";
}

FInnerRule
parse_finner_rule(std::string const& s)
{
    if (s == "y")
    {
        return FInnerRule::Y;
    }
    if (s == "floorThird")
    {
        return FInnerRule::FloorThird;
    }
    throw InvalidArgument("unknown fInnerRule '" + s + "'");
}

void
Effects::append(Effects&& other)
{
    for (auto& s : other.sends)
    {
        sends.push_back(std::move(s));
    }
    for (auto& t : other.timers)
    {
        timers.push_back(t);
    }
    if (other.accepted)
    {
        accepted = std::move(other.accepted);
    }
    if (other.decided)
    {
        decided = std::move(other.decided);
    }
    if (other.configError)
    {
        configError = std::move(other.configError);
    }
}

std::size_t
decided_reply_quorum(std::size_t members)
{
    return (members + 1 + 1) / 2;
}

Process::Process(ProcessId id, ProcessSet pd, ProcessConfig config,
                 SigningAuthority const& authority, KeyHandle key)
    : mId(id),
      mConfig(std::move(config)),
      mAuthority(authority),
      mKey(key),
      mView(id, pd, sign_pd(authority, key, id, pd))
{
    if (!mConfig.valid)
    {
        mConfig.valid = [](Value const&) { return true; };
    }
    if (mConfig.discoveryPeriod < 1)
    {
        throw InvalidArgument("discovery period must be >= 1");
    }
}

Effects
Process::start()
{
    auto fx = discovery_round();
    fx.append(evaluate());
    return fx;
}

Effects
Process::discovery_round()
{
    Effects fx;
    for (auto j : mView.s_known())
    {
        if (j != mId)
        {
            fx.sends.emplace_back(j, GetPDs{});
        }
    }
    fx.timers.emplace_back(mConfig.discoveryPeriod, kDiscoveryTimer);
    return fx;
}

Effects
Process::on_timer(std::uint64_t tag)
{
    if (tag == kDiscoveryTimer)
    {
        return discovery_round();
    }
    if (mInner)
    {
        return absorb(mInner->on_timeout(tag - 1));
    }
    return {};
}

Effects
Process::absorb(InnerEffects&& inner)
{
    Effects fx;
    fx.sends = std::move(inner.sends);
    for (auto const& [view, delay] : inner.timers)
    {
        fx.timers.emplace_back(delay, view + 1);
    }
    if (inner.decided && !mDecided)
    {
        fx.append(decide(*inner.decided));
    }
    return fx;
}

Effects
Process::decide(Value const& v)
{
    Effects fx;
    mDecided = v;
    fx.decided = v;
    for (auto j : mPendingRequests)
    {
        fx.sends.emplace_back(j, DecidedVal{v});
    }
    mPendingRequests.clear();
    return fx;
}

Effects
Process::evaluate()
{
    Effects fx;
    if (mAcceptance)
    {
        return fx;
    }
    auto acc = mConfig.mode == Mode::KnownF ? sink_check(mView, mConfig.f) : core_check(mView);
    if (!acc)
    {
        return fx;
    }
    mAcceptance = acc;
    fx.accepted = acc;
    auto members = acc->members();
    if (!members.contains(mId))
    {
        mAwaitingReplies = true;
        for (auto j : members)
        {
            fx.sends.emplace_back(j, GetDecidedVal{});
        }
        return fx;
    }
    std::size_t fInner = mConfig.f;
    if (mConfig.mode == Mode::UnknownF)
    {
        fInner = mConfig.fInnerRule == FInnerRule::Y ? *acc->y : (members.size() - 1) / 3;
    }
    try
    {
        mInner = std::make_unique<InnerConsensus>(mId, members, fInner, mConfig.proposal,
                                                  mConfig.valid, mConfig.innerTimeout,
                                                  mAuthority, mKey);
    }
    catch (ConfigurationError const& e)
    {
        fx.configError = e.what();
        return fx;
    }
    fx.append(absorb(mInner->start()));
    auto backlog = std::move(mInnerBacklog);
    mInnerBacklog.clear();
    for (auto const& [from, m] : backlog)
    {
        fx.append(absorb(mInner->on_message(from, m)));
    }
    return fx;
}

Effects
Process::on_message(ProcessId from, Message const& m)
{
    Effects fx;
    std::visit(
        [&](auto const& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, GetPDs>)
            {
                fx.sends.emplace_back(from, SetPDs{mView.s_pd()});
            }
            else if constexpr (std::is_same_v<T, SetPDs>)
            {
                if (mView.merge(from, msg.pds, mAuthority))
                {
                    fx.append(evaluate());
                }
            }
            else if constexpr (std::is_same_v<T, GetDecidedVal>)
            {
                if (mDecided)
                {
                    fx.sends.emplace_back(from, DecidedVal{*mDecided});
                }
                else
                {
                    mPendingRequests.push_back(from);
                }
            }
            else if constexpr (std::is_same_v<T, DecidedVal>)
            {
                if (!mAwaitingReplies || mDecided || !mAcceptance->members().contains(from))
                {
                    return;
                }
                auto& senders = mReplies[msg.val];
                senders.insert(from);
                if (senders.size() >= decided_reply_quorum(mAcceptance->members().size()))
                {
                    fx.append(decide(msg.val));
                }
            }
            else
            {
                if (mInner)
                {
                    fx.append(absorb(mInner->on_message(from, m)));
                }
                else
                {
                    mInnerBacklog.emplace_back(from, m);
                }
            }
        },
        m);
    return fx;
}

} // namespace bftcup
