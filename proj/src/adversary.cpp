#include "bftcup/adversary.hpp"

#include "bftcup/rng.hpp"

namespace bftcup {

namespace {

struct KindName
{
    Strategy::Kind kind;
    char const* name;
};

constexpr KindName kKindNames[] = {
    {Strategy::Kind::Silent, "silent"},
    {Strategy::Kind::Crash, "crash"},
    {Strategy::Kind::FakePD, "fakePD"},
    {Strategy::Kind::EquivocatePD, "equivocatePD"},
    {Strategy::Kind::InnerEquivocate, "innerEquivocate"},
    {Strategy::Kind::FollowProtocol, "followProtocol"},
};

} // namespace

std::string
to_string(Strategy::Kind k)
{
    for (auto const& e : kKindNames)
    {
        if (e.kind == k)
        {
            return e.name;
        }
    }
    return "unknown";
}

Strategy::Kind
parse_strategy_kind(std::string const& s)
{
    for (auto const& e : kKindNames)
    {
        if (s == e.name)
        {
            return e.kind;
        }
    }
    throw InvalidArgument("unknown strategy '" + s + "'");
}

ByzantineProcess::ByzantineProcess(ProcessId id, ProcessSet truePd, ProcessSet const& everyone,
                                   StrategyList strategies, ProcessConfig config,
                                   Value alternative, SigningAuthority const& authority,
                                   KeyHandle key, std::uint64_t seed)
    : mId(id), mAuthority(authority), mKey(key), mAlternative(std::move(alternative))
{
    auto others = everyone;
    others.erase(id);
    mClaimed = std::move(truePd);
    Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (id + 1)));
    for (auto const& s : strategies)
    {
        switch (s.kind)
        {
        case Strategy::Kind::Silent:
            mSilent = true;
            break;
        case Strategy::Kind::Crash:
            mCrashAt = mCrashAt ? std::min(*mCrashAt, s.at) : s.at;
            break;
        case Strategy::Kind::FakePD:
            mClaimed = s.claimedPd ? *s.claimedPd : others;
            mClaimed.erase(id);
            break;
        case Strategy::Kind::EquivocatePD:
            mPerReceiver = s.perReceiver;
            if (mPerReceiver.empty())
            {
                for (auto r : others)
                {
                    ProcessSet claim;
                    for (auto v : others)
                    {
                        if (rng.chance(0.5))
                        {
                            claim.insert(v);
                        }
                    }
                    mPerReceiver[r] = claim;
                }
            }
            for (auto& [r, claim] : mPerReceiver)
            {
                claim.erase(id);
            }
            break;
        case Strategy::Kind::InnerEquivocate:
            mInnerEquivocate = true;
            break;
        case Strategy::Kind::FollowProtocol:
            break;
        }
    }
    for (auto const& [r, claim] : mPerReceiver)
    {
        mEquivocalRecords.emplace(r, sign_pd(authority, key, id, claim));
    }
    mBody = std::make_unique<Process>(id, mClaimed, std::move(config), authority, key);
}

Effects
ByzantineProcess::filter(Tick now, Effects fx)
{
    if (mSilent || (mCrashAt && now >= *mCrashAt))
    {
        return {};
    }
    for (auto& [to, m] : fx.sends)
    {
        if (auto* set = std::get_if<SetPDs>(&m))
        {
            if (auto it = mEquivocalRecords.find(to); it != mEquivocalRecords.end())
            {
                std::erase_if(set->pds, [this](SignedPD const& r) { return r.owner == mId; });
                set->pds.insert(it->second);
            }
        }
        else if (auto* p = std::get_if<InnerPropose>(&m); p && mInnerEquivocate)
        {
            // The upper half of the members (by id) is shown the alternative.
            auto const* inner = mBody->inner();
            if (!inner)
            {
                continue;
            }
            auto const& members = inner->members();
            auto rank = static_cast<std::size_t>(
                std::distance(members.begin(), members.find(to)));
            if (rank >= members.size() / 2)
            {
                p->val = p->val == mAlternative ? mAlternative + "'" : mAlternative;
                p->auth = mAuthority.sign(mKey, mId, propose_payload(p->view, p->val));
            }
        }
    }
    return fx;
}

Effects
ByzantineProcess::start(Tick now)
{
    if (mSilent)
    {
        return {};
    }
    return filter(now, mBody->start());
}

Effects
ByzantineProcess::on_timer(Tick now, std::uint64_t tag)
{
    if (mSilent)
    {
        return {};
    }
    return filter(now, mBody->on_timer(tag));
}

Effects
ByzantineProcess::on_message(Tick now, ProcessId from, Message const& m)
{
    if (mSilent)
    {
        return {};
    }
    return filter(now, mBody->on_message(from, m));
}

} // namespace bftcup
