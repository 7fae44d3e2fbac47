#include "bftcup/inner.hpp"

#include <algorithm>

namespace bftcup {

std::size_t
inner_quorum(std::size_t n, std::size_t fInner)
{
    return (n + fInner + 1 + 1) / 2;
}

InnerConsensus::InnerConsensus(ProcessId self, ProcessSet members, std::size_t fInner,
                               Value proposal, ValidPredicate valid, Tick baseTimeout,
                               SigningAuthority const& authority, KeyHandle key)
    : mSelf(self),
      mMembers(std::move(members)),
      mOrder(mMembers.begin(), mMembers.end()),
      mFInner(fInner),
      mQuorum(inner_quorum(mMembers.size(), fInner)),
      mProposal(std::move(proposal)),
      mValid(std::move(valid)),
      mBaseTimeout(std::max<Tick>(1, baseTimeout)),
      mAuthority(authority),
      mKey(key)
{
    if (!member(self))
    {
        throw ConfigurationError("inner consensus: " + std::to_string(self) +
                                 " is not a member of " + to_string(mMembers));
    }
    if (mMembers.size() < 3 * fInner + 1)
    {
        throw ConfigurationError("inner consensus: |S|=" + std::to_string(mMembers.size()) +
                                 " < 3*" + std::to_string(fInner) + "+1 for S=" +
                                 to_string(mMembers));
    }
    if (!mValid)
    {
        mValid = [](Value const&) { return true; };
    }
}

ProcessId
InnerConsensus::leader(View v) const
{
    return mOrder[v % mOrder.size()];
}

Tick
InnerConsensus::timeout_for(View v) const
{
    return mBaseTimeout << std::min<View>(v, 20);
}

void
InnerConsensus::broadcast(InnerEffects& fx, Message const& m) const
{
    for (auto p : mOrder)
    {
        fx.sends.emplace_back(p, m);
    }
}

InnerEffects
InnerConsensus::start()
{
    InnerEffects fx;
    if (mStarted)
    {
        return fx;
    }
    mStarted = true;
    enter_view(fx, 0, true);
    return fx;
}

void
InnerConsensus::enter_view(InnerEffects& fx, View v, bool armTimer)
{
    mView = v;
    if (armTimer && !mDecided)
    {
        fx.timers.emplace_back(v, timeout_for(v));
    }
    maybe_propose(fx);
    if (auto it = mProposals.find(v); it != mProposals.end())
    {
        auto p = it->second;
        consider_proposal(fx, p);
    }
    std::vector<std::string> digests;
    for (auto const& [key, votes] : mVotes)
    {
        if (key.first == v)
        {
            digests.push_back(key.second);
        }
    }
    for (auto const& d : digests)
    {
        maybe_certify(fx, v, d);
    }
}

void
InnerConsensus::maybe_propose(InnerEffects& fx)
{
    if (leader(mView) != mSelf || mProposed[mView])
    {
        return;
    }
    InnerPropose p;
    p.view = mView;
    if (mView == 0)
    {
        p.val = mProposal;
    }
    else
    {
        auto const& vcs = mViewChanges[mView];
        if (vcs.size() < mQuorum)
        {
            return;
        }
        for (auto const& [from, vc] : vcs)
        {
            if (p.justification.size() == mQuorum)
            {
                break;
            }
            p.justification.push_back(vc);
        }
        std::optional<Certificate> highest;
        for (auto const& vc : p.justification)
        {
            if (vc.locked && (!highest || vc.locked->view > highest->view))
            {
                highest = vc.locked;
            }
        }
        p.val = highest ? highest->value : mProposal;
    }
    p.auth = mAuthority.sign(mKey, mSelf, propose_payload(p.view, p.val));
    mProposed[mView] = true;
    broadcast(fx, p);
}

bool
InnerConsensus::valid_certificate(Certificate const& c) const
{
    auto digest = hex_digest(c.value);
    ProcessSet voters;
    for (auto const& v : c.votes)
    {
        if (v.view != c.view || v.valDigest != digest || !member(v.auth.owner) ||
            voters.contains(v.auth.owner) ||
            !mAuthority.verify(vote_payload(v.view, v.valDigest), v.auth))
        {
            return false;
        }
        voters.insert(v.auth.owner);
    }
    return voters.size() >= mQuorum;
}

bool
InnerConsensus::valid_view_change(ProcessId from, InnerViewChange const& vc) const
{
    if (!member(from) || vc.auth.owner != from ||
        !mAuthority.verify(view_change_payload(vc.view, vc.locked), vc.auth))
    {
        return false;
    }
    return !vc.locked || (vc.locked->view < vc.view && valid_certificate(*vc.locked));
}

std::optional<Value>
InnerConsensus::justified_value(View v, std::vector<InnerViewChange> const& just) const
{
    // Returns the value the leader of v was bound to, the empty string when it
    // was free to choose, or nothing when the justification is invalid.
    ProcessSet senders;
    std::optional<Certificate> highest;
    for (auto const& vc : just)
    {
        auto from = vc.auth.owner;
        if (vc.view != v || senders.contains(from) || !valid_view_change(from, vc))
        {
            return std::nullopt;
        }
        senders.insert(from);
        if (vc.locked && (!highest || vc.locked->view > highest->view))
        {
            highest = vc.locked;
        }
    }
    if (senders.size() < mQuorum)
    {
        return std::nullopt;
    }
    return highest ? std::optional<Value>(highest->value) : std::optional<Value>(Value{});
}

void
InnerConsensus::consider_proposal(InnerEffects& fx, InnerPropose const& p)
{
    if (p.view != mView || mVoted[p.view] || !mValid(p.val))
    {
        return;
    }
    if (p.view > 0)
    {
        auto bound = justified_value(p.view, p.justification);
        if (!bound)
        {
            return;
        }
        bool free = std::none_of(p.justification.begin(), p.justification.end(),
                                 [](auto const& vc) { return vc.locked.has_value(); });
        if (!free && *bound != p.val)
        {
            return;
        }
    }
    auto digest = hex_digest(p.val);
    mValues[digest] = p.val;
    mVoted[p.view] = true;
    InnerVote vote{p.view, digest, mAuthority.sign(mKey, mSelf, vote_payload(p.view, digest))};
    broadcast(fx, vote);
    maybe_certify(fx, p.view, digest);
}

void
InnerConsensus::adopt_lock(Certificate const& c)
{
    if (!mLocked || c.view > mLocked->view)
    {
        mLocked = c;
    }
}

void
InnerConsensus::maybe_certify(InnerEffects& fx, View v, std::string const& digest)
{
    if (v != mView || mCommitSent[v])
    {
        return;
    }
    auto const& votes = mVotes[{v, digest}];
    auto value = mValues.find(digest);
    if (votes.size() < mQuorum || value == mValues.end())
    {
        return;
    }
    Certificate cert{v, value->second, {}};
    for (auto const& [voter, vote] : votes)
    {
        if (cert.votes.size() == mQuorum)
        {
            break;
        }
        cert.votes.push_back(vote);
    }
    adopt_lock(cert);
    mCommitSent[v] = true;
    broadcast(fx, InnerCommit{v, cert});
}

void
InnerConsensus::count_commit(InnerEffects& fx, ProcessId from, InnerCommit const& c)
{
    auto digest = hex_digest(c.certificate.value);
    adopt_lock(c.certificate);
    if (c.view == mView && !mCommitSent[c.view])
    {
        mValues[digest] = c.certificate.value;
        mCommitSent[c.view] = true;
        broadcast(fx, InnerCommit{c.view, c.certificate});
    }
    auto& commits = mCommits[{c.view, digest}];
    commits[from] = c.certificate;
    if (!mDecided && commits.size() >= mQuorum)
    {
        mDecided = c.certificate.value;
        fx.decided = mDecided;
    }
}

InnerEffects
InnerConsensus::on_message(ProcessId from, Message const& m)
{
    InnerEffects fx;
    if (!member(from))
    {
        return fx;
    }
    if (auto* p = std::get_if<InnerPropose>(&m))
    {
        if (from != leader(p->view) || p->auth.owner != from ||
            !mAuthority.verify(propose_payload(p->view, p->val), p->auth))
        {
            return fx;
        }
        if (p->view > mView)
        {
            mProposals.emplace(p->view, *p);
        }
        else
        {
            consider_proposal(fx, *p);
        }
    }
    else if (auto* v = std::get_if<InnerVote>(&m))
    {
        if (v->auth.owner != from ||
            !mAuthority.verify(vote_payload(v->view, v->valDigest), v->auth))
        {
            return fx;
        }
        mVotes[{v->view, v->valDigest}].emplace(from, *v);
        maybe_certify(fx, v->view, v->valDigest);
    }
    else if (auto* c = std::get_if<InnerCommit>(&m))
    {
        if (c->certificate.view != c->view || !valid_certificate(c->certificate))
        {
            return fx;
        }
        count_commit(fx, from, *c);
    }
    else if (auto* vc = std::get_if<InnerViewChange>(&m))
    {
        if (!valid_view_change(from, *vc))
        {
            return fx;
        }
        if (vc->locked)
        {
            adopt_lock(*vc->locked);
        }
        mViewChanges[vc->view].emplace(from, *vc);
        if (mDecided)
        {
            fx.sends.emplace_back(from, InnerDecided{*mDecided});
            return fx;
        }
        if (vc->view == mView)
        {
            maybe_propose(fx);
            return fx;
        }
        // Join a higher view once fInner+1 members have asked for it, which
        // also brings members that already decided back for laggards.
        std::map<ProcessId, View> highest;
        for (auto const& [view, senders] : mViewChanges)
        {
            if (view > mView)
            {
                for (auto const& [sender, change] : senders)
                {
                    highest[sender] = std::max(highest[sender], view);
                }
            }
        }
        std::vector<View> asked;
        for (auto const& [sender, view] : highest)
        {
            asked.push_back(view);
        }
        if (asked.size() > mFInner)
        {
            std::sort(asked.rbegin(), asked.rend());
            auto target = asked[mFInner];
            InnerViewChange own{target, mLocked,
                                mAuthority.sign(mKey, mSelf, view_change_payload(target, mLocked))};
            broadcast(fx, own);
            enter_view(fx, target, true);
        }
    }
    else if (auto* d = std::get_if<InnerDecided>(&m))
    {
        // fInner+1 matching reports include at least one correct member.
        mDecidedReports[from] = d->val;
        auto matching = std::count_if(mDecidedReports.begin(), mDecidedReports.end(),
                                      [&](auto const& r) { return r.second == d->val; });
        if (!mDecided && static_cast<std::size_t>(matching) > mFInner)
        {
            mDecided = d->val;
            fx.decided = mDecided;
        }
    }
    return fx;
}

InnerEffects
InnerConsensus::on_timeout(View v)
{
    InnerEffects fx;
    if (v != mView || mDecided)
    {
        return fx;
    }
    auto next = v + 1;
    InnerViewChange own{next, mLocked,
                        mAuthority.sign(mKey, mSelf, view_change_payload(next, mLocked))};
    broadcast(fx, own);
    enter_view(fx, next, true);
    return fx;
}

} // namespace bftcup
