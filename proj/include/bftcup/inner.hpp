#pragma once

// Single-shot leader-based Byzantine agreement among a fixed member set.
// Views start at 0 and the leader of view v is the (v mod |S|)-th smallest
// member. A proposal gathers a quorum of signed votes into a certificate,
// members lock it and broadcast commits, and a quorum of commits for one
// certificate decides. View changes carry the sender's highest lock and the
// next leader must re-propose the highest lock it was shown.

#include "bftcup/message.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bftcup {

using ValidPredicate = std::function<bool(Value const&)>;

class ConfigurationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// ceil((n + fInner + 1) / 2)
std::size_t inner_quorum(std::size_t n, std::size_t fInner);

struct InnerEffects
{
    std::vector<std::pair<ProcessId, Message>> sends;
    // (view, delay) timers to arm.
    std::vector<std::pair<View, Tick>> timers;
    std::optional<Value> decided;
};

class InnerConsensus
{
public:
    /// Throws ConfigurationError when self is not a member or
    /// |members| < 3 fInner + 1.
    InnerConsensus(ProcessId self, ProcessSet members, std::size_t fInner, Value proposal,
                   ValidPredicate valid, Tick baseTimeout, SigningAuthority const& authority,
                   KeyHandle key);

    InnerEffects start();
    InnerEffects on_message(ProcessId from, Message const& m);
    InnerEffects on_timeout(View v);

    ProcessSet const& members() const { return mMembers; }
    std::size_t quorum() const { return mQuorum; }
    std::size_t f_inner() const { return mFInner; }
    View view() const { return mView; }
    ProcessId leader(View v) const;
    std::optional<Value> const& decided() const { return mDecided; }
    std::optional<Certificate> const& locked() const { return mLocked; }
    Tick timeout_for(View v) const;

private:
    bool member(ProcessId p) const { return mMembers.contains(p); }
    bool valid_certificate(Certificate const& c) const;
    bool valid_view_change(ProcessId from, InnerViewChange const& vc) const;
    std::optional<Value> justified_value(View v, std::vector<InnerViewChange> const& just) const;

    void broadcast(InnerEffects& fx, Message const& m) const;
    void enter_view(InnerEffects& fx, View v, bool armTimer);
    void maybe_propose(InnerEffects& fx);
    void consider_proposal(InnerEffects& fx, InnerPropose const& p);
    void maybe_certify(InnerEffects& fx, View v, std::string const& digest);
    void adopt_lock(Certificate const& c);
    void count_commit(InnerEffects& fx, ProcessId from, InnerCommit const& c);

    ProcessId mSelf;
    ProcessSet mMembers;
    std::vector<ProcessId> mOrder;
    std::size_t mFInner;
    std::size_t mQuorum;
    Value mProposal;
    ValidPredicate mValid;
    Tick mBaseTimeout;
    SigningAuthority const& mAuthority;
    KeyHandle mKey;

    View mView = 0;
    bool mStarted = false;
    std::optional<Value> mDecided;
    std::optional<Certificate> mLocked;
    std::map<View, bool> mVoted;
    std::map<View, bool> mProposed;
    std::map<View, bool> mCommitSent;
    std::map<View, InnerPropose> mProposals;
    std::map<std::string, Value> mValues;
    std::map<std::pair<View, std::string>, std::map<ProcessId, InnerVote>> mVotes;
    std::map<std::pair<View, std::string>, std::map<ProcessId, Certificate>> mCommits;
    std::map<View, std::map<ProcessId, InnerViewChange>> mViewChanges;
    std::map<ProcessId, Value> mDecidedReports;
};

} // namespace bftcup
