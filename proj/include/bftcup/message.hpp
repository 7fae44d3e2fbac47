#pragma once

#include "bftcup/auth.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace bftcup {

using View = std::uint64_t;

struct GetPDs
{
};

struct SetPDs
{
    std::set<SignedPD> pds;
};

struct GetDecidedVal
{
};

struct DecidedVal
{
    Value val;
};

struct InnerVote
{
    View view = 0;
    std::string valDigest;
    Authenticator auth;
};

struct Certificate
{
    View view = 0;
    Value value;
    std::vector<InnerVote> votes;
};

struct InnerViewChange
{
    View view = 0;
    std::optional<Certificate> locked;
    Authenticator auth;
};

struct InnerPropose
{
    View view = 0;
    Value val;
    Authenticator auth;
    // View changes that entitle the leader of a view > 0 to propose.
    std::vector<InnerViewChange> justification;
};

struct InnerCommit
{
    View view = 0;
    Certificate certificate;
};

// A decided member's answer to a view change from a member still running.
struct InnerDecided
{
    Value val;
};

using Message = std::variant<GetPDs, SetPDs, GetDecidedVal, DecidedVal, InnerPropose, InnerVote,
                             InnerCommit, InnerViewChange, InnerDecided>;

std::string kind_of(Message const& m);

/// Full canonical text of a message, used for digests.
std::string encode(Message const& m);

/// Short one-line form for trace files.
std::string summarize(Message const& m);

// Signed payload texts for the inner consensus.
std::string propose_payload(View view, Value const& val);
std::string vote_payload(View view, std::string const& valDigest);
std::string view_change_payload(View view, std::optional<Certificate> const& locked);

} // namespace bftcup
