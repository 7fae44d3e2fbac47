#pragma once

// A process's local knowledge during discovery, and the waiting conditions
// evaluated against it.

#include "bftcup/auth.hpp"
#include "bftcup/kgraph.hpp"

#include <optional>
#include <set>

namespace bftcup {

class LocalView
{
public:
    LocalView(ProcessId self, ProcessSet pdSelf, SignedPD own);

    ProcessId self_id() const { return mSelf; }
    ProcessSet const& pd_self() const { return mPdSelf; }
    std::set<SignedPD> const& s_pd() const { return mSPD; }
    ProcessSet const& s_known() const { return mSKnown; }
    ProcessSet const& s_received() const { return mSReceived; }

    /// Handles a SetPDs payload from `from`. The whole payload is ignored
    /// unless it carries a verifying record owned by `from`; otherwise every
    /// verifying record is merged. Returns true when the view grew.
    bool merge(ProcessId from, std::set<SignedPD> const& pds, SigningAuthority const& authority);

    /// Vertices s_known and s_received; edges from every held record plus
    /// self -> pd_self.
    KnowledgeGraph graph() const;

private:
    ProcessId mSelf;
    ProcessSet mPdSelf;
    std::set<SignedPD> mSPD;
    ProcessSet mSKnown;
    ProcessSet mSReceived;
};

struct Acceptance
{
    ProcessSet r;
    ProcessSet kStar;
    std::optional<std::size_t> y;

    ProcessSet members() const { return set_union(r, kStar); }
    bool operator==(Acceptance const&) const = default;
};

/// Known-f waiting condition: the first R (by decreasing size, then
/// lexicographic) within s_received with kappa(R) >= f+1 and at most f
/// outside vertices reached from every member of R by more than f disjoint
/// paths.
std::optional<Acceptance> sink_check(LocalView const& view, std::size_t f);

/// Unknown-f waiting condition: the smallest y admitting an R as above with
/// y in place of f; ties go to the first R in the same order.
std::optional<Acceptance> core_check(LocalView const& view);

} // namespace bftcup
