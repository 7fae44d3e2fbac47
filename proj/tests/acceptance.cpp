// Acceptance suite: one PASS/FAIL line per criterion.

#include "bftcup/generator.hpp"
#include "bftcup/harness.hpp"
#include "bftcup/inner.hpp"
#include "bftcup/view.hpp"
#include "support/brute_force.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace bftcup;
using Kind = Strategy::Kind;

namespace {

struct Outcome
{
    bool ok = true;
    std::string detail;
};

int failures = 0;

void
criterion(int number, std::string const& title, double limitSeconds, std::function<Outcome()> body)
{
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try
    {
        out = body();
    }
    catch (std::exception const& e)
    {
        out = {false, std::string("exception: ") + e.what()};
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > limitSeconds)
    {
        out.ok = false;
        out.detail += " (over the " + std::to_string(static_cast<int>(limitSeconds)) + " s limit)";
    }
    failures += out.ok ? 0 : 1;
    std::printf("%s %d %s: %s [%.2f s]\n", out.ok ? "PASS" : "FAIL", number, title.c_str(),
                out.detail.c_str(), elapsed);
    std::fflush(stdout);
}

std::vector<Kind> const kDiscoveryPool{Kind::Silent, Kind::Crash, Kind::FakePD, Kind::EquivocatePD};

// n in [3f+1, 12], f in {1, 2}, both drawn from the seed.
GeneratorParams
params_for(std::uint64_t seed, GraphModel model)
{
    Rng rng(seed * 7919 + 1);
    std::size_t f = 1 + rng.below(2);
    std::size_t lo = model == GraphModel::CupOnly ? 4 * f + 4 : 3 * f + 1;
    GeneratorParams p;
    p.f = f;
    p.n = rng.between(lo, 12);
    p.model = model;
    return p;
}

bool
all_accepted(Verdict const& v)
{
    for (auto const& [id, o] : v.perProcess)
    {
        if (!o.acceptTime)
        {
            return false;
        }
    }
    return true;
}

Outcome
flow_oracle()
{
    Rng rng(2024);
    std::size_t pairs = 0, mismatches = 0;
    for (int round = 0; round < 200; ++round)
    {
        auto g = oracle::random_digraph(2 + rng.below(7), 0.15 + 0.1 * static_cast<double>(rng.below(8)), rng);
        for (auto s : g.vertices())
        {
            for (auto t : g.vertices())
            {
                if (s != t)
                {
                    ++pairs;
                    mismatches += disjoint_paths(g, s, t) != oracle::brute_disjoint_paths(g, s, t);
                }
            }
        }
        std::vector<ProcessId> ids(g.vertices().begin(), g.vertices().end());
        for (int trial = 0; trial < 4; ++trial)
        {
            rng.shuffle(ids);
            auto split = 1 + rng.below(ids.size() - 1);
            ProcessSet a(ids.begin(), ids.begin() + split), b(ids.begin() + split, ids.end());
            auto k = rng.below(4);
            mismatches += implies_k(g, a, b, k) != oracle::brute_implies(g, a, b, k);
        }
    }
    return {mismatches == 0, std::to_string(pairs) + " vertex pairs and 800 implication queries, " +
                                 std::to_string(mismatches) + " mismatches"};
}

Outcome
validator_truth_table()
{
    bool complete = check_bft_cup(graphs::complete(4), {4}, 1).verdict;
    bool bridged = check_bft_cup(graphs::bridged_clusters(), {4}, 1).verdict;
    bool osr = is_k_osr(graphs::two_cores(), 1).verdict;
    auto [ext, cert] = is_extended_k_osr(graphs::two_cores(), 1);
    bool ok = complete && !bridged && osr && !ext.verdict &&
              ext.failedClause == FailedClause::CoreNotUnique;
    std::ostringstream d;
    d << "complete4=" << complete << " twoClusters=" << bridged << " ab.1osr=" << osr
      << " ab.extended=" << ext.verdict << " (" << to_string(ext.failedClause) << ")";
    return {ok, d.str()};
}

Outcome
generator_soundness()
{
    std::size_t bad = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
        auto p = params_for(seed, GraphModel::Cup);
        auto g = generate(p, seed);
        bad += !check_bft_cup(g.graph, g.faulty, g.f).verdict;

        p = params_for(seed, GraphModel::Cupft);
        g = generate(p, seed);
        bad += !check_bft_cupft(g.graph, g.faulty, g.f).verdict;

        p = params_for(seed, GraphModel::CupOnly);
        g = generate(p, seed);
        auto ft = check_bft_cupft(g.graph, g.faulty, g.f);
        bad += !check_bft_cup(g.graph, g.faulty, g.f).verdict || ft.verdict ||
               ft.failedClause != FailedClause::CoreNotUnique;
    }
    return {bad == 0, "300 graphs, " + std::to_string(bad) + " misclassified"};
}

Outcome
known_f_runs()
{
    std::size_t bad = 0;
    std::vector<std::uint64_t> failed;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
        auto g = generate(params_for(seed, GraphModel::Cup), seed);
        auto v = run(scenario_from_generated(g, Mode::KnownF, seed, kDiscoveryPool)).verdict;
        if (v.concordance != true || !all_accepted(v))
        {
            ++bad;
            failed.push_back(seed);
        }
    }
    std::string detail = std::to_string(100 - bad) + "/100 runs concordant and accepted";
    for (auto s : failed)
    {
        detail += " " + std::to_string(s);
    }
    return {bad == 0, detail};
}

Outcome
unknown_f_runs()
{
    std::size_t concordant = 0, consensus = 0, agreement = 0, passed = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
        auto g = generate(params_for(seed, GraphModel::Cupft), seed);
        auto v = run(scenario_from_generated(g, Mode::UnknownF, seed, kDiscoveryPool)).verdict;
        concordant += v.concordance == true;
        consensus += v.validity && v.agreement && v.termination;
        agreement += v.agreement;
        passed += v.passed();
    }
    std::ostringstream d;
    d << passed << "/100 runs pass; core concordance " << concordant << "/100, validity+agreement+termination "
      << consensus << "/100, agreement alone " << agreement << "/100";
    return {passed == 100, d.str()};
}

Outcome
impossibility()
{
    Scenario s;
    s.graph = graphs::two_cores();
    s.mode = Mode::UnknownF;
    s.f = 0;
    s.fInnerRule = FInnerRule::FloorThird;
    s.gst = 1000000;
    s.preGstRule.kind = DelayRuleSpec::Kind::ClusterPartition;
    s.preGstRule.groups = {{1, 2, 3}, {4, 5, 6, 7, 8}};
    s.preGstRule.slowDelay = 2000000;
    s.seed = 7;

    auto a = run(s).verdict;
    auto b = run(s).verdict;
    std::set<ProcessSet> cores;
    for (auto const& rec : a.acceptanceLog)
    {
        if (rec.r.contains(rec.process))
        {
            cores.insert(rec.r);
        }
    }
    bool disjoint = cores.size() == 2 && set_intersection(*cores.begin(), *cores.rbegin()).empty();
    auto values = a.decided_values();
    bool ok = !a.agreement && values.size() == 2 && disjoint && a == b;
    std::ostringstream d;
    d << "agreement=" << a.agreement << " values=" << values.size() << " selfCores=" << cores.size()
      << " disjoint=" << disjoint << " repeatable=" << (a == b);
    return {ok, d.str()};
}

Outcome
inner_equivocation()
{
    bool quorumOk = true;
    for (std::size_t n = 1; n <= 13; ++n)
    {
        for (std::size_t fi = 0; 3 * fi + 1 <= n; ++fi)
        {
            quorumOk = quorumOk && inner_quorum(n, fi) == (n + fi + 2) / 2;
        }
    }
    quorumOk = quorumOk && inner_quorum(4, 1) == 3;

    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
    {
        Scenario s;
        s.graph = graphs::complete(4);
        s.mode = Mode::KnownF;
        s.f = 1;
        s.faulty[1] = {Strategy{Kind::InnerEquivocate}};
        s.seed = seed;
        auto v = run(s).verdict;
        good += v.agreement && v.termination;
    }
    return {quorumOk && good == 50,
            "quorum formula " + std::string(quorumOk ? "holds" : "violated") + ", " +
                std::to_string(good) + "/50 seeds agree and terminate"};
}

Outcome
determinism()
{
    std::size_t same = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        auto model = seed % 2 ? GraphModel::Cup : GraphModel::Cupft;
        auto mode = seed % 2 ? Mode::KnownF : Mode::UnknownF;
        auto g = generate(params_for(seed, model), seed);
        auto s = scenario_from_generated(g, mode, seed,
                                         {Kind::Silent, Kind::Crash, Kind::FakePD, Kind::EquivocatePD,
                                          Kind::InnerEquivocate, Kind::FollowProtocol});
        auto a = run(s).verdict;
        auto b = run(s).verdict;
        same += a == b && a.traceDigest == b.traceDigest && !a.traceDigest.empty();
    }
    return {same == 20, std::to_string(same) + "/20 scenarios reproduce digest and verdict"};
}

Outcome
literal_guards()
{
    SigningAuthority authority(11);
    std::map<ProcessId, KeyHandle> keys;
    auto pd = [&](ProcessId p, ProcessSet const& s) {
        if (!keys.contains(p))
        {
            keys.emplace(p, authority.issue(p));
        }
        return sign_pd(authority, keys.at(p), p, s);
    };

    Rng rng(99);
    std::size_t guardViolations = 0, sizeViolations = 0, accepted = 0;
    for (int round = 0; round < 200; ++round)
    {
        auto g = oracle::random_digraph(2 + rng.below(7), 0.6, rng);
        std::vector<ProcessId> ids(g.vertices().begin(), g.vertices().end());
        auto self = rng.pick(ids);
        LocalView view(self, g.successors(self), pd(self, g.successors(self)));

        // Messages whose sender record is missing or forged.
        auto sender = rng.pick(ids);
        if (sender != self)
        {
            std::set<SignedPD> records;
            for (auto o : ids)
            {
                if (o != sender && o != self)
                {
                    records.insert(pd(o, g.successors(o)));
                }
            }
            auto before = view.s_pd();
            auto knownBefore = view.s_known();
            bool grew = view.merge(sender, records, authority);
            auto forged = pd(sender, g.successors(sender));
            forged.pd.insert(1000);
            records.insert(forged);
            grew = view.merge(sender, records, authority) || grew;
            guardViolations += grew || view.s_pd() != before || view.s_known() != knownBefore;
        }

        for (auto o : ids)
        {
            if (o != self && rng.chance(0.8))
            {
                view.merge(o, {pd(o, g.successors(o))}, authority);
            }
        }
        for (std::size_t f = 0; f <= 3; ++f)
        {
            if (auto acc = sink_check(view, f))
            {
                ++accepted;
                sizeViolations += acc->r.size() < f + 2;
            }
        }
    }
    LocalView lonely(1, {2}, pd(1, {2}));
    sizeViolations += sink_check(lonely, 0).has_value();

    std::ostringstream d;
    d << "guard violations " << guardViolations << ", undersized acceptances " << sizeViolations << " of "
      << accepted;
    return {guardViolations == 0 && sizeViolations == 0 && accepted > 0, d.str()};
}

} // namespace

int
main()
{
    criterion(1, "flow oracle equivalence", 10, flow_oracle);
    criterion(2, "validator truth table", 1, validator_truth_table);
    criterion(3, "generator soundness", 60, generator_soundness);
    criterion(4, "known-f sink discovery", 300, known_f_runs);
    criterion(5, "unknown-f core discovery and consensus", 300, unknown_f_runs);
    criterion(6, "two-core impossibility regression", 10, impossibility);
    criterion(7, "inner consensus under an equivocating leader", 30, inner_equivocation);
    criterion(8, "determinism", 60, determinism);
    criterion(9, "literal discovery guards", 30, literal_guards);
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
