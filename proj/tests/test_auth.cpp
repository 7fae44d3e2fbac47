#include "doctest.h"

#include "bftcup/auth.hpp"

using namespace bftcup;

TEST_CASE("signed PD records")
{
    SigningAuthority authority(1);
    auto k1 = authority.issue(1);
    auto k2 = authority.issue(2);

    auto rec = sign_pd(authority, k1, 1, {2, 3});
    CHECK(verify_pd(authority, rec));

    SUBCASE("payload binding")
    {
        auto bent = rec;
        bent.pd.insert(4);
        CHECK_FALSE(verify_pd(authority, bent));
        bent = rec;
        bent.owner = 2;
        CHECK_FALSE(verify_pd(authority, bent));
    }
    SUBCASE("ownership")
    {
        // Process 2 signs a claim and relabels it as process 1's record.
        auto other = sign_pd(authority, k2, 2, {3});
        SignedPD forged{1, {3}, other.auth};
        CHECK_FALSE(verify_pd(authority, forged));
        forged.auth.owner = 1;
        CHECK_FALSE(verify_pd(authority, forged));
    }
    SUBCASE("key misuse is a harness error")
    {
        CHECK_THROWS_AS(sign_pd(authority, k2, 1, {3}), AuthorityViolation);
        CHECK_THROWS_AS(sign_pd(authority, k1, 1, {1, 2}), InvalidArgument);
    }
    SUBCASE("equal payloads sign equally, distinct payloads are all valid")
    {
        CHECK(sign_pd(authority, k1, 1, {2, 3}) == rec);
        auto alt = sign_pd(authority, k1, 1, {5});
        CHECK(verify_pd(authority, alt));
        CHECK(alt.auth.tag != rec.auth.tag);
    }
    SUBCASE("records do not verify under another authority")
    {
        SigningAuthority other(2);
        other.issue(1);
        CHECK_FALSE(verify_pd(other, rec));
    }
    SUBCASE("unknown owner")
    {
        SignedPD stray{9, {1}, Authenticator{9, {}}};
        CHECK_FALSE(verify_pd(authority, stray));
    }
}

TEST_CASE("reissued handles sign identically")
{
    SigningAuthority authority(5);
    auto a = authority.issue(3);
    auto b = authority.issue(3);
    CHECK(authority.sign(a, 3, "x") == authority.sign(b, 3, "x"));
    CHECK(authority.verify("x", authority.sign(a, 3, "x")));
    CHECK_FALSE(authority.verify("y", authority.sign(a, 3, "x")));
}

TEST_CASE("hex digest")
{
    CHECK(hex_digest("abc").size() == 64);
    CHECK(hex_digest("abc") == hex_digest("abc"));
    CHECK(hex_digest("abc") != hex_digest("abd"));
}
