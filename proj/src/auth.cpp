#include "bftcup/auth.hpp"

#include <sodium.h>

#include <algorithm>

namespace bftcup {

void
ensure_sodium()
{
    static bool const ready = [] {
        if (sodium_init() < 0)
        {
            throw std::runtime_error("libsodium initialisation failed");
        }
        return true;
    }();
    (void)ready;
}

SigningAuthority::SigningAuthority(std::uint64_t seed) : mSeed(seed)
{
    ensure_sodium();
}

KeyHandle
SigningAuthority::issue(ProcessId owner)
{
    auto it = std::find(mOwners.begin(), mOwners.end(), owner);
    if (it != mOwners.end())
    {
        return KeyHandle(owner, static_cast<std::uint64_t>(it - mOwners.begin()));
    }
    // Key material derived from (seed, owner) so runs replay bit-identically.
    std::array<std::uint8_t, 32> key{};
    std::string material = "bftcup-key:" + std::to_string(mSeed) + ":" + std::to_string(owner);
    crypto_generichash(key.data(), key.size(),
                       reinterpret_cast<unsigned char const*>(material.data()), material.size(),
                       nullptr, 0);
    mOwners.push_back(owner);
    mKeys.push_back(key);
    return KeyHandle(owner, mOwners.size() - 1);
}

Tag
SigningAuthority::mac(std::size_t keyIndex, ProcessId owner, std::string_view payload) const
{
    std::string message = std::to_string(owner) + '|';
    message.append(payload);
    Tag out{};
    crypto_generichash(out.data(), out.size(),
                       reinterpret_cast<unsigned char const*>(message.data()), message.size(),
                       mKeys[keyIndex].data(), mKeys[keyIndex].size());
    return out;
}

Authenticator
SigningAuthority::sign(KeyHandle const& key, ProcessId owner, std::string_view payload) const
{
    if (key.mOwner != owner || key.mSerial >= mOwners.size() || mOwners[key.mSerial] != owner)
    {
        throw AuthorityViolation("key handle of " + std::to_string(key.mOwner) +
                                 " used to sign for " + std::to_string(owner));
    }
    return Authenticator{owner, mac(key.mSerial, owner, payload)};
}

bool
SigningAuthority::verify(std::string_view payload, Authenticator const& auth) const
{
    auto it = std::find(mOwners.begin(), mOwners.end(), auth.owner);
    if (it == mOwners.end())
    {
        return false;
    }
    auto expected = mac(static_cast<std::size_t>(it - mOwners.begin()), auth.owner, payload);
    return sodium_memcmp(expected.data(), auth.tag.data(), expected.size()) == 0;
}

std::string
canonical_pd(ProcessId owner, ProcessSet const& pd)
{
    return "pd:" + std::to_string(owner) + ":" + to_string(pd);
}

SignedPD
sign_pd(SigningAuthority const& authority, KeyHandle const& key, ProcessId owner,
        ProcessSet const& pd)
{
    if (pd.contains(owner))
    {
        throw InvalidArgument("sign_pd: owner " + std::to_string(owner) + " listed in own pd");
    }
    return SignedPD{owner, pd, authority.sign(key, owner, canonical_pd(owner, pd))};
}

bool
verify_pd(SigningAuthority const& authority, SignedPD const& rec)
{
    return rec.auth.owner == rec.owner && !rec.pd.contains(rec.owner) &&
           authority.verify(canonical_pd(rec.owner, rec.pd), rec.auth);
}

std::string
to_hex(Tag const& tag)
{
    std::string out(tag.size() * 2 + 1, '\0');
    sodium_bin2hex(out.data(), out.size(), tag.data(), tag.size());
    out.pop_back();
    return out;
}

std::string
hex_digest(std::string_view data)
{
    ensure_sodium();
    Tag out{};
    crypto_generichash(out.data(), out.size(), reinterpret_cast<unsigned char const*>(data.data()),
                       data.size(), nullptr, 0);
    return to_hex(out);
}

} // namespace bftcup
