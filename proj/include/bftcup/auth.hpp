#pragma once

// Simulated signing authority. Each owner gets a secret key held only by the
// authority; an authenticator is a keyed BLAKE2b tag over (owner, payload).
// Callers outside the authority see key handles, never key material, so a
// tag for a correct owner can only come from that owner's handle.

#include "bftcup/types.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bftcup {

using Tag = std::array<std::uint8_t, 32>;

class AuthorityViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

struct Authenticator
{
    ProcessId owner = 0;
    Tag tag{};

    auto operator<=>(Authenticator const&) const = default;
};

class SigningAuthority;

class KeyHandle
{
public:
    ProcessId owner() const { return mOwner; }

private:
    friend class SigningAuthority;
    KeyHandle(ProcessId owner, std::uint64_t serial) : mOwner(owner), mSerial(serial) {}

    ProcessId mOwner;
    std::uint64_t mSerial;
};

class SigningAuthority
{
public:
    explicit SigningAuthority(std::uint64_t seed = 0);

    /// Issues the handle for `owner`; repeated calls return equivalent handles.
    KeyHandle issue(ProcessId owner);

    Authenticator sign(KeyHandle const& key, ProcessId owner, std::string_view payload) const;
    bool verify(std::string_view payload, Authenticator const& auth) const;

private:
    Tag mac(std::size_t keyIndex, ProcessId owner, std::string_view payload) const;

    std::uint64_t mSeed;
    std::vector<ProcessId> mOwners;
    std::vector<std::array<std::uint8_t, 32>> mKeys;
};

struct SignedPD
{
    ProcessId owner = 0;
    ProcessSet pd;
    Authenticator auth;

    auto operator<=>(SignedPD const&) const = default;
};

std::string canonical_pd(ProcessId owner, ProcessSet const& pd);

SignedPD sign_pd(SigningAuthority const& authority, KeyHandle const& key, ProcessId owner,
                 ProcessSet const& pd);
bool verify_pd(SigningAuthority const& authority, SignedPD const& rec);

void ensure_sodium();

/// Unkeyed BLAKE2b-256 digest, hex encoded.
std::string hex_digest(std::string_view data);
std::string to_hex(Tag const& tag);

} // namespace bftcup
