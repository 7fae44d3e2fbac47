#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bftcup {

// Process identifiers are unique but not necessarily consecutive.
using ProcessId = std::uint32_t;
using ProcessSet = std::set<ProcessId>;

// Abstract simulation time.
using Tick = std::uint64_t;

// A proposal / decision value.
using Value = std::string;

class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

std::string to_string(ProcessSet const& s);

inline bool
is_subset(ProcessSet const& a, ProcessSet const& b)
{
    for (auto v : a)
    {
        if (!b.count(v))
        {
            return false;
        }
    }
    return true;
}

ProcessSet set_union(ProcessSet const& a, ProcessSet const& b);
ProcessSet set_difference(ProcessSet const& a, ProcessSet const& b);
ProcessSet set_intersection(ProcessSet const& a, ProcessSet const& b);

} // namespace bftcup
