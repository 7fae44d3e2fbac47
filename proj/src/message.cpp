#include "bftcup/message.hpp"

#include <sstream>

namespace bftcup {

namespace {

template <class... Fs>
struct Overload : Fs...
{
    using Fs::operator()...;
};

std::string
quote(std::string const& s)
{
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"' || c == '\\')
        {
            out += '\\';
        }
        out += c;
    }
    return out + '"';
}

void
put(std::ostream& os, Authenticator const& a)
{
    os << "auth(" << a.owner << ',' << to_hex(a.tag) << ')';
}

void
put(std::ostream& os, Certificate const& c)
{
    os << "cert(" << c.view << ',' << quote(c.value) << ",[";
    for (auto const& v : c.votes)
    {
        os << v.view << ':' << v.valDigest << ':';
        put(os, v.auth);
        os << ';';
    }
    os << "])";
}

void
put(std::ostream& os, InnerViewChange const& vc)
{
    os << "viewchange(" << vc.view << ',';
    if (vc.locked)
    {
        put(os, *vc.locked);
    }
    else
    {
        os << "none";
    }
    os << ',';
    put(os, vc.auth);
    os << ')';
}

} // namespace

std::string
kind_of(Message const& m)
{
    static char const* const names[] = {"GetPDs",    "SetPDs",    "GetDecidedVal", "DecidedVal",
                                        "InnerPropose", "InnerVote", "InnerCommit", "InnerViewChange", "InnerDecided"};
    return names[m.index()];
}

std::string
encode(Message const& m)
{
    std::ostringstream os;
    std::visit(Overload{
                   [&](GetPDs const&) { os << "GetPDs"; },
                   [&](SetPDs const& s) {
                       os << "SetPDs[";
                       for (auto const& r : s.pds)
                       {
                           os << r.owner << ':' << to_string(r.pd) << ':';
                           put(os, r.auth);
                           os << ';';
                       }
                       os << ']';
                   },
                   [&](GetDecidedVal const&) { os << "GetDecidedVal"; },
                   [&](DecidedVal const& d) { os << "DecidedVal(" << quote(d.val) << ')'; },
                   [&](InnerPropose const& p) {
                       os << "InnerPropose(" << p.view << ',' << quote(p.val) << ',';
                       put(os, p.auth);
                       os << ",[";
                       for (auto const& vc : p.justification)
                       {
                           put(os, vc);
                           os << ';';
                       }
                       os << "])";
                   },
                   [&](InnerVote const& v) {
                       os << "InnerVote(" << v.view << ',' << v.valDigest << ',';
                       put(os, v.auth);
                       os << ')';
                   },
                   [&](InnerCommit const& c) {
                       os << "InnerCommit(" << c.view << ',';
                       put(os, c.certificate);
                       os << ')';
                   },
                   [&](InnerViewChange const& vc) { put(os, vc); },
                   [&](InnerDecided const& d) { os << "InnerDecided(" << quote(d.val) << ')'; },
               },
               m);
    return os.str();
}

std::string
summarize(Message const& m)
{
    std::ostringstream os;
    std::visit(Overload{
                   [&](GetPDs const&) { os << "GetPDs"; },
                   [&](SetPDs const& s) {
                       os << "SetPDs owners={";
                       bool first = true;
                       for (auto const& r : s.pds)
                       {
                           os << (first ? "" : ",") << r.owner;
                           first = false;
                       }
                       os << '}';
                   },
                   [&](GetDecidedVal const&) { os << "GetDecidedVal"; },
                   [&](DecidedVal const& d) { os << "DecidedVal " << quote(d.val); },
                   [&](InnerPropose const& p) {
                       os << "InnerPropose view=" << p.view << " val=" << quote(p.val);
                   },
                   [&](InnerVote const& v) {
                       os << "InnerVote view=" << v.view << " digest=" << v.valDigest.substr(0, 12);
                   },
                   [&](InnerCommit const& c) {
                       os << "InnerCommit view=" << c.view << " val=" << quote(c.certificate.value);
                   },
                   [&](InnerViewChange const& vc) {
                       os << "InnerViewChange view=" << vc.view
                          << " locked=" << (vc.locked ? std::to_string(vc.locked->view) : "none");
                   },
                   [&](InnerDecided const& d) { os << "InnerDecided " << quote(d.val); },
               },
               m);
    return os.str();
}

std::string
propose_payload(View view, Value const& val)
{
    return "propose|" + std::to_string(view) + "|" + val;
}

std::string
vote_payload(View view, std::string const& valDigest)
{
    return "vote|" + std::to_string(view) + "|" + valDigest;
}

std::string
view_change_payload(View view, std::optional<Certificate> const& locked)
{
    std::string out = "viewchange|" + std::to_string(view) + "|";
    if (locked)
    {
        out += std::to_string(locked->view) + "|" + hex_digest(locked->value);
    }
    else
    {
        out += "none";
    }
    return out;
}

} // namespace bftcup
