#include "bftcup/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bftcup {

namespace {

ProcessId
parse_id(std::string_view token, std::size_t line)
{
    ProcessId id = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
    if (ec != std::errc{} || ptr != token.data() + token.size())
    {
        throw ParseError("line " + std::to_string(line) + ": bad process id '" +
                         std::string(token) + "'");
    }
    return id;
}

std::vector<std::string_view>
tokens(std::string_view text, std::string_view separators)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        auto start = text.find_first_not_of(separators, pos);
        if (start == std::string_view::npos)
        {
            break;
        }
        auto end = text.find_first_of(separators, start);
        if (end == std::string_view::npos)
        {
            end = text.size();
        }
        out.push_back(text.substr(start, end - start));
        pos = end;
    }
    return out;
}

} // namespace

KnowledgeGraph
parse_graph(std::string_view text)
{
    std::map<ProcessId, ProcessSet> adj;
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
        {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
        {
            line = line.substr(0, hash);
        }
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
        {
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string_view::npos)
        {
            throw ParseError("line " + std::to_string(lineNo) + ": missing ':'");
        }
        auto head = tokens(line.substr(0, colon), " \t\r");
        if (head.size() != 1)
        {
            throw ParseError("line " + std::to_string(lineNo) + ": expected one vertex id");
        }
        auto v = parse_id(head.front(), lineNo);
        if (adj.count(v))
        {
            throw ParseError("line " + std::to_string(lineNo) + ": vertex " +
                             std::to_string(v) + " listed twice");
        }
        auto& succ = adj[v];
        for (auto tok : tokens(line.substr(colon + 1), " \t\r,"))
        {
            succ.insert(parse_id(tok, lineNo));
        }
    }
    try
    {
        return KnowledgeGraph::from_adjacency(adj);
    }
    catch (InvalidArgument const& e)
    {
        throw ParseError(e.what());
    }
}

std::string
format_graph(KnowledgeGraph const& g)
{
    std::ostringstream out;
    for (auto v : g.vertices())
    {
        out << v << ':';
        for (auto w : g.successors(v))
        {
            out << ' ' << w;
        }
        out << '\n';
    }
    return out.str();
}

KnowledgeGraph
read_graph_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open graph file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

void
write_graph_file(std::string const& path, KnowledgeGraph const& g)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("cannot write graph file " + path);
    }
    out << format_graph(g);
}

ProcessSet
parse_id_list(std::string_view text)
{
    ProcessSet out;
    for (auto tok : tokens(text, " \t,{}"))
    {
        out.insert(parse_id(tok, 1));
    }
    return out;
}

} // namespace bftcup
