#pragma once

// Plain adjacency-list text format, one vertex per line:
//
//     1: 2 3 4
//     4:
//
// Blank lines and '#' comments are ignored.

#include "bftcup/kgraph.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace bftcup {

class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

KnowledgeGraph parse_graph(std::string_view text);
std::string format_graph(KnowledgeGraph const& g);

KnowledgeGraph read_graph_file(std::string const& path);
void write_graph_file(std::string const& path, KnowledgeGraph const& g);

// Comma- or space-separated id list, e.g. "1,2,3".
ProcessSet parse_id_list(std::string_view text);

} // namespace bftcup
