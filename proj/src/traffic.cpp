#include "manet/traffic.hpp"

#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace manet {

std::vector<Flow> generate_connections(std::uint32_t n_nodes,
                                       std::uint32_t max_conn, double rate,
                                       std::uint32_t payload, RngStream& rng) {
    if (max_conn == 0) return {};
    if (n_nodes < 2) {
        throw std::invalid_argument(
            "generate_connections: need at least 2 nodes for connections");
    }
    if (rate <= 0.0) {
        throw std::invalid_argument("generate_connections: rate must be > 0");
    }
    std::vector<Flow> flows;
    std::set<std::pair<NodeId, NodeId>> used;
    std::uint64_t draws = 0;
    const std::uint64_t max_draws = 10ull * max_conn;
    while (flows.size() < max_conn && draws < max_draws) {
        ++draws;
        NodeId src = rng.uniform_int(n_nodes);
        NodeId dst = rng.uniform_int(n_nodes);
        if (src == dst) continue;
        if (!used.insert({src, dst}).second) continue;
        Flow f;
        f.src = src;
        f.dst = dst;
        f.start_at = rng.uniform(0.0, 10.0);
        f.rate = rate;
        f.payload = payload;
        flows.push_back(f);
    }
    return flows;
}

std::string flows_to_text(const std::vector<Flow>& flows) {
    std::string out = "# src dst start_at rate payload\n";
    char buf[128];
    for (const auto& f : flows) {
        std::snprintf(buf, sizeof buf, "%u %u %.9f %.6f %u\n", f.src, f.dst,
                      f.start_at, f.rate, f.payload);
        out += buf;
    }
    return out;
}

std::vector<Flow> flows_from_text(const std::string& text) {
    std::vector<Flow> flows;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        Flow f;
        std::istringstream ls(line);
        if (!(ls >> f.src >> f.dst >> f.start_at >> f.rate >> f.payload)) {
            std::ostringstream os;
            os << "flows_from_text: line " << line_no << ": malformed";
            throw std::runtime_error(os.str());
        }
        flows.push_back(f);
    }
    return flows;
}

} // namespace manet
