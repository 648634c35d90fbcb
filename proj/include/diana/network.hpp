#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>

#include "diana/domain.hpp"

namespace diana {

// Directed bandwidth/loss matrix over the scenario's sites. Self pairs are
// implicitly free: local data never crosses the network.
class NetworkMatrix {
  public:
    void add(NetworkEdge edge) {
        edge.validate();
        edges_[{edge.source, edge.destination}] = std::move(edge);
    }

    bool has(const std::string& src, const std::string& dst) const {
        return src == dst || edges_.count({src, dst}) > 0;
    }

    // Returns the edge for (src, dst); a zero-cost edge when src == dst.
    NetworkEdge edge(const std::string& src, const std::string& dst) const {
        if (src == dst) {
            NetworkEdge self;
            self.source = src;
            self.destination = dst;
            self.bandwidth = std::numeric_limits<double>::infinity();
            self.loss_rate = 0.0;
            return self;
        }
        auto it = edges_.find({src, dst});
        if (it == edges_.end()) {
            throw ScenarioInvalid("network matrix has no edge " + src + " -> " + dst);
        }
        return it->second;
    }

    const std::map<std::pair<std::string, std::string>, NetworkEdge>& all() const {
        return edges_;
    }

  private:
    std::map<std::pair<std::string, std::string>, NetworkEdge> edges_;
};

}  // namespace diana
