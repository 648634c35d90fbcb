#include "diana/overlay.hpp"

#include <algorithm>
#include <sstream>

#include "diana/errors.hpp"

namespace diana {

const char* to_string(NodeRole r) {
    switch (r) {
        case NodeRole::RootGrid: return "root";
        case NodeRole::Standby: return "standby";
        case NodeRole::Member: return "member";
    }
    return "?";
}

const char* to_string(OverlayMessage::Kind k) {
    switch (k) {
        case OverlayMessage::Kind::Join: return "Join";
        case OverlayMessage::Kind::JoinAck: return "JoinAck";
        case OverlayMessage::Kind::RegistryReplicate: return "RegistryReplicate";
        case OverlayMessage::Kind::Heartbeat: return "Heartbeat";
        case OverlayMessage::Kind::RootFailed: return "RootFailed";
        case OverlayMessage::Kind::Promote: return "Promote";
        case OverlayMessage::Kind::PeerListRequest: return "PeerListRequest";
        case OverlayMessage::Kind::PeerListResponse: return "PeerListResponse";
        case OverlayMessage::Kind::QueueReportRequest: return "QueueReportRequest";
        case OverlayMessage::Kind::QueueReportResponse: return "QueueReportResponse";
        case OverlayMessage::Kind::MigrateJob: return "MigrateJob";
    }
    return "?";
}

OverlayNetwork::OverlayNetwork(OverlayConfig cfg, CostFn cost)
    : cfg_(cfg), cost_(std::move(cost)) {
    if (!cost_) cost_ = [](const std::string&, const std::string&) { return 0.0; };
}

OverlayNetwork::NodeState& OverlayNetwork::state_of(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error("unknown node " + id);
    return it->second;
}

const OverlayNetwork::NodeState& OverlayNetwork::state_of(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error("unknown node " + id);
    return it->second;
}

std::string OverlayNetwork::next_subgrid_id() {
    return "sg" + std::to_string(++subgrid_counter_);
}

void OverlayNetwork::send(OverlayMessage msg) {
    trace_.push_back({msg.kind, msg.from, msg.to});
    channels_[{msg.from, msg.to}].push_back(std::move(msg));
}

void OverlayNetwork::request_join(NodeRecord node) {
    if (node.node_id.empty()) throw ValidationError("node id must not be empty");
    if (nodes_.count(node.node_id)) throw DuplicateJoin("node " + node.node_id + " already joined");
    node.alive = true;
    auto roots = live_roots();
    NodeState st;
    if (roots.empty() || node.resources >= cfg_.subgrid_min) {
        node.role = NodeRole::RootGrid;
        node.subgrid_id = next_subgrid_id();
        st.self = node;
        st.role_synced = true;
        st.registry[node.node_id] = node;
        nodes_[node.node_id] = std::move(st);
        for (const auto& r : roots) {
            OverlayMessage m;
            m.kind = OverlayMessage::Kind::Join;
            m.from = node.node_id;
            m.to = r;
            m.record = node;
            send(std::move(m));
        }
        return;
    }
    // Small node: head for the root that is nearest by the cost function.
    std::string target;
    double best = 0.0;
    for (const auto& r : roots) {
        double c = cost_(node.node_id, r);
        if (target.empty() || c < best || (c == best && r < target)) {
            target = r;
            best = c;
        }
    }
    node.role = NodeRole::Member;
    node.subgrid_id.clear();
    st.self = node;
    nodes_[node.node_id] = std::move(st);
    OverlayMessage m;
    m.kind = OverlayMessage::Kind::Join;
    m.from = node.node_id;
    m.to = target;
    m.record = node;
    send(std::move(m));
}

void OverlayNetwork::crash(const std::string& node_id) {
    state_of(node_id).crashed = true;
}

std::string OverlayNetwork::initiate_failover(const std::string& subgrid_id) {
    auto standby = standby_of(subgrid_id);
    if (!standby) throw NoStandby("subgrid " + subgrid_id + " has no standby to promote");
    std::string failed;
    for (const auto& [id, st] : nodes_) {
        if (st.self.subgrid_id == subgrid_id && st.self.role == NodeRole::RootGrid) failed = id;
    }
    OverlayMessage m;
    m.kind = OverlayMessage::Kind::RootFailed;
    m.from = *standby;
    m.to = *standby;
    m.subgrid_id = subgrid_id;
    m.failed_root = failed;
    send(std::move(m));
    return *standby;
}

std::string OverlayNetwork::fail_root(const std::string& subgrid_id) {
    auto root = root_of(subgrid_id);
    if (!root) throw Error("subgrid " + subgrid_id + " has no live root");
    auto standby = standby_of(subgrid_id);
    if (!standby) throw NoStandby("subgrid " + subgrid_id + " has no standby to promote");
    crash(*root);
    return initiate_failover(subgrid_id);
}

std::vector<std::string> OverlayNetwork::peer_list(const std::string& root_id) {
    const NodeState& st = state_of(root_id);
    if (st.crashed || st.self.role != NodeRole::RootGrid)
        throw ValidationError("peer_list requires a live RootGrid");
    std::vector<std::string> out;
    for (const auto& [id, rec] : st.registry) {
        if (id == root_id || rec.role != NodeRole::RootGrid || !rec.alive) continue;
        trace_.push_back({OverlayMessage::Kind::PeerListRequest, root_id, id});
        if (nodes_.count(id) && !nodes_.at(id).crashed) {
            trace_.push_back({OverlayMessage::Kind::PeerListResponse, id, root_id});
            out.push_back(id);
        }
    }
    return out;
}

std::vector<PeerQueueReport> OverlayNetwork::query_peer_reports(const std::string& root_id,
                                                                double candidate_priority) {
    if (!report_provider_) throw Error("no report provider installed");
    std::vector<PeerQueueReport> out;
    for (const auto& peer : peer_list(root_id)) {
        trace_.push_back({OverlayMessage::Kind::QueueReportRequest, root_id, peer});
        out.push_back(report_provider_(peer, candidate_priority));
        trace_.push_back({OverlayMessage::Kind::QueueReportResponse, peer, root_id});
    }
    return out;
}

void OverlayNetwork::send_migrate(const std::string& from_site, const std::string& to_site,
                                  const std::string& job_id) {
    OverlayMessage m;
    m.kind = OverlayMessage::Kind::MigrateJob;
    m.from = from_site;
    m.to = to_site;
    m.job_id = job_id;
    send(std::move(m));
}

void OverlayNetwork::heartbeat_round(double now) {
    for (auto& [id, st] : nodes_) {
        if (st.crashed || st.self.role != NodeRole::RootGrid) continue;
        for (const auto& [mid, member] : nodes_) {
            if (mid == id || member.crashed) continue;
            if (member.self.subgrid_id != st.self.subgrid_id) continue;
            OverlayMessage m;
            m.kind = OverlayMessage::Kind::Heartbeat;
            m.from = id;
            m.to = mid;
            m.time = now;
            send(std::move(m));
        }
    }
}

std::vector<std::string> OverlayNetwork::overdue_subgrids(double now) const {
    std::vector<std::string> out;
    double limit = cfg_.heartbeat_interval * cfg_.missed_beats;
    for (const auto& sg : subgrids()) {
        if (root_of(sg)) continue;  // a live root needs no failover
        auto standby = standby_of(sg);
        if (!standby) continue;
        if (now - state_of(*standby).last_root_beat > limit) out.push_back(sg);
    }
    return out;
}

bool OverlayNetwork::quiescent() const {
    for (const auto& [key, q] : channels_) {
        if (!q.empty()) return false;
    }
    return true;
}

std::vector<std::pair<std::string, std::string>> OverlayNetwork::busy_channels() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, q] : channels_) {
        if (!q.empty()) out.push_back(key);
    }
    return out;
}

void OverlayNetwork::deliver_front(const std::pair<std::string, std::string>& channel) {
    auto it = channels_.find(channel);
    if (it == channels_.end() || it->second.empty()) throw Error("channel has no mail");
    OverlayMessage msg = std::move(it->second.front());
    it->second.pop_front();
    auto node = nodes_.find(msg.to);
    if (node == nodes_.end() || node->second.crashed) return;  // dropped
    handle(node->second, msg);
}

void OverlayNetwork::run_to_quiescence() {
    for (long guard = 0; guard < 1000000; ++guard) {
        auto busy = busy_channels();
        if (busy.empty()) return;
        deliver_front(busy.front());
    }
    throw Error("overlay does not quiesce");
}

void OverlayNetwork::handle(NodeState& node, const OverlayMessage& msg) {
    switch (msg.kind) {
        case OverlayMessage::Kind::Join: handle_join(node, msg); break;
        case OverlayMessage::Kind::JoinAck: handle_join_ack(node, msg); break;
        case OverlayMessage::Kind::RootFailed: handle_root_failed(node, msg); break;
        case OverlayMessage::Kind::Promote: handle_promote(node, msg); break;
        case OverlayMessage::Kind::Heartbeat: node.last_root_beat = msg.time; break;
        case OverlayMessage::Kind::MigrateJob:
            if (migrate_handler_) migrate_handler_(msg.to, msg.job_id);
            break;
        default: break;  // request/response kinds are traced, not queued
    }
}

void OverlayNetwork::handle_join(NodeState& root, const OverlayMessage& msg) {
    if (root.self.role != NodeRole::RootGrid) return;  // stale target, drop
    NodeRecord rec = msg.record;
    if (rec.role == NodeRole::RootGrid) {
        // A new peer root announcing itself.
        root.registry[rec.node_id] = rec;
        replicate_now(root);
        OverlayMessage ack;
        ack.kind = OverlayMessage::Kind::JoinAck;
        ack.from = root.self.node_id;
        ack.to = rec.node_id;
        ack.record = root.self;
        ack.granted_role = NodeRole::RootGrid;
        ack.subgrid_id = rec.subgrid_id;
        send(std::move(ack));
        return;
    }
    rec.role = NodeRole::Member;
    rec.subgrid_id = root.self.subgrid_id;
    root.registry[rec.node_id] = rec;
    recompute_standby(root);
    replicate_now(root);
    OverlayMessage ack;
    ack.kind = OverlayMessage::Kind::JoinAck;
    ack.from = root.self.node_id;
    ack.to = rec.node_id;
    ack.record = root.self;
    ack.granted_role = root.registry[rec.node_id].role;
    ack.subgrid_id = root.self.subgrid_id;
    send(std::move(ack));
}

void OverlayNetwork::handle_join_ack(NodeState& node, const OverlayMessage& msg) {
    if (msg.granted_role == NodeRole::RootGrid && node.self.role == NodeRole::RootGrid) {
        // Answer to a root announce: learn the acking root.
        node.registry[msg.record.node_id] = msg.record;
        replicate_now(node);
        return;
    }
    node.self.subgrid_id = msg.subgrid_id;
    if (!node.role_synced) node.self.role = msg.granted_role;
}

void OverlayNetwork::handle_root_failed(NodeState& node, const OverlayMessage& msg) {
    if (node.self.role != NodeRole::Standby || node.self.subgrid_id != msg.subgrid_id) return;
    node.self.role = NodeRole::RootGrid;
    node.role_synced = true;
    node.registry = node.replica;
    node.replica.clear();
    if (!msg.failed_root.empty()) {
        auto it = node.registry.find(msg.failed_root);
        if (it != node.registry.end()) it->second.alive = false;
    }
    auto self_rec = node.registry.find(node.self.node_id);
    if (self_rec != node.registry.end()) self_rec->second.role = NodeRole::RootGrid;
    recompute_standby(node);
    replicate_now(node);
    for (const auto& [id, rec] : node.registry) {
        if (rec.role != NodeRole::RootGrid || !rec.alive) continue;
        if (id == node.self.node_id || id == msg.failed_root) continue;
        OverlayMessage m;
        m.kind = OverlayMessage::Kind::Promote;
        m.from = node.self.node_id;
        m.to = id;
        m.record = node.registry[node.self.node_id];
        m.subgrid_id = msg.subgrid_id;
        m.failed_root = msg.failed_root;
        send(std::move(m));
    }
}

void OverlayNetwork::handle_promote(NodeState& node, const OverlayMessage& msg) {
    if (node.self.role != NodeRole::RootGrid) return;
    node.registry[msg.record.node_id] = msg.record;
    if (!msg.failed_root.empty()) {
        auto it = node.registry.find(msg.failed_root);
        if (it != node.registry.end()) it->second.alive = false;
    }
    replicate_now(node);
}

void OverlayNetwork::recompute_standby(NodeState& root) {
    // Highest availability among the subgrid's live members, ties by id.
    std::string best;
    double best_avail = 0.0;
    for (const auto& [id, rec] : root.registry) {
        if (rec.role == NodeRole::RootGrid || !rec.alive) continue;
        if (rec.subgrid_id != root.self.subgrid_id) continue;
        if (nodes_.count(id) && nodes_.at(id).crashed) continue;
        if (best.empty() || rec.availability > best_avail ||
            (rec.availability == best_avail && id < best)) {
            best = id;
            best_avail = rec.availability;
        }
    }
    for (auto& [id, rec] : root.registry) {
        if (rec.role == NodeRole::RootGrid) continue;
        if (rec.subgrid_id != root.self.subgrid_id) continue;
        NodeRole target = (id == best) ? NodeRole::Standby : NodeRole::Member;
        if (rec.role != target) {
            rec.role = target;
            auto it = nodes_.find(id);
            if (it != nodes_.end() && !it->second.crashed) {
                it->second.self.role = target;
                it->second.role_synced = true;
                if (target == NodeRole::Member) it->second.replica.clear();
            }
        }
    }
}

void OverlayNetwork::replicate_now(NodeState& root) {
    std::string standby;
    for (const auto& [id, rec] : root.registry) {
        if (rec.role == NodeRole::Standby && rec.subgrid_id == root.self.subgrid_id) standby = id;
    }
    if (standby.empty()) return;
    auto it = nodes_.find(standby);
    if (it == nodes_.end() || it->second.crashed) return;
    it->second.replica = root.registry;
    it->second.self.role = NodeRole::Standby;
    it->second.role_synced = true;
    trace_.push_back({OverlayMessage::Kind::RegistryReplicate, root.self.node_id, standby});
}

bool OverlayNetwork::knows(const std::string& node_id) const { return nodes_.count(node_id) > 0; }

bool OverlayNetwork::is_crashed(const std::string& node_id) const {
    return state_of(node_id).crashed;
}

NodeRole OverlayNetwork::role_of(const std::string& node_id) const {
    return state_of(node_id).self.role;
}

std::string OverlayNetwork::subgrid_of(const std::string& node_id) const {
    return state_of(node_id).self.subgrid_id;
}

std::vector<std::string> OverlayNetwork::subgrids() const {
    std::vector<std::string> out;
    for (const auto& [id, st] : nodes_) {
        if (st.crashed || st.self.subgrid_id.empty()) continue;
        if (std::find(out.begin(), out.end(), st.self.subgrid_id) == out.end())
            out.push_back(st.self.subgrid_id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> OverlayNetwork::live_roots() const {
    std::vector<std::string> out;
    for (const auto& [id, st] : nodes_) {
        if (!st.crashed && st.self.role == NodeRole::RootGrid) out.push_back(id);
    }
    return out;
}

std::optional<std::string> OverlayNetwork::root_of(const std::string& subgrid_id) const {
    for (const auto& [id, st] : nodes_) {
        if (!st.crashed && st.self.role == NodeRole::RootGrid && st.self.subgrid_id == subgrid_id)
            return id;
    }
    return std::nullopt;
}

std::optional<std::string> OverlayNetwork::standby_of(const std::string& subgrid_id) const {
    for (const auto& [id, st] : nodes_) {
        if (!st.crashed && st.self.role == NodeRole::Standby && st.self.subgrid_id == subgrid_id)
            return id;
    }
    return std::nullopt;
}

std::vector<std::string> OverlayNetwork::members_of(const std::string& subgrid_id) const {
    std::vector<std::string> out;
    for (const auto& [id, st] : nodes_) {
        if (!st.crashed && st.self.subgrid_id == subgrid_id) out.push_back(id);
    }
    return out;
}

const RegistryTable& OverlayNetwork::registry_of(const std::string& node_id) const {
    return state_of(node_id).registry;
}

const RegistryTable& OverlayNetwork::replica_of(const std::string& node_id) const {
    return state_of(node_id).replica;
}

std::string OverlayNetwork::encode() const {
    std::ostringstream os;
    auto dump_table = [&os](const RegistryTable& t) {
        for (const auto& [id, rec] : t) {
            os << id << ':' << to_string(rec.role) << ':' << rec.subgrid_id << ':'
               << (rec.alive ? 1 : 0) << ';';
        }
    };
    for (const auto& [id, st] : nodes_) {
        os << id << '|' << to_string(st.self.role) << '|' << st.self.subgrid_id << '|'
           << (st.crashed ? 1 : 0) << (st.role_synced ? 1 : 0) << "|R{";
        dump_table(st.registry);
        os << "}P{";
        dump_table(st.replica);
        os << "}\n";
    }
    for (const auto& [key, q] : channels_) {
        if (q.empty()) continue;
        os << key.first << "->" << key.second << ":[";
        for (const auto& m : q) {
            os << to_string(m.kind) << '(' << m.record.node_id << ',' << m.subgrid_id << ','
               << m.failed_root << ',' << to_string(m.granted_role) << ')';
        }
        os << "]\n";
    }
    return os.str();
}

}  // namespace diana
