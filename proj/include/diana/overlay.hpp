#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diana/domain.hpp"
#include "diana/migrator.hpp"

namespace diana {

enum class NodeRole { RootGrid, Standby, Member };

const char* to_string(NodeRole r);

// One node as the registries see it.
struct NodeRecord {
    std::string node_id;
    NodeRole role = NodeRole::Member;
    std::string subgrid_id;
    double availability = 0.0;
    int resources = 0;  // capacity units, compared against subgrid_min on join
    bool alive = true;
};

using RegistryTable = std::map<std::string, NodeRecord>;

struct OverlayConfig {
    int subgrid_min = 4;                    // resources needed to found a SubGrid
    double heartbeat_interval = 1.0 / 60.0; // hours
    int missed_beats = 3;                   // beats missed before failover
};

struct OverlayMessage {
    enum class Kind {
        Join,
        JoinAck,
        RegistryReplicate,
        Heartbeat,
        RootFailed,
        Promote,
        PeerListRequest,
        PeerListResponse,
        QueueReportRequest,
        QueueReportResponse,
        MigrateJob,
    };

    Kind kind = Kind::Join;
    std::string from;
    std::string to;
    NodeRecord record;       // Join (the joiner), JoinAck (the acker), Promote (new root)
    NodeRole granted_role = NodeRole::Member;  // JoinAck
    std::string subgrid_id;  // JoinAck, RootFailed, Promote
    std::string failed_root; // RootFailed, Promote
    std::string job_id;      // MigrateJob
    double time = 0.0;       // Heartbeat
};

const char* to_string(OverlayMessage::Kind k);

struct TraceEntry {
    OverlayMessage::Kind kind;
    std::string from;
    std::string to;
};

// The RootGrid/SubGrid topology as message-driven node state machines.
// Channels are FIFO per (sender, receiver); messages to a crashed node are
// dropped on delivery. Registry replication is synchronous: a root's
// mutation and its standby's replica update happen in the same event.
class OverlayNetwork {
  public:
    using CostFn = std::function<double(const std::string&, const std::string&)>;
    using ReportProvider = std::function<PeerQueueReport(const std::string& site_id,
                                                         double candidate_priority)>;
    using MigrateHandler = std::function<void(const std::string& site_id,
                                              const std::string& job_id)>;

    explicit OverlayNetwork(OverlayConfig cfg = {}, CostFn cost = {});

    // The first node roots SubGrid sg1; a node with resources >= subgrid_min
    // roots a fresh SubGrid and announces itself to the other roots; anyone
    // else joins the SubGrid whose root is nearest by the cost function.
    // Throws DuplicateJoin when the id was ever seen.
    void request_join(NodeRecord node);

    // Stops a node cold: it neither sends nor receives from now on.
    void crash(const std::string& node_id);

    // Failure detection outcome: tells the subgrid's standby its root died.
    // Returns the standby's id; throws NoStandby when the subgrid has none.
    std::string initiate_failover(const std::string& subgrid_id);

    // crash(root) + initiate_failover. Pump to quiescence to see the result.
    std::string fail_root(const std::string& subgrid_id);

    // Other live RootGrids as this root's registry knows them, probed for
    // liveness (a crashed peer does not answer). Members never appear.
    std::vector<std::string> peer_list(const std::string& root_id);

    // Engine hooks: peer queue queries and job hand-offs ride the overlay.
    void set_report_provider(ReportProvider p) { report_provider_ = std::move(p); }
    void set_migrate_handler(MigrateHandler h) { migrate_handler_ = std::move(h); }
    std::vector<PeerQueueReport> query_peer_reports(const std::string& root_id,
                                                    double candidate_priority);
    void send_migrate(const std::string& from_site, const std::string& to_site,
                      const std::string& job_id);

    void heartbeat_round(double now);
    std::vector<std::string> overdue_subgrids(double now) const;

    // Message pump. deliver_front processes one message; run_to_quiescence
    // drains channels in lexicographic order for a deterministic schedule.
    bool quiescent() const;
    std::vector<std::pair<std::string, std::string>> busy_channels() const;
    void deliver_front(const std::pair<std::string, std::string>& channel);
    void run_to_quiescence();

    // Ground-truth introspection for tests and the engine.
    bool knows(const std::string& node_id) const;
    bool is_crashed(const std::string& node_id) const;
    NodeRole role_of(const std::string& node_id) const;
    std::string subgrid_of(const std::string& node_id) const;
    std::vector<std::string> subgrids() const;  // subgrids with live nodes
    std::vector<std::string> live_roots() const;
    std::optional<std::string> root_of(const std::string& subgrid_id) const;
    std::optional<std::string> standby_of(const std::string& subgrid_id) const;
    std::vector<std::string> members_of(const std::string& subgrid_id) const;
    const RegistryTable& registry_of(const std::string& node_id) const;
    const RegistryTable& replica_of(const std::string& node_id) const;
    const std::vector<TraceEntry>& trace() const { return trace_; }

    // Canonical state string; equal strings mean equal future behavior.
    std::string encode() const;

  private:
    struct NodeState {
        NodeRecord self;
        bool crashed = false;
        bool role_synced = false;  // a registry recompute already set the role
        RegistryTable registry;    // roots
        RegistryTable replica;     // standbys
        double last_root_beat = 0.0;
    };

    NodeState& state_of(const std::string& id);
    const NodeState& state_of(const std::string& id) const;
    std::string next_subgrid_id();
    void send(OverlayMessage msg);
    void handle(NodeState& node, const OverlayMessage& msg);
    void handle_join(NodeState& root, const OverlayMessage& msg);
    void handle_join_ack(NodeState& node, const OverlayMessage& msg);
    void handle_root_failed(NodeState& node, const OverlayMessage& msg);
    void handle_promote(NodeState& node, const OverlayMessage& msg);
    void recompute_standby(NodeState& root);
    void replicate_now(NodeState& root);

    OverlayConfig cfg_;
    CostFn cost_;
    ReportProvider report_provider_;
    MigrateHandler migrate_handler_;
    std::map<std::string, NodeState> nodes_;
    std::map<std::pair<std::string, std::string>, std::deque<OverlayMessage>> channels_;
    std::vector<TraceEntry> trace_;
    int subgrid_counter_ = 0;
};

}  // namespace diana
