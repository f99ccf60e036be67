#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "osdf/packet.hpp"
#include "osdf/topology.hpp"

namespace osdf {

constexpr int kNoPolicy = -1;
constexpr int kDropRulePriority = 1;

struct Cookie {
  int policy = kNoPolicy;
  int flow = 0;
  bool operator==(const Cookie&) const = default;
  std::string to_string() const {
    return (policy == kNoPolicy ? std::string("none") : std::to_string(policy)) + "/" +
           std::to_string(flow);
  }
};

struct Action {
  enum class Kind { Output, SetDstMac, Drop };
  Kind kind = Kind::Drop;
  int port = 0;
  Mac mac;

  static Action output(int port) { return {Kind::Output, port, {}}; }
  static Action set_dst_mac(Mac m) { return {Kind::SetDstMac, 0, m}; }
  static Action drop() { return {Kind::Drop, 0, {}}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::Output: return "output:" + std::to_string(port);
      case Kind::SetDstMac: return "set_dst_mac:" + format_mac(mac);
      case Kind::Drop: return "drop";
    }
    return "?";
  }
};

struct FlowRule {
  DeviceId device;
  int priority = 0;
  MatchFields match;
  std::vector<Action> actions;
  Cookie cookie;

  std::string actions_string() const {
    std::string out = "[";
    for (size_t i = 0; i < actions.size(); ++i) {
      if (i) out += ',';
      out += actions[i].to_string();
    }
    out += ']';
    return out;
  }
};

/// Per-device rule list, kept ordered by (priority desc, install seq asc).
class FlowTable {
 public:
  struct Entry {
    FlowRule rule;
    uint64_t seq = 0;
  };

  void install(FlowRule rule, uint64_t seq) {
    auto pos = entries_.begin();
    while (pos != entries_.end() && pos->rule.priority >= rule.priority) ++pos;
    entries_.insert(pos, Entry{std::move(rule), seq});
  }

  const FlowRule* lookup(const Packet& pkt) const {
    for (const Entry& e : entries_)
      if (e.rule.match.matches(pkt)) return &e.rule;
    return nullptr;
  }

  size_t remove_by_policy(int policy_id) {
    size_t before = entries_.size();
    std::erase_if(entries_, [&](const Entry& e) { return e.rule.cookie.policy == policy_id; });
    return before - entries_.size();
  }

  const std::vector<Entry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

/// Virtual-time cost model for control-plane operations, in microseconds.
struct CostConfig {
  int64_t ctrl_rtt_us = 500;      // per PACKET_IN round trip
  int64_t rule_install_us = 50;   // per installed rule
  int64_t policy_parse_us = 100;  // per policy-driven flow setup
};

struct TraceEvent {
  enum class Kind { PacketIn, RuleInstalled, Delivered, Dropped };
  Kind kind;
  int64_t t_us = 0;
  DeviceId device;   // PacketIn / RuleInstalled / Dropped
  std::string host;  // Delivered
  std::string reason;
  // RuleInstalled details
  int priority = 0;
  Cookie cookie;
  std::string match;
  std::string actions;

  std::string to_line() const {
    std::string t = std::to_string(t_us);
    switch (kind) {
      case Kind::PacketIn: return t + " PACKET_IN " + device;
      case Kind::RuleInstalled:
        return t + " INSTALL " + device + " prio=" + std::to_string(priority) +
               " cookie=" + cookie.to_string() + " match=" + match + " actions=" + actions;
      case Kind::Delivered: return t + " DELIVERED " + host;
      case Kind::Dropped: return t + " DROPPED " + device + " " + reason;
    }
    return t + " ?";
  }
};

/// Virtual-time event log of one injected packet.
struct Trace {
  std::vector<TraceEvent> events;
  int packet_in_count = 0;
  int rules_installed = 0;
  int64_t response_time_us = 0;
  bool delivered = false;
  std::string terminal;  // host name or "dev reason"

  std::string dump() const {
    std::string out;
    for (const TraceEvent& e : events) out += e.to_line() + "\n";
    return out;
  }

  void finish() {
    int64_t first_pin = -1, last_install = -1;
    for (const TraceEvent& e : events) {
      if (e.kind == TraceEvent::Kind::PacketIn && first_pin < 0) first_pin = e.t_us;
      if (e.kind == TraceEvent::Kind::RuleInstalled) last_install = e.t_us;
    }
    response_time_us = (first_pin >= 0 && last_install >= first_pin) ? last_install - first_pin : 0;
  }
};

/// Simulated switches under one controller: flow tables, a monotone virtual
/// clock, and synchronous PACKET_IN delivery to the controller callback.
class SimNetwork {
 public:
  using PacketInHandler = std::function<void(const DeviceId&, const Packet&)>;

  SimNetwork(Topology topology, CostConfig costs = {})
      : topo_(std::move(topology)), costs_(costs) {
    for (const Device& d : topo_.devices()) tables_.emplace(d.id, FlowTable{});
  }

  const Topology& topology() const { return topo_; }
  const CostConfig& costs() const { return costs_; }
  int64_t clock_us() const { return clock_us_; }
  const FlowTable& table(const DeviceId& dev) const {
    auto it = tables_.find(dev);
    if (it == tables_.end()) throw ValidationError("unknown device '" + dev + "'");
    return it->second;
  }

  void set_packet_in_handler(PacketInHandler h) { handler_ = std::move(h); }

  void advance_clock(int64_t us) { clock_us_ += us; }

  uint64_t install_rule(const FlowRule& rule) {
    auto it = tables_.find(rule.device);
    if (it == tables_.end())
      throw ValidationError("install on unknown device '" + rule.device + "'");
    const Device& dev = topo_.device(rule.device);
    for (const Action& a : rule.actions)
      if (a.kind == Action::Kind::Output && (a.port < 1 || a.port > dev.port_count))
        throw ValidationError("invalid port " + std::to_string(a.port) + " on device '" +
                              rule.device + "'");
    uint64_t seq = next_seq_++;
    clock_us_ += costs_.rule_install_us;
    it->second.install(rule, seq);
    if (active_trace_) {
      TraceEvent e{TraceEvent::Kind::RuleInstalled, clock_us_, rule.device, {}, {},
                   rule.priority, rule.cookie, rule.match.to_string(), rule.actions_string()};
      active_trace_->events.push_back(std::move(e));
      active_trace_->rules_installed++;
    }
    return seq;
  }

  size_t remove_by_cookie(int policy_id) {
    size_t n = 0;
    for (auto& [dev, table] : tables_) n += table.remove_by_policy(policy_id);
    return n;
  }

  Trace inject_packet(const std::string& src_host, Packet pkt) {
    const Host* host = topo_.find_host(src_host);
    if (!host) throw ValidationError("unknown host '" + src_host + "'");
    if (host->ip != pkt.src_ip)
      throw ValidationError("packet src ip " + format_ipv4(pkt.src_ip) +
                            " does not belong to host '" + src_host + "'");
    Trace trace;
    active_trace_ = &trace;
    DeviceId dev = host->attach.device;
    const size_t hop_limit = 4 * topo_.devices().size();
    size_t hops = 0;
    auto drop = [&](const std::string& reason) {
      trace.events.push_back({TraceEvent::Kind::Dropped, clock_us_, dev, {}, reason});
      trace.terminal = dev + " " + reason;
    };
    for (;;) {
      const FlowRule* rule = table(dev).lookup(pkt);
      if (!rule) {
        trace.events.push_back({TraceEvent::Kind::PacketIn, clock_us_, dev});
        trace.packet_in_count++;
        clock_us_ += costs_.ctrl_rtt_us;
        if (handler_) handler_(dev, pkt);
        rule = table(dev).lookup(pkt);
        if (!rule) {
          drop("no-rule");
          break;
        }
      }
      bool terminal = false;
      for (const Action& a : rule->actions) {
        if (a.kind == Action::Kind::SetDstMac) {
          pkt.dst_mac = a.mac;
          continue;
        }
        if (a.kind == Action::Kind::Drop) {
          drop(rule->cookie.policy == kNoPolicy ? "no-policy" : "drop");
          terminal = true;
          break;
        }
        // Output
        Topology::PortPeer peer = topo_.port_peer(dev, a.port);
        if (peer.kind == Topology::PortPeer::Kind::ToHost) {
          const Host* h = topo_.find_host(peer.host);
          if (h->mac == pkt.dst_mac) {
            trace.events.push_back({TraceEvent::Kind::Delivered, clock_us_, {}, h->name});
            trace.delivered = true;
            trace.terminal = h->name;
          } else {
            drop("mac-mismatch");
          }
          terminal = true;
        } else if (peer.kind == Topology::PortPeer::Kind::ToDevice) {
          dev = peer.device;
        } else {
          drop("dead-port");
          terminal = true;
        }
        break;  // exactly one Output ends the action list
      }
      if (terminal) break;
      if (++hops > hop_limit) {
        drop("loop");
        break;
      }
    }
    trace.finish();
    active_trace_ = nullptr;
    return trace;
  }

 private:
  Topology topo_;
  std::map<DeviceId, FlowTable> tables_;
  CostConfig costs_;
  int64_t clock_us_ = 0;
  uint64_t next_seq_ = 1;
  PacketInHandler handler_;
  Trace* active_trace_ = nullptr;
};

}  // namespace osdf
