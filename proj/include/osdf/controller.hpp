#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osdf/dataplane.hpp"
#include "osdf/path.hpp"
#include "osdf/policy.hpp"
#include "osdf/profiles.hpp"

namespace osdf {

enum class ControllerMode { Osdf, ReactiveBaseline };

inline std::string mode_name(ControllerMode m) {
  return m == ControllerMode::Osdf ? "osdf" : "reactive";
}

/// Region pair a flow spans, from the configured prefix map.
inline std::optional<std::pair<std::string, std::string>> regions_of_flow(const Topology& t,
                                                                          const Packet& pkt) {
  auto src = t.region_of_ip(pkt.src_ip);
  auto dst = t.region_of_ip(pkt.dst_ip);
  if (!src || !dst) return std::nullopt;
  return std::make_pair(*src, *dst);
}

struct SetupOutcome {
  int flow_id = 0;
  std::optional<int> policy_id;
  std::vector<DeviceId> path;
  int rules_installed = 0;
  std::optional<std::string> refused;

  std::string to_string(int packet_ins = 1, int64_t t_us = 0) const {
    std::string out = "flow=" + std::to_string(flow_id) + " policy=";
    out += policy_id ? std::to_string(*policy_id) : std::string("none");
    out += " path=[";
    for (size_t i = 0; i < path.size(); ++i) {
      if (i) out += ',';
      out += path[i];
    }
    out += "] rules=" + std::to_string(rules_installed) +
           " packet_ins=" + std::to_string(packet_ins) + " t_us=" + std::to_string(t_us);
    if (refused) out += " refused=" + *refused;
    return out;
  }
};

/// Flow rules realizing one policy-matched flow along a path. Forward rules
/// are emitted destination-side first, then the reverse direction likewise
/// (when bidirectional). Inter-site flows rewrite the destination MAC at the
/// final hop of each direction.
inline std::vector<FlowRule> compile_rules(const Policy& policy, const MatchFields& fwd_sel,
                                           const MatchFields& rev_sel, const Path& path,
                                           const Host& src_host, const Host& dst_host,
                                           int flow_id, bool inter_site) {
  if (path.has_repeats())
    throw ValidationError("refusing to install a looping path");
  const auto& hops = path.hops;
  Cookie cookie{policy.id, flow_id};
  std::vector<FlowRule> out;
  for (size_t i = hops.size(); i-- > 0;) {
    FlowRule r{hops[i].device, policy.priority, fwd_sel, {}, cookie};
    if (i + 1 == hops.size() && inter_site) r.actions.push_back(Action::set_dst_mac(dst_host.mac));
    r.actions.push_back(Action::output(hops[i].out_port));
    out.push_back(std::move(r));
  }
  if (policy.bidirectional || policy.function == NetworkFunction::IntraSiteRoute) {
    for (size_t i = 0; i < hops.size(); ++i) {
      FlowRule r{hops[i].device, policy.priority, rev_sel, {}, cookie};
      if (i == 0 && inter_site) r.actions.push_back(Action::set_dst_mac(src_host.mac));
      r.actions.push_back(Action::output(hops[i].in_port));
      out.push_back(std::move(r));
    }
  }
  return out;
}

/// The OSDF core (or, in ReactiveBaseline mode, a plain per-switch reactive
/// forwarder) driving one SimNetwork.
class Controller {
 public:
  Controller(ControllerMode mode, PolicyStore& store, const ProfileRegistry& profiles,
             const AlgorithmRegistry& algorithms)
      : mode_(mode), store_(store), profiles_(profiles), algorithms_(algorithms) {}

  ControllerMode mode() const { return mode_; }
  const std::vector<SetupOutcome>& outcomes() const { return outcomes_; }
  const std::map<int, std::vector<std::pair<DeviceId, uint64_t>>>& ledger() const {
    return ledger_;
  }

  void attach(SimNetwork& net) {
    net.set_packet_in_handler([this, &net](const DeviceId& dev, const Packet& pkt) {
      handle_packet_in(net, dev, pkt);
    });
  }

  SetupOutcome handle_packet_in(SimNetwork& net, const DeviceId& device, const Packet& pkt) {
    SetupOutcome out;
    out.flow_id = next_flow_++;
    if (mode_ == ControllerMode::Osdf) {
      handle_osdf(net, device, pkt, out);
    } else {
      handle_reactive(net, device, pkt, out);
    }
    outcomes_.push_back(out);
    return out;
  }

  /// Remove the dataplane rules of a policy that was already removed from the
  /// store. Returns the number of rules purged.
  size_t purge_policy_rules(SimNetwork& net, int policy_id) {
    size_t n = net.remove_by_cookie(policy_id);
    ledger_.erase(policy_id);
    return n;
  }

 private:
  void refuse_with_drop(SimNetwork& net, const DeviceId& device, const MatchFields& fwd_sel,
                        SetupOutcome& out, const std::string& reason) {
    out.refused = reason;
    FlowRule drop{device, kDropRulePriority, fwd_sel, {Action::drop()},
                  Cookie{kNoPolicy, out.flow_id}};
    net.install_rule(drop);
    out.rules_installed = 1;
  }

  void handle_osdf(SimNetwork& net, const DeviceId& device, const Packet& pkt,
                   SetupOutcome& out) {
    const Topology& topo = net.topology();
    auto profile_name = profiles_.classify(pkt);
    if (!profile_name) {
      out.refused = "unclassified";
      return;
    }
    const TrafficProfile& profile = profiles_.get(*profile_name);
    auto [fwd_sel, rev_sel] = build_selectors(profile, pkt);
    auto regions = regions_of_flow(topo, pkt);
    if (!regions) {
      refuse_with_drop(net, device, fwd_sel, out, "no-region");
      return;
    }
    auto [src_region, dst_region] = *regions;
    bool inter = src_region != dst_region;
    NetworkFunction fn =
        inter ? NetworkFunction::InterSiteRoute : NetworkFunction::IntraSiteRoute;
    auto matched = store_.match(fn, src_region, dst_region, *profile_name);
    if (matched.empty()) {
      refuse_with_drop(net, device, fwd_sel, out, "no-policy");
      return;
    }
    const Policy& policy = matched.front();
    out.policy_id = policy.id;
    net.advance_clock(net.costs().policy_parse_us);
    const Host* src_host = topo.find_host_by_ip(pkt.src_ip);
    const Host* dst_host = topo.find_host_by_ip(pkt.dst_ip);
    if (!src_host || !dst_host) {
      refuse_with_drop(net, device, fwd_sel, out, "no-host");
      return;
    }
    Path path;
    try {
      path = select_path(algorithms_, topo, policy, src_host->attach.device,
                         dst_host->attach.device);
    } catch (const NoPathError&) {
      out.refused = "no-path";
      return;
    }
    if (path.has_repeats()) {
      out.refused = "looping-path";
      return;
    }
    path.hops.front().in_port = src_host->attach.port;
    path.hops.back().out_port = dst_host->attach.port;
    auto rules = compile_rules(policy, fwd_sel, rev_sel, path, *src_host, *dst_host,
                               out.flow_id, inter);
    for (const FlowRule& r : rules) {
      uint64_t seq = net.install_rule(r);
      ledger_[policy.id].emplace_back(r.device, seq);
    }
    out.path = path.devices();
    out.rules_installed = static_cast<int>(rules.size());
  }

  // Plain reactive forwarding: one rule at the asking switch per PACKET_IN,
  // policies not consulted.
  void handle_reactive(SimNetwork& net, const DeviceId& device, const Packet& pkt,
                       SetupOutcome& out) {
    const Topology& topo = net.topology();
    const Host* dst_host = topo.find_host_by_ip(pkt.dst_ip);
    if (!dst_host) {
      out.refused = "no-host";
      return;
    }
    Path path;
    try {
      path = shortest_path(topo, device, dst_host->attach.device);
    } catch (const NoPathError&) {
      out.refused = "no-path";
      return;
    }
    path.hops.back().out_port = dst_host->attach.port;
    auto profile_name = profiles_.classify(pkt);
    const TrafficProfile& profile = profiles_.get(profile_name.value_or("any"));
    MatchFields fwd_sel = build_selectors(profile, pkt).first;
    FlowRule r{device, kDefaultPolicyPriority, fwd_sel,
               {Action::output(path.hops.front().out_port)}, Cookie{kNoPolicy, out.flow_id}};
    net.install_rule(r);
    out.path = path.devices();
    out.rules_installed = 1;
  }

  ControllerMode mode_;
  PolicyStore& store_;
  const ProfileRegistry& profiles_;
  const AlgorithmRegistry& algorithms_;
  std::map<int, std::vector<std::pair<DeviceId, uint64_t>>> ledger_;
  std::vector<SetupOutcome> outcomes_;
  int next_flow_ = 1;
};

}  // namespace osdf
