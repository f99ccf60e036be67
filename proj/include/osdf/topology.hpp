#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "osdf/ip.hpp"

namespace osdf {

using DeviceId = std::string;

struct Device {
  DeviceId id;
  std::optional<std::string> region;
  int port_count = 0;
};

struct PortRef {
  DeviceId device;
  int port = 0;
  auto operator<=>(const PortRef&) const = default;
  std::string to_string() const { return device + ":" + std::to_string(port); }
};

struct Link {
  PortRef a;
  PortRef b;
};

struct Host {
  std::string name;
  Mac mac;
  Ipv4 ip;
  PortRef attach;
};

struct Region {
  std::string name;
  std::vector<Cidr> prefixes;
  std::vector<DeviceId> devices;
};

/// Immutable network model: devices, links, hosts, regions and the
/// prefix-to-region map. All invariants are checked at construction.
class Topology {
 public:
  struct PortPeer {
    enum class Kind { Free, ToDevice, ToHost };
    Kind kind = Kind::Free;
    DeviceId device;  // ToDevice: remote device
    int port = 0;     // ToDevice: remote port
    std::string host; // ToHost: host name
  };

  struct Neighbor {
    DeviceId peer;
    int local_port = 0;
    int peer_port = 0;
  };

  Topology(std::vector<Device> devices, std::vector<Link> links,
           std::vector<Host> hosts, std::vector<Region> regions)
      : devices_(std::move(devices)),
        links_(std::move(links)),
        hosts_(std::move(hosts)),
        regions_(std::move(regions)) {
    build_indexes();
    validate();
  }

  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<Host>& hosts() const { return hosts_; }
  const std::vector<Region>& regions() const { return regions_; }

  const Device* find_device(const DeviceId& id) const {
    auto it = dev_idx_.find(id);
    return it == dev_idx_.end() ? nullptr : &devices_[it->second];
  }
  const Device& device(const DeviceId& id) const {
    const Device* d = find_device(id);
    if (!d) throw ValidationError("unknown device '" + id + "'");
    return *d;
  }
  const Host* find_host(const std::string& name) const {
    auto it = host_idx_.find(name);
    return it == host_idx_.end() ? nullptr : &hosts_[it->second];
  }
  const Host* find_host_by_ip(Ipv4 ip) const {
    auto it = host_ip_idx_.find(ip.value);
    return it == host_ip_idx_.end() ? nullptr : &hosts_[it->second];
  }
  const Region* find_region(const std::string& name) const {
    auto it = region_idx_.find(name);
    return it == region_idx_.end() ? nullptr : &regions_[it->second];
  }

  std::optional<std::string> region_of_ip(Ipv4 ip) const {
    for (const Region& r : regions_)
      for (const Cidr& p : r.prefixes)
        if (p.contains(ip)) return r.name;
    return std::nullopt;
  }

  PortPeer port_peer(const DeviceId& dev, int port) const {
    auto it = port_map_.find({dev, port});
    return it == port_map_.end() ? PortPeer{} : it->second;
  }

  /// Link neighbors of a device, sorted by (peer id, local port).
  const std::vector<Neighbor>& neighbors(const DeviceId& dev) const {
    static const std::vector<Neighbor> empty;
    auto it = adjacency_.find(dev);
    return it == adjacency_.end() ? empty : it->second;
  }

  /// Ports of the link between two adjacent devices (lowest local port wins
  /// when parallel links exist); nullopt when not adjacent.
  std::optional<std::pair<int, int>> link_ports(const DeviceId& u, const DeviceId& v) const {
    for (const Neighbor& n : neighbors(u))
      if (n.peer == v) return std::make_pair(n.local_port, n.peer_port);
    return std::nullopt;
  }

  bool connected(const DeviceId& from, const DeviceId& to) const {
    if (from == to) return find_device(from) != nullptr;
    std::set<DeviceId> seen{from};
    std::deque<DeviceId> q{from};
    while (!q.empty()) {
      DeviceId cur = q.front();
      q.pop_front();
      for (const Neighbor& n : neighbors(cur)) {
        if (n.peer == to) return true;
        if (seen.insert(n.peer).second) q.push_back(n.peer);
      }
    }
    return false;
  }

 private:
  void build_indexes() {
    for (size_t i = 0; i < devices_.size(); ++i) {
      if (devices_[i].id.empty()) throw ValidationError("device with empty id");
      if (!dev_idx_.emplace(devices_[i].id, i).second)
        throw ValidationError("duplicate device id '" + devices_[i].id + "'");
    }
    for (const Link& l : links_) {
      claim_port(l.a, PortPeer{PortPeer::Kind::ToDevice, l.b.device, l.b.port, {}});
      claim_port(l.b, PortPeer{PortPeer::Kind::ToDevice, l.a.device, l.a.port, {}});
      adjacency_[l.a.device].push_back({l.b.device, l.a.port, l.b.port});
      adjacency_[l.b.device].push_back({l.a.device, l.b.port, l.a.port});
    }
    for (auto& [dev, ns] : adjacency_)
      std::sort(ns.begin(), ns.end(), [](const Neighbor& x, const Neighbor& y) {
        return std::tie(x.peer, x.local_port) < std::tie(y.peer, y.local_port);
      });
    for (size_t i = 0; i < hosts_.size(); ++i) {
      const Host& h = hosts_[i];
      if (!host_idx_.emplace(h.name, i).second)
        throw ValidationError("duplicate host name '" + h.name + "'");
      if (!host_ip_idx_.emplace(h.ip.value, i).second)
        throw ValidationError("duplicate host ip " + format_ipv4(h.ip));
      claim_port(h.attach, PortPeer{PortPeer::Kind::ToHost, {}, 0, h.name});
    }
    for (size_t i = 0; i < regions_.size(); ++i) {
      if (!region_idx_.emplace(regions_[i].name, i).second)
        throw ValidationError("duplicate region name '" + regions_[i].name + "'");
    }
  }

  void claim_port(const PortRef& ref, PortPeer peer) {
    const Device& d = device(ref.device);
    if (ref.port < 1 || ref.port > d.port_count)
      throw ValidationError("port " + ref.to_string() + " out of range (device has " +
                            std::to_string(d.port_count) + " ports)");
    if (!port_map_.emplace(std::make_pair(ref.device, ref.port), std::move(peer)).second)
      throw ValidationError("port " + ref.to_string() + " used more than once");
  }

  void validate() const {
    for (const Link& l : links_)
      if (l.a.device == l.b.device)
        throw ValidationError("self-link on device '" + l.a.device + "'");
    // mac uniqueness (names/ips were checked while indexing)
    std::set<uint64_t> macs;
    for (const Host& h : hosts_)
      if (!macs.insert(h.mac.value).second)
        throw ValidationError("duplicate host mac " + format_mac(h.mac));
    // regions reference real devices; prefixes of distinct regions disjoint
    for (const Region& r : regions_)
      for (const DeviceId& id : r.devices)
        if (!find_device(id))
          throw ValidationError("region '" + r.name + "' lists unknown device '" + id + "'");
    for (size_t i = 0; i < regions_.size(); ++i)
      for (size_t j = i + 1; j < regions_.size(); ++j)
        for (const Cidr& p : regions_[i].prefixes)
          for (const Cidr& q : regions_[j].prefixes)
            if (p.overlaps(q))
              throw ValidationError("regions '" + regions_[i].name + "' and '" +
                                    regions_[j].name + "' have overlapping prefixes " +
                                    format_cidr(p) + " and " + format_cidr(q));
    // device.region consistent with the region's device list
    for (const Device& d : devices_) {
      if (!d.region) continue;
      const Region* r = find_region(*d.region);
      if (!r) throw ValidationError("device '" + d.id + "' names unknown region '" + *d.region + "'");
      if (std::find(r->devices.begin(), r->devices.end(), d.id) == r->devices.end())
        throw ValidationError("device '" + d.id + "' not listed in region '" + r->name + "'");
    }
    for (const Region& r : regions_)
      for (const DeviceId& id : r.devices)
        if (device(id).region != r.name)
          throw ValidationError("device '" + id + "' listed in region '" + r.name +
                                "' but tagged differently");
    // each host ip maps into exactly one region prefix
    for (const Host& h : hosts_) {
      int hits = 0;
      for (const Region& r : regions_)
        for (const Cidr& p : r.prefixes)
          if (p.contains(h.ip)) ++hits;
      if (hits != 1)
        throw ValidationError("host '" + h.name + "' ip " + format_ipv4(h.ip) +
                              " falls in " + std::to_string(hits) + " region prefixes");
    }
    // hosts expected to communicate: their attachment switches are connected
    for (size_t i = 1; i < hosts_.size(); ++i)
      if (!connected(hosts_[0].attach.device, hosts_[i].attach.device))
        throw ValidationError("hosts '" + hosts_[0].name + "' and '" + hosts_[i].name +
                              "' are not connected");
  }

  std::vector<Device> devices_;
  std::vector<Link> links_;
  std::vector<Host> hosts_;
  std::vector<Region> regions_;
  std::unordered_map<std::string, size_t> dev_idx_;
  std::unordered_map<std::string, size_t> host_idx_;
  std::unordered_map<uint32_t, size_t> host_ip_idx_;
  std::unordered_map<std::string, size_t> region_idx_;
  std::map<std::pair<DeviceId, int>, PortPeer> port_map_;
  std::map<DeviceId, std::vector<Neighbor>> adjacency_;
};

/// Linear topology s1..sn with h1 on s1 port 1 and h2 on sn port 2,
/// all in region R (10.0.0.0/24).
inline Topology gen_linear(int n) {
  if (n < 1) throw ValidationError("linear topology needs at least 1 switch");
  std::vector<Device> devices;
  std::vector<Link> links;
  std::vector<DeviceId> ids;
  for (int i = 1; i <= n; ++i) {
    DeviceId id = "s" + std::to_string(i);
    devices.push_back({id, "R", 2});
    ids.push_back(id);
    if (i > 1) links.push_back({{ids[i - 2], 2}, {id, 1}});
  }
  // port convention: port 1 faces the previous hop (or h1), port 2 the next (or h2)
  std::vector<Host> hosts = {
      {"h1", parse_mac("00:00:00:00:00:01"), parse_ipv4("10.0.0.1"), {ids.front(), 1}},
      {"h2", parse_mac("00:00:00:00:00:02"), parse_ipv4("10.0.0.2"), {ids.back(), 2}},
  };
  std::vector<Region> regions = {{"R", {parse_cidr("10.0.0.0/24")}, ids}};
  return Topology(std::move(devices), std::move(links), std::move(hosts), std::move(regions));
}

/// Fixed three-region fixture: regions A(a1,a2), B(b1,b2), C(c1,c2) with one
/// host per switch and inter-region links a2-b1, b2-c1, a2-c1.
inline Topology gen_three_region() {
  std::vector<Device> devices = {
      {"a1", "A", 2}, {"a2", "A", 4}, {"b1", "B", 3},
      {"b2", "B", 3}, {"c1", "C", 4}, {"c2", "C", 2},
  };
  std::vector<Link> links = {
      {{"a1", 2}, {"a2", 2}},
      {{"b1", 2}, {"b2", 2}},
      {{"c1", 2}, {"c2", 2}},
      {{"a2", 3}, {"b1", 3}},
      {{"b2", 3}, {"c1", 3}},
      {{"a2", 4}, {"c1", 4}},
  };
  std::vector<Host> hosts = {
      {"hA1", parse_mac("00:00:00:00:00:01"), parse_ipv4("10.0.1.1"), {"a1", 1}},
      {"hA2", parse_mac("00:00:00:00:00:02"), parse_ipv4("10.0.1.2"), {"a2", 1}},
      {"hB1", parse_mac("00:00:00:00:00:03"), parse_ipv4("10.0.2.1"), {"b1", 1}},
      {"hB2", parse_mac("00:00:00:00:00:04"), parse_ipv4("10.0.2.2"), {"b2", 1}},
      {"hC1", parse_mac("00:00:00:00:00:05"), parse_ipv4("10.0.3.1"), {"c1", 1}},
      {"hC2", parse_mac("00:00:00:00:00:06"), parse_ipv4("10.0.3.2"), {"c2", 1}},
  };
  std::vector<Region> regions = {
      {"A", {parse_cidr("10.0.1.0/24")}, {"a1", "a2"}},
      {"B", {parse_cidr("10.0.2.0/24")}, {"b1", "b2"}},
      {"C", {parse_cidr("10.0.3.0/24")}, {"c1", "c2"}},
  };
  return Topology(std::move(devices), std::move(links), std::move(hosts), std::move(regions));
}

}  // namespace osdf
