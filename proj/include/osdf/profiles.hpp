#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "osdf/packet.hpp"

namespace osdf {

struct PortSet {
  std::vector<std::pair<uint16_t, uint16_t>> ranges;

  bool empty() const { return ranges.empty(); }
  bool contains(uint16_t p) const {
    for (auto [lo, hi] : ranges)
      if (p >= lo && p <= hi) return true;
    return false;
  }
  void add(uint16_t p) { ranges.emplace_back(p, p); }
  void add(uint16_t lo, uint16_t hi) { ranges.emplace_back(lo, hi); }
};

struct TrafficProfile {
  std::string name;
  std::optional<IpProto> proto;
  PortSet dst_ports;           // constrains l4_dst when non-empty
  bool realtime = false;       // traffic-type metadata, behavior-neutral

  // port+proto beats proto-only beats unconstrained
  int specificity() const {
    if (!proto) return 0;
    return dst_ports.empty() ? 1 : 2;
  }

  bool matches(const Packet& pkt) const {
    if (pkt.eth_type != EthType::Ipv4) return false;
    if (proto && *proto != pkt.ip_proto) return false;
    if (!dst_ports.empty() && (!pkt.l4_dst || !dst_ports.contains(*pkt.l4_dst))) return false;
    return true;
  }
};

/// Named application classes; pre-populated with web/ping/voip/video/any and
/// extensible at runtime.
class ProfileRegistry {
 public:
  ProfileRegistry() {
    TrafficProfile web{"web", IpProto::Tcp, {}, false};
    web.dst_ports.add(80);
    web.dst_ports.add(443);
    TrafficProfile ping{"ping", IpProto::Icmp, {}, false};
    TrafficProfile voip{"voip", IpProto::Udp, {}, true};
    voip.dst_ports.add(5060);
    voip.dst_ports.add(16384, 32767);
    TrafficProfile video{"video", IpProto::Udp, {}, true};
    video.dst_ports.add(5004);
    TrafficProfile any{"any", std::nullopt, {}, false};
    for (auto& p : {web, ping, voip, video, any}) add(p);
  }

  void add(TrafficProfile p) {
    if (p.name.empty()) throw ValidationError("profile needs a name");
    if (!p.dst_ports.empty() && !p.proto)
      throw ValidationError("profile '" + p.name + "' constrains ports without a protocol");
    profiles_[p.name] = std::move(p);
  }

  const TrafficProfile* find(const std::string& name) const {
    auto it = profiles_.find(name);
    return it == profiles_.end() ? nullptr : &it->second;
  }

  const TrafficProfile& get(const std::string& name) const {
    const TrafficProfile* p = find(name);
    if (!p) throw ValidationError("unknown traffic profile '" + name + "'");
    return *p;
  }

  /// Most specific matching profile; ties broken alphabetically.
  std::optional<std::string> classify(const Packet& pkt) const {
    const TrafficProfile* best = nullptr;
    for (const auto& [name, p] : profiles_) {  // map order = alphabetical
      if (!p.matches(pkt)) continue;
      if (!best || p.specificity() > best->specificity()) best = &p;
    }
    if (!best) return std::nullopt;
    return best->name;
  }

 private:
  std::map<std::string, TrafficProfile> profiles_;
};

/// `profile <name> proto <tcp|udp|icmp|ip> [ports <list|lo-hi>] [realtime]`
inline TrafficProfile parse_profile_line(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  size_t i = 0;
  auto need = [&](const char* what) -> std::string {
    if (i >= toks.size())
      throw ParseError(std::string("profile line ends early, expected ") + what);
    return toks[i++];
  };
  if (lower(need("'profile'")) != "profile") throw ParseError("profile line must start with 'profile'");
  TrafficProfile p;
  p.name = need("profile name");
  if (lower(need("'proto'")) != "proto") throw ParseError("expected 'proto'");
  std::string proto = lower(need("protocol"));
  if (proto == "tcp") p.proto = IpProto::Tcp;
  else if (proto == "udp") p.proto = IpProto::Udp;
  else if (proto == "icmp") p.proto = IpProto::Icmp;
  else if (proto == "ip") p.proto = std::nullopt;
  else throw ParseError("unknown protocol '" + proto + "'");
  while (i < toks.size()) {
    std::string kw = lower(toks[i++]);
    if (kw == "realtime") {
      p.realtime = true;
    } else if (kw == "ports") {
      std::string spec = need("port list");
      std::istringstream ps(spec);
      for (std::string item; std::getline(ps, item, ',');) {
        auto dash = item.find('-');
        auto to_port = [&](const std::string& s) -> uint16_t {
          if (s.empty()) throw ParseError("bad port in '" + spec + "'");
          long v = 0;
          for (char c : s) {
            if (c < '0' || c > '9') throw ParseError("bad port in '" + spec + "'");
            v = v * 10 + (c - '0');
            if (v > 65535) throw ParseError("port out of range in '" + spec + "'");
          }
          return static_cast<uint16_t>(v);
        };
        if (dash == std::string::npos) {
          p.dst_ports.add(to_port(item));
        } else {
          uint16_t lo = to_port(item.substr(0, dash));
          uint16_t hi = to_port(item.substr(dash + 1));
          if (hi < lo) throw ParseError("empty port range in '" + spec + "'");
          p.dst_ports.add(lo, hi);
        }
      }
    } else {
      throw ParseError("unexpected token '" + kw + "' in profile line");
    }
  }
  if (!p.dst_ports.empty() && !p.proto)
    throw ParseError("profile '" + p.name + "' cannot constrain ports with proto ip");
  return p;
}

/// Match fields for a flow's two directions. The forward selector pins the
/// packet's host pair plus the profile's protocol/port constraints; the
/// reverse selector swaps the addresses and moves the port constraint to the
/// source port.
inline std::pair<MatchFields, MatchFields> build_selectors(const TrafficProfile& profile,
                                                           const Packet& pkt) {
  if (!profile.matches(pkt))
    throw ValidationError("packet does not match profile '" + profile.name + "'");
  MatchFields fwd;
  fwd.eth_type = EthType::Ipv4;
  fwd.src_ip = pkt.src_ip;
  fwd.dst_ip = pkt.dst_ip;
  if (profile.proto) fwd.ip_proto = pkt.ip_proto;
  if (!profile.dst_ports.empty()) fwd.l4_dst = *pkt.l4_dst;
  MatchFields rev = fwd;
  rev.src_ip = pkt.dst_ip;
  rev.dst_ip = pkt.src_ip;
  rev.l4_dst.reset();
  if (fwd.l4_dst) rev.l4_src = *fwd.l4_dst;
  return {fwd, rev};
}

}  // namespace osdf
