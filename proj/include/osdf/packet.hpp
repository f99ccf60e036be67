#pragma once

#include <optional>
#include <string>

#include "osdf/ip.hpp"

namespace osdf {

enum class EthType { Ipv4 };

enum class IpProto : uint8_t { Icmp = 1, Tcp = 6, Udp = 17 };

inline std::string proto_name(IpProto p) {
  switch (p) {
    case IpProto::Icmp: return "icmp";
    case IpProto::Tcp: return "tcp";
    case IpProto::Udp: return "udp";
  }
  return "?";
}

struct Packet {
  Mac src_mac;
  Mac dst_mac;
  EthType eth_type = EthType::Ipv4;
  Ipv4 src_ip;
  Ipv4 dst_ip;
  IpProto ip_proto = IpProto::Tcp;
  std::optional<uint16_t> l4_src;
  std::optional<uint16_t> l4_dst;

  bool has_ports() const { return ip_proto == IpProto::Tcp || ip_proto == IpProto::Udp; }
};

/// Exact-match header constraints; an absent field is a wildcard.
struct MatchFields {
  std::optional<EthType> eth_type;
  std::optional<IpProto> ip_proto;
  std::optional<Ipv4> src_ip;
  std::optional<Ipv4> dst_ip;
  std::optional<uint16_t> l4_src;
  std::optional<uint16_t> l4_dst;

  bool operator==(const MatchFields&) const = default;

  bool matches(const Packet& pkt) const {
    if (eth_type && *eth_type != pkt.eth_type) return false;
    if (ip_proto && *ip_proto != pkt.ip_proto) return false;
    if (src_ip && *src_ip != pkt.src_ip) return false;
    if (dst_ip && *dst_ip != pkt.dst_ip) return false;
    if (l4_src && (!pkt.l4_src || *l4_src != *pkt.l4_src)) return false;
    if (l4_dst && (!pkt.l4_dst || *l4_dst != *pkt.l4_dst)) return false;
    return true;
  }

  // Fields emitted in alphabetical key order for stable diffs.
  std::string to_string() const {
    std::string out = "{";
    auto put = [&](const std::string& k, const std::string& v) {
      if (out.size() > 1) out += ',';
      out += k + "=" + v;
    };
    if (dst_ip) put("dst_ip", format_ipv4(*dst_ip));
    if (eth_type) put("eth_type", "ipv4");
    if (ip_proto) put("ip_proto", proto_name(*ip_proto));
    if (l4_dst) put("l4_dst", std::to_string(*l4_dst));
    if (l4_src) put("l4_src", std::to_string(*l4_src));
    if (src_ip) put("src_ip", format_ipv4(*src_ip));
    out += '}';
    return out;
  }
};

}  // namespace osdf
